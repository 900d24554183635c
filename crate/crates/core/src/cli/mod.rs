//! Command-line front end.

pub mod config;
pub mod run;
pub mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{parse_literal, MeshSource, RunConfig};
pub use run::{export_mesh, run_order_study, run_scenario, Outcome};
pub use verify::{run_checks, CheckResult, Fault};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "fvflow", version, about = "Least-squares and cell-centered finite volume flow solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and write its artifacts.
    Run {
        /// sinusoidal, parabolic, cylinder, airfoil, cc-airfoil, boundary-layer or blasius-ref
        scenario: Option<String>,
        #[command(flatten)]
        opts: RunFlags,
    },
    /// Convergence or patch-rescaling study.
    OrderStudy {
        /// cc-patch, sinusoidal, parabolic, cylinder or cc-airfoil
        study: String,
        #[command(flatten)]
        opts: RunFlags,
    },
    /// Built-in consistency checks.
    Verify {
        /// Inject a defect the checks must catch.
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Write a mesh as Triangle files and VTK.
    ExportMesh {
        #[command(flatten)]
        opts: RunFlags,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FaultArg {
    Hessian,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolverArg {
    Pcg,
    Gmres,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FarfieldArg {
    Paper,
    Corrected,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StreamArg {
    Exact,
    Vortex,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PatchArg {
    Equilateral,
    Right,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunFlags {
    /// Key-value config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Triangle mesh basename (reads BASE.node and BASE.ele).
    #[arg(long)]
    pub mesh: Option<String>,
    #[arg(long)]
    pub node: Option<String>,
    #[arg(long)]
    pub ele: Option<String>,
    /// Generated mesh, e.g. square:12, rect:65x33, ogrid:118, ogrid:52,98,173.
    #[arg(long)]
    pub grid: Option<String>,
    /// Cells per side of the coarsest sinusoidal mesh.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub refinements: Option<String>,
    /// Length scale used by literals such as `2pia`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long)]
    pub r_far: Option<String>,
    /// Newton tolerance on the residual.
    #[arg(long)]
    pub tol: Option<String>,
    /// Newton step damping in (0, 1].
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    #[arg(long)]
    pub gmres_restart: Option<String>,
    #[arg(long)]
    pub gmres_cap: Option<String>,
    #[arg(long, value_enum)]
    pub farfield_mode: Option<FarfieldArg>,
    /// Outer stream function of the cell-centered airfoil.
    #[arg(long, value_enum)]
    pub farfield_stream: Option<StreamArg>,
    /// Relaxation factor of the cell-centered sweeps.
    #[arg(long)]
    pub omega: Option<String>,
    /// Harmonic test case 1, 2 or 3 of the patch study.
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long, value_enum)]
    pub patch: Option<PatchArg>,
    #[arg(long)]
    pub rescales: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn lower<T: std::fmt::Debug>(v: Option<T>) -> Option<String> {
    v.map(|x| format!("{x:?}").to_lowercase())
}

impl RunFlags {
    /// Merge the config file (if any) with the flags.
    pub fn to_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::new(),
        };
        let pairs: [(&str, Option<String>); 23] = [
            ("mesh", self.mesh.clone()),
            ("node", self.node.clone()),
            ("ele", self.ele.clone()),
            ("grid", self.grid.clone()),
            ("n", self.n.clone()),
            ("refinements", self.refinements.clone()),
            ("a", self.a.clone()),
            ("gamma", self.gamma.clone()),
            ("alpha", self.alpha.clone()),
            ("k", self.k.clone()),
            ("r_far", self.r_far.clone()),
            ("tol", self.tol.clone()),
            ("sigma", self.sigma.clone()),
            ("solver", lower(self.solver)),
            ("gmres_restart", self.gmres_restart.clone()),
            ("gmres_cap", self.gmres_cap.clone()),
            ("farfield_mode", lower(self.farfield_mode)),
            ("farfield_stream", lower(self.farfield_stream)),
            ("omega", self.omega.clone()),
            ("case", self.case.clone()),
            ("patch", lower(self.patch)),
            ("rescales", self.rescales.clone()),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
        ];
        for (k, v) in pairs {
            if v.is_some() {
                cfg.set(k, v)?;
            }
        }
        Ok(cfg)
    }
}

fn report(outcome: Result<Outcome>) -> ExitCode {
    match outcome {
        Ok(o) => {
            for l in &o.lines {
                println!("{l}");
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: solver did not converge");
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Execute a parsed command line.
pub fn execute(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Run { scenario, opts } => report(opts.to_config().and_then(|cfg| {
            let name = scenario
                .or_else(|| cfg.scenario().map(str::to_string))
                .ok_or_else(|| crate::Error::Config("no scenario given".into()))?;
            run_scenario(&name, &cfg)
        })),
        Command::OrderStudy { study, opts } => {
            report(opts.to_config().and_then(|cfg| run_order_study(&study, &cfg)))
        }
        Command::ExportMesh { opts } => report(opts.to_config().and_then(|cfg| export_mesh(&cfg))),
        Command::Verify { inject_fault } => {
            let fault = inject_fault.map(|FaultArg::Hessian| Fault::HessianEntry);
            match run_checks(fault) {
                Ok(checks) => {
                    for c in &checks {
                        println!("{}", c.line());
                    }
                    if checks.iter().all(|c| c.passed) {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}

pub fn main() -> ExitCode {
    execute(Cli::parse())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_examples() {
        let c = Cli::try_parse_from(["fvflow", "run", "sinusoidal", "--n", "12", "--k", "6pi"]).unwrap();
        let Command::Run { scenario, opts } = c.command else { panic!() };
        assert_eq!(scenario.as_deref(), Some("sinusoidal"));
        let cfg = opts.to_config().unwrap();
        assert!((cfg.number("k", None).unwrap().unwrap() - 6.0 * std::f64::consts::PI).abs() < 1e-15);
        let c = Cli::try_parse_from(["fvflow", "run", "cylinder", "--gamma", "2pia", "--grid", "ogrid:118"]).unwrap();
        let Command::Run { opts, .. } = c.command else { panic!() };
        let cfg = opts.to_config().unwrap();
        assert!((cfg.number("gamma", Some(0.5)).unwrap().unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!(Cli::try_parse_from(["fvflow", "run", "parabolic", "--k", "-0.25", "--solver", "pcg"]).is_ok());
        assert!(Cli::try_parse_from(["fvflow", "verify", "--inject-fault", "hessian"]).is_ok());
        assert!(Cli::try_parse_from(["fvflow", "run", "x", "--solver", "lu"]).is_err());
    }

    #[test]
    fn unknown_scenario_is_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new();
        cfg.set("out", Some(dir.path().display())).unwrap();
        assert!(run_scenario("nope", &cfg).is_err());
        assert!(run_order_study("nope", &cfg).is_err());
    }
}
