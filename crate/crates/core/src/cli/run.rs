//! Scenario runners behind `run` and `order-study`.

use std::path::{Path, PathBuf};

use super::config::{parse_pair, split_grid, MeshSource, RunConfig};
use crate::analytic::{stagnation_points, BlasiusProfile, KarmanTrefftz, Stagnation};
use crate::cc_laplace::{order_study, CcOptions, HarmonicCase, PatchKind};
use crate::error::{Error, Result};
use crate::lsq::NewtonState;
use crate::mesh::{
    gen_equilateral_grid, gen_jittered_square, gen_structured_rect, gen_structured_square, load_triangle_files,
    refine_uniform, write_triangle_mesh, write_vtk, written_marker_map, Grading, Mesh, OgridStyle, StructuredStyle,
    VtkData,
};
use crate::output::{append_manifest, CsvTable, ManifestEntry};
use crate::scenarios::{
    airfoil_mesh, circulation_study, error_table, isotropic_layers, solve_airfoil, solve_boundary_layer, solve_cylinder,
    solve_parabolic_profile, solve_sinusoidal_on, solve_sinusoidal_square, study_orders, AirfoilLsqOptions,
    BoundaryLayerOptions, CylinderOptions, ErrorReport, ParabolicOptions, SinusoidalOptions, StagnationFinding,
    StreamFarfield, CYLINDER_GRIDS,
};

/// Scenarios accepted by `run`.
pub const SCENARIOS: &[&str] = &[
    "sinusoidal",
    "parabolic",
    "cylinder",
    "airfoil",
    "cc-airfoil",
    "boundary-layer",
    "blasius-ref",
];

/// Studies accepted by `order-study`.
pub const STUDIES: &[&str] = &["cc-patch", "sinusoidal", "parabolic", "cylinder", "cc-airfoil"];

/// What a run printed and whether it succeeded.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub ok: bool,
}

impl Outcome {
    fn say(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

/// Writes artifacts and records one manifest line for each.
struct Artifacts {
    dir: PathBuf,
    scenario: String,
    params: Vec<(String, String)>,
    entries: Vec<ManifestEntry>,
}

impl Artifacts {
    fn new(cfg: &RunConfig, scenario: &str) -> Result<Self> {
        let dir = cfg.out_dir();
        std::fs::create_dir_all(&dir)?;
        let params = ["grid", "n", "mesh", "node", "ele", "refinements", "gamma", "alpha", "k", "tol", "sigma", "solver",
            "gmres_restart", "gmres_cap", "farfield_mode", "farfield_stream", "omega", "case", "patch", "rescales"]
            .iter()
            .filter_map(|k| cfg.raw(k).map(|v| (k.to_string(), v.replace(' ', ""))))
            .collect();
        Ok(Self { dir, scenario: scenario.into(), params, entries: Vec::new() })
    }

    fn entry(&self, path: &Path, state: Option<&NewtonState>) -> ManifestEntry {
        let mut e = ManifestEntry::new(path, self.scenario.clone());
        for (k, v) in &self.params {
            e = e.param(k, v);
        }
        if let Some(s) = state {
            e.iterations = Some(s.iterations);
            e.final_functional = Some(s.functional);
        }
        e
    }

    fn csv(&mut self, name: &str, table: &CsvTable, state: Option<&NewtonState>) -> Result<()> {
        let path = self.dir.join(name);
        table.write(&path)?;
        self.entries.push(self.entry(&path, state));
        Ok(())
    }

    fn vtk(&mut self, name: &str, mesh: &Mesh, data: &VtkData, state: Option<&NewtonState>) -> Result<()> {
        let path = self.dir.join(name);
        write_vtk(mesh, &path, &self.scenario, data)?;
        self.entries.push(self.entry(&path, state));
        Ok(())
    }

    fn finish(self) -> Result<()> {
        append_manifest(&self.dir, &self.entries)
    }
}

fn velocity_vtk(state: &NewtonState, names: &[&str]) -> VtkData {
    let f = &state.field;
    let mut d = VtkData::default();
    for (c, n) in names.iter().enumerate() {
        d = d.scalar(n, f.component(c));
    }
    d.vector("velocity", (0..f.num_nodes()).map(|i| [f.get(i, 0), f.get(i, 1)]).collect())
}

fn report_line(label: &str, r: &ErrorReport) -> String {
    let mut s = format!("{label}: nodes={} h={:.4e}", r.num_nodes, r.h);
    for c in &r.components {
        s.push_str(&format!(" {}: l2={:.6e} linf={:.6e}", c.name, c.l2, c.linf));
    }
    s
}

fn state_line(label: &str, s: &NewtonState) -> String {
    format!(
        "{label}: status={:?} newton_iterations={} I={:.6e}",
        s.status, s.iterations, s.functional
    )
}

/// Observed orders between consecutive reports.
pub fn order_table(reports: &[ErrorReport]) -> CsvTable {
    let mut header = vec!["level".to_string()];
    if let Some(r) = reports.first() {
        for c in &r.components {
            header.push(format!("{}_l2_order", c.name));
            header.push(format!("{}_linf_order", c.name));
        }
    }
    let mut t = CsvTable::new(header);
    for (i, level) in study_orders(reports).iter().enumerate() {
        let mut row = vec![(i + 1) as f64];
        for &(l2, linf) in level {
            row.push(l2);
            row.push(linf);
        }
        t.push(row);
    }
    t
}

fn load_files(node: &Path, ele: &Path) -> Result<Mesh> {
    load_triangle_files(node, ele, &written_marker_map())
}

fn grid_count(cfg: &RunConfig, kind: &str, default: usize) -> Result<usize> {
    match cfg.raw("grid") {
        None => Ok(default),
        Some(g) => {
            let (k, v) = split_grid(g)?;
            if k != kind {
                return Err(Error::Config(format!("this scenario takes --grid {kind}:N (got '{g}')")));
            }
            v.parse().map_err(|_| Error::Config(format!("bad grid size '{v}'")))
        }
    }
}

fn grid_pair(cfg: &RunConfig, kind: &str, default: (usize, usize)) -> Result<(usize, usize)> {
    match cfg.raw("grid") {
        None => Ok(default),
        Some(g) => {
            let (k, v) = split_grid(g)?;
            if k != kind {
                return Err(Error::Config(format!("this scenario takes --grid {kind}:NxM (got '{g}')")));
            }
            parse_pair(v)
        }
    }
}

/// `ogrid:NT` or `ogrid:NTxNR`; a missing radial count comes from `layers`.
fn ogrid_size(cfg: &RunConfig, default: (usize, usize), layers: impl Fn(usize) -> usize) -> Result<(usize, usize)> {
    match cfg.raw("grid") {
        None => Ok(default),
        Some(g) => {
            let (k, v) = split_grid(g)?;
            if k != "ogrid" {
                return Err(Error::Config(format!("this scenario takes --grid ogrid:N[xM] (got '{g}')")));
            }
            if v.contains('x') {
                parse_pair(v)
            } else {
                let n: usize = v.parse().map_err(|_| Error::Config(format!("bad grid size '{v}'")))?;
                Ok((n, layers(n)))
            }
        }
    }
}

/// Execute `scenario` with `cfg`, writing artifacts under the output
/// directory.
pub fn run_scenario(scenario: &str, cfg: &RunConfig) -> Result<Outcome> {
    match scenario {
        "sinusoidal" => run_sinusoidal(cfg),
        "parabolic" => run_parabolic(cfg),
        "cylinder" => run_cylinder(cfg),
        "airfoil" => run_airfoil(cfg),
        "cc-airfoil" => run_cc_airfoil(cfg),
        "boundary-layer" => run_boundary_layer(cfg),
        "blasius-ref" => run_blasius(cfg),
        other => Err(Error::Config(format!(
            "unknown scenario '{other}' (expected one of {})",
            SCENARIOS.join(", ")
        ))),
    }
}

/// Execute an order study.
pub fn run_order_study(study: &str, cfg: &RunConfig) -> Result<Outcome> {
    match study {
        "cc-patch" => run_patch_study(cfg),
        "sinusoidal" | "parabolic" => {
            if cfg.count_or("refinements", 3)? < 1 || matches!(cfg.mesh_source()?, MeshSource::Files { .. }) {
                return Err(Error::Config("an order study needs at least 2 levels".into()));
            }
            let mut o = run_scenario(study, cfg)?;
            o.lines.retain(|l| !l.starts_with("level"));
            Ok(o)
        }
        "cylinder" => run_cylinder_pair(cfg),
        "cc-airfoil" => run_cc_airfoil(cfg),
        other => Err(Error::Config(format!(
            "unknown study '{other}' (expected one of {})",
            STUDIES.join(", ")
        ))),
    }
}

fn orders_lines(out: &mut Outcome, reports: &[ErrorReport]) {
    for (i, level) in study_orders(reports).iter().enumerate() {
        let mut s = format!("order {}->{}:", i, i + 1);
        for (c, &(l2, linf)) in reports[0].components.iter().zip(level) {
            s.push_str(&format!(" {}: l2={l2:.3} linf={linf:.3}", c.name));
        }
        out.say(s);
    }
}

fn run_sinusoidal(cfg: &RunConfig) -> Result<Outcome> {
    let base = SinusoidalOptions::default();
    let opts = SinusoidalOptions {
        n0: match cfg.raw("n") {
            Some(_) => cfg.count_or("n", base.n0)?,
            None => grid_count(cfg, "square", base.n0)?,
        },
        refinements: cfg.count_or("refinements", base.refinements)?,
        k: cfg.number_or("k", None, base.k)?,
        newton: cfg.newton(base.newton)?,
        ..base
    };
    let levels = match cfg.mesh_source()? {
        MeshSource::Files { node, ele } => {
            if !(opts.k > 0.0) {
                return Err(Error::InvalidParameter(format!("wavenumber must be positive (got {})", opts.k)));
            }
            vec![solve_sinusoidal_on(load_files(&node, &ele)?, opts.k, true, &opts.newton)?]
        }
        MeshSource::Generated(_) => solve_sinusoidal_square(&opts)?,
    };
    let mut art = Artifacts::new(cfg, "sinusoidal")?;
    let mut out = Outcome { ok: true, ..Default::default() };
    let reports: Vec<ErrorReport> = levels.iter().map(|l| l.report.clone()).collect();
    let mut table = error_table(&reports);
    table.header.extend(["unknowns", "newton_iterations", "first_linear_iterations"].map(String::from));
    for (row, l) in table.rows.iter_mut().zip(&levels) {
        row.extend([l.unknowns as f64, l.state.iterations as f64, l.first_linear_iterations as f64]);
    }
    for (i, l) in levels.iter().enumerate() {
        out.say(state_line(&format!("level {i}"), &l.state));
        out.say(report_line(&format!("level {i}"), &l.report));
        out.ok &= l.state.converged();
        art.csv(&format!("history_level{i}.csv"), &l.state.history_csv(), Some(&l.state))?;
    }
    let last = levels.last().ok_or_else(|| Error::Solver("no levels solved".into()))?;
    art.csv("errors.csv", &table, Some(&last.state))?;
    if levels.len() > 1 {
        art.csv("orders.csv", &order_table(&reports), Some(&last.state))?;
        orders_lines(&mut out, &reports);
    }
    art.vtk("field.vtk", &last.mesh, &velocity_vtk(&last.state, &["u", "v"]), Some(&last.state))?;
    art.finish()?;
    Ok(out)
}

fn run_parabolic(cfg: &RunConfig) -> Result<Outcome> {
    let base = ParabolicOptions::default();
    let a = cfg.number_or("a", None, base.a)?;
    let (nx, ny) = grid_pair(cfg, "rect", (base.nx, base.ny))?;
    let opts = ParabolicOptions {
        a,
        k: cfg.number_or("k", Some(a), base.k)?,
        nx,
        ny,
        refinements: cfg.count_or("refinements", base.refinements)?,
        newton: cfg.newton(base.newton)?,
    };
    let meshes = match cfg.mesh_source()? {
        MeshSource::Files { node, ele } => vec![load_files(&node, &ele)?],
        MeshSource::Generated(_) => opts.meshes()?,
    };
    let results = crate::scenarios::fan_out(meshes.clone(), |m| solve_parabolic_profile(&m, &opts))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut art = Artifacts::new(cfg, "parabolic")?;
    let mut out = Outcome { ok: true, ..Default::default() };
    for (i, r) in results.iter().enumerate() {
        out.say(state_line(&format!("level {i}"), &r.state));
        out.say(report_line(&format!("level {i}"), &r.report));
        out.ok &= r.state.converged();
        art.csv(&format!("history_level{i}.csv"), &r.state.history_csv(), Some(&r.state))?;
    }
    let reports: Vec<ErrorReport> = results.iter().map(|r| r.report.clone()).collect();
    let last = results.last().ok_or_else(|| Error::Solver("no levels solved".into()))?;
    art.csv("errors.csv", &error_table(&reports), Some(&last.state))?;
    if results.len() > 1 {
        art.csv("orders.csv", &order_table(&reports), Some(&last.state))?;
        orders_lines(&mut out, &reports);
    }
    art.csv("profile.csv", &last.profile, Some(&last.state))?;
    art.vtk("field.vtk", meshes.last().unwrap(), &velocity_vtk(&last.state, &["u", "v"]), Some(&last.state))?;
    art.finish()?;
    Ok(out)
}

fn cylinder_options(cfg: &RunConfig) -> Result<CylinderOptions> {
    let base = CylinderOptions::default();
    let a = cfg.number_or("a", None, base.a)?;
    Ok(CylinderOptions {
        a,
        gamma: cfg.number_or("gamma", Some(a), base.gamma)?,
        r_far: cfg.number_or("r_far", Some(a), base.r_far)?,
        newton: cfg.newton(base.newton)?,
        ..base
    })
}

fn cylinder_layers(n: usize, opts: &CylinderOptions) -> usize {
    CYLINDER_GRIDS
        .iter()
        .find(|g| g.0 == n)
        .map_or_else(|| isotropic_layers(n, opts.a, opts.r_far), |g| g.1)
}

fn stagnation_table(s: &StagnationFinding, opts: &CylinderOptions) -> (CsvTable, String) {
    let exact = stagnation_points(opts.a, opts.gamma, opts.u_inf);
    match (*s, exact) {
        (StagnationFinding::Surface { angles_deg, speeds }, _) => {
            let mut t = CsvTable::new(["angle_deg", "speed", "angle_exact_deg"]);
            let ex = match exact {
                Stagnation::Surface(angles) => angles.map(f64::to_degrees),
                _ => [f64::NAN; 2],
            };
            for k in 0..2 {
                t.push(vec![angles_deg[k], speeds[k], ex[k]]);
            }
            let line = format!(
                "stagnation on surface at {:.4} and {:.4} deg (exact {:.4}, {:.4})",
                angles_deg[0], angles_deg[1], ex[0], ex[1]
            );
            (t, line)
        }
        (StagnationFinding::OffBody { point, speed }, _) => {
            let mut t = CsvTable::new(["x", "y", "speed", "y_exact"]);
            let ye = match exact {
                Stagnation::OffBody(point) => point.y,
                _ => f64::NAN,
            };
            t.push(vec![point.x, point.y, speed, ye]);
            (t, format!("stagnation off the body at ({:.4}, {:.4}) (exact y {:.4})", point.x, point.y, ye))
        }
    }
}

fn run_cylinder(cfg: &RunConfig) -> Result<Outcome> {
    let opts = cylinder_options(cfg)?;
    let mesh = match cfg.mesh_source()? {
        MeshSource::Files { node, ele } => load_files(&node, &ele)?,
        MeshSource::Generated(_) => {
            let (nt, nr) = ogrid_size(cfg, CYLINDER_GRIDS[0], |n| cylinder_layers(n, &opts))?;
            opts.mesh(nt, nr)?
        }
    };
    let r = solve_cylinder(&mesh, &opts)?;
    let mut art = Artifacts::new(cfg, "cylinder")?;
    let mut out = Outcome { ok: r.state.converged(), ..Default::default() };
    out.say(state_line("cylinder", &r.state));
    out.say(report_line("cylinder", &r.report));
    let (stag, line) = stagnation_table(&r.stagnation, &opts);
    out.say(line);
    out.say(format!("max surface |u.n| = {:.3e}", r.tangency_residual));
    art.csv("history.csv", &r.state.history_csv(), Some(&r.state))?;
    art.csv("errors.csv", &error_table(std::slice::from_ref(&r.report)), Some(&r.state))?;
    art.csv("stagnation.csv", &stag, Some(&r.state))?;
    art.vtk("field.vtk", &mesh, &velocity_vtk(&r.state, &["u", "v"]), Some(&r.state))?;
    art.finish()?;
    Ok(out)
}

fn run_cylinder_pair(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.raw("grid").is_some() || !matches!(cfg.mesh_source()?, MeshSource::Generated(None)) {
        return Err(Error::Config("the cylinder study uses the two reference O-grids".into()));
    }
    let opts = cylinder_options(cfg)?;
    let runs = crate::scenarios::fan_out(CYLINDER_GRIDS.to_vec(), |(nt, nr)| {
        let m = opts.mesh(nt, nr)?;
        solve_cylinder(&m, &opts)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut art = Artifacts::new(cfg, "cylinder")?;
    let mut out = Outcome { ok: true, ..Default::default() };
    for (r, g) in runs.iter().zip(CYLINDER_GRIDS) {
        out.ok &= r.state.converged();
        out.say(report_line(&format!("grid {}x{}", g.0, g.1), &r.report));
    }
    let reports: Vec<ErrorReport> = runs.iter().map(|r| r.report.clone()).collect();
    let mut ratios = CsvTable::new(["component", "l2_ratio", "linf_ratio"]);
    for (k, (c, f)) in reports[0].components.iter().zip(&reports[1].components).enumerate() {
        ratios.push(vec![k as f64, f.l2 / c.l2, f.linf / c.linf]);
        out.say(format!("{} fine/coarse: l2 {:.3} linf {:.3}", c.name, f.l2 / c.l2, f.linf / c.linf));
    }
    let last = &runs[1].state;
    art.csv("errors.csv", &error_table(&reports), Some(last))?;
    art.csv("ratios.csv", &ratios, Some(last))?;
    art.finish()?;
    Ok(out)
}

fn run_airfoil(cfg: &RunConfig) -> Result<Outcome> {
    let kt = KarmanTrefftz::reference();
    let base = AirfoilLsqOptions::default();
    let opts = AirfoilLsqOptions {
        alpha: cfg.number_or("alpha", Some(kt.a), base.alpha)?,
        farfield_mode: cfg.farfield_mode()?,
        r_far: cfg.number_or("r_far", Some(kt.a), base.r_far)?,
        newton: cfg.newton(base.newton)?,
        ..base
    };
    let mesh = match cfg.mesh_source()? {
        MeshSource::Files { node, ele } => load_files(&node, &ele)?,
        MeshSource::Generated(_) => {
            let layers = |n| isotropic_layers(n, kt.a, opts.r_far);
            let (nt, nr) = ogrid_size(cfg, (96, layers(96)), layers)?;
            airfoil_mesh(&kt, nt, nr, opts.r_far, OgridStyle::Radial)?
        }
    };
    let r = solve_airfoil(&mesh, &kt, &opts)?;
    let mut art = Artifacts::new(cfg, "airfoil")?;
    let mut out = Outcome { ok: r.state.converged(), ..Default::default() };
    out.say(state_line("airfoil", &r.state));
    out.say(report_line("airfoil", &r.report));
    out.say(format!(
        "gamma = {:.9} kutta residual = {:.3e}",
        kt.kutta_circulation(opts.alpha),
        r.kutta_residual
    ));
    art.csv("history.csv", &r.state.history_csv(), Some(&r.state))?;
    art.csv("errors.csv", &error_table(std::slice::from_ref(&r.report)), Some(&r.state))?;
    art.csv("surface.csv", &r.surface, Some(&r.state))?;
    art.vtk("field.vtk", &mesh, &velocity_vtk(&r.state, &["u", "v"]), Some(&r.state))?;
    art.finish()?;
    Ok(out)
}

/// Surface counts of the default circulation study.
pub const CIRCULATION_COUNTS: [usize; 3] = [52, 98, 173];

fn run_cc_airfoil(cfg: &RunConfig) -> Result<Outcome> {
    let kt = KarmanTrefftz::reference();
    let alpha = cfg.number_or("alpha", Some(kt.a), 15f64.to_radians())?;
    let r_far = cfg.number_or("r_far", Some(kt.a), 5.0)?;
    let counts: Vec<usize> = match cfg.raw("grid") {
        None => CIRCULATION_COUNTS.to_vec(),
        Some(g) => {
            let (k, v) = split_grid(g)?;
            if k != "ogrid" {
                return Err(Error::Config(format!("cc-airfoil takes --grid ogrid:N1,N2,... (got '{g}')")));
            }
            v.split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::Config(format!("bad surface count '{s}'"))))
                .collect::<Result<_>>()?
        }
    };
    let farfield = match cfg.raw("farfield_stream") {
        None | Some("exact") => StreamFarfield::Exact,
        Some("vortex") => StreamFarfield::Vortex,
        Some(o) => return Err(Error::Config(format!("farfield stream must be exact or vortex (got '{o}')"))),
    };
    let cc = CcOptions {
        omega: cfg.number_or("omega", None, 1.8)?,
        ..CcOptions::default()
    };
    if !(cc.omega > 0.0 && cc.omega < 2.0) {
        return Err(Error::Config("relaxation factor must lie in (0, 2)".into()));
    }
    let study = circulation_study(&kt, alpha, &counts, r_far, farfield, &cc)?;
    let mut art = Artifacts::new(cfg, "cc-airfoil")?;
    let mut out = Outcome { ok: study.levels.iter().all(|l| l.converged), ..Default::default() };
    for l in &study.levels {
        out.say(format!(
            "surface points {}: gamma = {:.9} error = {:.3e} sweeps = {}",
            l.surface_points, l.circulation, l.error, l.sweeps
        ));
    }
    out.say(format!("exact gamma = {:.9}; error monotone: {}", study.exact, study.monotone()));
    art.csv("circulation.csv", &study.to_csv(), None)?;
    art.finish()?;
    Ok(out)
}

fn run_boundary_layer(cfg: &RunConfig) -> Result<Outcome> {
    let base = BoundaryLayerOptions::default();
    let (nx, ny) = grid_pair(cfg, "rect", (base.nx, base.ny))?;
    let solver = cfg.linear_solver(base.solver())?;
    let gmres = match solver {
        crate::linsolve::LinearSolver::Gmres { settings, .. } => settings,
        _ => return Err(Error::Config("the boundary layer runs with GMRES".into())),
    };
    if !matches!(cfg.mesh_source()?, MeshSource::Generated(_)) {
        return Err(Error::Config("the boundary layer builds its own graded grid".into()));
    }
    let newton = cfg.newton(base.newton)?;
    let opts = BoundaryLayerOptions { nx, ny, gmres, newton, ..base };
    let r = solve_boundary_layer(&opts)?;
    let mut art = Artifacts::new(cfg, "boundary-layer")?;
    let mut out = Outcome { ok: r.state.converged(), ..Default::default() };
    out.say(state_line("boundary layer", &r.state));
    out.say(report_line("boundary layer", &r.report));
    out.say(format!(
        "u profile at x = {:.4}: max |u - u_B| = {:.4}; wall omega over [{}, {}]: max rel dev = {:.4}",
        r.comparison.x_profile, r.comparison.u_profile_dev, r.comparison.wall_range.0, r.comparison.wall_range.1,
        r.comparison.wall_omega_dev
    ));
    out.say(format!("continuity residual = {:.4e}", r.continuity));
    art.csv("history.csv", &r.state.history_csv(), Some(&r.state))?;
    art.csv("errors.csv", &error_table(std::slice::from_ref(&r.report)), Some(&r.state))?;
    art.csv("profile.csv", &r.comparison.profile, Some(&r.state))?;
    art.csv("wall.csv", &r.comparison.wall, Some(&r.state))?;
    art.vtk("field.vtk", &r.mesh, &velocity_vtk(&r.state, &["u", "v", "omega"]), Some(&r.state))?;
    art.finish()?;
    Ok(out)
}

fn run_blasius(cfg: &RunConfig) -> Result<Outcome> {
    let p = BlasiusProfile::standard()?;
    let mut art = Artifacts::new(cfg, "blasius-ref")?;
    let mut out = Outcome { ok: true, ..Default::default() };
    out.say(format!("f''(0) = {:.8}", p.fpp0));
    art.csv("blasius.csv", &p.to_csv(), None)?;
    art.finish()?;
    Ok(out)
}

fn run_patch_study(cfg: &RunConfig) -> Result<Outcome> {
    let kind = match cfg.raw("patch").unwrap_or("equilateral") {
        "equilateral" => PatchKind::Equilateral,
        "right" => PatchKind::Right,
        o => return Err(Error::Config(format!("patch must be equilateral or right (got '{o}')"))),
    };
    let case_n = cfg.count_or("case", 2)?;
    let case = HarmonicCase::from_number(case_n)
        .ok_or_else(|| Error::Config(format!("case must be 1, 2 or 3 (got {case_n})")))?;
    let rescales = cfg.count_or("rescales", 8)?;
    let patch = kind.build()?;
    let study = order_study(&patch, |p| case.eval(p), rescales)?;
    let mut art = Artifacts::new(cfg, "cc-patch")?;
    let mut out = Outcome { ok: true, ..Default::default() };
    for (i, l) in study.levels.iter().enumerate() {
        out.say(format!("level {i}: dx={:.6e} e_delta={:.6e} e_phi={:.6e}", l.dx, l.e_delta.abs(), l.e_phi));
    }
    out.say(format!(
        "slopes (finest pair): e_delta {:.4} e_phi {:.4}",
        study.e_delta_order(),
        study.e_phi_order()
    ));
    let mut t = study.to_csv();
    t.header.extend(["e_delta_slope", "e_phi_slope"].map(String::from));
    let n = t.rows.len();
    for i in 0..n {
        let (sd, sp) = if i == 0 {
            (f64::NAN, f64::NAN)
        } else {
            let (a, b) = (&study.levels[i - 1], &study.levels[i]);
            let r = (a.dx / b.dx).ln();
            ((a.e_delta.abs() / b.e_delta.abs()).ln() / r, (a.e_phi / b.e_phi).ln() / r)
        };
        t.rows[i].extend([sd, sp]);
    }
    art.csv("order.csv", &t, None)?;
    art.finish()?;
    Ok(out)
}

/// Build the mesh named by `--grid` (or read mesh files) and write it as
/// Triangle files and VTK under the output directory.
pub fn export_mesh(cfg: &RunConfig) -> Result<Outcome> {
    let mesh = match cfg.mesh_source()? {
        MeshSource::Files { node, ele } => load_files(&node, &ele)?,
        MeshSource::Generated(None) => return Err(Error::Config("export-mesh needs --grid or mesh files".into())),
        MeshSource::Generated(Some(g)) => generated_mesh(&g)?,
    };
    let dir = cfg.out_dir();
    std::fs::create_dir_all(&dir)?;
    let mut art = Artifacts::new(cfg, "export-mesh")?;
    let (node, ele) = (dir.join("mesh.node"), dir.join("mesh.ele"));
    write_triangle_mesh(&mesh, &node, &ele)?;
    art.entries.push(art.entry(&node, None));
    art.entries.push(art.entry(&ele, None));
    let tags: Vec<f64> = mesh
        .all_node_tags()
        .iter()
        .map(|t| t.first().map_or(0.0, |tag| tag as usize as f64 + 1.0))
        .collect();
    art.vtk("mesh.vtk", &mesh, &VtkData::default().scalar("marker", tags), None)?;
    art.finish()?;
    Ok(Outcome {
        ok: true,
        lines: vec![format!("mesh: {} nodes, {} triangles", mesh.num_nodes(), mesh.num_triangles())],
    })
}

/// Generators reachable from `--grid`: `square:N`, `equilateral:RxC`,
/// `rect:NXxNY` (unit square), `jitter:N`, `ogrid:NTxNR` (cylinder),
/// `airfoil:NT[xNR]`, `bl:NXxNY` (boundary-layer nodes).
pub fn generated_mesh(spec: &str) -> Result<Mesh> {
    let (kind, size) = split_grid(spec)?;
    let count = || size.parse::<usize>().map_err(|_| Error::Config(format!("bad grid size '{size}'")));
    match kind {
        "square" => gen_structured_square(count()?, StructuredStyle::Right),
        "equilateral" => {
            let (r, c) = parse_pair(size)?;
            gen_equilateral_grid(r, c, 1.0 / c.max(1) as f64)
        }
        "rect" => {
            let (nx, ny) = parse_pair(size)?;
            gen_structured_rect(nx, ny, (0.0, 1.0), (0.0, 1.0), Grading::Uniform)
        }
        "jitter" => gen_jittered_square(count()?, 0.25, 1),
        "ogrid" => {
            let (nt, nr) = parse_pair(size)?;
            CylinderOptions::default().mesh(nt, nr)
        }
        "airfoil" => {
            let kt = KarmanTrefftz::reference();
            let (nt, nr) = if size.contains('x') {
                parse_pair(size)?
            } else {
                let n = count()?;
                (n, isotropic_layers(n, kt.a, 5.0))
            };
            airfoil_mesh(&kt, nt, nr, 5.0, OgridStyle::Radial)
        }
        "bl" => {
            let (nx, ny) = parse_pair(size)?;
            BoundaryLayerOptions { nx, ny, ..Default::default() }.mesh()
        }
        _ => Err(Error::Config(format!("unknown grid kind '{kind}'"))),
    }
}

/// Refine a generated mesh `levels` times (used by tests and examples).
pub fn refined(mesh: Mesh, levels: usize) -> Result<Mesh> {
    let mut m = mesh;
    for _ in 0..levels {
        m = refine_uniform(&m)?;
    }
    Ok(m)
}

