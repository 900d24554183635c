//! End-to-end acceptance checks. Each test prints one
//! `criterion N: PASS|FAIL ...` line before asserting.

use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use fvflow::analytic::{BlasiusProfile, KarmanTrefftz};
use fvflow::cc_laplace::{
    build_cc_stencil, gauss_seidel_sweep, order_study, CcOptions, HarmonicCase, PatchKind, Placement,
};
use fvflow::cli::verify::{fd_errors, random_field};
use fvflow::linsolve::GmresSettings;
use fvflow::lsq::{
    assemble, cross_block_sums, element_gradient, functional_value, node_based_functional, BcSet, BoundaryLayer,
    CauchyRiemann, NodalField,
};
use fvflow::mesh::{gen_equilateral_grid, gen_jittered_square, gen_structured_square, Mesh, StructuredStyle};
use fvflow::scenarios::{
    circulation_study, solve_boundary_layer, solve_cylinder, solve_sinusoidal_square, study_orders,
    BoundaryLayerOptions, CylinderOptions, CylinderResult, SinusoidalOptions, StagnationFinding, StreamFarfield,
    CYLINDER_GRIDS,
};

/// Written to the raw stderr handle so the line survives output capture.
fn verdict(n: usize, ok: bool, detail: String) {
    use std::io::Write;
    let line = format!("criterion {n}: {} {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

#[test]
fn criterion_01_cc_exactness() {
    let t = Instant::now();
    let patch = PatchKind::Equilateral.build().unwrap();
    let study = order_study(&patch, |p| HarmonicCase::Cubic.eval(p), 10).unwrap();
    let worst = study.levels.iter().map(|l| l.e_delta.abs()).fold(0.0, f64::max);
    let el = t.elapsed();
    verdict(
        1,
        worst < 1e-12 && el < Duration::from_secs(1),
        format!("max |e_delta| over {} levels = {worst:e} (< 1e-12), {:.3} s", study.levels.len(), secs(el)),
    );
}

#[test]
fn criterion_02_cc_orders() {
    let t = Instant::now();
    let eq = PatchKind::Equilateral.build().unwrap();
    let s2 = order_study(&eq, |p| HarmonicCase::Quartic.eval(p), 8).unwrap();
    let right = PatchKind::Right.build().unwrap();
    let s3 = order_study(&right, |p| HarmonicCase::SinhSin.eval(p), 8).unwrap();
    let el = t.elapsed();
    let (d2, d3, p3) = (s2.e_delta_order(), s3.e_delta_order(), s3.e_phi_order());
    let ok = (d2 - 1.0).abs() <= 0.05 && d3.abs() <= 0.1 && (p3 - 2.0).abs() <= 0.2 && el < Duration::from_secs(5);
    verdict(
        2,
        ok,
        format!(
            "equilateral case 2 e_delta slope {d2:.4}; right case 3 e_delta slope {d3:.4}, e_phi slope {p3:.4}; 8 rescalings, {:.3} s",
            secs(el)
        ),
    );
}

#[test]
fn criterion_03_leading_coefficient() {
    let patch = PatchKind::Equilateral.build().unwrap();
    let study = order_study(&patch, |p| HarmonicCase::Quartic.eval(p), 10).unwrap();
    // independent oracle: Psi = x^4 + y^4 - 6 x^2 y^2 has Psi_xxy = -24 y, Psi_yyy = 24 y
    let y0 = patch.scale_center.y;
    let lead = (-24.0 * y0 - 24.0 * y0 / 3.0).abs() / 3f64.sqrt();
    let last = study.levels.last().unwrap();
    let ratio = last.e_delta.abs() / last.h;
    let rel = (ratio / lead - 1.0).abs();
    verdict(3, rel < 0.05, format!("e_delta/h = {ratio:.6}, predicted {lead:.6}, relative gap {rel:.2e} (< 5%)"));
}

#[test]
fn criterion_04_airfoil_circulation() {
    let t = Instant::now();
    let kt = KarmanTrefftz::reference();
    let cc = CcOptions { omega: 1.8, ..CcOptions::default() };
    let study = circulation_study(&kt, 15f64.to_radians(), &[52, 98, 173], 5.0, StreamFarfield::Exact, &cc).unwrap();
    let el = t.elapsed();
    let exact = 0.888215341;
    let errs: Vec<f64> = study.levels.iter().map(|l| (l.circulation - exact).abs()).collect();
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    let last = *errs.last().unwrap();
    let all_converged = study.levels.iter().all(|l| l.converged);
    let ok = monotone && last < 0.06 && all_converged && el < Duration::from_secs(120);
    verdict(
        4,
        ok,
        format!(
            "|gamma - {exact}| at 52/98/173 surface points = {:.3e}, {:.3e}, {:.3e}; monotone {monotone}; {:.1} s",
            errs[0],
            errs[1],
            errs[2],
            secs(el)
        ),
    );
}

#[test]
fn criterion_05_lsq_second_order() {
    let t = Instant::now();
    let opts = SinusoidalOptions::default();
    assert_eq!(opts.n0 + 1, 13);
    assert_eq!(opts.newton.tol, 1e-8);
    let levels = solve_sinusoidal_square(&opts).unwrap();
    let el = t.elapsed();
    let reports: Vec<_> = levels.iter().map(|l| l.report.clone()).collect();
    let orders = study_orders(&reports);
    let fin = orders.last().unwrap();
    let (ou, ov) = (fin[0].0, fin[1].0);
    let newton: Vec<usize> = levels.iter().map(|l| l.state.iterations).collect();
    let ok = levels.len() == 4
        && (ou - 2.0).abs() <= 0.3
        && (ov - 2.0).abs() <= 0.3
        && levels.iter().all(|l| l.state.converged() && l.state.iterations <= 3)
        && el < Duration::from_secs(60);
    verdict(
        5,
        ok,
        format!("finest-pair order |e_u|2 {ou:.3}, |e_v|2 {ov:.3}; Newton corrections {newton:?}; {:.2} s", secs(el)),
    );
}

#[test]
fn criterion_06_decoupling() {
    let cr = CauchyRiemann::default();
    let grids: Vec<(&str, Mesh)> = vec![
        ("right 8x8", gen_structured_square(8, StructuredStyle::Right).unwrap()),
        ("right 16x16", gen_structured_square(16, StructuredStyle::Right).unwrap()),
        ("equilateral 8x8", gen_equilateral_grid(8, 8, 0.125).unwrap()),
        ("equilateral 16x16", gen_equilateral_grid(16, 16, 0.0625).unwrap()),
    ];
    let mut worst = 0.0f64;
    let mut count = 0;
    for (_, m) in &grids {
        for (_, _, v) in cross_block_sums(&cr, m).unwrap() {
            worst = worst.max(v.abs());
            count += 1;
        }
    }
    let levels = solve_sinusoidal_square(&SinusoidalOptions::default()).unwrap();
    let pcg: Vec<(usize, usize)> = levels.iter().map(|l| (l.first_linear_iterations, l.unknowns)).collect();
    let pcg_ok = pcg.iter().all(|&(it, n)| 2 * it <= n);
    verdict(
        6,
        worst == 0.0 && count > 0 && pcg_ok,
        format!("{count} interior cross-block sums on 4 grids, max |sum| = {worst:e}; PCG (iterations, unknowns) {pcg:?}"),
    );
}

#[test]
fn criterion_07_fd_suite() {
    let t = Instant::now();
    let mut worst = [0.0f64; 4];
    for seed in 0..4u64 {
        let mesh = gen_jittered_square(6, 0.25, 100 + seed).unwrap();
        let (g, h) = fd_errors(&CauchyRiemann::default(), &mesh, &random_field(&mesh, 2, 200 + seed)).unwrap();
        worst[0] = worst[0].max(g);
        worst[1] = worst[1].max(h);
        let (g, h) = fd_errors(&BoundaryLayer::default(), &mesh, &random_field(&mesh, 3, 300 + seed)).unwrap();
        worst[2] = worst[2].max(g);
        worst[3] = worst[3].max(h);
    }
    let el = t.elapsed();
    let ok = worst.iter().all(|&e| e < 1e-5) && el < Duration::from_secs(10);
    verdict(
        7,
        ok,
        format!(
            "relative FD mismatch CR grad {:.1e} hess {:.1e}, BL grad {:.1e} hess {:.1e} (< 1e-5); {:.2} s",
            worst[0],
            worst[1],
            worst[2],
            worst[3],
            secs(el)
        ),
    );
}

struct CylinderRuns {
    labels: Vec<&'static str>,
    /// `runs[grid][gamma]`
    runs: Vec<Vec<CylinderResult>>,
    elapsed: Duration,
}

fn cylinder_runs() -> &'static CylinderRuns {
    static RUNS: OnceLock<CylinderRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let t = Instant::now();
        let a = 0.5;
        let gammas = [
            ("0", 0.0),
            ("2pia", 2.0 * PI * a),
            ("2pia*sqrt3", 2.0 * PI * a * 3f64.sqrt()),
            ("4pia", 4.0 * PI * a),
            ("6pia", 6.0 * PI * a),
        ];
        let runs = CYLINDER_GRIDS
            .iter()
            .map(|&(nt, nr)| {
                let base = CylinderOptions::default();
                let mesh = base.mesh(nt, nr).unwrap();
                gammas
                    .iter()
                    .map(|&(_, gamma)| solve_cylinder(&mesh, &CylinderOptions { gamma, ..base.clone() }).unwrap())
                    .collect()
            })
            .collect();
        CylinderRuns { labels: gammas.iter().map(|g| g.0).collect(), runs, elapsed: t.elapsed() }
    })
}

fn surface_angles(r: &CylinderResult) -> [f64; 2] {
    match r.stagnation {
        StagnationFinding::Surface { angles_deg, .. } => angles_deg,
        _ => [f64::NAN; 2],
    }
}

#[test]
fn criterion_08_cylinder_stagnation() {
    let c = cylinder_runs();
    let coarse = &c.runs[0];
    let fine = &c.runs[1];
    let a1 = surface_angles(&coarse[1]);
    let a1f = surface_angles(&fine[1]);
    let a2 = surface_angles(&fine[2]);
    let a2c = surface_angles(&coarse[2]);
    let y = |r: &CylinderResult| match r.stagnation {
        StagnationFinding::OffBody { point, .. } => point.y,
        _ => f64::NAN,
    };
    let (y3, y3c) = (y(&fine[4]), y(&coarse[4]));
    let ok = (a1[0] - 30.0).abs() <= 3.0
        && (a1[1] - 150.0).abs() <= 3.0
        && (a2[0] - 60.0).abs() <= 6.0
        && (a2[1] - 120.0).abs() <= 6.0
        && (1.2..=1.4).contains(&y3)
        && c.elapsed < Duration::from_secs(120);
    verdict(
        8,
        ok,
        format!(
            "2pia: {:.2}/{:.2} deg ({} pts; {:.2}/{:.2} on {}); 2pia*sqrt3: {:.2}/{:.2} deg ({} pts; {:.2}/{:.2} on {}); \
             6pia: y = {y3:.4} ({} pts; {y3c:.4} on {}); {:.1} s for 10 solves",
            a1[0], a1[1], CYLINDER_GRIDS[0].0, a1f[0], a1f[1], CYLINDER_GRIDS[1].0,
            a2[0], a2[1], CYLINDER_GRIDS[1].0, a2c[0], a2c[1], CYLINDER_GRIDS[0].0,
            CYLINDER_GRIDS[1].0, CYLINDER_GRIDS[0].0, secs(c.elapsed)
        ),
    );
}

#[test]
fn criterion_09_cylinder_error_halving() {
    let c = cylinder_runs();
    let norms = |r: &CylinderResult| -> Vec<f64> {
        r.report.components.iter().flat_map(|e| [e.l2, e.linf]).collect()
    };
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for (cr, fr) in c.runs[0].iter().zip(&c.runs[1]) {
        for (ec, ef) in norms(cr).iter().zip(norms(fr)) {
            lo = lo.min(ef / ec);
            hi = hi.max(ef / ec);
        }
    }
    let mut monotone = true;
    for grid in &c.runs {
        for w in grid.windows(2) {
            monotone &= norms(&w[0]).iter().zip(norms(&w[1])).all(|(a, b)| b > *a);
        }
    }
    verdict(
        9,
        lo >= 0.35 && hi <= 0.65 && monotone,
        format!(
            "fine/coarse error ratios in [{lo:.3}, {hi:.3}] (need [0.35, 0.65]); errors increase with gamma over {:?}: {monotone}",
            c.labels
        ),
    );
}

#[test]
fn criterion_10_boundary_layer() {
    let t = Instant::now();
    let strict = solve_boundary_layer(&BoundaryLayerOptions::default()).unwrap();
    let loose = solve_boundary_layer(&BoundaryLayerOptions { gmres: GmresSettings::LOOSE, ..Default::default() }).unwrap();
    let el = t.elapsed();
    let fpp0 = BlasiusProfile::standard().unwrap().fpp0;
    let diff = strict
        .state
        .field
        .values
        .iter()
        .zip(&loose.state.field.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let c = &strict.comparison;
    let opts = BoundaryLayerOptions::default();
    let ok = strict.state.converged()
        && loose.state.converged()
        && c.x_profile == 0.5
        && c.u_profile_dev <= 0.03
        && c.wall_range == (0.2, 0.9)
        && c.wall_omega_dev <= 0.05
        && (fpp0 - 0.33206).abs() <= 1e-4
        && diff <= 1e-6
        && el < Duration::from_secs(600);
    verdict(
        10,
        ok,
        format!(
            "{}x{} nodes: max |u - u_B| at x = 0.5 {:.4}; wall omega max rel dev {:.4}; f''(0) {fpp0:.6}; \
             strict vs loose {diff:.2e}; {:.1} s",
            opts.nx,
            opts.ny,
            c.u_profile_dev,
            c.wall_omega_dev,
            secs(el)
        ),
    );
}

/// Same mesh with nodes renumbered, triangles reordered and each triangle's
/// vertex list rotated.
fn permuted(mesh: &Mesh, seed: u64) -> (Mesh, Vec<usize>) {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = mesh.num_nodes();
    let mut new_of_old: Vec<usize> = (0..n).collect();
    new_of_old.shuffle(&mut rng);
    let mut points = vec![mesh.point(0); n];
    let mut tags = vec![mesh.node_tags(0); n];
    for old in 0..n {
        points[new_of_old[old]] = mesh.point(old);
        tags[new_of_old[old]] = mesh.node_tags(old);
    }
    let mut cells: Vec<[usize; 3]> = mesh
        .triangles()
        .iter()
        .enumerate()
        .map(|(t, tri)| {
            let v = tri.nodes.map(|i| new_of_old[i]);
            let r = t % 3;
            [v[r], v[(r + 1) % 3], v[(r + 2) % 3]]
        })
        .collect();
    cells.shuffle(&mut rng);
    (Mesh::new(points, cells, tags).unwrap(), new_of_old)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Every invariant on one random mesh; returns a description of the first
/// violation.
fn invariants_hold(n: usize, amp: f64, seed: u64) -> Result<(), String> {
    let mesh = gen_jittered_square(n, amp, seed).map_err(|e| e.to_string())?;
    for (t, g) in mesh.geometries().iter().enumerate() {
        let s = g.normals[0] + g.normals[1] + g.normals[2];
        if s.norm() > 1e-14 * g.perimeter() {
            return Err(format!("normal sum {} on triangle {t}", s.norm()));
        }
    }
    let stencil = build_cc_stencil(&mesh, Placement::Centroid).map_err(|e| e.to_string())?;
    for t in 0..stencil.neighbors.len() {
        let sum: f64 = stencil.neighbors[t].iter().map(|x| x.1).sum();
        if sum != stencil.diag[t] {
            return Err(format!("row sum {} on cell {t}", stencil.diag[t] - sum));
        }
        for &(s, c) in &stencil.neighbors[t] {
            if !stencil.neighbors[s].iter().any(|&(b, cb)| b == t && cb == c) {
                return Err(format!("asymmetric face {t}-{s}"));
            }
        }
    }
    let constant = 0.37;
    let mut psi = vec![constant; stencil.neighbors.len()];
    let change = gauss_seidel_sweep(&stencil, &mut psi, &vec![constant; stencil.ghosts.len()], 1.5)
        .map_err(|e| e.to_string())?;
    if change != 0.0 || psi.iter().any(|&p| p != constant) {
        return Err(format!("constant cell field moved by {change:e}"));
    }

    let cr = CauchyRiemann::default();
    let bl = BoundaryLayer::default();
    let none = BcSet::new();
    for (vars, sys) in [(2usize, &cr as &dyn fvflow::lsq::LocalSystem), (3, &bl)] {
        let f = random_field(&mesh, vars, seed ^ 0x5eed);
        let i = functional_value(sys, &mesh, &f, &none).map_err(|e| e.to_string())?;
        if !(i >= 0.0) {
            return Err(format!("negative functional {i}"));
        }
        let star = node_based_functional(sys, &mesh, &f).map_err(|e| e.to_string())?;
        if rel(star, 3.0 * i) > 1e-12 {
            return Err(format!("I* = {star} vs 3I = {}", 3.0 * i));
        }
        let (p, new_of_old) = permuted(&mesh, seed + 1);
        let mut old_of_new = vec![0; new_of_old.len()];
        for (o, &nw) in new_of_old.iter().enumerate() {
            old_of_new[nw] = o;
        }
        let fp = NodalField::from_fn(&p, vars, |k, _| (0..vars).map(|c| f.get(old_of_new[k], c)).collect());
        let ip = functional_value(sys, &p, &fp, &none).map_err(|e| e.to_string())?;
        if rel(ip, i) > 1e-12 {
            return Err(format!("functional {i} changes to {ip} under renumbering"));
        }
    }

    let cst = NodalField::from_fn(&mesh, 2, |_, _| vec![0.8, -0.3]);
    let sys = assemble(&cr, &mesh, &cst, &none).map_err(|e| e.to_string())?;
    let grad = sys.f.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let i_cst = functional_value(&cr, &mesh, &cst, &none).unwrap();
    if grad > 1e-13 || i_cst > 1e-26 {
        return Err(format!("constant velocity: gradient {grad:e}, functional {i_cst:e}"));
    }

    let (a, b, c) = (1.7, -0.6, 0.25);
    for (t, g) in mesh.geometries().iter().enumerate() {
        let v = mesh.triangle(t).nodes.map(|k| {
            let q = mesh.point(k);
            a * q.x + b * q.y + c
        });
        let (gx, gy) = element_gradient(g, v).map_err(|e| e.to_string())?;
        if (gx - a).abs() > 1e-12 * a.abs() * 10.0 || (gy - b).abs() > 1e-12 * b.abs() * 10.0 {
            return Err(format!("linear gradient ({gx}, {gy}) on triangle {t}"));
        }
    }
    // u = (x, -y) satisfies both Cauchy-Riemann equations
    let lin = NodalField::from_fn(&mesh, 2, |_, q| vec![q.x, -q.y]);
    let i_lin = functional_value(&cr, &mesh, &lin, &none).unwrap();
    if i_lin > 1e-24 {
        return Err(format!("linear solution has functional {i_lin:e}"));
    }
    Ok(())
}

#[test]
fn criterion_11_property_suite() {
    use proptest::test_runner::{Config, TestCaseError, TestRunner};
    let t = Instant::now();
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    let strategy = (3usize..9, 0.0f64..0.3, proptest::num::u64::ANY);
    let result = runner.run(&strategy, |(n, amp, seed)| {
        invariants_hold(n, amp, seed).map_err(TestCaseError::fail)
    });
    let el = t.elapsed();
    let ok = result.is_ok() && el < Duration::from_secs(30);
    let detail = match &result {
        Ok(()) => format!("100 random meshes, all invariants hold; {:.2} s", secs(el)),
        Err(e) => format!("{e}"),
    };
    verdict(11, ok, detail);
}
