//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a non-zero status if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use casimir_core::impedance::{factors, SurfaceImpedance};
use casimir_core::series::{coefficients, recover_coefficients, CoefficientVariant};
use casimir_core::zero_t::{
    ideal_closed_forms, integrand, normal_skin_coefficients, normal_skin_pert0,
};
use casimir_core::{
    Casimir, Formalism, ImpedanceKind, ImpedanceModel, Material, PhysicalConstants,
    QuadratureConfig, Quantity, ReflectionFactors,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const K: PhysicalConstants = PhysicalConstants::CODATA;

struct Report {
    lines: Vec<(String, bool, String)>,
}

impl Report {
    fn check(&mut self, id: &str, ok: bool, detail: String) {
        println!("{} {id}: {detail}", if ok { "PASS" } else { "FAIL" });
        self.lines.push((id.to_string(), ok, detail));
    }
}

fn log_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| min * (max / min).powf(i as f64 / (count - 1) as f64))
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn criterion_1(r: &mut Report) {
    let engine = Casimir::default();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut converged = true;
    for a in [1e-7, 1e-6, 1e-5] {
        let (e, f) = ideal_closed_forms(a, &K).unwrap();
        let en = engine.energy_pp0(a, ImpedanceModel::IDEAL, None).unwrap();
        let fnum = engine.force_pp0(a, ImpedanceModel::IDEAL, None).unwrap();
        converged &= en.converged() && fnum.converged();
        worst = worst.max(rel(en.value, e)).max(rel(fnum.value, f));
    }
    let secs = start.elapsed().as_secs_f64();
    r.check(
        "1 ideal-metal oracle",
        worst < 1e-7 && secs < 5.0 && converged,
        format!("max relative error {worst:.2e} (< 1e-7), {secs:.2} s (< 5 s)"),
    );
}

fn criterion_2(r: &mut Report) {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let grid = log_grid(1e-7, 1e-5, 60);
    let start = Instant::now();
    let mut exact = Vec::new();
    let mut approx = Vec::new();
    for &a in &grid {
        exact.push(
            engine
                .relative_deviation(Quantity::Force, a, Some(&al), ImpedanceKind::PlasmaExact)
                .unwrap(),
        );
        approx.push(
            engine
                .relative_deviation(Quantity::Force, a, Some(&al), ImpedanceKind::PlasmaApprox)
                .unwrap(),
        );
    }
    let secs = start.elapsed().as_secs_f64();
    let at_100 = exact[0].value.abs();
    r.check(
        "2a force deviation, exact plasma impedance, 100 nm",
        at_100 < 5e-3,
        format!("|dF| = {:.4}% (< 0.5%)", 100.0 * at_100),
    );
    let at_150 = engine
        .relative_deviation(
            Quantity::Force,
            1.5e-7,
            Some(&al),
            ImpedanceKind::PlasmaApprox,
        )
        .unwrap()
        .value
        .abs();
    r.check(
        "2b force deviation, approximate plasma impedance, 150 nm",
        at_150 > 5e-2,
        format!("|dF| = {:.4}% (> 5%)", 100.0 * at_150),
    );
    let far = grid
        .iter()
        .zip(&approx)
        .filter(|(a, _)| **a >= 1.2e-6)
        .map(|(_, d)| d.value.abs())
        .fold(0.0, f64::max);
    r.check(
        "2c force deviation, approximate plasma impedance, a >= 1.2 um",
        far < 1e-2,
        format!("max |dF| = {:.4}% (< 1%)", 100.0 * far),
    );
    let converged = exact.iter().chain(&approx).all(|d| d.converged());
    r.check(
        "2d 60-point force scan runtime",
        secs < 120.0 && converged,
        format!("{secs:.1} s (< 120 s), all converged: {converged}"),
    );
}

fn criterion_3(r: &mut Report) {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let at_100 = engine
        .relative_deviation(
            Quantity::Energy,
            1e-7,
            Some(&al),
            ImpedanceKind::PlasmaExact,
        )
        .unwrap()
        .value
        .abs();
    r.check(
        "3a energy deviation, exact plasma impedance, 100 nm",
        at_100 < 3e-3,
        format!("|dE| = {:.4}% (< 0.3%)", 100.0 * at_100),
    );
    let grid = log_grid(1e-7, 1e-5, 60);
    let (mut near, mut far) = (0.0f64, 0.0f64);
    for &a in &grid {
        let d = engine
            .relative_deviation(Quantity::Energy, a, Some(&al), ImpedanceKind::PlasmaApprox)
            .unwrap()
            .value
            .abs();
        if a >= 7e-7 {
            far = far.max(d);
        } else {
            near = near.max(d);
        }
    }
    r.check(
        "3b energy deviation, approximate plasma impedance, a >= 0.7 um",
        far < 1e-2,
        format!("max |dE| = {:.4}% (< 1%)", 100.0 * far),
    );
    r.check(
        "3c energy deviation, approximate plasma impedance, 0.1-0.7 um",
        near < 5e-2,
        format!("max |dE| = {:.4}% (< 5%)", 100.0 * near),
    );
}

fn fitted(engine: &Casimir, model: ImpedanceModel, al: &Material) -> Vec<f64> {
    let delta_0 = al.delta_0();
    let samples: Vec<(f64, f64)> = log_grid(0.002, 0.02, 16)
        .into_iter()
        .map(|x| {
            let a = delta_0 / x;
            let f = engine.force_pp0(a, model, Some(al)).unwrap();
            let (_, f00) = ideal_closed_forms(a, &K).unwrap();
            (x, f.value / f00)
        })
        .collect();
    recover_coefficients(&samples, 5).unwrap().coefficients
}

fn criterion_4(r: &mut Report) {
    let engine = Casimir::new(QuadratureConfig::default().with_rel_tol(1e-12)).unwrap();
    let al = Material::aluminium();
    let c = fitted(
        &engine,
        ImpedanceModel::lifshitz(ImpedanceKind::PlasmaExact),
        &al,
    );
    let lifshitz = coefficients(CoefficientVariant::LifshitzPlasma).c;
    let (e1, e2, e3) = (
        rel(c[1], lifshitz[1]),
        rel(c[2], lifshitz[2]),
        rel(c[3], lifshitz[3]),
    );
    r.check(
        "4a coefficient recovery, Lifshitz plasma",
        e1 < 0.01 && e2 < 0.05 && e3 < 0.10,
        format!(
            "c1 = {:.5} ({:.2e}), c2 = {:.4} ({:.2e}), c3 = {:.3} vs {:.3} ({:.2e})",
            c[1], e1, c[2], e2, c[3], lifshitz[3], e3
        ),
    );
    let c = fitted(
        &engine,
        ImpedanceModel::impedance(ImpedanceKind::PlasmaApprox),
        &al,
    );
    let approx = coefficients(CoefficientVariant::ImpedanceApprox).c;
    let e3 = rel(c[3], approx[3]);
    r.check(
        "4b coefficient recovery, approximate plasma impedance c3",
        e3 < 0.10,
        format!(
            "c3 = {:.3} vs {:.3} (relative {:.2e}, < 0.1)",
            c[3], approx[3], e3
        ),
    );
}

fn criterion_5(r: &mut Report) {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let model = ImpedanceModel::lifshitz(ImpedanceKind::PlasmaExact);
    for temperature in [300.0, 77.0] {
        let mut worst_e = 0.0f64;
        let mut worst_f = 0.0f64;
        for a in [5e-7, 1e-6, 5e-6] {
            let e = engine
                .energy_pp_t_split(a, temperature, model, Some(&al))
                .unwrap();
            let f = engine
                .force_pp_t_split(a, temperature, model, Some(&al))
                .unwrap();
            let de = e.decomposition.unwrap().delta_t_part;
            let df = f.decomposition.unwrap().delta_t_part;
            worst_e = worst_e.max(rel(
                engine.delta_t_energy_pert(a, temperature, &al).unwrap(),
                de,
            ));
            worst_f = worst_f.max(rel(
                engine.delta_t_force_pert(a, temperature, &al).unwrap(),
                df,
            ));
        }
        r.check(
            &format!("5 thermal correction expansion, T = {temperature} K"),
            worst_e < 5e-4 && worst_f < 5e-4,
            format!("max relative mismatch energy {worst_e:.2e}, force {worst_f:.2e} (< 5e-4)"),
        );
    }
}

fn criterion_6(r: &mut Report) {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let a = 1e-3;
    let model = ImpedanceModel::impedance(ImpedanceKind::NormalSkin);
    let (e00, f00) = ideal_closed_forms(a, &K).unwrap();
    let de = 1.0 - engine.energy_pp0(a, model, Some(&al)).unwrap().value / e00;
    let df = 1.0 - engine.force_pp0(a, model, Some(&al)).unwrap().value / f00;
    r.check(
        "6a normal skin corrections at 1 mm",
        rel(de, 1.6e-3) < 0.05 && rel(df, 1.9e-3) < 0.05,
        format!("energy {de:.4e} (1.6e-3 +- 5%), force {df:.4e} (1.9e-3 +- 5%)"),
    );
    let (ce, cf) = normal_skin_coefficients();
    let (pe, pf) = normal_skin_pert0(a, &al, &K).unwrap();
    r.check(
        "6b normal skin analytic coefficients",
        rel(ce, 1.656) < 1e-3 && rel(cf, 1.932) < 1e-3,
        format!(
            "{ce:.5}, {cf:.5} (1.656, 1.932 within 0.1%); first-order corrections {:.4e}, {:.4e}",
            1.0 - pe / e00,
            1.0 - pf / f00
        ),
    );
}

fn criterion_7(r: &mut Report) {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let a = 1e-3;
    let ns = ImpedanceModel::impedance(ImpedanceKind::NormalSkin);
    let ratios = |temperature: f64| {
        let e = engine
            .energy_pp_t(a, temperature, ns, Some(&al))
            .unwrap()
            .value;
        let e_ideal = engine.ideal_energy_t(a, temperature).unwrap();
        let f = engine
            .force_pp_t(a, temperature, ns, Some(&al))
            .unwrap()
            .value;
        let f_ideal = engine
            .force_pp_t(a, temperature, ImpedanceModel::IDEAL, None)
            .unwrap()
            .value;
        (e / e_ideal, f / f_ideal)
    };
    let (e1, f1) = ratios(1.0);
    r.check(
        "7a normal skin ratios at 1 mm, 1 K",
        (e1 - 0.99992).abs() <= 2e-5 && (f1 - 0.999745).abs() <= 5e-5,
        format!("energy {e1:.7} (0.99992 +- 2e-5), force {f1:.7} (0.999745 +- 5e-5)"),
    );
    let (e2, f2) = ratios(2.0);
    r.check(
        "7b normal skin ratios at 1 mm, 2 K",
        (e2 - 1.0).abs() < 1e-4 && (f2 - 1.0).abs() < 1e-4,
        format!("energy {e2:.7}, force {f2:.7} (within 1e-4 of 1)"),
    );
    let t_eff = K.effective_temperature(a).unwrap();
    r.check(
        "7c effective temperature at 1 mm",
        rel(t_eff, 1.145) < 5e-3,
        format!("{t_eff:.5} K (1.145 K +- 0.5%)"),
    );
}

fn criterion_8(r: &mut Report) {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(8);
    let mut failures = Vec::new();

    // reflection factors in [0, 1]
    let mut out_of_range = 0;
    for _ in 0..10_000 {
        let kind = ImpedanceKind::ALL[rng.gen_range(0..4)];
        let formalism = [Formalism::Impedance, Formalism::Lifshitz][rng.gen_range(0..2)];
        let material = Material::new(
            10f64.powf(rng.gen_range(15.5..16.7)),
            10f64.powf(rng.gen_range(13.0..14.5)),
        )
        .unwrap();
        let a = 10f64.powf(rng.gen_range(-7.0..-3.0));
        let reduced = ImpedanceModel::new(kind, formalism)
            .reduce(a, Some(&material), &K)
            .unwrap();
        let mut xi_max = 60.0;
        if kind == ImpedanceKind::PlasmaApprox {
            xi_max = f64::min(xi_max, reduced.reduced_plasma_frequency());
        }
        let xi = if rng.gen_bool(0.05) {
            0.0
        } else {
            rng.gen_range(0.0..xi_max)
        };
        let y = xi + rng.gen_range(0.0..60.0);
        let x = reduced.factors(xi, y);
        if !(0.0..=1.0).contains(&x.x_par) || !(0.0..=1.0).contains(&x.x_perp) {
            out_of_range += 1;
        }
    }
    if out_of_range > 0 {
        failures.push(format!("{out_of_range} points outside [0, 1]"));
    }

    // diagonal agreement
    for _ in 0..1000 {
        let z = rng.gen_range(0.0..1.0);
        let xi = rng.gen_range(1e-6..50.0);
        let imp = SurfaceImpedance::from_z(z, xi);
        let a = factors(imp, xi, xi, Formalism::Impedance);
        let b = factors(imp, xi, xi, Formalism::Lifshitz);
        if (a.x_par - b.x_par).abs() > 1e-12 || (a.x_perp - b.x_perp).abs() > 1e-12 {
            failures.push(format!("diagonal mismatch at Z = {z}, xi = {xi}"));
            break;
        }
    }

    // zero frequency, normal skin
    let al = Material::aluminium();
    let ns = ImpedanceModel::impedance(ImpedanceKind::NormalSkin)
        .reduce(1e-3, Some(&al), &K)
        .unwrap();
    for y in [1e-6, 0.3, 2.0, 30.0] {
        if ns.factors(0.0, y) != ReflectionFactors::ZERO {
            failures.push(format!("normal-skin X(y = {y}, 0) is not zero"));
        }
    }

    // F = -dE/da
    let fine = Casimir::new(QuadratureConfig::default().with_rel_tol(1e-11)).unwrap();
    let mut worst_fd = 0.0f64;
    for kind in ImpedanceKind::ALL {
        let model = ImpedanceModel::impedance(kind);
        for a in [2e-7, 1e-6, 5e-6] {
            let h = 1e-3 * a;
            let ep = fine.energy_pp0(a + h, model, Some(&al)).unwrap().value;
            let em = fine.energy_pp0(a - h, model, Some(&al)).unwrap().value;
            let f = fine.force_pp0(a, model, Some(&al)).unwrap().value;
            worst_fd = worst_fd.max(rel(-(ep - em) / (2.0 * h), f));
        }
    }
    if worst_fd >= 1e-4 {
        failures.push(format!("finite-difference force mismatch {worst_fd:.2e}"));
    }

    // closed ideal series against its integral form
    let engine = Casimir::default();
    let mut worst_series = 0.0f64;
    for a in [1e-7, 1e-6, 1e-5] {
        let t_eff = K.effective_temperature(a).unwrap();
        for ratio in [0.1, 1.0, 3.0] {
            let closed = engine.ideal_energy_t(a, ratio * t_eff).unwrap();
            let integral = engine
                .ideal_energy_t_integral(a, ratio * t_eff)
                .unwrap()
                .value;
            worst_series = worst_series.max(rel(closed, integral));
        }
    }
    if worst_series >= 1e-8 {
        failures.push(format!("closed ideal series mismatch {worst_series:.2e}"));
    }

    // finite conductivity weakens the energy
    for kind in ImpedanceKind::ALL {
        for formalism in [Formalism::Impedance, Formalism::Lifshitz] {
            for a in [1e-7, 1e-6, 1e-5] {
                let e = engine
                    .energy_pp0(a, ImpedanceModel::new(kind, formalism), Some(&al))
                    .unwrap()
                    .value;
                let (e00, _) = ideal_closed_forms(a, &K).unwrap();
                if e.abs() > e00.abs() * (1.0 + 1e-9) {
                    failures.push(format!("|E| above ideal for {kind}/{formalism} at {a:e}"));
                }
            }
        }
    }

    let secs = start.elapsed().as_secs_f64();
    if secs >= 180.0 {
        failures.push(format!("suite took {secs:.0} s"));
    }
    let ok = failures.is_empty();
    let detail = if ok {
        format!("all properties hold (finite difference {worst_fd:.1e}, ideal series {worst_series:.1e}), {secs:.1} s (< 180 s)")
    } else {
        failures.join("; ")
    };
    r.check("8 structural properties", ok, detail);
}

/// Composite trapezoid over `(xi, s = y - xi)` on `[0, L]²` with `n` nodes
/// per axis.
fn trapezoid(f: &dyn Fn(f64, f64) -> f64, n: usize, length: f64) -> f64 {
    let h = length / (n - 1) as f64;
    let weight = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
    let mut total = 0.0;
    for i in 0..n {
        let xi = i as f64 * h;
        let mut row = 0.0;
        for j in 0..n {
            row += weight(j) * f(xi, xi + j as f64 * h);
        }
        total += weight(i) * row;
    }
    total * h * h
}

fn criterion_9(r: &mut Report) {
    let engine = Casimir::default();
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut configs = Vec::new();
    for _ in 0..5 {
        let kind = [ImpedanceKind::PlasmaExact, ImpedanceKind::PlasmaApprox][rng.gen_range(0..2)];
        let material = Material::new(10f64.powf(rng.gen_range(15.8..16.5)), 1e14).unwrap();
        let a = 10f64.powf(rng.gen_range(-6.7..-5.0));
        let reduced = ImpedanceModel::impedance(kind)
            .reduce(a, Some(&material), &K)
            .unwrap();
        let f = |xi: f64, y: f64| integrand::force(reduced.factors(xi, y), y);
        let adaptive = engine
            .force_integral(|xi, y| reduced.factors(xi, y))
            .unwrap()
            .value;
        // 3163² ≈ 1e7 nodes at step h, Richardson against step 2h
        let fine = trapezoid(&f, 3163, 45.0);
        let coarse = trapezoid(&f, 1582, 45.0);
        let brute = (4.0 * fine - coarse) / 3.0;
        let e = rel(adaptive, brute);
        worst = worst.max(e);
        configs.push(format!("{kind} a={a:.2e} {e:.1e}"));
    }
    r.check(
        "9 adaptive engine vs dense trapezoid",
        worst < 1e-6,
        format!(
            "max relative difference {worst:.2e} (< 1e-6) [{}]",
            configs.join(", ")
        ),
    );
}

fn main() -> ExitCode {
    let mut report = Report { lines: Vec::new() };
    let start = Instant::now();
    criterion_1(&mut report);
    criterion_2(&mut report);
    criterion_3(&mut report);
    criterion_4(&mut report);
    criterion_5(&mut report);
    criterion_6(&mut report);
    criterion_7(&mut report);
    criterion_8(&mut report);
    criterion_9(&mut report);
    let failed: Vec<_> = report
        .lines
        .iter()
        .filter(|l| !l.1)
        .map(|l| l.0.as_str())
        .collect();
    println!(
        "acceptance: {} passed, {} failed in {:.1} s",
        report.lines.len() - failed.len(),
        failed.len(),
        start.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
