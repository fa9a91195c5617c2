use std::f64::consts::PI;

use casimir_core::series::{coefficients, recover_coefficients, series_force, CoefficientVariant};
use casimir_core::zero_t::{ideal_closed_forms, normal_skin_pert0};
use casimir_core::{
    Casimir, ImpedanceKind, ImpedanceModel, Material, PhysicalConstants, QuadratureConfig, Quantity,
};

const K: PhysicalConstants = PhysicalConstants::CODATA;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn exact() -> ImpedanceModel {
    ImpedanceModel::impedance(ImpedanceKind::PlasmaExact)
}

#[test]
fn plasma_energy_below_ideal_at_one_micron() {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let e = engine.energy_pp0(1e-6, exact(), Some(&al)).unwrap();
    let (e00, _) = ideal_closed_forms(1e-6, &K).unwrap();
    assert!(e.converged());
    assert!(e.value.abs() < e00.abs());
}

#[test]
fn formalisms_coincide_from_0_4_micron() {
    let engine = Casimir::default();
    let al = Material::aluminium();
    for a in [4e-7, 1e-6, 1e-5] {
        let l = engine
            .force_sphere0(
                a,
                1e-3,
                ImpedanceModel::lifshitz(ImpedanceKind::PlasmaExact),
                Some(&al),
            )
            .unwrap();
        let i = engine.force_sphere0(a, 1e-3, exact(), Some(&al)).unwrap();
        assert!(
            rel(i.value, l.value) < 1e-3,
            "a = {a}: {}",
            rel(i.value, l.value)
        );
    }
}

#[test]
fn normal_skin_force_matches_first_order_expansion() {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let model = ImpedanceModel::impedance(ImpedanceKind::NormalSkin);
    let numeric = engine.force_pp0(1e-3, model, Some(&al)).unwrap().value;
    let (_, first_order) = normal_skin_pert0(1e-3, &al, &K).unwrap();
    assert!(
        rel(numeric, first_order) < 5e-5,
        "{}",
        rel(numeric, first_order)
    );
}

#[test]
fn force_is_minus_energy_derivative_in_both_formalisms() {
    let engine = Casimir::new(QuadratureConfig::default().with_rel_tol(1e-11)).unwrap();
    let al = Material::aluminium();
    for kind in ImpedanceKind::ALL {
        let model = ImpedanceModel::lifshitz(kind);
        for a in [2e-7, 1e-6, 5e-6] {
            let h = 1e-3 * a;
            let ep = engine.energy_pp0(a + h, model, Some(&al)).unwrap().value;
            let em = engine.energy_pp0(a - h, model, Some(&al)).unwrap().value;
            let f = engine.force_pp0(a, model, Some(&al)).unwrap().value;
            assert!(rel(-(ep - em) / (2.0 * h), f) < 1e-4, "{model} at {a}");
        }
    }
}

#[test]
fn low_temperature_limits() {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let a = 1e-6;
    let t_eff = K.effective_temperature(a).unwrap();
    let cold = engine
        .energy_pp_t(a, 1e-3 * t_eff, exact(), Some(&al))
        .unwrap();
    let zero = engine.energy_pp0(a, exact(), Some(&al)).unwrap();
    assert!(cold.converged());
    assert!(
        rel(cold.value, zero.value) < 1e-4,
        "{}",
        rel(cold.value, zero.value)
    );

    let (_, f00) = ideal_closed_forms(a, &K).unwrap();
    let cold = engine
        .force_pp_t(a, 1e-2 * t_eff, ImpedanceModel::IDEAL, None)
        .unwrap();
    assert!(rel(cold.value, f00) < 1e-4);
}

#[test]
fn ideal_energy_at_one_millimetre_and_one_kelvin() {
    let engine = Casimir::default();
    let t_eff = K.effective_temperature(1e-3).unwrap();
    assert!((1.0 / t_eff - 0.8734).abs() < 1e-3);
    let e = engine.ideal_energy_t(1e-3, 1.0).unwrap();
    let (e00, _) = ideal_closed_forms(1e-3, &K).unwrap();
    assert!(e.is_finite() && e < e00);
}

#[test]
fn sphere_plate_thermal_force_is_a_pure_multiplier() {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let radius = 1e-4;
    let sphere = engine
        .sphere_plate_t(1e-6, radius, 300.0, exact(), Some(&al))
        .unwrap();
    let plates = engine.energy_pp_t(1e-6, 300.0, exact(), Some(&al)).unwrap();
    assert!(rel(sphere.value, 2.0 * PI * radius * plates.value) < 1e-12);
    let ideal = engine
        .sphere_plate_t(1e-6, radius, 300.0, ImpedanceModel::IDEAL, None)
        .unwrap();
    let e_ideal = engine.ideal_energy_t(1e-6, 300.0).unwrap();
    assert!(rel(ideal.value, 2.0 * PI * radius * e_ideal) < 1e-12);
    let doubled = engine
        .sphere_plate_t(1e-6, 2.0 * radius, 300.0, exact(), Some(&al))
        .unwrap();
    assert!(rel(doubled.value, 2.0 * sphere.value) < 1e-15);
}

#[test]
fn thermal_expansion_at_one_micron_room_temperature() {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let model = ImpedanceModel::lifshitz(ImpedanceKind::PlasmaExact);
    let e = engine
        .energy_pp_t_split(1e-6, 300.0, model, Some(&al))
        .unwrap();
    let f = engine
        .force_pp_t_split(1e-6, 300.0, model, Some(&al))
        .unwrap();
    let de = engine.delta_t_energy_pert(1e-6, 300.0, &al).unwrap();
    let df = engine.delta_t_force_pert(1e-6, 300.0, &al).unwrap();
    assert!(rel(de, e.decomposition.unwrap().delta_t_part) < 5e-4);
    assert!(rel(df, f.decomposition.unwrap().delta_t_part) < 5e-4);
}

#[test]
fn thermal_expansion_depends_on_skin_depth_only() {
    let engine = Casimir::default();
    let a = Material::new(1.9e16, 9.6e13).unwrap();
    let b = Material::new(1.9e16, 3.0e14).unwrap();
    assert_eq!(
        engine.delta_t_force_pert(1e-6, 300.0, &a).unwrap(),
        engine.delta_t_force_pert(1e-6, 300.0, &b).unwrap()
    );
}

#[test]
fn fourth_order_series_matches_numeric_force() {
    let engine = Casimir::new(QuadratureConfig::default().with_rel_tol(1e-12)).unwrap();
    let al = Material::aluminium();
    let numeric = engine.force_pp0(1e-6, exact(), Some(&al)).unwrap().value;
    let series = series_force(1e-6, &al, CoefficientVariant::ImpedanceExact, 4, &K).unwrap();
    assert!(rel(series, numeric) < 1e-5, "{}", rel(series, numeric));
}

fn fit(engine: &Casimir, model: ImpedanceModel) -> Vec<f64> {
    let al = Material::aluminium();
    let samples: Vec<_> = (0..16)
        .map(|i| 0.002 * 10f64.powf(i as f64 / 15.0))
        .map(|x| {
            let a = al.delta_0() / x;
            let (_, f00) = ideal_closed_forms(a, &K).unwrap();
            (
                x,
                engine.force_pp0(a, model, Some(&al)).unwrap().value / f00,
            )
        })
        .collect();
    recover_coefficients(&samples, 5).unwrap().coefficients
}

#[test]
fn fitted_low_order_coefficients_for_approximate_impedance() {
    let engine = Casimir::new(QuadratureConfig::default().with_rel_tol(1e-12)).unwrap();
    let c = fit(
        &engine,
        ImpedanceModel::impedance(ImpedanceKind::PlasmaApprox),
    );
    assert!(rel(c[1], -16.0 / 3.0) < 0.01, "{c:?}");
    assert!(rel(c[2], 24.0) < 0.05, "{c:?}");
}

#[test]
fn fitted_coefficients_for_exact_impedance() {
    let engine = Casimir::new(QuadratureConfig::default().with_rel_tol(1e-12)).unwrap();
    let c = fit(&engine, exact());
    let closed = coefficients(CoefficientVariant::ImpedanceExact).c;
    assert!(rel(c[1], closed[1]) < 1e-4, "{c:?}");
    assert!(rel(c[2], closed[2]) < 1e-3, "{c:?}");
    assert!(rel(c[3], closed[3]) < 0.02, "{c:?}");
}

#[test]
fn relative_deviation_signs_and_magnitudes() {
    let engine = Casimir::default();
    let al = Material::aluminium();
    let d = engine
        .relative_deviation(Quantity::Force, 1e-7, Some(&al), ImpedanceKind::PlasmaExact)
        .unwrap();
    assert!(d.converged());
    assert!(d.value.abs() < 5e-3);
    assert!(d.abs_error_estimate() < 1e-7);
    let far = engine
        .relative_deviation(
            Quantity::Force,
            1.2e-6,
            Some(&al),
            ImpedanceKind::PlasmaApprox,
        )
        .unwrap();
    assert!(far.value.abs() < 1e-2);
}
