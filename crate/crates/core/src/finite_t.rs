//! Finite-temperature energies and forces as primed Matsubara sums, the
//! closed ideal-metal series and the perturbative thermal corrections.

use std::f64::consts::PI;

use crate::constants::{Geometry, Material, ThermalState};
use crate::error::{domain, require_positive, Result};
use crate::impedance::{ImpedanceKind, ImpedanceModel, ReducedModel};
use crate::quad::{self, dilog, riemann_zeta, CompensatedSum, QuadratureResult};
use crate::zero_t::{
    ideal_closed_forms, integrand, to_sphere_plate, Casimir, Decomposition, Observable,
    ObservableKind,
};

/// Largest `delta_0 / a` accepted by the perturbative thermal corrections.
pub const THERMAL_EXPANSION_LIMIT: f64 = 0.1;

/// Beyond this `pi l t` all summands are below 1e-34 relative.
const MAX_HYPERBOLIC_ARGUMENT: f64 = 40.0;

/// `e^{-2p}`, `coth p`, `coth p - 1` and `1/sinh² p` without overflow.
#[derive(Debug, Clone, Copy)]
struct Hyperbolic {
    q: f64,
    coth: f64,
    coth_m1: f64,
    inv_sh2: f64,
}

impl Hyperbolic {
    fn new(p: f64) -> Self {
        let q = (-2.0 * p).exp();
        let m = -(-2.0 * p).exp_m1();
        Self {
            q,
            coth: (1.0 + q) / m,
            coth_m1: 2.0 * q / m,
            inv_sh2: 4.0 * q / (m * m),
        }
    }
}

fn zeta(s: f64) -> f64 {
    riemann_zeta(s).expect("argument above one")
}

/// Sums exponentially small summands `term(l)`, `l >= 1`, until the
/// geometric tail with ratio `e^{-2 pi t}` is negligible.
fn sum_exponential_tail<F>(t: f64, tol: f64, max_terms: usize, mut term: F) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let mut total = CompensatedSum::new();
    let ratio = (-2.0 * PI * t).exp();
    for l in 1..=max_terms {
        let u = l as f64 * t;
        let p = PI * u;
        let value = term(u, p)?;
        total.add(value);
        let tail = value.abs() * ratio / (1.0 - ratio);
        if p > MAX_HYPERBOLIC_ARGUMENT || p > 1.0 && tail <= tol * total.value().abs() {
            return Ok(total.value());
        }
    }
    Ok(total.value())
}

impl Casimir {
    fn thermal(&self, a: f64, temperature: f64) -> Result<ThermalState> {
        require_positive("a", a)?;
        require_positive("T", temperature)?;
        ThermalState::new(temperature, a, &self.constants)
    }

    /// Ideal-metal energy per unit area at temperature `T` from the closed
    /// coth / sinh⁻² series.
    pub fn ideal_energy_t(&self, a: f64, temperature: f64) -> Result<f64> {
        let state = self.thermal(a, temperature)?;
        let tau = 1.0 / state.t();
        let (e00, _) = ideal_closed_forms(a, &self.constants)?;
        // coth = 1 + (coth - 1): the constant part sums to zeta(3)
        let rest =
            sum_exponential_tail(state.t(), 1e-17, self.config.max_matsubara_terms, |u, p| {
                let n = u * tau;
                let h = Hyperbolic::new(p);
                Ok(tau.powi(3) * h.coth_m1 / n.powi(3) + PI * tau * tau * h.inv_sh2 / (n * n))
            })?;
        let series = tau.powi(3) * zeta(3.0) + rest;
        Ok(e00 * (1.0 + 45.0 / PI.powi(3) * series - tau.powi(4)))
    }

    /// The same ideal-metal energy as a primed sum of integrals.
    pub fn ideal_energy_t_integral(&self, a: f64, temperature: f64) -> Result<QuadratureResult> {
        let state = self.thermal(a, temperature)?;
        let step = state.matsubara_step();
        let config = self.config.with_rel_tol(self.config.rel_tol / 10.0);
        let q = quad::sum_matsubara_weighted(
            |l| quad::integrate_y_from(integrand::energy_ideal, l as f64 * step, &config),
            0.5,
            &self.config,
        )?;
        Ok(q.scaled(self.energy_prefactor(a) * step))
    }

    /// Primed Matsubara sum of `∫_{xi_l}^∞ f(xi_l, y) dy` with `l = 0`
    /// weighted by `zero_weight`.
    pub fn matsubara_integral<F>(
        &self,
        step: f64,
        zero_weight: f64,
        f: F,
    ) -> Result<QuadratureResult>
    where
        F: Fn(f64, f64) -> f64,
    {
        let config = self.config.with_rel_tol(self.config.rel_tol / 10.0);
        quad::sum_matsubara_weighted(
            |l| {
                let xi = l as f64 * step;
                quad::integrate_y_from(|y| f(xi, y), xi, &config)
            },
            zero_weight,
            &self.config,
        )
    }

    fn thermal_observable(
        &self,
        kind: ObservableKind,
        a: f64,
        temperature: f64,
        model: ImpedanceModel,
        reduced: &ReducedModel,
        quadrature: QuadratureResult,
    ) -> Result<Observable> {
        Ok(Observable {
            kind,
            value: quadrature.value,
            geometry: Geometry::plates(a)?,
            model,
            temperature,
            quadrature,
            decomposition: None,
            warnings: self.model_warnings(reduced),
        })
    }

    /// Energy per unit area between plates at temperature `T > 0`.
    pub fn energy_pp_t(
        &self,
        a: f64,
        temperature: f64,
        model: ImpedanceModel,
        material: Option<&Material>,
    ) -> Result<Observable> {
        let state = self.thermal(a, temperature)?;
        let reduced = model.reduce(a, material, &self.constants)?;
        let ideal = self.ideal_energy_t(a, temperature)?;
        let quadrature = if model.kind == ImpedanceKind::IdealMetal {
            QuadratureResult::exact(ideal)
        } else {
            let step = state.matsubara_step();
            let q = self.matsubara_integral(step, 0.5, |xi, y| {
                integrand::energy_correction(reduced.factors(xi, y), y)
            })?;
            let q = q.scaled(self.energy_prefactor(a) * step);
            QuadratureResult {
                value: ideal + q.value,
                abs_error_estimate: q.abs_error_estimate + ideal.abs() * 1e-14,
                ..q
            }
        };
        self.thermal_observable(
            ObservableKind::EnergyPerArea,
            a,
            temperature,
            model,
            &reduced,
            quadrature,
        )
    }

    /// Force per unit area between plates at temperature `T > 0`; the ideal
    /// metal goes through the same sum with vanishing reflection factors.
    pub fn force_pp_t(
        &self,
        a: f64,
        temperature: f64,
        model: ImpedanceModel,
        material: Option<&Material>,
    ) -> Result<Observable> {
        let state = self.thermal(a, temperature)?;
        let reduced = model.reduce(a, material, &self.constants)?;
        let step = state.matsubara_step();
        let q = self.matsubara_integral(step, 0.5, |xi, y| {
            integrand::force(reduced.factors(xi, y), y)
        })?;
        let q = q.scaled(-self.force_prefactor(a) * step);
        self.thermal_observable(
            ObservableKind::ForcePerArea,
            a,
            temperature,
            model,
            &reduced,
            q,
        )
    }

    /// [`Casimir::energy_pp_t`] together with its split into the
    /// zero-temperature value and the thermal correction.
    pub fn energy_pp_t_split(
        &self,
        a: f64,
        temperature: f64,
        model: ImpedanceModel,
        material: Option<&Material>,
    ) -> Result<Observable> {
        let zero = self.energy_pp0(a, model, material)?;
        let mut total = self.energy_pp_t(a, temperature, model, material)?;
        total.decomposition = Some(Decomposition {
            zero_t_part: zero.value,
            delta_t_part: total.value - zero.value,
        });
        total.quadrature.converged &= zero.converged();
        Ok(total)
    }

    /// [`Casimir::force_pp_t`] together with its zero-temperature split.
    pub fn force_pp_t_split(
        &self,
        a: f64,
        temperature: f64,
        model: ImpedanceModel,
        material: Option<&Material>,
    ) -> Result<Observable> {
        let zero = self.force_pp0(a, model, material)?;
        let mut total = self.force_pp_t(a, temperature, model, material)?;
        total.decomposition = Some(Decomposition {
            zero_t_part: zero.value,
            delta_t_part: total.value - zero.value,
        });
        total.quadrature.converged &= zero.converged();
        Ok(total)
    }

    /// Sphere–plate force `2 pi R E_pp(a, T)`.
    pub fn sphere_plate_t(
        &self,
        a: f64,
        sphere_radius: f64,
        temperature: f64,
        model: ImpedanceModel,
        material: Option<&Material>,
    ) -> Result<Observable> {
        let geometry = Geometry::sphere_plate(a, sphere_radius)?;
        let energy = self.energy_pp_t(a, temperature, model, material)?;
        Ok(to_sphere_plate(energy, geometry))
    }

    /// Second-order expansion of the plasma-metal thermal energy correction
    /// in `delta_0 / a`.
    pub fn delta_t_energy_pert(
        &self,
        a: f64,
        temperature: f64,
        material: &Material,
    ) -> Result<f64> {
        self.delta_t_energy_pert_ratio(a, temperature, material.delta_0() / a)
    }

    /// As [`Casimir::delta_t_energy_pert`] with an explicit `delta_0 / a`.
    pub fn delta_t_energy_pert_ratio(&self, a: f64, temperature: f64, ratio: f64) -> Result<f64> {
        let t = self.expansion_inputs(a, temperature, ratio)?;
        let d = ratio;
        let (z3, z4, z5) = (zeta(3.0), zeta(4.0), zeta(5.0));
        // closed-form sums of the algebraic parts of the summands
        let head = PI * z3 / (2.0 * t.powi(3)) - z4 / t.powi(4)
            + d * (PI * z3 / t.powi(3) - 4.0 * z4 / t.powi(4))
            - d * d * PI * z5 / t.powi(5);
        let sum = sum_exponential_tail(t, 1e-17, self.config.max_matsubara_terms, |u, p| {
            let h = Hyperbolic::new(p);
            let b0 = PI / (2.0 * u.powi(3)) * h.coth_m1 + PI * PI / (2.0 * u * u) * h.inv_sh2;
            let b1 = PI / u.powi(3) * h.coth_m1
                + PI * PI / (u * u) * h.inv_sh2
                + 2.0 * PI.powi(3) / u * h.coth * h.inv_sh2;
            let log_term =
                2.0 * p * (-h.q).ln_1p() - 2.0 * p * p / (2.0 * p).exp_m1() - dilog(h.q)?;
            let b2 = 2.0
                * PI.powi(4)
                * h.inv_sh2
                * (1.0 - 3.0 * h.coth * h.coth + h.coth / p - 1.0 / (p * p))
                + 6.0 / (PI * u.powi(5)) * log_term;
            Ok(b0 + d * b1 - d * d * b2)
        })?;
        Ok(-self.constants.hbar_c() / (8.0 * PI * PI * a.powi(3)) * (head + sum))
    }

    /// Second-order expansion of the plasma-metal thermal force correction
    /// in `delta_0 / a`.
    pub fn delta_t_force_pert(&self, a: f64, temperature: f64, material: &Material) -> Result<f64> {
        self.delta_t_force_pert_ratio(a, temperature, material.delta_0() / a)
    }

    /// As [`Casimir::delta_t_force_pert`] with an explicit `delta_0 / a`.
    pub fn delta_t_force_pert_ratio(&self, a: f64, temperature: f64, ratio: f64) -> Result<f64> {
        let t = self.expansion_inputs(a, temperature, ratio)?;
        let d = ratio;
        let head = zeta(4.0) / t.powi(4) + d * PI * zeta(3.0) / t.powi(3);
        let sum = sum_exponential_tail(t, 1e-17, self.config.max_matsubara_terms, |u, p| {
            let h = Hyperbolic::new(p);
            let (c, s) = (h.coth, h.inv_sh2);
            let b0 = -PI.powi(3) / u * c * s;
            let b1 = PI * h.coth_m1 / u.powi(3)
                + PI.powi(3) / u * s * (4.0 * c + 2.0 * p - 6.0 * p * c * c + 1.0 / p);
            let b2 = 3.0 * PI.powi(3) / u
                * s
                * (-4.0 * p + 5.0 * p * p * c + 12.0 * p * c * c
                    - 8.0 * p * p * c.powi(3)
                    - 4.0 * c);
            Ok(b0 + d * b1 + d * d * b2)
        })?;
        Ok(-self.constants.hbar_c() / (8.0 * PI * PI * a.powi(4)) * (head + sum))
    }

    fn expansion_inputs(&self, a: f64, temperature: f64, ratio: f64) -> Result<f64> {
        let state = self.thermal(a, temperature)?;
        if !(0.0..THERMAL_EXPANSION_LIMIT).contains(&ratio) {
            return Err(domain(
                "delta_0/a",
                ratio,
                "thermal expansion needs 0 <= delta_0/a < 0.1",
            ));
        }
        Ok(state.t())
    }
}

/// Thermal correction of the ideal-metal energy, `E(T) - E(0)`, from the
/// closed series.
pub fn ideal_thermal_correction(engine: &Casimir, a: f64, temperature: f64) -> Result<f64> {
    let (e00, _) = ideal_closed_forms(a, engine.constants())?;
    Ok(engine.ideal_energy_t(a, temperature)? - e00)
}
