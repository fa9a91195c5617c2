//! Zero-temperature energies and forces between plates, the sphere–plate
//! force and the related closed forms.

use std::f64::consts::PI;
use std::fmt;

use crate::constants::{Geometry, Material, PhysicalConstants};
use crate::error::{domain, require_positive, Result};
use crate::impedance::{ImpedanceKind, ImpedanceModel, ReducedModel, ReflectionFactors};
use crate::quad::{self, riemann_zeta, QuadratureConfig, QuadratureResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObservableKind {
    /// J/m²
    EnergyPerArea,
    /// Pa
    ForcePerArea,
    /// N
    SpherePlateForce,
}

impl ObservableKind {
    pub fn unit(self) -> &'static str {
        match self {
            ObservableKind::EnergyPerArea => "J/m^2",
            ObservableKind::ForcePerArea => "Pa",
            ObservableKind::SpherePlateForce => "N",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// `a / R` is large enough for the proximity-force result to be rough.
    ProximityRatio { ratio: f64 },
    /// The approximate plasma impedance was evaluated beyond `xi = wp~`.
    ImpedanceBeyondValidity { reduced_plasma_frequency: f64 },
    /// A perturbative expansion parameter is large.
    ExpansionParameter { value: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ProximityRatio { ratio } => {
                write!(f, "a/R = {ratio:.3e}; proximity-force error is of this order")
            }
            Warning::ImpedanceBeyondValidity {
                reduced_plasma_frequency,
            } => write!(
                f,
                "approximate plasma impedance used above its validity limit xi = {reduced_plasma_frequency:.4}"
            ),
            Warning::ExpansionParameter { value } => {
                write!(f, "expansion parameter {value:.3e} is not small")
            }
        }
    }
}

/// `value = zero_t_part + delta_t_part`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub zero_t_part: f64,
    pub delta_t_part: f64,
}

/// A computed energy or force together with its inputs and numerical
/// diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub kind: ObservableKind,
    pub value: f64,
    pub geometry: Geometry,
    pub model: ImpedanceModel,
    /// Kelvin; zero for the zero-temperature operations.
    pub temperature: f64,
    /// Metadata of the underlying integral, scaled to physical units.
    pub quadrature: QuadratureResult,
    pub decomposition: Option<Decomposition>,
    pub warnings: Vec<Warning>,
}

impl Observable {
    pub fn converged(&self) -> bool {
        self.quadrature.converged
    }

    pub fn abs_error_estimate(&self) -> f64 {
        self.quadrature.abs_error_estimate
    }
}

/// Which plate–plate quantity a deviation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Energy,
    Force,
}

/// Signed deviation `(Q_ref - Q_test) / Q_ref` and the two observables.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub value: f64,
    pub reference: Observable,
    pub test: Observable,
}

impl Deviation {
    pub fn converged(&self) -> bool {
        self.reference.converged() && self.test.converged()
    }

    /// Error of `value` propagated from both quadratures.
    pub fn abs_error_estimate(&self) -> f64 {
        let r = &self.reference;
        let t = &self.test;
        (t.abs_error_estimate() + t.value.abs() * r.quadrature.relative_error()) / r.value.abs()
    }
}

pub mod integrand {
    //! Reduced integrands of the plate–plate energy and force.

    use crate::impedance::ReflectionFactors;

    /// `y [2 ln(1 - e^-y) + ln(1 + X∥/(e^y - 1)) + ln(1 + X⊥/(e^y - 1))]`.
    #[inline]
    pub fn energy(x: ReflectionFactors, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let em1 = y.exp_m1();
        y * (2.0 * (-(-y).exp()).ln_1p() + (x.x_par / em1).ln_1p() + (x.x_perp / em1).ln_1p())
    }

    /// The finite-conductivity part of [`energy`], without the ideal-metal
    /// logarithm.
    #[inline]
    pub fn energy_correction(x: ReflectionFactors, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let em1 = y.exp_m1();
        y * ((x.x_par / em1).ln_1p() + (x.x_perp / em1).ln_1p())
    }

    /// `2 y ln(1 - e^-y)`, the ideal-metal part of [`energy`].
    #[inline]
    pub fn energy_ideal(y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        2.0 * y * (-(-y).exp()).ln_1p()
    }

    /// `y² [(1 - X∥)/(e^y - 1 + X∥) + (1 - X⊥)/(e^y - 1 + X⊥)]`.
    #[inline]
    pub fn force(x: ReflectionFactors, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let em1 = y.exp_m1();
        y * y * ((1.0 - x.x_par) / (em1 + x.x_par) + (1.0 - x.x_perp) / (em1 + x.x_perp))
    }
}

/// `-π² ħc / (720 a³)` and `-π² ħc / (240 a⁴)`.
pub fn ideal_closed_forms(a: f64, constants: &PhysicalConstants) -> Result<(f64, f64)> {
    let a = require_positive("a", a)?;
    let hc = constants.hbar_c();
    Ok((
        -PI * PI * hc / (720.0 * a.powi(3)),
        -PI * PI * hc / (240.0 * a.powi(4)),
    ))
}

/// Coefficients of the first-order normal-skin corrections to the energy
/// and to the force, multiplying `sqrt(c / (sigma a))`.
pub fn normal_skin_coefficients() -> (f64, f64) {
    let z = riemann_zeta(3.5).expect("3.5 > 1");
    let scale = 2f64.sqrt() * z / PI.powi(4);
    (405.0 / 4.0 * scale, 945.0 / 8.0 * scale)
}

/// Largest `sqrt(c / (8 pi sigma a))` accepted by [`normal_skin_pert0`].
pub const NORMAL_SKIN_MAX_PARAMETER: f64 = 0.01;

/// Small parameter `1/sqrt(4 pi sigma~) = sqrt(c / (8 pi sigma a))` of the
/// normal skin effect.
pub fn normal_skin_parameter(
    a: f64,
    material: &Material,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let a = require_positive("a", a)?;
    Ok((constants.c() / (8.0 * PI * material.sigma() * a)).sqrt())
}

/// First-order normal-skin energy and force `(E, F)`.
pub fn normal_skin_pert0(
    a: f64,
    material: &Material,
    constants: &PhysicalConstants,
) -> Result<(f64, f64)> {
    let parameter = normal_skin_parameter(a, material, constants)?;
    if parameter >= NORMAL_SKIN_MAX_PARAMETER {
        return Err(domain(
            "sqrt(c/(8 pi sigma a))",
            parameter,
            "first-order normal-skin expansion needs this below 0.01",
        ));
    }
    let root = (constants.c() / (material.sigma() * a)).sqrt();
    let (ce, cf) = normal_skin_coefficients();
    let (e, f) = ideal_closed_forms(a, constants)?;
    Ok((e * (1.0 - ce * root), f * (1.0 - cf * root)))
}

/// Numerical engine bound to a set of constants and quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Casimir {
    pub(crate) constants: PhysicalConstants,
    pub(crate) config: QuadratureConfig,
}

impl Casimir {
    pub fn new(config: QuadratureConfig) -> Result<Self> {
        Self::with_constants(PhysicalConstants::CODATA, config)
    }

    pub fn with_constants(constants: PhysicalConstants, config: QuadratureConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { constants, config })
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.config
    }

    /// `ħc / (32 π² a³)`
    pub(crate) fn energy_prefactor(&self, a: f64) -> f64 {
        self.constants.hbar_c() / (32.0 * PI * PI * a.powi(3))
    }

    /// `ħc / (32 π² a⁴)`
    pub(crate) fn force_prefactor(&self, a: f64) -> f64 {
        self.constants.hbar_c() / (32.0 * PI * PI * a.powi(4))
    }

    /// Reduced energy integral over the wedge `0 <= xi <= y` for arbitrary
    /// reflection factors.
    pub fn energy_integral<F>(&self, factors: F) -> Result<QuadratureResult>
    where
        F: Fn(f64, f64) -> ReflectionFactors,
    {
        quad::integrate_xi_y(|xi, y| integrand::energy(factors(xi, y), y), &self.config)
    }

    /// Reduced force integral over the wedge for arbitrary reflection factors.
    pub fn force_integral<F>(&self, factors: F) -> Result<QuadratureResult>
    where
        F: Fn(f64, f64) -> ReflectionFactors,
    {
        quad::integrate_xi_y(|xi, y| integrand::force(factors(xi, y), y), &self.config)
    }

    pub(crate) fn model_warnings(&self, reduced: &ReducedModel) -> Vec<Warning> {
        let mut warnings = Vec::new();
        if reduced.exceeds_validity(self.config.y_cutoff_margin) {
            warnings.push(Warning::ImpedanceBeyondValidity {
                reduced_plasma_frequency: reduced.reduced_plasma_frequency(),
            });
        }
        warnings
    }

    /// Energy per unit area between two plates at zero temperature.
    pub fn energy_pp0(
        &self,
        a: f64,
        model: ImpedanceModel,
        material: Option<&Material>,
    ) -> Result<Observable> {
        let reduced = model.reduce(a, material, &self.constants)?;
        let q = self.energy_integral(|xi, y| reduced.factors(xi, y))?;
        Ok(Observable {
            kind: ObservableKind::EnergyPerArea,
            value: self.energy_prefactor(a) * q.value,
            geometry: Geometry::plates(a)?,
            model,
            temperature: 0.0,
            quadrature: q.scaled(self.energy_prefactor(a)),
            decomposition: None,
            warnings: self.model_warnings(&reduced),
        })
    }

    /// Force per unit area between two plates at zero temperature; negative
    /// values attract.
    pub fn force_pp0(
        &self,
        a: f64,
        model: ImpedanceModel,
        material: Option<&Material>,
    ) -> Result<Observable> {
        let reduced = model.reduce(a, material, &self.constants)?;
        let q = self.force_integral(|xi, y| reduced.factors(xi, y))?;
        let scale = -self.force_prefactor(a);
        Ok(Observable {
            kind: ObservableKind::ForcePerArea,
            value: scale * q.value,
            geometry: Geometry::plates(a)?,
            model,
            temperature: 0.0,
            quadrature: q.scaled(scale),
            decomposition: None,
            warnings: self.model_warnings(&reduced),
        })
    }

    /// Sphere–plate force `2 pi R E_pp(a)`.
    pub fn force_sphere0(
        &self,
        a: f64,
        sphere_radius: f64,
        model: ImpedanceModel,
        material: Option<&Material>,
    ) -> Result<Observable> {
        let geometry = Geometry::sphere_plate(a, sphere_radius)?;
        let energy = self.energy_pp0(a, model, material)?;
        Ok(to_sphere_plate(energy, geometry))
    }

    /// Signed deviation of the impedance result from the Lifshitz-type
    /// reference for the same metal. Both plasma impedances are compared
    /// against the plasma permittivity, i.e. the exact plasma impedance
    /// inserted into the Lifshitz reflection factors.
    pub fn relative_deviation(
        &self,
        quantity: Quantity,
        a: f64,
        material: Option<&Material>,
        kind: ImpedanceKind,
    ) -> Result<Deviation> {
        let reference_kind = match kind {
            ImpedanceKind::PlasmaApprox => ImpedanceKind::PlasmaExact,
            other => other,
        };
        self.relative_deviation_between(
            quantity,
            a,
            material,
            ImpedanceModel::lifshitz(reference_kind),
            ImpedanceModel::impedance(kind),
        )
    }

    /// `(Q_reference - Q_test) / Q_reference` for arbitrary models.
    pub fn relative_deviation_between(
        &self,
        quantity: Quantity,
        a: f64,
        material: Option<&Material>,
        reference: ImpedanceModel,
        test: ImpedanceModel,
    ) -> Result<Deviation> {
        let eval = |model| match quantity {
            Quantity::Energy => self.energy_pp0(a, model, material),
            Quantity::Force => self.force_pp0(a, model, material),
        };
        let reference = eval(reference)?;
        let test = eval(test)?;
        Ok(Deviation {
            value: (reference.value - test.value) / reference.value,
            reference,
            test,
        })
    }
}

pub(crate) fn to_sphere_plate(energy: Observable, geometry: Geometry) -> Observable {
    let radius = geometry.sphere_radius().expect("sphere geometry");
    let scale = 2.0 * PI * radius;
    let mut warnings = energy.warnings;
    if geometry.proximity_warning() {
        warnings.push(Warning::ProximityRatio {
            ratio: geometry.separation() / radius,
        });
    }
    Observable {
        kind: ObservableKind::SpherePlateForce,
        value: scale * energy.value,
        geometry,
        model: energy.model,
        temperature: energy.temperature,
        quadrature: energy.quadrature.scaled(scale),
        decomposition: energy.decomposition.map(|d| Decomposition {
            zero_t_part: scale * d.zero_t_part,
            delta_t_part: scale * d.delta_t_part,
        }),
        warnings,
    }
}
