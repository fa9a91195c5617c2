//! Imaginary-axis surface impedance models and the per-polarization
//! reflection factors built from them.
//!
//! Every reflection factor has the shape `4v / (1 + v)^2` for some
//! non-negative `v`, which keeps it in `[0, 1]`. The quantities `v` are
//! written in terms of both `Z` and the ratio `Z / xi`, so the zero-frequency
//! limit is taken analytically rather than through `0 / 0`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::constants::{Material, PhysicalConstants};
use crate::error::{domain, require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImpedanceKind {
    /// `Z = 0` at all frequencies.
    IdealMetal,
    /// Infrared optics with a spherical Fermi surface: `Z = xi / sqrt(wp^2 + xi^2)`.
    PlasmaExact,
    /// Low-frequency form of the above: `Z = xi / wp`.
    PlasmaApprox,
    /// Normal skin effect: `Z = sqrt(xi / (4 pi sigma))`.
    NormalSkin,
}

impl ImpedanceKind {
    pub const ALL: [ImpedanceKind; 4] = [
        ImpedanceKind::IdealMetal,
        ImpedanceKind::PlasmaExact,
        ImpedanceKind::PlasmaApprox,
        ImpedanceKind::NormalSkin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ImpedanceKind::IdealMetal => "ideal",
            ImpedanceKind::PlasmaExact => "plasma-exact",
            ImpedanceKind::PlasmaApprox => "plasma-approx",
            ImpedanceKind::NormalSkin => "normal-skin",
        }
    }

    pub fn needs_material(self) -> bool {
        self != ImpedanceKind::IdealMetal
    }
}

impl fmt::Display for ImpedanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ImpedanceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ImpedanceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown model `{s}` (expected ideal, plasma-exact, plasma-approx or normal-skin)"))
    }
}

/// Which reflection factors the impedance feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formalism {
    /// Impedance boundary conditions on both plates.
    Impedance,
    /// The substitution that reproduces the Lifshitz formula for `eps = 1/Z^2`.
    Lifshitz,
}

impl Formalism {
    pub fn name(self) -> &'static str {
        match self {
            Formalism::Impedance => "impedance",
            Formalism::Lifshitz => "lifshitz",
        }
    }
}

impl fmt::Display for Formalism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formalism {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "impedance" => Ok(Formalism::Impedance),
            "lifshitz" => Ok(Formalism::Lifshitz),
            _ => Err(format!(
                "unknown formalism `{s}` (expected impedance or lifshitz)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ImpedanceModel {
    pub kind: ImpedanceKind,
    pub formalism: Formalism,
}

impl ImpedanceModel {
    pub const IDEAL: ImpedanceModel = ImpedanceModel::impedance(ImpedanceKind::IdealMetal);

    pub const fn new(kind: ImpedanceKind, formalism: Formalism) -> Self {
        Self { kind, formalism }
    }

    pub const fn impedance(kind: ImpedanceKind) -> Self {
        Self::new(kind, Formalism::Impedance)
    }

    pub const fn lifshitz(kind: ImpedanceKind) -> Self {
        Self::new(kind, Formalism::Lifshitz)
    }

    /// Binds the model to a separation and material.
    pub fn reduce(
        &self,
        a: f64,
        material: Option<&Material>,
        constants: &PhysicalConstants,
    ) -> Result<ReducedModel> {
        ReducedModel::new(*self, a, material, constants)
    }
}

impl fmt::Display for ImpedanceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.kind, self.formalism)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionFactors {
    pub x_par: f64,
    pub x_perp: f64,
}

impl ReflectionFactors {
    pub const ZERO: ReflectionFactors = ReflectionFactors {
        x_par: 0.0,
        x_perp: 0.0,
    };
}

/// Impedance value at one reduced frequency, with `Z / xi` carried
/// separately so that its `xi -> 0` limit is available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceImpedance {
    pub z: f64,
    /// `Z / xi`; may be `+inf` at `xi = 0`.
    pub z_over_xi: f64,
}

impl SurfaceImpedance {
    /// Builds the pair from `Z` alone. At `xi = 0` the slope is unknown, so
    /// `Z = 0` is read as a vanishing slope.
    pub fn from_z(z: f64, xi: f64) -> Self {
        let z_over_xi = if xi > 0.0 {
            z / xi
        } else if z == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self { z, z_over_xi }
    }
}

/// `4v / (1+v)^2`, evaluated without overflow; zero at `v = 0` and `v = inf`.
#[inline]
fn bell(v: f64) -> f64 {
    if v == 0.0 || v.is_infinite() {
        0.0
    } else {
        4.0 / (v + 2.0 + 1.0 / v)
    }
}

/// Reflection factors from a [`SurfaceImpedance`]; `y >= xi >= 0` is assumed.
#[inline]
pub fn factors(imp: SurfaceImpedance, y: f64, xi: f64, formalism: Formalism) -> ReflectionFactors {
    if y == 0.0 || imp.z == 0.0 && imp.z_over_xi == 0.0 {
        return ReflectionFactors::ZERO;
    }
    let SurfaceImpedance { z, z_over_xi: rho } = imp;
    match formalism {
        Formalism::Impedance => ReflectionFactors {
            x_par: bell(xi * z / y),
            x_perp: bell(y * rho),
        },
        Formalism::Lifshitz => {
            let gap = (y - xi) * (y + xi);
            let s = (xi * xi + gap * z * z).sqrt();
            // y Z / s rewritten through rho so that xi = 0 stays finite
            let w = if rho == 0.0 {
                0.0
            } else {
                y / (1.0 / (rho * rho) + gap).sqrt()
            };
            ReflectionFactors {
                x_par: bell(z * s / y),
                x_perp: bell(w),
            }
        }
    }
}

/// Reflection factors for a bare impedance value `z`.
///
/// At `xi = 0` only the value of `Z` is known, not its slope; a vanishing
/// `Z` then gives `(0, 0)`. Use [`ReducedModel::factors`] for the model
/// limits at zero frequency.
pub fn reflection_factors(
    z: f64,
    y: f64,
    xi: f64,
    formalism: Formalism,
) -> Result<ReflectionFactors> {
    if !(xi.is_finite() && xi >= 0.0) {
        return Err(domain("xi", xi, "must be finite and >= 0"));
    }
    if !(y.is_finite() && y >= xi) {
        return Err(domain("y", y, "must be finite and >= xi"));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(domain("Z", z, "must be finite and >= 0"));
    }
    Ok(factors(SurfaceImpedance::from_z(z, xi), y, xi, formalism))
}

/// A model bound to one separation: the material parameters are already in
/// reduced form, `wp~ = 2 a omega_p / c` and `sigma~ = 2 a sigma / c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedModel {
    model: ImpedanceModel,
    omega_p: f64,
    four_pi_sigma: f64,
}

impl ReducedModel {
    pub fn new(
        model: ImpedanceModel,
        a: f64,
        material: Option<&Material>,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        let a = require_positive("a", a)?;
        let (omega_p, sigma) = match (model.kind, material) {
            (ImpedanceKind::IdealMetal, _) => (f64::INFINITY, f64::INFINITY),
            (kind, None) => return Err(Error::MissingMaterial(kind)),
            (_, Some(m)) => (
                2.0 * a * m.omega_p() / constants.c(),
                2.0 * a * m.sigma() / constants.c(),
            ),
        };
        Ok(Self {
            model,
            omega_p,
            four_pi_sigma: 4.0 * PI * sigma,
        })
    }

    pub fn model(&self) -> ImpedanceModel {
        self.model
    }

    /// Reduced plasma frequency `2 a omega_p / c` (infinite for the ideal metal).
    pub fn reduced_plasma_frequency(&self) -> f64 {
        self.omega_p
    }

    /// Reduced conductivity `2 a sigma / c` (infinite for the ideal metal).
    pub fn reduced_conductivity(&self) -> f64 {
        self.four_pi_sigma / (4.0 * PI)
    }

    /// `Z` and `Z / xi` at reduced frequency `xi >= 0`.
    #[inline]
    pub fn surface_impedance(&self, xi: f64) -> SurfaceImpedance {
        let wp = self.omega_p;
        match self.model.kind {
            ImpedanceKind::IdealMetal => SurfaceImpedance {
                z: 0.0,
                z_over_xi: 0.0,
            },
            ImpedanceKind::PlasmaExact => {
                let rho = 1.0 / wp.hypot(xi);
                SurfaceImpedance {
                    z: xi * rho,
                    z_over_xi: rho,
                }
            }
            ImpedanceKind::PlasmaApprox => SurfaceImpedance {
                z: xi / wp,
                z_over_xi: 1.0 / wp,
            },
            ImpedanceKind::NormalSkin => {
                let z = (xi / self.four_pi_sigma).sqrt();
                let z_over_xi = if xi > 0.0 {
                    1.0 / (xi * self.four_pi_sigma).sqrt()
                } else {
                    f64::INFINITY
                };
                SurfaceImpedance { z, z_over_xi }
            }
        }
    }

    #[inline]
    pub fn impedance(&self, xi: f64) -> f64 {
        self.surface_impedance(xi).z
    }

    /// Reflection factors at `(xi, y)`, using the continuous extension at
    /// `xi = 0`.
    #[inline]
    pub fn factors(&self, xi: f64, y: f64) -> ReflectionFactors {
        if self.model.kind == ImpedanceKind::IdealMetal {
            return ReflectionFactors::ZERO;
        }
        factors(self.surface_impedance(xi), y, xi, self.model.formalism)
    }

    /// True if the approximate plasma impedance is used beyond `xi = wp~`,
    /// where it exceeds one and leaves its range of validity.
    pub fn exceeds_validity(&self, xi_max: f64) -> bool {
        self.model.kind == ImpedanceKind::PlasmaApprox && xi_max > self.omega_p
    }
}

/// Dimensionless impedance of `kind` at reduced frequency `xi` and
/// separation `a`.
pub fn impedance(
    kind: ImpedanceKind,
    xi: f64,
    a: f64,
    material: Option<&Material>,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(xi.is_finite() && xi >= 0.0) {
        return Err(domain("xi", xi, "must be finite and >= 0"));
    }
    Ok(ReducedModel::new(ImpedanceModel::impedance(kind), a, material, constants)?.impedance(xi))
}
