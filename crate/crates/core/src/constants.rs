//! Physical constants, boundary-metal parameters, geometry and the reduced
//! (dimensionless) variables shared by every computation.
//!
//! Lengths, temperatures and frequencies cross the public surface in SI
//! units. The static conductivity is kept in Gaussian units (rad/s), so that
//! `c / (sigma * a)` is dimensionless whatever length unit is used.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use crate::error::{domain, require_positive, Error, Result};

/// Reduced Planck constant (J·s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant (J/K), exact.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// The constant set used by one run. Immutable after construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    c: f64,
    k_b: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        c: SPEED_OF_LIGHT,
        k_b: BOLTZMANN,
    };

    pub fn new(hbar: f64, c: f64, k_b: f64) -> Result<Self> {
        Ok(Self {
            hbar: require_positive("hbar", hbar)?,
            c: require_positive("c", c)?,
            k_b: require_positive("k_B", k_b)?,
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    /// `hbar * c`, the combination every prefactor is built from.
    pub fn hbar_c(&self) -> f64 {
        self.hbar * self.c
    }

    /// Dimensionless frequency `xi = 2 a zeta / c` for an imaginary
    /// frequency `zeta` (rad/s) at separation `a` (m).
    pub fn to_reduced(&self, zeta: f64, a: f64) -> Result<f64> {
        let a = require_positive("a", a)?;
        if !(zeta.is_finite() && zeta >= 0.0) {
            return Err(domain("zeta", zeta, "must be finite and >= 0"));
        }
        Ok(2.0 * a * zeta / self.c)
    }

    /// `k_B T_eff = hbar c / (2a)`: the temperature at which the thermal
    /// wavelength matches the gap.
    pub fn effective_temperature(&self, a: f64) -> Result<f64> {
        let a = require_positive("a", a)?;
        Ok(self.hbar * self.c / (2.0 * a * self.k_b))
    }

    /// Reduced Matsubara frequencies `xi_l = 2 pi (T / T_eff) l` for
    /// `l = 0..=l_max`.
    pub fn matsubara_frequencies(
        &self,
        temperature: f64,
        a: f64,
        l_max: usize,
    ) -> Result<Vec<f64>> {
        let temperature = require_positive("T", temperature)?;
        let step = 2.0 * PI * temperature / self.effective_temperature(a)?;
        Ok((0..=l_max).map(|l| step * l as f64).collect())
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Companion map of [`PhysicalConstants::to_reduced`] for the wave-vector
/// magnitude: `y = 2 R a`. The wave vector only exists inside quadrature.
pub fn to_reduced_y(wave_vector: f64, a: f64) -> Result<f64> {
    let a = require_positive("a", a)?;
    if !(wave_vector.is_finite() && wave_vector >= 0.0) {
        return Err(domain("R", wave_vector, "must be finite and >= 0"));
    }
    Ok(2.0 * wave_vector * a)
}

/// Boundary metal described by its effective plasma frequency and relaxation
/// parameter. The conductivity and skin depth are derived, never set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    omega_p: f64,
    gamma: f64,
    sigma: f64,
    delta_0: f64,
}

impl Material {
    pub fn new(omega_p: f64, gamma: f64) -> Result<Self> {
        Self::with_constants(omega_p, gamma, &PhysicalConstants::CODATA)
    }

    pub fn with_constants(omega_p: f64, gamma: f64, constants: &PhysicalConstants) -> Result<Self> {
        let omega_p = require_positive("omega_p", omega_p)?;
        let gamma = require_positive("gamma", gamma)?;
        if gamma >= omega_p {
            return Err(domain("gamma", gamma, "must be below omega_p"));
        }
        Ok(Self {
            omega_p,
            gamma,
            sigma: omega_p * omega_p / (4.0 * PI * gamma),
            delta_0: constants.c() / omega_p,
        })
    }

    /// Aluminium: `omega_p = 1.9e16 rad/s`, `gamma = 9.6e13 rad/s`.
    pub fn aluminium() -> Self {
        Self::new(1.9e16, 9.6e13).expect("aluminium preset is valid")
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "al" | "aluminium" | "aluminum" => Ok(Self::aluminium()),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }

    /// Plasma frequency (rad/s).
    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    /// Relaxation parameter (rad/s).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Static conductivity in Gaussian units (rad/s): `omega_p^2 / (4 pi gamma)`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Skin depth in the infrared region (m): `c / omega_p`.
    pub fn delta_0(&self) -> f64 {
        self.delta_0
    }

    /// Parses the `key=value` material format. Blank lines and `#` comments
    /// are skipped; both keys are required and any other key is rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut omega_p = None;
        let mut gamma = None;
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::MaterialFile {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{line}`")))?;
            let key = key.trim();
            let slot = match key {
                "omega_p_rad_s" => &mut omega_p,
                "gamma_rad_s" => &mut gamma,
                _ => return Err(bad(format!("unknown key `{key}`"))),
            };
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| bad(format!("`{}` is not a number", value.trim())))?;
            if slot.replace(value).is_some() {
                return Err(bad(format!("duplicate key `{key}`")));
            }
        }
        let missing = |key: &str| Error::MaterialFile {
            line: 0,
            message: format!("missing key `{key}`"),
        };
        Self::new(
            omega_p.ok_or_else(|| missing("omega_p_rad_s"))?,
            gamma.ok_or_else(|| missing("gamma_rad_s"))?,
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Serializes to the format accepted by [`Material::parse`].
    pub fn to_key_value(&self) -> String {
        format!(
            "omega_p_rad_s={:e}\ngamma_rad_s={:e}\n",
            self.omega_p, self.gamma
        )
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "omega_p={:e} rad/s, gamma={:e} rad/s",
            self.omega_p, self.gamma
        )
    }
}

/// Plate–plate gap, optionally with a sphere of radius `sphere_radius` above
/// the plate instead of a second plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    separation: f64,
    sphere_radius: Option<f64>,
}

/// Proximity-force results carry an error of order `a / R`; beyond this ratio
/// the result is flagged.
pub const PROXIMITY_WARNING_RATIO: f64 = 0.01;

impl Geometry {
    pub fn plates(a: f64) -> Result<Self> {
        Ok(Self {
            separation: require_positive("a", a)?,
            sphere_radius: None,
        })
    }

    pub fn sphere_plate(a: f64, sphere_radius: f64) -> Result<Self> {
        Ok(Self {
            separation: require_positive("a", a)?,
            sphere_radius: Some(require_positive("R_sph", sphere_radius)?),
        })
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn sphere_radius(&self) -> Option<f64> {
        self.sphere_radius
    }

    /// True when `a / R_sph` exceeds [`PROXIMITY_WARNING_RATIO`].
    pub fn proximity_warning(&self) -> bool {
        self.sphere_radius
            .is_some_and(|r| self.separation / r > PROXIMITY_WARNING_RATIO)
    }
}

/// Temperature together with the derived effective temperature of the gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    temperature: f64,
    effective_temperature: f64,
}

impl ThermalState {
    pub fn new(temperature: f64, a: f64, constants: &PhysicalConstants) -> Result<Self> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(domain("T", temperature, "must be finite and >= 0"));
        }
        Ok(Self {
            temperature,
            effective_temperature: constants.effective_temperature(a)?,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn effective_temperature(&self) -> f64 {
        self.effective_temperature
    }

    /// `t = T_eff / T`; infinite at zero temperature.
    pub fn t(&self) -> f64 {
        if self.temperature > 0.0 {
            self.effective_temperature / self.temperature
        } else {
            f64::INFINITY
        }
    }

    /// Spacing of the reduced Matsubara frequencies, `2 pi T / T_eff`.
    pub fn matsubara_step(&self) -> f64 {
        2.0 * PI * self.temperature / self.effective_temperature
    }
}
