//! Power series of the zero-temperature force in `delta_0 / a` and a
//! least-squares fit that recovers its coefficients from computed forces.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::constants::{Material, PhysicalConstants};
use crate::error::{domain, require_positive, Error, Result};
use crate::quad::riemann_zeta;
use crate::zero_t::ideal_closed_forms;

/// Series above this `delta_0 / a` are refused.
pub const SERIES_LIMIT: f64 = 0.3;
/// Series above this `delta_0 / a` are usable but flagged.
pub const SERIES_WARNING: f64 = 0.1;
/// Fits whose scaled Vandermonde matrix exceeds this condition number fail.
pub const MAX_CONDITION_NUMBER: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientVariant {
    /// Plasma permittivity in the Lifshitz formula.
    LifshitzPlasma,
    /// Exact plasma impedance.
    ImpedanceExact,
    /// Approximate plasma impedance `xi / wp~`.
    ImpedanceApprox,
}

impl CoefficientVariant {
    pub const ALL: [CoefficientVariant; 3] = [
        CoefficientVariant::LifshitzPlasma,
        CoefficientVariant::ImpedanceExact,
        CoefficientVariant::ImpedanceApprox,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoefficientVariant::LifshitzPlasma => "lifshitz-plasma",
            CoefficientVariant::ImpedanceExact => "impedance-exact",
            CoefficientVariant::ImpedanceApprox => "impedance-approx",
        }
    }
}

impl fmt::Display for CoefficientVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoefficientVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown coefficient variant `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub variant: CoefficientVariant,
    /// `c_0 .. c_4`
    pub c: [f64; 5],
}

/// Closed-form series coefficients of `variant`.
pub fn coefficients(variant: CoefficientVariant) -> CoefficientSet {
    let pi2 = PI * PI;
    let (c3, c4) = match variant {
        CoefficientVariant::LifshitzPlasma => (
            -640.0 / 7.0 * (1.0 - pi2 / 210.0),
            2800.0 / 9.0 * (1.0 - 163.0 * pi2 / 7350.0),
        ),
        CoefficientVariant::ImpedanceExact => (
            -640.0 / 7.0 * (1.0 + pi2 / 280.0),
            2800.0 / 9.0 * (1.0 + 5.0 * pi2 / 294.0),
        ),
        CoefficientVariant::ImpedanceApprox => {
            let z3 = riemann_zeta(3.0).expect("3 > 1");
            let z5 = riemann_zeta(5.0).expect("5 > 1");
            let pi4 = pi2 * pi2;
            (
                -11520.0 / (7.0 * pi4) * (z3 + z5 / 8.0),
                14000.0 / (3.0 * pi4) * (z3 + z5 / 2.0),
            )
        }
    };
    CoefficientSet {
        variant,
        c: [1.0, -16.0 / 3.0, 24.0, c3, c4],
    }
}

impl CoefficientSet {
    /// `Σ_{k <= order} c_k x^k`
    pub fn factor(&self, x: f64, order: usize) -> Result<f64> {
        if order > 4 {
            return Err(domain(
                "order",
                order as f64,
                "coefficients are known up to order 4",
            ));
        }
        Ok(self.c[..=order]
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c))
    }
}

/// Force per unit area from the truncated series,
/// `F_ideal(a) Σ_{k <= order} c_k (delta_0/a)^k`.
pub fn series_force(
    a: f64,
    material: &Material,
    variant: CoefficientVariant,
    order: usize,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let a = require_positive("a", a)?;
    let x = material.delta_0() / a;
    if x >= SERIES_LIMIT {
        return Err(domain(
            "delta_0/a",
            x,
            "the force series needs delta_0/a < 0.3",
        ));
    }
    let (_, f00) = ideal_closed_forms(a, constants)?;
    Ok(f00 * coefficients(variant).factor(x, order)?)
}

/// True when `delta_0 / a` is large enough for the series to be rough.
pub fn series_warning(a: f64, material: &Material) -> bool {
    material.delta_0() / a > SERIES_WARNING
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFit {
    /// Estimates of `c_0 .. c_order`.
    pub coefficients: Vec<f64>,
    /// Change of each coefficient per unit (2-norm) change of the sample
    /// ratios.
    pub sensitivities: Vec<f64>,
    /// Condition number of the scaled design matrix.
    pub condition_number: f64,
    /// Root-mean-square residual of the fit.
    pub residual_rms: f64,
}

/// Least-squares polynomial fit of force ratios `F / F_ideal` sampled at
/// `x = delta_0 / a`. The basis is `(x / x_max)^k`.
pub fn recover_coefficients(samples: &[(f64, f64)], order: usize) -> Result<CoefficientFit> {
    if samples.len() < order + 2 {
        return Err(Error::FitInput(format!(
            "{} samples for order {order}; need at least {}",
            samples.len(),
            order + 2
        )));
    }
    if let Some(&(x, r)) = samples
        .iter()
        .find(|(x, r)| !(x.is_finite() && r.is_finite() && *x > 0.0 && *x < 0.05))
    {
        return Err(Error::FitInput(format!(
            "sample ({x:e}, {r:e}) outside 0 < delta_0/a < 0.05"
        )));
    }
    let x_min = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let x_max = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if x_max < 10.0 * x_min * (1.0 - 1e-9) {
        return Err(Error::FitInput(format!(
            "samples span {x_min:e}..{x_max:e}, less than a decade"
        )));
    }

    let n = samples.len();
    let design = DMatrix::from_fn(n, order + 1, |i, k| (samples[i].0 / x_max).powi(k as i32));
    let rhs = DVector::from_iterator(n, samples.iter().map(|s| s.1));
    let svd = design.clone().svd(true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    let condition_number = if s_min > 0.0 {
        s_max / s_min
    } else {
        f64::INFINITY
    };
    if condition_number > MAX_CONDITION_NUMBER {
        return Err(Error::IllConditioned(condition_number));
    }
    let pinv = svd
        .pseudo_inverse(0.0)
        .map_err(|e| Error::FitInput(e.to_string()))?;
    let scaled = &pinv * &rhs;
    let residual = &design * &scaled - &rhs;
    let unscale = |k: usize| x_max.powi(-(k as i32));
    Ok(CoefficientFit {
        coefficients: (0..=order).map(|k| scaled[k] * unscale(k)).collect(),
        sensitivities: (0..=order)
            .map(|k| pinv.row(k).norm() * unscale(k))
            .collect(),
        condition_number,
        residual_rms: (residual.norm_squared() / n as f64).sqrt(),
    })
}
