//! Semi-infinite and wedge-shaped integrals, primed Matsubara sums and the
//! special functions used by the closed-form expansions.

mod gauss_kronrod;
mod special;
mod sum;

pub use special::{dilog, riemann_zeta};
pub use sum::CompensatedSum;

use crate::error::{domain, Error, Result};

/// Values below this are treated as zero when judging convergence.
pub const ABSOLUTE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    /// Length of the finite `y` window that replaces the infinite range;
    /// the integrands decay as `exp(-y)`.
    pub y_cutoff_margin: f64,
    /// Panel budget of each one-dimensional adaptive pass.
    pub max_subdivisions: usize,
    pub max_matsubara_terms: usize,
    pub series_tail_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            y_cutoff_margin: 45.0,
            max_subdivisions: 500,
            max_matsubara_terms: 1_000_000,
            series_tail_tol: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(domain("rel_tol", self.rel_tol, "must lie in (0, 1)"));
        }
        if !(self.y_cutoff_margin > 10.0 && self.y_cutoff_margin.is_finite()) {
            return Err(domain(
                "y_cutoff_margin",
                self.y_cutoff_margin,
                "must be finite and > 10",
            ));
        }
        if self.max_subdivisions < 10 {
            return Err(domain(
                "max_subdivisions",
                self.max_subdivisions as f64,
                "must be >= 10",
            ));
        }
        if self.max_matsubara_terms < 10 {
            return Err(domain(
                "max_matsubara_terms",
                self.max_matsubara_terms as f64,
                "must be >= 10",
            ));
        }
        if !(self.series_tail_tol > 0.0 && self.series_tail_tol < 1.0) {
            return Err(domain(
                "series_tail_tol",
                self.series_tail_tol,
                "must lie in (0, 1)",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            abs_error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    pub fn relative_error(&self) -> f64 {
        if self.value.abs() < ABSOLUTE_FLOOR {
            if self.abs_error_estimate < ABSOLUTE_FLOOR {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.abs_error_estimate / self.value.abs()
        }
    }

    /// Multiplies value and error by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.abs(),
            ..self
        }
    }
}

fn within(value: f64, error: f64, rel_tol: f64) -> bool {
    error <= rel_tol * value.abs() || value.abs() < ABSOLUTE_FLOOR && error < ABSOLUTE_FLOOR
}

fn checked(value: f64, xi: f64, y: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { xi, y, value })
    }
}

/// `∫_lower^∞ f(y) dy` for an exponentially decaying `f`, with the window
/// `[lower, lower + y_cutoff_margin]` integrated adaptively.
pub fn integrate_y_from<F>(
    mut f: F,
    lower: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    config.validate()?;
    if !(lower.is_finite() && lower >= 0.0) {
        return Err(domain("lower", lower, "must be finite and >= 0"));
    }
    inner(
        &mut |y| checked(f(y), lower, y),
        lower,
        config.rel_tol,
        config,
    )
}

fn inner<F>(
    f: &mut F,
    lower: f64,
    rel_tol: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let upper = lower + config.y_cutoff_margin;
    let r = gauss_kronrod::integrate(&mut *f, lower, upper, rel_tol, 0.0, config.max_subdivisions)?;
    // exp(-y) envelope: the discarded tail is about |f(upper)|
    let tail = 2.0 * f(upper)?.abs();
    let error = r.error + tail;
    Ok(QuadratureResult {
        value: r.value,
        abs_error_estimate: error,
        evaluations: r.evaluations + 1,
        converged: r.converged && within(r.value, error, rel_tol),
    })
}

/// `∫_0^∞ dξ ∫_ξ^∞ dy f(ξ, y)`, inner `y` first.
pub fn integrate_xi_y<F>(mut f: F, config: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64) -> f64,
{
    config.validate()?;
    let inner_tol = config.rel_tol / 10.0;
    let mut evaluations = 0;
    let mut all_converged = true;
    let mut worst_inner = 0.0f64;
    let mut slice = |xi: f64| -> Result<f64> {
        let r = inner(&mut |y| checked(f(xi, y), xi, y), xi, inner_tol, config)?;
        evaluations += r.evaluations;
        all_converged &= r.converged;
        worst_inner = worst_inner.max(r.relative_error().min(1.0));
        Ok(r.value)
    };
    let margin = config.y_cutoff_margin;
    // leave room in the budget for the inner errors
    let outer = gauss_kronrod::integrate(
        &mut slice,
        0.0,
        margin,
        0.5 * config.rel_tol,
        0.0,
        config.max_subdivisions,
    )?;
    let tail = 2.0 * slice(margin)?.abs();
    let error = outer.error + tail + worst_inner * outer.value.abs();
    Ok(QuadratureResult {
        value: outer.value,
        abs_error_estimate: error,
        evaluations,
        converged: outer.converged && all_converged && within(outer.value, error, config.rel_tol),
    })
}

/// `½ term(0) + Σ_{l≥1} term(l)`.
pub fn sum_matsubara_primed<F>(mut term: F, config: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(usize) -> f64,
{
    config.validate()?;
    sum_matsubara_weighted(|l| Ok(QuadratureResult::exact(term(l))), 0.5, config)
}

/// Matsubara-type sum whose terms carry their own error estimates; the
/// `l = 0` term is multiplied by `zero_weight` (one half for the primed
/// sum). Stops once a geometric
/// extrapolation of the last three terms falls below `series_tail_tol`
/// relative to the partial sum; the extrapolated tail is included in the
/// value and in the error.
pub fn sum_matsubara_weighted<F>(
    mut term: F,
    zero_weight: f64,
    config: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: FnMut(usize) -> Result<QuadratureResult>,
{
    let mut total = CompensatedSum::new();
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut terms_converged = true;
    let mut last = [0.0f64; 3];

    let mut push = |r: QuadratureResult, weight: f64, total: &mut CompensatedSum| {
        total.add(weight * r.value);
        error += weight * r.abs_error_estimate;
        evaluations += r.evaluations.max(1);
        terms_converged &= r.converged;
        r.value
    };

    let t0 = push(term(0)?, zero_weight, &mut total);
    last[2] = t0;
    for l in 1..config.max_matsubara_terms {
        let t = push(term(l)?, 1.0, &mut total);
        last = [last[1], last[2], t];
        if l < 2 {
            continue;
        }
        let [a, b, c] = last.map(f64::abs);
        if a == 0.0 && b == 0.0 && c == 0.0 {
            return Ok(finish(
                total.value(),
                error,
                evaluations,
                terms_converged,
                true,
            ));
        }
        let ratio = |num: f64, den: f64| if num == 0.0 { 0.0 } else { num / den };
        let r = ratio(c, b).max(ratio(b, a));
        if r < 1.0 {
            let tail = c * r / (1.0 - r);
            let partial = total.value();
            if tail <= config.series_tail_tol * partial.abs() || tail < ABSOLUTE_FLOOR {
                let signed_tail = tail.copysign(t);
                return Ok(finish(
                    partial + signed_tail,
                    error + tail,
                    evaluations,
                    terms_converged,
                    true,
                ));
            }
        }
    }
    Ok(finish(
        total.value(),
        error,
        evaluations,
        terms_converged,
        false,
    ))
}

fn finish(
    value: f64,
    error: f64,
    evaluations: usize,
    terms_converged: bool,
    tail_ok: bool,
) -> QuadratureResult {
    QuadratureResult {
        value,
        abs_error_estimate: error,
        evaluations,
        converged: terms_converged && tail_ok,
    }
}
