//! Evaluation of a [`RunSpec`] into a table of CSV rows.

use std::io::Write;

use casimir_core::series::{coefficients, recover_coefficients, CoefficientVariant};
use casimir_core::zero_t::ideal_closed_forms;
use casimir_core::{
    Casimir, Deviation, ImpedanceKind, ImpedanceModel, Material, Observable, QuadratureConfig,
    Quantity,
};
use rayon::prelude::*;

use crate::spec::{Command, RunSpec};
use crate::{CliError, Result};

/// Order of the polynomial fitted by `coefficients`; two orders above the
/// highest reported coefficient so truncation does not leak into `c_4`.
const FIT_ORDER: usize = 5;
const REPORTED_ORDERS: usize = 5;
/// `delta_0 / a` range sampled by `coefficients` when no grid is given.
const FIT_RANGE: (f64, f64) = (0.002, 0.02);
const FIT_SAMPLES: usize = 16;
/// The fit amplifies quadrature noise strongly, so the default tolerance is
/// tighter than for plain evaluations.
const FIT_REL_TOL: f64 = 1e-12;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub values: Vec<f64>,
    pub converged: bool,
}

/// Computed output of a run: provenance header, column names and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Header,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
    /// Human-readable diagnostics, deduplicated, for stderr.
    pub warnings: Vec<String>,
}

impl Report {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    /// `#`-prefixed `key=value` header lines, a `# columns=` line, then one
    /// comma-separated row per line with 17 significant digits.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        for (key, value) in &self.header {
            writeln!(out, "# {key}={value}")?;
        }
        writeln!(out, "# columns={},converged", self.columns.join(","))?;
        for row in &self.rows {
            for v in &row.values {
                write!(out, "{v:.16e},")?;
            }
            writeln!(out, "{}", u8::from(row.converged))?;
        }
        Ok(())
    }
}

fn resolve_material(name: &str) -> Result<Material> {
    match Material::preset(name) {
        Ok(m) => Ok(m),
        Err(_) => Material::load(name).map_err(|e| CliError::Field {
            field: "material".into(),
            message: format!("`{name}` is neither a preset (Al) nor a readable material file: {e}"),
        }),
    }
}

struct Context {
    engine: Casimir,
    material: Option<Material>,
    model: ImpedanceModel,
    temperature: f64,
    sphere_radius: Option<f64>,
}

type Computed = (Row, Vec<String>);

/// Provenance `key=value` pairs.
pub type Header = Vec<(String, String)>;

fn warnings_of<'a>(observables: impl IntoIterator<Item = &'a Observable>) -> Vec<String> {
    observables
        .into_iter()
        .flat_map(|o| o.warnings.iter().map(|w| w.to_string()))
        .collect()
}

impl Context {
    fn material(&self) -> Option<&Material> {
        self.material.as_ref()
    }

    fn point(&self, a: f64) -> Result<Computed> {
        let (energy, force, sphere) = if self.temperature == 0.0 {
            let sphere = self
                .sphere_radius
                .map(|r| self.engine.force_sphere0(a, r, self.model, self.material()))
                .transpose()?;
            (
                self.engine.energy_pp0(a, self.model, self.material())?,
                self.engine.force_pp0(a, self.model, self.material())?,
                sphere,
            )
        } else {
            let t = self.temperature;
            let sphere = self
                .sphere_radius
                .map(|r| {
                    self.engine
                        .sphere_plate_t(a, r, t, self.model, self.material())
                })
                .transpose()?;
            (
                self.engine.energy_pp_t(a, t, self.model, self.material())?,
                self.engine.force_pp_t(a, t, self.model, self.material())?,
                sphere,
            )
        };
        let mut values = vec![
            a,
            self.temperature,
            energy.value,
            energy.abs_error_estimate(),
            force.value,
            force.abs_error_estimate(),
        ];
        let mut all = vec![&energy, &force];
        if let Some(s) = &sphere {
            values.extend([s.value, s.abs_error_estimate()]);
            all.push(s);
        }
        let converged = all.iter().all(|o| o.converged());
        Ok((Row { values, converged }, warnings_of(all)))
    }

    fn deviations(&self, a: f64, quantity: Quantity) -> Result<Computed> {
        let d = |kind| {
            self.engine
                .relative_deviation(quantity, a, self.material(), kind)
        };
        let exact: Deviation = d(ImpedanceKind::PlasmaExact)?;
        let approx: Deviation = d(ImpedanceKind::PlasmaApprox)?;
        let row = Row {
            values: vec![
                a,
                exact.value,
                approx.value,
                exact.abs_error_estimate(),
                approx.abs_error_estimate(),
            ],
            converged: exact.converged() && approx.converged(),
        };
        let warnings = warnings_of([
            &exact.reference,
            &exact.test,
            &approx.reference,
            &approx.test,
        ]);
        Ok((row, warnings))
    }

    fn thermal_ratio(&self, a: f64) -> Result<Computed> {
        let (m, t) = (self.material(), self.temperature);
        let ideal = ImpedanceModel::IDEAL;
        let (energy, force, e_ideal, f_ideal) = if t == 0.0 {
            let (e00, f00) = ideal_closed_forms(a, self.engine.constants())?;
            let e = self.engine.energy_pp0(a, self.model, m)?;
            let f = self.engine.force_pp0(a, self.model, m)?;
            (e, f, e00, (f00, 0.0, true))
        } else {
            let e = self.engine.energy_pp_t(a, t, self.model, m)?;
            let f = self.engine.force_pp_t(a, t, self.model, m)?;
            let fi = self.engine.force_pp_t(a, t, ideal, None)?;
            let e_ideal = self.engine.ideal_energy_t(a, t)?;
            (
                e,
                f,
                e_ideal,
                (fi.value, fi.quadrature.relative_error(), fi.converged()),
            )
        };
        let (f_ideal, f_ideal_rel, f_ideal_converged) = f_ideal;
        let row = Row {
            values: vec![
                a,
                t,
                energy.value / e_ideal,
                energy.abs_error_estimate() / e_ideal.abs(),
                force.value / f_ideal,
                (force.abs_error_estimate() + force.value.abs() * f_ideal_rel) / f_ideal.abs(),
            ],
            converged: energy.converged() && force.converged() && f_ideal_converged,
        };
        Ok((row, warnings_of([&energy, &force])))
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Field {
        field: "CASIMIR_THREADS".into(),
        message: e.to_string(),
    })
}

/// Evaluates `f` at every separation on a pool of `threads` workers (all
/// cores when `None`); results stay in input order.
fn compute_rows<F>(
    separations: &[f64],
    threads: Option<usize>,
    f: F,
) -> Result<(Vec<Row>, Vec<String>)>
where
    F: Fn(f64) -> Result<Computed> + Sync,
{
    let computed: Vec<Computed> = pool(threads)?.install(|| {
        separations
            .par_iter()
            .map(|&a| f(a))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut warnings: Vec<String> = Vec::new();
    let rows = computed
        .into_iter()
        .map(|(row, w)| {
            for w in w {
                if !warnings.contains(&w) {
                    warnings.push(w);
                }
            }
            row
        })
        .collect();
    Ok((rows, warnings))
}

fn header(spec: &RunSpec, material: Option<&Material>, engine: &Casimir) -> Header {
    let k = engine.constants();
    let q = engine.config();
    let mut h: Header = vec![
        ("tool".into(), format!("casimir-cli {VERSION}")),
        ("command".into(), spec.command.to_string()),
        ("hbar_J_s".into(), format!("{:e}", k.hbar())),
        ("c_m_s".into(), format!("{:e}", k.c())),
        ("k_B_J_K".into(), format!("{:e}", k.k_b())),
    ];
    if let (Some(name), Some(m)) = (&spec.material, material) {
        h.push(("material".into(), name.clone()));
        h.push(("omega_p_rad_s".into(), format!("{:e}", m.omega_p())));
        h.push(("gamma_rad_s".into(), format!("{:e}", m.gamma())));
        h.push(("delta_0_m".into(), format!("{:e}", m.delta_0())));
    }
    let (model, formalism) = match spec.command {
        Command::Figure1 | Command::Figure2 => (
            "plasma-exact,plasma-approx".to_string(),
            "impedance vs lifshitz plasma-exact".to_string(),
        ),
        _ => (spec.model.to_string(), spec.formalism.to_string()),
    };
    h.push(("model".into(), model));
    h.push(("formalism".into(), formalism));
    h.push(("T_K".into(), format!("{:e}", spec.temperature)));
    if let Some(r) = spec.sphere_radius {
        h.push(("R_m".into(), format!("{r:e}")));
    }
    h.push(("rel_tol".into(), format!("{:e}", q.rel_tol)));
    h.push(("y_cutoff_margin".into(), format!("{:e}", q.y_cutoff_margin)));
    h.push(("max_subdivisions".into(), q.max_subdivisions.to_string()));
    h.push((
        "max_matsubara_terms".into(),
        q.max_matsubara_terms.to_string(),
    ));
    h.push(("series_tail_tol".into(), format!("{:e}", q.series_tail_tol)));
    h
}

/// Runs `spec` with at most `threads` workers.
pub fn run(spec: &RunSpec, threads: Option<usize>) -> Result<Report> {
    let material = spec.material.as_deref().map(resolve_material).transpose()?;
    let default_tol = match spec.command {
        Command::Coefficients => FIT_REL_TOL,
        _ => QuadratureConfig::default().rel_tol,
    };
    let mut config = QuadratureConfig::default().with_rel_tol(spec.rel_tol.unwrap_or(default_tol));
    if let Some(n) = spec.max_subdivisions {
        config.max_subdivisions = n;
    }
    let engine = Casimir::new(config)?;
    let mut header = header(spec, material.as_ref(), &engine);
    let ctx = Context {
        engine,
        material,
        model: ImpedanceModel::new(spec.model, spec.formalism),
        temperature: spec.temperature,
        sphere_radius: spec.sphere_radius,
    };
    let separations = spec.separations();

    let (columns, rows, warnings) = match spec.command {
        Command::Point | Command::Scan => {
            let mut columns = vec![
                "a_m",
                "T_K",
                "energy_J_m2",
                "energy_err",
                "force_N_m2",
                "force_err",
            ];
            if spec.sphere_radius.is_some() {
                columns.extend(["sphere_force_N", "sphere_force_err"]);
            }
            let (rows, w) = compute_rows(&separations, threads, |a| ctx.point(a))?;
            (columns, rows, w)
        }
        Command::Figure1 | Command::Figure2 => {
            let (quantity, columns) = if spec.command == Command::Figure1 {
                (
                    Quantity::Force,
                    vec![
                        "a_m",
                        "deltaF_exact",
                        "deltaF_approx",
                        "deltaF_exact_err",
                        "deltaF_approx_err",
                    ],
                )
            } else {
                (
                    Quantity::Energy,
                    vec![
                        "a_m",
                        "deltaE_exact",
                        "deltaE_approx",
                        "deltaE_exact_err",
                        "deltaE_approx_err",
                    ],
                )
            };
            let (rows, w) = compute_rows(&separations, threads, |a| ctx.deviations(a, quantity))?;
            (columns, rows, w)
        }
        Command::ThermalRatio => {
            let columns = vec![
                "a_m",
                "T_K",
                "energy_ratio",
                "energy_ratio_err",
                "force_ratio",
                "force_ratio_err",
            ];
            let (rows, w) = compute_rows(&separations, threads, |a| ctx.thermal_ratio(a))?;
            (columns, rows, w)
        }
        Command::Coefficients => {
            let (rows, extra) = coefficient_rows(&ctx, spec, threads)?;
            header.extend(extra);
            let columns = vec![
                "order",
                "c_lifshitz_plasma",
                "c_impedance_exact",
                "c_impedance_approx",
                "c_fit",
                "c_fit_err",
            ];
            (columns, rows, Vec::new())
        }
    };
    Ok(Report {
        header,
        columns,
        rows,
        warnings,
    })
}

/// Closed-form coefficients of the three variants next to a least-squares
/// fit of the numeric force ratios `F / F_ideal` of the selected model.
fn coefficient_rows(
    ctx: &Context,
    spec: &RunSpec,
    threads: Option<usize>,
) -> Result<(Vec<Row>, Header)> {
    let material = ctx
        .material
        .expect("validated: coefficients needs a material");
    let separations = match spec.grid {
        Some(grid) => grid.points(),
        None => {
            let (lo, hi) = FIT_RANGE;
            (0..FIT_SAMPLES)
                .map(|i| lo * (hi / lo).powf(i as f64 / (FIT_SAMPLES - 1) as f64))
                .map(|x| material.delta_0() / x)
                .collect()
        }
    };
    let (ratios, _) = compute_rows(&separations, threads, |a| {
        let (_, f00) = ideal_closed_forms(a, ctx.engine.constants())?;
        let f = ctx.engine.force_pp0(a, ctx.model, Some(&material))?;
        let row = Row {
            values: vec![
                material.delta_0() / a,
                f.value / f00,
                f.abs_error_estimate() / f00.abs(),
            ],
            converged: f.converged(),
        };
        Ok((row, Vec::new()))
    })?;
    let samples: Vec<(f64, f64)> = ratios.iter().map(|r| (r.values[0], r.values[1])).collect();
    let noise = ratios
        .iter()
        .map(|r| r.values[2].powi(2))
        .sum::<f64>()
        .sqrt();
    let converged = ratios.iter().all(|r| r.converged);
    let fit = recover_coefficients(&samples, FIT_ORDER).map_err(|e| CliError::Field {
        field: "grid".into(),
        message: format!("cannot fit coefficients: {e}"),
    })?;
    let closed = CoefficientVariant::ALL.map(|v| coefficients(v).c);
    let rows = (0..REPORTED_ORDERS)
        .map(|k| Row {
            values: vec![
                k as f64,
                closed[0][k],
                closed[1][k],
                closed[2][k],
                fit.coefficients[k],
                fit.sensitivities[k] * noise,
            ],
            converged,
        })
        .collect();
    let extra = vec![
        ("fit_order".into(), FIT_ORDER.to_string()),
        ("fit_samples".into(), samples.len().to_string()),
        (
            "fit_condition_number".into(),
            format!("{:e}", fit.condition_number),
        ),
        ("fit_residual_rms".into(), format!("{:e}", fit.residual_rms)),
    ];
    Ok((rows, extra))
}
