//! Sweep execution and CSV emission.
//!
//! Every point of the sweep is validated before anything is computed, so a
//! bad configuration fails fast with exit code 1. Points are then evaluated in
//! order; numerical work inside a point runs on the worker pool with ordered
//! reductions, so the output bytes do not depend on the worker count. The
//! first numerical failure stops the sweep: its row is written with a `fail:`
//! status and the exit code is 2.

use crate::config::{RunConfig, Subcommand, SweepVariable, Units};
use crate::{exit, CliError};
use casimir_core::corrugation::{
    lateral_force_with, pfa_response, response_with_error, torque_max_with, CorrugationSpec,
};
use casimir_core::onedim::{entropy_1d, force_1d, free_energy_1d, Mirror1D};
use casimir_core::pfa::{pfa_grating, pfa_plane_sphere, rho_ratio, PfaGratingSpec};
use casimir_core::planeplane::{entropy_pp, per_area, reduction_factor, PlanePlaneSpec, Quantity};
use casimir_core::planesphere::{default_ell_max, free_energy_ps, force_ps, PlaneSphereSpec};
use casimir_core::units::EV_TO_J;
use casimir_core::{CasimirError, DielectricModel, ThermalSpec};
use std::fs::File;
use std::io::Write;

/// Column description: name, natural unit, and the factor to SI.
#[derive(Debug, Clone, Copy)]
struct Column {
    name: &'static str,
    /// Powers of eV, nm and 1/K.
    energy: i32,
    length: i32,
    per_kelvin: bool,
}

const fn plain(name: &'static str) -> Column {
    Column { name, energy: 0, length: 0, per_kelvin: false }
}

const fn phys(name: &'static str, energy: i32, length: i32) -> Column {
    Column { name, energy, length, per_kelvin: false }
}

const fn entropy(name: &'static str, length: i32) -> Column {
    Column { name, energy: 1, length, per_kelvin: true }
}

impl Column {
    fn unit(&self, units: Units) -> Option<String> {
        if self.energy == 0 && self.length == 0 {
            return None;
        }
        let len = |base: &str, p: i32| match p {
            0 => String::new(),
            -1 => format!("/{base}"),
            p if p < 0 => format!("/{base}^{}", -p),
            1 => base.to_string(),
            p => format!("{base}^{p}"),
        };
        let k = if self.per_kelvin { "/K" } else { "" };
        Some(match units {
            Units::Natural => format!("eV{k}{}", len("nm", self.length)),
            // J/m^n = N/m^(n−1)
            Units::Si if self.energy == 1 && self.length < 0 && !self.per_kelvin => match self.length {
                -1 => "N".to_string(),
                p => format!("N{}", len("m", p + 1)),
            },
            Units::Si => format!("J{k}{}", len("m", self.length)),
        })
    }

    fn header(&self, units: Units) -> String {
        match self.unit(units) {
            Some(u) => format!("{}[{u}]", self.name),
            None => self.name.to_string(),
        }
    }

    fn to_si(&self) -> f64 {
        EV_TO_J.powi(self.energy) * 1e-9f64.powi(self.length)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self, col: &Column, units: Units) -> String {
        match self {
            Cell::Num(v) => {
                let v = if units == Units::Si { v * col.to_si() } else { *v };
                format!("{v:e}")
            }
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

fn opt(v: Option<f64>) -> Cell {
    v.map_or(Cell::Empty, Cell::Num)
}

/// Rendered CSV content.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, CliError> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    /// Warnings that also appear in the status column.
    pub warnings: Vec<String>,
    /// True when a row carries a `warn:` or `fail:` status.
    pub degraded: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.degraded {
            exit::CONVERGENCE
        } else {
            exit::OK
        }
    }
}

#[derive(Debug, Clone)]
enum Job {
    OneDim { length: f64, r1: f64, r2: f64, thermal: ThermalSpec },
    PlanePlane { spec: PlanePlaneSpec, has_area: bool },
    PlaneSphere { spec: PlaneSphereSpec, warning: Option<String> },
    Corrugation(CorrugationSpec),
    PfaSphere { length: f64, radius: f64, model: DielectricModel, thermal: ThermalSpec },
    PfaGrating { spec: PfaGratingSpec, thermal: ThermalSpec },
}

fn columns(cfg: &RunConfig) -> Vec<Column> {
    match cfg.subcommand {
        Subcommand::OneDim => vec![
            plain("L_nm"),
            plain("T_K"),
            plain("r1"),
            plain("r2"),
            phys("E", 1, 0),
            phys("F", 1, -1),
            entropy("S", 0),
        ],
        Subcommand::PlanePlane => vec![
            plain("L_nm"),
            plain("T_K"),
            phys("F_per_area", 1, -3),
            phys("E_per_area", 1, -2),
            phys("G_per_area", 1, -4),
            entropy("S_per_area", -2),
            plain("eta"),
            phys("tail_estimate", 1, -2),
            phys("quad_error", 1, -2),
        ]
        .into_iter()
        .chain(cfg.geometry.area.map(|_| [phys("F_total", 1, -1), phys("E_total", 1, 0)]).into_iter().flatten())
        .collect(),
        Subcommand::PlaneSphere => vec![
            plain("L_nm"),
            plain("R_nm"),
            plain("T_K"),
            plain("ell_max"),
            phys("F", 1, -1),
            phys("G", 1, -2),
            phys("E_or_FreeEnergy", 1, 0),
            plain("rho_E"),
            plain("rho_F"),
            plain("rho_G"),
            plain("theta"),
            plain("tail_m"),
            plain("resid_ell"),
        ],
        Subcommand::Corrugation => vec![
            plain("L_nm"),
            plain("lambdaC_nm"),
            plain("kCL"),
            plain("rho"),
            phys("G_C", 1, -4),
            phys("Flat_max", 1, -1),
            plain("theta_star"),
            phys("tau_star_per_area", 1, -2),
            plain("T_K"),
            phys("quad_error", 1, -4),
        ],
        Subcommand::Pfa if cfg.geometry.period.is_some() => vec![
            plain("L_nm"),
            plain("period_nm"),
            plain("ridge_nm"),
            plain("depth_nm"),
            plain("T_K"),
            phys("F_per_area", 1, -3),
        ],
        Subcommand::Pfa => vec![
            plain("L_nm"),
            plain("R_nm"),
            plain("T_K"),
            phys("E", 1, 0),
            phys("F", 1, -1),
            phys("G", 1, -2),
            plain("well_separated"),
        ],
    }
}

fn thermal(cfg: &RunConfig, t: f64) -> Result<ThermalSpec, CliError> {
    let mut s = ThermalSpec::new(t)?;
    if let Some(tol) = cfg.matsubara_tol {
        s = s.with_tolerance(tol);
    }
    Ok(s)
}

/// Builds and validates every sweep point.
fn jobs(cfg: &RunConfig) -> Result<Vec<Job>, CliError> {
    let g = &cfg.geometry;
    let var = cfg.sweep_variable();
    let mut out = Vec::new();
    for &t in &cfg.temperatures {
        let th = thermal(cfg, t)?;
        for x in cfg.grid() {
            let length = if var == SweepVariable::Length { x } else { g.length.unwrap_or(f64::NAN) };
            let radius = if var == SweepVariable::Radius { Some(x) } else { g.radius };
            let job = match cfg.subcommand {
                Subcommand::OneDim => {
                    let (r1, r2) = (g.r1.unwrap_or(1.0), g.r2.unwrap_or(1.0));
                    Mirror1D::constant(r1)?;
                    Mirror1D::constant(r2)?;
                    if !(length > 0.0) {
                        return Err(CliError::Config(format!("separation must be > 0, got {length}")));
                    }
                    Job::OneDim { length, r1, r2, thermal: th }
                }
                Subcommand::PlanePlane => {
                    let mut s = PlanePlaneSpec::symmetric(length, cfg.model.clone(), th);
                    if let Some(a) = g.area {
                        s = s.with_area(a);
                    }
                    if let Some(tol) = cfg.tolerance {
                        s.quad_tol = tol;
                    }
                    s.validate()?;
                    Job::PlanePlane { spec: s, has_area: g.area.is_some() }
                }
                Subcommand::PlaneSphere => {
                    let r = radius.unwrap_or(f64::NAN);
                    let mut s = PlaneSphereSpec::symmetric(length, r, cfg.model.clone(), th);
                    let heuristic = default_ell_max(length, r);
                    let mut warning = None;
                    if let Some(l) = cfg.ell_max {
                        s = s.with_ell_max(l);
                        if l < heuristic {
                            warning = Some(format!("ell_max {l} below heuristic {heuristic} at L/R = {}", length / r));
                        }
                    }
                    if let Some(tol) = cfg.tolerance {
                        s.xi_tol = tol;
                    }
                    s.validate()?;
                    Job::PlaneSphere { spec: s, warning }
                }
                Subcommand::Corrugation => {
                    let lambda = if var == SweepVariable::Wavelength { x } else { g.lambda_c.unwrap_or(f64::NAN) };
                    let mut s = CorrugationSpec::new(length, g.a1.unwrap_or(0.0), g.a2.unwrap_or(0.0), lambda, cfg.model.clone())
                        .with_thermal(th)
                        .with_shift(g.shift.unwrap_or(0.0))
                        .with_theta(g.theta.unwrap_or(0.0));
                    s.lx = g.lx.unwrap_or(s.lx);
                    s.ly = g.ly.unwrap_or(s.ly);
                    if let Some(tol) = cfg.tolerance {
                        s.quad_tol = tol;
                    }
                    s.validate()?;
                    Job::Corrugation(s)
                }
                Subcommand::Pfa => match g.period {
                    Some(period) => {
                        let spec = PfaGratingSpec {
                            length,
                            depth: g.depth.unwrap_or(0.0),
                            period,
                            ridge_width: g.ridge_width.unwrap_or(0.0),
                            model1: cfg.model.clone(),
                            model2: cfg.model.clone(),
                        };
                        spec.validate()?;
                        Job::PfaGrating { spec, thermal: th }
                    }
                    None => {
                        let r = radius.unwrap_or(f64::NAN);
                        if !(length > 0.0 && r > 0.0) {
                            return Err(CliError::Config(format!("pfa needs L > 0 and R > 0, got {length}, {r}")));
                        }
                        Job::PfaSphere { length, radius: r, model: cfg.model.clone(), thermal: th }
                    }
                },
            };
            out.push(job);
        }
    }
    Ok(out)
}

/// Value cells of one point and an optional warning.
fn compute(job: &Job) -> Result<(Vec<Cell>, Option<String>), CasimirError> {
    Ok(match job {
        Job::OneDim { length, r1, r2, thermal } => {
            let (m1, m2) = (Mirror1D::constant(*r1)?, Mirror1D::constant(*r2)?);
            let e = free_energy_1d(&m1, &m2, *length, thermal)?;
            let f = force_1d(&m1, &m2, *length, thermal)?;
            let s = if thermal.is_zero() { None } else { Some(entropy_1d(&m1, &m2, *length, thermal)?) };
            let t = thermal.temperature;
            (vec![Cell::Num(*length), Cell::Num(t), Cell::Num(*r1), Cell::Num(*r2), Cell::Num(e), Cell::Num(f), opt(s)], None)
        }
        Job::PlanePlane { spec, has_area } => {
            let (e, d) = per_area(spec, Quantity::FreeEnergy)?;
            let (f, _) = per_area(spec, Quantity::Force)?;
            let (g, _) = per_area(spec, Quantity::Gradient)?;
            let s = if spec.thermal.is_zero() { None } else { Some(entropy_pp(&spec.clone().with_area(1.0))?) };
            let eta = reduction_factor(spec)?;
            let t = spec.thermal.temperature;
            let tail = if spec.thermal.is_zero() { None } else { Some(d.tail_estimate) };
            (
                vec![
                    Cell::Num(spec.length),
                    Cell::Num(t),
                    Cell::Num(f),
                    Cell::Num(e),
                    Cell::Num(g),
                    opt(s),
                    Cell::Num(eta),
                    opt(tail),
                    Cell::Num(d.quadrature_error),
                ]
                .into_iter()
                .chain(has_area.then(|| [Cell::Num(f * spec.area), Cell::Num(e * spec.area)]).into_iter().flatten())
                .collect(),
                None,
            )
        }
        Job::PlaneSphere { spec, warning } => {
            let r = free_energy_ps(spec)?;
            let pfa = pfa_plane_sphere(spec.length, spec.radius, &spec.plate, &spec.sphere, &spec.thermal)?;
            let theta = if spec.thermal.is_zero() {
                1.0
            } else {
                let cold = spec.with_thermal(ThermalSpec::zero().with_tolerance(spec.thermal.tolerance));
                rho_ratio(r.force, force_ps(&cold)?)?
            };
            let d = &r.diagnostics;
            (
                vec![
                    Cell::Num(spec.length),
                    Cell::Num(spec.radius),
                    Cell::Num(spec.thermal.temperature),
                    Cell::Int(spec.ell_max),
                    Cell::Num(r.force),
                    Cell::Num(r.gradient),
                    Cell::Num(r.free_energy),
                    Cell::Num(rho_ratio(r.free_energy, pfa.energy)?),
                    Cell::Num(rho_ratio(r.force, pfa.force)?),
                    Cell::Num(rho_ratio(r.gradient, pfa.gradient)?),
                    Cell::Num(theta),
                    opt(d.m_tail),
                    opt(d.ell_max_residual),
                ],
                warning.clone(),
            )
        }
        Job::Corrugation(spec) => {
            let k = spec.k_c();
            let (g, err) = response_with_error(k, spec.length, &spec.model, &spec.thermal, spec.quad_tol)?;
            let g0 = pfa_response(spec.length, &spec.model, &spec.thermal)?;
            let rho = rho_ratio(g, g0)?;
            let quarter = CorrugationSpec { shift: 0.25 * spec.wavelength, theta: 0.0, ..spec.clone() };
            let flat = lateral_force_with(&quarter, g)?.abs();
            let aligned = CorrugationSpec { shift: 0.0, ..spec.clone() };
            let tm = torque_max_with(&aligned, g)?;
            (
                vec![
                    Cell::Num(spec.length),
                    Cell::Num(spec.wavelength),
                    Cell::Num(k * spec.length),
                    Cell::Num(rho),
                    Cell::Num(g),
                    Cell::Num(flat),
                    Cell::Num(tm.theta),
                    Cell::Num(tm.torque.abs() / spec.area()),
                    Cell::Num(spec.thermal.temperature),
                    Cell::Num(err),
                ],
                None,
            )
        }
        Job::PfaSphere { length, radius, model, thermal } => {
            let r = pfa_plane_sphere(*length, *radius, model, model, thermal)?;
            (
                vec![
                    Cell::Num(*length),
                    Cell::Num(*radius),
                    Cell::Num(thermal.temperature),
                    Cell::Num(r.energy),
                    Cell::Num(r.force),
                    Cell::Num(r.gradient),
                    Cell::Text(r.well_separated.to_string()),
                ],
                None,
            )
        }
        Job::PfaGrating { spec, thermal } => {
            let f = pfa_grating(spec, thermal)?;
            (
                vec![
                    Cell::Num(spec.length),
                    Cell::Num(spec.period),
                    Cell::Num(spec.ridge_width),
                    Cell::Num(spec.depth),
                    Cell::Num(thermal.temperature),
                    Cell::Num(f),
                ],
                None,
            )
        }
    })
}

fn job_warnings(job: &Job) -> Vec<String> {
    match job {
        Job::Corrugation(s) => s.warnings(),
        _ => Vec::new(),
    }
}

/// Runs the sweep on the current thread pool and renders the table.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cols = columns(cfg);
    let jobs = jobs(cfg).map_err(|e| match e {
        CliError::Model(m) => CliError::Config(m.to_string()),
        other => other,
    })?;
    let mut header: Vec<String> = cols.iter().map(|c| c.header(cfg.units)).collect();
    header.push("status".into());
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let mut degraded = false;
    for job in &jobs {
        for w in job_warnings(job) {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        match compute(job) {
            Ok((cells, warning)) => {
                let mut row: Vec<String> = cells.iter().zip(&cols).map(|(c, col)| c.render(col, cfg.units)).collect();
                row.push(match warning {
                    Some(w) => {
                        degraded = true;
                        warnings.push(w.clone());
                        format!("warn:{w}")
                    }
                    None => "ok".into(),
                });
                rows.push(row);
            }
            Err(e) => {
                degraded = true;
                let mut row: Vec<String> = cols.iter().map(|_| "NaN".to_string()).collect();
                row.push(format!("fail:{e}"));
                rows.push(row);
                break;
            }
        }
    }
    Ok(Outcome { table: Table { header, rows }, warnings, degraded })
}

/// Runs with the configured worker count and writes the CSV to the output
/// path (or stdout). Returns the process exit code.
pub fn execute(cfg: &RunConfig) -> Result<i32, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let outcome = pool.install(|| run(cfg))?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    match &cfg.output {
        Some(path) => outcome.table.write(File::create(path)?)?,
        None => outcome.table.write(std::io::stdout().lock())?,
    }
    Ok(outcome.exit_code())
}
