//! INI run configuration.
//!
//! ```ini
//! [run]
//! subcommand = plane-sphere   # onedim | plane-plane | plane-sphere | corrugation | pfa
//! units = natural             # natural | si
//! workers = 4
//! output = out.csv
//! tolerance = 1e-6
//! ell_max = 40
//!
//! [geometry]
//! L = 100
//! R = 1000
//!
//! [material]
//! model = plasma
//! lambda_p = 137
//!
//! [thermal]
//! T = 0, 300
//!
//! [sweep]
//! variable = L
//! from = 100
//! to = 1000
//! spacing = log
//! count = 10
//! ```
//!
//! Keys are case-insensitive. Lengths are in nm, energies in eV, temperatures
//! in K.

use crate::CliError;
use casimir_core::materials::load_table;
use casimir_core::DielectricModel;
use ini::{Ini, ParseOption};
use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    OneDim,
    PlanePlane,
    PlaneSphere,
    Corrugation,
    Pfa,
}

impl FromStr for Subcommand {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "onedim" => Self::OneDim,
            "plane-plane" => Self::PlanePlane,
            "plane-sphere" => Self::PlaneSphere,
            "corrugation" => Self::Corrugation,
            "pfa" => Self::Pfa,
            _ => return Err(format!("unknown subcommand '{s}'")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Natural,
    Si,
}

impl FromStr for Units {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "natural" => Ok(Self::Natural),
            "si" => Ok(Self::Si),
            _ => Err(format!("unknown unit system '{s}' (natural | si)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Length,
    Radius,
    Wavelength,
}

impl SweepVariable {
    fn key(self) -> &'static str {
        match self {
            Self::Length => "l",
            Self::Radius => "r",
            Self::Wavelength => "lambda_c",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub spacing: Spacing,
    pub count: usize,
}

impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.from];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.from + t * (self.to - self.from),
                    Spacing::Log => self.from * (self.to / self.from).powf(t),
                }
            })
            .collect()
    }
}

/// Geometry parameters in nm (angles in rad). Unused entries stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Geometry {
    pub length: Option<f64>,
    pub radius: Option<f64>,
    pub area: Option<f64>,
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub lambda_c: Option<f64>,
    pub shift: Option<f64>,
    pub theta: Option<f64>,
    pub lx: Option<f64>,
    pub ly: Option<f64>,
    pub period: Option<f64>,
    pub ridge_width: Option<f64>,
    pub depth: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub geometry: Geometry,
    pub model: DielectricModel,
    pub temperatures: Vec<f64>,
    pub matsubara_tol: Option<f64>,
    pub sweep: Option<Sweep>,
    pub tolerance: Option<f64>,
    pub ell_max: Option<usize>,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub units: Units,
}

impl RunConfig {
    /// Points of the sweep, or the single geometry value when no sweep is set.
    pub fn grid(&self) -> Vec<f64> {
        match &self.sweep {
            Some(s) => s.grid(),
            None => vec![self.geometry.length.unwrap_or(f64::NAN)],
        }
    }

    pub fn sweep_variable(&self) -> SweepVariable {
        self.sweep.as_ref().map_or(SweepVariable::Length, |s| s.variable)
    }
}

const ALLOWED: &[(&str, &[&str])] = &[
    ("run", &["subcommand", "units", "workers", "output", "tolerance", "ell_max"]),
    (
        "geometry",
        &["l", "r", "area", "a1", "a2", "lambda_c", "b", "theta", "lx", "ly", "period", "ridge_width", "depth", "r1", "r2"],
    ),
    (
        "material",
        &["model", "omega_p", "lambda_p", "gamma", "lambda_gamma", "eps0", "eps_inf", "xi0", "table", "tail_omega_p", "tail_gamma"],
    ),
    ("thermal", &["t", "tolerance"]),
    ("sweep", &["variable", "from", "to", "spacing", "count"]),
];

/// Flattened `section.key → value` view with typed getters.
struct Entries {
    map: BTreeMap<(String, String), String>,
    used: BTreeSet<(String, String)>,
}

impl Entries {
    fn raw(&mut self, section: &str, key: &str) -> Option<String> {
        let k = (section.to_string(), key.to_string());
        let v = self.map.get(&k).cloned();
        if v.is_some() {
            self.used.insert(k);
        }
        v
    }

    fn has(&self, section: &str, key: &str) -> bool {
        self.map.contains_key(&(section.to_string(), key.to_string()))
    }

    fn parse<T: FromStr>(&mut self, section: &str, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(section, key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Config(format!("[{section}] {key} = '{v}' has the wrong type"))),
        }
    }

    fn positive(&mut self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        let v = self.parse::<f64>(section, key)?;
        if let Some(x) = v {
            if !(x > 0.0 && x.is_finite()) {
                return Err(CliError::Config(format!("[{section}] {key} must be positive, got {x}")));
            }
        }
        Ok(v)
    }

    fn require<T>(v: Option<T>, section: &str, key: &str) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Config(format!("missing required key [{section}] {key}")))
    }
}

fn read_entries(text: &str) -> Result<Entries, CliError> {
    let opt = ParseOption { enabled_quote: false, enabled_escape: false, ..ParseOption::default() };
    let ini = Ini::load_from_str_opt(text, opt).map_err(|e| CliError::Config(format!("parse error: {e}")))?;
    let mut map = BTreeMap::new();
    let mut unknown = Vec::new();
    for (section, props) in &ini {
        let sec = section.unwrap_or("").to_ascii_lowercase();
        let allowed = ALLOWED.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k);
        for (key, value) in props.iter() {
            let key = key.trim().to_ascii_lowercase();
            if sec.is_empty() {
                unknown.push(format!("{key} (outside any section)"));
                continue;
            }
            match allowed {
                Some(keys) if keys.contains(&key.as_str()) => {}
                Some(_) => {
                    unknown.push(format!("[{sec}] {key}"));
                    continue;
                }
                None => {
                    unknown.push(format!("[{sec}] {key} (unknown section)"));
                    continue;
                }
            }
            if map.insert((sec.clone(), key.clone()), value.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("duplicate key [{sec}] {key}")));
            }
        }
    }
    if !unknown.is_empty() {
        return Err(CliError::Config(format!("unknown keys: {}", unknown.join(", "))));
    }
    Ok(Entries { map, used: BTreeSet::new() })
}

fn exclusive(e: &Entries, section: &str, a: &str, b: &str) -> Result<(), CliError> {
    if e.has(section, a) && e.has(section, b) {
        return Err(CliError::Config(format!("conflicting keys [{section}] {a} and {b}")));
    }
    Ok(())
}

fn material(e: &mut Entries) -> Result<DielectricModel, CliError> {
    let s = "material";
    exclusive(e, s, "omega_p", "lambda_p")?;
    exclusive(e, s, "gamma", "lambda_gamma")?;
    let name = e.raw(s, "model").unwrap_or_else(|| "perfect".into()).to_ascii_lowercase();
    let omega_p = |e: &mut Entries| -> Result<f64, CliError> {
        if let Some(lp) = e.positive(s, "lambda_p")? {
            return Ok(casimir_core::units::energy_from_wavelength(lp));
        }
        Entries::require(e.positive(s, "omega_p")?, s, "omega_p or lambda_p")
    };
    let model = match name.as_str() {
        "perfect" => DielectricModel::PerfectMirror,
        "vacuum" => DielectricModel::vacuum(),
        "plasma" => DielectricModel::plasma(omega_p(e)?)?,
        "drude" => {
            let wp = omega_p(e)?;
            let gamma = match e.positive(s, "lambda_gamma")? {
                Some(lg) => casimir_core::units::energy_from_wavelength(lg),
                None => Entries::require(e.positive(s, "gamma")?, s, "gamma or lambda_gamma")?,
            };
            DielectricModel::drude(wp, gamma)?
        }
        "drude-lorentz" => {
            let eps0 = Entries::require(e.parse(s, "eps0")?, s, "eps0")?;
            let eps_inf = Entries::require(e.parse(s, "eps_inf")?, s, "eps_inf")?;
            let xi0 = Entries::require(e.positive(s, "xi0")?, s, "xi0")?;
            DielectricModel::drude_lorentz(eps0, eps_inf, xi0)?
        }
        "silicon" => DielectricModel::silicon(),
        "table" => {
            let path = Entries::require(e.raw(s, "table"), s, "table")?;
            let file = File::open(&path).map_err(|err| CliError::Config(format!("cannot open table '{path}': {err}")))?;
            let model = load_table(BufReader::new(file))?;
            match (e.positive(s, "tail_omega_p")?, e.positive(s, "tail_gamma")?) {
                (Some(wp), Some(g)) => match model {
                    DielectricModel::Tabulated(t) => DielectricModel::Tabulated(t.with_drude_tail(wp, g)?),
                    other => other,
                },
                (None, None) => model,
                _ => return Err(CliError::Config("tail_omega_p and tail_gamma must be given together".into())),
            }
        }
        other => return Err(CliError::Config(format!("unknown material model '{other}'"))),
    };
    Ok(model)
}

fn temperatures(e: &mut Entries) -> Result<Vec<f64>, CliError> {
    let Some(raw) = e.raw("thermal", "t") else {
        return Ok(vec![0.0]);
    };
    let list: Result<Vec<f64>, _> = raw.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let list = list.map_err(|_| CliError::Config(format!("[thermal] T = '{raw}' is not a list of numbers")))?;
    if list.is_empty() || list.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(CliError::Config(format!("[thermal] T = '{raw}' must list non-negative temperatures")));
    }
    Ok(list)
}

fn sweep(e: &mut Entries, sub: Subcommand) -> Result<Option<Sweep>, CliError> {
    let s = "sweep";
    let Some(var) = e.raw(s, "variable") else {
        if ["from", "to", "spacing", "count"].iter().any(|k| e.has(s, k)) {
            return Err(CliError::Config("missing required key [sweep] variable".into()));
        }
        return Ok(None);
    };
    let variable = match var.to_ascii_lowercase().as_str() {
        "l" => SweepVariable::Length,
        "r" if matches!(sub, Subcommand::PlaneSphere | Subcommand::Pfa) => SweepVariable::Radius,
        "lambda_c" if sub == Subcommand::Corrugation => SweepVariable::Wavelength,
        other => return Err(CliError::Config(format!("sweep variable '{other}' is not available for this subcommand"))),
    };
    if e.has("geometry", variable.key()) {
        return Err(CliError::Config(format!(
            "conflicting keys [geometry] {} and [sweep] variable = {var}",
            variable.key()
        )));
    }
    let from = Entries::require(e.positive(s, "from")?, s, "from")?;
    let to = Entries::require(e.positive(s, "to")?, s, "to")?;
    let count = Entries::require(e.parse::<usize>(s, "count")?, s, "count")?;
    if count == 0 {
        return Err(CliError::Config("[sweep] count must be >= 1".into()));
    }
    let spacing = match e.raw(s, "spacing").as_deref().map(str::to_ascii_lowercase).as_deref() {
        None | Some("linear") => Spacing::Linear,
        Some("log") => Spacing::Log,
        Some(other) => return Err(CliError::Config(format!("unknown spacing '{other}' (linear | log)"))),
    };
    Ok(Some(Sweep { variable, from, to, spacing, count }))
}

fn geometry_keys(sub: Subcommand) -> &'static [&'static str] {
    match sub {
        Subcommand::OneDim => &["l", "r1", "r2"],
        Subcommand::PlanePlane => &["l", "area"],
        Subcommand::PlaneSphere => &["l", "r"],
        Subcommand::Corrugation => &["l", "a1", "a2", "lambda_c", "b", "theta", "lx", "ly"],
        Subcommand::Pfa => &["l", "r", "period", "ridge_width", "depth"],
    }
}

/// Parses and validates a configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut e = read_entries(text)?;
    let sub: Subcommand = Entries::require(e.raw("run", "subcommand"), "run", "subcommand")?
        .parse()
        .map_err(CliError::Config)?;
    let g = "geometry";
    let stray: Vec<String> = e
        .map
        .keys()
        .filter(|(s, k)| s == g && !geometry_keys(sub).contains(&k.as_str()))
        .map(|(_, k)| format!("[{g}] {k}"))
        .collect();
    if !stray.is_empty() {
        return Err(CliError::Config(format!("keys not used by this subcommand: {}", stray.join(", "))));
    }
    let geometry = Geometry {
        length: e.positive(g, "l")?,
        radius: e.positive(g, "r")?,
        area: e.positive(g, "area")?,
        a1: e.parse(g, "a1")?,
        a2: e.parse(g, "a2")?,
        lambda_c: e.positive(g, "lambda_c")?,
        shift: e.parse(g, "b")?,
        theta: e.parse(g, "theta")?,
        lx: e.positive(g, "lx")?,
        ly: e.positive(g, "ly")?,
        period: e.positive(g, "period")?,
        ridge_width: e.positive(g, "ridge_width")?,
        depth: e.positive(g, "depth")?,
        r1: e.parse(g, "r1")?,
        r2: e.parse(g, "r2")?,
    };
    let sweep = sweep(&mut e, sub)?;
    let swept = sweep.as_ref().map(|s| s.variable);
    if geometry.length.is_none() && swept != Some(SweepVariable::Length) {
        return Err(CliError::Config("missing required key [geometry] L".into()));
    }
    match sub {
        Subcommand::PlaneSphere if geometry.radius.is_none() && swept != Some(SweepVariable::Radius) => {
            return Err(CliError::Config("missing required key [geometry] R".into()));
        }
        Subcommand::Corrugation => {
            for (k, v) in [("a1", geometry.a1), ("a2", geometry.a2)] {
                Entries::require(v, g, k)?;
            }
            if geometry.lambda_c.is_none() && swept != Some(SweepVariable::Wavelength) {
                return Err(CliError::Config("missing required key [geometry] lambda_c".into()));
            }
        }
        Subcommand::Pfa => {
            let sphere = geometry.radius.is_some() || swept == Some(SweepVariable::Radius);
            let grating = geometry.period.is_some();
            if sphere && grating {
                return Err(CliError::Config("conflicting keys [geometry] R and period".into()));
            }
            if !sphere && !grating {
                return Err(CliError::Config("pfa needs either [geometry] R or period, ridge_width, depth".into()));
            }
            if grating {
                Entries::require(geometry.ridge_width, g, "ridge_width")?;
                Entries::require(geometry.depth, g, "depth")?;
            }
        }
        _ => {}
    }
    let model = if sub == Subcommand::OneDim { DielectricModel::PerfectMirror } else { material(&mut e)? };
    let temperatures = temperatures(&mut e)?;
    let matsubara_tol = e.positive("thermal", "tolerance")?;
    let tolerance = e.positive("run", "tolerance")?;
    let ell_max = e.parse::<usize>("run", "ell_max")?;
    let workers = e.parse::<usize>("run", "workers")?;
    if workers == Some(0) {
        return Err(CliError::Config("[run] workers must be >= 1".into()));
    }
    let output = e.raw("run", "output").map(PathBuf::from);
    let units = match e.raw("run", "units") {
        Some(u) => u.parse().map_err(CliError::Config)?,
        None => Units::Natural,
    };
    let unused: Vec<String> = e
        .map
        .keys()
        .filter(|k| !e.used.contains(*k))
        .map(|(s, k)| format!("[{s}] {k}"))
        .collect();
    if !unused.is_empty() {
        return Err(CliError::Config(format!("keys not used by this subcommand: {}", unused.join(", "))));
    }
    Ok(RunConfig {
        subcommand: sub,
        geometry,
        model,
        temperatures,
        matsubara_tol,
        sweep,
        tolerance,
        ell_max,
        workers,
        output,
        units,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_plane_plane() {
        let c = parse_config("[run]\nsubcommand = plane-plane\n[geometry]\nL = 100\n[thermal]\nT = 0\n[material]\nmodel = perfect\n").unwrap();
        assert_eq!(c.subcommand, Subcommand::PlanePlane);
        assert_eq!(c.geometry.length, Some(100.0));
        assert_eq!(c.temperatures, vec![0.0]);
        assert_eq!(c.model, DielectricModel::PerfectMirror);
        assert_eq!(c.grid(), vec![100.0]);
    }

    #[test]
    fn duplicate_key_is_named() {
        let err = parse_config("[run]\nsubcommand = plane-plane\n[geometry]\nL = 100\nL = 200\n").unwrap_err();
        assert!(err.to_string().contains("duplicate key [geometry] l"), "{err}");
    }

    #[test]
    fn unknown_keys_are_listed() {
        let err = parse_config("[run]\nsubcommand = plane-plane\nfoo = 1\n[geometry]\nL = 100\nbar = 2\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("[run] foo") && msg.contains("[geometry] bar"), "{msg}");
    }

    #[test]
    fn log_grid() {
        let c = parse_config(
            "[run]\nsubcommand = plane-plane\n[sweep]\nvariable = L\nfrom = 100\nto = 1000\nspacing = log\ncount = 10\n",
        )
        .unwrap();
        let g = c.grid();
        assert_eq!(g.len(), 10);
        assert!((g[1] - 129.154_966_501_488_4).abs() < 1e-9);
        assert!((g[9] - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn type_mismatch_and_missing_keys() {
        assert!(parse_config("[run]\nsubcommand = plane-plane\n[geometry]\nL = abc\n").is_err());
        assert!(parse_config("[run]\nsubcommand = plane-sphere\n[geometry]\nL = 100\n").is_err());
        assert!(parse_config("[geometry]\nL = 100\n").is_err());
    }

    #[test]
    fn conflicting_keys() {
        let err = parse_config(
            "[run]\nsubcommand = plane-plane\n[geometry]\nL = 100\n[material]\nmodel = plasma\nomega_p = 9\nlambda_p = 137\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("conflicting"));
        let err = parse_config("[run]\nsubcommand = plane-plane\n[geometry]\nL = 100\n[sweep]\nvariable = L\nfrom = 1\nto = 2\ncount = 2\n")
            .unwrap_err();
        assert!(err.to_string().contains("conflicting"));
    }

    #[test]
    fn inline_comments_and_temperature_list() {
        let c = parse_config("[run]\nsubcommand = plane-plane # lifshitz\n[geometry]\nL = 100   # nm\n[thermal]\nT = 0, 300\n").unwrap();
        assert_eq!(c.temperatures, vec![0.0, 300.0]);
    }

    #[test]
    fn keys_of_other_subcommands_rejected() {
        let err = parse_config("[run]\nsubcommand = plane-plane\n[geometry]\nL = 100\nR = 5\n").unwrap_err();
        assert!(err.to_string().contains("[geometry] r"), "{err}");
    }
}
