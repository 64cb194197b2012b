//! Flat `key = value` configuration. Command-line flags override file keys;
//! every error names the offending key.

use crate::error::CliError;
use rie::kernels::{Strategy, TemperatureMode};
use rie::model::{CutoffSpec, DerivedQuantities, ParamError, PhysicalParams, CONSTANTS};
use rie::scan::{Axis, T1Search};
use std::collections::BTreeMap;
use std::path::Path;

/// Every accepted key with its unit or meaning.
pub const KEYS: &[(&str, &str)] = &[
    ("temperature_K", "bath temperature in kelvin; 0 selects the zero-temperature mode"),
    ("dipole_nm", "dipole length in nanometres"),
    ("dipole_um", "dipole length in micrometres"),
    ("separation_m", "dot separation R in metres"),
    ("t0_over_tau", "light travel time R/c0 in units of tau = hbar/(kB T)"),
    ("cutoff_eV", "cutoff energy hbar*omega_max in electronvolts"),
    ("y_max", "dimensionless cutoff omega_max*tau (omega_max*t0 at zero temperature)"),
    ("gamma", "relative coupling to the sin-wave bath, in [0, 1]"),
    ("cutoff_kind", "sharp | power_law"),
    ("cutoff_p", "power-law cutoff exponent p > 2"),
    ("strategy", "auto | quadrature | closed_form_coth_one | long_time_asymptote"),
    ("temperature_mode", "thermal | coth_one; zero temperature always uses coth = 1"),
    ("t_over_tau", "time in units of tau"),
    ("t_over_t0", "time in units of t0 (zero temperature only)"),
    ("t_seconds", "time in seconds"),
    ("t1_seconds", "target first-maximum time in seconds"),
    ("state", "path of a 4x4 density matrix: 16 comma-separated a+bi fields, row-major"),
    ("grid_nx", "number of x samples"),
    ("grid_ny", "number of y samples"),
    ("grid_x_min", "lower x bound (decimal log for logarithmic axes)"),
    ("grid_x_max", "upper x bound (decimal log for logarithmic axes)"),
    ("grid_y_min", "lower y bound (decimal log for logarithmic axes)"),
    ("grid_y_max", "upper y bound (decimal log for logarithmic axes)"),
    ("fig3_t0_over_tau", "light travel time of the gamma scan in units of tau"),
    ("search_log10_t_min", "lower bound of the first-maximum search in log10(t/tau)"),
    ("search_log10_t_max", "upper bound of the first-maximum search in log10(t/tau)"),
    ("search_points", "points of the coarse first-maximum scan"),
    ("search_threshold", "smallest entanglement accepted as the first maximum"),
    ("effint_geometry", "aligned | perpendicular | oblique | all"),
    ("effint_box_ratios", "comma-separated box sides in units of R"),
];

const DEFAULT_TEMPERATURE: &str = "2.73";
const DEFAULT_DIPOLE_NM: &str = "10";
const DEFAULT_SEPARATION: &str = "1e-6";
const DEFAULT_CUTOFF_EV: &str = "1";

fn config_error(key: &str, reason: impl Into<String>) -> CliError {
    CliError::Config {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn parse_str(text: &str) -> Result<Self, CliError> {
        let mut map = ConfigMap::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_error(&format!("line {}", no + 1), "expected key = value"));
            };
            let key = key.trim();
            if map.entries.contains_key(key) {
                return Err(config_error(key, "given more than once"));
            }
            map.set(key, value.trim())?;
        }
        Ok(map)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_str(&text)
    }

    /// Insert or override one key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !KEYS.iter().any(|(k, _)| *k == key) {
            return Err(config_error(key, "unknown key"));
        }
        if value.is_empty() {
            return Err(config_error(key, "empty value"));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn remove(&mut self, key: &str) {
        self.entries.remove(key);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| config_error(key, format!("`{v}` is not a finite number")))
            })
            .transpose()
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| config_error(key, format!("`{v}` is not a non-negative integer")))
            })
            .transpose()
    }

    fn exclusive(&self, keys: &[&str]) -> Result<Option<&'static str>, CliError> {
        let given: Vec<&str> = keys.iter().copied().filter(|k| self.entries.contains_key(*k)).collect();
        if given.len() > 1 {
            return Err(config_error(given[1], format!("conflicts with `{}`", given[0])));
        }
        Ok(given
            .first()
            .map(|k| KEYS.iter().find(|(name, _)| name == k).expect("known key").0))
    }

    /// The effective configuration with defaults filled in, suitable for
    /// feeding back as a configuration file.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut out = self.entries.clone();
        let mut default = |family: &[&str], key: &str, value: &str| {
            if family.iter().all(|k| !out.contains_key(*k)) {
                out.insert(key.to_string(), value.to_string());
            }
        };
        default(&["temperature_K"], "temperature_K", DEFAULT_TEMPERATURE);
        default(&["dipole_nm", "dipole_um"], "dipole_nm", DEFAULT_DIPOLE_NM);
        default(&["separation_m", "t0_over_tau"], "separation_m", DEFAULT_SEPARATION);
        default(&["cutoff_eV", "y_max"], "cutoff_eV", DEFAULT_CUTOFF_EV);
        default(&["gamma"], "gamma", "1");
        default(&["cutoff_kind"], "cutoff_kind", "sharp");
        out
    }

    pub fn to_text(&self) -> String {
        self.echo().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    fn positive(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.f64(key)? {
            Some(v) if v <= 0.0 => Err(config_error(key, "must be positive")),
            other => Ok(other),
        }
    }

    pub fn physical_params(&self) -> Result<PhysicalParams, CliError> {
        let temperature = self.f64("temperature_K")?.unwrap_or(2.73);
        if temperature < 0.0 {
            return Err(config_error("temperature_K", "must be non-negative"));
        }
        let dipole_key = self.exclusive(&["dipole_nm", "dipole_um"])?.unwrap_or("dipole_nm");
        let dipole = match dipole_key {
            "dipole_um" => self.positive("dipole_um")?.expect("present") * 1e-6,
            _ => self.positive("dipole_nm")?.unwrap_or(10.0) * 1e-9,
        };
        let cutoff = match self.get("cutoff_kind").unwrap_or("sharp") {
            "sharp" => {
                if self.get("cutoff_p").is_some() {
                    return Err(config_error("cutoff_p", "only used with cutoff_kind = power_law"));
                }
                CutoffSpec::Sharp
            }
            "power_law" => {
                let p = self
                    .f64("cutoff_p")?
                    .ok_or_else(|| config_error("cutoff_p", "required when cutoff_kind = power_law"))?;
                CutoffSpec::PowerLaw { p }
            }
            other => {
                return Err(config_error(
                    "cutoff_kind",
                    format!("`{other}` is not one of sharp, power_law"),
                ))
            }
        };
        let gamma = self.f64("gamma")?.unwrap_or(1.0);
        let mut params = PhysicalParams {
            temperature,
            dipole,
            gamma,
            cutoff,
            ..PhysicalParams::default()
        };
        params.validate().map_err(|e| param_error(e, dipole_key))?;

        match self.exclusive(&["separation_m", "t0_over_tau"])? {
            Some("t0_over_tau") => {
                let r = self.positive("t0_over_tau")?.expect("present");
                params = params.with_t0_over_tau(r).map_err(|e| param_error(e, dipole_key))?;
            }
            _ => params.separation = self.positive("separation_m")?.unwrap_or(1e-6),
        }
        match self.exclusive(&["cutoff_eV", "y_max"])? {
            Some("y_max") => {
                let y = self.positive("y_max")?.expect("present");
                params = params.with_y_max(y).map_err(|e| param_error(e, dipole_key))?;
            }
            _ => params.omega_max = CONSTANTS.omega_from_ev(self.positive("cutoff_eV")?.unwrap_or(1.0)),
        }
        params.validate().map_err(|e| param_error(e, dipole_key))?;
        Ok(params)
    }

    pub fn temperature_mode(&self, params: &PhysicalParams) -> Result<TemperatureMode, CliError> {
        let requested = self.get("temperature_mode");
        if params.is_zero_temperature() {
            return match requested {
                None | Some("coth_one") => Ok(TemperatureMode::ZeroT),
                Some(other) => Err(config_error(
                    "temperature_mode",
                    format!("`{other}` is not available at temperature_K = 0"),
                )),
            };
        }
        match requested.unwrap_or("thermal") {
            "thermal" => Ok(TemperatureMode::Thermal),
            "coth_one" => Ok(TemperatureMode::CothOne),
            other => Err(config_error(
                "temperature_mode",
                format!("`{other}` is not one of thermal, coth_one"),
            )),
        }
    }

    pub fn strategy(&self) -> Result<Strategy, CliError> {
        match self.get("strategy").unwrap_or("auto") {
            "auto" => Ok(Strategy::AutoSelect),
            "quadrature" => Ok(Strategy::Quadrature),
            "closed_form_coth_one" => Ok(Strategy::ClosedFormCothOne),
            "long_time_asymptote" => Ok(Strategy::LongTimeAsymptote),
            other => Err(config_error(
                "strategy",
                format!("`{other}` is not one of auto, quadrature, closed_form_coth_one, long_time_asymptote"),
            )),
        }
    }

    /// Evaluation time in the dimensionless unit of `derived`.
    pub fn time(&self, derived: &DerivedQuantities) -> Result<f64, CliError> {
        let zero_t = derived.is_zero_temperature();
        let key = self.exclusive(&["t_over_tau", "t_over_t0", "t_seconds"])?.ok_or_else(|| {
            let native = if zero_t { "t_over_t0" } else { "t_over_tau" };
            config_error(native, format!("required: give `{native}` or `t_seconds`"))
        })?;
        let value = self.f64(key)?.expect("present");
        if value < 0.0 {
            return Err(config_error(key, "must be non-negative"));
        }
        match (key, zero_t) {
            ("t_over_tau", true) => Err(config_error(key, "no thermal time at temperature_K = 0; use t_over_t0")),
            ("t_over_t0", false) => Err(config_error(key, "only used at temperature_K = 0; use t_over_tau")),
            ("t_seconds", _) => Ok(value / derived.time_unit()),
            _ => Ok(value),
        }
    }

    /// `default` with the grid keys of this configuration applied.
    pub fn axes(&self, (x, y): (Axis, Axis)) -> Result<(Axis, Axis), CliError> {
        let apply = |mut a: Axis, n: &str, lo: &str, hi: &str| -> Result<Axis, CliError> {
            if let Some(v) = self.usize(n)? {
                a.n = v;
            }
            if let Some(v) = self.f64(lo)? {
                a.min = v;
            }
            if let Some(v) = self.f64(hi)? {
                a.max = v;
            }
            if a.n == 0 {
                return Err(config_error(n, "must be at least 1"));
            }
            if a.n > 1 && !(a.max > a.min) {
                return Err(config_error(hi, format!("must exceed {lo}")));
            }
            Ok(a)
        };
        let x = apply(x, "grid_nx", "grid_x_min", "grid_x_max")?;
        let y = apply(y, "grid_ny", "grid_y_min", "grid_y_max")?;
        if x.name == "gamma" && (x.min < 0.0 || x.max > 1.0) {
            return Err(config_error(if x.min < 0.0 { "grid_x_min" } else { "grid_x_max" }, "gamma must lie in [0, 1]"));
        }
        if x.name == "v" && x.min < 0.0 {
            return Err(config_error("grid_x_min", "v must be non-negative"));
        }
        Ok((x, y))
    }

    pub fn t1_search(&self) -> Result<T1Search, CliError> {
        let mut s = T1Search {
            log10_t_min: self.f64("search_log10_t_min")?,
            log10_t_max: self.f64("search_log10_t_max")?,
            ..T1Search::default()
        };
        if let Some(n) = self.usize("search_points")? {
            if n < 3 {
                return Err(config_error("search_points", "must be at least 3"));
            }
            s.points = n;
        }
        if let Some(t) = self.f64("search_threshold")? {
            if !(0.0..1.0).contains(&t) {
                return Err(config_error("search_threshold", "must lie in [0, 1)"));
            }
            s.threshold = t;
        }
        Ok(s)
    }
}

/// Map a library parameter error onto the configuration key it came from.
pub fn param_error(e: ParamError, dipole_key: &str) -> CliError {
    match e {
        ParamError::Domain { name, value, reason } => {
            let key = match name {
                "temperature" => "temperature_K",
                "dipole" => dipole_key,
                "separation" => "separation_m",
                "omega_max" => "cutoff_eV",
                other => other,
            };
            config_error(key, format!("{value} {reason}"))
        }
        ParamError::UnsupportedMode(what) => {
            let key = if KEYS.iter().any(|(k, _)| *k == what) { what } else { "temperature_K" };
            config_error(key, format!("{what} needs a finite temperature"))
        }
    }
}
