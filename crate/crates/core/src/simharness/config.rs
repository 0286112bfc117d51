use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{JelError, Result};
use crate::inference::Method;
use crate::ustat::Kernel;

/// How the design variance entering `n*` (or `m`) is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeffSource {
    /// Estimated from each sample.
    Estimated,
    /// Variance of the point estimates across replicates of the same cell.
    MonteCarlo,
}

impl FromStr for DeffSource {
    type Err = JelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "estimated" => Ok(DeffSource::Estimated),
            "monte_carlo" => Ok(DeffSource::MonteCarlo),
            other => Err(JelError::Config(format!(
                "deff_mode must be `estimated` or `monte_carlo`, got {other:?}"
            ))),
        }
    }
}

impl DeffSource {
    pub fn as_str(self) -> &'static str {
        match self {
            DeffSource::Estimated => "estimated",
            DeffSource::MonteCarlo => "monte_carlo",
        }
    }
}

/// Replicates used by the default configuration.
pub const DEFAULT_REPLICATES: usize = 1000;
/// Smaller replicate count for quick test runs.
pub const FAST_REPLICATES: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub population_size: usize,
    pub n_list: Vec<usize>,
    pub rho_list: Vec<f64>,
    pub beta0: f64,
    pub beta1: f64,
    pub shift: f64,
    pub replicates: usize,
    pub level: f64,
    pub kernel_name: String,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    pub deff_source: DeffSource,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            population_size: 1000,
            n_list: vec![100, 150],
            rho_list: vec![0.3, 0.5],
            beta0: 1.0,
            beta1: 1.0,
            shift: 1.0,
            replicates: DEFAULT_REPLICATES,
            level: 0.95,
            kernel_name: "pwm".to_string(),
            methods: Method::ALL.to_vec(),
            master_seed: 20_240_601,
            deff_source: DeffSource::Estimated,
        }
    }
}

const KEYS: [&str; 12] = [
    "N",
    "n_list",
    "rho_list",
    "beta0",
    "beta1",
    "shift",
    "B_reps",
    "level",
    "kernel_name",
    "methods",
    "master_seed",
    "deff_mode",
];

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| JelError::Config(format!("invalid value {raw:?} for key `{key}`")))
}

fn parse_list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, s))
        .collect()
}

impl SimulationConfig {
    /// Parses flat `key = value` text. Lines starting with `#` and blank
    /// lines are ignored; keys not listed are rejected, as are repeats.
    /// Keys that are absent keep their default values.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SimulationConfig::default();
        let mut seen = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                JelError::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(JelError::Config(format!(
                    "line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            if seen.contains(&key) {
                return Err(JelError::Config(format!(
                    "line {}: key `{key}` given twice",
                    lineno + 1
                )));
            }
            seen.push(key);
            match key {
                "N" => cfg.population_size = parse_value(key, value)?,
                "n_list" => cfg.n_list = parse_list(key, value)?,
                "rho_list" => cfg.rho_list = parse_list(key, value)?,
                "beta0" => cfg.beta0 = parse_value(key, value)?,
                "beta1" => cfg.beta1 = parse_value(key, value)?,
                "shift" => cfg.shift = parse_value(key, value)?,
                "B_reps" => cfg.replicates = parse_value(key, value)?,
                "level" => cfg.level = parse_value(key, value)?,
                "kernel_name" => cfg.kernel_name = value.trim().to_string(),
                "methods" => {
                    cfg.methods = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| {
                            s.parse()
                                .map_err(|_| JelError::Config(format!("unknown method {s:?}")))
                        })
                        .collect::<Result<_>>()?
                }
                "master_seed" => cfg.master_seed = parse_value(key, value)?,
                "deff_mode" => cfg.deff_source = value.parse()?,
                _ => unreachable!(),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => JelError::FileNotFound(path.display().to_string()),
            _ => JelError::Io(e.to_string()),
        })?;
        SimulationConfig::parse(&text)
    }

    /// Renders the configuration in the format accepted by [`Self::parse`].
    pub fn to_text(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let mut s = String::new();
        let _ = writeln!(s, "N = {}", self.population_size);
        let _ = writeln!(
            s,
            "n_list = {}",
            join(self.n_list.iter().map(|n| n.to_string()).collect())
        );
        let _ = writeln!(
            s,
            "rho_list = {}",
            join(self.rho_list.iter().map(|r| r.to_string()).collect())
        );
        let _ = writeln!(s, "beta0 = {}", self.beta0);
        let _ = writeln!(s, "beta1 = {}", self.beta1);
        let _ = writeln!(s, "shift = {}", self.shift);
        let _ = writeln!(s, "B_reps = {}", self.replicates);
        let _ = writeln!(s, "level = {}", self.level);
        let _ = writeln!(s, "kernel_name = {}", self.kernel_name);
        let _ = writeln!(
            s,
            "methods = {}",
            join(self.methods.iter().map(|m| m.tag().to_string()).collect())
        );
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(s, "deff_mode = {}", self.deff_source.as_str());
        s
    }

    pub fn validate(&self) -> Result<()> {
        let max_n = self.n_list.iter().copied().max().unwrap_or(0);
        if self.n_list.is_empty() || self.rho_list.is_empty() {
            return Err(JelError::Config(
                "n_list and rho_list must not be empty".into(),
            ));
        }
        if self.population_size < max_n {
            return Err(JelError::Config(format!(
                "N = {} is smaller than the largest sample size {max_n}",
                self.population_size
            )));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 3) {
            return Err(JelError::Config(format!("sample size {n} is below 3")));
        }
        if self.replicates < 1 {
            return Err(JelError::Config("B_reps must be at least 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(JelError::Config(format!(
                "level {} outside (0, 1)",
                self.level
            )));
        }
        if let Some(r) = self.rho_list.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(JelError::Config(format!("rho {r} outside (0, 1)")));
        }
        if !(self.shift >= 0.0) {
            return Err(JelError::Config(format!(
                "shift {} is negative",
                self.shift
            )));
        }
        Kernel::by_name(&self.kernel_name)
            .map_err(|_| JelError::Config(format!("unknown kernel {:?}", self.kernel_name)))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_full_config() {
        let text = "\
# table 1 cell
N = 1000
n_list = 100, 150
rho_list = 0.3
beta0 = 1
beta1 = 1
shift = 1.0
B_reps = 300
level = 0.95
kernel_name = pwm
methods = NA,JEL
master_seed = 7
deff_mode = monte_carlo
";
        let cfg = SimulationConfig::parse(text).unwrap();
        assert_eq!(cfg.n_list, vec![100, 150]);
        assert_eq!(cfg.rho_list, vec![0.3]);
        assert_eq!(cfg.replicates, 300);
        assert_eq!(cfg.methods, vec![Method::Na, Method::Jel]);
        assert_eq!(cfg.deff_source, DeffSource::MonteCarlo);
        assert_eq!(SimulationConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            "threads = 4",
            "N = 50\nn_list = 100",
            "B_reps = 0",
            "level = 1.5",
            "rho_list = 0.3, 1.0",
            "kernel_name = gini",
            "methods = JEL, XYZ",
            "N = 1000\nN = 2000",
            "just some text",
            "deff_mode = exact",
        ] {
            assert!(
                matches!(SimulationConfig::parse(bad), Err(JelError::Config(_))),
                "{bad:?} accepted"
            );
        }
    }

    #[test]
    fn defaults_are_valid() {
        SimulationConfig::default().validate().unwrap();
        assert_eq!(
            SimulationConfig::parse("").unwrap(),
            SimulationConfig::default()
        );
    }
}
