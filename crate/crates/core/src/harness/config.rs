//! Flat `key = value` configuration with dotted keys.
//!
//! Every key has a default reproducing the canonical simulation setup
//! (six transmit antennas, three two-antenna users at 1 km, 2 GHz
//! carrier, 1 ms feedback delay, -174 dBm/Hz noise, 5 MHz bandwidth,
//! the macro-cell power model), so an empty file is a valid config.
//! `#` starts a comment; blank lines are ignored; unknown keys are
//! rejected.

use std::path::Path;

use crate::channel::Scenario;
use crate::error::{Error, Result};
use crate::modeswitch::{CatalogSource, Estimator};
use crate::power::PowerModel;

/// Fully-resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario<f64>,
    pub power: PowerModel<f64>,
    /// Base-station antennas.
    pub m: usize,
    /// Antennas per user.
    pub n: usize,
    /// Users.
    pub k: usize,
    pub catalog: CatalogSource,
    pub trials: usize,
    pub seed: u64,
    pub estimator: Estimator,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::default(),
            power: PowerModel::default(),
            m: 6,
            n: 2,
            k: 3,
            catalog: CatalogSource::Canonical,
            trials: 1000,
            seed: 1,
            estimator: Estimator::Upper,
        }
    }
}

impl RunConfig {
    /// Apply one `key = value` override.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("invalid {what} '{value}' for key '{key}'"));
        let f = |v: &str| -> Result<f64> { v.trim().parse::<f64>().map_err(|_| bad("number")) };
        let u = |v: &str| -> Result<usize> { v.trim().parse::<usize>().map_err(|_| bad("count")) };
        match key {
            "scenario.distances_km" => {
                let parsed: std::result::Result<Vec<f64>, _> =
                    value.split(',').map(|s| s.trim().parse::<f64>()).collect();
                self.scenario.distances_km = parsed.map_err(|_| bad("distance list"))?;
            }
            "scenario.speed_kmh" => self.scenario.speed_kmh = f(value)?,
            "scenario.carrier_hz" => self.scenario.carrier_hz = f(value)?,
            "scenario.delay_s" => self.scenario.delay_s = f(value)?,
            "scenario.noise_density_w_per_hz" => self.scenario.noise_density_w_per_hz = f(value)?,
            "scenario.w_max_hz" => self.scenario.w_max_hz = f(value)?,
            "scenario.pathloss_db_intercept" => self.scenario.pathloss_db_intercept = f(value)?,
            "scenario.pathloss_db_slope" => self.scenario.pathloss_db_slope = f(value)?,
            "scenario.shadow_multiplier" => self.scenario.shadow_multiplier = f(value)?,
            "power.eta" => self.power.eta = f(value)?,
            "power.p_cir_w" => self.power.p_cir_w = f(value)?,
            "power.p_sp_bw_w_per_hz" => self.power.p_sp_bw_w_per_hz = f(value)?,
            "power.p_ac_bw_w_per_hz" => self.power.p_ac_bw_w_per_hz = f(value)?,
            "power.p_sta_w" => self.power.p_sta_w = f(value)?,
            "system.m" => self.m = u(value)?,
            "system.n" => self.n = u(value)?,
            "system.k" => self.k = u(value)?,
            "run.trials" => self.trials = u(value)?,
            "run.seed" => self.seed = value.trim().parse::<u64>().map_err(|_| bad("seed"))?,
            "run.estimator" => self.estimator = Estimator::parse(value)?,
            "run.catalog" => {
                self.catalog = match value.trim().to_ascii_lowercase().as_str() {
                    "canonical" | "default" => CatalogSource::Canonical,
                    "exhaustive" => CatalogSource::Exhaustive,
                    other => {
                        return Err(Error::Config(format!(
                            "unknown catalog '{other}' (expected canonical|exhaustive)"
                        )))
                    }
                }
            }
            other => return Err(Error::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Reconcile cross-field constraints after all keys are applied.
    pub fn finalize(mut self) -> Result<Self> {
        if self.trials == 0 {
            return Err(Error::Config("run.trials must be >= 1".into()));
        }
        if self.m == 0 || self.n == 0 || self.k == 0 {
            return Err(Error::Config("system dimensions must be >= 1".into()));
        }
        if self.scenario.distances_km.len() != self.k {
            if self.scenario.distances_km.len() == 1 {
                let d = self.scenario.distances_km[0];
                self.scenario.distances_km = vec![d; self.k];
            } else if self.scenario.distances_km == vec![1.0; self.scenario.distances_km.len()] {
                // untouched default: resize to the configured user count
                self.scenario.distances_km = vec![1.0; self.k];
            } else {
                return Err(Error::Config(format!(
                    "scenario.distances_km has {} entries for {} users",
                    self.scenario.distances_km.len(),
                    self.k
                )));
            }
        }
        self.scenario.validate()?;
        Ok(self)
    }
}

/// Parse a config file's text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
        cfg.apply_kv(key.trim(), value.trim())?;
    }
    cfg.finalize()
}

/// Load and parse a config file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_canonical_setup() {
        let cfg = parse_config("").unwrap();
        assert_eq!((cfg.m, cfg.n, cfg.k), (6, 2, 3));
        assert_eq!(cfg.trials, 1000);
        assert_eq!(cfg.seed, 1);
        assert_eq!(cfg.scenario.w_max_hz, 5e6);
        assert_eq!(cfg.scenario.carrier_hz, 2e9);
        assert_eq!(cfg.power.eta, 0.38);
        assert_eq!(cfg.scenario.distances_km, vec![1.0; 3]);
    }

    #[test]
    fn keys_comments_and_overrides() {
        let text = "\
# comment line
scenario.speed_kmh = 42.5
power.eta = 0.5   # trailing comment
system.k = 2
run.estimator = zhang
run.trials = 7
scenario.distances_km = 0.5, 1.5
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.scenario.speed_kmh, 42.5);
        assert_eq!(cfg.power.eta, 0.5);
        assert_eq!(cfg.k, 2);
        assert_eq!(cfg.trials, 7);
        assert_eq!(cfg.estimator, Estimator::Zhang);
        assert_eq!(cfg.scenario.distances_km, vec![0.5, 1.5]);
    }

    #[test]
    fn single_distance_replicates_to_users() {
        let cfg = parse_config("scenario.distances_km = 2.0\nsystem.k = 3\n").unwrap();
        assert_eq!(cfg.scenario.distances_km, vec![2.0; 3]);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(parse_config("bogus.key = 1\n").is_err());
        assert!(parse_config("run.trials = zero\n").is_err());
        assert!(parse_config("run.estimator = best\n").is_err());
        assert!(parse_config("no equals sign\n").is_err());
        assert!(parse_config("run.trials = 0\n").is_err());
    }

    #[test]
    fn user_count_distance_mismatch_rejected() {
        assert!(parse_config("scenario.distances_km = 1.0, 2.0\nsystem.k = 3\n").is_err());
    }
}
