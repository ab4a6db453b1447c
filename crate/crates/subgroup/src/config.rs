//! Scenario configuration: defaults, INI file, command-line overrides.

use std::path::{Path, PathBuf};

use clap::Args;
use ini::Ini;
use subgroup_core::capacity::{AntennaConfig, LinkBudget};
use subgroup_core::channel::{CorrelationModel, DelayProfile, DopplerSpec};
use subgroup_core::grouping::GridSpec;

use crate::error::{CliError, CliResult};
use crate::format::read_profile_file;

/// Every parameter of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// `RA`, `TU`, `HT` or a profile file path.
    pub environment: String,
    pub speed_mps: f64,
    pub carrier_hz: f64,
    /// Per-antenna SNR `γ` in dB; total power is `γ · n_t`.
    pub snr_db: f64,
    pub n_t: usize,
    pub n_r: usize,
    pub k_subcarriers: usize,
    pub m_blocks: usize,
    pub bf_hz: f64,
    pub bt_s: f64,
    pub zeta_r: f64,
    pub trials: usize,
    pub seed: u64,
    /// Mismatch variance for Monte Carlo trials; the planned `σ_m²*` if unset.
    pub sigma_m2: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            environment: "RA".into(),
            speed_mps: 10.0,
            carrier_hz: subgroup_core::channel::DEFAULT_CARRIER_HZ,
            snr_db: 10.0,
            n_t: 8,
            n_r: 8,
            k_subcarriers: 32,
            m_blocks: 32,
            bf_hz: GridSpec::DEFAULT_BF_HZ,
            bt_s: GridSpec::DEFAULT_BT_S,
            zeta_r: 0.1,
            trials: 10_000,
            seed: 1,
            sigma_m2: None,
        }
    }
}

/// Scenario flags; each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Environment: RA, TU, HT or a delay-profile file
    #[arg(long = "env")]
    pub environment: Option<String>,
    /// Mobile speed, m/s
    #[arg(long = "speed")]
    pub speed_mps: Option<f64>,
    /// Carrier frequency, Hz
    #[arg(long = "carrier")]
    pub carrier_hz: Option<f64>,
    /// Per-antenna SNR in dB (total power = SNR · n_t)
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    /// Transmit antennas
    #[arg(long = "nt")]
    pub n_t: Option<usize>,
    /// Receive antennas
    #[arg(long = "nr")]
    pub n_r: Option<usize>,
    /// Subcarriers per OFDM block
    #[arg(long = "subcarriers")]
    pub k_subcarriers: Option<usize>,
    /// OFDM blocks
    #[arg(long = "blocks")]
    pub m_blocks: Option<usize>,
    /// Subcarrier spacing, Hz
    #[arg(long = "bf")]
    pub bf_hz: Option<f64>,
    /// Block interval, s
    #[arg(long = "bt")]
    pub bt_s: Option<f64>,
    /// Tolerable relative capacity loss
    #[arg(long = "zeta")]
    pub zeta_r: Option<f64>,
    /// Monte Carlo trials (at least 100)
    #[arg(long)]
    pub trials: Option<usize>,
    /// Mismatch variance for Monte Carlo trials
    #[arg(long = "sigma-m2")]
    pub sigma_m2: Option<f64>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("config key `{key}`: cannot parse `{value}`")))
}

impl ScenarioConfig {
    /// Reads `key = value` pairs from the `[scenario]` section.
    pub fn from_ini_file(path: &Path) -> CliResult<Self> {
        let ini = Ini::load_from_file(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::default();
        for (section, props) in ini.iter() {
            match section {
                Some("scenario") => {}
                None if props.is_empty() => continue,
                Some(other) => {
                    return Err(CliError::input(format!("unknown config section [{other}]")))
                }
                None => return Err(CliError::input("config keys must sit under [scenario]")),
            }
            for (key, value) in props.iter() {
                cfg.set(key, value)?;
            }
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "environment" => self.environment = value.trim().to_string(),
            "speed_mps" => self.speed_mps = parse_value(key, value)?,
            "carrier_hz" => self.carrier_hz = parse_value(key, value)?,
            "snr_db" => self.snr_db = parse_value(key, value)?,
            "n_t" => self.n_t = parse_value(key, value)?,
            "n_r" => self.n_r = parse_value(key, value)?,
            "k_subcarriers" => self.k_subcarriers = parse_value(key, value)?,
            "m_blocks" => self.m_blocks = parse_value(key, value)?,
            "bf_hz" => self.bf_hz = parse_value(key, value)?,
            "bt_s" => self.bt_s = parse_value(key, value)?,
            "zeta_r" => self.zeta_r = parse_value(key, value)?,
            "trials" => self.trials = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "sigma_m2" => self.sigma_m2 = Some(parse_value(key, value)?),
            _ => return Err(CliError::input(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    pub fn apply(&mut self, args: &ScenarioArgs) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = args.$field.clone() { self.$field = v; })*
            };
        }
        take!(
            environment,
            speed_mps,
            carrier_hz,
            snr_db,
            n_t,
            n_r,
            k_subcarriers,
            m_blocks,
            bf_hz,
            bt_s,
            zeta_r,
            trials
        );
        if args.sigma_m2.is_some() {
            self.sigma_m2 = args.sigma_m2;
        }
    }

    /// Defaults, then the file (if any), then flags, then validation.
    pub fn resolve(
        file: Option<&PathBuf>,
        args: &ScenarioArgs,
        seed: Option<u64>,
    ) -> CliResult<Self> {
        let mut cfg = match file {
            Some(p) => Self::from_ini_file(p)?,
            None => Self::default(),
        };
        cfg.apply(args);
        if let Some(s) = seed {
            cfg.seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let positive = [
            ("speed_mps", self.speed_mps, true),
            ("carrier_hz", self.carrier_hz, false),
            ("bf_hz", self.bf_hz, false),
            ("bt_s", self.bt_s, false),
        ];
        for (name, v, zero_ok) in positive {
            if !v.is_finite() || v < 0.0 || (!zero_ok && v == 0.0) {
                return Err(CliError::input(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.snr_db.is_finite() {
            return Err(CliError::input("snr_db must be finite"));
        }
        for (name, v) in [
            ("n_t", self.n_t),
            ("n_r", self.n_r),
            ("k_subcarriers", self.k_subcarriers),
            ("m_blocks", self.m_blocks),
            ("trials", self.trials),
        ] {
            if v == 0 {
                return Err(CliError::input(format!("{name} must be at least 1")));
            }
        }
        if !(self.zeta_r > 0.0 && self.zeta_r < 1.0) {
            return Err(CliError::input(format!(
                "zeta_r must lie in (0, 1), got {}",
                self.zeta_r
            )));
        }
        if let Some(s) = self.sigma_m2 {
            if !(0.0..=2.0).contains(&s) {
                return Err(CliError::input(format!(
                    "sigma_m2 must lie in [0, 2], got {s}"
                )));
            }
        }
        Ok(())
    }

    pub fn antennas(&self) -> CliResult<AntennaConfig> {
        Ok(AntennaConfig::new(self.n_t, self.n_r)?)
    }

    /// Per-antenna SNR as a linear ratio.
    pub fn gamma(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }

    pub fn budget(&self) -> CliResult<LinkBudget> {
        Ok(LinkBudget::from_per_antenna_snr(
            self.gamma(),
            self.antennas()?,
        )?)
    }

    pub fn grid(&self) -> CliResult<GridSpec> {
        Ok(GridSpec::new(
            self.k_subcarriers,
            self.m_blocks,
            self.bf_hz,
            self.bt_s,
        )?)
    }

    pub fn profile(&self) -> CliResult<DelayProfile> {
        resolve_profile(&self.environment)
    }

    pub fn model(&self) -> CliResult<CorrelationModel> {
        let doppler = DopplerSpec::new(self.carrier_hz, self.speed_mps)?;
        Ok(CorrelationModel::new(self.profile()?, doppler))
    }
}

/// A preset name, or else a profile file.
pub fn resolve_profile(environment: &str) -> CliResult<DelayProfile> {
    if let Some(p) = DelayProfile::by_name(environment) {
        return Ok(p);
    }
    let path = Path::new(environment);
    if !path.exists() {
        return Err(CliError::input(format!(
            "environment `{environment}` is neither RA/TU/HT nor a readable profile file"
        )));
    }
    read_profile_file(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn file_then_flags() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            f,
            "# test\n[scenario]\nenvironment = TU\nspeed_mps = 30\nzeta_r = 0.2"
        )
        .unwrap();
        let args = ScenarioArgs {
            speed_mps: Some(100.0),
            ..Default::default()
        };
        let cfg = ScenarioConfig::resolve(Some(&f.path().to_path_buf()), &args, Some(9)).unwrap();
        assert_eq!(cfg.environment, "TU");
        assert_eq!(cfg.speed_mps, 100.0);
        assert_eq!(cfg.zeta_r, 0.2);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.n_t, 8);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        for body in [
            "[scenario]\nwat = 1",
            "[scenario]\nspeed_mps = fast",
            "[other]\nx = 1",
            "zeta_r = 0.1",
        ] {
            let mut f = tempfile::NamedTempFile::new().unwrap();
            write!(f, "{body}").unwrap();
            let e = ScenarioConfig::from_ini_file(f.path()).unwrap_err();
            assert_eq!(e.exit_code(), 1, "{body}");
        }
    }

    #[test]
    fn zeta_bounds() {
        let mut c = ScenarioConfig {
            zeta_r: 0.0,
            ..ScenarioConfig::default()
        };
        assert!(c.validate().is_err());
        c.zeta_r = 1.0;
        assert!(c.validate().is_err());
        c.zeta_r = 0.5;
        c.validate().unwrap();
    }
}
