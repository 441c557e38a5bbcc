//! A protocol, a detector configuration and a link: the unit that sweeps and
//! distance searches evaluate.
//!
//! Scenario files are JSON:
//!
//! ```json
//! {
//!   "protocol": "bb84_single_photon",
//!   "mode": "dual",
//!   "link": {"alpha_db_per_km": 0.21, "length_km": 0, "g_bob": 0.16, "switch_loss_db": 0},
//!   "detectors": [
//!     {"spd": {"rep_rate_hz": 1e9, "eta_d": 0.059, "y0": 1.3e-5, "e_det": 0.018}},
//!     {"spd": {"rep_rate_hz": 2.5e6, "eta_d": 0.5, "y0": 3e-7, "e_det": 0.018}}
//!   ],
//!   "config": {"basis_factor": 0.5, "f_ec": 1.22}
//! }
//! ```
//!
//! With two detectors the first is the fast one. Single modes accept either
//! one detector or the pair (and then pick the matching entry).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bb84::{bb84_rate_dual, bb84_rate_single, Bb84Config};
use crate::decoy::{decoy_rate_dual, decoy_rate_single, DecoyConfig};
use crate::error::{Error, Result};
use crate::gmcs::{gmcs_dr_rate_dual, gmcs_dr_rate_single, gmcs_rr_rate_dual, gmcs_rr_rate_single};
use crate::params::{GmcsSource, HomodyneSpec, LinkSpec, SpdSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    Bb84SinglePhoton,
    DecoyBb84,
    GmcsDr,
    GmcsRr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    SingleFast,
    SingleSlow,
    Dual,
    /// Dual detectors with the privacy-amplification term dropped (decoy only).
    DualNoPa,
}

impl Mode {
    pub fn is_dual(self) -> bool {
        matches!(self, Mode::Dual | Mode::DualNoPa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DetectorSpec {
    Spd(SpdSpec),
    Homodyne(HomodyneSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ProtocolConfig {
    Bb84(Bb84Config),
    Decoy(DecoyConfig),
    Gmcs(GmcsSource),
}

/// On-disk form of a scenario. `config` is parsed once `protocol` is known.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    protocol: Protocol,
    mode: Mode,
    link: LinkSpec,
    detectors: Vec<DetectorSpec>,
    config: serde_json::Value,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    protocol: Protocol,
    mode: Mode,
    link: LinkSpec,
    detectors: Vec<DetectorSpec>,
    config: ProtocolConfig,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl Scenario {
    /// Checks kinds, counts and parameter ranges. Single modes get their
    /// switch loss forced to zero.
    pub fn new(
        protocol: Protocol,
        mode: Mode,
        mut link: LinkSpec,
        detectors: Vec<DetectorSpec>,
        config: ProtocolConfig,
    ) -> Result<Self> {
        link.validate()?;
        if !mode.is_dual() {
            link.switch_loss = 0.0;
        }
        if mode == Mode::DualNoPa && protocol != Protocol::DecoyBb84 {
            return Err(config_error(
                "mode dual_no_pa is only defined for decoy_bb84",
            ));
        }
        match detectors.len() {
            1 if mode.is_dual() => {
                return Err(config_error("dual modes need two detectors (fast, slow)"))
            }
            1 | 2 => {}
            n => return Err(config_error(format!("expected 1 or 2 detectors, got {n}"))),
        }
        let wants_spd = matches!(protocol, Protocol::Bb84SinglePhoton | Protocol::DecoyBb84);
        for d in &detectors {
            match (wants_spd, d) {
                (true, DetectorSpec::Spd(s)) => s.validate()?,
                (false, DetectorSpec::Homodyne(h)) => h.validate()?,
                (true, _) => {
                    return Err(config_error(format!(
                        "{protocol:?} needs single-photon detectors"
                    )))
                }
                (false, _) => {
                    return Err(config_error(format!(
                        "{protocol:?} needs homodyne detectors"
                    )))
                }
            }
        }
        match (protocol, &config) {
            (Protocol::Bb84SinglePhoton, ProtocolConfig::Bb84(c)) => c.validate()?,
            (Protocol::DecoyBb84, ProtocolConfig::Decoy(c)) => c.validate()?,
            (Protocol::GmcsDr | Protocol::GmcsRr, ProtocolConfig::Gmcs(c)) => c.validate()?,
            _ => {
                return Err(config_error(format!(
                    "config block does not match protocol {protocol:?}"
                )))
            }
        }
        Ok(Self {
            protocol,
            mode,
            link,
            detectors,
            config,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(s)
            .map_err(|e| config_error(format!("invalid scenario JSON: {e}")))?;
        let parse = |what: &str| config_error(format!("invalid {what} config"));
        let config = match file.protocol {
            Protocol::Bb84SinglePhoton => ProtocolConfig::Bb84(
                serde_json::from_value(file.config.clone())
                    .map_err(|e| config_error(format!("{}: {e}", parse("bb84"))))?,
            ),
            Protocol::DecoyBb84 => ProtocolConfig::Decoy(
                serde_json::from_value(file.config.clone())
                    .map_err(|e| config_error(format!("{}: {e}", parse("decoy"))))?,
            ),
            Protocol::GmcsDr | Protocol::GmcsRr => ProtocolConfig::Gmcs(
                serde_json::from_value(file.config.clone())
                    .map_err(|e| config_error(format!("{}: {e}", parse("gmcs"))))?,
            ),
        };
        Self::new(file.protocol, file.mode, file.link, file.detectors, config)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        let file = ScenarioFile {
            protocol: self.protocol,
            mode: self.mode,
            link: self.link,
            detectors: self.detectors.clone(),
            config: serde_json::to_value(self.config).expect("configs serialize"),
        };
        serde_json::to_string_pretty(&file).expect("scenario serializes")
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn link(&self) -> &LinkSpec {
        &self.link
    }

    pub fn detectors(&self) -> &[DetectorSpec] {
        &self.detectors
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    /// Same scenario in another mode. Needs two detectors for dual modes.
    pub fn with_mode(&self, mode: Mode) -> Result<Self> {
        Self::new(
            self.protocol,
            mode,
            self.link,
            self.detectors.clone(),
            self.config,
        )
    }

    /// Same scenario with another switch loss (ignored by single modes).
    pub fn with_switch_loss(&self, switch_loss_db: f64) -> Result<Self> {
        let link = LinkSpec {
            switch_loss: switch_loss_db,
            ..self.link
        };
        Self::new(
            self.protocol,
            self.mode,
            link,
            self.detectors.clone(),
            self.config,
        )
    }

    fn fast(&self) -> DetectorSpec {
        self.detectors[0]
    }

    fn slow(&self) -> DetectorSpec {
        *self.detectors.last().expect("validated non-empty")
    }

    /// Unclamped key rate in bits/s at `length_km`.
    pub fn evaluate(&self, length_km: f64) -> Result<f64> {
        let link = self.link.at_length(length_km);
        link.validate()?;
        let (a, b) = match self.mode {
            Mode::SingleFast => (self.fast(), None),
            Mode::SingleSlow => (self.slow(), None),
            Mode::Dual | Mode::DualNoPa => (self.fast(), Some(self.slow())),
        };
        use DetectorSpec::{Homodyne, Spd};
        match (self.protocol, self.config, a, b) {
            (Protocol::Bb84SinglePhoton, ProtocolConfig::Bb84(c), Spd(d), None) => {
                bb84_rate_single(&d, &link, &c)
            }
            (Protocol::Bb84SinglePhoton, ProtocolConfig::Bb84(c), Spd(f), Some(Spd(s))) => {
                bb84_rate_dual(&f, &s, &link, &c)
            }
            (Protocol::DecoyBb84, ProtocolConfig::Decoy(c), Spd(d), None) => {
                decoy_rate_single(&d, &link, &c)
            }
            (Protocol::DecoyBb84, ProtocolConfig::Decoy(c), Spd(f), Some(Spd(s))) => {
                let c = DecoyConfig {
                    drop_pa: c.drop_pa || self.mode == Mode::DualNoPa,
                    ..c
                };
                decoy_rate_dual(&f, &s, &link, &c)
            }
            (Protocol::GmcsDr, ProtocolConfig::Gmcs(c), Homodyne(d), None) => {
                gmcs_dr_rate_single(&c, &d, &link)
            }
            (Protocol::GmcsDr, ProtocolConfig::Gmcs(c), Homodyne(f), Some(Homodyne(s))) => {
                gmcs_dr_rate_dual(&c, &f, &s, &link)
            }
            (Protocol::GmcsRr, ProtocolConfig::Gmcs(c), Homodyne(d), None) => {
                gmcs_rr_rate_single(&c, &d, &link)
            }
            (Protocol::GmcsRr, ProtocolConfig::Gmcs(c), Homodyne(f), Some(Homodyne(s))) => {
                gmcs_rr_rate_dual(&c, &f, &s, &link)
            }
            _ => Err(config_error(
                "detector kinds or config do not match the protocol",
            )),
        }
    }
}
