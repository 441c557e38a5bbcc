//! BB84 with an ideal single-photon source.
//!
//! The single-detector rate charges both error correction and privacy
//! amplification to the same detector's QBER. The dual-detector rate keeps the
//! fast detector's gain and error-correction cost but takes the privacy
//! amplification cost from the quiet detector's QBER.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::math::{binary_entropy, BACKGROUND_ERROR_RATE};
use crate::params::{LinkSpec, SpdSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bb84Config {
    /// Sifting factor: 0.5 for standard BB84, 1.0 for the efficient variant.
    pub basis_factor: f64,
    /// Error-correction inefficiency relative to the Shannon limit.
    pub f_ec: f64,
}

impl Default for Bb84Config {
    fn default() -> Self {
        Self {
            basis_factor: 0.5,
            f_ec: 1.22,
        }
    }
}

impl Bb84Config {
    pub fn validate(&self) -> Result<()> {
        validate_basis_factor(self.basis_factor)?;
        ensure(
            self.f_ec >= 1.0 && self.f_ec.is_finite(),
            "f_ec",
            self.f_ec,
            "an efficiency factor >= 1",
        )
    }
}

pub(crate) fn validate_basis_factor(bf: f64) -> Result<()> {
    ensure(bf == 0.5 || bf == 1.0, "basis_factor", bf, "0.5 or 1.0")
}

fn check_extra_loss(extra_loss: f64) -> Result<()> {
    ensure(
        extra_loss > 0.0 && extra_loss <= 1.0,
        "extra_loss",
        extra_loss,
        "a transmittance multiplier in (0, 1]",
    )
}

/// Probability that a sent photon is detected, excluding dark counts.
fn signal_detection(spd: &SpdSpec, link: &LinkSpec, extra_loss: f64) -> Result<f64> {
    spd.validate()?;
    link.validate()?;
    check_extra_loss(extra_loss)?;
    Ok(link.channel_transmittance()? * link.g_bob * extra_loss * spd.eta_d)
}

/// Gain `Q1`: detections per sent pulse, dark counts included.
pub fn bb84_gain(spd: &SpdSpec, link: &LinkSpec, extra_loss: f64) -> Result<f64> {
    Ok(spd.y0 + signal_detection(spd, link, extra_loss)?)
}

/// QBER `e1` of the detections counted by [`bb84_gain`].
pub fn bb84_qber(spd: &SpdSpec, link: &LinkSpec, extra_loss: f64) -> Result<f64> {
    let signal = signal_detection(spd, link, extra_loss)?;
    let gain = spd.y0 + signal;
    if gain <= 0.0 {
        return Err(Error::DivisionByZero("BB84 QBER (gain is zero)"));
    }
    Ok((BACKGROUND_ERROR_RATE * spd.y0 + spd.e_det * signal) / gain)
}

/// Key rate in bits/s of a receiver with only this detector. No switch loss
/// applies. Negative values mean no key; they are returned as-is.
pub fn bb84_rate_single(spd: &SpdSpec, link: &LinkSpec, cfg: &Bb84Config) -> Result<f64> {
    cfg.validate()?;
    let gain = bb84_gain(spd, link, 1.0)?;
    let e = bb84_qber(spd, link, 1.0)?;
    let h = binary_entropy(e)?;
    Ok(cfg.basis_factor * spd.rep_rate * gain * (1.0 - cfg.f_ec * h - h))
}

/// Key rate in bits/s of the dual-detector receiver. Both arms sit behind the
/// selection switch, so `link.switch_loss` attenuates both.
pub fn bb84_rate_dual(
    fast: &SpdSpec,
    slow: &SpdSpec,
    link: &LinkSpec,
    cfg: &Bb84Config,
) -> Result<f64> {
    cfg.validate()?;
    let switch = link.switch_transmittance()?;
    let gain_fast = bb84_gain(fast, link, switch)?;
    let e_fast = bb84_qber(fast, link, switch)?;
    let e_slow = bb84_qber(slow, link, switch)?;
    let correction = cfg.f_ec * binary_entropy(e_fast)?;
    let amplification = binary_entropy(e_slow)?;
    Ok(cfg.basis_factor * fast.rep_rate * gain_fast * (1.0 - correction - amplification))
}
