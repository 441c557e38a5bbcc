//! Detector, link and source parameter sets shared by every protocol model.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, ensure_in, Result};
use crate::math::{channel_transmittance, db_to_transmittance};

/// A single-photon detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpdSpec {
    /// Gate / pulse rate in Hz.
    #[serde(rename = "rep_rate_hz")]
    pub rep_rate: f64,
    /// Detection efficiency.
    pub eta_d: f64,
    /// Background (dark count) probability per gate.
    pub y0: f64,
    /// Probability that a photon lands in the wrong detector (misalignment and
    /// cross-talk).
    pub e_det: f64,
}

impl SpdSpec {
    pub fn new(rep_rate: f64, eta_d: f64, y0: f64, e_det: f64) -> Result<Self> {
        let spec = Self {
            rep_rate,
            eta_d,
            y0,
            e_det,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.rep_rate > 0.0 && self.rep_rate.is_finite(),
            "rep_rate",
            self.rep_rate,
            "a positive rate in Hz",
        )?;
        ensure_in("eta_d", self.eta_d, 0.0, 1.0, "an efficiency in [0, 1]")?;
        ensure(
            self.y0 >= 0.0 && self.y0 < 1.0,
            "y0",
            self.y0,
            "a probability in [0, 1)",
        )?;
        ensure_in(
            "e_det",
            self.e_det,
            0.0,
            0.5,
            "an error probability in [0, 0.5]",
        )
    }
}

/// A balanced homodyne detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomodyneSpec {
    #[serde(rename = "rep_rate_hz")]
    pub rep_rate: f64,
    /// Detection efficiency, in (0, 1].
    pub g_det: f64,
    /// Electronic excess noise referred to the detector, shot-noise units.
    pub eps_det: f64,
}

impl HomodyneSpec {
    pub fn new(rep_rate: f64, g_det: f64, eps_det: f64) -> Result<Self> {
        let spec = Self {
            rep_rate,
            g_det,
            eps_det,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.rep_rate > 0.0 && self.rep_rate.is_finite(),
            "rep_rate",
            self.rep_rate,
            "a positive rate in Hz",
        )?;
        ensure(
            self.g_det > 0.0 && self.g_det <= 1.0,
            "g_det",
            self.g_det,
            "an efficiency in (0, 1]",
        )?;
        ensure(
            self.eps_det >= 0.0 && self.eps_det.is_finite(),
            "eps_det",
            self.eps_det,
            "a non-negative noise in SNU",
        )
    }
}

/// Fiber link plus the receiver-side optics.
///
/// `g_bob` is the transmittance of the receiver optics seen by single-photon
/// detectors. The homodyne models use the detector's own `g_det` instead and
/// ignore `g_bob`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    #[serde(rename = "alpha_db_per_km")]
    pub alpha: f64,
    #[serde(rename = "length_km")]
    pub length: f64,
    pub g_bob: f64,
    /// Insertion loss of the detector-selection switch, dB. Only the dual
    /// configuration pays it.
    #[serde(rename = "switch_loss_db")]
    pub switch_loss: f64,
}

impl LinkSpec {
    pub fn new(alpha: f64, length: f64, g_bob: f64, switch_loss: f64) -> Result<Self> {
        let link = Self {
            alpha,
            length,
            g_bob,
            switch_loss,
        };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.alpha >= 0.0 && self.alpha.is_finite(),
            "alpha",
            self.alpha,
            "a non-negative attenuation in dB/km",
        )?;
        ensure(
            self.length >= 0.0 && self.length.is_finite(),
            "length",
            self.length,
            "a non-negative length in km",
        )?;
        ensure(
            self.g_bob > 0.0 && self.g_bob <= 1.0,
            "g_bob",
            self.g_bob,
            "a transmittance in (0, 1]",
        )?;
        ensure(
            self.switch_loss >= 0.0 && self.switch_loss.is_finite(),
            "switch_loss",
            self.switch_loss,
            "a non-negative loss in dB",
        )
    }

    /// Same link at a different fiber length.
    pub fn at_length(&self, length: f64) -> Self {
        Self { length, ..*self }
    }

    pub fn channel_transmittance(&self) -> Result<f64> {
        channel_transmittance(self.alpha, self.length)
    }

    pub fn switch_transmittance(&self) -> Result<f64> {
        db_to_transmittance(self.switch_loss)
    }
}

/// Gaussian-modulated coherent-state source and reconciliation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GmcsSource {
    /// Quadrature variance `V = V_A + 1`, shot-noise units.
    pub v: f64,
    /// Reconciliation efficiency.
    pub beta: f64,
    /// Preparation excess noise, shot-noise units.
    pub eps_pre: f64,
}

impl GmcsSource {
    pub fn new(v: f64, beta: f64, eps_pre: f64) -> Result<Self> {
        let s = Self { v, beta, eps_pre };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.v >= 1.0 && self.v.is_finite(),
            "v",
            self.v,
            "a variance >= 1 SNU",
        )?;
        ensure(
            self.beta > 0.0 && self.beta <= 1.0,
            "beta",
            self.beta,
            "an efficiency in (0, 1]",
        )?;
        ensure(
            self.eps_pre >= 0.0 && self.eps_pre.is_finite(),
            "eps_pre",
            self.eps_pre,
            "a non-negative noise in SNU",
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spd_validation() {
        assert!(SpdSpec::new(1e9, 0.059, 1.3e-5, 0.018).is_ok());
        assert!(SpdSpec::new(0.0, 0.5, 0.0, 0.0).is_err());
        assert!(SpdSpec::new(1e6, 1.1, 0.0, 0.0).is_err());
        assert!(SpdSpec::new(1e6, 0.5, 1.0, 0.0).is_err());
        assert!(SpdSpec::new(1e6, 0.5, 0.0, 0.51).is_err());
    }

    #[test]
    fn homodyne_and_source_validation() {
        assert!(HomodyneSpec::new(82e6, 0.8, 0.43).is_ok());
        assert!(HomodyneSpec::new(82e6, 0.0, 0.43).is_err());
        assert!(HomodyneSpec::new(82e6, 0.8, -0.1).is_err());
        assert!(GmcsSource::new(40.0, 1.0, 0.05).is_ok());
        assert!(GmcsSource::new(0.5, 1.0, 0.05).is_err());
        assert!(GmcsSource::new(40.0, 0.0, 0.05).is_err());
    }

    #[test]
    fn link_json_uses_unit_suffixed_keys() {
        let link: LinkSpec = serde_json::from_str(
            r#"{"alpha_db_per_km":0.21,"length_km":10,"g_bob":0.16,"switch_loss_db":3}"#,
        )
        .unwrap();
        assert_eq!(link, LinkSpec::new(0.21, 10.0, 0.16, 3.0).unwrap());
        let bad = serde_json::from_str::<LinkSpec>(
            r#"{"alpha_db_per_km":0.21,"length_km":10,"g_bob":0.16,"switch_loss_db":3,"extra":1}"#,
        );
        assert!(bad.is_err());
    }
}
