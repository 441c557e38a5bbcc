//! Decoy-state BB84 with a weak coherent (Poisson) source, in the asymptotic
//! ideal-decoy limit where the single-photon gain and error are known exactly.

use serde::{Deserialize, Serialize};

use crate::bb84::validate_basis_factor;
use crate::error::{ensure, Error, Result};
use crate::math::{binary_entropy, bisect, BACKGROUND_ERROR_RATE};
use crate::params::{LinkSpec, SpdSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoyConfig {
    /// Mean photon number of the signal state.
    pub mu: f64,
    pub basis_factor: f64,
    pub f_ec: f64,
    /// Skip the privacy-amplification term. Diagnostic only: the result is
    /// an upper bound, not a secure rate.
    #[serde(default)]
    pub drop_pa: bool,
}

impl Default for DecoyConfig {
    fn default() -> Self {
        Self {
            mu: 0.73,
            basis_factor: 0.5,
            f_ec: 1.22,
            drop_pa: false,
        }
    }
}

impl DecoyConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.mu > 0.0 && self.mu.is_finite(),
            "mu",
            self.mu,
            "a positive mean photon number",
        )?;
        validate_basis_factor(self.basis_factor)?;
        ensure(
            self.f_ec >= 1.0 && self.f_ec.is_finite(),
            "f_ec",
            self.f_ec,
            "an efficiency factor >= 1",
        )
    }
}

/// Overall single-photon transmittance `eta = g_ch * g_bob * extra * eta_d`.
fn overall_eta(spd: &SpdSpec, link: &LinkSpec, extra_loss: f64) -> Result<f64> {
    spd.validate()?;
    link.validate()?;
    ensure(
        extra_loss > 0.0 && extra_loss <= 1.0,
        "extra_loss",
        extra_loss,
        "a transmittance multiplier in (0, 1]",
    )?;
    Ok(link.channel_transmittance()? * link.g_bob * extra_loss * spd.eta_d)
}

fn check_mu(mu: f64) -> Result<()> {
    ensure(
        mu >= 0.0 && mu.is_finite(),
        "mu",
        mu,
        "a non-negative mean photon number",
    )
}

/// Signal-state gain `Q_mu = Y0 + 1 - exp(-eta mu)`.
pub fn decoy_signal_gain(mu: f64, spd: &SpdSpec, link: &LinkSpec, extra_loss: f64) -> Result<f64> {
    check_mu(mu)?;
    let eta = overall_eta(spd, link, extra_loss)?;
    Ok(spd.y0 - (-eta * mu).exp_m1())
}

/// Signal-state QBER `E_mu`.
pub fn decoy_signal_qber(mu: f64, spd: &SpdSpec, link: &LinkSpec, extra_loss: f64) -> Result<f64> {
    check_mu(mu)?;
    let eta = overall_eta(spd, link, extra_loss)?;
    let clicks = -(-eta * mu).exp_m1();
    let gain = spd.y0 + clicks;
    if gain <= 0.0 {
        return Err(Error::DivisionByZero("signal QBER (signal gain is zero)"));
    }
    Ok((BACKGROUND_ERROR_RATE * spd.y0 + spd.e_det * clicks) / gain)
}

/// Single-photon gain `Q1 = (Y0 + eta) mu exp(-mu)`.
pub fn decoy_single_photon_gain(
    mu: f64,
    spd: &SpdSpec,
    link: &LinkSpec,
    extra_loss: f64,
) -> Result<f64> {
    check_mu(mu)?;
    let eta = overall_eta(spd, link, extra_loss)?;
    Ok((spd.y0 + eta) * mu * (-mu).exp())
}

/// Single-photon QBER `e1`. The Poisson weight cancels, so `mu` only matters
/// through the zero-gain check.
pub fn decoy_single_photon_qber(
    mu: f64,
    spd: &SpdSpec,
    link: &LinkSpec,
    extra_loss: f64,
) -> Result<f64> {
    check_mu(mu)?;
    let eta = overall_eta(spd, link, extra_loss)?;
    let yield1 = spd.y0 + eta;
    if yield1 <= 0.0 || mu == 0.0 {
        return Err(Error::DivisionByZero(
            "single-photon QBER (single-photon gain is zero)",
        ));
    }
    Ok((BACKGROUND_ERROR_RATE * spd.y0 + spd.e_det * eta) / yield1)
}

struct Terms {
    q_mu: f64,
    e_mu: f64,
    q1: f64,
    e1: f64,
}

fn terms(mu: f64, spd: &SpdSpec, link: &LinkSpec, extra_loss: f64) -> Result<Terms> {
    Ok(Terms {
        q_mu: decoy_signal_gain(mu, spd, link, extra_loss)?,
        e_mu: decoy_signal_qber(mu, spd, link, extra_loss)?,
        q1: decoy_single_photon_gain(mu, spd, link, extra_loss)?,
        e1: decoy_single_photon_qber(mu, spd, link, extra_loss)?,
    })
}

fn rate(rep_rate: f64, cfg: &DecoyConfig, fast: &Terms, pa_error: f64) -> Result<f64> {
    let correction = cfg.f_ec * fast.q_mu * binary_entropy(fast.e_mu)?;
    let amplification = if cfg.drop_pa {
        0.0
    } else {
        fast.q1 * binary_entropy(pa_error)?
    };
    Ok(cfg.basis_factor * rep_rate * (fast.q1 - correction - amplification))
}

/// Key rate in bits/s with a single detector, no switch.
pub fn decoy_rate_single(spd: &SpdSpec, link: &LinkSpec, cfg: &DecoyConfig) -> Result<f64> {
    cfg.validate()?;
    let t = terms(cfg.mu, spd, link, 1.0)?;
    rate(spd.rep_rate, cfg, &t, t.e1)
}

/// Key rate in bits/s with dual detectors. Gains and the error-correction
/// term come from the fast detector; only the privacy-amplification argument
/// `e1` is taken from the slow detector. The switch loss hits both arms.
pub fn decoy_rate_dual(
    fast: &SpdSpec,
    slow: &SpdSpec,
    link: &LinkSpec,
    cfg: &DecoyConfig,
) -> Result<f64> {
    cfg.validate()?;
    let switch = link.switch_transmittance()?;
    let t = terms(cfg.mu, fast, link, switch)?;
    let e1_slow = decoy_single_photon_qber(cfg.mu, slow, link, switch)?;
    rate(fast.rep_rate, cfg, &t, e1_slow)
}

/// Signal intensity solving `(1 - mu) exp(-mu) = f H2(e_det) / (1 - H2(e_det))`.
///
/// The left side falls strictly from 1 to 0 on (0, 1), so the root is unique
/// when the right side lies in (0, 1).
pub fn optimal_mu(e_det: f64, f_ec: f64) -> Result<f64> {
    ensure(
        e_det > 0.0 && e_det < 0.5,
        "e_det",
        e_det,
        "an error probability in (0, 0.5)",
    )?;
    ensure(
        f_ec >= 1.0 && f_ec.is_finite(),
        "f_ec",
        f_ec,
        "an efficiency factor >= 1",
    )?;
    let h = binary_entropy(e_det)?;
    let target = f_ec * h / (1.0 - h);
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::NoRoot(format!(
            "f H2(e_det) / (1 - H2(e_det)) = {target} is outside (0, 1) for e_det = {e_det}, f = {f_ec}"
        )));
    }
    let residual = |mu: f64| (1.0 - mu) * (-mu).exp() - target;
    let b = bisect(|mu| Ok(residual(mu)), 0.0, 1.0, 1e-15)?;
    let mu = b.midpoint();
    debug_assert!(residual(mu).abs() < 1e-10);
    Ok(mu)
}
