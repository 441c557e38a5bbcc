//! How often to route pulses to the slow detector.
//!
//! The slow detector cannot tell apart pulses that arrive within one response
//! window, so routing too many pulses to it adds errors. Routing too few makes
//! parameter estimation take too long. This module covers both sides.

use crate::error::{ensure, ensure_in, Error, Result};

/// Error rate of a detection assigned to a random one of two routed pulses:
/// right half the time, a coin flip otherwise.
pub const MESSED_DETECTION_ERROR_RATE: f64 = 0.25;

/// `k * p` above which the small-`p` approximations degrade.
pub const WEAK_APPROXIMATION_KP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchedulingParams {
    /// Probability of routing a pulse to the slow detector.
    pub p: f64,
    /// Signal period, s.
    pub t_sig: f64,
    /// Slow-detector response window (timing jitter), s.
    pub t_det: f64,
    /// Pulses per response window.
    pub k: u32,
}

impl SchedulingParams {
    /// `k` is `t_det / t_sig` rounded to the nearest whole pulse.
    pub fn from_timing(p: f64, t_sig: f64, t_det: f64) -> Result<Self> {
        ensure_in("p", p, 0.0, 1.0, "a probability in [0, 1]")?;
        ensure(
            t_sig > 0.0 && t_sig.is_finite(),
            "t_sig",
            t_sig,
            "a positive period in s",
        )?;
        ensure(
            t_det >= t_sig && t_det.is_finite(),
            "t_det",
            t_det,
            "a response window >= t_sig",
        )?;
        let k = (t_det / t_sig).round();
        ensure(
            k >= 1.0 && k <= u32::MAX as f64,
            "k",
            k,
            "a pulse count >= 1",
        )?;
        Ok(Self {
            p,
            t_sig,
            t_det,
            k: k as u32,
        })
    }
}

/// Probabilities that the slow detector is chosen zero times, once, or more
/// than once within one response window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiceProbabilities {
    pub p0: f64,
    pub p1: f64,
    pub pm: f64,
}

fn check_pk(p: f64, k: u32) -> Result<()> {
    ensure_in("p", p, 0.0, 1.0, "a probability in [0, 1]")?;
    ensure(k >= 1, "k", k as f64, "a pulse count >= 1")
}

/// Exact binomial `P0 = (1-p)^k`, `P1 = k p (1-p)^(k-1)`, `PM = 1 - P0 - P1`.
pub fn choice_probabilities(p: f64, k: u32) -> Result<ChoiceProbabilities> {
    check_pk(p, k)?;
    let kf = k as f64;
    let k_i32 = i32::try_from(k).unwrap_or(i32::MAX);
    let mut p0 = (1.0 - p).powi(k_i32);
    let p1 = kf * p * (1.0 - p).powi(k_i32 - 1);
    let mut pm = 1.0 - (p0 + p1);
    if pm < 0.0 {
        // rounding in p0 + p1; absorb it in p0 so the three still sum to 1
        pm = 0.0;
        p0 = 1.0 - p1;
    }
    Ok(ChoiceProbabilities { p0, p1, pm })
}

/// Added QBER from multi-pulse windows, first order in `p`: `(k - 1) p / 4`.
pub fn multi_pulse_qber(p: f64, k: u32) -> Result<f64> {
    check_pk(p, k)?;
    Ok((k as f64 - 1.0) * p / 4.0)
}

/// Unapproximated form `P_err / (4 (P_err + P_sig))` with
/// `P_err = 2 mu eta PM` and `P_sig = mu eta P1` (only double selections
/// counted). `mu eta` cancels.
pub fn messed_detection_qber(probs: &ChoiceProbabilities) -> Result<f64> {
    let p_err = 2.0 * probs.pm;
    let total = p_err + probs.p1;
    if total <= 0.0 {
        return Err(Error::DivisionByZero(
            "multi-pulse QBER (no slow-detector selections)",
        ));
    }
    Ok(MESSED_DETECTION_ERROR_RATE * p_err / total)
}

/// Where `(p, k)` sits relative to the validity of [`multi_pulse_qber`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `k p <= 0.1`.
    Valid,
    /// `k p > 0.1`: the first-order expansion is loose.
    WeakApproximation,
    /// The estimate reaches 1/4, the error rate of a fully scrambled window.
    OutsideModel,
}

pub fn multi_pulse_regime(p: f64, k: u32) -> Result<Regime> {
    let q = multi_pulse_qber(p, k)?;
    Ok(if q >= MESSED_DETECTION_ERROR_RATE {
        Regime::OutsideModel
    } else if k as f64 * p > WEAK_APPROXIMATION_KP {
        Regime::WeakApproximation
    } else {
        Regime::Valid
    })
}

/// Largest routing probability keeping the multi-pulse QBER within
/// `qber_budget`, i.e. `4 budget / (k - 1)`. `None` when `k = 1`: a
/// one-pulse window never mixes pulses.
pub fn max_slow_probability(k: u32, qber_budget: f64) -> Result<Option<f64>> {
    ensure(k >= 1, "k", k as f64, "a pulse count >= 1")?;
    ensure(
        (0.0..MESSED_DETECTION_ERROR_RATE).contains(&qber_budget),
        "qber_budget",
        qber_budget,
        "a QBER budget in [0, 0.25)",
    )?;
    if k == 1 {
        return Ok(None);
    }
    Ok(Some((4.0 * qber_budget / (k as f64 - 1.0)).min(1.0)))
}

/// Seconds for the slow detector to collect `target_counts` clicks.
///
/// `overall_eta` is the full path to the slow detector: channel, receiver
/// optics, switch and detector efficiency.
pub fn accumulation_time(
    p: f64,
    rep_rate: f64,
    mu: f64,
    overall_eta: f64,
    target_counts: f64,
) -> Result<f64> {
    ensure(
        target_counts >= 0.0 && target_counts.is_finite(),
        "target_counts",
        target_counts,
        "a non-negative count",
    )?;
    ensure_in("p", p, 0.0, 1.0, "a probability in [0, 1]")?;
    ensure_in(
        "overall_eta",
        overall_eta,
        0.0,
        1.0,
        "a transmittance in [0, 1]",
    )?;
    ensure(
        rep_rate >= 0.0 && rep_rate.is_finite(),
        "rep_rate",
        rep_rate,
        "a non-negative rate in Hz",
    )?;
    ensure(
        mu >= 0.0 && mu.is_finite(),
        "mu",
        mu,
        "a non-negative mean photon number",
    )?;
    if target_counts == 0.0 {
        return Ok(0.0);
    }
    let count_rate = p * rep_rate * mu * overall_eta;
    if count_rate <= 0.0 {
        return Err(Error::DivisionByZero(
            "accumulation time (slow-detector count rate is zero)",
        ));
    }
    Ok(target_counts / count_rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn choice_edges() {
        assert_eq!(
            choice_probabilities(0.0, 100).unwrap(),
            ChoiceProbabilities {
                p0: 1.0,
                p1: 0.0,
                pm: 0.0
            }
        );
        let c = choice_probabilities(0.3, 1).unwrap();
        assert_eq!((c.p0, c.p1, c.pm), (0.7, 0.3, 0.0));
        assert!(choice_probabilities(1.2, 3).is_err());
        assert!(choice_probabilities(0.1, 0).is_err());
    }

    #[test]
    fn choice_reference_values() {
        // exact binomial at 40 digits
        let c = choice_probabilities(4e-4, 100).unwrap();
        assert_relative_eq!(c.p0, 0.960_781_750_817_272_3, max_relative = 1e-13);
        assert_relative_eq!(c.p1, 3.844_664_869_216_776e-2, max_relative = 1e-13);
        assert_relative_eq!(c.pm, 7.716_004_905_599_029e-4, max_relative = 1e-9);
    }

    #[test]
    fn qber_values() {
        assert_eq!(multi_pulse_qber(0.01, 1).unwrap(), 0.0);
        assert_eq!(multi_pulse_qber(4e-4, 100).unwrap(), 9.9e-3);
        assert_relative_eq!(
            multi_pulse_qber(1e-3, 100).unwrap(),
            2.475e-2,
            max_relative = 1e-15
        );
        assert_eq!(multi_pulse_regime(4e-4, 100).unwrap(), Regime::Valid);
        assert_eq!(
            multi_pulse_regime(2e-3, 100).unwrap(),
            Regime::WeakApproximation
        );
        assert_eq!(multi_pulse_regime(0.02, 100).unwrap(), Regime::OutsideModel);
    }

    #[test]
    fn max_probability_values() {
        assert_relative_eq!(
            max_slow_probability(100, 0.01).unwrap().unwrap(),
            4.0 / 99.0 * 0.01,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            max_slow_probability(2, 0.01).unwrap().unwrap(),
            0.04,
            max_relative = 1e-15
        );
        assert_eq!(max_slow_probability(100, 0.0).unwrap(), Some(0.0));
        assert_eq!(max_slow_probability(1, 0.01).unwrap(), None);
        assert!(max_slow_probability(100, 0.25).is_err());
    }

    #[test]
    fn accumulation_values() {
        assert_eq!(accumulation_time(4e-4, 1e9, 1.0, 1e-3, 0.0).unwrap(), 0.0);
        let t = accumulation_time(4e-4, 1e9, 1.0, 1e-3, 1e6).unwrap();
        assert_relative_eq!(t, 2500.0, max_relative = 1e-14);
        assert_relative_eq!(
            accumulation_time(8e-4, 1e9, 1.0, 1e-3, 1e6).unwrap(),
            t / 2.0,
            max_relative = 1e-14
        );
        assert!(accumulation_time(0.0, 1e9, 1.0, 1e-3, 1e6).is_err());
    }

    #[test]
    fn timing_gives_k() {
        let s = SchedulingParams::from_timing(4e-4, 1e-9, 100e-9).unwrap();
        assert_eq!(s.k, 100);
        assert!(SchedulingParams::from_timing(4e-4, 1e-9, 0.5e-9).is_err());
    }

    proptest! {
        #[test]
        fn probabilities_sum_to_one(p in 0.0f64..=1.0, k in 1u32..5000) {
            let c = choice_probabilities(p, k).unwrap();
            prop_assert_eq!(c.p0 + c.p1 + c.pm, 1.0);
            prop_assert!(c.p0 >= 0.0 && c.p1 >= 0.0 && c.pm >= 0.0);
        }

        #[test]
        fn pm_bounded_by_quadratic_term(k in 2u32..2000, kp in 1e-4f64..0.1) {
            let p = kp / k as f64;
            let c = choice_probabilities(p, k).unwrap();
            let kf = k as f64;
            prop_assert!(c.pm <= kf * (kf - 1.0) * p * p / 2.0 * (1.0 + 10.0 * kp));
        }

        #[test]
        fn first_order_matches_full_form(k in 2u32..2000, kp in 1e-4f64..0.05) {
            let p = kp / k as f64;
            let full = messed_detection_qber(&choice_probabilities(p, k).unwrap()).unwrap();
            let approx = multi_pulse_qber(p, k).unwrap();
            prop_assert!((full - approx).abs() <= 0.05 * approx);
        }

        #[test]
        fn accumulation_strictly_decreasing(
            p in 1e-6f64..0.5, r in 1e3f64..1e10, mu in 0.01f64..2.0, eta in 1e-6f64..0.5, s in 1.01f64..2.0,
        ) {
            let t = accumulation_time(p, r, mu, eta, 1e6).unwrap();
            prop_assert!(accumulation_time(p * s, r, mu, eta, 1e6).unwrap() < t);
            prop_assert!(accumulation_time(p, r * s, mu, eta, 1e6).unwrap() < t);
            prop_assert!(accumulation_time(p, r, mu * s, eta, 1e6).unwrap() < t);
            prop_assert!(accumulation_time(p, r, mu, eta * s, 1e6).unwrap() < t);
        }
    }
}
