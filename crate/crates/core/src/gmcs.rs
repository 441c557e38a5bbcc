//! Gaussian-modulated coherent-state QKD with homodyne detection, under
//! direct (DR) and reverse (RR) reconciliation.
//!
//! All noises are in shot-noise units and referred to the channel input.
//! Loss `G` becomes the vacuum noise `(1 - G) / G`; detector noise is divided
//! by `G`. In the dual-detector rates the vacuum noise is common to both arms
//! and only the excess noise differs.

use crate::error::{ensure, Error, Result};
use crate::params::{GmcsSource, HomodyneSpec, LinkSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmcsNoiseBudget {
    /// Overall transmittance `G`.
    pub g: f64,
    /// Vacuum noise from loss, `(1 - G) / G`.
    pub chi_vac: f64,
    /// Input-referred excess noise `eps_pre + eps_det / G`.
    pub eps: f64,
    /// Equivalent input noise `chi_vac + eps`.
    pub chi: f64,
}

/// Input-referred noise budget for one detector.
pub fn noise_budget(
    source: &GmcsSource,
    det: &HomodyneSpec,
    link: &LinkSpec,
    include_switch: bool,
) -> Result<GmcsNoiseBudget> {
    source.validate()?;
    det.validate()?;
    link.validate()?;
    let switch = if include_switch {
        link.switch_transmittance()?
    } else {
        1.0
    };
    let g = link.channel_transmittance()? * det.g_det * switch;
    if g <= 0.0 {
        return Err(Error::DivisionByZero(
            "noise budget (overall transmittance is zero)",
        ));
    }
    let chi_vac = (1.0 - g) / g;
    let eps = source.eps_pre + det.eps_det / g;
    Ok(GmcsNoiseBudget {
        g,
        chi_vac,
        eps,
        chi: chi_vac + eps,
    })
}

/// Alice-Bob mutual information per pulse, `(1/2) log2((V + chi) / (1 + chi))`.
/// The same expression gives `I_BA` under reverse reconciliation.
pub fn mutual_info_ab(v: f64, chi: f64) -> Result<f64> {
    ensure(v >= 1.0, "v", v, "a variance >= 1 SNU")?;
    ensure(chi >= 0.0, "chi", chi, "a non-negative noise")?;
    Ok(0.5 * ((v + chi) / (1.0 + chi)).log2())
}

/// Eve's information on Alice's data under direct reconciliation,
/// `(1/2) log2((V + 1/chi) / (1 + 1/chi))`. Tends to 0 as `chi -> 0`.
pub fn info_ae(v: f64, chi: f64) -> Result<f64> {
    ensure(v >= 1.0, "v", v, "a variance >= 1 SNU")?;
    ensure(chi >= 0.0, "chi", chi, "a non-negative noise")?;
    if chi == 0.0 {
        return Ok(0.0);
    }
    let inv = 1.0 / chi;
    Ok(0.5 * ((v + inv) / (1.0 + inv)).log2())
}

/// Eve's information on Bob's data under reverse reconciliation,
/// `(1/2) log2(G^2 (V + chi) (1/V + chi))`.
pub fn info_be(v: f64, chi: f64, g: f64) -> Result<f64> {
    ensure(v >= 1.0, "v", v, "a variance >= 1 SNU")?;
    ensure(chi >= 0.0, "chi", chi, "a non-negative noise")?;
    ensure(g > 0.0 && g <= 1.0, "g", g, "a transmittance in (0, 1]")?;
    // (V + chi)(1/V + chi) expanded so that chi = 0 gives exactly 1
    let arg = g * g * (1.0 + chi * (v + 1.0 / v) + chi * chi);
    if arg.is_nan() || arg <= 0.0 {
        return Err(Error::Domain {
            name: "I_BE log argument",
            value: arg,
            expected: "a positive number",
        });
    }
    Ok(0.5 * arg.log2())
}

/// DR key rate in bits/s with one detector (no switch).
pub fn gmcs_dr_rate_single(
    source: &GmcsSource,
    det: &HomodyneSpec,
    link: &LinkSpec,
) -> Result<f64> {
    let b = noise_budget(source, det, link, false)?;
    Ok(det.rep_rate * (source.beta * mutual_info_ab(source.v, b.chi)? - info_ae(source.v, b.chi)?))
}

/// Per-arm budgets for the dual receiver; both arms pay the switch loss and
/// share the fast arm's vacuum noise.
fn dual_budgets(
    source: &GmcsSource,
    fast: &HomodyneSpec,
    slow: &HomodyneSpec,
    link: &LinkSpec,
) -> Result<(GmcsNoiseBudget, f64)> {
    let bf = noise_budget(source, fast, link, true)?;
    let bs = noise_budget(source, slow, link, true)?;
    Ok((bf, bf.chi_vac + bs.eps))
}

/// DR key rate in bits/s with dual detectors: `I_AB` from the fast detector,
/// `I_AE` bounded with the slow detector's excess noise.
pub fn gmcs_dr_rate_dual(
    source: &GmcsSource,
    fast: &HomodyneSpec,
    slow: &HomodyneSpec,
    link: &LinkSpec,
) -> Result<f64> {
    let (bf, chi_slow) = dual_budgets(source, fast, slow, link)?;
    Ok(fast.rep_rate
        * (source.beta * mutual_info_ab(source.v, bf.chi)? - info_ae(source.v, chi_slow)?))
}

/// RR key rate in bits/s with one detector (no switch).
pub fn gmcs_rr_rate_single(
    source: &GmcsSource,
    det: &HomodyneSpec,
    link: &LinkSpec,
) -> Result<f64> {
    let b = noise_budget(source, det, link, false)?;
    Ok(det.rep_rate
        * (source.beta * mutual_info_ab(source.v, b.chi)? - info_be(source.v, b.chi, b.g)?))
}

/// RR key rate in bits/s with dual detectors. `I_BE` depends on the detector
/// efficiency, so the slow detector can only bound the fast one's data when
/// both have the same `g_det`.
pub fn gmcs_rr_rate_dual(
    source: &GmcsSource,
    fast: &HomodyneSpec,
    slow: &HomodyneSpec,
    link: &LinkSpec,
) -> Result<f64> {
    if fast.g_det != slow.g_det {
        return Err(Error::MismatchedEfficiency {
            fast: fast.g_det,
            slow: slow.g_det,
        });
    }
    let (bf, chi_slow) = dual_budgets(source, fast, slow, link)?;
    Ok(fast.rep_rate
        * (source.beta * mutual_info_ab(source.v, bf.chi)? - info_be(source.v, chi_slow, bf.g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn src() -> GmcsSource {
        GmcsSource::new(40.0, 1.0, 0.05).unwrap()
    }
    fn det1() -> HomodyneSpec {
        HomodyneSpec::new(82e6, 0.8, 0.43).unwrap()
    }
    fn det2() -> HomodyneSpec {
        HomodyneSpec::new(1e6, 0.8, 0.01).unwrap()
    }
    fn link(l: f64) -> LinkSpec {
        LinkSpec::new(0.21, l, 1.0, 0.0).unwrap()
    }

    #[test]
    fn budgets_at_zero_length() {
        let b1 = noise_budget(&src(), &det1(), &link(0.0), false).unwrap();
        assert_relative_eq!(b1.chi_vac, 0.25, max_relative = 1e-14);
        assert_relative_eq!(b1.chi, 0.8375, max_relative = 1e-14);
        let b2 = noise_budget(&src(), &det2(), &link(0.0), false).unwrap();
        assert_relative_eq!(b2.chi, 0.3125, max_relative = 1e-14);
        assert_eq!(b2.chi, b2.chi_vac + b2.eps);

        let ideal = HomodyneSpec::new(1e6, 1.0, 0.0).unwrap();
        let quiet = GmcsSource::new(40.0, 1.0, 0.0).unwrap();
        assert_eq!(
            noise_budget(&quiet, &ideal, &link(0.0), false).unwrap().chi,
            0.0
        );
    }

    #[test]
    fn switch_only_when_requested() {
        let lossy = LinkSpec {
            switch_loss: 3.0,
            ..link(0.0)
        };
        let without = noise_budget(&src(), &det1(), &lossy, false).unwrap();
        let with = noise_budget(&src(), &det1(), &lossy, true).unwrap();
        assert_eq!(without.g, 0.8);
        assert_relative_eq!(with.g, 0.8 * 10f64.powf(-0.3), max_relative = 1e-15);
    }

    #[test]
    fn information_terms() {
        // 40-digit oracle values
        assert_eq!(mutual_info_ab(1.0, 0.7).unwrap(), 0.0);
        assert_relative_eq!(
            mutual_info_ab(40.0, 0.8375).unwrap(),
            2.237_039_197_300_849,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            mutual_info_ab(40.0, 0.3125).unwrap(),
            2.470_418_963_765_928,
            max_relative = 1e-14
        );
        assert_eq!(info_ae(1.0, 0.7).unwrap(), 0.0);
        assert_relative_eq!(
            info_ae(40.0, 0.8375).unwrap(),
            2.115_390_103_414_584,
            max_relative = 1e-14
        );
        assert_eq!(info_ae(40.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            info_ae(40.0, 1e12).unwrap(),
            0.5 * 40f64.log2(),
            max_relative = 1e-10
        );
        assert_relative_eq!(
            info_be(40.0, 0.8375, 0.8).unwrap(),
            2.247_281_408_333_392,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            info_be(40.0, 0.3125, 0.8).unwrap(),
            1.561_129_283_905_999,
            max_relative = 1e-14
        );
        assert_eq!(info_be(40.0, 0.0, 1.0).unwrap(), 0.0);
        assert!(mutual_info_ab(0.5, 0.1).is_err());
        assert!(info_be(40.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn dr_rates_at_fig5_parameters() {
        assert!(gmcs_dr_rate_single(&src(), &det2(), &link(0.0)).unwrap() > 0.0);
        assert!(gmcs_dr_rate_single(&src(), &det1(), &link(20.0)).unwrap() < 0.0);
        let perfect = GmcsSource::new(40.0, 1.0, 0.0).unwrap();
        let d = HomodyneSpec::new(1e6, 1.0, 0.0).unwrap();
        // no noise, no loss: I_AE = 0
        assert_relative_eq!(
            gmcs_dr_rate_single(&perfect, &d, &link(0.0)).unwrap(),
            1e6 * 0.5 * 40f64.log2(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn rr_rates_at_fig6_parameters() {
        let r1 = gmcs_rr_rate_single(&src(), &det1(), &link(0.0)).unwrap();
        assert!(r1 < 0.0);
        assert_relative_eq!(
            r1,
            82e6 * (2.237_039_197_300_849 - 2.247_281_408_333_392),
            max_relative = 1e-10
        );
        assert!(gmcs_rr_rate_single(&src(), &det2(), &link(0.0)).unwrap() > 0.0);
        assert!(gmcs_rr_rate_dual(&src(), &det1(), &det2(), &link(0.0)).unwrap() > 0.0);

        let perfect = GmcsSource::new(40.0, 1.0, 0.0).unwrap();
        let d = HomodyneSpec::new(1e6, 1.0, 0.0).unwrap();
        assert_relative_eq!(
            gmcs_rr_rate_single(&perfect, &d, &link(0.0)).unwrap(),
            1e6 * 0.5 * 40f64.log2(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn rr_dual_rejects_mismatched_efficiency() {
        let other = HomodyneSpec {
            g_det: 0.7,
            ..det2()
        };
        assert_eq!(
            gmcs_rr_rate_dual(&src(), &det1(), &other, &link(0.0)),
            Err(Error::MismatchedEfficiency {
                fast: 0.8,
                slow: 0.7
            })
        );
        assert!(gmcs_dr_rate_dual(&src(), &det1(), &other, &link(0.0)).is_ok());
    }

    #[test]
    fn chi_vac_monotone() {
        let mut last = f64::INFINITY;
        for i in 1..=100 {
            let g = i as f64 / 100.0;
            let cv = (1.0 - g) / g;
            assert!(cv < last);
            last = cv;
        }
        assert_eq!(last, 0.0);
    }

    fn arb_det() -> impl Strategy<Value = HomodyneSpec> {
        (1e5f64..1e9, 0.1f64..1.0, 0.0f64..1.0)
            .prop_map(|(r, g, e)| HomodyneSpec::new(r, g, e).unwrap())
    }
    fn arb_src() -> impl Strategy<Value = GmcsSource> {
        (1.5f64..100.0, 0.5f64..1.0, 0.0f64..0.2)
            .prop_map(|(v, b, e)| GmcsSource::new(v, b, e).unwrap())
    }

    proptest! {
        #[test]
        fn mutual_info_monotone(v in 1.0f64..100.0, dv in 0.01f64..10.0, chi in 0.0f64..10.0, dchi in 0.01f64..10.0) {
            prop_assert!(mutual_info_ab(v + dv, chi).unwrap() > mutual_info_ab(v, chi).unwrap());
            prop_assume!(v > 1.0);
            prop_assert!(mutual_info_ab(v, chi + dchi).unwrap() < mutual_info_ab(v, chi).unwrap());
        }

        #[test]
        fn lossless_noiseless_be_is_zero(v in 1.0f64..1e4) {
            prop_assert_eq!(info_be(v, 0.0, 1.0).unwrap(), 0.0);
        }

        #[test]
        fn duals_degenerate_to_singles(s in arb_src(), d in arb_det(), l in 0.0f64..60.0) {
            let single = gmcs_dr_rate_single(&s, &d, &link(l)).unwrap();
            let dual = gmcs_dr_rate_dual(&s, &d, &d, &link(l)).unwrap();
            prop_assert!((single - dual).abs() <= 1e-12 * single.abs());
            let single = gmcs_rr_rate_single(&s, &d, &link(l)).unwrap();
            let dual = gmcs_rr_rate_dual(&s, &d, &d, &link(l)).unwrap();
            prop_assert!((single - dual).abs() <= 1e-12 * single.abs());
        }

        #[test]
        fn quieter_slow_detector_never_hurts(s in arb_src(), fast in arb_det(), quiet in 0.0f64..1.0, l in 0.0f64..60.0, sw in 0.0f64..3.0) {
            prop_assume!(quiet <= fast.eps_det);
            let slow = HomodyneSpec { eps_det: quiet, rep_rate: 1e6, ..fast };
            let same = HomodyneSpec { eps_det: fast.eps_det, ..slow };
            let lk = LinkSpec { switch_loss: sw, ..link(l) };
            prop_assert!(gmcs_dr_rate_dual(&s, &fast, &slow, &lk).unwrap() >= gmcs_dr_rate_dual(&s, &fast, &same, &lk).unwrap());
            prop_assert!(gmcs_rr_rate_dual(&s, &fast, &slow, &lk).unwrap() >= gmcs_rr_rate_dual(&s, &fast, &same, &lk).unwrap());
        }
    }
}
