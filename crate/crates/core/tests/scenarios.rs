use std::path::PathBuf;

use dualqkd::{figure_preset, Error, Mode, Protocol, Scenario};
use proptest::prelude::*;

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn bundled_configs_parse_and_round_trip() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let s = Scenario::from_path(&path).unwrap();
            let again = Scenario::from_json_str(&s.to_json_string()).unwrap();
            assert_eq!(s, again, "{}", path.display());
            s.evaluate(10.0).unwrap();
            seen += 1;
        }
    }
    assert!(seen >= 5);
}

#[test]
fn bundled_configs_agree_with_presets() {
    let fig1 = figure_preset(1).unwrap();
    let dual = Scenario::from_path(configs_dir().join("bb84_dual_upconversion_tes.json")).unwrap();
    let fast = Scenario::from_path(configs_dir().join("bb84_upconversion.json")).unwrap();
    let slow = Scenario::from_path(configs_dir().join("bb84_tes.json")).unwrap();
    assert_eq!(dual, fig1.dual);
    assert_eq!(fast, fig1.fast);
    assert_eq!(slow, fig1.slow);
    let decoy =
        Scenario::from_path(configs_dir().join("decoy_dual_upconversion_tes.json")).unwrap();
    assert_eq!(decoy, figure_preset(4).unwrap().dual);
    let rr = Scenario::from_path(configs_dir().join("gmcs_rr_dual_homodyne.json")).unwrap();
    assert_eq!(rr, figure_preset(6).unwrap().dual);
}

#[test]
fn rejects_bad_files() {
    let base =
        std::fs::read_to_string(configs_dir().join("bb84_dual_upconversion_tes.json")).unwrap();
    let cases = [
        base.replace("\"f_ec\": 1.22", "\"f_ec\": 1.22, \"extra\": 1"),
        base.replace("\"mode\": \"dual\"", "\"mode\": \"dual_no_pa\""),
        base.replace("\"mode\": \"dual\"", "\"mode\": \"triple\""),
        base.replace("\"spd\"", "\"homodyne\""),
        base.replace("\"basis_factor\": 0.5", "\"basis_factor\": 0.7"),
    ];
    for text in cases {
        let err = Scenario::from_json_str(&text).unwrap_err();
        assert!(
            matches!(err, Error::Config(_) | Error::Domain { .. }),
            "{err:?}"
        );
    }
}

#[test]
fn single_modes_drop_switch_loss() {
    let p = figure_preset(8).unwrap();
    let fast = p.dual.with_mode(Mode::SingleFast).unwrap();
    assert_eq!(fast.link().switch_loss, 0.0);
    assert_eq!(fast, p.fast);
    assert_eq!(p.dual.protocol(), Protocol::Bb84SinglePhoton);
}

proptest! {
    #[test]
    fn json_round_trip_keeps_rates(id in 1u32..=9, l in 0.0f64..60.0, sw in 0.0f64..5.0) {
        let p = figure_preset(id).unwrap().with_switch_loss(sw).unwrap();
        for s in [&p.dual, &p.fast, &p.slow] {
            let back = Scenario::from_json_str(&s.to_json_string()).unwrap();
            prop_assert_eq!(back.evaluate(l).unwrap(), s.evaluate(l).unwrap());
        }
    }
}
