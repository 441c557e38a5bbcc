//! Built-in parameter sets for nine reference distance sweeps.
//!
//! | id | protocol | fast detector | slow detector | switch |
//! |----|----------|---------------|---------------|--------|
//! | 1 | BB84 | up-conversion, 1 GHz | TES, 2.5 MHz | 0 dB |
//! | 2 | BB84 | low-jitter up-conversion, 10 GHz | TES, 2.5 MHz | 0 dB |
//! | 3 | BB84 | low-jitter up-conversion, 10 GHz | same device at 100 MHz | 0 dB |
//! | 4 | decoy BB84, mu = 0.73 | as 1 | as 1 | 0 dB |
//! | 5 | GMCS DR, V = 40, beta = 1 | homodyne, 82 MHz | homodyne, 1 MHz | 0 dB |
//! | 6 | GMCS RR, V = 40, beta = 1 | as 5 | as 5 | 0 dB |
//! | 7 | GMCS RR, V = 20, beta = 0.8 | as 5 | as 5 | 0 dB |
//! | 8 | BB84 | as 2 | as 2 | 3 dB |
//! | 9 | BB84 | as 3 | as 3 | 3 dB |

use crate::bb84::Bb84Config;
use crate::decoy::DecoyConfig;
use crate::error::{Error, Result};
use crate::params::{GmcsSource, HomodyneSpec, LinkSpec, SpdSpec};
use crate::scenario::{DetectorSpec, Mode, Protocol, ProtocolConfig, Scenario};
use crate::sweep::{sweep_grid, Envelope, Grid};
use crate::table::{Column, RateTable};

const FIBER_DB_PER_KM: f64 = 0.21;
const BOB_OPTICS: f64 = 0.16;
const F_EC: f64 = 1.22;
/// Switch insertion loss of a commercial telecom switch.
pub const COMMERCIAL_SWITCH_LOSS_DB: f64 = 3.0;

const UPCONVERSION: SpdSpec = SpdSpec {
    rep_rate: 1e9,
    eta_d: 0.059,
    y0: 1.3e-5,
    e_det: 0.018,
};
const TES: SpdSpec = SpdSpec {
    rep_rate: 2.5e6,
    eta_d: 0.5,
    y0: 3e-7,
    e_det: 0.018,
};
/// At 10 GHz adjacent-pulse cross-talk shows up as a large e_det.
const LOW_JITTER_10GHZ: SpdSpec = SpdSpec {
    rep_rate: 1e10,
    eta_d: 0.0027,
    y0: 3.2e-9,
    e_det: 0.097,
};
/// The same device sampled rarely, so cross-talk vanishes.
const LOW_JITTER_100MHZ: SpdSpec = SpdSpec {
    rep_rate: 1e8,
    eta_d: 0.0027,
    y0: 3.2e-9,
    e_det: 0.018,
};
const FAST_HOMODYNE: HomodyneSpec = HomodyneSpec {
    rep_rate: 82e6,
    g_det: 0.8,
    eps_det: 0.43,
};
const SLOW_HOMODYNE: HomodyneSpec = HomodyneSpec {
    rep_rate: 1e6,
    g_det: 0.8,
    eps_det: 0.01,
};
const EPS_PRE: f64 = 0.05;

/// One figure: the dual-detector scenario, both single-detector baselines
/// and the default sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: u32,
    pub dual: Scenario,
    pub fast: Scenario,
    pub slow: Scenario,
    pub grid: Grid,
}

impl FigurePreset {
    fn build(
        id: u32,
        protocol: Protocol,
        detectors: [DetectorSpec; 2],
        config: ProtocolConfig,
        switch_loss_db: f64,
        grid: Grid,
    ) -> Result<Self> {
        let g_bob = match protocol {
            Protocol::GmcsDr | Protocol::GmcsRr => 1.0,
            _ => BOB_OPTICS,
        };
        let link = LinkSpec::new(FIBER_DB_PER_KM, 0.0, g_bob, switch_loss_db)?;
        let scenario = |mode| Scenario::new(protocol, mode, link, detectors.to_vec(), config);
        Ok(Self {
            id,
            dual: scenario(Mode::Dual)?,
            fast: scenario(Mode::SingleFast)?,
            slow: scenario(Mode::SingleSlow)?,
            grid,
        })
    }

    /// Same figure with `loss_db` of switch loss on the dual receiver.
    pub fn with_switch_loss(&self, loss_db: f64) -> Result<Self> {
        Ok(Self {
            dual: self.dual.with_switch_loss(loss_db)?,
            ..self.clone()
        })
    }

    /// Pointwise best of the two single-detector receivers.
    pub fn best_single(&self) -> Envelope<'_> {
        Envelope::new(vec![&self.fast, &self.slow]).expect("two members")
    }

    /// Sweeps all three receivers on `grid`.
    pub fn table_on(&self, grid: &Grid) -> Result<RateTable> {
        let dual = sweep_grid(&self.dual, grid)?;
        let fast = sweep_grid(&self.fast, grid)?;
        let slow = sweep_grid(&self.slow, grid)?;
        RateTable::from_curves(&[
            (Column::Dual, &dual),
            (Column::Fast, &fast),
            (Column::Slow, &slow),
        ])
    }

    pub fn table(&self) -> Result<RateTable> {
        self.table_on(&self.grid)
    }
}

/// Parameter set `id` in 1..=9.
pub fn figure_preset(id: u32) -> Result<FigurePreset> {
    let spd_grid = Grid::new(0.0, 250.0, 1.0)?;
    let gmcs_grid = Grid::new(0.0, 60.0, 0.25)?;
    let bb84 = ProtocolConfig::Bb84(Bb84Config {
        basis_factor: 0.5,
        f_ec: F_EC,
    });
    let spd = |f, s| [DetectorSpec::Spd(f), DetectorSpec::Spd(s)];
    let homodyne = [
        DetectorSpec::Homodyne(FAST_HOMODYNE),
        DetectorSpec::Homodyne(SLOW_HOMODYNE),
    ];
    let gmcs = |v, beta| {
        ProtocolConfig::Gmcs(GmcsSource {
            v,
            beta,
            eps_pre: EPS_PRE,
        })
    };
    use Protocol::*;
    match id {
        1 => FigurePreset::build(
            1,
            Bb84SinglePhoton,
            spd(UPCONVERSION, TES),
            bb84,
            0.0,
            spd_grid,
        ),
        2 => FigurePreset::build(
            2,
            Bb84SinglePhoton,
            spd(LOW_JITTER_10GHZ, TES),
            bb84,
            0.0,
            spd_grid,
        ),
        3 => FigurePreset::build(
            3,
            Bb84SinglePhoton,
            spd(LOW_JITTER_10GHZ, LOW_JITTER_100MHZ),
            bb84,
            0.0,
            spd_grid,
        ),
        4 => FigurePreset::build(
            4,
            DecoyBb84,
            spd(UPCONVERSION, TES),
            ProtocolConfig::Decoy(DecoyConfig {
                mu: 0.73,
                basis_factor: 0.5,
                f_ec: F_EC,
                drop_pa: false,
            }),
            0.0,
            spd_grid,
        ),
        5 => FigurePreset::build(5, GmcsDr, homodyne, gmcs(40.0, 1.0), 0.0, gmcs_grid),
        6 => FigurePreset::build(6, GmcsRr, homodyne, gmcs(40.0, 1.0), 0.0, gmcs_grid),
        7 => FigurePreset::build(7, GmcsRr, homodyne, gmcs(20.0, 0.8), 0.0, gmcs_grid),
        8 => FigurePreset::build(
            8,
            Bb84SinglePhoton,
            spd(LOW_JITTER_10GHZ, TES),
            bb84,
            COMMERCIAL_SWITCH_LOSS_DB,
            spd_grid,
        ),
        9 => FigurePreset::build(
            9,
            Bb84SinglePhoton,
            spd(LOW_JITTER_10GHZ, LOW_JITTER_100MHZ),
            bb84,
            COMMERCIAL_SWITCH_LOSS_DB,
            spd_grid,
        ),
        other => Err(Error::UnknownPreset(other)),
    }
}
