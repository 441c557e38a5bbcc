//! Python bindings. Built as the `dualqkd_py` extension module.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dualqkd::sweep::Envelope;
use dualqkd::{self as core, Error};

create_exception!(
    dualqkd_py,
    DualQkdError,
    PyValueError,
    "Base class for dualqkd errors."
);
create_exception!(
    dualqkd_py,
    ConfigError,
    DualQkdError,
    "Invalid configuration or input file."
);
create_exception!(
    dualqkd_py,
    DomainError,
    DualQkdError,
    "Parameter outside a model's domain."
);

fn to_py(e: Error) -> PyErr {
    match e.exit_code() {
        2 => ConfigError::new_err(e.to_string()),
        _ => DomainError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Single-photon detector.
#[pyclass(module = "dualqkd_py", from_py_object)]
#[derive(Clone)]
pub struct SpdSpec(core::SpdSpec);

#[pymethods]
impl SpdSpec {
    #[new]
    fn new(rep_rate_hz: f64, eta_d: f64, y0: f64, e_det: f64) -> PyResult<Self> {
        core::SpdSpec::new(rep_rate_hz, eta_d, y0, e_det)
            .py()
            .map(Self)
    }

    #[getter]
    fn rep_rate_hz(&self) -> f64 {
        self.0.rep_rate
    }
    #[getter]
    fn eta_d(&self) -> f64 {
        self.0.eta_d
    }
    #[getter]
    fn y0(&self) -> f64 {
        self.0.y0
    }
    #[getter]
    fn e_det(&self) -> f64 {
        self.0.e_det
    }

    fn __repr__(&self) -> String {
        let s = &self.0;
        format!(
            "SpdSpec(rep_rate_hz={}, eta_d={}, y0={}, e_det={})",
            s.rep_rate, s.eta_d, s.y0, s.e_det
        )
    }
}

/// Balanced homodyne detector.
#[pyclass(module = "dualqkd_py", from_py_object)]
#[derive(Clone)]
pub struct HomodyneSpec(core::HomodyneSpec);

#[pymethods]
impl HomodyneSpec {
    #[new]
    fn new(rep_rate_hz: f64, g_det: f64, eps_det: f64) -> PyResult<Self> {
        core::HomodyneSpec::new(rep_rate_hz, g_det, eps_det)
            .py()
            .map(Self)
    }

    #[getter]
    fn rep_rate_hz(&self) -> f64 {
        self.0.rep_rate
    }
    #[getter]
    fn g_det(&self) -> f64 {
        self.0.g_det
    }
    #[getter]
    fn eps_det(&self) -> f64 {
        self.0.eps_det
    }

    fn __repr__(&self) -> String {
        let h = &self.0;
        format!(
            "HomodyneSpec(rep_rate_hz={}, g_det={}, eps_det={})",
            h.rep_rate, h.g_det, h.eps_det
        )
    }
}

/// Fiber link and receiver optics.
#[pyclass(module = "dualqkd_py", from_py_object)]
#[derive(Clone)]
pub struct LinkSpec(core::LinkSpec);

#[pymethods]
impl LinkSpec {
    #[new]
    #[pyo3(signature = (length_km, alpha_db_per_km = 0.21, g_bob = 0.16, switch_loss_db = 0.0))]
    fn new(
        length_km: f64,
        alpha_db_per_km: f64,
        g_bob: f64,
        switch_loss_db: f64,
    ) -> PyResult<Self> {
        core::LinkSpec::new(alpha_db_per_km, length_km, g_bob, switch_loss_db)
            .py()
            .map(Self)
    }

    #[getter]
    fn length_km(&self) -> f64 {
        self.0.length
    }
    #[getter]
    fn alpha_db_per_km(&self) -> f64 {
        self.0.alpha
    }
    #[getter]
    fn g_bob(&self) -> f64 {
        self.0.g_bob
    }
    #[getter]
    fn switch_loss_db(&self) -> f64 {
        self.0.switch_loss
    }

    fn __repr__(&self) -> String {
        let l = &self.0;
        format!(
            "LinkSpec(length_km={}, alpha_db_per_km={}, g_bob={}, switch_loss_db={})",
            l.length, l.alpha, l.g_bob, l.switch_loss
        )
    }
}

/// Gaussian-modulated coherent-state source.
#[pyclass(module = "dualqkd_py", from_py_object)]
#[derive(Clone)]
pub struct GmcsSource(core::GmcsSource);

#[pymethods]
impl GmcsSource {
    #[new]
    #[pyo3(signature = (v, beta = 1.0, eps_pre = 0.05))]
    fn new(v: f64, beta: f64, eps_pre: f64) -> PyResult<Self> {
        core::GmcsSource::new(v, beta, eps_pre).py().map(Self)
    }

    #[getter]
    fn v(&self) -> f64 {
        self.0.v
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta
    }
    #[getter]
    fn eps_pre(&self) -> f64 {
        self.0.eps_pre
    }

    fn __repr__(&self) -> String {
        let s = &self.0;
        format!(
            "GmcsSource(v={}, beta={}, eps_pre={})",
            s.v, s.beta, s.eps_pre
        )
    }
}

/// A validated protocol/mode/detector combination.
#[pyclass(module = "dualqkd_py", from_py_object)]
#[derive(Clone)]
pub struct Scenario(core::Scenario);

fn mode_from_str(s: &str) -> PyResult<core::Mode> {
    Ok(match s {
        "single_fast" => core::Mode::SingleFast,
        "single_slow" => core::Mode::SingleSlow,
        "dual" => core::Mode::Dual,
        "dual_no_pa" => core::Mode::DualNoPa,
        other => return Err(ConfigError::new_err(format!("unknown mode {other:?}"))),
    })
}

fn mode_name(m: core::Mode) -> &'static str {
    match m {
        core::Mode::SingleFast => "single_fast",
        core::Mode::SingleSlow => "single_slow",
        core::Mode::Dual => "dual",
        core::Mode::DualNoPa => "dual_no_pa",
    }
}

fn protocol_name(p: core::Protocol) -> &'static str {
    match p {
        core::Protocol::Bb84SinglePhoton => "bb84_single_photon",
        core::Protocol::DecoyBb84 => "decoy_bb84",
        core::Protocol::GmcsDr => "gmcs_dr",
        core::Protocol::GmcsRr => "gmcs_rr",
    }
}

#[pymethods]
impl Scenario {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::Scenario::from_json_str(text).py().map(Self)
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        core::Scenario::from_path(path).py().map(Self)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn protocol(&self) -> &'static str {
        protocol_name(self.0.protocol())
    }

    #[getter]
    fn mode(&self) -> &'static str {
        mode_name(self.0.mode())
    }

    #[getter]
    fn link(&self) -> LinkSpec {
        LinkSpec(*self.0.link())
    }

    fn with_mode(&self, mode: &str) -> PyResult<Self> {
        self.0.with_mode(mode_from_str(mode)?).py().map(Self)
    }

    fn with_switch_loss(&self, switch_loss_db: f64) -> PyResult<Self> {
        self.0.with_switch_loss(switch_loss_db).py().map(Self)
    }

    /// Unclamped key rate in bits/s.
    fn rate(&self, length_km: f64) -> PyResult<f64> {
        self.0.evaluate(length_km).py()
    }

    /// `[(length_km, raw_rate), ...]` on the grid `l_min..=l_max`.
    #[pyo3(signature = (l_min = 0.0, l_max = 250.0, step = 1.0))]
    fn sweep(&self, l_min: f64, l_max: f64, step: f64) -> PyResult<Vec<(f64, f64)>> {
        let c = core::sweep(&self.0, l_min, l_max, step).py()?;
        Ok(c.points.iter().map(|p| (p.length_km, p.raw_rate)).collect())
    }

    /// Longest length with a positive rate, `None` if the rate is never positive.
    #[pyo3(signature = (l_max = 500.0))]
    fn max_distance(&self, l_max: f64) -> PyResult<Option<f64>> {
        core::max_secure_distance(&self.0, l_max).py()
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(protocol={:?}, mode={:?})",
            self.protocol(),
            self.mode()
        )
    }
}

/// One of the nine built-in parameter sets.
#[pyclass(module = "dualqkd_py")]
pub struct Figure(core::FigurePreset);

#[pymethods]
impl Figure {
    #[new]
    #[pyo3(signature = (id, switch_loss_db = None))]
    fn new(id: u32, switch_loss_db: Option<f64>) -> PyResult<Self> {
        let p = core::figure_preset(id).py()?;
        match switch_loss_db {
            Some(db) => p.with_switch_loss(db).py().map(Self),
            None => Ok(Self(p)),
        }
    }

    #[getter]
    fn id(&self) -> u32 {
        self.0.id
    }
    #[getter]
    fn dual(&self) -> Scenario {
        Scenario(self.0.dual.clone())
    }
    #[getter]
    fn fast(&self) -> Scenario {
        Scenario(self.0.fast.clone())
    }
    #[getter]
    fn slow(&self) -> Scenario {
        Scenario(self.0.slow.clone())
    }
    #[getter]
    fn grid(&self) -> (f64, f64, f64) {
        (self.0.grid.l_min, self.0.grid.l_max, self.0.grid.step)
    }

    /// Where the dual receiver stops beating the better single receiver, as
    /// `(length_km, touching)`.
    fn crossover(&self) -> PyResult<Option<(f64, bool)>> {
        let x = core::crossover_distance(&self.0.dual, &self.0.best_single(), self.0.grid.l_max)
            .py()?;
        Ok(x.map(|c| (c.length_km, c.touching)))
    }

    fn to_csv(&self) -> PyResult<String> {
        Ok(self.0.table().py()?.to_csv_string())
    }
}

/// Crossover of `a` against the pointwise best of `b`.
#[pyfunction]
#[pyo3(signature = (a, b, l_max = 500.0))]
fn crossover_distance(a: &Scenario, b: Vec<Scenario>, l_max: f64) -> PyResult<Option<(f64, bool)>> {
    let env = Envelope::new(b.iter().map(|s| &s.0).collect()).py()?;
    let x = core::crossover_distance(&a.0, &env, l_max).py()?;
    Ok(x.map(|c| (c.length_km, c.touching)))
}

#[pyfunction]
#[pyo3(signature = (spd, link, basis_factor = 0.5, f_ec = 1.22))]
fn bb84_rate_single(spd: &SpdSpec, link: &LinkSpec, basis_factor: f64, f_ec: f64) -> PyResult<f64> {
    core::bb84_rate_single(&spd.0, &link.0, &core::Bb84Config { basis_factor, f_ec }).py()
}

#[pyfunction]
#[pyo3(signature = (fast, slow, link, basis_factor = 0.5, f_ec = 1.22))]
fn bb84_rate_dual(
    fast: &SpdSpec,
    slow: &SpdSpec,
    link: &LinkSpec,
    basis_factor: f64,
    f_ec: f64,
) -> PyResult<f64> {
    core::bb84_rate_dual(
        &fast.0,
        &slow.0,
        &link.0,
        &core::Bb84Config { basis_factor, f_ec },
    )
    .py()
}

#[pyfunction]
#[pyo3(signature = (spd, link, mu = 0.73, basis_factor = 0.5, f_ec = 1.22))]
fn decoy_rate_single(
    spd: &SpdSpec,
    link: &LinkSpec,
    mu: f64,
    basis_factor: f64,
    f_ec: f64,
) -> PyResult<f64> {
    let cfg = core::DecoyConfig {
        mu,
        basis_factor,
        f_ec,
        drop_pa: false,
    };
    core::decoy_rate_single(&spd.0, &link.0, &cfg).py()
}

#[pyfunction]
#[pyo3(signature = (fast, slow, link, mu = 0.73, basis_factor = 0.5, f_ec = 1.22, drop_pa = false))]
fn decoy_rate_dual(
    fast: &SpdSpec,
    slow: &SpdSpec,
    link: &LinkSpec,
    mu: f64,
    basis_factor: f64,
    f_ec: f64,
    drop_pa: bool,
) -> PyResult<f64> {
    let cfg = core::DecoyConfig {
        mu,
        basis_factor,
        f_ec,
        drop_pa,
    };
    core::decoy_rate_dual(&fast.0, &slow.0, &link.0, &cfg).py()
}

#[pyfunction]
fn gmcs_dr_rate_single(source: &GmcsSource, det: &HomodyneSpec, link: &LinkSpec) -> PyResult<f64> {
    core::gmcs_dr_rate_single(&source.0, &det.0, &link.0).py()
}

#[pyfunction]
fn gmcs_dr_rate_dual(
    source: &GmcsSource,
    fast: &HomodyneSpec,
    slow: &HomodyneSpec,
    link: &LinkSpec,
) -> PyResult<f64> {
    core::gmcs_dr_rate_dual(&source.0, &fast.0, &slow.0, &link.0).py()
}

#[pyfunction]
fn gmcs_rr_rate_single(source: &GmcsSource, det: &HomodyneSpec, link: &LinkSpec) -> PyResult<f64> {
    core::gmcs_rr_rate_single(&source.0, &det.0, &link.0).py()
}

#[pyfunction]
fn gmcs_rr_rate_dual(
    source: &GmcsSource,
    fast: &HomodyneSpec,
    slow: &HomodyneSpec,
    link: &LinkSpec,
) -> PyResult<f64> {
    core::gmcs_rr_rate_dual(&source.0, &fast.0, &slow.0, &link.0).py()
}

#[pyfunction]
fn binary_entropy(x: f64) -> PyResult<f64> {
    core::binary_entropy(x).py()
}

#[pyfunction]
#[pyo3(signature = (e_det, f_ec = 1.22))]
fn optimal_mu(e_det: f64, f_ec: f64) -> PyResult<f64> {
    core::optimal_mu(e_det, f_ec).py()
}

/// `(P0, P1, PM)` for routing probability `p` and `k` pulses per window.
#[pyfunction]
fn choice_probabilities(p: f64, k: u32) -> PyResult<(f64, f64, f64)> {
    let c = core::choice_probabilities(p, k).py()?;
    Ok((c.p0, c.p1, c.pm))
}

#[pyfunction]
fn multi_pulse_qber(p: f64, k: u32) -> PyResult<f64> {
    core::multi_pulse_qber(p, k).py()
}

#[pyfunction]
#[pyo3(signature = (k, qber_budget = 0.01))]
fn max_slow_probability(k: u32, qber_budget: f64) -> PyResult<Option<f64>> {
    core::max_slow_probability(k, qber_budget).py()
}

#[pyfunction]
fn accumulation_time(
    p: f64,
    rep_rate: f64,
    mu: f64,
    overall_eta: f64,
    target_counts: f64,
) -> PyResult<f64> {
    core::accumulation_time(p, rep_rate, mu, overall_eta, target_counts).py()
}

#[pyfunction]
fn db_to_transmittance(loss_db: f64) -> PyResult<f64> {
    core::db_to_transmittance(loss_db).py()
}

#[pymodule]
fn dualqkd_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("DualQkdError", py.get_type::<DualQkdError>())?;
    m.add("ConfigError", py.get_type::<ConfigError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add_class::<SpdSpec>()?;
    m.add_class::<HomodyneSpec>()?;
    m.add_class::<LinkSpec>()?;
    m.add_class::<GmcsSource>()?;
    m.add_class::<Scenario>()?;
    m.add_class::<Figure>()?;
    m.add_function(wrap_pyfunction!(crossover_distance, m)?)?;
    m.add_function(wrap_pyfunction!(bb84_rate_single, m)?)?;
    m.add_function(wrap_pyfunction!(bb84_rate_dual, m)?)?;
    m.add_function(wrap_pyfunction!(decoy_rate_single, m)?)?;
    m.add_function(wrap_pyfunction!(decoy_rate_dual, m)?)?;
    m.add_function(wrap_pyfunction!(gmcs_dr_rate_single, m)?)?;
    m.add_function(wrap_pyfunction!(gmcs_dr_rate_dual, m)?)?;
    m.add_function(wrap_pyfunction!(gmcs_rr_rate_single, m)?)?;
    m.add_function(wrap_pyfunction!(gmcs_rr_rate_dual, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_mu, m)?)?;
    m.add_function(wrap_pyfunction!(choice_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(multi_pulse_qber, m)?)?;
    m.add_function(wrap_pyfunction!(max_slow_probability, m)?)?;
    m.add_function(wrap_pyfunction!(accumulation_time, m)?)?;
    m.add_function(wrap_pyfunction!(db_to_transmittance, m)?)?;
    Ok(())
}
