//! Python module `linjam`: the simulator, analytic model and learners.
//!
//! Schemes are passed as strings (`"BPSK"`, `"QPSK"`, `"AWGN"`), powers in
//! dB unless a name says `_linear`. Experiment configs are the same JSON
//! documents the CLI reads.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use linjam::analytic::{self, AnalyticQuery};
use linjam::bandit::{self as core_bandit, ActionSpaceConfig, Context, ContextNormalization, JnrMode};
use linjam::channel::{self, ChannelParams, CostConfig, CostMode, JammingAction, PacketResult, PhaseMode};
use linjam::harness::{self, Execution, Experiment, ExperimentConfig, StepRecord};
use linjam::signal::Scheme;
use linjam::Error;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyIOError::new_err(err.to_string()),
        Error::QuadratureNonConvergence { .. } | Error::NotPositiveDefinite => {
            PyRuntimeError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn scheme(name: &str) -> PyResult<Scheme> {
    name.parse().map_err(PyValueError::new_err)
}

fn schemes(names: &[String]) -> PyResult<Vec<Scheme>> {
    names.iter().map(|s| scheme(s)).collect()
}

/// `"coherent"`, `"uniform"`, or a fixed offset in radians.
fn phase_mode(phase: &Bound<'_, PyAny>) -> PyResult<PhaseMode> {
    if let Ok(phi) = phase.extract::<f64>() {
        return Ok(PhaseMode::FixedOffset(phi));
    }
    match phase.extract::<String>()?.to_ascii_lowercase().as_str() {
        "coherent" => Ok(PhaseMode::Coherent),
        "uniform" => Ok(PhaseMode::UniformPerPacket),
        other => Err(PyValueError::new_err(format!(
            "phase must be 'coherent', 'uniform' or an angle, got '{other}'"
        ))),
    }
}

fn cost_mode(name: &str) -> PyResult<CostMode> {
    match name.to_ascii_uppercase().as_str() {
        "SER" => Ok(CostMode::Ser),
        "PER" => Ok(CostMode::Per),
        _ => Err(PyValueError::new_err(format!("cost mode must be 'SER' or 'PER', got '{name}'"))),
    }
}

fn query(victim: &str, jammer: &str, snr_linear: f64, jnr_linear: f64, rho: f64) -> PyResult<AnalyticQuery> {
    Ok(AnalyticQuery {
        victim_scheme: scheme(victim)?,
        jammer_scheme: scheme(jammer)?,
        snr_linear,
        jnr_linear,
        rho,
    })
}

#[pyfunction]
fn erfc(x: f64) -> f64 {
    analytic::erfc(x)
}

#[pyfunction]
fn db_to_linear(db: f64) -> f64 {
    channel::db_to_linear(db)
}

#[pyfunction]
fn rho_grid(k: usize) -> Vec<f64> {
    analytic::rho_grid(k)
}

/// Expected SER at a fixed carrier offset `phi`.
#[pyfunction]
fn pe_at_phase(victim: &str, jammer: &str, snr_linear: f64, jnr_linear: f64, rho: f64, phi: f64) -> PyResult<f64> {
    analytic::pe_at_phase(&query(victim, jammer, snr_linear, jnr_linear, rho)?, phi).map_err(to_py)
}

/// Expected SER with a uniformly distributed carrier offset.
#[pyfunction]
fn pe_phase_averaged(victim: &str, jammer: &str, snr_linear: f64, jnr_linear: f64, rho: f64) -> PyResult<f64> {
    analytic::pe_phase_averaged(&query(victim, jammer, snr_linear, jnr_linear, rho)?).map_err(to_py)
}

#[pyclass(frozen, get_all)]
struct OptimalStrategy {
    jammer_scheme: String,
    rho_star: f64,
    expected_ser: f64,
}

#[pymethods]
impl OptimalStrategy {
    fn __repr__(&self) -> String {
        format!(
            "OptimalStrategy(jammer_scheme='{}', rho_star={}, expected_ser={:e})",
            self.jammer_scheme, self.rho_star, self.expected_ser
        )
    }
}

/// Best (scheme, ρ) over `rho_grid` for a uniformly random carrier offset,
/// or for the fixed offset `phi` when given.
#[pyfunction]
#[pyo3(signature = (victim, snr_linear, jnr_linear, rho_grid, schemes = None, phi = None))]
fn optimal_pulsed_strategy(
    victim: &str,
    snr_linear: f64,
    jnr_linear: f64,
    rho_grid: Vec<f64>,
    schemes: Option<Vec<String>>,
    phi: Option<f64>,
) -> PyResult<OptimalStrategy> {
    let victim = scheme(victim)?;
    let candidates = match schemes {
        Some(names) => self::schemes(&names)?,
        None => Scheme::ALL.to_vec(),
    };
    let opt = match phi {
        None => analytic::optimal_pulsed_strategy(victim, snr_linear, jnr_linear, &rho_grid, &candidates),
        Some(phi) => {
            analytic::optimal_pulsed_strategy_at_phase(victim, snr_linear, jnr_linear, &rho_grid, &candidates, phi)
        }
    }
    .map_err(to_py)?;
    Ok(OptimalStrategy {
        jammer_scheme: opt.jammer_scheme.to_string(),
        rho_star: opt.rho_star,
        expected_ser: opt.expected_ser,
    })
}

#[pyclass(name = "PacketResult", frozen, get_all)]
struct PyPacketResult {
    ser: f64,
    packet_error: bool,
    avg_jnr_linear: f64,
    symbols: usize,
    symbol_errors: usize,
}

impl From<PacketResult> for PyPacketResult {
    fn from(p: PacketResult) -> Self {
        PyPacketResult {
            ser: p.ser,
            packet_error: p.packet_error,
            avg_jnr_linear: p.avg_jnr_linear,
            symbols: p.symbols,
            symbol_errors: p.symbol_errors,
        }
    }
}

#[pymethods]
impl PyPacketResult {
    fn __repr__(&self) -> String {
        format!(
            "PacketResult(ser={}, symbol_errors={}, symbols={})",
            self.ser, self.symbol_errors, self.symbols
        )
    }
}

/// One packet through the jammed channel. The random stream is the one the
/// experiment harness uses for `(seed, replication, t)`.
#[pyfunction]
#[pyo3(signature = (victim, snr_db, jammer, jnr_db, rho, symbols = 10_000, phase = None, seed = 0, replication = 0, t = 1))]
#[allow(clippy::too_many_arguments)]
fn simulate_packet(
    victim: &str,
    snr_db: f64,
    jammer: &str,
    jnr_db: f64,
    rho: f64,
    symbols: usize,
    phase: Option<&Bound<'_, PyAny>>,
    seed: u64,
    replication: u32,
    t: u32,
) -> PyResult<PyPacketResult> {
    let params = ChannelParams {
        victim_scheme: scheme(victim)?,
        snr_db,
        phase_mode: phase.map(phase_mode).transpose()?.unwrap_or(PhaseMode::UniformPerPacket),
        symbols_per_packet: symbols,
    };
    let action = JammingAction {
        scheme: scheme(jammer)?,
        jnr_db,
        rho,
    };
    let mut rng = harness::seed_stream(seed, replication, t);
    channel::simulate_packet(&params, &action, &mut rng).map(Into::into).map_err(to_py)
}

/// `max(rate - target, 0) / JNR` for one packet.
#[pyfunction]
#[pyo3(signature = (ser, packet_error, jnr_db, mode = "SER", target = 0.0))]
fn compute_cost(ser: f64, packet_error: bool, jnr_db: f64, mode: &str, target: f64) -> PyResult<f64> {
    let cost = CostConfig {
        mode: cost_mode(mode)?,
        target,
    };
    cost.validate().map_err(to_py)?;
    let packet = PacketResult {
        ser,
        packet_error,
        avg_jnr_linear: channel::db_to_linear(jnr_db),
        symbols: 0,
        symbol_errors: 0,
    };
    channel::compute_cost(&packet, &cost).map_err(to_py)
}

/// Arms as `(scheme, jnr_db, rho)` tuples. Pass `jnr_db` for a fixed level
/// or `jnr_range=(min_db, max_db)` for `m_disc` levels.
#[pyfunction]
#[pyo3(signature = (schemes, m_disc, jnr_db = None, jnr_range = None))]
fn build_action_space(
    schemes: Vec<String>,
    m_disc: usize,
    jnr_db: Option<f64>,
    jnr_range: Option<(f64, f64)>,
) -> PyResult<Vec<(String, f64, f64)>> {
    let jnr_mode = match (jnr_db, jnr_range) {
        (Some(jnr_db), None) => JnrMode::Fixed { jnr_db },
        (None, Some((min_db, max_db))) => JnrMode::Range { min_db, max_db },
        _ => return Err(PyValueError::new_err("give exactly one of jnr_db or jnr_range")),
    };
    let cfg = ActionSpaceConfig {
        schemes: self::schemes(&schemes)?,
        m_disc,
        jnr_mode,
    };
    let space = core_bandit::build_action_space(&cfg).map_err(to_py)?;
    Ok(space
        .actions()
        .iter()
        .map(|a| (a.scheme.to_string(), a.jnr_db, a.rho))
        .collect())
}

/// Running cost statistics of one arm.
#[pyclass(name = "ArmStats")]
#[derive(Default)]
struct PyArmStats {
    inner: core_bandit::ArmStats,
}

#[pymethods]
impl PyArmStats {
    #[new]
    fn new() -> Self {
        Self::default()
    }

    fn record(&mut self, cost: f64, tau: f64) {
        self.inner.record(cost, tau);
    }

    /// `[mean cost, frequency of cost > tau, max cost]`.
    fn context(&self) -> Context {
        core_bandit::context_vector(&self.inner, ContextNormalization::PerArm, 0)
    }

    #[getter]
    fn plays(&self) -> u64 {
        self.inner.plays
    }

    #[getter]
    fn mean_cost(&self) -> f64 {
        self.inner.mean_cost()
    }

    #[getter]
    fn exceed_freq(&self) -> f64 {
        self.inner.exceed_freq()
    }

    #[getter]
    fn max_cost(&self) -> f64 {
        self.inner.max_cost
    }
}

/// Linear Thompson sampling posterior with its own random stream.
#[pyclass(name = "PosteriorState")]
struct PyPosteriorState {
    inner: core_bandit::PosteriorState,
    rng: ChaCha8Rng,
}

#[pymethods]
impl PyPosteriorState {
    #[new]
    #[pyo3(signature = (sample_scale = core_bandit::DEFAULT_SAMPLE_SCALE, seed = 0))]
    fn new(sample_scale: f64, seed: u64) -> PyResult<Self> {
        Ok(PyPosteriorState {
            inner: core_bandit::PosteriorState::new(sample_scale).map_err(to_py)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    fn select(&mut self, contexts: Vec<Context>) -> PyResult<usize> {
        self.inner.select(&contexts, &mut self.rng).map_err(to_py)
    }

    fn update(&mut self, phi: Context, cost: f64) {
        self.inner.update(&phi, cost);
    }

    #[getter]
    fn mu_hat(&self) -> Context {
        let m = self.inner.mu_hat();
        [m[0], m[1], m[2]]
    }

    /// Row-major `B`.
    #[getter]
    fn precision(&self) -> [[f64; 3]; 3] {
        let b = self.inner.precision();
        [0, 1, 2].map(|r| [b[(r, 0)], b[(r, 1)], b[(r, 2)]])
    }
}

#[pyclass(name = "UcbState")]
struct PyUcbState {
    inner: core_bandit::UcbState,
}

#[pymethods]
impl PyUcbState {
    #[new]
    #[pyo3(signature = (arms, width = 1.0))]
    fn new(arms: usize, width: f64) -> PyResult<Self> {
        if arms == 0 {
            return Err(PyValueError::new_err("need at least one arm"));
        }
        Ok(PyUcbState {
            inner: core_bandit::UcbState::new(arms, width),
        })
    }

    fn select(&self) -> usize {
        self.inner.select()
    }

    fn update(&mut self, arm: usize, reward: f64) -> PyResult<()> {
        if arm >= self.inner.arms() {
            return Err(PyIndexError::new_err(format!("arm {arm} out of range")));
        }
        self.inner.update(arm, reward);
        Ok(())
    }

    fn mean(&self, arm: usize) -> PyResult<f64> {
        if arm >= self.inner.arms() {
            return Err(PyIndexError::new_err(format!("arm {arm} out of range")));
        }
        Ok(self.inner.mean(arm))
    }

    #[getter]
    fn counts(&self) -> Vec<u64> {
        self.inner.counts().to_vec()
    }

    #[getter]
    fn explored(&self) -> usize {
        self.inner.explored()
    }
}

fn parse_config(config_json: &str) -> PyResult<ExperimentConfig> {
    let cfg: ExperimentConfig =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(format!("config: {e}")))?;
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

/// Log columns as a dict of equal-length lists.
fn columns<'py>(py: Python<'py>, records: &[StepRecord]) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("replication", records.iter().map(|r| r.replication).collect::<Vec<_>>())?;
    out.set_item("t", records.iter().map(|r| r.t).collect::<Vec<_>>())?;
    out.set_item("action", records.iter().map(|r| r.action).collect::<Vec<_>>())?;
    out.set_item("scheme", records.iter().map(|r| r.scheme.as_str()).collect::<Vec<_>>())?;
    out.set_item("jnr_db", records.iter().map(|r| r.jnr_db).collect::<Vec<_>>())?;
    out.set_item("rho", records.iter().map(|r| r.rho).collect::<Vec<_>>())?;
    out.set_item("ser", records.iter().map(|r| r.ser).collect::<Vec<_>>())?;
    out.set_item("packet_error", records.iter().map(|r| r.packet_error).collect::<Vec<_>>())?;
    out.set_item("cost", records.iter().map(|r| r.cost).collect::<Vec<_>>())?;
    Ok(out)
}

fn run(py: Python<'_>, cfg: ExperimentConfig, sequential: bool) -> PyResult<Vec<StepRecord>> {
    let execution = if sequential { Execution::Sequential } else { Execution::Parallel };
    py.detach(|| Experiment::new(cfg)?.run(execution)).map_err(to_py)
}

/// Runs the experiment described by a JSON config string and returns its log
/// as columns.
#[pyfunction]
#[pyo3(signature = (config_json, sequential = false))]
fn run_experiment<'py>(py: Python<'py>, config_json: &str, sequential: bool) -> PyResult<Bound<'py, PyDict>> {
    let records = run(py, parse_config(config_json)?, sequential)?;
    columns(py, &records)
}

/// Runs a config and writes the CSV log plus its JSON sidecar to `path`.
/// Returns the number of rows written.
#[pyfunction]
#[pyo3(signature = (config_json, path, sequential = false))]
fn write_log(py: Python<'_>, config_json: &str, path: PathBuf, sequential: bool) -> PyResult<usize> {
    let cfg = parse_config(config_json)?;
    let records = run(py, cfg.clone(), sequential)?;
    harness::write_log(&records, &cfg, &path).map_err(to_py)?;
    Ok(records.len())
}

/// Reads a config file or run sidecar and returns the config as JSON.
#[pyfunction]
fn load_config(path: PathBuf) -> PyResult<String> {
    let cfg = ExperimentConfig::load(&path).map_err(to_py)?;
    serde_json::to_string(&cfg).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
#[pyo3(name = "linjam")]
fn linjam_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("CSV_HEADER", harness::CSV_HEADER)?;
    m.add_function(wrap_pyfunction!(erfc, m)?)?;
    m.add_function(wrap_pyfunction!(db_to_linear, m)?)?;
    m.add_function(wrap_pyfunction!(rho_grid, m)?)?;
    m.add_function(wrap_pyfunction!(pe_at_phase, m)?)?;
    m.add_function(wrap_pyfunction!(pe_phase_averaged, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_pulsed_strategy, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_packet, m)?)?;
    m.add_function(wrap_pyfunction!(compute_cost, m)?)?;
    m.add_function(wrap_pyfunction!(build_action_space, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(write_log, m)?)?;
    m.add_function(wrap_pyfunction!(load_config, m)?)?;
    m.add_class::<OptimalStrategy>()?;
    m.add_class::<PyPacketResult>()?;
    m.add_class::<PyArmStats>()?;
    m.add_class::<PyPosteriorState>()?;
    m.add_class::<PyUcbState>()?;
    Ok(())
}
