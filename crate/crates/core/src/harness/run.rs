use rayon::prelude::*;

use super::config::{ExperimentConfig, Learner};
use super::seed::seed_stream;
use crate::analytic::{optimal_pulsed_strategy, optimal_pulsed_strategy_at_phase, OptimalStrategy};
use crate::bandit::{
    build_action_space, context_vector, ActionSpace, ArmStats, Context, ContextNormalization, PosteriorState,
    UcbState,
};
use crate::channel::{compute_cost, db_to_linear, simulate_packet, JammingAction, PhaseMode};
use crate::signal::Scheme;
use crate::{Error, Result};

/// One row of the experiment log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub replication: u32,
    /// 1-based step index.
    pub t: u32,
    pub action: usize,
    pub scheme: Scheme,
    pub jnr_db: f64,
    pub rho: f64,
    pub ser: f64,
    pub packet_error: bool,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// Learner state at the end of a replication.
#[derive(Debug, Clone)]
pub enum LearnerState {
    LinTs {
        posterior: PosteriorState,
        stats: Vec<ArmStats>,
    },
    Ucb(UcbState),
    Fixed {
        arm: usize,
    },
}

impl LearnerState {
    pub fn posterior(&self) -> Option<&PosteriorState> {
        match self {
            LearnerState::LinTs { posterior, .. } => Some(posterior),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReplicationRun {
    pub records: Vec<StepRecord>,
    pub learner: LearnerState,
}

/// A validated configuration with its action space and, for
/// `FixedOptimal`, the analytic optimum over that space.
#[derive(Debug, Clone)]
pub struct Experiment {
    cfg: ExperimentConfig,
    space: ActionSpace,
    oracle: Option<(usize, OptimalStrategy)>,
}

impl Experiment {
    pub fn new(cfg: ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let space = build_action_space(&cfg.action_cfg)?;
        let oracle = match cfg.learner {
            Learner::FixedOptimal => Some(oracle_arm(&cfg, &space)?),
            _ => None,
        };
        Ok(Experiment { cfg, space, oracle })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn space(&self) -> &ActionSpace {
        &self.space
    }

    /// Arm index and analytic value of the optimum, for `FixedOptimal` runs.
    pub fn oracle(&self) -> Option<(usize, OptimalStrategy)> {
        self.oracle
    }

    pub fn run(&self, execution: Execution) -> Result<Vec<StepRecord>> {
        let reps = 0..self.cfg.replications as u32;
        let runs: Vec<ReplicationRun> = match execution {
            Execution::Parallel => reps.into_par_iter().map(|r| self.run_replication(r)).collect::<Result<_>>()?,
            Execution::Sequential => reps.map(|r| self.run_replication(r)).collect::<Result<_>>()?,
        };
        Ok(runs.into_iter().flat_map(|r| r.records).collect())
    }

    pub fn run_replication(&self, replication: u32) -> Result<ReplicationRun> {
        let cfg = &self.cfg;
        let arms = self.space.len();
        let mut learner = match cfg.learner {
            Learner::LinTs => LearnerState::LinTs {
                posterior: PosteriorState::new(cfg.sample_scale)?,
                stats: vec![ArmStats::default(); arms],
            },
            Learner::Ucb1 => LearnerState::Ucb(UcbState::new(arms, cfg.ucb_width)),
            Learner::FixedOptimal => LearnerState::Fixed {
                arm: self.oracle.expect("oracle is computed for FixedOptimal").0,
            },
        };
        let mut contexts: Vec<Context> = vec![[0.0; 3]; arms];
        let mut records = Vec::with_capacity(cfg.horizon);

        for t in 1..=cfg.horizon as u32 {
            let mut rng = seed_stream(cfg.master_seed, replication, t);
            let arm = match &learner {
                LearnerState::LinTs { posterior, stats } => {
                    if cfg.context_normalization == ContextNormalization::GlobalTime {
                        for (c, s) in contexts.iter_mut().zip(stats) {
                            *c = context_vector(s, ContextNormalization::GlobalTime, u64::from(t - 1));
                        }
                    }
                    posterior.select(&contexts, &mut rng)?
                }
                LearnerState::Ucb(ucb) => ucb.select(),
                LearnerState::Fixed { arm } => *arm,
            };

            let action = self.space.actions()[arm];
            let packet = simulate_packet(&cfg.channel, &action, &mut rng)?;
            let cost = compute_cost(&packet, &cfg.cost)?;

            match &mut learner {
                LearnerState::LinTs { posterior, stats } => {
                    let phi = contexts[arm];
                    posterior.update(&phi, cost);
                    stats[arm].record(cost, cfg.tau);
                    contexts[arm] = context_vector(&stats[arm], cfg.context_normalization, u64::from(t));
                }
                LearnerState::Ucb(ucb) => ucb.update(arm, cost),
                LearnerState::Fixed { .. } => {}
            }

            records.push(StepRecord {
                replication,
                t,
                action: arm,
                scheme: action.scheme,
                jnr_db: action.jnr_db,
                rho: action.rho,
                ser: packet.ser,
                packet_error: packet.packet_error,
                cost,
            });
        }

        Ok(ReplicationRun { records, learner })
    }
}

/// Builds and runs an experiment.
pub fn run_experiment(cfg: &ExperimentConfig, execution: Execution) -> Result<Vec<StepRecord>> {
    Experiment::new(cfg.clone())?.run(execution)
}

/// Best arm of the space by expected SER under the channel's phase model,
/// at the space's highest JNR level.
fn oracle_arm(cfg: &ExperimentConfig, space: &ActionSpace) -> Result<(usize, OptimalStrategy)> {
    let jnr_db = *cfg
        .action_cfg
        .jnr_levels_db()
        .last()
        .expect("validated action space has a JNR level");
    let rhos = cfg.action_cfg.rho_levels();
    let schemes = &cfg.action_cfg.schemes;
    let (victim, snr, jnr) = (cfg.channel.victim_scheme, cfg.channel.signal_power(), db_to_linear(jnr_db));
    let strategy = match cfg.channel.phase_mode {
        PhaseMode::UniformPerPacket => optimal_pulsed_strategy(victim, snr, jnr, &rhos, schemes)?,
        PhaseMode::Coherent => optimal_pulsed_strategy_at_phase(victim, snr, jnr, &rhos, schemes, 0.0)?,
        PhaseMode::FixedOffset(phi) => optimal_pulsed_strategy_at_phase(victim, snr, jnr, &rhos, schemes, phi)?,
    };
    let action = JammingAction {
        scheme: strategy.jammer_scheme,
        jnr_db,
        rho: strategy.rho_star,
    };
    let arm = space
        .position(&action)
        .ok_or_else(|| Error::config("action_cfg", "oracle strategy is not an arm of the space"))?;
    Ok((arm, strategy))
}
