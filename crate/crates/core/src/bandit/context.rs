use serde::{Deserialize, Serialize};

pub const CONTEXT_DIM: usize = 3;

/// `[mean cost, frequency of cost > τ, max cost]` for one arm.
pub type Context = [f64; CONTEXT_DIM];

/// Denominator used for the two averaged features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ContextNormalization {
    /// Divide by the arm's own play count.
    #[default]
    PerArm,
    /// Divide by the global step count.
    GlobalTime,
}

/// Running statistics over the costs observed on one arm.
///
/// Sums are stored rather than running means so the features are bit-identical
/// to a batch recomputation over the arm's cost log.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ArmStats {
    pub plays: u64,
    pub cost_sum: f64,
    pub exceed_count: u64,
    pub max_cost: f64,
}

impl ArmStats {
    pub fn mean_cost(&self) -> f64 {
        if self.plays == 0 {
            0.0
        } else {
            self.cost_sum / self.plays as f64
        }
    }

    pub fn exceed_freq(&self) -> f64 {
        if self.plays == 0 {
            0.0
        } else {
            self.exceed_count as f64 / self.plays as f64
        }
    }

    pub fn record(&mut self, cost: f64, tau: f64) {
        self.max_cost = if self.plays == 0 { cost } else { self.max_cost.max(cost) };
        self.plays += 1;
        self.cost_sum += cost;
        if cost > tau {
            self.exceed_count += 1;
        }
    }
}

pub fn update_stats(stats: ArmStats, cost: f64, tau: f64) -> ArmStats {
    let mut next = stats;
    next.record(cost, tau);
    next
}

/// Context features of an arm; an unplayed arm maps to the origin.
///
/// `global_steps` is only read under [`ContextNormalization::GlobalTime`].
pub fn context_vector(stats: &ArmStats, normalization: ContextNormalization, global_steps: u64) -> Context {
    if stats.plays == 0 {
        return [0.0; CONTEXT_DIM];
    }
    match normalization {
        ContextNormalization::PerArm => [stats.mean_cost(), stats.exceed_freq(), stats.max_cost],
        ContextNormalization::GlobalTime => {
            let n = global_steps.max(stats.plays) as f64;
            [stats.cost_sum / n, stats.exceed_count as f64 / n, stats.max_cost]
        }
    }
}
