//! Arms, context features and the two learners.
//!
//! Costs follow the jammer's point of view: a larger cost means a more
//! effective jamming packet, so both learners maximize it.

mod context;
mod lints;
mod ucb;

pub use context::{context_vector, update_stats, ArmStats, Context, ContextNormalization, CONTEXT_DIM};
pub use lints::PosteriorState;
pub use ucb::UcbState;

use serde::{Deserialize, Serialize};

/// Posterior standard-deviation multiplier for Thompson sampling.
///
/// `B⁻¹` alone describes unit-variance rewards; SER costs are `SER/JNR`,
/// typically below 1e-2, so the unscaled posterior is dominated by noise.
pub const DEFAULT_SAMPLE_SCALE: f64 = 0.02;

use crate::channel::JammingAction;
use crate::signal::Scheme;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum JnrMode {
    Fixed { jnr_db: f64 },
    /// Levels `min + (max − min)·{1/M, …, 1}` in dB.
    Range { min_db: f64, max_db: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpaceConfig {
    pub schemes: Vec<Scheme>,
    /// Discretization factor: ρ takes values `{1/M, 2/M, …, 1}`.
    pub m_disc: usize,
    pub jnr_mode: JnrMode,
}

impl ActionSpaceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::config("action_cfg.schemes", "must not be empty"));
        }
        for (i, s) in self.schemes.iter().enumerate() {
            if self.schemes[..i].contains(s) {
                return Err(Error::config("action_cfg.schemes", format!("{s} listed twice")));
            }
        }
        if self.m_disc == 0 {
            return Err(Error::config("action_cfg.m_disc", "must be at least 1"));
        }
        match self.jnr_mode {
            JnrMode::Fixed { jnr_db } if !jnr_db.is_finite() => {
                Err(Error::config("action_cfg.jnr_mode", "fixed JNR must be finite"))
            }
            JnrMode::Range { min_db, max_db } if !(min_db < max_db && max_db.is_finite() && min_db.is_finite()) => {
                Err(Error::config("action_cfg.jnr_mode", format!("range needs min < max, got [{min_db}, {max_db}]")))
            }
            _ => Ok(()),
        }
    }

    pub fn jnr_levels_db(&self) -> Vec<f64> {
        match self.jnr_mode {
            JnrMode::Fixed { jnr_db } => vec![jnr_db],
            JnrMode::Range { min_db, max_db } => (1..=self.m_disc)
                .map(|k| min_db + (max_db - min_db) * k as f64 / self.m_disc as f64)
                .collect(),
        }
    }

    pub fn rho_levels(&self) -> Vec<f64> {
        crate::analytic::rho_grid(self.m_disc)
    }
}

/// Indexed arms, ordered scheme-major, then ρ, then JNR.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSpace {
    actions: Vec<JammingAction>,
}

impl ActionSpace {
    pub fn actions(&self) -> &[JammingAction] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&JammingAction> {
        self.actions.get(index)
    }

    pub fn position(&self, action: &JammingAction) -> Option<usize> {
        self.actions.iter().position(|a| a == action)
    }
}

pub fn build_action_space(cfg: &ActionSpaceConfig) -> Result<ActionSpace> {
    cfg.validate()?;
    let rhos = cfg.rho_levels();
    let jnrs = cfg.jnr_levels_db();
    let mut actions = Vec::with_capacity(cfg.schemes.len() * rhos.len() * jnrs.len());
    for &scheme in &cfg.schemes {
        for &rho in &rhos {
            for &jnr_db in &jnrs {
                actions.push(JammingAction { scheme, jnr_db, rho });
            }
        }
    }
    Ok(ActionSpace { actions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m_disc: usize, jnr_mode: JnrMode) -> ActionSpaceConfig {
        ActionSpaceConfig {
            schemes: Scheme::ALL.to_vec(),
            m_disc,
            jnr_mode,
        }
    }

    const FIXED: JnrMode = JnrMode::Fixed { jnr_db: 10.0 };

    #[test]
    fn cardinalities() {
        assert_eq!(build_action_space(&cfg(5, FIXED)).unwrap().len(), 15);
        assert_eq!(build_action_space(&cfg(1000, FIXED)).unwrap().len(), 3000);
        let range = JnrMode::Range { min_db: 0.0, max_db: 10.0 };
        assert_eq!(build_action_space(&cfg(100, range)).unwrap().len(), 30_000);
    }

    #[test]
    fn ordering_is_scheme_then_rho_then_jnr() {
        let space = build_action_space(&cfg(2, JnrMode::Range { min_db: 0.0, max_db: 10.0 })).unwrap();
        let a = space.actions();
        assert_eq!(a[0], JammingAction { scheme: Scheme::Bpsk, jnr_db: 5.0, rho: 0.5 });
        assert_eq!(a[1], JammingAction { scheme: Scheme::Bpsk, jnr_db: 10.0, rho: 0.5 });
        assert_eq!(a[2], JammingAction { scheme: Scheme::Bpsk, jnr_db: 5.0, rho: 1.0 });
        assert_eq!(a[4].scheme, Scheme::Qpsk);
        assert_eq!(a[11], JammingAction { scheme: Scheme::Awgn, jnr_db: 10.0, rho: 1.0 });
        assert_eq!(space.position(&a[7]), Some(7));
    }

    #[test]
    fn invalid_configs() {
        assert!(build_action_space(&cfg(0, FIXED)).is_err());
        assert!(build_action_space(&cfg(3, JnrMode::Range { min_db: 5.0, max_db: 5.0 })).is_err());
        let mut dup = cfg(3, FIXED);
        dup.schemes = vec![Scheme::Bpsk, Scheme::Bpsk];
        assert!(build_action_space(&dup).is_err());
        dup.schemes.clear();
        assert!(build_action_space(&dup).is_err());
    }
}
