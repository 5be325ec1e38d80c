use serde::{Deserialize, Serialize};

/// UCB-1 over a finite arm set.
///
/// Plays every arm once in index order, then the arm maximizing
/// `mean + width·√(2 ln t / nᵢ)`, ties to the lowest index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UcbState {
    counts: Vec<u64>,
    sums: Vec<f64>,
    t: u64,
    width: f64,
}

impl UcbState {
    pub fn new(arms: usize, width: f64) -> Self {
        UcbState {
            counts: vec![0; arms],
            sums: vec![0.0; arms],
            t: 0,
            width,
        }
    }

    pub fn arms(&self) -> usize {
        self.counts.len()
    }

    pub fn plays(&self) -> u64 {
        self.t
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn mean(&self, arm: usize) -> f64 {
        if self.counts[arm] == 0 {
            0.0
        } else {
            self.sums[arm] / self.counts[arm] as f64
        }
    }

    /// Arms played at least once.
    pub fn explored(&self) -> usize {
        self.counts.iter().filter(|&&n| n > 0).count()
    }

    pub fn select(&self) -> usize {
        if (self.t as usize) < self.arms() {
            return self.t as usize;
        }
        let log_t = (self.t as f64).ln();
        let mut best = 0;
        let mut best_index = f64::NEG_INFINITY;
        for arm in 0..self.arms() {
            let index = self.mean(arm) + self.width * (2.0 * log_t / self.counts[arm] as f64).sqrt();
            if index > best_index {
                best = arm;
                best_index = index;
            }
        }
        best
    }

    pub fn update(&mut self, arm: usize, reward: f64) {
        self.counts[arm] += 1;
        self.sums[arm] += reward;
        self.t += 1;
    }
}
