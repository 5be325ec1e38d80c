use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;

use super::Context;
use crate::{Error, Result};

/// Gaussian posterior over the linear reward weights.
///
/// Starts from `B = I`, `f = 0`; each observation adds `φφᵀ` to `B` and `φC`
/// to `f`, and the posterior mean is kept at `μ̂ = B⁻¹f`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorState {
    b: Matrix3<f64>,
    f: Vector3<f64>,
    mu_hat: Vector3<f64>,
    sample_scale: f64,
}

impl PosteriorState {
    pub fn new(sample_scale: f64) -> Result<Self> {
        if !(sample_scale > 0.0 && sample_scale.is_finite()) {
            return Err(Error::config("sample_scale", format!("{sample_scale} is not positive")));
        }
        Ok(PosteriorState {
            b: Matrix3::identity(),
            f: Vector3::zeros(),
            mu_hat: Vector3::zeros(),
            sample_scale,
        })
    }

    pub fn precision(&self) -> &Matrix3<f64> {
        &self.b
    }

    pub fn f(&self) -> &Vector3<f64> {
        &self.f
    }

    pub fn mu_hat(&self) -> &Vector3<f64> {
        &self.mu_hat
    }

    pub fn sample_scale(&self) -> f64 {
        self.sample_scale
    }

    /// Draws `μ̃ ~ N(μ̂, s²·B⁻¹)` through the Cholesky factor of `B⁻¹`.
    pub fn sample_weights<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vector3<f64>> {
        let cov = self.b.try_inverse().ok_or(Error::NotPositiveDefinite)?;
        let chol = cov.cholesky().ok_or(Error::NotPositiveDefinite)?;
        let z = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        Ok(self.mu_hat + chol.l() * z * self.sample_scale)
    }

    /// Thompson step: the arm maximizing `⟨φᵢ, μ̃⟩`, exact ties broken
    /// uniformly at random.
    pub fn select<R: Rng + ?Sized>(&self, contexts: &[Context], rng: &mut R) -> Result<usize> {
        if contexts.is_empty() {
            return Err(Error::config("contexts", "must not be empty"));
        }
        let w = self.sample_weights(rng)?;
        Ok(argmax_random_ties(contexts, &w, rng))
    }

    pub fn update(&mut self, phi: &Context, cost: f64) {
        let phi = Vector3::from_column_slice(phi);
        self.b += phi * phi.transpose();
        self.f += phi * cost;
        self.mu_hat = self
            .b
            .cholesky()
            .expect("identity plus outer products stays positive definite")
            .solve(&self.f);
    }
}

fn argmax_random_ties<R: Rng + ?Sized>(contexts: &[Context], w: &Vector3<f64>, rng: &mut R) -> usize {
    let mut best = f64::NEG_INFINITY;
    let mut ties: Vec<usize> = Vec::new();
    for (i, c) in contexts.iter().enumerate() {
        let score = c[0] * w[0] + c[1] * w[1] + c[2] * w[2];
        if score > best {
            best = score;
            ties.clear();
            ties.push(i);
        } else if score == best {
            ties.push(i);
        }
    }
    match ties.len() {
        // Only NaN scores.
        0 => rng.random_range(0..contexts.len()),
        1 => ties[0],
        n => ties[rng.random_range(0..n)],
    }
}
