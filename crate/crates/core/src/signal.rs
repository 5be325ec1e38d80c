//! Unit-energy symbol alphabets and the victim's minimum-distance receiver.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Signaling scheme of a victim or jammer.
///
/// `Awgn` is only meaningful for the jammer: it transmits circularly
/// symmetric complex Gaussian symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "BPSK")]
    Bpsk,
    #[serde(rename = "QPSK")]
    Qpsk,
    #[serde(rename = "AWGN")]
    Awgn,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Bpsk, Scheme::Qpsk, Scheme::Awgn];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Bpsk => "BPSK",
            Scheme::Qpsk => "QPSK",
            Scheme::Awgn => "AWGN",
        }
    }

    pub fn is_victim_scheme(self) -> bool {
        matches!(self, Scheme::Bpsk | Scheme::Qpsk)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "BPSK" => Ok(Scheme::Bpsk),
            "QPSK" => Ok(Scheme::Qpsk),
            "AWGN" => Ok(Scheme::Awgn),
            _ => Err(format!("unknown scheme `{s}` (expected BPSK, QPSK or AWGN)")),
        }
    }
}

/// A discrete constellation normalized to unit average energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    scheme: Scheme,
    points: Vec<Complex64>,
    d_min: f64,
}

impl Constellation {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Constellation order `M`.
    pub fn order(&self) -> usize {
        self.points.len()
    }

    /// Minimum pairwise Euclidean distance.
    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    /// Index of the closest point; exact ties go to the lowest index.
    #[inline]
    pub fn nearest(&self, y: Complex64) -> usize {
        let mut best = 0;
        let mut best_dist = (y - self.points[0]).norm_sqr();
        for (k, p) in self.points.iter().enumerate().skip(1) {
            let d = (y - p).norm_sqr();
            if d < best_dist {
                best = k;
                best_dist = d;
            }
        }
        best
    }

    /// Uniformly random point index.
    #[inline]
    pub fn draw_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.points.len())
    }
}

/// Builds the canonical alphabet for a discrete scheme.
pub fn make_constellation(scheme: Scheme) -> Result<Constellation> {
    let points = match scheme {
        Scheme::Bpsk => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        Scheme::Qpsk => vec![
            Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
            Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        ],
        Scheme::Awgn => return Err(Error::NotDiscrete(scheme)),
    };
    let d_min = min_pairwise_distance(&points);
    Ok(Constellation {
        scheme,
        points,
        d_min,
    })
}

fn min_pairwise_distance(points: &[Complex64]) -> f64 {
    let mut d = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.min((a - b).norm());
        }
    }
    d
}

/// Source of unit-energy symbols for any scheme, including Gaussian.
#[derive(Debug, Clone)]
pub enum SymbolSource {
    Discrete(Constellation),
    Gaussian,
}

impl SymbolSource {
    pub fn new(scheme: Scheme) -> Self {
        match scheme {
            Scheme::Awgn => SymbolSource::Gaussian,
            // Bpsk and Qpsk always build.
            s => SymbolSource::Discrete(make_constellation(s).expect("discrete scheme")),
        }
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match self {
            SymbolSource::Discrete(c) => c.points[c.draw_index(rng)],
            SymbolSource::Gaussian => complex_normal(rng),
        }
    }
}

/// Circularly symmetric complex Gaussian with `E[|z|^2] = 1`.
#[inline]
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Draws `count` i.i.d. unit-energy symbols.
pub fn draw_symbols<R: Rng + ?Sized>(scheme: Scheme, count: usize, rng: &mut R) -> Vec<Complex64> {
    let source = SymbolSource::new(scheme);
    (0..count).map(|_| source.draw(rng)).collect()
}

/// Minimum-distance decisions for each received sample.
pub fn detect(constellation: &Constellation, received: &[Complex64]) -> Vec<usize> {
    received.iter().map(|&y| constellation.nearest(y)).collect()
}
