//! Closed-form symbol error probabilities under jamming and the exhaustive
//! search for the best pulsed jammer.
//!
//! Both victim schemes decompose into two independent 2-PAM decisions (BPSK
//! uses only the in-phase one). With unit noise power, the error probability
//! of a 2-PAM decision with half-distance `a` and a deterministic jammer
//! offset `b` along that axis, averaged over the victim's sign, is
//! `¼·[erfc(a + b) + erfc(a − b)]`. The offset is the projection of the
//! rotated jammer symbol `e^{iφ}·j` on the axis.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::signal::{make_constellation, Constellation, Scheme};
use crate::{Error, Result};

/// First phase-quadrature order tried by [`pe_phase_averaged`].
pub const MIN_PHASE_NODES: usize = 256;
/// Largest phase-quadrature order before giving up.
pub const MAX_PHASE_NODES: usize = 1 << 16;
/// Relative agreement required between successive node doublings.
pub const PHASE_REL_TOL: f64 = 1e-6;

/// Relative margin below which two strategies count as tied.
const TIE_REL_TOL: f64 = 1e-9;

/// Complementary error function, accurate to a few ulps.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticQuery {
    pub victim_scheme: Scheme,
    pub jammer_scheme: Scheme,
    pub snr_linear: f64,
    pub jnr_linear: f64,
    pub rho: f64,
}

impl AnalyticQuery {
    pub fn validate(&self) -> Result<()> {
        if !self.victim_scheme.is_victim_scheme() {
            return Err(Error::UnsupportedVictim(self.victim_scheme));
        }
        if !(self.snr_linear > 0.0 && self.snr_linear.is_finite()) {
            return Err(Error::config("snr_linear", format!("{} is not positive", self.snr_linear)));
        }
        if !(self.jnr_linear >= 0.0 && self.jnr_linear.is_finite()) {
            return Err(Error::config("jnr_linear", format!("{} is negative", self.jnr_linear)));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::config("rho", format!("{} outside (0, 1]", self.rho)));
        }
        Ok(())
    }

    pub fn with_jnr(&self, jnr_linear: f64) -> Self {
        AnalyticQuery { jnr_linear, ..*self }
    }
}

/// Half the minimum distance at the receiver, in noise-normalized units.
fn half_distance(victim: &Constellation, snr_linear: f64) -> f64 {
    snr_linear.sqrt() * victim.d_min() / 2.0
}

/// Sign-averaged 2-PAM error with jammer offset `b`.
#[inline]
fn pam2_error(a: f64, b: f64) -> f64 {
    0.25 * (erfc(a + b) + erfc(a - b))
}

fn combine(victim: Scheme, p_i: f64, p_q: f64) -> f64 {
    match victim {
        Scheme::Bpsk => p_i,
        // 1 − (1 − p_I)(1 − p_Q), arranged to keep precision for tiny p.
        _ => p_i + p_q - p_i * p_q,
    }
}

/// Error probability for a coherent jammer symbol `j` (already scaled by the
/// caller's choice of `q.jnr_linear`), using its real and imaginary parts
/// directly as the in-phase and quadrature offsets.
pub fn pe_coherent(q: &AnalyticQuery, j: Complex64) -> Result<f64> {
    q.validate()?;
    let victim = make_constellation(q.victim_scheme)?;
    let a = half_distance(&victim, q.snr_linear);
    let amp = q.jnr_linear.sqrt();
    Ok(combine(
        q.victim_scheme,
        pam2_error(a, amp * j.re),
        pam2_error(a, amp * j.im),
    ))
}

/// Error probability for a realized jammer symbol `j` arriving with carrier
/// offset `phi`, at instantaneous jammer power `q.jnr_linear`.
///
/// In-phase offset is `√JNR·(Re j·cos φ − Im j·sin φ)`, quadrature offset is
/// `√JNR·(Im j·cos φ + Re j·sin φ)`.
pub fn pe_given_phase(q: &AnalyticQuery, j: Complex64, phi: f64) -> Result<f64> {
    q.validate()?;
    let victim = make_constellation(q.victim_scheme)?;
    let a = half_distance(&victim, q.snr_linear);
    Ok(pe_rotated(q.victim_scheme, a, q.jnr_linear.sqrt(), j, Complex64::from_polar(1.0, phi)))
}

#[inline]
fn pe_rotated(victim: Scheme, a: f64, amp: f64, j: Complex64, rotation: Complex64) -> f64 {
    let r = rotation * j;
    combine(victim, pam2_error(a, amp * r.re), pam2_error(a, amp * r.im))
}

/// Evaluates the per-phase expectation over the jammer law and pulsing.
struct PhaseIntegrand {
    victim: Scheme,
    a: f64,
    rho: f64,
    on_amp: f64,
    jammer: JammerLaw,
    p_off: f64,
}

enum JammerLaw {
    Points(Vec<Complex64>),
    /// Circular Gaussian: rotation-invariant, closed form per axis.
    Gaussian(f64),
}

impl PhaseIntegrand {
    fn new(q: &AnalyticQuery) -> Result<Self> {
        q.validate()?;
        let victim = make_constellation(q.victim_scheme)?;
        let a = half_distance(&victim, q.snr_linear);
        let on_power = q.jnr_linear / q.rho;
        let jammer = match q.jammer_scheme {
            Scheme::Awgn => {
                // An axis offset ~ N(0, P/2) adds to noise ~ N(0, 1/2).
                let p = 0.5 * erfc(a / (1.0 + on_power).sqrt());
                JammerLaw::Gaussian(combine(q.victim_scheme, p, p))
            }
            s => JammerLaw::Points(make_constellation(s)?.points().to_vec()),
        };
        let p_off = pe_rotated(q.victim_scheme, a, 0.0, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Ok(PhaseIntegrand {
            victim: q.victim_scheme,
            a,
            rho: q.rho,
            on_amp: on_power.sqrt(),
            jammer,
            p_off,
        })
    }

    fn eval(&self, phi: f64) -> f64 {
        let p_on = match &self.jammer {
            JammerLaw::Gaussian(p) => *p,
            JammerLaw::Points(points) => {
                let rotation = Complex64::from_polar(1.0, phi);
                points
                    .iter()
                    .map(|&j| pe_rotated(self.victim, self.a, self.on_amp, j, rotation))
                    .sum::<f64>()
                    / points.len() as f64
            }
        };
        if self.rho >= 1.0 {
            p_on
        } else {
            self.rho * p_on + (1.0 - self.rho) * self.p_off
        }
    }
}

/// Expected SER at a fixed carrier offset, averaged over the jammer's symbol
/// law and its on/off pulsing (`q.jnr_linear` is the average power).
pub fn pe_at_phase(q: &AnalyticQuery, phi: f64) -> Result<f64> {
    Ok(PhaseIntegrand::new(q)?.eval(phi))
}

/// Expected SER with the carrier offset uniform on `[0, 2π)`.
///
/// The integrand is smooth and periodic, so the trapezoid rule is used,
/// doubling the node count from [`MIN_PHASE_NODES`] until two successive
/// estimates agree to [`PHASE_REL_TOL`].
pub fn pe_phase_averaged(q: &AnalyticQuery) -> Result<f64> {
    let integrand = PhaseIntegrand::new(q)?;
    let mut nodes = MIN_PHASE_NODES;
    let mut sum: f64 = (0..nodes).map(|k| integrand.eval(TAU * k as f64 / nodes as f64)).sum();
    let mut estimate = sum / nodes as f64;
    while nodes < MAX_PHASE_NODES {
        let fine_nodes = 2 * nodes;
        sum += (0..nodes)
            .map(|k| integrand.eval(TAU * (2 * k + 1) as f64 / fine_nodes as f64))
            .sum::<f64>();
        let fine = sum / fine_nodes as f64;
        if (fine - estimate).abs() <= PHASE_REL_TOL * fine.abs() {
            return Ok(fine);
        }
        if nodes * 2 >= MAX_PHASE_NODES {
            return Err(Error::QuadratureNonConvergence {
                nodes,
                fine_nodes,
                coarse: estimate,
                fine,
            });
        }
        estimate = fine;
        nodes = fine_nodes;
    }
    unreachable!("node doubling always terminates inside the loop")
}

/// Gauss–Hermite rule for `E[f(X)]`, `X ~ N(0, 1/2)`: returns nodes and
/// weights summing to one (Golub–Welsch).
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let jacobi = DMatrix::from_fn(order, order, |r, c| {
        if r + 1 == c || c + 1 == r {
            (r.max(c) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut rule: Vec<(f64, f64)> = (0..order)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    rule.sort_by(|x, y| x.0.total_cmp(&y.0));
    rule.into_iter().unzip()
}

/// [`pe_at_phase`] for a Gaussian jammer, integrating its in-phase and
/// quadrature components by tensor Gauss–Hermite quadrature instead of the
/// closed form. Accurate while the on-amplitude is moderate.
pub fn pe_at_phase_gauss_hermite(q: &AnalyticQuery, phi: f64, order: usize) -> Result<f64> {
    q.validate()?;
    let victim = make_constellation(q.victim_scheme)?;
    let a = half_distance(&victim, q.snr_linear);
    let on_amp = (q.jnr_linear / q.rho).sqrt();
    let rotation = Complex64::from_polar(1.0, phi);
    let (x, w) = gauss_hermite(order);
    let mut p_on = 0.0;
    for (xr, wr) in x.iter().zip(&w) {
        for (xi, wi) in x.iter().zip(&w) {
            p_on += wr * wi * pe_rotated(q.victim_scheme, a, on_amp, Complex64::new(*xr, *xi), rotation);
        }
    }
    let p_off = pe_rotated(q.victim_scheme, a, 0.0, Complex64::new(0.0, 0.0), rotation);
    Ok(q.rho * p_on + (1.0 - q.rho) * p_off)
}

/// `{1/k, 2/k, …, 1}`.
pub fn rho_grid(k: usize) -> Vec<f64> {
    (1..=k).map(|i| i as f64 / k as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalStrategy {
    pub jammer_scheme: Scheme,
    pub rho_star: f64,
    pub expected_ser: f64,
}

impl OptimalStrategy {
    /// Instantaneous on-power for an average power `jnr_linear`.
    pub fn on_power(&self, jnr_linear: f64) -> f64 {
        jnr_linear / self.rho_star
    }
}

/// Exhaustive search over (scheme, ρ) for the largest phase-averaged SER.
///
/// Ties within a relative `1e-9` go to the smaller ρ, then to the earlier
/// scheme in `schemes`. BPSK and QPSK jammers are exactly tied against a
/// BPSK victim (a uniform phase absorbs the 45° rotation between them).
pub fn optimal_pulsed_strategy(
    victim: Scheme,
    snr_linear: f64,
    jnr_linear: f64,
    rho_grid: &[f64],
    schemes: &[Scheme],
) -> Result<OptimalStrategy> {
    search_strategy(victim, snr_linear, jnr_linear, rho_grid, schemes, pe_phase_averaged)
}

/// Same search as [`optimal_pulsed_strategy`] for a known, fixed carrier offset.
pub fn optimal_pulsed_strategy_at_phase(
    victim: Scheme,
    snr_linear: f64,
    jnr_linear: f64,
    rho_grid: &[f64],
    schemes: &[Scheme],
    phi: f64,
) -> Result<OptimalStrategy> {
    search_strategy(victim, snr_linear, jnr_linear, rho_grid, schemes, |q| pe_at_phase(q, phi))
}

fn search_strategy(
    victim: Scheme,
    snr_linear: f64,
    jnr_linear: f64,
    rho_grid: &[f64],
    schemes: &[Scheme],
    objective: impl Fn(&AnalyticQuery) -> Result<f64>,
) -> Result<OptimalStrategy> {
    if rho_grid.is_empty() {
        return Err(Error::config("rho_grid", "must not be empty"));
    }
    if schemes.is_empty() {
        return Err(Error::config("schemes", "must not be empty"));
    }
    let mut rhos = rho_grid.to_vec();
    rhos.sort_by(f64::total_cmp);

    let mut best: Option<OptimalStrategy> = None;
    for &rho in &rhos {
        for &scheme in schemes {
            let q = AnalyticQuery {
                victim_scheme: victim,
                jammer_scheme: scheme,
                snr_linear,
                jnr_linear,
                rho,
            };
            let ser = objective(&q)?;
            let better = match &best {
                None => true,
                Some(b) => ser > b.expected_ser + TIE_REL_TOL * b.expected_ser.abs(),
            };
            if better {
                best = Some(OptimalStrategy {
                    jammer_scheme: scheme,
                    rho_star: rho,
                    expected_ser: ser,
                });
            }
        }
    }
    Ok(best.expect("grids are non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// erfc by composite Simpson quadrature of `2/√π · e^{-t²}`, independent of libm.
    fn erfc_oracle(x: f64) -> f64 {
        let upper = x.max(0.0) + 9.0;
        let n = 200_000;
        let h = (upper - x) / n as f64;
        let f = |t: f64| (-t * t).exp();
        let mut s = f(x) + f(upper);
        for k in 1..n {
            let t = x + k as f64 * h;
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(t);
        }
        s * h / 3.0 * 2.0 / std::f64::consts::PI.sqrt()
    }

    fn query(victim: Scheme, jammer: Scheme, snr_db: f64, jnr_db: f64, rho: f64) -> AnalyticQuery {
        AnalyticQuery {
            victim_scheme: victim,
            jammer_scheme: jammer,
            snr_linear: 10f64.powf(snr_db / 10.0),
            jnr_linear: 10f64.powf(jnr_db / 10.0),
            rho,
        }
    }

    #[test]
    fn erfc_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert!(erfc(10.0) < 1e-40);
        assert!((erfc(1.0) - 0.157_299_207_050_285).abs() < 1e-14);
    }

    #[test]
    fn erfc_matches_quadrature_oracle() {
        for k in 0..=80 {
            let x = -10.0 + 0.25 * k as f64;
            let (got, want) = (erfc(x), erfc_oracle(x));
            assert!((got - want).abs() <= 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn unjammed_bpsk_at_zero_db() {
        let q = query(Scheme::Bpsk, Scheme::Bpsk, 0.0, f64::NEG_INFINITY, 1.0);
        let p = pe_given_phase(&q, Complex64::new(0.0, 0.0), 0.3).unwrap();
        assert!((p - 0.5 * erfc_oracle(1.0)).abs() < 1e-12);
        assert!((p - 0.078_65).abs() < 1e-5);
    }

    #[test]
    fn pure_noise_limit_is_one_half() {
        let q = AnalyticQuery {
            snr_linear: 1e-300,
            ..query(Scheme::Bpsk, Scheme::Bpsk, 0.0, 0.0, 1.0)
        };
        let p = pe_given_phase(&q, Complex64::new(0.0, 0.0), 0.0).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quadrature_jamming_is_invisible_to_bpsk() {
        let q = query(Scheme::Bpsk, Scheme::Bpsk, 20.0, 20.0, 1.0);
        let jammed = pe_given_phase(&q, Complex64::new(1.0, 0.0), std::f64::consts::FRAC_PI_2).unwrap();
        let clean = pe_given_phase(&q, Complex64::new(0.0, 0.0), 0.0).unwrap();
        assert!((jammed - clean).abs() <= 1e-15 + 1e-9 * clean);
    }

    #[test]
    fn zero_jnr_equals_unjammed_for_every_rho() {
        for victim in [Scheme::Bpsk, Scheme::Qpsk] {
            let clean = pe_coherent(&query(victim, Scheme::Bpsk, 3.0, 0.0, 1.0).with_jnr(0.0), Complex64::new(0.0, 0.0))
                .unwrap();
            for jammer in Scheme::ALL {
                for rho in [0.05, 0.5, 1.0] {
                    let q = query(victim, jammer, 3.0, f64::NEG_INFINITY, rho);
                    let p = pe_phase_averaged(&q).unwrap();
                    assert!((p - clean).abs() <= 1e-14, "{victim}/{jammer} rho={rho}: {p} vs {clean}");
                }
            }
        }
    }

    #[test]
    fn coherent_formula_equals_zero_phase() {
        for victim in [Scheme::Bpsk, Scheme::Qpsk] {
            let q = query(victim, Scheme::Qpsk, 9.0, 11.0, 1.0);
            for j in [Complex64::new(0.3, -0.9), Complex64::new(-1.2, 0.4)] {
                assert_eq!(pe_coherent(&q, j).unwrap(), pe_given_phase(&q, j, 0.0).unwrap());
            }
        }
    }

    #[test]
    fn gaussian_jammer_closed_form_matches_gauss_hermite() {
        for victim in [Scheme::Bpsk, Scheme::Qpsk] {
            for (snr_db, jnr_db, rho) in [(6.0, 3.0, 1.0), (10.0, 8.0, 0.5), (3.0, 0.0, 0.3)] {
                let q = query(victim, Scheme::Awgn, snr_db, jnr_db, rho);
                let closed = pe_at_phase(&q, 1.1).unwrap();
                let gh = pe_at_phase_gauss_hermite(&q, 1.1, 80).unwrap();
                assert!((closed - gh).abs() <= 1e-7 * closed, "{victim} {snr_db}/{jnr_db}: {closed} vs {gh}");
            }
        }
    }

    #[test]
    fn gauss_hermite_moments() {
        let (x, w) = gauss_hermite(20);
        let m0: f64 = w.iter().sum();
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m0 - 1.0).abs() < 1e-12);
        assert!((m2 - 0.5).abs() < 1e-12);
        assert!((m4 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn phase_average_is_converged() {
        // Doubling the trapezoid order from the returned estimate stays within tolerance.
        let q = query(Scheme::Bpsk, Scheme::Bpsk, 20.0, 10.0, 0.06);
        let p = pe_phase_averaged(&q).unwrap();
        let n = 4096;
        let direct: f64 = (0..n).map(|k| pe_at_phase(&q, TAU * k as f64 / n as f64).unwrap()).sum::<f64>() / n as f64;
        assert!((p - direct).abs() <= 1e-6 * direct);
    }

    #[test]
    fn bpsk_vs_bpsk_constant_power_regression() {
        // Frozen from a 50-digit mpmath evaluation of the same phase integral.
        let q = query(Scheme::Bpsk, Scheme::Bpsk, 20.0, 10.0, 1.0);
        let p = pe_phase_averaged(&q).unwrap();
        assert!((p / BPSK_BPSK_20_10_RHO1 - 1.0).abs() < 1e-6, "{p:e}");
    }

    const BPSK_BPSK_20_10_RHO1: f64 = 1.219_039_175_772_713_4e-23;

    #[test]
    fn rotation_of_the_jammer_alphabet_is_absorbed() {
        // A QPSK jammer is a BPSK jammer rotated by 45° and scaled per axis; with
        // a uniform phase this makes them equivalent against BPSK.
        for rho in [0.04, 0.3, 1.0] {
            let b = pe_phase_averaged(&query(Scheme::Bpsk, Scheme::Bpsk, 15.0, 9.0, rho)).unwrap();
            let q = pe_phase_averaged(&query(Scheme::Bpsk, Scheme::Qpsk, 15.0, 9.0, rho)).unwrap();
            assert!((b - q).abs() <= 1e-9 * b, "rho {rho}: {b} vs {q}");
        }
    }

    #[test]
    fn optimum_conserves_power_and_handles_degenerate_grids() {
        let snr = 100.0;
        let jnr = 10.0;
        let s = optimal_pulsed_strategy(Scheme::Bpsk, snr, jnr, &[1.0], &Scheme::ALL).unwrap();
        assert_eq!(s.rho_star, 1.0);
        let s = optimal_pulsed_strategy(Scheme::Bpsk, snr, jnr, &rho_grid(100), &Scheme::ALL).unwrap();
        assert!((s.on_power(jnr) * s.rho_star - jnr).abs() < 1e-12);
        assert!(optimal_pulsed_strategy(Scheme::Bpsk, snr, jnr, &[], &Scheme::ALL).is_err());
        assert!(optimal_pulsed_strategy(Scheme::Bpsk, snr, jnr, &[0.5], &[]).is_err());
    }

    #[test]
    fn bpsk_optimum_snr20_jnr10() {
        let s = optimal_pulsed_strategy(Scheme::Bpsk, 100.0, 10.0, &rho_grid(100), &Scheme::ALL).unwrap();
        assert_eq!(s.jammer_scheme, Scheme::Bpsk);
        // Independent 40-digit mpmath sweep over the same grid: ρ* = 0.06, SER 0.0129830800401136.
        assert!((s.rho_star - 0.06).abs() < 1e-12, "{s:?}");
        assert!((s.expected_ser - 0.012_983_080_040_113_6).abs() < 1e-8, "{s:?}");
    }

    proptest! {
        #[test]
        fn probabilities_are_bounded(
            qpsk in any::<bool>(), snr_db in -10.0f64..30.0, jnr_db in -10.0f64..30.0,
            re in -2.0f64..2.0, im in -2.0f64..2.0, phi in 0.0f64..TAU
        ) {
            let victim = if qpsk { Scheme::Qpsk } else { Scheme::Bpsk };
            let q = query(victim, Scheme::Bpsk, snr_db, jnr_db, 1.0);
            let p = pe_given_phase(&q, Complex64::new(re, im), phi).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }

        #[test]
        fn aligned_jamming_is_monotone_in_power(qpsk in any::<bool>(), snr_db in 0.0f64..25.0, lo in 0.0f64..50.0, extra in 0.0f64..50.0) {
            // A real jammer symbol opposing the signal at φ = 0.
            let victim = if qpsk { Scheme::Qpsk } else { Scheme::Bpsk };
            let base = query(victim, Scheme::Bpsk, snr_db, 0.0, 1.0);
            let p_lo = pe_given_phase(&base.with_jnr(lo), Complex64::new(-1.0, 0.0), 0.0).unwrap();
            let p_hi = pe_given_phase(&base.with_jnr(lo + extra), Complex64::new(-1.0, 0.0), 0.0).unwrap();
            prop_assert!(p_hi >= p_lo - 1e-15);
        }
    }
}
