//! Per-symbol Monte Carlo of the jammed AWGN channel.
//!
//! Noise power is normalized to `σ² = 1` (variance 1/2 per real dimension), so
//! `P_S = 10^(SNR/10)` and `P_J = 10^(JNR/10)`. The jammer is pulsed: each
//! symbol it transmits with probability `ρ` at power `P_J/ρ`, otherwise stays
//! silent, which keeps its average power at `P_J`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::signal::{make_constellation, Scheme, SymbolSource};
use crate::{Error, Result};

/// Phase relation between the jammer and victim carriers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseMode {
    Coherent,
    /// Constant offset in radians, `[0, 2π)`.
    FixedOffset(f64),
    /// Fresh uniform offset drawn once per packet.
    UniformPerPacket,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelParams {
    pub victim_scheme: Scheme,
    pub snr_db: f64,
    pub phase_mode: PhaseMode,
    pub symbols_per_packet: usize,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !self.victim_scheme.is_victim_scheme() {
            return Err(Error::UnsupportedVictim(self.victim_scheme));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::config("channel.snr_db", "must be finite"));
        }
        if self.symbols_per_packet == 0 {
            return Err(Error::config("channel.symbols_per_packet", "must be at least 1"));
        }
        if let PhaseMode::FixedOffset(phi) = self.phase_mode {
            if !(0.0..TAU).contains(&phi) {
                return Err(Error::config(
                    "channel.phase_mode",
                    format!("fixed offset {phi} outside [0, 2π)"),
                ));
            }
        }
        Ok(())
    }

    pub fn signal_power(&self) -> f64 {
        db_to_linear(self.snr_db)
    }
}

/// One arm of the jamming bandit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JammingAction {
    pub scheme: Scheme,
    /// Nominal average JNR; `-inf` switches the jammer off.
    pub jnr_db: f64,
    /// Duty cycle in `(0, 1]`.
    pub rho: f64,
}

impl JammingAction {
    pub fn off() -> Self {
        JammingAction {
            scheme: Scheme::Awgn,
            jnr_db: f64::NEG_INFINITY,
            rho: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::config("action.rho", format!("{} outside (0, 1]", self.rho)));
        }
        if self.jnr_db.is_nan() || self.jnr_db == f64::INFINITY {
            return Err(Error::config("action.jnr_db", "must be finite or -inf"));
        }
        Ok(())
    }

    /// Average jammer power `P_J` (linear, noise-normalized).
    pub fn average_power(&self) -> f64 {
        db_to_linear(self.jnr_db)
    }

    /// Power while the pulse is on, `P_J/ρ`.
    pub fn on_power(&self) -> f64 {
        self.average_power() / self.rho
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketResult {
    pub ser: f64,
    pub packet_error: bool,
    /// Nominal `P_J` of the action that produced the packet.
    pub avg_jnr_linear: f64,
    pub symbols: usize,
    pub symbol_errors: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CostMode {
    #[serde(rename = "SER")]
    Ser,
    #[serde(rename = "PER")]
    Per,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostConfig {
    pub mode: CostMode,
    #[serde(default)]
    pub target: f64,
}

impl CostConfig {
    pub fn ser() -> Self {
        CostConfig {
            mode: CostMode::Ser,
            target: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.target) {
            return Err(Error::config("cost.target", format!("{} outside [0, 1)", self.target)));
        }
        Ok(())
    }
}

/// Jammer output per symbol: silent with probability `1 - ρ`, otherwise a
/// fresh symbol at amplitude `sqrt(P_J/ρ)` rotated by the carrier offset.
#[derive(Debug, Clone)]
pub struct PulsedJammer {
    source: SymbolSource,
    gain: Complex64,
    rho: f64,
}

impl PulsedJammer {
    pub fn new(action: &JammingAction, rotation: Complex64) -> Self {
        PulsedJammer {
            source: SymbolSource::new(action.scheme),
            gain: rotation * action.on_power().sqrt(),
            rho: action.rho,
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        if rng.random::<f64>() < self.rho {
            self.gain * self.source.draw(rng)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// Unrotated jammer output for `count` symbol slots.
pub fn jammer_waveform<R: Rng + ?Sized>(
    action: &JammingAction,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    action.validate()?;
    let jammer = PulsedJammer::new(action, Complex64::new(1.0, 0.0));
    Ok((0..count).map(|_| jammer.sample(rng)).collect())
}

/// Unit phasor for the packet's carrier offset. Draws from `rng` only in
/// `UniformPerPacket` mode.
pub fn packet_rotation<R: Rng + ?Sized>(mode: PhaseMode, rng: &mut R) -> Complex64 {
    match mode {
        PhaseMode::Coherent => Complex64::new(1.0, 0.0),
        PhaseMode::FixedOffset(phi) => Complex64::from_polar(1.0, phi),
        PhaseMode::UniformPerPacket => Complex64::from_polar(1.0, rng.random::<f64>() * TAU),
    }
}

/// Transmits one packet through the jammed channel and counts symbol errors
/// at a minimum-distance receiver.
pub fn simulate_packet<R: Rng + ?Sized>(
    params: &ChannelParams,
    action: &JammingAction,
    rng: &mut R,
) -> Result<PacketResult> {
    params.validate()?;
    action.validate()?;

    let victim = make_constellation(params.victim_scheme)?;
    let signal_gain = params.signal_power().sqrt();
    let rotation = packet_rotation(params.phase_mode, rng);
    let jammer = PulsedJammer::new(action, rotation);

    let n = params.symbols_per_packet;
    let mut errors = 0usize;
    for _ in 0..n {
        let sent = victim.draw_index(rng);
        let mut y = victim.points()[sent] * signal_gain;
        y += jammer.sample(rng);
        let nr: f64 = rng.sample(StandardNormal);
        let ni: f64 = rng.sample(StandardNormal);
        y += Complex64::new(nr * FRAC_1_SQRT_2, ni * FRAC_1_SQRT_2);
        if victim.nearest(y) != sent {
            errors += 1;
        }
    }

    Ok(PacketResult {
        ser: errors as f64 / n as f64,
        packet_error: errors > 0,
        avg_jnr_linear: action.average_power(),
        symbols: n,
        symbol_errors: errors,
    })
}

/// The jammer's per-packet payoff `max(rate - target, 0) / JNR`.
///
/// Larger is better for the jammer; learners maximize it.
pub fn compute_cost(result: &PacketResult, cost: &CostConfig) -> Result<f64> {
    if result.avg_jnr_linear.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::NonPositiveJnr(result.avg_jnr_linear));
    }
    let rate = match cost.mode {
        CostMode::Ser => result.ser,
        CostMode::Per => {
            if result.packet_error {
                1.0
            } else {
                0.0
            }
        }
    };
    Ok((rate - cost.target).max(0.0) / result.avg_jnr_linear)
}
