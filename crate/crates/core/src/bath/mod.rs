//! Thermal bosonic baths and the transforms of their correlation functions.
//!
//! For a bath at inverse temperature `beta` with spectral density `J`, the
//! one-sided Fourier transform of the correlation function splits as
//! `Gamma(w) = gamma(w) / 2 + i S(w)`, where
//!
//! ```text
//! gamma(w) = 2 pi J(w) (N(w) + 1)        w > 0
//! gamma(w) = 2 pi J(|w|) N(|w|)          w < 0
//! S(w)     = (1 / 2 pi) PV int gamma(v) / (w - v) dv
//! ```
//!
//! with `N(w) = 1 / (exp(beta w) - 1)`.

pub mod quadrature;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::C64;

/// Spectral density of a bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralDensity {
    /// `J(w) = w Omega^2 / (Omega^2 + w^2)`
    Ohmic { cutoff: f64 },
}

impl SpectralDensity {
    pub fn ohmic(cutoff: f64) -> Self {
        SpectralDensity::Ohmic { cutoff }
    }

    /// `J(w)` for `w >= 0`.
    pub fn density(&self, omega: f64) -> f64 {
        match *self {
            SpectralDensity::Ohmic { cutoff } => omega * cutoff * cutoff / (cutoff * cutoff + omega * omega),
        }
    }

    /// `lim_{w -> 0} J(w) / w`; fixes the zero-frequency rate `2 pi slope / beta`.
    pub fn low_frequency_slope(&self) -> f64 {
        match *self {
            SpectralDensity::Ohmic { .. } => 1.0,
        }
    }

    pub fn cutoff(&self) -> f64 {
        match *self {
            SpectralDensity::Ohmic { cutoff } => cutoff,
        }
    }

    /// Decay time of the bath autocorrelation function, `max(1/Omega, beta/2pi)`.
    pub fn correlation_time(&self, beta: f64) -> f64 {
        (1.0 / self.cutoff()).max(beta / (2.0 * PI))
    }

    fn validate(&self) -> Result<()> {
        let cutoff = self.cutoff();
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                reason: format!("must be positive and finite, got {cutoff}"),
            });
        }
        Ok(())
    }
}

/// Which qubits a bath touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attachment {
    Common,
    Local1,
    Local2,
}

impl Attachment {
    pub fn label(&self) -> &'static str {
        match self {
            Attachment::Common => "common",
            Attachment::Local1 => "local1",
            Attachment::Local2 => "local2",
        }
    }
}

/// A thermal bath and its couplings to the qubits.
///
/// Effective couplings are `weight * mu`; `gx[q]` couples through
/// `sigma_{q+1}^x` (dissipation) and `gz[q]` through `sigma_{q+1}^z`
/// (dephasing).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub attachment: Attachment,
    pub beta: f64,
    pub spectral: SpectralDensity,
    pub gx: [f64; 2],
    pub gz: [f64; 2],
    pub mu: f64,
    /// Model dissipation and dephasing as uncorrelated baths: x-z
    /// correlations are zeroed.
    #[serde(default)]
    pub split: bool,
}

impl BathSpec {
    pub fn new(attachment: Attachment, beta: f64, spectral: SpectralDensity, mu: f64) -> Self {
        BathSpec {
            attachment,
            beta,
            spectral,
            gx: [0.0; 2],
            gz: [0.0; 2],
            mu,
            split: false,
        }
    }

    pub fn with_dissipation(mut self, gx: [f64; 2]) -> Self {
        self.gx = gx;
        self
    }

    pub fn with_dephasing(mut self, gz: [f64; 2]) -> Self {
        self.gz = gz;
        self
    }

    pub fn split(mut self, split: bool) -> Self {
        self.split = split;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("must be positive and finite, got {}", self.beta),
            });
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: format!("must be positive and finite, got {}", self.mu),
            });
        }
        self.spectral.validate()?;
        if self.gx.iter().chain(&self.gz).any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "coupling weights must be finite".into(),
            });
        }
        let detached = match self.attachment {
            Attachment::Common => None,
            Attachment::Local1 => Some(1),
            Attachment::Local2 => Some(0),
        };
        if let Some(q) = detached {
            if self.gx[q] != 0.0 || self.gz[q] != 0.0 {
                return Err(Error::InvalidParameter {
                    name: "weights",
                    reason: format!(
                        "{} bath has nonzero weight on qubit {}",
                        self.attachment.label(),
                        q + 1
                    ),
                });
            }
        }
        Ok(())
    }

    /// Effective coupling of `channel` (weight times `mu`).
    pub fn coupling(&self, channel: crate::jumps::Channel) -> f64 {
        use crate::jumps::Channel::*;
        let w = match channel {
            X1 => self.gx[0],
            X2 => self.gx[1],
            Z1 => self.gz[0],
            Z2 => self.gz[1],
        };
        w * self.mu
    }

    /// Whether two channels of this bath are correlated.
    pub fn correlated(&self, a: crate::jumps::Channel, b: crate::jumps::Channel) -> bool {
        !(self.split && a.is_dissipative() != b.is_dissipative())
    }

    pub fn is_silent(&self) -> bool {
        self.gx.iter().chain(&self.gz).all(|&w| w == 0.0)
    }
}

/// Bath and system relaxation time scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovCheck {
    pub tau_bath: f64,
    pub tau_relax: f64,
}

impl MarkovCheck {
    /// The Markov approximation is flagged once `tau_B >= 0.01 tau_R`.
    pub fn is_suspect(&self) -> bool {
        self.tau_bath >= 0.01 * self.tau_relax
    }
}

/// Compare the bath correlation time with `tau_R = mu^-2`, warning when
/// the separation of time scales is poor.
pub fn markov_check(spec: &BathSpec) -> MarkovCheck {
    let check = MarkovCheck {
        tau_bath: spec.spectral.correlation_time(spec.beta),
        tau_relax: spec.mu.powi(-2),
    };
    if check.is_suspect() {
        log::warn!(
            "{} bath: correlation time {:.3e} is not small against the relaxation time {:.3e}",
            spec.attachment.label(),
            check.tau_bath,
            check.tau_relax
        );
    }
    check
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("must be positive and finite, got {beta}"),
        });
    }
    Ok(())
}

fn rate(sd: &SpectralDensity, beta: f64, omega: f64) -> f64 {
    if omega > 0.0 {
        // N + 1 = 1 / (1 - exp(-beta w))
        2.0 * PI * sd.density(omega) / -(-beta * omega).exp_m1()
    } else if omega < 0.0 {
        2.0 * PI * sd.density(-omega) / (-beta * omega).exp_m1()
    } else {
        2.0 * PI * sd.low_frequency_slope() / beta
    }
}

/// Transition rate `gamma(omega)`; positive frequencies are emission.
pub fn gamma_at(sd: &SpectralDensity, beta: f64, omega: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(rate(sd, beta, omega))
}

/// Default absolute tolerance of the principal-value quadrature.
pub const LAMB_TOLERANCE: f64 = 1e-8;
const MAX_SEGMENTS: usize = 4000;

/// Lamb-shift function `S(omega)` by principal-value quadrature.
///
/// The pole is handled by pairing points symmetrically around it on
/// `[omega - a, omega + a]`; the two tails are mapped onto finite intervals
/// with `v = edge +- L t / (1 - t)`.
pub fn lamb_shift_at(sd: &SpectralDensity, beta: f64, omega: f64, tol: f64) -> Result<f64> {
    check_beta(beta)?;
    let gamma = |v: f64| rate(sd, beta, v);
    let half_width = 1.0_f64.max(0.5 * omega.abs());
    let scale = sd.cutoff().max(1.0 / beta);
    let budget = tol / 3.0;

    let core = quadrature::integrate(
        |u| {
            if u == 0.0 {
                0.0
            } else {
                (gamma(omega - u) - gamma(omega + u)) / u
            }
        },
        0.0,
        half_width,
        budget,
        MAX_SEGMENTS,
    );
    let right_edge = omega + half_width;
    let right = quadrature::integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let v = right_edge + scale * t / s;
            gamma(v) / (omega - v) * scale / (s * s)
        },
        0.0,
        1.0,
        budget,
        MAX_SEGMENTS,
    );
    let left_edge = omega - half_width;
    let left = quadrature::integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let v = left_edge - scale * t / s;
            gamma(v) / (omega - v) * scale / (s * s)
        },
        0.0,
        1.0,
        budget,
        MAX_SEGMENTS,
    );
    let estimate = (core.error + right.error + left.error) / (2.0 * PI);
    if !(estimate <= tol) {
        return Err(Error::QuadratureNonConvergence {
            omega,
            estimate,
            tolerance: tol,
        });
    }
    Ok((core.value + right.value + left.value) / (2.0 * PI))
}

/// Options for [`correlation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationOptions {
    pub lamb_shift: bool,
    pub tolerance: f64,
}

impl Default for CorrelationOptions {
    fn default() -> Self {
        CorrelationOptions {
            lamb_shift: true,
            tolerance: LAMB_TOLERANCE,
        }
    }
}

/// Memoized `gamma`, `S` and `Gamma` for one bath.
#[derive(Debug)]
pub struct BathCorrelation {
    spectral: SpectralDensity,
    beta: f64,
    options: CorrelationOptions,
    cache: RwLock<HashMap<u64, C64>>,
}

impl Clone for BathCorrelation {
    fn clone(&self) -> Self {
        let cache = self.cache.read().expect("cache lock poisoned").clone();
        BathCorrelation {
            spectral: self.spectral,
            beta: self.beta,
            options: self.options,
            cache: RwLock::new(cache),
        }
    }
}

impl BathCorrelation {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn spectral(&self) -> SpectralDensity {
        self.spectral
    }

    pub fn lamb_shift_enabled(&self) -> bool {
        self.options.lamb_shift
    }

    pub fn gamma(&self, omega: f64) -> f64 {
        rate(&self.spectral, self.beta, omega)
    }

    pub fn lamb(&self, omega: f64) -> Result<f64> {
        Ok(self.big_gamma(omega)?.im)
    }

    /// `Gamma(omega) = gamma(omega) / 2 + i S(omega)`.
    pub fn big_gamma(&self, omega: f64) -> Result<C64> {
        // -0.0 and 0.0 share a cache slot
        let key = (omega + 0.0).to_bits();
        if let Some(v) = self.cache.read().expect("cache lock poisoned").get(&key) {
            return Ok(*v);
        }
        let shift = if self.options.lamb_shift {
            lamb_shift_at(&self.spectral, self.beta, omega, self.options.tolerance)?
        } else {
            0.0
        };
        let value = C64::new(0.5 * self.gamma(omega), shift);
        self.cache
            .write()
            .expect("cache lock poisoned")
            .insert(key, value);
        Ok(value)
    }
}

/// Correlation transforms of a bath.
pub fn correlation(spec: &BathSpec, options: CorrelationOptions) -> Result<BathCorrelation> {
    spec.validate()?;
    Ok(BathCorrelation {
        spectral: spec.spectral,
        beta: spec.beta,
        options,
        cache: RwLock::new(HashMap::new()),
    })
}
