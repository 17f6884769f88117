//! Random network realizations: log-distance path loss with lognormal
//! shadowing for the large-scale gain, Rayleigh fading on top.
//!
//! A Rayleigh-faded amplitude is equivalent to an exponentially distributed
//! power gain, so each link gain is drawn as `Exp(1) * 10^(-PL(d)/10)` with
//! a fresh shadowing term inside `PL(d)`. Shadowing is frozen per (user,
//! realization): it models the environment, not per-slot dynamics.

use alloc::vec::Vec;
use core::fmt;

use rand::distributions::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Normal};
use serde::{Deserialize, Serialize};

use crate::model::{harvest_rate, max_rate, snr_coefficient, InvalidParam, SystemParams, UserParams};

/// Log-distance path loss parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossParams {
    /// Reference distance, meters.
    pub reference_distance: f64,
    /// Path loss at the reference distance, dB.
    pub reference_loss_db: f64,
    /// Path loss exponent.
    pub exponent: f64,
    /// Shadowing standard deviation, dB.
    pub shadowing_sigma_db: f64,
}

impl PathLossParams {
    pub fn validate(&self) -> Vec<InvalidParam> {
        let mut v = Vec::new();
        if !(self.reference_distance > 0.0) {
            v.push(InvalidParam {
                field: "path_loss.reference_distance",
                reason: alloc::format!("must be > 0, got {}", self.reference_distance),
            });
        }
        if !(self.exponent > 0.0) {
            v.push(InvalidParam {
                field: "path_loss.exponent",
                reason: alloc::format!("must be > 0, got {}", self.exponent),
            });
        }
        if !(self.shadowing_sigma_db >= 0.0) {
            v.push(InvalidParam {
                field: "path_loss.shadowing_sigma_db",
                reason: alloc::format!("must be >= 0, got {}", self.shadowing_sigma_db),
            });
        }
        v
    }
}

/// Rule for drawing a user's initial battery energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatteryModel {
    /// Every user starts with the same energy, joules.
    Constant(f64),
    /// Uniform draw in `[lo, hi]` joules per user.
    Uniform { lo: f64, hi: f64 },
}

/// Where users sit and how their batteries start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopologyParams {
    pub n_users: usize,
    /// User-to-HAP distance bounds, meters; distances are drawn uniformly.
    pub d_min: f64,
    pub d_max: f64,
    pub battery: BatteryModel,
    /// Antenna efficiency applied to every generated user.
    pub antenna_efficiency: f64,
}

impl TopologyParams {
    pub fn validate(&self) -> Vec<InvalidParam> {
        let mut v = Vec::new();
        if self.n_users < 1 {
            v.push(InvalidParam {
                field: "topology.n_users",
                reason: alloc::format!("must be >= 1, got {}", self.n_users),
            });
        }
        if !(self.d_min > 0.0 && self.d_min <= self.d_max) {
            v.push(InvalidParam {
                field: "topology.d_min",
                reason: alloc::format!(
                    "need 0 < d_min <= d_max, got d_min={} d_max={}",
                    self.d_min,
                    self.d_max
                ),
            });
        }
        if !(self.antenna_efficiency > 0.0 && self.antenna_efficiency <= 1.0) {
            v.push(InvalidParam {
                field: "topology.antenna_efficiency",
                reason: alloc::format!("must be in (0, 1], got {}", self.antenna_efficiency),
            });
        }
        match self.battery {
            BatteryModel::Constant(b) if !(b >= 0.0) => v.push(InvalidParam {
                field: "topology.battery",
                reason: alloc::format!("constant battery must be >= 0, got {b}"),
            }),
            BatteryModel::Uniform { lo, hi } if !(0.0 <= lo && lo <= hi) => {
                v.push(InvalidParam {
                    field: "topology.battery",
                    reason: alloc::format!("need 0 <= lo <= hi, got lo={lo} hi={hi}"),
                })
            }
            _ => {}
        }
        v
    }
}

/// One random draw of the network: system constants plus generated users,
/// tagged with the seed that produced it. Regenerating from the same seed
/// and parameters is bit-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkInstance {
    pub seed: u64,
    pub sys: SystemParams,
    pub users: Vec<UserParams>,
}

impl NetworkInstance {
    /// Per-user derived link quantities `(id, C, k, r_max)`.
    pub fn link_summary(&self) -> Result<Vec<(usize, f64, f64, f64)>, crate::model::ModelError> {
        self.users
            .iter()
            .map(|u| {
                Ok((
                    u.id,
                    harvest_rate(u, &self.sys),
                    snr_coefficient(u, &self.sys)?,
                    max_rate(u, &self.sys)?,
                ))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelError {
    /// The log-distance model is only defined at or beyond the reference
    /// distance.
    DistanceBelowReference { distance: f64, reference: f64 },
    InvalidParams(Vec<InvalidParam>),
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelError::DistanceBelowReference { distance, reference } => write!(
                f,
                "distance {distance} m is below the reference distance {reference} m"
            ),
            ChannelError::InvalidParams(errs) => {
                write!(f, "invalid parameters:")?;
                for e in errs {
                    write!(f, " [{e}]")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for ChannelError {}

/// Path loss in dB at distance `d` with an explicit shadowing draw `z` (dB):
/// `PL(d0) + 10 * alpha * log10(d / d0) + z`.
pub fn path_loss_db(d: f64, p: &PathLossParams, z: f64) -> Result<f64, ChannelError> {
    if d < p.reference_distance {
        return Err(ChannelError::DistanceBelowReference {
            distance: d,
            reference: p.reference_distance,
        });
    }
    Ok(p.reference_loss_db + 10.0 * p.exponent * libm::log10(d / p.reference_distance) + z)
}

/// Draws one linear power gain at distance `d`: a fresh shadowing term
/// enters the path loss, and Rayleigh fading multiplies the resulting mean
/// power by an `Exp(1)` variate.
pub fn draw_gain<R: Rng + ?Sized>(
    d: f64,
    p: &PathLossParams,
    rng: &mut R,
) -> Result<f64, ChannelError> {
    let shadowing = if p.shadowing_sigma_db > 0.0 {
        Normal::new(0.0, p.shadowing_sigma_db)
            .expect("sigma validated nonnegative")
            .sample(rng)
    } else {
        0.0
    };
    let pl_db = path_loss_db(d, p, shadowing)?;
    let mean_power = libm::pow(10.0, -pl_db / 10.0);
    let fading: f64 = Exp1.sample(rng);
    Ok(mean_power * fading)
}

/// Generates a network realization. Deterministic in `seed`: per user the
/// draw order is distance, uplink gain, downlink gain, battery. Uplink and
/// downlink gains are independent draws at the same distance.
pub fn generate(
    topo: &TopologyParams,
    sys: &SystemParams,
    plp: &PathLossParams,
    seed: u64,
) -> Result<NetworkInstance, ChannelError> {
    let mut errs = topo.validate();
    errs.extend(sys.validate());
    errs.extend(plp.validate());
    if topo.d_min < plp.reference_distance {
        errs.push(InvalidParam {
            field: "topology.d_min",
            reason: alloc::format!(
                "must be >= path_loss.reference_distance ({})",
                plp.reference_distance
            ),
        });
    }
    if !errs.is_empty() {
        return Err(ChannelError::InvalidParams(errs));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let distance_dist = Uniform::new_inclusive(topo.d_min, topo.d_max);
    let mut users = Vec::with_capacity(topo.n_users);
    for id in 1..=topo.n_users {
        let d = rng.sample(distance_dist);
        let uplink_gain = draw_gain(d, plp, &mut rng)?;
        let downlink_gain = draw_gain(d, plp, &mut rng)?;
        let initial_battery = match topo.battery {
            BatteryModel::Constant(b) => b,
            BatteryModel::Uniform { lo, hi } => {
                if hi > lo {
                    rng.sample(Uniform::new_inclusive(lo, hi))
                } else {
                    lo
                }
            }
        };
        users.push(UserParams {
            id,
            uplink_gain,
            downlink_gain,
            antenna_efficiency: topo.antenna_efficiency,
            initial_battery,
        });
    }
    Ok(NetworkInstance { seed, sys: *sys, users })
}
