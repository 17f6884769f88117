//! Physical-layer formulas and schedule evaluation.
//!
//! Units follow one convention throughout the workspace: the scheduling
//! frame is the time unit (`frame_length = 1`), so an energy "per frame"
//! is numerically a power in watts. Throughput is reported in bits per
//! frame, i.e. `W * tau * log2(1 + k * P)` with `tau` a frame fraction.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Default absolute tolerance for all feasibility checks. Iterative solvers
/// produce boundary-grazing solutions, so exact comparisons are useless.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Network-wide constants owned by the hybrid access point (HAP).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Downlink energy transmit power of the HAP, watts.
    pub hap_power: f64,
    /// Per-user maximum uplink transmit power, watts.
    pub max_user_power: f64,
    /// Channel bandwidth, hertz.
    pub bandwidth: f64,
    /// Noise power spectral density at the HAP receiver, watts/hertz.
    pub noise_density: f64,
    /// Residual self-interference coefficient at the full-duplex HAP,
    /// dimensionless in [0, 1]. The HAP receives `self_interference *
    /// hap_power` of its own downlink signal as uplink noise.
    pub self_interference: f64,
    /// Normalized scheduling frame duration; fixed at 1.
    pub frame_length: f64,
}

/// Per-user physical state at the start of a scheduling frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserParams {
    /// User index, 1-based.
    pub id: usize,
    /// Uplink channel power gain (user to HAP), linear.
    pub uplink_gain: f64,
    /// Downlink channel power gain (HAP to user), linear.
    pub downlink_gain: f64,
    /// Antenna (harvesting) efficiency, in (0, 1].
    pub antenna_efficiency: f64,
    /// Initial battery energy at frame start, joules (frame-normalized).
    pub initial_battery: f64,
}

/// One transmission slot: a user, its slot length, and its transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slot {
    pub user_id: usize,
    /// Slot length as a fraction of the frame, in [0, 1].
    pub tau: f64,
    /// Transmit power during the slot, watts. Zero whenever `tau` is zero.
    pub power: f64,
}

/// An ordered transmission schedule over one frame.
///
/// The slot order is the transmission order. An optional idle prefix
/// (time with no transmission, during which every user still harvests)
/// precedes the first slot; solver-produced schedules always have a zero
/// idle prefix.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Schedule {
    pub idle_prefix: f64,
    pub slots: Vec<Slot>,
}

impl Schedule {
    pub fn new(slots: Vec<Slot>) -> Self {
        Schedule { idle_prefix: 0.0, slots }
    }

    /// Total allocated time including the idle prefix.
    pub fn total_time(&self) -> f64 {
        self.idle_prefix + self.slots.iter().map(|s| s.tau).sum::<f64>()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

/// A named constraint violation with its magnitude (how far past the
/// constraint boundary the schedule sits, in the constraint's own units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    /// Consumed energy exceeds battery plus harvested energy.
    EnergyCausality { user_id: usize, excess: f64 },
    /// Transmit power exceeds the per-user maximum.
    PowerLimit { user_id: usize, excess: f64 },
    /// Idle prefix plus slot lengths exceed the frame.
    FrameLength { excess: f64 },
    NegativeTau { user_id: usize, tau: f64 },
    NegativePower { user_id: usize, power: f64 },
    /// A slot has zero length but nonzero power.
    PowerWithoutTime { user_id: usize, power: f64 },
    DuplicateUser { user_id: usize },
    /// A slot references a user that is not part of the instance.
    UnknownUser { user_id: usize },
    NegativeIdlePrefix { value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EnergyCausality { user_id, excess } => {
                write!(f, "user {user_id}: energy causality violated by {excess:.3e} J")
            }
            Violation::PowerLimit { user_id, excess } => {
                write!(f, "user {user_id}: power limit exceeded by {excess:.3e} W")
            }
            Violation::FrameLength { excess } => {
                write!(f, "frame length exceeded by {excess:.3e}")
            }
            Violation::NegativeTau { user_id, tau } => {
                write!(f, "user {user_id}: negative slot length {tau:.3e}")
            }
            Violation::NegativePower { user_id, power } => {
                write!(f, "user {user_id}: negative power {power:.3e} W")
            }
            Violation::PowerWithoutTime { user_id, power } => {
                write!(f, "user {user_id}: zero-length slot with power {power:.3e} W")
            }
            Violation::DuplicateUser { user_id } => {
                write!(f, "user {user_id} appears in more than one slot")
            }
            Violation::UnknownUser { user_id } => {
                write!(f, "slot references unknown user {user_id}")
            }
            Violation::NegativeIdlePrefix { value } => {
                write!(f, "negative idle prefix {value:.3e}")
            }
        }
    }
}

/// Per-user and sum throughput of a schedule plus feasibility findings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    /// `(user_id, bits per frame)` per slot, in slot order.
    pub per_user_rate: Vec<(usize, f64)>,
    /// Sum throughput, bits per frame.
    pub sum_throughput: f64,
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    UnknownUser(usize),
    /// `noise_density * bandwidth + self_interference * hap_power` is zero,
    /// which would model a noiseless, interference-free channel with
    /// unbounded SNR.
    DegenerateChannel,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::UnknownUser(id) => write!(f, "schedule references unknown user {id}"),
            ModelError::DegenerateChannel => {
                write!(f, "noise-plus-self-interference power is zero; SNR is unbounded")
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// A parameter that failed its invariant, with the offending field name.
#[derive(Debug, Clone, PartialEq)]
pub struct InvalidParam {
    pub field: &'static str,
    pub reason: String,
}

impl fmt::Display for InvalidParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

macro_rules! check {
    ($out:ident, $cond:expr, $field:expr, $($reason:tt)*) => {
        if !$cond {
            $out.push(InvalidParam { field: $field, reason: alloc::format!($($reason)*) });
        }
    };
}

impl SystemParams {
    /// Returns every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<InvalidParam> {
        let mut v = Vec::new();
        check!(v, self.hap_power > 0.0, "system.hap_power", "must be > 0, got {}", self.hap_power);
        check!(
            v,
            self.max_user_power > 0.0,
            "system.max_user_power",
            "must be > 0, got {}",
            self.max_user_power
        );
        check!(v, self.bandwidth > 0.0, "system.bandwidth", "must be > 0, got {}", self.bandwidth);
        check!(
            v,
            self.noise_density >= 0.0,
            "system.noise_density",
            "must be >= 0, got {}",
            self.noise_density
        );
        check!(
            v,
            (0.0..=1.0).contains(&self.self_interference),
            "system.self_interference",
            "must be in [0, 1], got {}",
            self.self_interference
        );
        check!(
            v,
            self.frame_length == 1.0,
            "system.frame_length",
            "must be 1 (normalized frame), got {}",
            self.frame_length
        );
        v
    }
}

impl UserParams {
    /// Returns every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<InvalidParam> {
        let mut v = Vec::new();
        check!(v, self.id >= 1, "user.id", "must be >= 1, got {}", self.id);
        check!(
            v,
            self.uplink_gain > 0.0,
            "user.uplink_gain",
            "must be > 0, got {}",
            self.uplink_gain
        );
        check!(
            v,
            self.downlink_gain > 0.0,
            "user.downlink_gain",
            "must be > 0, got {}",
            self.downlink_gain
        );
        check!(
            v,
            self.antenna_efficiency > 0.0 && self.antenna_efficiency <= 1.0,
            "user.antenna_efficiency",
            "must be in (0, 1], got {}",
            self.antenna_efficiency
        );
        check!(
            v,
            self.initial_battery >= 0.0,
            "user.initial_battery",
            "must be >= 0, got {}",
            self.initial_battery
        );
        v
    }
}

/// Energy harvesting rate of a user from the HAP downlink, watts:
/// antenna efficiency times downlink gain times HAP power.
pub fn harvest_rate(user: &UserParams, sys: &SystemParams) -> f64 {
    user.antenna_efficiency * user.downlink_gain * sys.hap_power
}

/// Effective SNR coefficient of a user's uplink, per watt.
///
/// The HAP receiver sees thermal noise plus its own residual downlink
/// self-interference, so the received SNR at transmit power `P` is
/// `k * P` with `k = g / (N0*W + beta*Ph)`.
pub fn snr_coefficient(user: &UserParams, sys: &SystemParams) -> Result<f64, ModelError> {
    let denom = sys.noise_density * sys.bandwidth + sys.self_interference * sys.hap_power;
    if denom <= 0.0 {
        return Err(ModelError::DegenerateChannel);
    }
    Ok(user.uplink_gain / denom)
}

/// Throughput of one slot in bits per frame: `W * tau * log2(1 + k * P)`.
/// Zero whenever `tau` is zero, regardless of power.
pub fn rate(tau: f64, power: f64, k: f64, bandwidth: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    bandwidth * tau * libm::log2(1.0 + k * power)
}

/// Slot throughput in the (tau, energy) parameterization, `e = P * tau`.
/// This is the perspective form of [`rate`]; it is jointly concave in
/// `(tau, e)` and continuous at `tau = 0` with value 0.
pub fn rate_from_energy(tau: f64, energy: f64, k: f64, bandwidth: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    bandwidth * tau * libm::log2(1.0 + k * energy / tau)
}

/// A user's transmission rate at maximum transmit power, bits per second.
/// Strictly increasing in the SNR coefficient, so ranking users by this
/// value equals ranking them by `k`.
pub fn max_rate(user: &UserParams, sys: &SystemParams) -> Result<f64, ModelError> {
    let k = snr_coefficient(user, sys)?;
    Ok(sys.bandwidth * libm::log2(1.0 + k * sys.max_user_power))
}

/// Computes per-user and sum throughput of a schedule and audits it against
/// the energy-causality, power-limit, and frame-length constraints.
///
/// Energy causality is full-duplex: a user keeps harvesting during its own
/// transmission, so the energy available to the user in slot position `i`
/// is `B + C * (idle_prefix + sum of slot lengths up to and including i)`.
pub fn evaluate(
    schedule: &Schedule,
    users: &[UserParams],
    sys: &SystemParams,
) -> Result<ThroughputReport, ModelError> {
    evaluate_with_tol(schedule, users, sys, FEASIBILITY_TOL)
}

/// [`evaluate`] with an explicit feasibility tolerance.
pub fn evaluate_with_tol(
    schedule: &Schedule,
    users: &[UserParams],
    sys: &SystemParams,
    tol: f64,
) -> Result<ThroughputReport, ModelError> {
    let find_user = |id: usize| users.iter().find(|u| u.id == id).ok_or(ModelError::UnknownUser(id));

    let mut violations = Vec::new();
    let mut per_user_rate = Vec::with_capacity(schedule.slots.len());
    let mut sum = 0.0;
    let mut elapsed = schedule.idle_prefix;

    for (pos, slot) in schedule.slots.iter().enumerate() {
        let user = find_user(slot.user_id)?;
        if schedule.slots[..pos].iter().any(|s| s.user_id == slot.user_id) {
            violations.push(Violation::DuplicateUser { user_id: slot.user_id });
        }
        if slot.tau < -tol {
            violations.push(Violation::NegativeTau { user_id: slot.user_id, tau: slot.tau });
        }
        if slot.power < -tol {
            violations.push(Violation::NegativePower { user_id: slot.user_id, power: slot.power });
        }
        if slot.tau <= 0.0 && slot.power.abs() > tol {
            violations.push(Violation::PowerWithoutTime { user_id: slot.user_id, power: slot.power });
        }
        let power_excess = slot.power - sys.max_user_power;
        if power_excess > tol {
            violations.push(Violation::PowerLimit { user_id: slot.user_id, excess: power_excess });
        }

        elapsed += slot.tau;
        let available = user.initial_battery + harvest_rate(user, sys) * elapsed;
        let consumed = slot.power * slot.tau;
        if consumed - available > tol {
            violations.push(Violation::EnergyCausality {
                user_id: slot.user_id,
                excess: consumed - available,
            });
        }

        let k = snr_coefficient(user, sys)?;
        let r = rate(slot.tau.max(0.0), slot.power.max(0.0), k, sys.bandwidth);
        per_user_rate.push((slot.user_id, r));
        sum += r;
    }

    let overrun = elapsed - sys.frame_length;
    if overrun > tol {
        violations.push(Violation::FrameLength { excess: overrun });
    }

    Ok(ThroughputReport {
        per_user_rate,
        sum_throughput: sum,
        feasible: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(max_user_power: f64, bandwidth: f64) -> SystemParams {
        SystemParams {
            hap_power: 1.0,
            max_user_power,
            bandwidth,
            noise_density: 0.0,
            self_interference: 1.0,
            frame_length: 1.0,
        }
    }

    fn user(id: usize, uplink_gain: f64, downlink_gain: f64, eta: f64, battery: f64) -> UserParams {
        UserParams {
            id,
            uplink_gain,
            downlink_gain,
            antenna_efficiency: eta,
            initial_battery: battery,
        }
    }

    #[test]
    fn harvest_rate_is_product_of_efficiency_gain_and_power() {
        let mut s = sys(1.0, 1.0);
        let u = user(1, 1e-6, 0.001, 1.0, 0.0);
        assert_eq!(harvest_rate(&u, &s), 0.001);

        s.hap_power = 0.0;
        assert_eq!(harvest_rate(&u, &s), 0.0);

        s.hap_power = 3.0;
        let u = user(1, 1e-6, 2e-3, 0.5, 0.0);
        assert!((harvest_rate(&u, &s) - 3e-3).abs() < 1e-18);
    }

    #[test]
    fn snr_coefficient_divides_gain_by_noise_plus_self_interference() {
        // N0*W = 1e-7 and beta*Ph = 1e-7.
        let s = SystemParams {
            hap_power: 1.0,
            max_user_power: 1.0,
            bandwidth: 1.0,
            noise_density: 1e-7,
            self_interference: 1e-7,
            frame_length: 1.0,
        };
        let u = user(1, 2e-6, 1e-3, 1.0, 0.0);
        assert!((snr_coefficient(&u, &s).unwrap() - 10.0).abs() < 1e-12);

        // Self-interference-only denominator.
        let s = SystemParams { noise_density: 0.0, ..s };
        let u = user(1, 1e-6, 1e-3, 1.0, 0.0);
        assert!((snr_coefficient(&u, &s).unwrap() - 10.0).abs() < 1e-12);

        // k is linear in the uplink gain.
        let u2 = user(2, 0.5e-6, 1e-3, 1.0, 0.0);
        assert!(
            (snr_coefficient(&u2, &s).unwrap() - 0.5 * snr_coefficient(&u, &s).unwrap()).abs()
                < 1e-15
        );
    }

    #[test]
    fn snr_coefficient_rejects_zero_denominator() {
        let s = SystemParams {
            hap_power: 1.0,
            max_user_power: 1.0,
            bandwidth: 1.0,
            noise_density: 0.0,
            self_interference: 0.0,
            frame_length: 1.0,
        };
        let u = user(1, 1e-6, 1e-3, 1.0, 0.0);
        assert_eq!(snr_coefficient(&u, &s), Err(ModelError::DegenerateChannel));
    }

    #[test]
    fn rate_matches_shannon_formula() {
        assert!((rate(1.0, 1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(rate(0.5, 0.0, 7.0, 1.0), 0.0);
        assert_eq!(rate(0.0, 5.0, 7.0, 1.0), 0.0);
        // 0.3 * log2(11)
        let expected = 0.3 * (11.0f64).log2();
        assert!((rate(0.3, 10.0, 1.0, 1.0) - expected).abs() < 1e-12);
        assert!((expected - 1.0378).abs() < 1e-4);
    }

    #[test]
    fn rate_from_energy_agrees_with_rate() {
        let (tau, power, k, w) = (0.37, 2.5, 3.0, 1e6);
        let via_power = rate(tau, power, k, w);
        let via_energy = rate_from_energy(tau, power * tau, k, w);
        assert!((via_power - via_energy).abs() < 1e-9 * via_power.abs());
        assert_eq!(rate_from_energy(0.0, 1.0, k, w), 0.0);
    }

    #[test]
    fn max_rate_is_rate_at_max_power_and_monotone_in_k() {
        let s = SystemParams {
            hap_power: 1.0,
            max_user_power: 1.0,
            bandwidth: 1.0,
            noise_density: 0.0,
            self_interference: 1e-7,
            frame_length: 1.0,
        };
        // k = 10 => log2(11)
        let u = user(1, 1e-6, 1e-3, 1.0, 0.0);
        let r = max_rate(&u, &s).unwrap();
        assert!((r - (11.0f64).log2()).abs() < 1e-12);
        assert!((r - 3.4594).abs() < 1e-4);

        let slightly_worse = user(2, 0.999e-6, 1e-3, 1.0, 0.0);
        assert!(max_rate(&slightly_worse, &s).unwrap() < r);

        let s_zero_snr = SystemParams { max_user_power: 0.0, ..s };
        assert_eq!(max_rate(&u, &s_zero_snr).unwrap(), 0.0);
    }

    /// Single user spanning the whole frame at exactly its available energy:
    /// k = 1, W = 1, B = 0.5, C = 0.5 gives rate log2(2) = 1.
    #[test]
    fn evaluate_single_user_full_frame() {
        let s = SystemParams {
            hap_power: 1.0,
            max_user_power: 2.0,
            bandwidth: 1.0,
            noise_density: 0.0,
            self_interference: 0.5,
            frame_length: 1.0,
        };
        // C = eta*h*Ph = 0.5; k = g / (beta*Ph) = 0.5/0.5 = 1.
        let u = user(1, 0.5, 0.5, 1.0, 0.5);
        let sched = Schedule::new(vec![Slot { user_id: 1, tau: 1.0, power: 1.0 }]);
        let report = evaluate(&sched, &[u], &s).unwrap();
        assert!(report.feasible, "violations: {:?}", report.violations);
        assert!((report.sum_throughput - 1.0).abs() < 1e-12);

        // Overspending by 0.1 W breaks energy causality by that amount.
        let sched = Schedule::new(vec![Slot { user_id: 1, tau: 1.0, power: 1.1 }]);
        let report = evaluate(&sched, &[u], &s).unwrap();
        assert!(!report.feasible);
        match &report.violations[..] {
            [Violation::EnergyCausality { user_id: 1, excess }] => {
                assert!((excess - 0.1).abs() < 1e-12)
            }
            other => panic!("expected one energy violation, got {other:?}"),
        }
    }

    #[test]
    fn evaluate_empty_schedule_is_feasible_and_zero() {
        let s = sys(1.0, 1.0);
        let report = evaluate(&Schedule::default(), &[], &s).unwrap();
        assert!(report.feasible);
        assert_eq!(report.sum_throughput, 0.0);
    }

    #[test]
    fn evaluate_rejects_unknown_user() {
        let s = sys(1.0, 1.0);
        let sched = Schedule::new(vec![Slot { user_id: 7, tau: 0.5, power: 0.1 }]);
        assert_eq!(evaluate(&sched, &[], &s), Err(ModelError::UnknownUser(7)));
    }

    #[test]
    fn evaluate_sum_equals_slotwise_rates() {
        let s = SystemParams {
            hap_power: 1.0,
            max_user_power: 1.0,
            bandwidth: 2.0,
            noise_density: 1e-3,
            self_interference: 0.0,
            frame_length: 1.0,
        };
        let users = [user(1, 3e-3, 1e-2, 1.0, 0.3), user(2, 1e-3, 2e-2, 0.8, 0.1)];
        let sched = Schedule::new(vec![
            Slot { user_id: 2, tau: 0.25, power: 0.2 },
            Slot { user_id: 1, tau: 0.5, power: 0.6 },
        ]);
        let report = evaluate(&sched, &users, &s).unwrap();
        let slotwise: f64 = report.per_user_rate.iter().map(|(_, r)| r).sum();
        assert!((report.sum_throughput - slotwise).abs() < 1e-12 * slotwise.max(1.0));
        assert!(report.feasible, "violations: {:?}", report.violations);
    }

    #[test]
    fn validation_reports_field_names() {
        let mut s = sys(1.0, 1.0);
        s.hap_power = -1.0;
        let errs = s.validate();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].field, "system.hap_power");

        let mut u = user(1, 1e-6, 1e-3, 1.0, 0.0);
        u.antenna_efficiency = 1.5;
        let errs = u.validate();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].field, "user.antenna_efficiency");
    }
}
