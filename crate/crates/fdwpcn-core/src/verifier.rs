//! Independent feasibility and optimality-condition audits.
//!
//! [`check_feasible`] re-derives every constraint from scratch so solver
//! and scheduler outputs are judged by code that shares none of their
//! arithmetic. [`check_optimality_conditions`] encodes the structural
//! properties every optimal schedule must satisfy: no idle prefix, a fully
//! used frame, each transmitting user at the power cap or energy-exhausted,
//! and slots reserved for the highest-rate users. On heuristic schedules
//! the optimality report is advisory; on exhaustive-search outputs it must
//! pass.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{
    harvest_rate, max_rate, Schedule, SystemParams, UserParams, Violation,
};

/// Verdict for one optimality condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionOutcome {
    pub passed: bool,
    pub detail: String,
}

impl ConditionOutcome {
    fn pass(detail: String) -> Self {
        ConditionOutcome { passed: true, detail }
    }
    fn fail(detail: String) -> Self {
        ConditionOutcome { passed: false, detail }
    }
}

/// Per-condition audit of the optimal-schedule structure.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityReport {
    /// The schedule starts transmitting immediately.
    pub no_idle_prefix: ConditionOutcome,
    /// The slot lengths exhaust the frame.
    pub full_frame: ConditionOutcome,
    /// Every transmitting user is at the power cap or has spent all energy
    /// available through the end of its slot.
    pub allocation_tight: ConditionOutcome,
    /// No silent user outranks a transmitting one in full-power rate.
    pub support_monotone: ConditionOutcome,
    /// The highest full-power-rate user transmits.
    pub best_user_active: ConditionOutcome,
}

impl OptimalityReport {
    pub fn all_pass(&self) -> bool {
        self.no_idle_prefix.passed
            && self.full_frame.passed
            && self.allocation_tight.passed
            && self.support_monotone.passed
            && self.best_user_active.passed
    }

    pub fn conditions(&self) -> [(&'static str, &ConditionOutcome); 5] {
        [
            ("no_idle_prefix", &self.no_idle_prefix),
            ("full_frame", &self.full_frame),
            ("allocation_tight", &self.allocation_tight),
            ("support_monotone", &self.support_monotone),
            ("best_user_active", &self.best_user_active),
        ]
    }
}

/// Audits a schedule against every feasibility constraint; an empty list
/// means feasible within `tol`.
pub fn check_feasible(
    schedule: &Schedule,
    users: &[UserParams],
    sys: &SystemParams,
    tol: f64,
) -> Vec<Violation> {
    let mut out = Vec::new();

    if schedule.idle_prefix < -tol {
        out.push(Violation::NegativeIdlePrefix { value: schedule.idle_prefix });
    }

    for (pos, slot) in schedule.slots.iter().enumerate() {
        if schedule.slots[..pos].iter().any(|s| s.user_id == slot.user_id) {
            out.push(Violation::DuplicateUser { user_id: slot.user_id });
        }
        if slot.tau < -tol {
            out.push(Violation::NegativeTau { user_id: slot.user_id, tau: slot.tau });
        }
        if slot.power < -tol {
            out.push(Violation::NegativePower { user_id: slot.user_id, power: slot.power });
        }
        if slot.tau <= 0.0 && slot.power.abs() > tol {
            out.push(Violation::PowerWithoutTime { user_id: slot.user_id, power: slot.power });
        }
        if slot.power > sys.max_user_power + tol {
            out.push(Violation::PowerLimit {
                user_id: slot.user_id,
                excess: slot.power - sys.max_user_power,
            });
        }

        match users.iter().find(|u| u.id == slot.user_id) {
            None => out.push(Violation::UnknownUser { user_id: slot.user_id }),
            Some(user) => {
                // Harvesting runs through the end of this user's own slot
                // (full duplex), including the idle prefix.
                let elapsed: f64 = schedule.idle_prefix
                    + schedule.slots[..=pos].iter().map(|s| s.tau).sum::<f64>();
                let available = user.initial_battery + harvest_rate(user, sys) * elapsed;
                let consumed = slot.power * slot.tau;
                if consumed > available + tol {
                    out.push(Violation::EnergyCausality {
                        user_id: slot.user_id,
                        excess: consumed - available,
                    });
                }
            }
        }
    }

    let total = schedule.total_time();
    if total > sys.frame_length + tol {
        out.push(Violation::FrameLength { excess: total - sys.frame_length });
    }

    out
}

/// Audits the structure of a (feasible) schedule against the conditions an
/// optimal schedule must satisfy. `tol` is interpreted relatively where a
/// natural scale exists (power cap, available energy, rates).
pub fn check_optimality_conditions(
    schedule: &Schedule,
    users: &[UserParams],
    sys: &SystemParams,
    tol: f64,
) -> Result<OptimalityReport, crate::model::ModelError> {
    let no_idle_prefix = if schedule.idle_prefix.abs() <= tol {
        ConditionOutcome::pass(format!("idle prefix {:.2e}", schedule.idle_prefix))
    } else {
        ConditionOutcome::fail(format!("idle prefix {} > {tol}", schedule.idle_prefix))
    };

    let total = schedule.total_time();
    let full_frame = if (total - sys.frame_length).abs() <= tol {
        ConditionOutcome::pass(format!("total time {total:.12}"))
    } else {
        ConditionOutcome::fail(format!("total time {total} misses the frame by {}", total - 1.0))
    };

    // A slot counts as active when its length clears the tolerance; the
    // interior-point solver leaves boundary slop below that scale.
    let active_ids: Vec<usize> =
        schedule.slots.iter().filter(|s| s.tau > tol).map(|s| s.user_id).collect();

    let mut allocation_tight = ConditionOutcome::pass(String::from("all active users tight"));
    let mut elapsed = schedule.idle_prefix;
    for slot in &schedule.slots {
        elapsed += slot.tau;
        if slot.tau <= tol {
            continue;
        }
        let user = users
            .iter()
            .find(|u| u.id == slot.user_id)
            .ok_or(crate::model::ModelError::UnknownUser(slot.user_id))?;
        let available = user.initial_battery + harvest_rate(user, sys) * elapsed;
        let power_gap = sys.max_user_power - slot.power;
        let energy_slack = available - slot.power * slot.tau;
        let power_tight = power_gap <= tol * sys.max_user_power;
        let energy_tight = energy_slack <= tol * available.max(f64::MIN_POSITIVE);
        if !(power_tight || energy_tight) {
            allocation_tight = ConditionOutcome::fail(format!(
                "user {}: {:.3e} W below the cap and {:.3e} J unspent",
                slot.user_id, power_gap, energy_slack
            ));
            break;
        }
    }

    let mut rates: Vec<(usize, f64)> = Vec::with_capacity(users.len());
    for u in users {
        rates.push((u.id, max_rate(u, sys)?));
    }

    let min_active_rate = rates
        .iter()
        .filter(|(id, _)| active_ids.contains(id))
        .map(|&(_, r)| r)
        .fold(f64::INFINITY, f64::min);
    let mut support_monotone = ConditionOutcome::pass(String::from("support is rate-monotone"));
    for &(id, r) in &rates {
        if !active_ids.contains(&id) && r > min_active_rate + tol * min_active_rate.abs().max(1.0)
        {
            support_monotone = ConditionOutcome::fail(format!(
                "inactive user {id} has rate {r:.6e} above an active user's {min_active_rate:.6e}"
            ));
            break;
        }
    }

    let best_rate = rates.iter().map(|&(_, r)| r).fold(f64::NEG_INFINITY, f64::max);
    let max_active_rate = rates
        .iter()
        .filter(|(id, _)| active_ids.contains(id))
        .map(|&(_, r)| r)
        .fold(f64::NEG_INFINITY, f64::max);
    let best_user_active = if max_active_rate >= best_rate - tol * best_rate.abs().max(1.0) {
        ConditionOutcome::pass(format!("best rate {best_rate:.6e} is active"))
    } else {
        ConditionOutcome::fail(format!(
            "best rate {best_rate:.6e} is inactive; best active is {max_active_rate:.6e}"
        ))
    };

    Ok(OptimalityReport {
        no_idle_prefix,
        full_frame,
        allocation_tight,
        support_monotone,
        best_user_active,
    })
}
