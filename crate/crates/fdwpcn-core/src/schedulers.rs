//! The maximum-rate-first scheduling heuristic (MFSA) and the equal-time
//! baseline (ETA).
//!
//! MFSA sorts users by their full-power rate and fills the frame from the
//! end backward, so the strongest user transmits last and harvests through
//! the whole frame. At each step it compares three candidate splits of the
//! remaining time between the strongest unallocated user and the runner-up,
//! keeps the best, and either continues down the rate ranking (case 1) or
//! terminates (cases 2 and 3). Each pair is evaluated once, so the loop is
//! linear in the user count after the initial sort.

use alloc::vec::Vec;
use core::fmt;

use crate::model::{
    evaluate, max_rate, rate, Schedule, Slot, SystemParams, ThroughputReport, UserParams,
};
use crate::ptap::PtapLink;

#[derive(Debug, Clone, PartialEq)]
pub enum SchedulerError {
    NoUsers,
    Model(crate::model::ModelError),
}

impl From<crate::model::ModelError> for SchedulerError {
    fn from(e: crate::model::ModelError) -> Self {
        SchedulerError::Model(e)
    }
}

impl fmt::Display for SchedulerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchedulerError::NoUsers => write!(f, "scheduler needs at least one user"),
            SchedulerError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SchedulerError {}

/// One candidate split of the available time between the current pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseCase {
    /// 1: higher-rate user gets its minimal full-power slot, the rest goes
    ///    to the lower-rate user.
    /// 2: lower-rate user gets the longest slot it can sustain at full
    ///    power, the higher-rate user takes the remainder energy-limited.
    /// 3: higher-rate user takes everything energy-limited, the lower-rate
    ///    user is shut out.
    pub case_id: u8,
    /// `(tau, power)` for the higher-rate user.
    pub higher: (f64, f64),
    /// `(tau, power)` for the lower-rate user.
    pub lower: (f64, f64),
    /// Combined throughput of the pair under this split, bits per frame.
    pub pair_throughput: f64,
}

/// Counters exposed for complexity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MfsaStats {
    /// Pairwise case evaluations performed; at most `N - 1`.
    pub pair_evaluations: usize,
}

/// Evaluates the three candidate splits of `available_time` between the
/// higher-rate user and the lower-rate user.
///
/// Callers must have ruled out the whole-frame case first: the higher-rate
/// user's minimal full-power slot `(B + C * t_a) / P_max` must be shorter
/// than `available_time`. Time placement: the higher-rate user's slot ends
/// when `available_time` elapses (it harvests through all of it), while the
/// lower-rate user's slot starts at time zero (it harvests only during its
/// own slot).
pub fn pairwise_cases(
    higher: &PtapLink,
    lower: &PtapLink,
    available_time: f64,
    max_power: f64,
    bandwidth: f64,
) -> [PairwiseCase; 3] {
    let t_a = available_time;
    let budget_h = higher.initial_battery + higher.harvest_rate * t_a;
    let tau_min = budget_h / max_power;
    debug_assert!(tau_min < t_a, "whole-frame case must be handled by the caller");

    let throughput = |hi: (f64, f64), lo: (f64, f64)| {
        rate(hi.0, hi.1, higher.snr_coefficient, bandwidth)
            + rate(lo.0, lo.1, lower.snr_coefficient, bandwidth)
    };
    let normalize = |tau: f64, power: f64| if tau > 0.0 { (tau, power) } else { (0.0, 0.0) };

    // Case 1: higher at full power for its minimal slot; the rest to the
    // lower user at the best power its own-slot harvest sustains.
    let tau_lo_1 = t_a - tau_min;
    let hi_1 = normalize(tau_min, max_power);
    let lo_1 = normalize(
        tau_lo_1,
        ((lower.initial_battery + lower.harvest_rate * tau_lo_1) / tau_lo_1).min(max_power),
    );

    // Case 2: lower at full power for as long as its energy sustains (its
    // battery drains at P_max - C while transmitting), capped so the higher
    // user still gets its minimal slot; the higher user takes the rest,
    // consuming everything it harvests by the end of the span.
    let sustain = if max_power > lower.harvest_rate {
        lower.initial_battery / (max_power - lower.harvest_rate)
    } else {
        f64::INFINITY
    };
    let tau_lo_2 = sustain.min(t_a - tau_min);
    let tau_hi_2 = t_a - tau_lo_2;
    let hi_2 = normalize(tau_hi_2, (budget_h / tau_hi_2).min(max_power));
    let lo_2 = normalize(tau_lo_2, max_power);

    // Case 3: higher takes the whole span energy-limited; lower gets nothing.
    let hi_3 = normalize(t_a, (budget_h / t_a).min(max_power));

    [
        PairwiseCase { case_id: 1, higher: hi_1, lower: lo_1, pair_throughput: throughput(hi_1, lo_1) },
        PairwiseCase { case_id: 2, higher: hi_2, lower: lo_2, pair_throughput: throughput(hi_2, lo_2) },
        PairwiseCase {
            case_id: 3,
            higher: hi_3,
            lower: (0.0, 0.0),
            pair_throughput: throughput(hi_3, (0.0, 0.0)),
        },
    ]
}

/// Maximum-rate-first scheduling.
pub fn mfsa(
    users: &[UserParams],
    sys: &SystemParams,
) -> Result<(Schedule, ThroughputReport), SchedulerError> {
    let (schedule, report, _) = mfsa_with_stats(users, sys)?;
    Ok((schedule, report))
}

/// [`mfsa`] with the pair-evaluation counter.
pub fn mfsa_with_stats(
    users: &[UserParams],
    sys: &SystemParams,
) -> Result<(Schedule, ThroughputReport, MfsaStats), SchedulerError> {
    if users.is_empty() {
        return Err(SchedulerError::NoUsers);
    }
    let ranked = rank_by_max_rate_desc(users, sys)?;
    let p_max = sys.max_user_power;
    let w = sys.bandwidth;

    // Slots are committed from the end of the frame backward; reversing the
    // commit list at the end yields time order.
    let mut commits: Vec<Slot> = Vec::with_capacity(users.len());
    let mut stats = MfsaStats::default();
    let mut available = 1.0;

    let push = |commits: &mut Vec<Slot>, user_id: usize, (tau, power): (f64, f64)| {
        if tau > 0.0 {
            commits.push(Slot { user_id, tau, power });
        }
    };

    if ranked.len() == 1 {
        let (id, link) = ranked[0];
        let budget = link.initial_battery + link.harvest_rate;
        let alloc =
            if budget / p_max >= 1.0 { (1.0, p_max) } else { (1.0, budget) };
        push(&mut commits, id, alloc);
    } else {
        for p in 0..ranked.len() - 1 {
            let (hi_id, hi) = ranked[p];
            let (lo_id, lo) = ranked[p + 1];
            let tau_min = (hi.initial_battery + hi.harvest_rate * available) / p_max;
            if tau_min >= available {
                // The strongest remaining user can afford full power for the
                // whole remaining span; nobody below it gets a slot.
                push(&mut commits, hi_id, (available, p_max));
                break;
            }
            let cases = pairwise_cases(&hi, &lo, available, p_max, w);
            stats.pair_evaluations += 1;
            // Strict improvement keeps the lowest case id on ties.
            let mut best = cases[0];
            for case in &cases[1..] {
                if case.pair_throughput > best.pair_throughput {
                    best = *case;
                }
            }

            if best.case_id == 1 {
                push(&mut commits, hi_id, best.higher);
                available -= best.higher.0;
                if p == ranked.len() - 2 {
                    push(&mut commits, lo_id, best.lower);
                }
            } else {
                push(&mut commits, hi_id, best.higher);
                push(&mut commits, lo_id, best.lower);
                break;
            }
        }
    }

    commits.reverse();
    let schedule = Schedule::new(commits);
    let report = evaluate(&schedule, users, sys)?;
    Ok((schedule, report, stats))
}

/// Equal-time baseline: every user gets `1/N` of the frame, slots ordered
/// by ascending full-power rate so the strongest user transmits last, and
/// each user spends the most power its energy (through the end of its own
/// slot) or the power cap allows.
pub fn eta(
    users: &[UserParams],
    sys: &SystemParams,
) -> Result<(Schedule, ThroughputReport), SchedulerError> {
    if users.is_empty() {
        return Err(SchedulerError::NoUsers);
    }
    let mut ranked = rank_by_max_rate_desc(users, sys)?;
    ranked.reverse();

    let n = ranked.len();
    let mut slots = Vec::with_capacity(n);
    let mut prev_boundary = 0.0;
    for (m, (id, link)) in ranked.iter().enumerate() {
        // Slot boundaries at m/N make the lengths telescope to exactly 1.
        let boundary = (m + 1) as f64 / n as f64;
        let tau = boundary - prev_boundary;
        let power =
            ((link.initial_battery + link.harvest_rate * boundary) / tau).min(sys.max_user_power);
        slots.push(Slot { user_id: *id, tau, power });
        prev_boundary = boundary;
    }
    let schedule = Schedule::new(slots);
    let report = evaluate(&schedule, users, sys)?;
    Ok((schedule, report))
}

/// Users with their link coefficients, sorted by full-power rate descending
/// (ties by ascending id for determinism).
fn rank_by_max_rate_desc(
    users: &[UserParams],
    sys: &SystemParams,
) -> Result<Vec<(usize, PtapLink)>, SchedulerError> {
    let mut ranked = users
        .iter()
        .map(|u| {
            let r = max_rate(u, sys)?;
            Ok((
                r,
                u.id,
                PtapLink {
                    snr_coefficient: crate::model::snr_coefficient(u, sys)?,
                    harvest_rate: crate::model::harvest_rate(u, sys),
                    initial_battery: u.initial_battery,
                },
            ))
        })
        .collect::<Result<Vec<_>, crate::model::ModelError>>()?;
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(ranked.into_iter().map(|(_, id, link)| (id, link)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// System with `noise_density = 0`, `beta * Ph = 0.1`, so `k = 10 * g`,
    /// and `C = downlink_gain` at `eta = Ph = 1`.
    fn sys(max_power: f64) -> SystemParams {
        SystemParams {
            hap_power: 1.0,
            max_user_power: max_power,
            bandwidth: 1.0,
            noise_density: 0.0,
            self_interference: 0.1,
            frame_length: 1.0,
        }
    }

    fn user(id: usize, k: f64, c: f64, b: f64) -> UserParams {
        UserParams {
            id,
            uplink_gain: k * 0.1,
            downlink_gain: c,
            antenna_efficiency: 1.0,
            initial_battery: b,
        }
    }

    #[test]
    fn whole_frame_goes_to_the_top_user_when_it_sustains_full_power() {
        // Top user: B = 1.0, C = 0.5, P_max = 1.2 => minimal full-power slot
        // 1.25 >= 1, so it takes the whole frame at P_max.
        let users = [user(1, 10.0, 0.5, 1.0), user(2, 1.0, 0.1, 0.1)];
        let (schedule, report, stats) = mfsa_with_stats(&users, &sys(1.2)).unwrap();
        assert_eq!(stats.pair_evaluations, 0);
        assert_eq!(schedule.slots.len(), 1);
        let slot = schedule.slots[0];
        assert_eq!(slot.user_id, 1);
        assert!((slot.tau - 1.0).abs() < 1e-15);
        assert!((slot.power - 1.2).abs() < 1e-15);
        assert!(report.feasible, "violations: {:?}", report.violations);
    }

    /// Hand-worked two-user instance: the three candidate splits come out
    /// R1 ~ 1.2574, R2 ~ 2.0038, R3 = 2.0, so case 2 wins and the weak user
    /// transmits first at full power.
    #[test]
    fn two_user_pairwise_cases_match_hand_evaluation() {
        let s = sys(1.0);
        let hi = PtapLink { snr_coefficient: 10.0, harvest_rate: 0.1, initial_battery: 0.2 };
        let lo = PtapLink { snr_coefficient: 1.0, harvest_rate: 0.1, initial_battery: 0.1 };
        let cases = pairwise_cases(&hi, &lo, 1.0, s.max_user_power, s.bandwidth);

        assert!((cases[0].pair_throughput - 1.2574).abs() < 1e-4, "R1 = {}", cases[0].pair_throughput);
        assert!((cases[1].pair_throughput - 2.0038).abs() < 1e-4, "R2 = {}", cases[1].pair_throughput);
        assert!((cases[2].pair_throughput - 2.0).abs() < 1e-12, "R3 = {}", cases[2].pair_throughput);

        // Case 1 detail: tau_min = 0.3 at full power.
        assert!((cases[0].higher.0 - 0.3).abs() < 1e-15);
        assert_eq!(cases[0].higher.1, 1.0);

        let users = [user(1, 10.0, 0.1, 0.2), user(2, 1.0, 0.1, 0.1)];
        let (schedule, report, stats) = mfsa_with_stats(&users, &s).unwrap();
        assert_eq!(stats.pair_evaluations, 1);
        assert_eq!(schedule.slots.len(), 2);
        // Weak user first in time: tau = 1/9 at P_max.
        assert_eq!(schedule.slots[0].user_id, 2);
        assert!((schedule.slots[0].tau - 0.111111).abs() < 1e-6);
        assert!((schedule.slots[0].power - 1.0).abs() < 1e-12);
        // Strong user last: the rest of the frame, energy-limited.
        assert_eq!(schedule.slots[1].user_id, 1);
        assert!((schedule.slots[1].tau - 0.888889).abs() < 1e-6);
        assert!((schedule.slots[1].power - 0.3375).abs() < 1e-6);
        assert!(report.feasible, "violations: {:?}", report.violations);
        assert!((report.sum_throughput - 2.0038).abs() < 1e-4);
    }

    #[test]
    fn single_user_mfsa_and_eta_agree() {
        for (b, c, p_max) in [(0.0, 0.3, 1.0), (2.0, 0.5, 1.2), (0.05, 0.02, 0.5)] {
            let users = [user(1, 5.0, c, b)];
            let s = sys(p_max);
            let (m_sched, m_rep, _) = mfsa_with_stats(&users, &s).unwrap();
            let (e_sched, e_rep) = eta(&users, &s).unwrap();
            assert_eq!(m_sched, e_sched);
            assert_eq!(m_rep.sum_throughput, e_rep.sum_throughput);
            let p = m_sched.slots[0].power;
            assert!((p - p_max.min(b + c)).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_powers_follow_the_energy_rule() {
        // N = 2, both users B = 0.1, C = 0.2, P_max = 1: slot 1 at 0.4 W,
        // slot 2 at 0.6 W.
        let users = [user(1, 2.0, 0.2, 0.1), user(2, 1.0, 0.2, 0.1)];
        let (schedule, report) = eta(&users, &sys(1.0)).unwrap();
        assert_eq!(schedule.slots.len(), 2);
        // Ascending rate order puts user 2 first.
        assert_eq!(schedule.slots[0].user_id, 2);
        assert!((schedule.slots[0].power - 0.4).abs() < 1e-12);
        assert_eq!(schedule.slots[1].user_id, 1);
        assert!((schedule.slots[1].power - 0.6).abs() < 1e-12);
        assert!(report.feasible, "violations: {:?}", report.violations);
    }

    #[test]
    fn eta_slot_lengths_sum_to_exactly_one() {
        for n in 1..=40usize {
            let users: Vec<UserParams> =
                (1..=n).map(|id| user(id, id as f64, 0.1, 0.01)).collect();
            let (schedule, _) = eta(&users, &sys(1.0)).unwrap();
            let total: f64 = schedule.slots.iter().map(|s| s.tau).sum();
            assert_eq!(total, 1.0, "n = {n}");
        }
    }

    #[test]
    fn mfsa_pair_evaluations_stay_linear() {
        let users: Vec<UserParams> = (1..=12)
            .map(|id| user(id, 13.0 - id as f64, 0.02 * id as f64, 0.01))
            .collect();
        let (_, report, stats) = mfsa_with_stats(&users, &sys(0.5)).unwrap();
        assert!(stats.pair_evaluations <= users.len() - 1);
        assert!(report.feasible, "violations: {:?}", report.violations);
    }

    #[test]
    fn case_two_handles_a_lower_user_that_sustains_full_power_forever() {
        // Lower user harvests faster than it can spend (C >= P_max), so its
        // sustainable full-power span is unbounded and only the higher
        // user's minimal slot caps it.
        let hi = PtapLink { snr_coefficient: 10.0, harvest_rate: 0.05, initial_battery: 0.0 };
        let lo = PtapLink { snr_coefficient: 1.0, harvest_rate: 0.4, initial_battery: 0.0 };
        let cases = pairwise_cases(&hi, &lo, 1.0, 0.3, 1.0);
        let case2 = cases[1];
        let tau_min = (0.05 * 1.0) / 0.3;
        assert!((case2.lower.0 - (1.0 - tau_min)).abs() < 1e-12);
        assert_eq!(case2.lower.1, 0.3);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(mfsa(&[], &sys(1.0)), Err(SchedulerError::NoUsers));
        assert_eq!(eta(&[], &sys(1.0)), Err(SchedulerError::NoUsers));
    }

    #[test]
    fn rate_ranking_breaks_ties_by_id() {
        let users = [user(2, 5.0, 0.1, 0.0), user(1, 5.0, 0.2, 0.0)];
        let ranked = rank_by_max_rate_desc(&users, &sys(1.0)).unwrap();
        assert_eq!(ranked[0].0, 1);
        assert_eq!(ranked[1].0, 2);
    }
}
