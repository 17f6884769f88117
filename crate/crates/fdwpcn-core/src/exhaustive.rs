//! Exact optimum by enumerating all transmission orders.
//!
//! Every order is solved to optimality by [`crate::ptap::solve`]; the best
//! result over all `N!` orders is the true optimum of the joint scheduling
//! problem. Cost grows factorially, so the user count is capped.

use alloc::vec::Vec;
use core::fmt;

use crate::model::{evaluate, Schedule, SystemParams, ThroughputReport, UserParams};
use crate::ptap::{self, PtapError, PtapInstance};

/// Default cap on the user count; 8! = 40320 solves per instance.
pub const DEFAULT_USER_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum ExhaustiveError {
    TooLarge { n_users: usize, cap: usize },
    /// `n!` does not fit in a u64.
    FactorialOverflow { n: usize },
    Ptap(PtapError),
    Model(crate::model::ModelError),
}

impl From<PtapError> for ExhaustiveError {
    fn from(e: PtapError) -> Self {
        ExhaustiveError::Ptap(e)
    }
}

impl From<crate::model::ModelError> for ExhaustiveError {
    fn from(e: crate::model::ModelError) -> Self {
        ExhaustiveError::Model(e)
    }
}

impl fmt::Display for ExhaustiveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExhaustiveError::TooLarge { n_users, cap } => {
                write!(f, "{n_users} users exceed the exhaustive-search cap of {cap}")
            }
            ExhaustiveError::FactorialOverflow { n } => write!(f, "{n}! overflows u64"),
            ExhaustiveError::Ptap(e) => write!(f, "{e}"),
            ExhaustiveError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ExhaustiveError {}

/// Search statistics; the solve count is the complexity witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptStats {
    /// Transmission orders enumerated (= allocation solves performed).
    pub orders_evaluated: u64,
}

/// Number of transmission orders for `n` users, i.e. `n!`.
pub fn order_count(n: usize) -> Result<u64, ExhaustiveError> {
    let mut acc: u64 = 1;
    for i in 2..=n as u64 {
        acc = acc.checked_mul(i).ok_or(ExhaustiveError::FactorialOverflow { n })?;
    }
    Ok(acc)
}

/// Finds the throughput-optimal schedule by trying every transmission order
/// with the default user cap.
pub fn solve_opt(
    users: &[UserParams],
    sys: &SystemParams,
    tol: f64,
) -> Result<(Schedule, ThroughputReport), ExhaustiveError> {
    let (schedule, report, _) = solve_opt_with_stats(users, sys, tol, DEFAULT_USER_CAP)?;
    Ok((schedule, report))
}

/// [`solve_opt`] with an explicit cap and search statistics.
///
/// Orders are enumerated in lexicographic user-id sequence and only strict
/// objective improvements are kept, so ties resolve to the
/// lexicographically smallest order; together with the deterministic solver
/// this makes the result reproducible. Users the allocation leaves at zero
/// time are pruned from the output schedule.
pub fn solve_opt_with_stats(
    users: &[UserParams],
    sys: &SystemParams,
    tol: f64,
    cap: usize,
) -> Result<(Schedule, ThroughputReport, OptStats), ExhaustiveError> {
    if users.is_empty() {
        return Err(ExhaustiveError::Ptap(PtapError::EmptyInstance));
    }
    if users.len() > cap {
        return Err(ExhaustiveError::TooLarge { n_users: users.len(), cap });
    }

    let mut by_id: Vec<UserParams> = users.to_vec();
    by_id.sort_by_key(|u| u.id);

    // Permuting positions of the id-sorted list in lexicographic order
    // enumerates orders in lexicographic user-id sequence.
    let mut base: Vec<usize> = (0..users.len()).collect();
    let mut best: Option<(f64, Schedule)> = None;
    let mut orders = 0u64;
    loop {
        let ordered: Vec<UserParams> = base.iter().map(|&i| by_id[i]).collect();
        let ids: Vec<usize> = ordered.iter().map(|u| u.id).collect();
        let inst = PtapInstance::new(ordered, *sys)?;
        let sol = ptap::solve(&inst, tol)?;
        orders += 1;
        if best.as_ref().map_or(true, |(obj, _)| sol.objective > *obj) {
            best = Some((sol.objective, sol.to_schedule(&ids)));
        }
        if !next_permutation(&mut base) {
            break;
        }
    }

    let (_, schedule) = best.expect("at least one order was evaluated");
    let report = evaluate(&schedule, users, sys)?;
    Ok((schedule, report, OptStats { orders_evaluated: orders }))
}

/// Advances `perm` to its lexicographic successor; false once exhausted.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}
