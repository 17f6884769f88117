//! Optimal power and time allocation for a fixed transmission order.
//!
//! With the order fixed, maximizing sum throughput is convex once rewritten
//! in the variables `(tau_i, e_i)` with `e_i = P_i * tau_i`: the objective
//! `sum W tau_i log2(1 + k_i e_i / tau_i)` is a sum of perspective functions
//! (concave), and every constraint is linear:
//!
//! - energy causality: `e_i <= B_i + C_i * sum_{j<=i} tau_j`,
//! - power limit:      `e_i <= P_max * tau_i`,
//! - frame length:     `sum tau_i <= 1`,
//! - nonnegativity:    `tau_i >= 0`, `e_i >= 0`.
//!
//! [`solve`] runs a log-barrier interior method with Newton centering steps.
//! The barrier parameter gives a duality-gap certificate of `m / t` with
//! `m = 4N + 1` constraints, reported in [`PtapSolution::gap_certificate`].
//!
//! [`grid_oracle`] is a brute-force scan of the feasible polytope on a
//! regular grid, used only by tests as an independent check of the solver.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{rate_from_energy, snr_coefficient, Schedule, Slot, SystemParams, UserParams};

/// Newton-step budget for one barrier run.
const MAX_NEWTON_STEPS: usize = 500;
/// Barrier parameter growth factor per outer stage.
const BARRIER_GROWTH: f64 = 20.0;
/// Newton decrement threshold (lambda^2 / 2) for a centered point.
const CENTERING_TOL: f64 = 1e-9;
/// Interior floor on slot lengths during iteration.
const TAU_FLOOR: f64 = 1e-12;
/// Slots shorter than this are zeroed in the final snapping pass.
const TAU_SNAP: f64 = 1e-9;
/// Slots shorter than this trigger an exact-zero re-solve (active-set
/// polish): the barrier leaves excluded users with dust-sized slots, and
/// re-solving without them recovers the clean support.
const TAU_DUST: f64 = 1e-6;

/// A fixed-order allocation problem over raw link coefficients.
///
/// This is the coefficient form [`solve`] reduces a [`PtapInstance`] to;
/// it is public so tests and oracles can construct degenerate corners
/// (for example a user with no energy at all) that validated
/// [`UserParams`] cannot express.
#[derive(Debug, Clone, PartialEq)]
pub struct PtapProblem {
    /// Channel bandwidth, hertz.
    pub bandwidth: f64,
    /// Per-user maximum transmit power, watts.
    pub max_power: f64,
    /// Links in transmission order.
    pub links: Vec<PtapLink>,
}

/// Per-user coefficients entering the allocation problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtapLink {
    /// Effective SNR coefficient, per watt.
    pub snr_coefficient: f64,
    /// Energy harvesting rate, watts.
    pub harvest_rate: f64,
    /// Initial battery energy, joules.
    pub initial_battery: f64,
}

/// A fixed transmission order over concrete users.
#[derive(Debug, Clone, PartialEq)]
pub struct PtapInstance {
    /// Users in their transmission order.
    pub ordered_users: Vec<UserParams>,
    pub sys: SystemParams,
}

impl PtapInstance {
    pub fn new(ordered_users: Vec<UserParams>, sys: SystemParams) -> Result<Self, PtapError> {
        if ordered_users.is_empty() {
            return Err(PtapError::EmptyInstance);
        }
        for (i, u) in ordered_users.iter().enumerate() {
            if ordered_users[..i].iter().any(|v| v.id == u.id) {
                return Err(PtapError::DuplicateUser(u.id));
            }
        }
        Ok(PtapInstance { ordered_users, sys })
    }

    /// Reduces the instance to its coefficient form.
    pub fn problem(&self) -> Result<PtapProblem, PtapError> {
        let links = self
            .ordered_users
            .iter()
            .map(|u| {
                Ok(PtapLink {
                    snr_coefficient: snr_coefficient(u, &self.sys)?,
                    harvest_rate: crate::model::harvest_rate(u, &self.sys),
                    initial_battery: u.initial_battery,
                })
            })
            .collect::<Result<Vec<_>, PtapError>>()?;
        Ok(PtapProblem {
            bandwidth: self.sys.bandwidth,
            max_power: self.sys.max_user_power,
            links,
        })
    }
}

/// The solver's output for one fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct PtapSolution {
    /// Slot lengths per ordered user, frame fractions.
    pub taus: Vec<f64>,
    /// Consumed energies `e_i = P_i * tau_i`, joules.
    pub energies: Vec<f64>,
    /// Recovered transmit powers, watts; zero for zero-length slots.
    pub powers: Vec<f64>,
    /// Achieved sum throughput, bits per frame.
    pub objective: f64,
    /// Duality-gap bound: the global maximum exceeds `objective` by at
    /// most this much, bits per frame.
    pub gap_certificate: f64,
    /// Total Newton steps spent.
    pub iterations: usize,
}

impl PtapSolution {
    /// Converts the allocation into a schedule, dropping zero-length slots.
    pub fn to_schedule(&self, ordered_ids: &[usize]) -> Schedule {
        let slots = ordered_ids
            .iter()
            .zip(self.taus.iter().zip(&self.powers))
            .filter(|(_, (&tau, _))| tau > 0.0)
            .map(|(&user_id, (&tau, &power))| Slot { user_id, tau, power })
            .collect();
        Schedule::new(slots)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PtapError {
    EmptyInstance,
    DuplicateUser(usize),
    /// Every user has a zero SNR coefficient; the objective is identically
    /// zero and no meaningful allocation exists.
    Degenerate,
    /// The Newton iteration budget ran out before the requested tolerance
    /// was certified; usually the tolerance is too tight for the instance's
    /// conditioning.
    NonConvergence { steps: usize },
    InvalidTolerance(f64),
    /// The grid oracle only handles tiny instances: its cost grows as
    /// `resolution^(-2N)`.
    OracleTooLarge { n_users: usize, max: usize },
    Model(crate::model::ModelError),
}

impl From<crate::model::ModelError> for PtapError {
    fn from(e: crate::model::ModelError) -> Self {
        PtapError::Model(e)
    }
}

impl fmt::Display for PtapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PtapError::EmptyInstance => write!(f, "instance has no users"),
            PtapError::DuplicateUser(id) => write!(f, "user {id} appears twice in the order"),
            PtapError::Degenerate => write!(f, "all SNR coefficients are zero"),
            PtapError::NonConvergence { steps } => {
                write!(f, "no convergence within {steps} Newton steps")
            }
            PtapError::InvalidTolerance(t) => write!(f, "tolerance must be > 0, got {t}"),
            PtapError::OracleTooLarge { n_users, max } => {
                write!(f, "grid oracle supports at most {max} users, got {n_users}")
            }
            PtapError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PtapError {}

/// Solves the fixed-order allocation to global optimality.
///
/// The returned point is feasible and its objective is within
/// `tol * objective` of the maximum, certified by
/// `gap_certificate <= tol * objective`.
pub fn solve(inst: &PtapInstance, tol: f64) -> Result<PtapSolution, PtapError> {
    solve_problem(&inst.problem()?, tol)
}

/// [`solve`] on the coefficient form.
pub fn solve_problem(prob: &PtapProblem, tol: f64) -> Result<PtapSolution, PtapError> {
    if !(tol > 0.0) {
        return Err(PtapError::InvalidTolerance(tol));
    }
    if prob.links.is_empty() {
        return Err(PtapError::EmptyInstance);
    }
    if prob.links.iter().all(|l| l.snr_coefficient <= 0.0) {
        return Err(PtapError::Degenerate);
    }

    let n = prob.links.len();

    // Users that cannot acquire any energy even after a full frame get
    // exact zeros up front; the barrier needs a strict interior in e.
    let free: Vec<usize> = (0..n)
        .filter(|&i| prob.links[i].initial_battery + prob.links[i].harvest_rate > 0.0)
        .collect();

    if free.is_empty() {
        // No user can transmit; any time split is optimal with zero rate.
        let share = 1.0 / n as f64;
        return Ok(PtapSolution {
            taus: vec![share; n],
            energies: vec![0.0; n],
            powers: vec![0.0; n],
            objective: 0.0,
            gap_certificate: 0.0,
            iterations: 0,
        });
    }

    let mut active = free.clone();
    let mut best = barrier_solve(prob, &active, tol)?;
    let mut iterations = best.newton_steps;

    // Active-set polish: re-solve with dust users pinned to exactly zero.
    // The barrier cannot reach the boundary, so excluded users keep
    // dust-sized slots that would otherwise pollute the support.
    for _ in 0..2 {
        let kept: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&i| best.tau[i] >= TAU_DUST)
            .collect();
        if kept.len() == active.len() || kept.is_empty() {
            break;
        }
        match barrier_solve(prob, &kept, tol) {
            Ok(polished) => {
                iterations += polished.newton_steps;
                let floor = tol * best.objective.abs().max(1e-12);
                if polished.objective >= best.objective - floor {
                    best = polished;
                    active = kept;
                } else {
                    break;
                }
            }
            // The unpolished solution is already certified; keep it.
            Err(PtapError::NonConvergence { .. }) => break,
            Err(e) => return Err(e),
        }
    }

    // Final snap: zero sub-threshold slots, then saturate every energy at
    // its exact cap under the (slightly) shortened prefixes. The objective
    // is increasing in each energy, so given the final slot lengths the
    // caps are optimal; this also removes the barrier's boundary slop, so
    // every user ends exactly at the power cap or exactly energy-exhausted.
    let mut tau = best.tau;
    let mut energy = vec![0.0; n];
    for t in tau.iter_mut() {
        if *t < TAU_SNAP {
            *t = 0.0;
        }
    }
    let mut prefix = 0.0;
    for i in 0..n {
        prefix += tau[i];
        let cap = (prob.links[i].initial_battery + prob.links[i].harvest_rate * prefix)
            .min(prob.max_power * tau[i]);
        energy[i] = cap.max(0.0);
    }

    let powers: Vec<f64> =
        tau.iter().zip(&energy).map(|(&t, &e)| if t > 0.0 { e / t } else { 0.0 }).collect();
    let objective: f64 = (0..n)
        .map(|i| rate_from_energy(tau[i], energy[i], prob.links[i].snr_coefficient, prob.bandwidth))
        .sum();

    Ok(PtapSolution {
        taus: tau,
        energies: energy,
        powers,
        objective,
        gap_certificate: best.gap,
        iterations,
    })
}

/// Raw barrier output on the subset of users allowed nonzero allocations.
struct BarrierOutput {
    tau: Vec<f64>,
    energy: Vec<f64>,
    /// Objective in bits per frame at the interior point.
    objective: f64,
    /// Certified duality-gap bound, bits per frame.
    gap: f64,
    newton_steps: usize,
}

/// Log-barrier interior method over the users listed in `active`; all other
/// users are fixed at `tau = e = 0` (they also vanish from the prefix sums,
/// which only tightens the problem the active users see -- a user pinned to
/// zero time contributes no harvesting time to anyone).
fn barrier_solve(prob: &PtapProblem, active: &[usize], tol: f64) -> Result<BarrierOutput, PtapError> {
    let n = active.len();
    let p_max = prob.max_power;
    // Normalized coefficients: energies are measured in units of P_max so
    // every variable and constraint is O(1), and the objective is measured
    // per hertz. Both rescalings are undone on exit.
    let kappa: Vec<f64> = active.iter().map(|&i| prob.links[i].snr_coefficient * p_max).collect();
    let bhat: Vec<f64> = active.iter().map(|&i| prob.links[i].initial_battery / p_max).collect();
    let chat: Vec<f64> = active.iter().map(|&i| prob.links[i].harvest_rate / p_max).collect();

    let dim = 2 * n; // x = [tau_0..tau_{n-1}, w_0..w_{n-1}]
    let m = (4 * n + 1) as f64;

    // Strictly feasible start: half the frame split evenly, half of each
    // user's energy headroom.
    let mut x = vec![0.0; dim];
    {
        let tau0 = 0.5 / n as f64;
        let mut prefix = 0.0;
        for i in 0..n {
            prefix += tau0;
            x[i] = tau0;
            x[n + i] = 0.5 * tau0.min(bhat[i] + chat[i] * prefix);
        }
    }

    let mut grad = vec![0.0; dim];
    let mut hess = vec![0.0; dim * dim];
    let mut delta = vec![0.0; dim];
    let mut trial = vec![0.0; dim];

    let mut t = 1.0;
    let mut steps = 0usize;

    let objective_of = |x: &[f64]| -> f64 {
        let mut f = 0.0;
        for i in 0..n {
            let tau = x[i];
            if tau > 0.0 {
                f += tau * libm::log2(1.0 + kappa[i] * x[n + i] / tau);
            }
        }
        f
    };

    // phi_t(x) = -t * F(x) - sum log(-g); +inf outside the interior.
    let phi_of = |x: &[f64], t: f64| -> f64 {
        let mut phi = -t * objective_of(x);
        let mut prefix = 0.0;
        let mut total = 0.0;
        for i in 0..n {
            let (tau, w) = (x[i], x[n + i]);
            prefix += tau;
            total += tau;
            let slack_e = bhat[i] + chat[i] * prefix - w;
            let slack_p = tau - w;
            if tau <= 0.0 || w <= 0.0 || slack_e <= 0.0 || slack_p <= 0.0 {
                return f64::INFINITY;
            }
            phi -= libm::log(tau) + libm::log(w) + libm::log(slack_e) + libm::log(slack_p);
        }
        let slack_t = 1.0 - total;
        if slack_t <= 0.0 {
            return f64::INFINITY;
        }
        phi - libm::log(slack_t)
    };

    loop {
        // Newton centering at the current t.
        loop {
            if steps >= MAX_NEWTON_STEPS {
                return Err(PtapError::NonConvergence { steps });
            }
            steps += 1;

            grad.fill(0.0);
            hess.fill(0.0);

            // Objective contribution (note phi carries -t * F).
            for i in 0..n {
                let (tau, w) = (x[i], x[n + i]);
                let u = kappa[i] * w / tau;
                let s = 1.0 + u;
                let ln2 = core::f64::consts::LN_2;
                grad[i] += -t * (libm::log(s) - u / s) / ln2;
                grad[n + i] += -t * (kappa[i] / s) / ln2;
                let scale = t / (ln2 * tau * s * s);
                hess[i * dim + i] += scale * u * u;
                hess[i * dim + (n + i)] += -scale * kappa[i] * u;
                hess[(n + i) * dim + (n + i)] += scale * kappa[i] * kappa[i];
            }

            // Barrier contributions. Energy constraints couple each w_i to
            // the tau-prefix, so their Hessian blocks are built from suffix
            // accumulations over 1/slack and 1/slack^2.
            let mut prefix = 0.0;
            let mut total = 0.0;
            let mut inv_e = vec![0.0; n]; // 1 / slack_e(i)
            let mut inv2_e = vec![0.0; n]; // 1 / slack_e(i)^2
            for i in 0..n {
                let (tau, w) = (x[i], x[n + i]);
                prefix += tau;
                total += tau;
                let slack_e = bhat[i] + chat[i] * prefix - w;
                let slack_p = tau - w;
                inv_e[i] = 1.0 / slack_e;
                inv2_e[i] = inv_e[i] * inv_e[i];

                // w_i >= 0 and tau_i >= 0 barriers.
                grad[n + i] += -1.0 / w;
                hess[(n + i) * dim + (n + i)] += 1.0 / (w * w);
                grad[i] += -1.0 / tau;
                hess[i * dim + i] += 1.0 / (tau * tau);

                // Power cap w_i <= tau_i.
                let q = 1.0 / (slack_p * slack_p);
                grad[n + i] += 1.0 / slack_p;
                grad[i] += -1.0 / slack_p;
                hess[(n + i) * dim + (n + i)] += q;
                hess[i * dim + i] += q;
                hess[i * dim + (n + i)] += -q;

                // Energy cap, own-variable part.
                grad[n + i] += inv_e[i];
                hess[(n + i) * dim + (n + i)] += inv2_e[i];
            }
            // Energy cap, prefix parts: grad over tau_j sums c_i/slack_i for
            // i >= j; the tau-tau block sums c_i^2/slack_i^2 likewise.
            let mut suffix_grad = 0.0;
            let mut suffix_hess = 0.0;
            for j in (0..n).rev() {
                suffix_grad += chat[j] * inv_e[j];
                suffix_hess += chat[j] * chat[j] * inv2_e[j];
                grad[j] += -suffix_grad;
                for l in 0..=j {
                    hess[l * dim + j] += suffix_hess;
                }
                for i in j..n {
                    hess[j * dim + (n + i)] += -chat[i] * inv2_e[i];
                }
            }
            // Frame-length constraint.
            let slack_t = 1.0 - total;
            let qt = 1.0 / (slack_t * slack_t);
            for j in 0..n {
                grad[j] += 1.0 / slack_t;
                for l in 0..=j {
                    hess[l * dim + j] += qt;
                }
            }
            // Mirror the upper triangle.
            for r in 0..dim {
                for c in 0..r {
                    hess[r * dim + c] = hess[c * dim + r];
                }
            }

            if !newton_direction(&mut hess, &grad, &mut delta, dim) {
                return Err(PtapError::NonConvergence { steps });
            }

            let decrement2: f64 = -grad.iter().zip(&delta).map(|(g, d)| g * d).sum::<f64>();
            if decrement2 * 0.5 <= CENTERING_TOL {
                break;
            }

            // Step length: stay strictly inside, then backtrack on phi.
            let mut alpha = 0.99 * max_feasible_step(&x, &delta, &bhat, &chat, n);
            alpha = alpha.min(1.0);
            let phi0 = phi_of(&x, t);
            let slope: f64 = grad.iter().zip(&delta).map(|(g, d)| g * d).sum();
            let mut improved = false;
            for _ in 0..60 {
                for i in 0..dim {
                    trial[i] = x[i] + alpha * delta[i];
                }
                for v in trial.iter_mut().take(n) {
                    *v = v.max(TAU_FLOOR);
                }
                if phi_of(&trial, t) <= phi0 + 0.01 * alpha * slope {
                    improved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !improved {
                // Numerically stuck; the point is as centered as the
                // arithmetic allows.
                break;
            }
            x.copy_from_slice(&trial);
        }

        let f_now = objective_of(&x);
        if m / t <= 0.1 * tol * f_now.abs().max(1e-12) {
            let mut tau = vec![0.0; prob.links.len()];
            let mut energy = vec![0.0; prob.links.len()];
            for (slot, &i) in active.iter().enumerate() {
                tau[i] = x[slot];
                energy[i] = x[n + slot] * p_max;
            }
            return Ok(BarrierOutput {
                tau,
                energy,
                objective: prob.bandwidth * f_now,
                gap: prob.bandwidth * m / t,
                newton_steps: steps,
            });
        }
        t *= BARRIER_GROWTH;
        if t > 1e18 {
            return Err(PtapError::NonConvergence { steps });
        }
    }
}

/// Largest step keeping every constraint strictly slack (before the 0.99
/// shrink). All constraints are linear, so each gives a simple ratio test.
fn max_feasible_step(x: &[f64], delta: &[f64], bhat: &[f64], chat: &[f64], n: usize) -> f64 {
    let mut alpha = f64::INFINITY;
    let mut limit = |slack: f64, rate: f64| {
        if rate > 0.0 {
            alpha = alpha.min(slack / rate);
        }
    };
    let mut prefix = 0.0;
    let mut dprefix = 0.0;
    let mut total = 0.0;
    let mut dtotal = 0.0;
    for i in 0..n {
        let (tau, w) = (x[i], x[n + i]);
        let (dtau, dw) = (delta[i], delta[n + i]);
        prefix += tau;
        dprefix += dtau;
        total += tau;
        dtotal += dtau;
        limit(tau, -dtau);
        limit(w, -dw);
        limit(tau - w, dw - dtau);
        limit(bhat[i] + chat[i] * prefix - w, dw - chat[i] * dprefix);
    }
    limit(1.0 - total, dtotal);
    alpha
}

/// Solves `H d = -g` by Cholesky, adding diagonal jitter if the numeric
/// factorization stalls. Returns false only if the matrix defies repair.
fn newton_direction(h: &mut [f64], g: &[f64], d: &mut [f64], dim: usize) -> bool {
    let max_diag =
        (0..dim).map(|i| h[i * dim + i].abs()).fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    let mut jitter = 0.0;
    for _ in 0..6 {
        let mut l = h.to_vec();
        if jitter > 0.0 {
            for i in 0..dim {
                l[i * dim + i] += jitter;
            }
        }
        if cholesky_in_place(&mut l, dim) {
            // Forward then back substitution on -g.
            for i in 0..dim {
                let mut s = -g[i];
                for j in 0..i {
                    s -= l[i * dim + j] * d[j];
                }
                d[i] = s / l[i * dim + i];
            }
            for i in (0..dim).rev() {
                let mut s = d[i];
                for j in i + 1..dim {
                    s -= l[j * dim + i] * d[j];
                }
                d[i] = s / l[i * dim + i];
            }
            return true;
        }
        jitter = if jitter == 0.0 { 1e-14 * max_diag } else { jitter * 100.0 };
    }
    false
}

/// In-place lower Cholesky; returns false on a non-positive pivot.
fn cholesky_in_place(a: &mut [f64], dim: usize) -> bool {
    for i in 0..dim {
        for j in 0..=i {
            let mut s = a[i * dim + j];
            for k in 0..j {
                s -= a[i * dim + k] * a[j * dim + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return false;
                }
                a[i * dim + i] = libm::sqrt(s);
            } else {
                a[i * dim + j] = s / a[j * dim + j];
            }
        }
    }
    true
}

/// Maximum number of users the grid oracle accepts.
pub const ORACLE_MAX_USERS: usize = 3;

/// Brute-force scan of the feasible polytope on a regular grid.
///
/// Slot lengths run over multiples of `resolution`; for each time split the
/// energies run over a regular grid on `[0, cap_i]`. The objective is
/// separable across users once the time split is fixed, so the maximum over
/// the energy grid is computed per user. Every visited point is feasible,
/// so the result is a lower bound on the true optimum.
pub fn grid_oracle(inst: &PtapInstance, resolution: f64) -> Result<f64, PtapError> {
    grid_oracle_problem(&inst.problem()?, resolution)
}

/// [`grid_oracle`] on the coefficient form.
pub fn grid_oracle_problem(prob: &PtapProblem, resolution: f64) -> Result<f64, PtapError> {
    let n = prob.links.len();
    if n == 0 {
        return Err(PtapError::EmptyInstance);
    }
    if n > ORACLE_MAX_USERS {
        return Err(PtapError::OracleTooLarge { n_users: n, max: ORACLE_MAX_USERS });
    }
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(PtapError::InvalidTolerance(resolution));
    }
    let steps = libm::round(1.0 / resolution) as usize;

    let mut counts = vec![0usize; n];
    let mut best = 0.0f64;
    scan_time_splits(prob, steps, 0, steps, &mut counts, &mut best);
    Ok(best)
}

fn scan_time_splits(
    prob: &PtapProblem,
    steps: usize,
    level: usize,
    remaining: usize,
    counts: &mut [usize],
    best: &mut f64,
) {
    let n = prob.links.len();
    if level == n {
        let mut objective = 0.0;
        let mut prefix = 0.0;
        for i in 0..n {
            let tau = counts[i] as f64 / steps as f64;
            prefix += tau;
            let link = &prob.links[i];
            let cap =
                (link.initial_battery + link.harvest_rate * prefix).min(prob.max_power * tau);
            // Separable inner maximum over the energy grid for this user.
            let mut user_best = 0.0f64;
            for j in 0..=steps {
                let e = cap * j as f64 / steps as f64;
                let r = rate_from_energy(tau, e, link.snr_coefficient, prob.bandwidth);
                user_best = user_best.max(r);
            }
            objective += user_best;
        }
        *best = best.max(objective);
        return;
    }
    for c in 0..=remaining {
        counts[level] = c;
        scan_time_splits(prob, steps, level + 1, remaining - c, counts, best);
    }
}

/// Worst-case gap between the true optimum and [`grid_oracle`]'s value at a
/// given resolution, from a Lipschitz bound on the reduced objective
/// `F(tau) = sum_i max_e rate_i(tau_i, e)`:
/// each `|dF/dtau_j|` is at most `r_j^max + N * W / ln 2`.
pub fn grid_resolution_bound(prob: &PtapProblem, resolution: f64) -> f64 {
    let n = prob.links.len() as f64;
    let w = prob.bandwidth;
    let ln2 = core::f64::consts::LN_2;
    let sum_rmax: f64 = prob
        .links
        .iter()
        .map(|l| w * libm::log2(1.0 + l.snr_coefficient * prob.max_power))
        .sum();
    let steps = libm::round(1.0 / resolution).max(1.0);
    resolution * (sum_rmax + n * n * w / ln2) + n * w / (steps * ln2)
}
