//! Time-share allocation: minimize total cost over users plus a sleep share.
//!
//! ```text
//! minimize    sum_k c_k(mu_k) + sleep_w * nu
//! subject to  sum_k mu_k + nu = 1,  mu_k >= lo_k,  nu >= 0
//! ```
//!
//! `lo_k` is the smallest share at which user `k` meets its rate within the
//! transmit power limit. [`ShareProblem::solve_barrier`] is a log-barrier
//! interior-point method with Newton steps. [`ShareProblem::solve_kkt`] uses
//! separability to solve the optimality conditions directly by root finding on
//! the common marginal cost. [`ShareProblem::solve`] runs both and returns the
//! KKT point, which is exact to machine precision.

use alloc::vec;
use alloc::vec::Vec;

use super::cost::UserCost;
use crate::error::{Error, Result};

/// Outcome of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SolveStatus {
    /// Converged to the requested accuracy.
    Optimal,
    /// Iteration limit reached; the best point found is returned.
    MaxIterations,
    /// Minimum shares exceed the frame.
    Infeasible,
}

/// Shares and objective of a solved problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareSolution {
    /// Share of each user (zero-rate users get zero).
    pub shares: Vec<f64>,
    /// Sleep share `nu`.
    pub sleep_share: f64,
    /// Objective value (W).
    pub objective: f64,
    /// Transmit power of each user while it is served (W).
    pub tx_power_w: Vec<f64>,
    /// Solver status.
    pub status: SolveStatus,
    /// Newton steps taken by the barrier method.
    pub newton_steps: usize,
}

impl ShareSolution {
    /// True unless the problem was infeasible.
    pub fn is_feasible(&self) -> bool {
        self.status != SolveStatus::Infeasible
    }
}

/// Iteration limits of the barrier method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSettings {
    /// Outer (centering) iterations.
    pub max_outer: usize,
    /// Newton steps per centering.
    pub max_inner: usize,
    /// Relative duality-gap target.
    pub gap_tolerance: f64,
    /// Barrier parameter growth per outer iteration.
    pub growth: f64,
}

impl Default for BarrierSettings {
    fn default() -> Self {
        Self {
            max_outer: 50,
            max_inner: 100,
            gap_tolerance: 1e-10,
            growth: 10.0,
        }
    }
}

/// The share allocation problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareProblem {
    /// Per-user costs.
    pub users: Vec<UserCost>,
    /// Cost coefficient of the sleep share (W).
    pub sleep_w: f64,
}

impl ShareProblem {
    /// Builds a problem after checking that every cost is convex on its
    /// feasible interval (second derivative sampled at five points).
    pub fn new(users: Vec<UserCost>, sleep_w: f64) -> Result<Self> {
        if !sleep_w.is_finite() {
            return Err(Error::invalid("sleep_w", "must be finite"));
        }
        for (k, cost) in users.iter().enumerate() {
            if !(cost.rate_bps >= 0.0 && cost.rate_bps.is_finite()) {
                return Err(Error::invalid(
                    alloc::format!("users[{k}].rate_bps"),
                    "must be finite and >= 0",
                ));
            }
            if cost.rate_bps == 0.0 {
                continue;
            }
            let lo = cost.min_share();
            if !(lo < 1.0) {
                continue;
            }
            for i in 1..=5 {
                let mu = lo + (1.0 - lo) * f64::from(i) / 5.0;
                if !(cost.second_derivative(mu) >= 0.0) {
                    return Err(Error::invalid(
                        alloc::format!("users[{k}]"),
                        alloc::format!("cost is not convex at share {mu}"),
                    ));
                }
            }
        }
        Ok(Self { users, sleep_w })
    }

    fn finish(
        &self,
        shares: Vec<f64>,
        sleep_share: f64,
        status: SolveStatus,
        newton_steps: usize,
    ) -> ShareSolution {
        let objective = if status == SolveStatus::Infeasible {
            f64::INFINITY
        } else {
            self.objective(&shares, sleep_share)
        };
        let tx_power_w = self
            .users
            .iter()
            .zip(&shares)
            .map(|(c, &mu)| if mu > 0.0 { c.tx_power(mu) } else { 0.0 })
            .collect();
        ShareSolution {
            shares,
            sleep_share,
            objective,
            tx_power_w,
            status,
            newton_steps,
        }
    }

    /// Objective at the given point.
    pub fn objective(&self, shares: &[f64], sleep_share: f64) -> f64 {
        let users: f64 = self
            .users
            .iter()
            .zip(shares)
            .map(|(c, &mu)| c.value(mu))
            .sum();
        users + self.sleep_w * sleep_share
    }

    /// Minimum share of every user.
    pub fn min_shares(&self) -> Vec<f64> {
        self.users.iter().map(UserCost::min_share).collect()
    }

    fn active(&self) -> Vec<usize> {
        (0..self.users.len())
            .filter(|&k| self.users[k].rate_bps > 0.0)
            .collect()
    }

    fn infeasible(&self) -> ShareSolution {
        self.finish(self.min_shares(), 0.0, SolveStatus::Infeasible, 0)
    }

    /// Returns the solution early when the problem is infeasible, trivial or
    /// pinned to its minimum shares.
    fn presolve(&self) -> Option<ShareSolution> {
        let lo = self.min_shares();
        if lo.iter().any(|v| !v.is_finite()) {
            return Some(self.infeasible());
        }
        let total: f64 = lo.iter().sum();
        if total > 1.0 {
            return Some(self.infeasible());
        }
        let pinned = total == 1.0;
        if pinned || self.active().is_empty() {
            return Some(self.finish(lo, 1.0 - total, SolveStatus::Optimal, 0));
        }
        None
    }

    /// Barrier + exact KKT finish. See the module documentation.
    pub fn solve(&self) -> ShareSolution {
        let barrier = self.solve_barrier(&BarrierSettings::default());
        if !barrier.is_feasible() {
            return barrier;
        }
        let mut exact = self.solve_kkt();
        exact.newton_steps = barrier.newton_steps;
        if exact.objective <= barrier.objective + 1e-9 * barrier.objective.abs() {
            exact
        } else {
            barrier
        }
    }

    /// Log-barrier interior-point method.
    ///
    /// The sleep share is eliminated through the equality constraint, so the
    /// Hessian is diagonal plus rank one and each Newton step costs `O(K)`.
    pub fn solve_barrier(&self, settings: &BarrierSettings) -> ShareSolution {
        if let Some(done) = self.presolve() {
            return done;
        }
        let active = self.active();
        let lo: Vec<f64> = active.iter().map(|&k| self.users[k].min_share()).collect();
        let costs: Vec<UserCost> = active.iter().map(|&k| self.users[k]).collect();
        let m = costs.len();
        let slack = 1.0 - lo.iter().sum::<f64>();
        let mut mu: Vec<f64> = lo.iter().map(|l| l + slack / (m as f64 + 1.0)).collect();

        let sleep_w = self.sleep_w;
        let value = |mu: &[f64]| -> f64 {
            let nu = 1.0 - mu.iter().sum::<f64>();
            costs.iter().zip(mu).map(|(c, &x)| c.value(x)).sum::<f64>() + sleep_w * nu
        };
        let barrier_value = |mu: &[f64], t: f64| -> Option<f64> {
            let nu = 1.0 - mu.iter().sum::<f64>();
            if !(nu > 0.0) || mu.iter().zip(&lo).any(|(x, l)| !(x > l)) {
                return None;
            }
            let logs: f64 = mu
                .iter()
                .zip(&lo)
                .map(|(x, l)| libm::log(x - l))
                .sum::<f64>()
                + libm::log(nu);
            Some(t * value(mu) - logs)
        };

        let constraints = (m + 1) as f64;
        let mut t = constraints / value(&mu).abs().max(1.0);
        let mut steps = 0usize;
        let mut converged = false;
        let mut grad = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut delta = vec![0.0; m];
        let mut trial = vec![0.0; m];

        for _ in 0..settings.max_outer {
            for _ in 0..settings.max_inner {
                let nu = 1.0 - mu.iter().sum::<f64>();
                for i in 0..m {
                    let gap = mu[i] - lo[i];
                    grad[i] = t * (costs[i].derivative(mu[i]) - sleep_w) - 1.0 / gap + 1.0 / nu;
                    diag[i] = t * costs[i].second_derivative(mu[i]) + 1.0 / (gap * gap);
                }
                // (D + a 11^T)^-1 g by Sherman-Morrison.
                let a = 1.0 / (nu * nu);
                let inv_sum: f64 = diag.iter().map(|d| 1.0 / d).sum();
                let weighted: f64 = grad.iter().zip(&diag).map(|(g, d)| g / d).sum();
                let correction = a * weighted / (1.0 + a * inv_sum);
                for i in 0..m {
                    delta[i] = -(grad[i] - correction) / diag[i];
                }
                let decrement: f64 = -grad.iter().zip(&delta).map(|(g, d)| g * d).sum::<f64>();
                steps += 1;
                if decrement / 2.0 <= 1e-12 {
                    break;
                }
                let current = barrier_value(&mu, t).unwrap_or(f64::INFINITY);
                let mut s = 1.0;
                let mut accepted = false;
                for _ in 0..60 {
                    for i in 0..m {
                        trial[i] = mu[i] + s * delta[i];
                    }
                    if let Some(v) = barrier_value(&trial, t) {
                        if v <= current - 0.25 * s * decrement {
                            accepted = true;
                            break;
                        }
                    }
                    s *= 0.5;
                }
                if !accepted {
                    break;
                }
                mu.copy_from_slice(&trial);
            }
            if constraints / t <= settings.gap_tolerance * value(&mu).abs().max(1.0) {
                converged = true;
                break;
            }
            t *= settings.growth;
        }

        let mut shares = vec![0.0; self.users.len()];
        for (i, &k) in active.iter().enumerate() {
            shares[k] = mu[i];
        }
        let sleep_share = (1.0 - shares.iter().sum::<f64>()).max(0.0);
        let status = if converged {
            SolveStatus::Optimal
        } else {
            SolveStatus::MaxIterations
        };
        self.finish(shares, sleep_share, status, steps)
    }

    /// Solves the optimality conditions directly.
    ///
    /// Every active user's share satisfies `c_k'(mu_k) = theta` unless pinned at
    /// `lo_k`. If the sleep share is positive then `theta = sleep_w`; otherwise
    /// `theta` is the root of `sum_k mu_k(theta) = 1`, found by safeguarded
    /// Newton iteration on a bracket that depends only on the user costs.
    pub fn solve_kkt(&self) -> ShareSolution {
        if let Some(done) = self.presolve() {
            return done;
        }
        let active = self.active();
        let lo: Vec<f64> = active.iter().map(|&k| self.users[k].min_share()).collect();
        let costs: Vec<UserCost> = active.iter().map(|&k| self.users[k]).collect();

        let shares_at = |theta: f64, out: &mut Vec<f64>| {
            out.clear();
            out.extend(
                costs
                    .iter()
                    .zip(&lo)
                    .map(|(c, &l)| share_at_marginal(c, l, theta)),
            );
        };

        let mut mu = Vec::with_capacity(costs.len());
        shares_at(self.sleep_w, &mut mu);
        let total: f64 = mu.iter().sum();
        if total > 1.0 {
            let theta = self.common_marginal(&costs, &lo);
            shares_at(theta, &mut mu);
            trim_to_unit_sum(&mut mu, &lo);
        }

        let mut shares = vec![0.0; self.users.len()];
        for (i, &k) in active.iter().enumerate() {
            shares[k] = mu[i];
        }
        let sleep_share = (1.0 - shares.iter().sum::<f64>()).max(0.0);
        self.finish(shares, sleep_share, SolveStatus::Optimal, 0)
    }

    /// Root of `sum_k mu_k(theta) = 1`.
    fn common_marginal(&self, costs: &[UserCost], lo: &[f64]) -> f64 {
        let low = costs
            .iter()
            .zip(lo)
            .map(|(c, &l)| c.derivative(l))
            .fold(f64::INFINITY, f64::min);
        let high = costs
            .iter()
            .map(|c| c.derivative(1.0))
            .fold(f64::NEG_INFINITY, f64::max);
        if !(high > low) {
            return high;
        }
        increasing_root(low, high, 0.5 * (low + high), |theta| {
            let mut total = 0.0;
            let mut slope = 0.0;
            for (c, &l) in costs.iter().zip(lo) {
                let mu = share_at_marginal(c, l, theta);
                total += mu;
                if mu > l && mu < 1.0 {
                    slope += 1.0 / c.second_derivative(mu);
                }
            }
            (total - 1.0, slope)
        })
    }
}

/// Root of an increasing function on `[low, high]` with `f(low) <= 0 <= f(high)`.
///
/// `f` returns the value and the derivative. Newton steps are taken while
/// they stay inside the bracket and at least halve the previous step;
/// otherwise the bracket is bisected.
fn increasing_root(mut low: f64, mut high: f64, start: f64, f: impl Fn(f64) -> (f64, f64)) -> f64 {
    let mut x = start;
    let mut step_before = high - low;
    let mut step = step_before;
    for _ in 0..300 {
        let (g, slope) = f(x);
        if g == 0.0 {
            return x;
        }
        if g < 0.0 {
            low = x;
        } else {
            high = x;
        }
        if high - low <= 4.0 * f64::EPSILON * high.abs().max(low.abs()) {
            break;
        }
        let newton = if slope > 0.0 { x - g / slope } else { f64::NAN };
        let slow = (2.0 * g).abs() > (step_before * slope).abs();
        step_before = step;
        if newton > low && newton < high && !slow {
            step = (x - newton).abs();
            x = newton;
        } else {
            step = 0.5 * (high - low);
            x = low + step;
        }
        if step <= 2.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}

/// Share in `[lo, 1]` at which the marginal cost equals `theta`.
fn share_at_marginal(cost: &UserCost, lo: f64, theta: f64) -> f64 {
    if cost.derivative(lo) >= theta {
        return lo;
    }
    if cost.derivative(1.0) <= theta {
        return 1.0;
    }
    increasing_root(lo, 1.0, 0.5 * (lo + 1.0), |x| {
        (cost.derivative(x) - theta, cost.second_derivative(x))
    })
}

/// Removes a floating-point excess over one from the largest free share.
fn trim_to_unit_sum(mu: &mut [f64], lo: &[f64]) {
    for _ in 0..4 {
        let excess = mu.iter().sum::<f64>() - 1.0;
        if excess <= 0.0 {
            return;
        }
        let (idx, _) = mu
            .iter()
            .zip(lo)
            .enumerate()
            .map(|(i, (m, l))| (i, m - l))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, x| if x.1 > acc.1 { x } else { acc },
            );
        mu[idx] = (mu[idx] - excess).max(lo[idx]);
    }
}
