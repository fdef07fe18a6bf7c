//! Bounded-variable revised primal simplex.
//!
//! Every row `a_i'x (sense) b_i` gets a logical variable `s_i = -a_i'x` whose bounds encode the
//! sense and right-hand side, so the working system is always `A x + s = 0` and the all-logical
//! basis is the identity. Phase one minimises the sum of bound infeasibilities of the basic
//! variables (the cost vector is recomputed every iteration); phase two uses the real costs.
//!
//! Entering variables are priced with Dantzig's rule. After `stall_limit` consecutive degenerate
//! pivots the solver switches to Bland's smallest-index rule and keeps it until a pivot makes
//! strict progress, which rules out cycling. [`Pricing::Bland`] uses Bland's rule throughout.
use crate::basis::{reinvert, Columns, EtaFile};
use crate::error::LpError;
use crate::problem::{Sense, StandardFormLP};
use crate::scaling;
use log::{debug, warn};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pricing {
    /// Most negative reduced cost, with a Bland fallback on degenerate stalls.
    Dantzig,
    /// Smallest eligible index for both entering and leaving choices.
    Bland,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Feasibility and optimality tolerance on the scaled problem.
    pub tol: f64,
    /// Defaults to `max(10_000, 50 * (rows + columns))` when `None`.
    pub max_iters: Option<usize>,
    pub pricing: Pricing,
    pub refactor_interval: usize,
    pub scale: bool,
    pub stall_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iters: None,
            pricing: Pricing::Dantzig,
            refactor_interval: 60,
            scale: true,
            stall_limit: 50,
        }
    }
}

/// Where a column or row logical sits relative to the basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisStatus {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable at zero.
    Free,
}

/// A basis given by the status of every column and every row logical. Row statuses refer to
/// the row activity: `AtLower` means the activity sits at its lower limit.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    pub vars: Vec<BasisStatus>,
    pub rows: Vec<BasisStatus>,
}

impl Basis {
    /// Carries a basis over to another problem by matching column and row names. Unmatched
    /// columns start nonbasic at a finite bound and unmatched rows start with a basic logical.
    pub fn remap(&self, from: &StandardFormLP, to: &StandardFormLP) -> Basis {
        let vars: HashMap<&str, BasisStatus> =
            from.vars.iter().zip(&self.vars).map(|(v, s)| (v.name.as_str(), *s)).collect();
        let rows: HashMap<&str, BasisStatus> =
            from.rows.iter().zip(&self.rows).map(|(r, s)| (r.name.as_str(), *s)).collect();
        Basis {
            vars: to
                .vars
                .iter()
                .map(|v| vars.get(v.name.as_str()).copied().unwrap_or(BasisStatus::AtLower))
                .collect(),
            rows: to
                .rows
                .iter()
                .map(|r| rows.get(r.name.as_str()).copied().unwrap_or(BasisStatus::Basic))
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LPResult {
    pub status: LpStatus,
    /// Primal values in the original (unscaled) variable space.
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// Row multipliers `y` with `c - A'y = d`; empty unless optimal.
    pub duals: Vec<f64>,
    /// Reduced costs `d`; empty unless optimal.
    pub reduced_costs: Vec<f64>,
    /// Final basis, usable as a warm start for a related problem.
    pub basis: Basis,
}

impl LPResult {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub fn solve(lp: &StandardFormLP, opts: &SolverOptions) -> Result<LPResult, LpError> {
    lp.validate()?;
    let mut s = Simplex::new(lp, opts, None);
    let status = s.run();
    Ok(s.result(lp, status))
}

/// Like [`solve`], starting from `basis` instead of the all-logical basis. A basis with the
/// wrong number of basic entries is repaired at the first factorisation.
pub fn solve_from(lp: &StandardFormLP, opts: &SolverOptions, basis: &Basis) -> Result<LPResult, LpError> {
    lp.validate()?;
    if basis.vars.len() != lp.num_vars() || basis.rows.len() != lp.num_rows() {
        return Err(LpError::Dimension(format!(
            "basis has {} columns and {} rows, problem has {} and {}",
            basis.vars.len(),
            basis.rows.len(),
            lp.num_vars(),
            lp.num_rows()
        )));
    }
    let mut s = Simplex::new(lp, opts, Some(basis));
    let status = s.run();
    Ok(s.result(lp, status))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
    /// Nonbasic free variable held at zero.
    Zero,
}

enum Step {
    Flip,
    Pivot { pos: usize, to_upper: bool },
    Unbounded,
}

struct Simplex {
    m: usize,
    n: usize,
    col_start: Vec<usize>,
    col_row: Vec<usize>,
    col_val: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    head: Vec<usize>,
    etas: EtaFile,
    row_scale: Vec<f64>,
    col_scale: Vec<f64>,
    obj_scale: f64,
    tol: f64,
    max_iters: usize,
    pricing: Pricing,
    refactor_interval: usize,
    stall_limit: usize,
    iterations: usize,
}

impl Columns for Simplex {
    fn num_rows(&self) -> usize {
        self.m
    }
    fn num_structural(&self) -> usize {
        self.n
    }
    fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let r = self.col_start[j]..self.col_start[j + 1];
        (&self.col_row[r.clone()], &self.col_val[r])
    }
}

fn pow2(x: f64) -> f64 {
    if !x.is_finite() || x <= 0.0 {
        1.0
    } else {
        2f64.powi(x.log2().round() as i32)
    }
}

impl Simplex {
    fn new(lp: &StandardFormLP, opts: &SolverOptions, warm: Option<&Basis>) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(lp.num_nonzeros());
        for (i, row) in lp.rows.iter().enumerate() {
            for &(v, a) in &row.coeffs {
                entries.push((i, v.0, a));
            }
        }
        let sc = if opts.scale {
            scaling::geometric(m, n, &entries, 6)
        } else {
            scaling::Scaling {
                row: vec![1.0; m],
                col: vec![1.0; n],
            }
        };

        let mut count = vec![0usize; n + 1];
        for &(_, j, _) in &entries {
            count[j + 1] += 1;
        }
        for j in 0..n {
            count[j + 1] += count[j];
        }
        let col_start = count.clone();
        let mut fill = count;
        let mut col_row = vec![0; entries.len()];
        let mut col_val = vec![0.0; entries.len()];
        for &(i, j, a) in &entries {
            let k = fill[j];
            col_row[k] = i;
            col_val[k] = a * sc.row[i] * sc.col[j];
            fill[j] += 1;
        }

        let cmax = lp
            .vars
            .iter()
            .zip(&sc.col)
            .fold(0f64, |acc, (v, s)| acc.max((v.cost * s).abs()));
        let obj_scale = if cmax > 0.0 { pow2(1.0 / cmax) } else { 1.0 };

        let total = n + m;
        let mut lo = Vec::with_capacity(total);
        let mut hi = Vec::with_capacity(total);
        let mut cost = Vec::with_capacity(total);
        for (v, s) in lp.vars.iter().zip(&sc.col) {
            lo.push(v.lower / s);
            hi.push(v.upper / s);
            cost.push(v.cost * s * obj_scale);
        }
        for (row, r) in lp.rows.iter().zip(&sc.row) {
            let b = -row.rhs * r;
            let (l, h) = match row.sense {
                Sense::Le => (b, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, b),
                Sense::Eq => (b, b),
            };
            lo.push(l);
            hi.push(h);
            cost.push(0.0);
        }

        let mut x = vec![0.0; total];
        let mut state = vec![State::Basic; total];
        for j in 0..n {
            let (st, v) = nonbasic_home(lo[j], hi[j]);
            state[j] = st;
            x[j] = v;
        }
        let mut head: Vec<usize> = (n..total).collect();
        if let Some(b) = warm {
            // Logicals are s = -a'x, so a row at its lower activity has its logical at the upper bound.
            let flip = |st: BasisStatus| match st {
                BasisStatus::AtLower => BasisStatus::AtUpper,
                BasisStatus::AtUpper => BasisStatus::AtLower,
                other => other,
            };
            let statuses = b.vars.iter().copied().chain(b.rows.iter().copied().map(flip));
            head.clear();
            for (j, st) in statuses.enumerate() {
                let (s, v) = match st {
                    BasisStatus::Basic => {
                        head.push(j);
                        (State::Basic, 0.0)
                    }
                    BasisStatus::AtLower if lo[j].is_finite() => (State::Lower, lo[j]),
                    BasisStatus::AtUpper if hi[j].is_finite() => (State::Upper, hi[j]),
                    _ => nonbasic_home(lo[j], hi[j]),
                };
                state[j] = s;
                x[j] = v;
            }
        }

        let max_iters = opts.max_iters.unwrap_or_else(|| (50 * total).max(10_000));
        let mut s = Self {
            m,
            n,
            col_start,
            col_row,
            col_val,
            lo,
            hi,
            cost,
            x,
            state,
            head,
            etas: EtaFile::default(),
            row_scale: sc.row,
            col_scale: sc.col,
            obj_scale,
            tol: opts.tol,
            max_iters,
            pricing: opts.pricing,
            refactor_interval: opts.refactor_interval.max(1),
            stall_limit: opts.stall_limit,
            iterations: 0,
        };
        if warm.is_none() {
            s.compute_basic_values();
        }
        s
    }

    fn feas_tol(&self, bound: f64) -> f64 {
        self.tol * (1.0 + bound.abs())
    }

    fn refactor(&mut self) {
        let basics = self.head.clone();
        let mut etas = std::mem::take(&mut self.etas);
        let inv = reinvert(&*self, &basics, &mut etas);
        self.etas = etas;
        for &j in &inv.dropped {
            let (st, v) = nonbasic_home(self.lo[j], self.hi[j]);
            // Keep the dropped variable at the bound closest to its current value.
            let (st, v) = match st {
                State::Zero => (st, v),
                _ if self.lo[j].is_finite()
                    && self.hi[j].is_finite()
                    && (self.x[j] - self.hi[j]).abs() < (self.x[j] - self.lo[j]).abs() =>
                {
                    (State::Upper, self.hi[j])
                }
                _ => (st, v),
            };
            self.state[j] = st;
            self.x[j] = v;
        }
        if !inv.dropped.is_empty() {
            warn!("singular basis: {} column(s) replaced by logicals", inv.dropped.len());
        }
        self.head = inv.head;
        for &j in &self.head {
            self.state[j] = State::Basic;
        }
        self.compute_basic_values();
    }

    /// Solves `B x_B = -N x_N`.
    fn compute_basic_values(&mut self) {
        let mut rhs = vec![0.0; self.m];
        for j in 0..self.n {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                let xj = self.x[j];
                for k in self.col_start[j]..self.col_start[j + 1] {
                    rhs[self.col_row[k]] -= self.col_val[k] * xj;
                }
            }
        }
        for i in 0..self.m {
            let j = self.n + i;
            if self.state[j] != State::Basic {
                rhs[i] -= self.x[j];
            }
        }
        self.etas.ftran(&mut rhs);
        for (pos, v) in rhs.into_iter().enumerate() {
            self.x[self.head[pos]] = v;
        }
    }

    /// Phase-one cost of the basic variable at `pos`: -1 below its lower bound, +1 above.
    fn infeasibility_cost(&self, j: usize) -> f64 {
        let v = self.x[j];
        if v < self.lo[j] - self.feas_tol(self.lo[j]) {
            -1.0
        } else if v > self.hi[j] + self.feas_tol(self.hi[j]) {
            1.0
        } else {
            0.0
        }
    }

    fn reduced_cost(&self, j: usize, cj: f64, y: &[f64]) -> f64 {
        if j < self.n {
            let mut d = cj;
            for k in self.col_start[j]..self.col_start[j + 1] {
                d -= y[self.col_row[k]] * self.col_val[k];
            }
            d
        } else {
            cj - y[j - self.n]
        }
    }

    fn price(&self, y: &[f64], phase_one: bool, bland: bool) -> Option<(usize, f64)> {
        let dtol = self.tol;
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.n + self.m {
            let st = self.state[j];
            if st == State::Basic || self.lo[j] == self.hi[j] {
                continue;
            }
            let cj = if phase_one { 0.0 } else { self.cost[j] };
            let d = self.reduced_cost(j, cj, y);
            let dir = match st {
                State::Lower if d < -dtol => 1.0,
                State::Upper if d > dtol => -1.0,
                State::Zero if d.abs() > dtol => -d.signum(),
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            if d.abs() > best_score {
                best_score = d.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    fn load_column(&self, j: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        if j < self.n {
            for k in self.col_start[j]..self.col_start[j + 1] {
                out[self.col_row[k]] = self.col_val[k];
            }
        } else {
            out[j - self.n] = 1.0;
        }
    }

    /// Ratio test for entering variable `q` moving in direction `dir` with `alpha = B^-1 a_q`.
    fn ratio_test(&self, q: usize, dir: f64, alpha: &[f64], phase_one: bool, bland: bool) -> (f64, Step) {
        let piv_tol = 1e-9;
        let range = self.hi[q] - self.lo[q];

        // Candidate limits: (position, exact ratio, relaxed ratio, leaves at upper)
        let mut cands: Vec<(usize, f64, f64, bool)> = Vec::new();
        for (pos, &a) in alpha.iter().enumerate() {
            if a.abs() <= piv_tol {
                continue;
            }
            let j = self.head[pos];
            let v = self.x[j];
            let rate = -dir * a;
            let (lo, hi) = (self.lo[j], self.hi[j]);
            if rate < 0.0 {
                let (target, to_upper) = if phase_one && v > hi + self.feas_tol(hi) {
                    (hi, true)
                } else if v < lo - self.feas_tol(lo) || !lo.is_finite() {
                    continue;
                } else {
                    (lo, false)
                };
                let exact = ((v - target) / -rate).max(0.0);
                let relaxed = (v - target + self.feas_tol(target)) / -rate;
                cands.push((pos, exact, relaxed, to_upper));
            } else {
                let (target, to_upper) = if phase_one && v < lo - self.feas_tol(lo) {
                    (lo, false)
                } else if v > hi + self.feas_tol(hi) || !hi.is_finite() {
                    continue;
                } else {
                    (hi, true)
                };
                let exact = ((target - v) / rate).max(0.0);
                let relaxed = (target - v + self.feas_tol(target)) / rate;
                cands.push((pos, exact, relaxed, to_upper));
            }
        }

        if cands.is_empty() {
            return if range.is_finite() {
                (range, Step::Flip)
            } else {
                (f64::INFINITY, Step::Unbounded)
            };
        }

        let chosen = if bland {
            let min_ratio = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
            let slack = 1e-12 * (1.0 + min_ratio);
            cands
                .iter()
                .filter(|c| c.1 <= min_ratio + slack)
                .min_by_key(|c| self.head[c.0])
                .copied()
                .expect("non-empty")
        } else {
            // Harris: largest pivot among candidates within the relaxed step.
            let theta_max = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
            cands
                .iter()
                .filter(|c| c.1 <= theta_max)
                .max_by(|a, b| alpha[a.0].abs().total_cmp(&alpha[b.0].abs()))
                .copied()
                .unwrap_or_else(|| {
                    *cands
                        .iter()
                        .min_by(|a, b| a.1.total_cmp(&b.1))
                        .expect("non-empty")
                })
        };
        let (pos, theta, _, to_upper) = chosen;
        if range.is_finite() && range <= theta {
            return (range, Step::Flip);
        }
        (theta, Step::Pivot { pos, to_upper })
    }

    fn run(&mut self) -> LpStatus {
        self.refactor();
        let mut since_refactor = 0usize;
        let mut degenerate_run = 0usize;
        let mut bland = self.pricing == Pricing::Bland;
        let mut y = vec![0.0; self.m];
        let mut alpha = vec![0.0; self.m];

        loop {
            if self.iterations >= self.max_iters {
                return LpStatus::IterationLimit;
            }
            if since_refactor >= self.refactor_interval {
                self.refactor();
                since_refactor = 0;
            }

            let mut phase_one = false;
            for pos in 0..self.m {
                let c = self.infeasibility_cost(self.head[pos]);
                y[pos] = c;
                phase_one |= c != 0.0;
            }
            if !phase_one {
                for pos in 0..self.m {
                    y[pos] = self.cost[self.head[pos]];
                }
            }
            self.etas.btran(&mut y);

            let Some((q, dir)) = self.price(&y, phase_one, bland) else {
                if since_refactor > 0 {
                    // Confirm on a fresh factorisation before declaring termination.
                    self.refactor();
                    since_refactor = 0;
                    continue;
                }
                return if phase_one {
                    LpStatus::Infeasible
                } else {
                    LpStatus::Optimal
                };
            };

            self.load_column(q, &mut alpha);
            self.etas.ftran(&mut alpha);
            let (theta, step) = self.ratio_test(q, dir, &alpha, phase_one, bland);
            self.iterations += 1;

            match step {
                Step::Unbounded => {
                    if phase_one {
                        // Cannot happen in exact arithmetic; refresh and retry.
                        debug!("phase one reported an unbounded ray; refactoring");
                        self.refactor();
                        since_refactor = 0;
                        continue;
                    }
                    return LpStatus::Unbounded;
                }
                Step::Flip => {
                    for pos in 0..self.m {
                        if alpha[pos] != 0.0 {
                            let j = self.head[pos];
                            self.x[j] -= dir * theta * alpha[pos];
                        }
                    }
                    if dir > 0.0 {
                        self.x[q] = self.hi[q];
                        self.state[q] = State::Upper;
                    } else {
                        self.x[q] = self.lo[q];
                        self.state[q] = State::Lower;
                    }
                }
                Step::Pivot { pos, to_upper } => {
                    for p in 0..self.m {
                        if alpha[p] != 0.0 && p != pos {
                            let j = self.head[p];
                            self.x[j] -= dir * theta * alpha[p];
                        }
                    }
                    let leaving = self.head[pos];
                    if to_upper {
                        self.x[leaving] = self.hi[leaving];
                        self.state[leaving] = State::Upper;
                    } else {
                        self.x[leaving] = self.lo[leaving];
                        self.state[leaving] = State::Lower;
                    }
                    self.x[q] += dir * theta;
                    self.state[q] = State::Basic;
                    self.head[pos] = q;
                    self.etas.push(pos, &alpha);
                    since_refactor += 1;
                }
            }

            if theta <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run >= self.stall_limit && !bland {
                    debug!("degenerate stall at iteration {}; switching to Bland's rule", self.iterations);
                    bland = true;
                }
            } else {
                degenerate_run = 0;
                bland = self.pricing == Pricing::Bland;
            }
        }
    }

    fn result(&self, lp: &StandardFormLP, status: LpStatus) -> LPResult {
        let x: Vec<f64> = (0..self.n).map(|j| self.x[j] * self.col_scale[j]).collect();
        let objective = lp.objective(&x);
        let (duals, reduced_costs) = if status == LpStatus::Optimal {
            let mut y: Vec<f64> = (0..self.m).map(|pos| self.cost[self.head[pos]]).collect();
            self.etas.btran(&mut y);
            let d: Vec<f64> = (0..self.n)
                .map(|j| self.reduced_cost(j, self.cost[j], &y) / (self.col_scale[j] * self.obj_scale))
                .collect();
            let duals = y
                .iter()
                .zip(&self.row_scale)
                .map(|(yi, r)| yi * r / self.obj_scale)
                .collect();
            (duals, d)
        } else {
            (Vec::new(), Vec::new())
        };
        let flip = |st: BasisStatus| match st {
            BasisStatus::AtLower => BasisStatus::AtUpper,
            BasisStatus::AtUpper => BasisStatus::AtLower,
            other => other,
        };
        let status_of = |j: usize| match self.state[j] {
            State::Basic => BasisStatus::Basic,
            State::Lower => BasisStatus::AtLower,
            State::Upper => BasisStatus::AtUpper,
            State::Zero => BasisStatus::Free,
        };
        let basis = Basis {
            vars: (0..self.n).map(status_of).collect(),
            rows: (self.n..self.n + self.m).map(|j| flip(status_of(j))).collect(),
        };
        LPResult {
            status,
            x,
            objective,
            iterations: self.iterations,
            duals,
            reduced_costs,
            basis,
        }
    }
}

fn nonbasic_home(lo: f64, hi: f64) -> (State, f64) {
    if lo.is_finite() {
        (State::Lower, lo)
    } else if hi.is_finite() {
        (State::Upper, hi)
    } else {
        (State::Zero, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Sense::*;

    fn solve_default(lp: &StandardFormLP) -> LPResult {
        solve(lp, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn single_variable_upper_row() {
        let mut lp = StandardFormLP::new("one");
        let x = lp.add_var("x", -1.0, 0.0, f64::INFINITY);
        lp.add_row("cap", [(x, 1.0)], Le, 5.0);
        let r = solve_default(&lp);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.x[0] - 5.0).abs() < 1e-9);
        assert!((r.objective + 5.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_optimal_face() {
        let mut lp = StandardFormLP::new("face");
        let x = lp.add_var("x", -1.0, 0.0, f64::INFINITY);
        let y = lp.add_var("y", -1.0, 0.0, f64::INFINITY);
        lp.add_row("sum", [(x, 1.0), (y, 1.0)], Le, 1.0);
        for pricing in [Pricing::Dantzig, Pricing::Bland] {
            let r = solve(&lp, &SolverOptions { pricing, ..Default::default() }).unwrap();
            assert_eq!(r.status, LpStatus::Optimal);
            assert!((r.objective + 1.0).abs() < 1e-9);
            assert!(lp.max_violation(&r.x) < 1e-9);
        }
    }

    #[test]
    fn detects_infeasible() {
        let mut lp = StandardFormLP::new("inf");
        let x = lp.add_var("x", 1.0, 0.0, f64::INFINITY);
        lp.add_row("a", [(x, 1.0)], Ge, 3.0);
        lp.add_row("b", [(x, 1.0)], Le, 2.0);
        assert_eq!(solve_default(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let mut lp = StandardFormLP::new("unb");
        let x = lp.add_var("x", -1.0, 0.0, f64::INFINITY);
        let y = lp.add_var("y", 0.0, 0.0, f64::INFINITY);
        lp.add_row("a", [(x, 1.0), (y, -1.0)], Le, 1.0);
        assert_eq!(solve_default(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn free_variable_and_equality() {
        // min x + 2y  s.t. x - y = -3, y <= 4, x free, y >= 0  -> x = -3, y = 0
        let mut lp = StandardFormLP::new("free");
        let x = lp.add_var("x", 1.0, f64::NEG_INFINITY, f64::INFINITY);
        let y = lp.add_var("y", 2.0, 0.0, 4.0);
        lp.add_row("eq", [(x, 1.0), (y, -1.0)], Eq, -3.0);
        let r = solve_default(&lp);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.x[0] + 3.0).abs() < 1e-9, "{:?}", r.x);
        assert!((r.objective + 3.0).abs() < 1e-9);
    }

    #[test]
    fn bound_flip_without_rows() {
        let mut lp = StandardFormLP::new("box");
        lp.add_var("x", -2.0, 1.0, 3.0);
        lp.add_var("y", 1.0, -1.0, 2.0);
        let r = solve_default(&lp);
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.x, vec![3.0, -1.0]);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let mut lp = StandardFormLP::new("lim");
        let x = lp.add_var("x", -1.0, 0.0, f64::INFINITY);
        let y = lp.add_var("y", -1.0, 0.0, f64::INFINITY);
        lp.add_row("a", [(x, 1.0), (y, 2.0)], Le, 4.0);
        lp.add_row("b", [(x, 3.0), (y, 1.0)], Le, 6.0);
        let opts = SolverOptions {
            max_iters: Some(1),
            ..Default::default()
        };
        assert_eq!(solve(&lp, &opts).unwrap().status, LpStatus::IterationLimit);
    }

    #[test]
    fn duals_certify_optimality() {
        // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = StandardFormLP::new("dual");
        let x = lp.add_var("x", -3.0, 0.0, f64::INFINITY);
        let y = lp.add_var("y", -2.0, 0.0, f64::INFINITY);
        lp.add_row("r1", [(x, 1.0), (y, 1.0)], Le, 4.0);
        lp.add_row("r2", [(x, 1.0), (y, 3.0)], Le, 6.0);
        lp.add_row("r3", [(x, 1.0)], Le, 3.0);
        let r = solve_default(&lp);
        assert!((r.objective + 11.0).abs() < 1e-9);
        let dual_obj: f64 = r.duals.iter().zip(&lp.rows).map(|(y, row)| y * row.rhs).sum();
        assert!((dual_obj - r.objective).abs() < 1e-9);
        assert!(r.duals.iter().all(|&y| y <= 1e-12));
    }

    #[test]
    fn warm_start_from_optimal_basis() {
        let mut lp = StandardFormLP::new("warm");
        let x = lp.add_var("x", -3.0, 0.0, f64::INFINITY);
        let y = lp.add_var("y", -2.0, 0.0, f64::INFINITY);
        lp.add_row("r1", [(x, 1.0), (y, 1.0)], Le, 4.0);
        lp.add_row("r2", [(x, 1.0), (y, 3.0)], Le, 6.0);
        lp.add_row("r3", [(x, 1.0)], Le, 3.0);
        let cold = solve_default(&lp);
        let warm = solve_from(&lp, &SolverOptions::default(), &cold.basis).unwrap();
        assert_eq!(warm.iterations, 0);
        assert!((warm.objective - cold.objective).abs() < 1e-12);

        // Pin x + y and flip the objective toward y; the old basis maps over by name.
        let mut pinned = lp.clone();
        pinned.set_cost(x, -1.0);
        pinned.set_cost(y, -5.0);
        pinned.add_row("pin", [(x, 1.0), (y, 1.0)], Eq, 4.0);
        let mapped = cold.basis.remap(&lp, &pinned);
        assert_eq!(mapped.rows[3], BasisStatus::Basic);
        let from = solve_from(&pinned, &SolverOptions::default(), &mapped).unwrap();
        let fresh = solve_default(&pinned);
        assert_eq!(from.status, LpStatus::Optimal);
        assert!((from.objective - fresh.objective).abs() < 1e-9);
        assert!(solve_from(&pinned, &SolverOptions::default(), &cold.basis).is_err());
    }
}
