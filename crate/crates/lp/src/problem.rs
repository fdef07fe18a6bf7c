//! Minimisation linear programs in row form.
//!
//! A [`StandardFormLP`] is `min c'x` subject to `a_i'x (<=|=|>=) b_i` and `lo <= x <= hi`.
//! Lower bounds may be `-inf` (free or upper-bounded-only variables), upper bounds may be `+inf`.
use crate::error::LpError;
use std::fmt;

/// Handle to a variable (column) of a [`StandardFormLP`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

/// Handle to a constraint (row) of a [`StandardFormLP`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    /// Sparse coefficients; at most one entry per variable.
    pub coeffs: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, a)| a * x[v.0]).sum()
    }

    /// Amount by which `x` violates this row (zero when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let act = self.activity(x);
        match self.sense {
            Sense::Le => (act - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - act).max(0.0),
            Sense::Eq => (act - self.rhs).abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub cost: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StandardFormLP {
    pub name: String,
    pub vars: Vec<Variable>,
    pub rows: Vec<Constraint>,
}

impl StandardFormLP {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs.len()).sum()
    }

    pub fn add_var(&mut self, name: impl Into<String>, cost: f64, lower: f64, upper: f64) -> VarId {
        self.vars.push(Variable {
            name: name.into(),
            cost,
            lower,
            upper,
        });
        VarId(self.vars.len() - 1)
    }

    /// Adds a row. Zero coefficients are dropped and repeated variables are merged.
    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coeffs: impl IntoIterator<Item = (VarId, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> RowId {
        let mut merged: Vec<(VarId, f64)> = coeffs.into_iter().collect();
        merged.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(VarId, f64)> = Vec::with_capacity(merged.len());
        for (v, a) in merged {
            match out.last_mut() {
                Some((last, acc)) if *last == v => *acc += a,
                _ => out.push((v, a)),
            }
        }
        out.retain(|&(_, a)| a != 0.0);
        self.rows.push(Constraint {
            name: name.into(),
            coeffs: out,
            sense,
            rhs,
        });
        RowId(self.rows.len() - 1)
    }

    pub fn set_cost(&mut self, var: VarId, cost: f64) {
        self.vars[var.0].cost = cost;
    }

    pub fn set_bounds(&mut self, var: VarId, lower: f64, upper: f64) {
        self.vars[var.0].lower = lower;
        self.vars[var.0].upper = upper;
    }

    pub fn costs(&self) -> Vec<f64> {
        self.vars.iter().map(|v| v.cost).collect()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.vars.iter().zip(x).map(|(v, xi)| v.cost * xi).sum()
    }

    /// Largest bound or row violation of `x`, in the problem's own units.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let bounds = self
            .vars
            .iter()
            .zip(x)
            .map(|(v, &xi)| (v.lower - xi).max(xi - v.upper).max(0.0));
        let rows = self.rows.iter().map(|r| r.violation(x));
        bounds.chain(rows).fold(0.0, f64::max)
    }

    /// Row violations normalised by `max(1, |rhs|, max|a_ij|)`.
    pub fn max_scaled_violation(&self, x: &[f64]) -> f64 {
        let bounds = self.vars.iter().zip(x).map(|(v, &xi)| {
            let scale = 1f64.max(v.lower.abs().min(v.upper.abs()));
            let scale = if scale.is_finite() { scale } else { 1.0 };
            (v.lower - xi).max(xi - v.upper).max(0.0) / scale
        });
        let rows = self.rows.iter().map(|r| {
            let amax = r.coeffs.iter().fold(0f64, |m, &(_, a)| m.max(a.abs()));
            r.violation(x) / 1f64.max(r.rhs.abs()).max(amax)
        });
        bounds.chain(rows).fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.vars.len();
        let mut referenced = vec![false; n];
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(LpError::NonFinite(format!("rhs of row {i} ({})", row.name)));
            }
            for &(v, a) in &row.coeffs {
                if v.0 >= n {
                    return Err(LpError::UnknownVariable { row: i, var: v.0 });
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite(format!(
                        "coefficient of {} in row {}",
                        self.vars[v.0].name, row.name
                    )));
                }
                referenced[v.0] = true;
            }
        }
        for (j, v) in self.vars.iter().enumerate() {
            if !v.cost.is_finite() {
                return Err(LpError::NonFinite(format!("cost of {}", v.name)));
            }
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(LpError::InvalidBounds {
                    var: v.name.clone(),
                    lower: v.lower,
                    upper: v.upper,
                });
            }
            if v.lower == f64::INFINITY || v.upper == f64::NEG_INFINITY {
                return Err(LpError::InvalidBounds {
                    var: v.name.clone(),
                    lower: v.lower,
                    upper: v.upper,
                });
            }
            if !referenced[j] && !v.lower.is_finite() && !v.upper.is_finite() {
                return Err(LpError::Unconstrained(v.name.clone()));
            }
        }
        Ok(())
    }
}
