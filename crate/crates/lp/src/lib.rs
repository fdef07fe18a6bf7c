//! Linear programming for the capacity-expansion model.
//!
//! [`solve`] runs a sparse bounded-variable revised primal simplex on a [`StandardFormLP`];
//! [`export_mps`] and [`parse_mps`] move problems to and from external solvers.
//!
//! Scale contract: the basis inverse is kept in product form and rebuilt every
//! `refactor_interval` pivots, so memory grows with the nonzeros of the basis rather than
//! `rows x columns`. Problems with tens of thousands of rows and a few hundred thousand
//! nonzeros solve in seconds to minutes on one core; nothing here is multithreaded, and
//! independent instances may be solved concurrently.
mod basis;
pub mod error;
pub mod mps;
pub mod problem;
mod scaling;
pub mod simplex;

pub use error::LpError;
pub use mps::{export_mps, parse_mps};
pub use problem::{Constraint, RowId, Sense, StandardFormLP, VarId, Variable};
pub use simplex::{solve, solve_from, Basis, BasisStatus, LPResult, LpStatus, Pricing, SolverOptions};
