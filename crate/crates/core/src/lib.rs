//! Models for county-level solar siting: local economic impact, land availability,
//! interconnection cost, supply and benefit curves, and the capacity-expansion LP.
pub mod ce;
pub mod econ;
pub mod error;
pub mod finance;
pub mod interconnect;
pub mod land;
pub mod supply;

pub use error::{CoreError, Result};
