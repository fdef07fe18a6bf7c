//! Scenario runner for the county solar siting model: data ingestion and validation,
//! supply and benefit curves, capacity-expansion sweeps, report files and SVG plots.
pub mod config;
pub mod data;
pub mod demo;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod plot;

pub use config::ScenarioConfig;
pub use error::{CliError, Result};
