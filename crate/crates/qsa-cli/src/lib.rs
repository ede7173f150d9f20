//! Command-line surface for the double-well ion-trap simulations: JSON
//! configs in, deterministic CSV/JSON artifacts out, plus the acceptance
//! suite behind `repro-all`.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;
