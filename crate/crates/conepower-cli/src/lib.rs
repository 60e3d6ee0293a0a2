//! Harness around the `conepower` library: simulation grids with seeded
//! trials, CSV reporting, time-series ingestion with train/test explained
//! variance, and flat-file bound reports.

pub mod config;
pub mod csvio;
pub mod grid;
pub mod timeseries;
