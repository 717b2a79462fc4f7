//! Reproducible experiments over the gravity scenarios: criterion reports,
//! figure tables, parameter scans and config validation.

pub mod commands;
pub mod config;
pub mod curves;
pub mod output;

pub use commands::{
    cmd_criterion, cmd_fig1, cmd_fig2, cmd_fig3, cmd_scan, cmd_validate, CriterionSummary,
    ValidationReport, CRITERION_TOLERANCE,
};
pub use config::{ExperimentConfig, Format, Spacing};
pub use curves::{
    detection_time, en_at, en_curve, first_crossing, td_detection_time, td_max_over_r0,
    CURVE_TOLERANCES,
};
pub use output::{Cell, Table};
