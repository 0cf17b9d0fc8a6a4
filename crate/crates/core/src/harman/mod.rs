//! Exponent bookkeeping for the Harman sieve lower bound on P⁺(n² + 1).

mod integrals;
mod params;
pub(crate) mod quadrature;
mod report;
mod thresholds;

pub use integrals::{g4, g5, g5_via_sieve, GammaRule, IntegralConfig, IntegralResult, Method, G4_STRATA};
pub use params::{
    check_theta, fig2_boundaries, fig2_grid, sigma0, type1_ceiling, type1_ceiling_7_32, type2_window,
    write_fig2_csv, Fig2Row, HarmanParams, Type2Variant, Window, THETA_KIM_SARNAK,
};
pub use quadrature::{integrate, Quad};
pub use report::{
    assemble, compute_all, compute_g, deficit, harman_report, harman_report_with, solve_omega_bar, Assembly,
    HarmanConfig, HarmanReport, PUBLISHED_BUDGET_FLOOR, PUBLISHED_DEFICIT, PUBLISHED_G, PUBLISHED_OMEGA_BAR,
};
pub use thresholds::{branch_points, thresholds, Threshold, Thresholds, RESIDUAL_TOL};
