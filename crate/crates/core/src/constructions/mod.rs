//! Theorem-level builders. Each assembles a Cauchy-Kowalevski system plus
//! algebraic substitutions, consumes census-keyed free data, solves, and
//! returns a report whose checks are recomputed on verification.

mod census;
mod free_data;
mod metric_2d;
mod prescribed_ricci;
mod report;
mod statistical;

pub(crate) use census::parse_metric_label;
pub use census::{
    census, gamma_label, metric_label, Census, Construction, Symbol, CONFORMAL_DERIV_SLOT,
    CONFORMAL_SLOT, GAUGE_SLOT,
};
pub use free_data::FreeData;
pub use metric_2d::{build_metric_2d_from_free_data, build_metric_2d_prescribed_ricci};
pub use prescribed_ricci::{
    build_prescribed_ricci_general, build_prescribed_ricci_torsion_free,
    build_prescribed_ricci_trace_free_torsion, divergence_target, free_data_from_connection,
};
pub use report::{run_checks, verify, BuildReport, Check};
pub use statistical::{
    build_statistical_2d, build_statistical_2d_from_free_data, build_statistical_nd,
    build_trace_free_statistical_2d, build_trace_free_statistical_2d_from_free_data,
    free_data_from_statistical,
};

/// Ordered-substitution view of the statistical elimination, exposed for
/// cross-checking the simultaneous solve.
pub mod elimination {
    pub use super::census::{statistical_equations, StatisticalEquation};
    pub use super::statistical::{elimination_system, EliminationSystem};
}
