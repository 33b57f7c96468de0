//! Tensor calculus on jets. All indices in the API are zero-based; the
//! JSON form uses one-based keys.

mod curvature;
mod exterior;
pub mod linalg;
mod metric;
pub(crate) mod serial;
mod tensors;

pub use curvature::{
    divergence_form, lambda_term, ricci, ricci_derivative_part, split, torsion, torsion_trace,
};
pub use exterior::{
    one_form_closed, potential_of_one_form, primitive_of_two_form, two_form_closed,
};
pub use metric::{
    is_codazzi, levi_civita, levi_civita_diagonal_2d, nabla_g, parallel_volume_2d,
    sectional_curvature_2d, volume_trace_form,
};
pub use tensors::{Bilinear, Connection, CubicForm, Metric, OneForm, Torsion, TwoForm};
