//! Homeomorphisms of the complex plane as a metric group.
//!
//! * [`homeo`]: symbolic plane maps with exact inverses, the radial
//!   deformations `ψ_δ`/`h_δ`, the disk–plane conjugation and Lipschitz
//!   enclosures.
//! * [`metric`]: the metric of uniform convergence on compacts, applied to
//!   maps and their inverses.
//! * [`compact`]: point-cloud compacts, Hausdorff distance and limit checks.
//! * [`fixed_points`]: winding-number existence, grid-plus-Lipschitz
//!   absence and separation radii.
//! * [`genericity`]: small perturbations avoiding fixed points, escapes
//!   from 2-cells and convergence experiments.
//! * [`expr`]: the text syntax for maps.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` rejects NaN on purpose

pub mod compact;
pub mod expr;
pub mod fixed_points;
pub mod genericity;
pub mod homeo;
pub mod metric;
mod par;
pub mod point;

pub use num_complex::Complex64;

pub use compact::{hausdorff, image, in_neighborhood, limit_test, CompactSet, LimitReport};
pub use expr::{parse_complex, parse_expr, ExprError};
pub use fixed_points::{
    certify_fixed_point_free, min_displacement, separation_radius, winding_certificate, Certificate, Verdict,
    WindingResult,
};
pub use genericity::{
    avoid_fixed_points_on_grid, nowhere_dense_escape, EscapeReport, Family, GenericityError, PerturbationReport,
};
pub use homeo::{cell_bump, compose, inverse, lipschitz_bound, plane_from_disk, support_sample, Cell2, Disk, Homeo};
pub use metric::{dist, du, sup_on_disk, truncation_error_bound, MetricConfig};
