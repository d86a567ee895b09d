//! Quasi-Poisson structures on representation spaces: doubles, fusion,
//! numeric and combinatorial brackets, and identity checks.

mod bracket;
mod chart;
mod hqp;
mod reorder;
mod surface;
mod verify;

pub use bracket::{
    bracket_combinatorial, bracket_combinatorial_with, crossing_term, crossing_term_via,
    end_gradient, BracketParts, FormulaOptions,
};
pub use chart::{inverses, word_gradient, ChartFunction, ChartWord, Grad};
pub use hqp::{
    conjugation, double, fused_double, trivial, Bivector, FieldRef, HamiltonianQP, Side,
    SlotAction, WedgeTerm,
};
pub use reorder::Reordering;
pub use surface::{Assoc, ChartLayout, SurfaceFunction, SurfaceQp};
pub use verify::{
    coordinate_bivector, moment_residual, qp_identity_residual, rho_phi_tensor, schouten_tensor,
    schouten_tensor_fd, MomentCheck,
};
