//! Maximizers for the power-split searches and quadrature for the
//! joint-processing bound.
//!
//! None of the split objectives is known to be unimodal, so each maximizer
//! starts from a documented coarse grid and only refines around it. The value
//! returned is therefore never below the best grid point, which makes every
//! reported scheme rate an achievable (lower-bound) value.

mod quadrature;
mod scalar;
mod simplex;

pub use quadrature::{integrate_1d, integrate_2d};
pub use scalar::{maximize_scalar, maximize_scalar_with_grid, SCALAR_GRID_POINTS};
pub use simplex::{maximize_simplex, maximize_simplex_product, PowerSplit};

/// Location and value of a maximum.
#[derive(Clone, Debug, PartialEq)]
pub struct OptResult<A, T> {
    pub argmax: A,
    pub value: T,
    pub evaluations: usize,
}
