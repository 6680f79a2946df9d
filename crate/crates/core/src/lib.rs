// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod info;
pub mod linalg;
pub mod optimize;
pub mod polymatroid;
pub mod scalar;
pub mod schemes;
mod simplex;
pub mod topology;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision instantiations of the generic types.
pub type Mac = info::GaussianMac<f64>;
pub type Model = topology::CellArrayModel<f64>;
pub type Grouping = polymatroid::RateGrouping<f64>;
pub type Split = optimize::PowerSplit<f64>;
pub type Scheme = schemes::SchemeResult<f64>;
pub type Mat = linalg::Matrix<f64>;
