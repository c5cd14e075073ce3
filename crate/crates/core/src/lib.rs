//! Data-driven reduced-order modeling.
//!
//! This crate builds compact representations of families of sampled
//! functions: a greedy [`reduced_basis`] selects the most informative
//! training functions and orthonormalizes them, [`eim`] turns the basis
//! into an empirical interpolation operator, and [`surrogate`] combines
//! the interpolant with parameter-space spline fits into a predictive
//! model that evaluates in `O(n·L)` per call.
//!
//! Supporting modules provide discrete quadrature rules
//! ([`integration`]), stable orthonormalization ([`gram_schmidt`]),
//! basis utilities ([`basis`]), exact-interpolation splines
//! ([`splines`]), a damped-pendulum data generator ([`pendulum`]), a
//! timing harness ([`bench`]) and file formats ([`io`]).
//!
//! ```
//! use ndarray::Array2;
//! use rom_core::integration::linspace;
//! use rom_core::{build_surrogate, Quadrature, QuadratureRule, TrainingSet};
//!
//! // A family of ramps h(lambda; x) = lambda * x sampled on [0, 1].
//! let grid = linspace(0.0, 1.0, 101);
//! let params = linspace(1.0, 2.0, 11);
//! let values = Array2::from_shape_fn((11, 101), |(i, j)| params[i] * grid[j]);
//! let training = TrainingSet::from_real(values, params, grid.clone()).unwrap();
//! let quadrature = Quadrature::new(&grid, QuadratureRule::Riemann).unwrap();
//!
//! let surrogate = build_surrogate(&training, &quadrature, 1e-12, 3, true).unwrap();
//! let prediction = surrogate.eval(1.55).unwrap();
//! assert!((prediction[100] - 1.55).abs() < 1e-10);
//! ```

pub mod basis;
pub mod bench;
pub mod eim;
pub mod error;
pub mod gram_schmidt;
pub mod integration;
pub mod io;
mod linalg;
pub mod pendulum;
pub mod reduced_basis;
pub mod splines;
pub mod surrogate;

pub use basis::Basis;
pub use eim::EimOperator;
pub use error::{Error, Result};
pub use integration::{Quadrature, QuadratureRule};
pub use reduced_basis::{reduce_basis, ReducedBasis, TrainingSet};
pub use splines::{fit_spline, Spline};
pub use surrogate::{build_surrogate, relative_l2_error, Surrogate};
