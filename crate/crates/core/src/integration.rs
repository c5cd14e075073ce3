//! Discrete quadrature rules over an equispaced 1-D grid.
//!
//! A [`Quadrature`] pairs grid points with per-point weights and turns
//! sampled functions into integrals, inner products and norms. The inner
//! product is conjugate-linear in its first argument, so complex-valued
//! functions are supported throughout; real data is the special case
//! with zero imaginary parts.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, ArrayView1};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norms below this absolute threshold are treated as zero.
pub const ZERO_NORM_THRESHOLD: f64 = 1e-30;

/// Relative tolerance for the equispacing check on grid points.
const EQUISPACING_RTOL: f64 = 1e-10;

/// Available weight assignments.
///
/// `Riemann` and `Trapezoidal` integrate continuous data on an
/// equispaced grid; `Euclidean` sets every weight to one and reduces the
/// inner product to a plain discrete dot product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureRule {
    Riemann,
    Trapezoidal,
    Euclidean,
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            QuadratureRule::Riemann => "riemann",
            QuadratureRule::Trapezoidal => "trapezoidal",
            QuadratureRule::Euclidean => "euclidean",
        };
        f.write_str(name)
    }
}

impl FromStr for QuadratureRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "riemann" => Ok(QuadratureRule::Riemann),
            "trapezoidal" => Ok(QuadratureRule::Trapezoidal),
            "euclidean" => Ok(QuadratureRule::Euclidean),
            other => Err(Error::Parse(format!(
                "unknown quadrature rule '{other}' (expected riemann, trapezoidal or euclidean)"
            ))),
        }
    }
}

/// Grid points plus weights defining discrete integrals and inner
/// products. Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct Quadrature {
    points: Array1<f64>,
    weights: Array1<f64>,
    rule: QuadratureRule,
}

impl Quadrature {
    /// Builds the weights for `rule` over `points`.
    ///
    /// Points must be strictly increasing with at least two entries, and
    /// equispaced (to `1e-10` relative) unless the rule is `Euclidean`.
    pub fn new(points: &[f64], rule: QuadratureRule) -> Result<Self> {
        let l = points.len();
        if l < 2 {
            return Err(Error::InvalidGrid(format!(
                "grid needs at least 2 points, got {l}"
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidGrid("grid contains non-finite points".into()));
        }
        for i in 0..l - 1 {
            if points[i + 1] <= points[i] {
                return Err(Error::InvalidGrid(format!(
                    "points must be strictly increasing (violation between indices {i} and {})",
                    i + 1
                )));
            }
        }

        let dx = (points[l - 1] - points[0]) / (l - 1) as f64;
        if rule != QuadratureRule::Euclidean {
            for i in 0..l - 1 {
                let step = points[i + 1] - points[i];
                if (step - dx).abs() > EQUISPACING_RTOL * dx {
                    return Err(Error::InvalidGrid(format!(
                        "rule '{rule}' requires an equispaced grid; spacing at index {i} \
                         deviates from the mean spacing by more than 1e-10 relative"
                    )));
                }
            }
        }

        let weights = match rule {
            QuadratureRule::Riemann => {
                // Left sum: zero weight on the last node keeps the total
                // weight equal to the interval length.
                let mut w = Array1::from_elem(l, dx);
                w[l - 1] = 0.0;
                w
            }
            QuadratureRule::Trapezoidal => {
                let mut w = Array1::from_elem(l, dx);
                w[0] = dx / 2.0;
                w[l - 1] = dx / 2.0;
                w
            }
            QuadratureRule::Euclidean => Array1::ones(l),
        };

        Ok(Quadrature {
            points: Array1::from(points.to_vec()),
            weights,
            rule,
        })
    }

    /// Reassembles a quadrature from stored points and weights.
    pub fn from_parts(points: Vec<f64>, weights: Vec<f64>, rule: QuadratureRule) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::Dimension {
                expected: points.len(),
                got: weights.len(),
            });
        }
        if points.len() < 2 {
            return Err(Error::InvalidGrid("grid needs at least 2 points".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(
                "points must be strictly increasing".into(),
            ));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidGrid(
                "weights must be finite and non-negative".into(),
            ));
        }
        Ok(Quadrature {
            points: Array1::from(points),
            weights: Array1::from(weights),
            rule,
        })
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least two points
    }

    pub fn points(&self) -> ArrayView1<'_, f64> {
        self.points.view()
    }

    pub fn weights(&self) -> ArrayView1<'_, f64> {
        self.weights.view()
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }

    /// Weighted sum `Σ f(x_i) ω_i`.
    pub fn integral(&self, f: ArrayView1<'_, Complex64>) -> Result<Complex64> {
        self.check_len(f.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (v, w) in f.iter().zip(self.weights.iter()) {
            acc += v * w;
        }
        Ok(acc)
    }

    /// Discrete inner product `Σ conj(f(x_i)) g(x_i) ω_i`.
    ///
    /// Conjugate-linear in `f`, linear in `g`; `dot(f, f)` is real and
    /// non-negative up to rounding.
    pub fn dot(
        &self,
        f: ArrayView1<'_, Complex64>,
        g: ArrayView1<'_, Complex64>,
    ) -> Result<Complex64> {
        self.check_len(f.len())?;
        self.check_len(g.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), w) in f.iter().zip(g.iter()).zip(self.weights.iter()) {
            acc += a.conj() * b * w;
        }
        Ok(acc)
    }

    /// `sqrt(Re dot(f, f))`, clamped at zero against rounding.
    pub fn norm(&self, f: ArrayView1<'_, Complex64>) -> Result<f64> {
        self.check_len(f.len())?;
        let mut acc = 0.0;
        for (v, w) in f.iter().zip(self.weights.iter()) {
            acc += v.norm_sqr() * w;
        }
        Ok(acc.max(0.0).sqrt())
    }

    /// Norm of a real-valued function.
    pub fn norm_real(&self, f: ArrayView1<'_, f64>) -> Result<f64> {
        self.check_len(f.len())?;
        let mut acc = 0.0;
        for (v, w) in f.iter().zip(self.weights.iter()) {
            acc += v * v * w;
        }
        Ok(acc.max(0.0).sqrt())
    }

    /// Returns `f / ‖f‖`, rejecting functions with norm below
    /// [`ZERO_NORM_THRESHOLD`].
    pub fn normalize(&self, f: ArrayView1<'_, Complex64>) -> Result<Array1<Complex64>> {
        let n = self.norm(f)?;
        if n < ZERO_NORM_THRESHOLD {
            return Err(Error::ZeroNorm);
        }
        Ok(f.mapv(|z| z / n))
    }
}

/// Equispaced grid over `[a, b]` with `count` points.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    let step = (b - a) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i == count - 1 {
                b
            } else {
                a + step * i as f64
            }
        })
        .collect()
}

/// Lifts a real slice into complex storage with zero imaginary parts.
pub fn to_complex(f: &[f64]) -> Array1<Complex64> {
    f.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}
