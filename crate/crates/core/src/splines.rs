//! One-dimensional exact-interpolation splines of degree 1, 3 or 5.
//!
//! The interpolant is represented in the B-spline basis. The knot
//! vector clamps the endpoints with multiplicity `k + 1` and drops the
//! first and last `(k − 1)/2` interior breakpoints (the not-a-knot
//! generalization), which makes the collocation system square and
//! uniquely solvable and lets a degree-`k` spline reproduce every
//! polynomial of degree ≤ `k` exactly. No extrapolation: evaluation is
//! restricted to `[x_first, x_last]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{lu_factor, LuFactors};

/// Interpolating spline degrees supported by the fit layer.
pub const SUPPORTED_DEGREES: [usize; 3] = [1, 3, 5];

/// An exact-interpolation spline in B-spline form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spline {
    degree: usize,
    knot_vector: Vec<f64>,
    coefficients: Vec<f64>,
}

impl Spline {
    /// Reassembles a spline from stored fields (e.g. a model file).
    pub fn from_parts(
        degree: usize,
        knot_vector: Vec<f64>,
        coefficients: Vec<f64>,
    ) -> Result<Self> {
        check_degree(degree)?;
        if knot_vector.len() != coefficients.len() + degree + 1 {
            return Err(Error::InvalidData(
                "knot vector length must equal coefficient count + degree + 1".into(),
            ));
        }
        if knot_vector.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidData(
                "knot vector must be non-decreasing".into(),
            ));
        }
        if knot_vector
            .iter()
            .chain(coefficients.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidData(
                "spline data contains non-finite values".into(),
            ));
        }
        let s = Spline {
            degree,
            knot_vector,
            coefficients,
        };
        let (min, max) = s.domain();
        if min >= max {
            return Err(Error::InvalidData("spline domain is empty".into()));
        }
        Ok(s)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Closed evaluation interval `[x_first, x_last]`.
    pub fn domain(&self) -> (f64, f64) {
        let k = self.degree;
        (
            self.knot_vector[k],
            self.knot_vector[self.knot_vector.len() - 1 - k],
        )
    }

    pub fn knot_vector(&self) -> &[f64] {
        &self.knot_vector
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Piecewise-polynomial value at `x`. Outside the domain this is an
    /// error, never an extrapolation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (min, max) = self.domain();
        if !(x >= min && x <= max) {
            return Err(Error::OutOfDomain { value: x, min, max });
        }
        let k = self.degree;
        let span = find_span(&self.knot_vector, k, self.coefficients.len(), x);
        let vals = basis_values(&self.knot_vector, k, span, x);
        let mut acc = 0.0;
        for (r, v) in vals.iter().enumerate() {
            acc += self.coefficients[span - k + r] * v;
        }
        Ok(acc)
    }

    /// Exact piecewise differentiation via coefficient differencing.
    #[cfg(test)]
    fn derivative(&self) -> Spline {
        let k = self.degree;
        assert!(k >= 1);
        let t = &self.knot_vector;
        let c = &self.coefficients;
        let d: Vec<f64> = (0..c.len() - 1)
            .map(|j| k as f64 * (c[j + 1] - c[j]) / (t[j + k + 1] - t[j + 1]))
            .collect();
        Spline {
            degree: k - 1,
            knot_vector: t[1..t.len() - 1].to_vec(),
            coefficients: d,
        }
    }
}

/// A pair of splines fitting the real and imaginary parts of complex
/// samples independently.
#[derive(Debug, Clone)]
pub struct ComplexSpline {
    re: Spline,
    im: Spline,
}

impl ComplexSpline {
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.re.eval(x)?, self.im.eval(x)?))
    }

    pub fn parts(&self) -> (&Spline, &Spline) {
        (&self.re, &self.im)
    }
}

/// Factors the collocation system for a fixed abscissa set once, so
/// that many ordinate vectors can be fitted cheaply.
pub(crate) struct SplineFitter {
    degree: usize,
    knot_vector: Vec<f64>,
    lu: LuFactors<f64>,
    len: usize,
}

impl SplineFitter {
    pub(crate) fn new(x: &[f64], degree: usize) -> Result<Self> {
        check_degree(degree)?;
        let n = x.len();
        if n <= degree {
            return Err(Error::InsufficientData(format!(
                "degree-{degree} interpolation needs at least {} samples, got {n}",
                degree + 1
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidAbscissa(
                "abscissae contain non-finite values".into(),
            ));
        }
        for i in 0..n - 1 {
            if x[i + 1] <= x[i] {
                return Err(Error::InvalidAbscissa(format!(
                    "abscissae must be strictly increasing (violation between indices {i} and {})",
                    i + 1
                )));
            }
        }

        let knot_vector = not_a_knot_vector(x, degree);
        let mut collocation = ndarray::Array2::<f64>::zeros((n, n));
        for (i, &xi) in x.iter().enumerate() {
            let span = find_span(&knot_vector, degree, n, xi);
            let vals = basis_values(&knot_vector, degree, span, xi);
            for (r, v) in vals.iter().enumerate() {
                collocation[[i, span - degree + r]] = *v;
            }
        }
        let lu = lu_factor(collocation.view())?;
        Ok(SplineFitter {
            degree,
            knot_vector,
            lu,
            len: n,
        })
    }

    pub(crate) fn fit(&self, y: &[f64]) -> Result<Spline> {
        if y.len() != self.len {
            return Err(Error::Dimension {
                expected: self.len,
                got: y.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData(
                "ordinates contain non-finite values".into(),
            ));
        }
        let rhs = ndarray::Array1::from(y.to_vec());
        let coefficients = self.lu.solve(rhs.view()).to_vec();
        Ok(Spline {
            degree: self.degree,
            knot_vector: self.knot_vector.clone(),
            coefficients,
        })
    }
}

/// Fits the unique degree-`k` interpolating spline through `(x, y)`.
pub fn fit_spline(x: &[f64], y: &[f64], degree: usize) -> Result<Spline> {
    if y.len() != x.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    SplineFitter::new(x, degree)?.fit(y)
}

/// Fits real and imaginary parts independently.
pub fn fit_spline_complex(x: &[f64], y: &[Complex64], degree: usize) -> Result<ComplexSpline> {
    if y.len() != x.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    let fitter = SplineFitter::new(x, degree)?;
    let re: Vec<f64> = y.iter().map(|z| z.re).collect();
    let im: Vec<f64> = y.iter().map(|z| z.im).collect();
    Ok(ComplexSpline {
        re: fitter.fit(&re)?,
        im: fitter.fit(&im)?,
    })
}

fn check_degree(degree: usize) -> Result<()> {
    if !SUPPORTED_DEGREES.contains(&degree) {
        return Err(Error::Unsupported(format!(
            "spline degree {degree} (supported degrees: 1, 3, 5)"
        )));
    }
    Ok(())
}

/// Clamped knot vector dropping the first and last `(k − 1)/2` interior
/// breakpoints.
fn not_a_knot_vector(x: &[f64], k: usize) -> Vec<f64> {
    let n = x.len();
    let m = (k - 1) / 2;
    let mut t = Vec::with_capacity(n + k + 1);
    t.extend(std::iter::repeat_n(x[0], k + 1));
    t.extend_from_slice(&x[m + 1..n - 1 - m]);
    t.extend(std::iter::repeat_n(x[n - 1], k + 1));
    t
}

/// Index `μ` with `t[μ] ≤ x < t[μ+1]`, clamped to the last span at the
/// right endpoint.
fn find_span(t: &[f64], k: usize, n_basis: usize, x: f64) -> usize {
    if x >= t[n_basis] {
        return n_basis - 1;
    }
    if x <= t[k] {
        return k;
    }
    let mut lo = k;
    let mut hi = n_basis;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if x < t[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// Values of the `k + 1` B-splines that are non-zero on span `μ`
/// (Cox–de Boor recursion).
fn basis_values(t: &[f64], k: usize, span: usize, x: f64) -> Vec<f64> {
    let mut vals = vec![0.0; k + 1];
    let mut left = vec![0.0; k + 1];
    let mut right = vec![0.0; k + 1];
    vals[0] = 1.0;
    for j in 1..=k {
        left[j] = x - t[span + 1 - j];
        right[j] = t[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            let tmp = vals[r] / (right[r + 1] + left[j - r]);
            vals[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        vals[j] = saved;
    }
    vals
}
