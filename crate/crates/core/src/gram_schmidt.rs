//! Numerically stable orthonormalization against a quadrature-defined
//! inner product.
//!
//! Each pass subtracts the projections onto the existing basis one
//! element at a time (modified Gram-Schmidt). When a pass removes more
//! than half of the candidate's norm the result is dominated by
//! cancellation noise, so the pass is repeated — the classical "twice is
//! enough" iteration — up to three passes in total.

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integration::{Quadrature, ZERO_NORM_THRESHOLD};

/// A pass is repeated when it shrinks the norm below this fraction of
/// the pre-pass norm.
const NORM_DROP_TRIGGER: f64 = 0.5;

const MAX_PASSES: usize = 3;

/// A candidate whose surviving norm falls below this fraction of its
/// original norm is declared linearly dependent.
pub const DEPENDENCE_RTOL: f64 = 1e-12;

/// Orthonormalizes `candidate` against an already orthonormal `basis`.
///
/// Returns the new unit-norm element together with the surviving norm:
/// the candidate's norm after projection removal, before the final
/// normalization. Fails with [`Error::LinearDependence`] when the
/// candidate lies in the span of the basis.
pub fn gs_add(
    basis: ArrayView2<'_, Complex64>,
    candidate: ArrayView1<'_, Complex64>,
    q: &Quadrature,
) -> Result<(Array1<Complex64>, f64)> {
    gs_add_passes(basis, candidate, q, MAX_PASSES)
}

fn gs_add_passes(
    basis: ArrayView2<'_, Complex64>,
    candidate: ArrayView1<'_, Complex64>,
    q: &Quadrature,
    max_passes: usize,
) -> Result<(Array1<Complex64>, f64)> {
    if basis.nrows() > 0 && basis.ncols() != q.len() {
        return Err(Error::Dimension {
            expected: q.len(),
            got: basis.ncols(),
        });
    }
    let original = q.norm(candidate)?;
    if original < ZERO_NORM_THRESHOLD {
        return Err(Error::ZeroNorm);
    }

    let mut v = candidate.to_owned();
    let mut surviving = original;
    if basis.nrows() > 0 {
        let mut pre_pass = original;
        for _ in 0..max_passes {
            for e in basis.rows() {
                let c = q.dot(e, v.view())?;
                for (vi, ei) in v.iter_mut().zip(e.iter()) {
                    *vi -= c * ei;
                }
            }
            surviving = q.norm(v.view())?;
            if surviving >= NORM_DROP_TRIGGER * pre_pass {
                break;
            }
            pre_pass = surviving;
        }
    }

    if surviving < DEPENDENCE_RTOL * original {
        return Err(Error::LinearDependence {
            surviving_norm: surviving,
        });
    }
    Ok((v.mapv(|z| z / surviving), surviving))
}

/// Orthonormalizes the rows of `vectors` in order.
///
/// Row `i` of the output lies in the span of rows `0..=i` of the input.
/// A row that is (numerically) dependent on its predecessors aborts the
/// procedure with [`Error::DependentRow`] naming that row.
pub fn orthonormalize(
    vectors: ArrayView2<'_, Complex64>,
    q: &Quadrature,
) -> Result<Array2<Complex64>> {
    let m = vectors.nrows();
    let l = vectors.ncols();
    if l != q.len() {
        return Err(Error::Dimension {
            expected: q.len(),
            got: l,
        });
    }
    let mut out = Array2::zeros((m, l));
    for i in 0..m {
        match gs_add(out.slice(s![..i, ..]), vectors.row(i), q) {
            Ok((e, _)) => out.row_mut(i).assign(&e),
            Err(Error::LinearDependence { .. }) | Err(Error::ZeroNorm) => {
                return Err(Error::DependentRow { index: i });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Largest deviation of the Gram matrix from the identity.
pub fn gram_deviation(elements: ArrayView2<'_, Complex64>, q: &Quadrature) -> Result<f64> {
    let n = elements.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let g = q.dot(elements.row(i), elements.row(j))?;
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g - target).norm());
        }
    }
    Ok(dev)
}
