//! Minimal dense LU factorization with partial pivoting, generic over
//! real and complex scalars. Used for the empirical-node matrix and the
//! spline collocation systems; never forms an explicit inverse.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::ComplexFloat;
use num_traits::{cast, Zero};

use crate::error::{Error, Result};

pub(crate) struct LuFactors<T> {
    lu: Array2<T>,
    pivots: Vec<usize>,
}

pub(crate) fn lu_factor<T: ComplexFloat>(a: ArrayView2<'_, T>) -> Result<LuFactors<T>> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols(), "LU expects a square matrix");
    let mut lu = a.to_owned();
    let mut pivots = vec![0usize; n];

    for k in 0..n {
        let mut p = k;
        let mut p_abs = lu[[k, k]].abs();
        for i in k + 1..n {
            let v = lu[[i, k]].abs();
            if v > p_abs {
                p_abs = v;
                p = i;
            }
        }
        if p_abs.is_nan() || p_abs <= <T as ComplexFloat>::Real::zero() {
            return Err(Error::SingularMatrix);
        }
        pivots[k] = p;
        if p != k {
            for j in 0..n {
                let tmp = lu[[k, j]];
                lu[[k, j]] = lu[[p, j]];
                lu[[p, j]] = tmp;
            }
        }
        let pivot = lu[[k, k]];
        for i in k + 1..n {
            let factor = lu[[i, k]] / pivot;
            lu[[i, k]] = factor;
            for j in k + 1..n {
                let t = lu[[k, j]];
                lu[[i, j]] = lu[[i, j]] - factor * t;
            }
        }
    }

    Ok(LuFactors { lu, pivots })
}

impl<T: ComplexFloat> LuFactors<T> {
    pub(crate) fn solve(&self, b: ArrayView1<'_, T>) -> Array1<T> {
        let n = self.lu.nrows();
        debug_assert_eq!(b.len(), n);
        let mut x = b.to_owned();
        for k in 0..n {
            if self.pivots[k] != k {
                x.swap(k, self.pivots[k]);
            }
        }
        // Forward substitution with the unit-diagonal L factor.
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[[i, j]] * x[j];
            }
            x[i] = s;
        }
        // Back substitution with U.
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[[i, j]] * x[j];
            }
            x[i] = s / self.lu[[i, i]];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub(crate) fn solve_matrix(&self, b: ArrayView2<'_, T>) -> Array2<T> {
        let n = self.lu.nrows();
        debug_assert_eq!(b.nrows(), n);
        let mut out = Array2::zeros((n, b.ncols()));
        for j in 0..b.ncols() {
            let col = self.solve(b.column(j));
            out.column_mut(j).assign(&col);
        }
        out
    }

    /// Rough conditioning estimate: the spread of the U diagonal.
    pub(crate) fn diag_ratio(&self) -> f64 {
        let n = self.lu.nrows();
        if n == 0 {
            return 1.0;
        }
        let mut min = f64::INFINITY;
        let mut max: f64 = 0.0;
        for i in 0..n {
            let v = cast::<_, f64>(self.lu[[i, i]].abs()).unwrap_or(f64::NAN);
            min = min.min(v);
            max = max.max(v);
        }
        max / min
    }
}
