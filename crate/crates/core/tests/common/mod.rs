//! Shared helpers and independent oracles for the integration tests.
// Each test binary compiles this module separately and uses a subset.
#![allow(dead_code)]

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rom_core::integration::linspace;
use rom_core::{Quadrature, QuadratureRule, TrainingSet};

/// Jacobi eigenvalue iteration for a real symmetric matrix. Used as a
/// rank oracle independent of the greedy/Gram-Schmidt code paths.
pub fn symmetric_eigenvalues(mut a: Array2<f64>) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let scale = a.iter().map(|v| v.abs()).fold(0.0f64, f64::max).max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(a[[i, j]].abs());
            }
        }
        if off < 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[[p, q]].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * a[[p, q]]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[[i, i]]).collect()
}

/// Numerical rank of a set of real-valued rows under the quadrature
/// inner product: eigenvalues of the Gram matrix above `rel_tol` times
/// the largest one. The Gram eigenvalues are the squared singular
/// values of the (weighted) training matrix.
pub fn quadrature_rank(values: ArrayView2<'_, Complex64>, q: &Quadrature, rel_tol: f64) -> usize {
    let n = values.nrows();
    let mut gram = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let d = q.dot(values.row(i), values.row(j)).unwrap();
            gram[[i, j]] = d.re;
            gram[[j, i]] = d.re;
        }
    }
    let eig = symmetric_eigenvalues(gram);
    let max = eig.iter().cloned().fold(0.0f64, f64::max);
    eig.iter().filter(|&&e| e > rel_tol * max).count()
}

/// A randomized smooth 1-parameter family sampled on an equispaced
/// grid: damped mixtures of sin/cos with random frequencies and phases.
pub fn random_smooth_family(seed: u64, n_params: usize, l: usize) -> (TrainingSet, Quadrature) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stretch = rng.random_range(0.5..2.0);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let mix = rng.random_range(0.1..1.0);
    let decay = rng.random_range(0.0..1.0);
    let grid = linspace(0.0, 1.0, l);
    let params = linspace(1.0, 3.0, n_params);
    let values = Array2::from_shape_fn((n_params, l), |(i, j)| {
        let lam = params[i];
        let x = grid[j];
        (lam * stretch * 4.0 * x + phase).sin() + mix * (lam * 2.5 * x).cos() * (-decay * x).exp()
    });
    let training = TrainingSet::from_real(values, params, grid.clone()).unwrap();
    let q = Quadrature::new(&grid, QuadratureRule::Trapezoidal).unwrap();
    (training, q)
}

pub fn max_abs_diff(a: ArrayView1<'_, Complex64>, b: ArrayView1<'_, Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0f64, f64::max)
}

/// Direct projection error: subtract the projection explicitly and take
/// the squared quadrature norm.
pub fn direct_projection_error(
    basis: ArrayView2<'_, Complex64>,
    f: ArrayView1<'_, Complex64>,
    q: &Quadrature,
) -> f64 {
    let mut residual = f.to_owned();
    for e in basis.rows() {
        let c = q.dot(e, f).unwrap();
        for (r, ei) in residual.iter_mut().zip(e.iter()) {
            *r -= c * ei;
        }
    }
    let n = q.norm(residual.view()).unwrap();
    n * n
}

/// Largest direct projection error over the (optionally normalized)
/// training rows against a basis prefix of `size` elements.
pub fn max_direct_error(
    training: &TrainingSet,
    basis: ArrayView2<'_, Complex64>,
    size: usize,
    q: &Quadrature,
    normalize: bool,
) -> f64 {
    let prefix = basis.slice(ndarray::s![..size, ..]);
    let mut worst = 0.0f64;
    for i in 0..training.n_train() {
        let row = training.row(i);
        let err = if normalize {
            let h = q.normalize(row).unwrap();
            direct_projection_error(prefix, h.view(), q)
        } else {
            direct_projection_error(prefix, row, q)
        };
        worst = worst.max(err);
    }
    worst
}

/// Real parts of a complex row (for real-valued data).
pub fn real_row(values: ArrayView1<'_, Complex64>) -> Array1<f64> {
    values.iter().map(|z| z.re).collect()
}
