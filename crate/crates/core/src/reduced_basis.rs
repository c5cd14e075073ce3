//! Greedy construction of a reduced basis from a training set.
//!
//! The greedy loop seeds the basis with the training row of maximal
//! norm, then repeatedly selects the row with the largest squared
//! projection error onto the current basis, orthonormalizes it with
//! [`gs_add`] and appends it. Projection errors are maintained
//! incrementally: adding element `e_{n+1}` turns `σ_n(λ)` into
//! `σ_n(λ) − |⟨e_{n+1}, h_λ⟩|²`, so each iteration costs `O(N·L)`
//! regardless of the basis size.
//!
//! With `normalize = true` the loop runs on unit-normalized copies of
//! the training rows. All projection coefficients then satisfy
//! `|c| ≤ 1`, which keeps the error recursion well conditioned; the
//! reported errors are those of the normalized functions.

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gram_schmidt::gs_add;
use crate::integration::{Quadrature, ZERO_NORM_THRESHOLD};

/// Matrix of sampled functions together with the parameter and physical
/// points that index it. Row `i` holds the function at parameter row
/// `i` sampled on the physical grid.
#[derive(Debug, Clone)]
pub struct TrainingSet {
    values: Array2<Complex64>,
    parameter_points: Array2<f64>,
    physical_points: Array1<f64>,
}

impl TrainingSet {
    pub fn new(
        values: Array2<Complex64>,
        parameter_points: Array2<f64>,
        physical_points: Array1<f64>,
    ) -> Result<Self> {
        let (n, l) = values.dim();
        if n < 1 {
            return Err(Error::InvalidData("training set has no rows".into()));
        }
        if l < 2 {
            return Err(Error::InvalidData(
                "training functions need at least 2 samples".into(),
            ));
        }
        if physical_points.len() != l {
            return Err(Error::Dimension {
                expected: l,
                got: physical_points.len(),
            });
        }
        if parameter_points.nrows() != n {
            return Err(Error::Dimension {
                expected: n,
                got: parameter_points.nrows(),
            });
        }
        if parameter_points.ncols() < 1 {
            return Err(Error::InvalidData(
                "parameter points need at least one column".into(),
            ));
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidData(
                "training values contain non-finite entries".into(),
            ));
        }
        if parameter_points.iter().any(|v| !v.is_finite())
            || physical_points.iter().any(|v| !v.is_finite())
        {
            return Err(Error::InvalidData(
                "parameter or physical points contain non-finite entries".into(),
            ));
        }

        // Duplicate parameter rows would make greedy selection ambiguous.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let ra = parameter_points.row(a);
            let rb = parameter_points.row(b);
            ra.iter()
                .zip(rb.iter())
                .map(|(x, y)| x.partial_cmp(y).unwrap())
                .find(|c| c.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for w in order.windows(2) {
            if parameter_points.row(w[0]) == parameter_points.row(w[1]) {
                return Err(Error::InvalidData(format!(
                    "parameter rows {} and {} are identical",
                    w[0], w[1]
                )));
            }
        }

        Ok(TrainingSet {
            values,
            parameter_points,
            physical_points,
        })
    }

    /// Convenience constructor for real data over a 1-D parameter grid.
    pub fn from_real(
        values: Array2<f64>,
        parameters: Vec<f64>,
        physical_points: Vec<f64>,
    ) -> Result<Self> {
        let complex = values.mapv(|v| Complex64::new(v, 0.0));
        let n = parameters.len();
        let params = Array2::from_shape_vec((n, 1), parameters)
            .map_err(|e| Error::InvalidData(e.to_string()))?;
        TrainingSet::new(complex, params, Array1::from(physical_points))
    }

    /// Number of training functions.
    pub fn n_train(&self) -> usize {
        self.values.nrows()
    }

    /// Number of physical samples per function.
    pub fn n_points(&self) -> usize {
        self.values.ncols()
    }

    /// Dimension of the parameter space.
    pub fn param_dim(&self) -> usize {
        self.parameter_points.ncols()
    }

    pub fn values(&self) -> ArrayView2<'_, Complex64> {
        self.values.view()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, Complex64> {
        self.values.row(i)
    }

    pub fn parameter_points(&self) -> ArrayView2<'_, f64> {
        self.parameter_points.view()
    }

    pub fn physical_points(&self) -> ArrayView1<'_, f64> {
        self.physical_points.view()
    }

    /// True when every value has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }
}

/// Orthonormal functions selected greedily from a training set, with
/// the selection history that produced them.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    elements: Array2<Complex64>,
    greedy_indices: Vec<usize>,
    greedy_errors: Vec<f64>,
    quadrature: Quadrature,
    normalized_build: bool,
    residual_error: f64,
}

impl ReducedBasis {
    /// Reassembles a basis from stored fields (e.g. a model file).
    pub fn from_parts(
        elements: Array2<Complex64>,
        greedy_indices: Vec<usize>,
        greedy_errors: Vec<f64>,
        quadrature: Quadrature,
        normalized_build: bool,
    ) -> Result<Self> {
        if elements.ncols() != quadrature.len() {
            return Err(Error::Dimension {
                expected: quadrature.len(),
                got: elements.ncols(),
            });
        }
        if elements.nrows() != greedy_indices.len() || elements.nrows() != greedy_errors.len() {
            return Err(Error::InvalidData(
                "basis elements, greedy indices and greedy errors must have equal length".into(),
            ));
        }
        if elements.nrows() == 0 {
            return Err(Error::InvalidData("basis has no elements".into()));
        }
        let residual_error = *greedy_errors.last().unwrap();
        Ok(ReducedBasis {
            elements,
            greedy_indices,
            greedy_errors,
            quadrature,
            normalized_build,
            residual_error,
        })
    }

    /// Number of basis elements.
    pub fn n_basis(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> ArrayView2<'_, Complex64> {
        self.elements.view()
    }

    /// Training-set indices selected by the greedy loop, in order.
    pub fn greedy_indices(&self) -> &[usize] {
        &self.greedy_indices
    }

    /// Maximum squared projection error over the training set at each
    /// iteration: entry `i` is the error against the `i`-element basis
    /// that triggered the selection of element `i + 1`.
    pub fn greedy_errors(&self) -> &[f64] {
        &self.greedy_errors
    }

    /// The σ sequence for convergence plots.
    pub fn projection_error_history(&self) -> &[f64] {
        &self.greedy_errors
    }

    /// Maximum squared projection error remaining when the build
    /// stopped (at or below the tolerance unless the training set ran
    /// out of independent rows first).
    pub fn residual_error(&self) -> f64 {
        self.residual_error
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quadrature
    }

    /// Whether the greedy loop ran on unit-normalized training rows.
    pub fn normalized_build(&self) -> bool {
        self.normalized_build
    }
}

/// Runs the greedy loop until the maximum squared projection error over
/// the training set drops to `greedy_tol` or the independent rows are
/// exhausted.
pub fn reduce_basis(
    training: &TrainingSet,
    q: &Quadrature,
    greedy_tol: f64,
    normalize: bool,
) -> Result<ReducedBasis> {
    if greedy_tol.is_nan() || greedy_tol <= 0.0 {
        return Err(Error::InvalidData(format!(
            "greedy tolerance must be positive, got {greedy_tol}"
        )));
    }
    let n_train = training.n_train();
    let l = training.n_points();
    if l != q.len() {
        return Err(Error::Dimension {
            expected: q.len(),
            got: l,
        });
    }

    let mut norms = vec![0.0f64; n_train];
    let mut valid = vec![true; n_train];
    let mut valid_count = 0usize;
    for i in 0..n_train {
        norms[i] = q.norm(training.row(i))?;
        if norms[i] < ZERO_NORM_THRESHOLD {
            valid[i] = false;
            log::warn!("training row {i} has norm below the zero threshold; skipping it");
        } else {
            valid_count += 1;
        }
    }
    if valid_count == 0 {
        return Err(Error::ZeroNorm);
    }

    // Working copies of the rows; the conditioning path divides each
    // valid row by its norm so that every projection coefficient stays
    // bounded by one.
    let mut work = training.values().to_owned();
    if normalize {
        for i in 0..n_train {
            if valid[i] {
                let inv = 1.0 / norms[i];
                work.row_mut(i).map_inplace(|z| *z *= inv);
            }
        }
    }

    let mut sigma = vec![0.0f64; n_train];
    for i in 0..n_train {
        if valid[i] {
            sigma[i] = if normalize { 1.0 } else { norms[i] * norms[i] };
        }
    }

    // Seed: the row of maximal (original) norm, ties broken by index.
    let mut seed = usize::MAX;
    let mut seed_norm = f64::NEG_INFINITY;
    for i in 0..n_train {
        if valid[i] && norms[i] > seed_norm {
            seed_norm = norms[i];
            seed = i;
        }
    }

    let argmax_sigma = |sigma: &[f64]| {
        let mut arg = usize::MAX;
        let mut best = f64::NEG_INFINITY;
        for i in 0..n_train {
            if valid[i] && sigma[i] > best {
                best = sigma[i];
                arg = i;
            }
        }
        (arg, best)
    };

    let n_cap = valid_count.min(l);
    let mut elements = Array2::<Complex64>::zeros((n_cap, l));
    let mut greedy_indices = Vec::with_capacity(n_cap);
    let mut greedy_errors = Vec::with_capacity(n_cap);

    let seed_element = q.normalize(work.row(seed))?;
    elements.row_mut(0).assign(&seed_element);
    greedy_indices.push(seed);
    greedy_errors.push(argmax_sigma(&sigma).1);
    let mut n = 1usize;

    let weights = q.weights();
    let residual_error;
    loop {
        // One coefficient sweep against the newest element updates every
        // projection error at constant cost per row.
        let newest = elements.row(n - 1);
        let weighted: Array1<Complex64> = newest
            .iter()
            .zip(weights.iter())
            .map(|(z, w)| z.conj() * w)
            .collect();
        let coeffs = work.dot(&weighted);
        for i in 0..n_train {
            if valid[i] {
                sigma[i] = (sigma[i] - coeffs[i].norm_sqr()).max(0.0);
            }
        }

        let (arg, max_sigma) = argmax_sigma(&sigma);
        if max_sigma <= greedy_tol {
            residual_error = max_sigma;
            break;
        }
        if n == n_cap {
            residual_error = max_sigma;
            break;
        }
        match gs_add(elements.slice(s![..n, ..]), work.row(arg), q) {
            Ok((element, _)) => {
                elements.row_mut(n).assign(&element);
                greedy_indices.push(arg);
                greedy_errors.push(max_sigma);
                n += 1;
            }
            // The best remaining row is numerically inside the span:
            // the training set is exhausted below the tolerance.
            Err(Error::LinearDependence { .. }) | Err(Error::ZeroNorm) => {
                residual_error = max_sigma;
                break;
            }
            Err(e) => return Err(e),
        }
    }

    Ok(ReducedBasis {
        elements: elements.slice(s![..n, ..]).to_owned(),
        greedy_indices,
        greedy_errors,
        quadrature: q.clone(),
        normalized_build: normalize,
        residual_error,
    })
}
