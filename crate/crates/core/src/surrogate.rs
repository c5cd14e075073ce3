//! End-to-end surrogate assembly and evaluation.
//!
//! Building is the offline stage: run the greedy reduced basis, derive
//! the empirical interpolation operator, then fit one spline per
//! empirical node through that node's training values across the
//! parameter grid. Evaluation is the online stage: spline values at the
//! requested parameter weighted by the cardinal functions, `O(n·L)` per
//! call with nothing recomputed.

use std::time::Instant;

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;

use crate::eim::{build_eim, EimOperator};
use crate::error::{Error, Result};
use crate::integration::{Quadrature, ZERO_NORM_THRESHOLD};
use crate::reduced_basis::{reduce_basis, ReducedBasis, TrainingSet};
use crate::splines::{Spline, SplineFitter};

/// Summary of an offline build.
#[derive(Debug, Clone)]
pub struct BuildReport {
    pub n_basis: usize,
    pub greedy_errors: Vec<f64>,
    pub wall_time_seconds: f64,
}

/// A predictive model: empirical interpolant plus per-node spline fits,
/// evaluable at any parameter inside the training interval.
/// Immutable after construction; evaluation is thread-safe.
#[derive(Debug, Clone)]
pub struct Surrogate {
    rb: ReducedBasis,
    eim: EimOperator,
    fits: Vec<Spline>,
    parameter_domain: (f64, f64),
    cardinal_real: Array2<f64>,
    report: BuildReport,
}

/// Runs the offline pipeline on real-valued training data over a 1-D,
/// strictly increasing parameter grid.
pub fn build_surrogate(
    training: &TrainingSet,
    q: &Quadrature,
    greedy_tol: f64,
    poly_deg: usize,
    normalize: bool,
) -> Result<Surrogate> {
    if !training.is_real() {
        return Err(Error::Unsupported(
            "surrogate models require real-valued training data".into(),
        ));
    }
    if training.param_dim() != 1 {
        return Err(Error::Unsupported(format!(
            "surrogate models require a 1-D parameter domain, got {} dimensions",
            training.param_dim()
        )));
    }
    let params: Vec<f64> = training.parameter_points().column(0).to_vec();
    for w in params.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidAbscissa(
                "parameter points must be strictly increasing for surrogate builds".into(),
            ));
        }
    }
    if training.n_train() <= poly_deg {
        return Err(Error::InsufficientData(format!(
            "degree-{poly_deg} fits need at least {} training parameters, got {}",
            poly_deg + 1,
            training.n_train()
        )));
    }

    let started = Instant::now();
    let rb = reduce_basis(training, q, greedy_tol, normalize)?;
    let eim = build_eim(&rb)?;

    // One spline per empirical node, fitted through the original
    // (unnormalized) training values there; the collocation system is
    // factored once and shared across nodes.
    let fitter = SplineFitter::new(&params, poly_deg)?;
    let mut fits = Vec::with_capacity(eim.basis_size());
    for &node in eim.nodes() {
        let ys: Vec<f64> = (0..training.n_train())
            .map(|j| training.values()[[j, node]].re)
            .collect();
        fits.push(fitter.fit(&ys)?);
    }

    let cardinal_real = eim.cardinal_matrix().mapv(|z| z.re);
    let report = BuildReport {
        n_basis: rb.n_basis(),
        greedy_errors: rb.greedy_errors().to_vec(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };

    Ok(Surrogate {
        rb,
        eim,
        fits,
        parameter_domain: (params[0], params[params.len() - 1]),
        cardinal_real,
        report,
    })
}

impl Surrogate {
    /// Reassembles a surrogate from stored parts (e.g. a model file).
    pub fn from_parts(
        rb: ReducedBasis,
        eim: EimOperator,
        fits: Vec<Spline>,
        parameter_domain: (f64, f64),
        report: BuildReport,
    ) -> Result<Self> {
        if fits.len() != eim.basis_size() {
            return Err(Error::InvalidData(
                "one spline fit per empirical node is required".into(),
            ));
        }
        if eim.grid_len() != rb.quadrature().len() {
            return Err(Error::InvalidData(
                "interpolant grid length does not match the quadrature".into(),
            ));
        }
        if parameter_domain.0.is_nan()
            || parameter_domain.1.is_nan()
            || parameter_domain.0 >= parameter_domain.1
        {
            return Err(Error::InvalidData("empty parameter domain".into()));
        }
        let cardinal_real = eim.cardinal_matrix().mapv(|z| z.re);
        Ok(Surrogate {
            rb,
            eim,
            fits,
            parameter_domain,
            cardinal_real,
            report,
        })
    }

    /// Online evaluation: the model's prediction sampled on the
    /// physical grid.
    pub fn eval(&self, lambda: f64) -> Result<Array1<f64>> {
        let (min, max) = self.parameter_domain;
        if !(lambda >= min && lambda <= max) {
            return Err(Error::OutOfDomain {
                value: lambda,
                min,
                max,
            });
        }
        let mut node_values = Array1::zeros(self.fits.len());
        for (i, fit) in self.fits.iter().enumerate() {
            node_values[i] = fit.eval(lambda)?;
        }
        Ok(node_values.dot(&self.cardinal_real))
    }

    pub fn n_basis(&self) -> usize {
        self.eim.basis_size()
    }

    pub fn parameter_domain(&self) -> (f64, f64) {
        self.parameter_domain
    }

    pub fn physical_points(&self) -> ArrayView1<'_, f64> {
        self.rb.quadrature().points()
    }

    pub fn reduced_basis(&self) -> &ReducedBasis {
        &self.rb
    }

    pub fn eim(&self) -> &EimOperator {
        &self.eim
    }

    pub fn fits(&self) -> &[Spline] {
        &self.fits
    }

    pub fn report(&self) -> &BuildReport {
        &self.report
    }
}

/// `‖approx − truth‖ / ‖truth‖` under the quadrature norm.
pub fn relative_l2_error(
    q: &Quadrature,
    approx: ArrayView1<'_, f64>,
    truth: ArrayView1<'_, f64>,
) -> Result<f64> {
    let truth_norm = q.norm_real(truth)?;
    if truth_norm < ZERO_NORM_THRESHOLD {
        return Err(Error::ZeroNorm);
    }
    let diff: Array1<f64> = approx
        .iter()
        .zip(truth.iter())
        .map(|(a, b)| a - b)
        .collect();
    Ok(q.norm_real(diff.view())? / truth_norm)
}

/// Interpolates a real grid function through the operator's nodes.
pub fn interpolate_real(eim: &EimOperator, f: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
    let complex: Array1<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(eim.interpolate(complex.view())?.mapv(|z| z.re))
}
