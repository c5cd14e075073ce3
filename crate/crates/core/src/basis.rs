//! User-facing basis utilities: project, interpolate and projection
//! errors for reduced or user-supplied bases.

use std::sync::OnceLock;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::eim::EimOperator;
use crate::error::{Error, Result};
use crate::gram_schmidt::gram_deviation;
use crate::integration::Quadrature;
use crate::reduced_basis::ReducedBasis;

/// User-supplied bases are accepted when their Gram matrix deviates
/// from the identity by at most this much; the projection formulas
/// silently break on anything worse.
pub const ORTHONORMALITY_TOL: f64 = 1e-8;

/// An orthonormal basis paired with its quadrature.
///
/// The empirical interpolation operator is built lazily on first use
/// and cached; concurrent first calls build it exactly once.
#[derive(Debug)]
pub struct Basis {
    elements: Array2<Complex64>,
    quadrature: Quadrature,
    eim: OnceLock<Result<EimOperator>>,
}

impl Basis {
    /// Validates orthonormality (to [`ORTHONORMALITY_TOL`]) and wraps
    /// the elements.
    pub fn new(elements: Array2<Complex64>, quadrature: Quadrature) -> Result<Self> {
        if elements.nrows() == 0 {
            return Err(Error::InvalidData("basis has no elements".into()));
        }
        if elements.ncols() != quadrature.len() {
            return Err(Error::Dimension {
                expected: quadrature.len(),
                got: elements.ncols(),
            });
        }
        let deviation = gram_deviation(elements.view(), &quadrature)?;
        if deviation > ORTHONORMALITY_TOL {
            return Err(Error::NonOrthonormalBasis { deviation });
        }
        Ok(Basis {
            elements,
            quadrature,
            eim: OnceLock::new(),
        })
    }

    /// Wraps the elements of a reduced basis.
    pub fn from_reduced(rb: &ReducedBasis) -> Result<Self> {
        Basis::new(rb.elements().to_owned(), rb.quadrature().clone())
    }

    pub fn n_basis(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> ArrayView2<'_, Complex64> {
        self.elements.view()
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quadrature
    }

    fn coefficients(&self, f: ArrayView1<'_, Complex64>) -> Result<Array1<Complex64>> {
        let n = self.n_basis();
        let mut coeffs = Array1::zeros(n);
        for i in 0..n {
            coeffs[i] = self.quadrature.dot(self.elements.row(i), f)?;
        }
        Ok(coeffs)
    }

    /// Orthogonal projection `Σ_i ⟨e_i, f⟩ e_i`.
    pub fn project(&self, f: ArrayView1<'_, Complex64>) -> Result<Array1<Complex64>> {
        let coeffs = self.coefficients(f)?;
        Ok(coeffs.dot(&self.elements))
    }

    /// Squared norm of the projection residual `f − P f`, computed by
    /// direct subtraction.
    pub fn projection_error(&self, f: ArrayView1<'_, Complex64>) -> Result<f64> {
        let projected = self.project(f)?;
        let residual: Array1<Complex64> =
            f.iter().zip(projected.iter()).map(|(a, b)| a - b).collect();
        let n = self.quadrature.norm(residual.view())?;
        Ok(n * n)
    }

    /// Empirical interpolation of `f` through the basis's nodes.
    pub fn interpolate(&self, f: ArrayView1<'_, Complex64>) -> Result<Array1<Complex64>> {
        self.eim().and_then(|op| op.interpolate(f))
    }

    /// The cached empirical interpolation operator.
    pub fn eim(&self) -> Result<&EimOperator> {
        match self
            .eim
            .get_or_init(|| EimOperator::from_basis(self.elements.view()))
        {
            Ok(op) => Ok(op),
            Err(e) => Err(e.clone()),
        }
    }
}
