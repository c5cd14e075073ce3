//! Empirical interpolation: node selection from a reduced basis and
//! assembly of the interpolant operator.
//!
//! The first node is the grid argmax of `|e_1|`. Each further node is
//! placed where the current interpolant reproduces the next basis
//! element worst: the argmax of the interpolation residual. Once all
//! nodes are placed, the node matrix `V` (basis elements evaluated at
//! the nodes) defines cardinal functions `B_i` with `B_i(X_j) = δ_ij`,
//! and `I[f](x) = Σ_i B_i(x) f(X_i)` interpolates any function from its
//! node values alone.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::lu_factor;
use crate::reduced_basis::ReducedBasis;

/// Residuals below this absolute threshold mean the remaining basis
/// elements are not numerically independent at any achievable node set.
const DEGENERATE_RESIDUAL_TOL: f64 = 1e-14;

/// Empirical nodes plus the matrices defining the interpolant.
/// Immutable after construction; interpolation is thread-safe.
#[derive(Debug, Clone)]
pub struct EimOperator {
    nodes: Vec<usize>,
    node_matrix: Array2<Complex64>,
    cardinal_matrix: Array2<Complex64>,
    condition_estimate: f64,
}

/// Builds the interpolant for a reduced basis. The basis is the only
/// input; no training data is consulted.
pub fn build_eim(rb: &ReducedBasis) -> Result<EimOperator> {
    EimOperator::from_basis(rb.elements())
}

impl EimOperator {
    /// Selects nodes and assembles the interpolant from the rows of an
    /// orthonormal basis matrix.
    pub fn from_basis(elements: ArrayView2<'_, Complex64>) -> Result<Self> {
        let n = elements.nrows();
        let l = elements.ncols();
        if n == 0 {
            return Err(Error::InvalidData("basis has no elements".into()));
        }

        let argmax_abs = |row: ArrayView1<'_, Complex64>| {
            let mut arg = 0usize;
            let mut best = f64::NEG_INFINITY;
            for (i, v) in row.iter().enumerate() {
                let a = v.norm();
                if a > best {
                    best = a;
                    arg = i;
                }
            }
            (arg, best)
        };

        let (first, first_abs) = argmax_abs(elements.row(0));
        if first_abs < DEGENERATE_RESIDUAL_TOL {
            return Err(Error::DegenerateBasis(
                "first basis element is numerically zero".into(),
            ));
        }
        let mut nodes = vec![first];

        for j in 1..n {
            // Interpolate e_j through the nodes found so far and place
            // the next node at the residual maximum.
            let mut v_sub = Array2::zeros((j, j));
            let mut rhs = Array1::zeros(j);
            for r in 0..j {
                for s in 0..j {
                    v_sub[[r, s]] = elements[[s, nodes[r]]];
                }
                rhs[r] = elements[[j, nodes[r]]];
            }
            let coeffs = lu_factor(v_sub.view())
                .map_err(|_| {
                    Error::DegenerateBasis(format!("node matrix became singular after {j} nodes"))
                })?
                .solve(rhs.view());

            let mut residual = elements.row(j).to_owned();
            for s in 0..j {
                let c = coeffs[s];
                for (r, e) in residual.iter_mut().zip(elements.row(s).iter()) {
                    *r -= c * e;
                }
            }
            let (arg, max_abs) = argmax_abs(residual.view());
            if max_abs < DEGENERATE_RESIDUAL_TOL {
                return Err(Error::DegenerateBasis(format!(
                    "interpolation residual vanished after {j} of {n} nodes"
                )));
            }
            nodes.push(arg);
        }

        let mut node_matrix = Array2::zeros((n, n));
        for r in 0..n {
            for s in 0..n {
                node_matrix[[r, s]] = elements[[s, nodes[r]]];
            }
        }

        // B_i(x) = Σ_j (V⁻¹)_{ji} e_j(x), assembled by solving Vᵀ B = E
        // with a pivoted LU factorization.
        let vt = node_matrix.t().to_owned();
        let lu = lu_factor(vt.view())
            .map_err(|_| Error::DegenerateBasis("node matrix is singular".into()))?;
        let cardinal_matrix = lu.solve_matrix(elements);
        let condition_estimate = lu.diag_ratio();
        log::debug!(
            "empirical interpolant: {n} nodes over {l} grid points, \
             node-matrix condition estimate {condition_estimate:.3e}"
        );

        Ok(EimOperator {
            nodes,
            node_matrix,
            cardinal_matrix,
            condition_estimate,
        })
    }

    /// Reassembles an operator from stored fields (e.g. a model file).
    pub fn from_parts(
        nodes: Vec<usize>,
        node_matrix: Array2<Complex64>,
        cardinal_matrix: Array2<Complex64>,
    ) -> Result<Self> {
        let n = nodes.len();
        if node_matrix.dim() != (n, n) {
            return Err(Error::InvalidData(
                "node matrix shape does not match the node count".into(),
            ));
        }
        if cardinal_matrix.nrows() != n {
            return Err(Error::InvalidData(
                "cardinal matrix row count does not match the node count".into(),
            ));
        }
        let l = cardinal_matrix.ncols();
        if nodes.iter().any(|&x| x >= l) {
            return Err(Error::InvalidData("node index outside the grid".into()));
        }
        let condition_estimate = lu_factor(node_matrix.t().to_owned().view())
            .map(|lu| lu.diag_ratio())
            .unwrap_or(f64::INFINITY);
        Ok(EimOperator {
            nodes,
            node_matrix,
            cardinal_matrix,
            condition_estimate,
        })
    }

    /// Applies the interpolant: `Σ_i B_i(·) f(X_i)`. Only the node
    /// values of `f` are read.
    pub fn interpolate(&self, f: ArrayView1<'_, Complex64>) -> Result<Array1<Complex64>> {
        if f.len() != self.grid_len() {
            return Err(Error::Dimension {
                expected: self.grid_len(),
                got: f.len(),
            });
        }
        let node_values: Array1<Complex64> = self.nodes.iter().map(|&x| f[x]).collect();
        Ok(node_values.dot(&self.cardinal_matrix))
    }

    pub fn basis_size(&self) -> usize {
        self.nodes.len()
    }

    pub fn grid_len(&self) -> usize {
        self.cardinal_matrix.ncols()
    }

    /// Selected grid indices, in selection order.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Basis elements evaluated at the nodes: entry `(i, j)` is
    /// `e_j(X_i)`.
    pub fn node_matrix(&self) -> ArrayView2<'_, Complex64> {
        self.node_matrix.view()
    }

    /// Cardinal functions sampled on the grid, one row per node.
    pub fn cardinal_matrix(&self) -> ArrayView2<'_, Complex64> {
        self.cardinal_matrix.view()
    }

    /// Rough condition estimate of the node matrix, for diagnostics.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// `max_x Σ_i |B_i(x)|` — the amplification factor bounding how much
    /// interpolation can inflate node-value errors.
    pub fn amplification_bound(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.cardinal_matrix.ncols() {
            let sum: f64 = self
                .cardinal_matrix
                .column(j)
                .iter()
                .map(|v| v.norm())
                .sum();
            best = best.max(sum);
        }
        best
    }
}
