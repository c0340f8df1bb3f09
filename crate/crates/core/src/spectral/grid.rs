//! Closed-form eigenbasis of the 4-neighbour grid Laplacian.
//!
//! The grid Laplacian is the Kronecker sum of two path Laplacians, so its
//! eigenpairs are products of per-axis cosine modes:
//!
//! ```text
//! mu_a     = 4 sin^2(a pi / (2 m))                     a = 0..m
//! v_a(r)   = c_a cos(a pi (r + 1/2) / m)               c_0 = sqrt(1/m), c_a = sqrt(2/m)
//! lambda   = mu_a (rows) + nu_b (cols),   phi = v_a (x) w_b
//! ```
//!
//! Analysis and synthesis are applied separably (one axis at a time), which
//! costs `O(n (rows + cols))` instead of `O(n^2)`. A spectral cut-off only
//! needs the leading `a` and `b` modes, so restricted transforms are cheaper
//! still.

use crate::graph::GridSpec;
use crate::matrix::DenseMatrix;

/// Eigenpairs of the path Laplacian on `m` vertices.
///
/// Returns `(values, modes)` where `modes[(r, a)] = v_a(r)`.
pub(crate) fn path_modes(m: usize) -> (Vec<f64>, DenseMatrix) {
    let mf = m as f64;
    let values = (0..m)
        .map(|a| {
            let s = (a as f64 * std::f64::consts::PI / (2.0 * mf)).sin();
            4.0 * s * s
        })
        .collect();
    let mut modes = DenseMatrix::zeros(m, m);
    for a in 0..m {
        let c = if a == 0 { (1.0 / mf).sqrt() } else { (2.0 / mf).sqrt() };
        for r in 0..m {
            modes[(r, a)] = c * (a as f64 * std::f64::consts::PI * (r as f64 + 0.5) / mf).cos();
        }
    }
    (values, modes)
}

#[derive(Debug, Clone)]
pub(crate) struct GridModes {
    pub spec: GridSpec,
    pub row_values: Vec<f64>,
    pub col_values: Vec<f64>,
    /// `[r, a]`
    row_modes: DenseMatrix,
    /// `[a, r]`
    row_modes_t: DenseMatrix,
    /// `[b, c]`
    col_modes_t: DenseMatrix,
    /// Sorted position -> `(a, b)`.
    pub order: Vec<(usize, usize)>,
}

impl GridModes {
    /// Builds the per-axis tables and the global ascending mode order.
    ///
    /// Returns the modes and the sorted eigenvalues.
    pub fn new(spec: GridSpec) -> (Self, Vec<f64>) {
        let (row_values, row_modes) = path_modes(spec.rows());
        let (col_values, col_modes) = path_modes(spec.cols());
        let mut order: Vec<(usize, usize)> = (0..spec.rows())
            .flat_map(|a| (0..spec.cols()).map(move |b| (a, b)))
            .collect();
        // stable sort: ties stay in lexicographic (a, b) order
        order.sort_by(|&(a1, b1), &(a2, b2)| {
            (row_values[a1] + col_values[b1]).total_cmp(&(row_values[a2] + col_values[b2]))
        });
        let eigenvalues = order
            .iter()
            .map(|&(a, b)| row_values[a] + col_values[b])
            .collect();
        let modes = Self {
            spec,
            row_modes_t: row_modes.transpose(),
            row_modes,
            col_modes_t: col_modes.transpose(),
            row_values,
            col_values,
            order,
        };
        (modes, eigenvalues)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        let (a, b) = self.order[k];
        let cols = self.spec.cols();
        let mut phi = vec![0.0; self.spec.len()];
        for r in 0..self.spec.rows() {
            let va = self.row_modes[(r, a)];
            for c in 0..cols {
                phi[r * cols + c] = va * self.col_modes_t[(b, c)];
            }
        }
        phi
    }

    /// Coefficient block `C[a, b] = <x, v_a (x) w_b>` for `a < na`, `b < nb`,
    /// stored row-major as `na x nb`.
    pub fn analyze_block(&self, x: &[f64], na: usize, nb: usize) -> Vec<f64> {
        let (rows, cols) = (self.spec.rows(), self.spec.cols());
        // Y = X W restricted to the first nb columns: rows x nb
        let mut y = vec![0.0; rows * nb];
        for r in 0..rows {
            let xr = &x[r * cols..(r + 1) * cols];
            for b in 0..nb {
                y[r * nb + b] = dot(xr, self.col_modes_t.row(b));
            }
        }
        // C = V^T Y restricted to the first na rows: na x nb
        let mut c = vec![0.0; na * nb];
        for a in 0..na {
            let ca = &mut c[a * nb..(a + 1) * nb];
            let vt = self.row_modes_t.row(a);
            for r in 0..rows {
                axpy(vt[r], &y[r * nb..(r + 1) * nb], ca);
            }
        }
        c
    }

    /// Inverse of [`GridModes::analyze_block`]: `X = V C W^T` using only the
    /// first `na x nb` modes.
    pub fn synthesize_block(&self, c: &[f64], na: usize, nb: usize) -> Vec<f64> {
        let (rows, cols) = (self.spec.rows(), self.spec.cols());
        // Z = C W^T: na x cols
        let mut z = vec![0.0; na * cols];
        for a in 0..na {
            let za = &mut z[a * cols..(a + 1) * cols];
            for b in 0..nb {
                axpy(c[a * nb + b], self.col_modes_t.row(b), za);
            }
        }
        // X = V Z: rows x cols
        let mut x = vec![0.0; rows * cols];
        for r in 0..rows {
            let xr = &mut x[r * cols..(r + 1) * cols];
            let vr = self.row_modes.row(r);
            for a in 0..na {
                axpy(vr[a], &z[a * cols..(a + 1) * cols], xr);
            }
        }
        x
    }

    /// Largest per-axis deviation from orthonormality, combined into the
    /// exact deviation of the product basis.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = |m: &DenseMatrix| m.matmul(&m.transpose());
        let gr = gram(&self.row_modes_t);
        let gc = gram(&self.col_modes_t);
        let mut worst = 0.0f64;
        for a1 in 0..gr.rows() {
            for a2 in 0..gr.rows() {
                let x = gr[(a1, a2)];
                for b1 in 0..gc.rows() {
                    for b2 in 0..gc.rows() {
                        let delta = if a1 == a2 && b1 == b2 { 1.0 } else { 0.0 };
                        worst = worst.max((x * gc[(b1, b2)] - delta).abs());
                    }
                }
            }
        }
        worst
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    if alpha == 0.0 {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
