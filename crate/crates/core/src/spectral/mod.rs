//! Eigendecomposition of graph Laplacians and the spectral transforms built
//! on it.
//!
//! Two routes produce an [`EigenBasis`]:
//!
//! * [`eigendecompose_dense`] works for any graph. It runs a Householder
//!   tridiagonalization followed by implicit-shift QL and costs `O(n^3)`,
//!   so it is capped at [`DEFAULT_DENSE_CAP`] vertices.
//! * [`eigendecompose_grid`] writes down the basis of a pixel lattice in
//!   closed form. It never materializes the `n x n` eigenvector matrix and
//!   applies transforms one axis at a time, which is what makes a
//!   `128 x 128` image tractable.
//!
//! Both expose the same operations: [`EigenBasis::analyze`],
//! [`EigenBasis::synthesize`] and the mode-wise multiplier
//! [`EigenBasis::filter`] that the diffusion solvers are written in terms of.

mod dense;
mod grid;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{GridSpec, LaplacianMatrix};
use crate::matrix::DenseMatrix;
use crate::signal::GraphSignal;

use grid::GridModes;

/// Largest graph accepted by the dense solver.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// QL iterations allowed per eigenvalue before giving up.
pub const DEFAULT_SWEEP_BUDGET: usize = 50;

/// Numerical tolerances for the eigenbasis invariants. Each is relative to
/// the quantity named in its field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Times `lambda_max`: allowed negativity of eigenvalues and size of the
    /// smallest one.
    pub eig: f64,
    /// Absolute, on every entry of `Phi^T Phi - I`.
    pub ortho: f64,
    /// Times the edge count, on `sum(lambda) - 2|E|`.
    pub sum: f64,
    /// Times `max |L_ij|`, on the reconstruction `sum lambda phi phi^T - L`.
    pub recon: f64,
    /// Times `||s||^2`, on Parseval's identity.
    pub parseval: f64,
    /// Times `||s||`, on analysis followed by synthesis.
    pub roundtrip: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig: 1e-9,
            ortho: 1e-8,
            sum: 1e-6,
            recon: 1e-8,
            parseval: 1e-8,
            roundtrip: 1e-10,
        }
    }
}

/// Which construction produced a basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSource {
    DenseSolve,
    GridAnalytic,
}

#[derive(Debug, Clone)]
enum Vectors {
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    Dense(DenseMatrix),
    Grid(GridModes),
}

/// Orthonormal Laplacian eigenvectors with ascending, non-negative
/// eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    eigenvalues: Vec<f64>,
    vectors: Vectors,
}

/// Coefficients of a signal in an [`EigenBasis`], in ascending eigenvalue
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients(Vec<f64>);

impl SpectralCoefficients {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    /// The `k`-th standard unit vector of length `n`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        Self(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }
}

/// Options for [`eigendecompose_dense_with`].
#[derive(Debug, Clone, Copy)]
pub struct DenseOptions {
    pub cap: usize,
    pub sweep_budget: usize,
    pub tolerances: Tolerances,
}

impl Default for DenseOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_DENSE_CAP,
            sweep_budget: DEFAULT_SWEEP_BUDGET,
            tolerances: Tolerances::default(),
        }
    }
}

/// Dense eigendecomposition with default options.
pub fn eigendecompose_dense(laplacian: &LaplacianMatrix) -> Result<EigenBasis> {
    eigendecompose_dense_with(laplacian, &DenseOptions::default())
}

/// Dense eigendecomposition of any graph Laplacian.
///
/// After the solve the cheap invariants are checked (non-negativity within
/// tolerance, a near-zero smallest eigenvalue, the trace identity) and
/// round-off negatives are clamped to zero.
pub fn eigendecompose_dense_with(laplacian: &LaplacianMatrix, opts: &DenseOptions) -> Result<EigenBasis> {
    let n = laplacian.dim();
    if n > opts.cap {
        return Err(Error::Capacity { n, cap: opts.cap });
    }
    let eig = dense::symmetric_eigen(&laplacian.to_dense(), opts.sweep_budget)?;
    let mut eigenvalues = eig.values;

    let tol = &opts.tolerances;
    let lambda_max = eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let tol_eig = tol.eig * lambda_max;
    if eigenvalues[0] < -tol_eig || eigenvalues[0] > tol_eig {
        return Err(Error::Invariant(format!(
            "smallest eigenvalue {} is not zero within {tol_eig:e}",
            eigenvalues[0]
        )));
    }
    let twice_edges = laplacian.trace() as f64;
    let sum: f64 = eigenvalues.iter().sum();
    let tol_sum = tol.sum * (twice_edges / 2.0).max(1.0);
    if (sum - twice_edges).abs() > tol_sum {
        return Err(Error::Invariant(format!(
            "eigenvalue sum {sum} differs from twice the edge count {twice_edges}"
        )));
    }
    for v in &mut eigenvalues {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(EigenBasis {
        eigenvalues,
        vectors: Vectors::Dense(eig.vectors),
    })
}

/// Closed-form eigenbasis of the `rows x cols` grid graph.
///
/// Modes with equal eigenvalues are ordered by their axis indices `(a, b)`.
pub fn eigendecompose_grid(spec: GridSpec) -> EigenBasis {
    let (modes, eigenvalues) = GridModes::new(spec);
    EigenBasis {
        eigenvalues,
        vectors: Vectors::Grid(modes),
    }
}

impl EigenBasis {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("basis is never empty")
    }

    pub fn source(&self) -> BasisSource {
        match self.vectors {
            Vectors::Dense(_) => BasisSource::DenseSolve,
            Vectors::Grid(_) => BasisSource::GridAnalytic,
        }
    }

    /// The grid shape for grid-analytic bases.
    pub fn grid(&self) -> Option<GridSpec> {
        match &self.vectors {
            Vectors::Grid(m) => Some(m.spec),
            Vectors::Dense(_) => None,
        }
    }

    /// Materializes eigenvector `k`.
    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        match &self.vectors {
            Vectors::Dense(v) => v.column(k),
            Vectors::Grid(m) => m.eigenvector(k),
        }
    }

    /// Number of eigenvalues `<= cutoff`.
    pub fn count_admissible(&self, cutoff: f64) -> usize {
        self.eigenvalues.partition_point(|&l| l <= cutoff)
    }

    /// `<signal, phi_k>` for every `k`.
    pub fn analyze(&self, signal: &GraphSignal) -> Result<SpectralCoefficients> {
        signal.check_len(self.dim())?;
        let x = signal.as_slice();
        let coeffs = match &self.vectors {
            Vectors::Dense(v) => dense_analyze(v, x, self.dim()),
            Vectors::Grid(m) => {
                let (rows, cols) = (m.spec.rows(), m.spec.cols());
                let block = m.analyze_block(x, rows, cols);
                m.order.iter().map(|&(a, b)| block[a * cols + b]).collect()
            }
        };
        Ok(SpectralCoefficients(coeffs))
    }

    /// `sum_k coeffs[k] phi_k`.
    pub fn synthesize(&self, coeffs: &SpectralCoefficients) -> Result<GraphSignal> {
        let n = self.dim();
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: coeffs.len(),
            });
        }
        if let Some(i) = coeffs.0.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let values = match &self.vectors {
            Vectors::Dense(v) => dense_synthesize(v, &coeffs.0, n),
            Vectors::Grid(m) => {
                let (rows, cols) = (m.spec.rows(), m.spec.cols());
                let mut block = vec![0.0; n];
                for (&(a, b), &c) in m.order.iter().zip(&coeffs.0) {
                    block[a * cols + b] = c;
                }
                m.synthesize_block(&block, rows, cols)
            }
        };
        GraphSignal::new(values)
    }

    /// Mode-wise multiplier
    ///
    /// ```text
    /// out = sum_{k : lambda_k <= cutoff} gain(lambda_k) <signal, phi_k> phi_k
    /// ```
    ///
    /// `cutoff = None` keeps every mode. The threshold is closed. Only the
    /// retained modes are ever touched, so the cost shrinks with the cut-off.
    /// Summation runs in a fixed order and the result is bit-reproducible.
    pub fn filter<F>(&self, signal: &GraphSignal, cutoff: Option<f64>, gain: F) -> Result<GraphSignal>
    where
        F: Fn(f64) -> f64,
    {
        let n = self.dim();
        signal.check_len(n)?;
        let x = signal.as_slice();
        let values = match &self.vectors {
            Vectors::Dense(v) => {
                let kept = cutoff.map_or(n, |m| self.count_admissible(m));
                let mut c = dense_analyze(v, x, kept);
                for (ck, &l) in c.iter_mut().zip(&self.eigenvalues) {
                    *ck *= gain(l);
                }
                dense_synthesize(v, &c, kept)
            }
            Vectors::Grid(m) => {
                let within = |l: f64| cutoff.is_none_or(|cut| l <= cut);
                // per-axis values are ascending and the other axis starts at 0,
                // so the admissible set sits inside this box
                let na = m.row_values.partition_point(|&l| within(l));
                let nb = m.col_values.partition_point(|&l| within(l));
                let mut c = m.analyze_block(x, na, nb);
                for a in 0..na {
                    for b in 0..nb {
                        let l = m.row_values[a] + m.col_values[b];
                        let ck = &mut c[a * nb + b];
                        *ck = if within(l) { *ck * gain(l) } else { 0.0 };
                    }
                }
                m.synthesize_block(&c, na, nb)
            }
        };
        GraphSignal::new(values)
    }

    /// Largest entry of `|Phi^T Phi - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        match &self.vectors {
            Vectors::Dense(v) => {
                let g = v.transpose().matmul(v);
                let mut worst = 0.0f64;
                for i in 0..g.rows() {
                    for j in 0..g.cols() {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((g[(i, j)] - delta).abs());
                    }
                }
                worst
            }
            Vectors::Grid(m) => m.orthonormality_defect(),
        }
    }

    /// Largest entry of `|sum_k lambda_k phi_k phi_k^T - L|`. Dense work, for
    /// small graphs only.
    pub fn reconstruction_defect(&self, laplacian: &LaplacianMatrix) -> Result<f64> {
        let n = self.dim();
        if laplacian.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: laplacian.dim(),
            });
        }
        let phis: Vec<Vec<f64>> = (0..n).map(|k| self.eigenvector(k)).collect();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| self.eigenvalues[k] * phis[k][i] * phis[k][j]).sum();
                worst = worst.max((s - laplacian.get(i, j)).abs());
            }
        }
        Ok(worst)
    }

    /// Checks every invariant of the basis against its graph's Laplacian.
    ///
    /// The reconstruction check is `O(n^3)`; it is skipped above `dense_cap`
    /// vertices.
    pub fn check_invariants(&self, laplacian: &LaplacianMatrix, tol: &Tolerances) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let lmax = self.lambda_max();
        if !self.eigenvalues.windows(2).all(|w| w[0] <= w[1]) {
            return fail("eigenvalues are not ascending".into());
        }
        if self.eigenvalues[0] < -tol.eig * lmax || self.eigenvalues[0] > tol.eig * lmax {
            return fail(format!("smallest eigenvalue {} is not zero", self.eigenvalues[0]));
        }
        let edges = laplacian.trace() as f64 / 2.0;
        let sum: f64 = self.eigenvalues.iter().sum();
        if (sum - 2.0 * edges).abs() > tol.sum * edges.max(1.0) {
            return fail(format!("eigenvalue sum {sum} != 2|E| = {}", 2.0 * edges));
        }
        let ortho = self.orthonormality_defect();
        if ortho > tol.ortho {
            return fail(format!("orthonormality defect {ortho:e}"));
        }
        if self.dim() <= DEFAULT_DENSE_CAP / 16 {
            let recon = self.reconstruction_defect(laplacian)?;
            let scale = laplacian.max_degree().max(1) as f64;
            if recon > tol.recon * scale {
                return fail(format!("reconstruction defect {recon:e}"));
            }
        }
        Ok(())
    }

    /// `index,eigenvalue` CSV with a header line.
    pub fn spectrum_csv(&self) -> String {
        let mut s = String::from("index,eigenvalue\n");
        for (k, l) in self.eigenvalues.iter().enumerate() {
            let _ = writeln!(s, "{k},{l:.17e}");
        }
        s
    }
}

fn dense_analyze(v: &DenseMatrix, x: &[f64], kept: usize) -> Vec<f64> {
    let mut c = vec![0.0; kept];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        for (ck, vik) in c.iter_mut().zip(&v.row(i)[..kept]) {
            *ck += xi * vik;
        }
    }
    c
}

fn dense_synthesize(v: &DenseMatrix, c: &[f64], kept: usize) -> Vec<f64> {
    (0..v.rows())
        .map(|i| v.row(i)[..kept].iter().zip(c).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{grid_graph, SimpleGraph};

    fn dense_values(g: &SimpleGraph) -> Vec<f64> {
        eigendecompose_dense(&g.laplacian()).unwrap().eigenvalues().to_vec()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn dense_examples() {
        assert_close(&dense_values(&SimpleGraph::path(2).unwrap()), &[0.0, 2.0], 1e-12);
        // det(xI - L_K3) = x (x - 3)^2
        assert_close(&dense_values(&SimpleGraph::complete(3).unwrap()), &[0.0, 3.0, 3.0], 1e-12);
        // 4-cycle: 2 - 2 cos(2 pi k / 4)
        let c4 = grid_graph(GridSpec::square(2).unwrap());
        let vals = dense_values(&c4);
        assert_close(&vals, &[0.0, 2.0, 2.0, 4.0], 1e-12);
        assert!((vals.iter().sum::<f64>() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn dense_cap_is_enforced() {
        let lap = grid_graph(GridSpec::square(3).unwrap()).laplacian();
        let opts = DenseOptions {
            cap: 8,
            ..Default::default()
        };
        assert!(matches!(
            eigendecompose_dense_with(&lap, &opts),
            Err(Error::Capacity { n: 9, cap: 8 })
        ));
    }

    #[test]
    fn dense_handles_empty_and_isolated_graphs() {
        let basis = eigendecompose_dense(&SimpleGraph::empty(3).unwrap().laplacian()).unwrap();
        assert_eq!(basis.eigenvalues(), &[0.0, 0.0, 0.0]);
        let g = SimpleGraph::new(4, [(0, 1)]).unwrap();
        let basis = eigendecompose_dense(&g.laplacian()).unwrap();
        assert_close(basis.eigenvalues(), &[0.0, 0.0, 0.0, 2.0], 1e-12);
        basis.check_invariants(&g.laplacian(), &Tolerances::default()).unwrap();
    }

    #[test]
    fn grid_examples() {
        let b12 = eigendecompose_grid(GridSpec::new(1, 2).unwrap());
        assert_close(b12.eigenvalues(), &[0.0, 2.0], 1e-15);

        let b128 = eigendecompose_grid(GridSpec::square(128).unwrap());
        let expected = 8.0 * (127.0 * std::f64::consts::PI / 256.0).sin().powi(2);
        assert!((b128.lambda_max() - expected).abs() < 1e-12);
        assert!((b128.lambda_max() - 7.998_795_274_784_817).abs() < 1e-12);
        assert!(b128.lambda_max() <= 8.0);
        assert_eq!(b128.source(), BasisSource::GridAnalytic);
    }

    #[test]
    fn grid_matches_dense_on_4x4() {
        let spec = GridSpec::square(4).unwrap();
        let lap = grid_graph(spec).laplacian();
        let dense = eigendecompose_dense(&lap).unwrap();
        let grid = eigendecompose_grid(spec);
        assert_close(dense.eigenvalues(), grid.eigenvalues(), 1e-10);
        grid.check_invariants(&lap, &Tolerances::default()).unwrap();
        dense.check_invariants(&lap, &Tolerances::default()).unwrap();
    }

    #[test]
    fn analyze_examples() {
        let basis = eigendecompose_grid(GridSpec::square(3).unwrap());
        let phi3 = GraphSignal::new(basis.eigenvector(3)).unwrap();
        let c = basis.analyze(&phi3).unwrap();
        for (k, &ck) in c.as_slice().iter().enumerate() {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((ck - want).abs() < 1e-8);
        }

        let zero = basis.analyze(&GraphSignal::zeros(9)).unwrap();
        assert!(zero.as_slice().iter().all(|&c| c == 0.0));

        let p2 = eigendecompose_dense(&SimpleGraph::path(2).unwrap().laplacian()).unwrap();
        let c = p2.analyze(&GraphSignal::constant(2, 1.0).unwrap()).unwrap();
        assert!((c.as_slice()[0].abs() - 2f64.sqrt()).abs() < 1e-12);
        assert!(c.as_slice()[1].abs() < 1e-12);
    }

    #[test]
    fn synthesize_examples() {
        let basis = eigendecompose_grid(GridSpec::new(3, 4).unwrap());
        let s = basis.synthesize(&SpectralCoefficients::unit(12, 5)).unwrap();
        assert_close(s.as_slice(), &basis.eigenvector(5), 1e-14);
        let z = basis.synthesize(&SpectralCoefficients::new(vec![0.0; 12])).unwrap();
        assert!(z.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dimension_errors() {
        let basis = eigendecompose_grid(GridSpec::square(2).unwrap());
        assert!(basis.analyze(&GraphSignal::zeros(3)).is_err());
        assert!(basis.synthesize(&SpectralCoefficients::new(vec![0.0; 5])).is_err());
        assert!(basis.filter(&GraphSignal::zeros(5), None, |_| 1.0).is_err());
    }

    #[test]
    fn count_admissible_examples() {
        let p2 = eigendecompose_dense(&SimpleGraph::path(2).unwrap().laplacian()).unwrap();
        assert_eq!(p2.count_admissible(-1.0), 0);
        assert_eq!(p2.count_admissible(1.0), 1);
        assert_eq!(p2.count_admissible(p2.lambda_max()), 2);
    }

    #[test]
    fn spectrum_csv_layout() {
        let p2 = eigendecompose_grid(GridSpec::new(1, 2).unwrap());
        let csv = p2.spectrum_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "index,eigenvalue");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("1,"));
    }
}
