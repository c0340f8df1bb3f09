//! Oracles shared by the integration tests. None of these go through the
//! crate's own spectral code.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use heatgraph::graph::SimpleGraph;
use heatgraph::image::{read_pgm, write_pgm, PgmError, PgmMode};
use heatgraph::spectral::EigenBasis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn pgm_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/pgm")
}

/// G(n, p) with `n` in `[2, max_n]` and `p` in `[0.05, 0.5]`.
pub fn erdos_renyi(seed: u64, max_n: usize) -> SimpleGraph {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n);
    let p: f64 = rng.random_range(0.05..=0.5);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    SimpleGraph::new(n, edges).unwrap()
}

/// Eigenvalues by nalgebra's symmetric solver, ascending.
pub fn nalgebra_eigenvalues(graph: &SimpleGraph) -> Vec<f64> {
    let dense = graph.laplacian().to_dense();
    let n = dense.rows();
    let m = nalgebra::DMatrix::from_row_slice(n, n, dense.as_slice());
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `4 sin^2(a pi / 2m) + 4 sin^2(b pi / 2n)` for every mode pair, sorted.
pub fn grid_eigenvalues_by_formula(rows: usize, cols: usize) -> Vec<f64> {
    let mu = |k: usize, m: usize| 4.0 * (k as f64 * PI / (2.0 * m as f64)).sin().powi(2);
    let mut v: Vec<f64> = (0..rows)
        .flat_map(|a| (0..cols).map(move |b| mu(a, rows) + mu(b, cols)))
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Brute-force size of the admissible set on a grid.
pub fn admissible_by_enumeration(rows: usize, cols: usize, m_eps: f64) -> usize {
    grid_eigenvalues_by_formula(rows, cols).iter().filter(|&&l| l <= m_eps).count()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Orthogonal projectors onto the eigenspaces of `basis`, eigenvalues closer
/// than `gap` counted as one eigenspace. Returns `(cluster start, projector)`.
pub fn eigenspace_projectors(basis: &EigenBasis, gap: f64) -> Vec<(usize, Vec<f64>)> {
    let n = basis.dim();
    let values = basis.eigenvalues();
    let vecs: Vec<Vec<f64>> = (0..n).map(|k| basis.eigenvector(k)).collect();
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] < gap {
            end += 1;
        }
        let mut p = vec![0.0; n * n];
        for v in &vecs[start..end] {
            for i in 0..n {
                for j in 0..n {
                    p[i * n + j] += v[i] * v[j];
                }
            }
        }
        out.push((start, p));
        start = end;
    }
    out
}

fn variant_name(e: &PgmError) -> &'static str {
    match e {
        PgmError::BadMagic => "BadMagic",
        PgmError::Unsupported(_) => "Unsupported",
        PgmError::Header(_) => "Header",
        PgmError::ZeroDimension { .. } => "ZeroDimension",
        PgmError::MaxvalTooLarge(_) => "MaxvalTooLarge",
        PgmError::Truncated { .. } => "Truncated",
        PgmError::BadSample(_) => "BadSample",
        PgmError::SampleOutOfRange { .. } => "SampleOutOfRange",
    }
}

/// Checks every file of the conformance corpus against its manifest entry.
/// Returns the number of files checked, or the first mismatch.
pub fn check_pgm_corpus() -> Result<usize, String> {
    let dir = pgm_corpus_dir();
    let manifest = std::fs::read_to_string(dir.join("manifest.txt")).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for line in manifest.lines().filter(|l| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bytes = std::fs::read(dir.join(fields[0])).map_err(|e| format!("{}: {e}", fields[0]))?;
        let parsed = read_pgm(&bytes);
        match (fields[1], parsed) {
            ("ok", Ok(img)) => {
                let (rows, cols): (usize, usize) = (fields[2].parse().unwrap(), fields[3].parse().unwrap());
                if (img.rows(), img.cols()) != (rows, cols) {
                    return Err(format!("{}: shape {}x{}", fields[0], img.rows(), img.cols()));
                }
                let expected = std::fs::read(dir.join(format!("{}.expected", fields[0]))).map_err(|e| e.to_string())?;
                if write_pgm(&img, PgmMode::Binary) != expected {
                    return Err(format!("{}: canonical encoding differs", fields[0]));
                }
                let canon = read_pgm(&expected).map_err(|e| e.to_string())?;
                for mode in [PgmMode::Ascii, PgmMode::Binary] {
                    let again = read_pgm(&write_pgm(&canon, mode)).map_err(|e| e.to_string())?;
                    if again != canon {
                        return Err(format!("{}: {mode:?} round trip differs", fields[0]));
                    }
                }
            }
            ("err", Err(e)) if variant_name(&e) == fields[2] => {}
            (want, got) => return Err(format!("{}: expected {want} {:?}, got {got:?}", fields[0], fields.get(2))),
        }
        checked += 1;
    }
    Ok(checked)
}
