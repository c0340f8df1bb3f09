//! Simple graphs and their combinatorial Laplacian.
//!
//! A [`SimpleGraph`] is an undirected graph without self-loops or repeated
//! edges. Edges are stored as a sorted list of `(i, j)` pairs with `i < j`,
//! so iteration order (and therefore Laplacian assembly) is deterministic.
//!
//! Images enter through [`grid_graph`]: pixel `(r, c)` becomes vertex
//! `r * cols + c` and is joined to its horizontal and vertical neighbours.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Shape of a pixel lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    rows: usize,
    cols: usize,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("grid", format!("{rows}x{cols} has an empty axis")));
        }
        // edge count 2*rows*cols is the largest quantity derived from the shape
        rows.checked_mul(cols)
            .and_then(|n| n.checked_mul(2))
            .ok_or(Error::SizeOverflow { rows, cols })?;
        Ok(Self { rows, cols })
    }

    pub fn square(side: usize) -> Result<Self> {
        Self::new(side, side)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of lattice points, `rows * cols`.
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major vertex index of pixel `(r, c)`.
    #[inline]
    pub fn index(&self, r: usize, c: usize) -> usize {
        r * self.cols + c
    }

    /// Number of 4-neighbour lattice adjacencies.
    pub fn edge_count(&self) -> usize {
        self.rows * (self.cols - 1) + self.cols * (self.rows - 1)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    /// Parses `"RxC"` or a single side length `"N"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param("grid", format!("cannot parse `{s}` as ROWSxCOLS"));
        match s.split_once(['x', 'X']) {
            Some((r, c)) => {
                let rows = r.trim().parse().map_err(|_| bad())?;
                let cols = c.trim().parse().map_err(|_| bad())?;
                GridSpec::new(rows, cols)
            }
            None => GridSpec::square(s.trim().parse().map_err(|_| bad())?),
        }
    }
}

/// Undirected graph on vertices `0..n` with no self-loops and no repeated edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Builds a graph from unordered vertex pairs.
    ///
    /// Pairs are normalized to `(min, max)`; a pair listed twice (in either
    /// orientation) is kept once. Self-loops and out-of-range indices are
    /// rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{a}, {b}}} references a vertex outside 0..{n}"
                )));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self { n, edges: list })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Vertices with no incident edge. Their Laplacian row is zero.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        self.degree_vector()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Non-fatal findings about the graph. Currently only isolated vertices.
    pub fn validation_warnings(&self) -> Vec<String> {
        let isolated = self.isolated_vertices();
        if isolated.is_empty() {
            Vec::new()
        } else {
            vec![format!(
                "{} isolated vertex(es) with degree 0 (first: {})",
                isolated.len(),
                isolated[0]
            )]
        }
    }

    /// Symmetric 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency_matrix(&self) -> DenseMatrix {
        let mut a = DenseMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        a
    }

    /// Number of neighbours of each vertex.
    pub fn degree_vector(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// Combinatorial Laplacian `D - A`.
    pub fn laplacian(&self) -> LaplacianMatrix {
        LaplacianMatrix::from_graph(self)
    }

    /// Plain-text edge list: a header line `n m`, then one `i j` line per
    /// edge with `i < j`, LF line endings.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::with_capacity(16 + 12 * self.edges.len());
        let _ = writeln!(s, "{} {}", self.n, self.edges.len());
        for &(i, j) in &self.edges {
            let _ = writeln!(s, "{i} {j}");
        }
        s
    }

    /// Parses the format written by [`SimpleGraph::to_edge_list`].
    ///
    /// Blank lines are ignored. The edge count in the header must match the
    /// number of edge lines.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let parse_pair = |lineno: usize, line: &str| -> Result<(usize, usize)> {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
                _ => Err(Error::InvalidGraph(format!(
                    "line {}: expected two non-negative integers, got `{line}`",
                    lineno + 1
                ))),
            }
        };
        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::InvalidGraph("empty edge list".into()))?;
        let (n, m) = parse_pair(lineno, header)?;
        let edges = lines
            .map(|(no, l)| parse_pair(no, l))
            .collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(Error::InvalidGraph(format!(
                "header announces {m} edges but {} were listed",
                edges.len()
            )));
        }
        let g = Self::new(n, edges)?;
        if g.edge_count() != m {
            return Err(Error::InvalidGraph("edge list contains duplicate edges".into()));
        }
        Ok(g)
    }
}

/// The 4-neighbour lattice graph of a `rows x cols` image, row-major.
pub fn grid_graph(spec: GridSpec) -> SimpleGraph {
    let (rows, cols) = (spec.rows, spec.cols);
    let mut edges = Vec::with_capacity(spec.edge_count());
    for r in 0..rows {
        for c in 0..cols {
            let v = spec.index(r, c);
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    // already sorted and unique by construction
    debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
    SimpleGraph {
        n: spec.len(),
        edges,
    }
}

/// Graph Laplacian `L = D - A` in compressed sparse row form.
///
/// Off-diagonal entries are `-1` on edges, the diagonal holds degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplacianMatrix {
    degree: Vec<usize>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl LaplacianMatrix {
    fn from_graph(g: &SimpleGraph) -> Self {
        let degree = g.degree_vector();
        let mut offsets = Vec::with_capacity(g.n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0; offsets[g.n]];
        for &(i, j) in &g.edges {
            neighbors[fill[i]] = j;
            fill[i] += 1;
            neighbors[fill[j]] = i;
            fill[j] += 1;
        }
        // rows must be sorted for the binary search in `get`
        for v in 0..g.n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Self {
            degree,
            offsets,
            neighbors,
        }
    }

    pub fn dim(&self) -> usize {
        self.degree.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degree[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Sum of the diagonal, which equals twice the edge count.
    pub fn trace(&self) -> usize {
        self.degree.iter().sum()
    }

    /// Gershgorin upper bound on the largest eigenvalue: `2 * max_degree`.
    pub fn gershgorin_bound(&self) -> f64 {
        2.0 * self.max_degree() as f64
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.degree[i] as f64
        } else if self.neighbors(i).binary_search(&j).is_ok() {
            -1.0
        } else {
            0.0
        }
    }

    /// `out = L x`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.dim();
        if x.len() != n || out.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if x.len() != n { x.len() } else { out.len() },
            });
        }
        for (i, o) in out.iter_mut().enumerate() {
            let s: f64 = self.neighbors(i).iter().map(|&j| x[j]).sum();
            *o = self.degree[i] as f64 * x[i] - s;
        }
        Ok(())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.apply(x, &mut out)?;
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.degree[i] as f64;
            for &j in self.neighbors(i) {
                m[(i, j)] = -1.0;
            }
        }
        m
    }
}
