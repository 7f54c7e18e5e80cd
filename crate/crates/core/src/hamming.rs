//! Subgraphs of the Hamming cube induced by unions of concentric spheres
//! `B(n, r1, r2) = S(n, r1) ∪ ... ∪ S(n, r2)`, the sphere-to-sphere incidence
//! matrices, and the dense brute-force spectral oracle.
//!
//! Vertices are ordered by Hamming weight, then by the numeric value of the
//! bitmask, so each sphere occupies a contiguous index range.

use std::collections::HashMap;
use std::io::{self, Write};
use std::ops::Range;

use crate::binom::{masks_of_weight, shell_size};
use crate::error::invalid;
use crate::linalg::{self, DenseMatrix};
use crate::{Error, Result};

/// Resource budgets for graph construction and dense eigensolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest vertex count for which a sparse graph is materialized.
    pub max_graph_vertices: u128,
    /// Largest vertex count accepted by the dense oracle.
    pub dense_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_graph_vertices: 1 << 22,
            dense_limit: 5000,
        }
    }
}

/// Per-vertex tolerance factor of the dense oracle: residuals and
/// eigenvalue errors stay below `ORACLE_TOL_PER_VERTEX * vertex_count`.
pub const ORACLE_TOL_PER_VERTEX: f64 = 1e-10;

pub(crate) fn check_radii(n: u32, r1: u32, r2: u32) -> Result<()> {
    if r1 > r2 || 2 * r2 > n {
        return Err(invalid(format!(
            "radii must satisfy 0 <= r1 <= r2 <= n/2, got n={n}, r1={r1}, r2={r2}"
        )));
    }
    Ok(())
}

/// The graph induced on `B(n, r1, r2)`.
#[derive(Debug, Clone)]
pub struct InducedGraph {
    n: u32,
    r1: u32,
    r2: u32,
    vertices: Vec<u64>,
    /// `sphere_start[i - r1]` is the first index of sphere `i`; one extra
    /// entry closes the last range.
    sphere_start: Vec<usize>,
    /// `choose[p][j] = C(p, j)` for colex ranking.
    choose: Vec<Vec<u64>>,
    adj_start: Vec<usize>,
    adj: Vec<u32>,
}

impl InducedGraph {
    pub fn build(n: u32, r1: u32, r2: u32, limits: &Limits) -> Result<Self> {
        if n > 64 {
            return Err(invalid(format!(
                "graph construction needs n <= 64, got {n}"
            )));
        }
        check_radii(n, r1, r2)?;
        let count = shell_size(n, r1, r2).unwrap_or(u128::MAX);
        if count > limits.max_graph_vertices {
            return Err(Error::BudgetExceeded {
                vertex_count: count,
                limit: limits.max_graph_vertices,
            });
        }

        let mut vertices = Vec::with_capacity(count as usize);
        let mut sphere_start = Vec::with_capacity((r2 - r1 + 2) as usize);
        for i in r1..=r2 {
            sphere_start.push(vertices.len());
            vertices.extend(masks_of_weight(n, i));
        }
        sphere_start.push(vertices.len());

        let mut choose = vec![vec![0u64; n as usize + 2]; n as usize + 1];
        for p in 0..=n as usize {
            choose[p][0] = 1;
            for j in 1..=p {
                choose[p][j] =
                    choose[p - 1][j - 1].saturating_add(if j < p { choose[p - 1][j] } else { 0 });
            }
        }

        let mut g = Self {
            n,
            r1,
            r2,
            vertices,
            sphere_start,
            choose,
            adj_start: Vec::new(),
            adj: Vec::new(),
        };

        let mut adj_start = Vec::with_capacity(g.vertices.len() + 1);
        let mut adj = Vec::new();
        for &x in &g.vertices {
            adj_start.push(adj.len());
            let w = x.count_ones();
            let first = adj.len();
            for b in 0..n {
                let y = x ^ (1u64 << b);
                let wy = if w > y.count_ones() { w - 1 } else { w + 1 };
                if (r1..=r2).contains(&wy) {
                    adj.push(g.rank(y).expect("neighbor inside the shell") as u32);
                }
            }
            adj[first..].sort_unstable();
        }
        adj_start.push(adj.len());
        g.adj_start = adj_start;
        g.adj = adj;
        Ok(g)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r1(&self) -> u32 {
        self.r1
    }

    pub fn r2(&self) -> u32 {
        self.r2
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Bitmask of the vertex at `index`.
    pub fn vertex(&self, index: usize) -> u64 {
        self.vertices[index]
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    /// Index of `mask`, if it lies in the shell.
    pub fn rank(&self, mask: u64) -> Option<usize> {
        if self.n < 64 && mask >> self.n != 0 {
            return None;
        }
        let w = mask.count_ones();
        if w < self.r1 || w > self.r2 {
            return None;
        }
        let mut r = 0u64;
        let mut m = mask;
        let mut j = 1;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            r += self.choose[p][j];
            j += 1;
            m &= m - 1;
        }
        Some(self.sphere_start[(w - self.r1) as usize] + r as usize)
    }

    /// Index range of sphere `S(n, i)`.
    pub fn sphere(&self, i: u32) -> Range<usize> {
        assert!((self.r1..=self.r2).contains(&i), "sphere {i} not in shell");
        let j = (i - self.r1) as usize;
        self.sphere_start[j]..self.sphere_start[j + 1]
    }

    pub fn neighbors(&self, index: usize) -> &[u32] {
        &self.adj[self.adj_start[index]..self.adj_start[index + 1]]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adj_start[index + 1] - self.adj_start[index]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// `A f`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.vertex_count());
        (0..self.vertex_count())
            .map(|u| self.neighbors(u).iter().map(|&v| f[v as usize]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.vertex_count();
        let mut a = DenseMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            a.set(u, v, 1.0);
            a.set(v, u, 1.0);
        }
        a
    }

    /// Writes one `u v` line per edge, 0-based indices, `u < v`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Full spectrum of the induced adjacency matrix from a dense eigensolve.
#[derive(Debug, Clone)]
pub struct OracleSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, when requested.
    pub eigenvectors: Option<DenseMatrix>,
    /// `max_j ||A v_j - λ_j v_j||_2`; only available with eigenvectors.
    pub residual_bound: Option<f64>,
    /// Documented accuracy of the solver for this size.
    pub tolerance: f64,
}

/// Brute-force eigendecomposition of the induced adjacency matrix.
pub fn oracle_spectrum(
    g: &InducedGraph,
    want_vectors: bool,
    limits: &Limits,
) -> Result<OracleSpectrum> {
    let count = g.vertex_count();
    if count > limits.dense_limit {
        return Err(Error::BudgetExceeded {
            vertex_count: count as u128,
            limit: limits.dense_limit as u128,
        });
    }
    let eig = linalg::symmetric_eigen(&g.to_dense(), want_vectors);
    let residual_bound = eig.vectors.as_ref().map(|v| {
        eig.values
            .iter()
            .enumerate()
            .map(|(j, lambda)| {
                let col = v.column(j);
                let av = g.apply(col);
                av.iter()
                    .zip(col)
                    .map(|(a, x)| (a - lambda * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    });
    Ok(OracleSpectrum {
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        residual_bound,
        tolerance: ORACLE_TOL_PER_VERTEX * count.max(1) as f64,
    })
}

/// Largest eigenvalue and its unit eigenvector by power iteration on
/// `A + n I`, which is positive semidefinite with a simple top eigenvalue
/// whenever the graph is connected.
pub fn perron_pair(g: &InducedGraph, tol: f64, max_iter: usize) -> (f64, Vec<f64>) {
    let count = g.vertex_count();
    let shift = g.n() as f64;
    // Positive, so it has a component along the Perron vector, and not
    // constant on spheres, so sphericity of the limit is not inherited.
    let mut x: Vec<f64> = (0..count)
        .map(|i| 1.0 + 0.5 * (i as f64 + 1.0).sin())
        .collect();
    let nrm = linalg::norm(&x);
    x.iter_mut().for_each(|v| *v /= nrm);
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let ax = g.apply(&x);
        lambda = linalg::dot(&x, &ax);
        let resid = ax
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if resid <= tol {
            break;
        }
        let mut y: Vec<f64> = ax.iter().zip(&x).map(|(a, b)| a + shift * b).collect();
        let nrm = linalg::norm(&y);
        y.iter_mut().for_each(|v| *v /= nrm);
        x = y;
    }
    (lambda, x)
}

/// `n - fᵀAf / fᵀf`: the normalized Dirichlet energy on the whole cube of
/// `f` extended by zero outside the shell. Minimized at the top
/// eigenvector, where it equals `n - λ_max`.
pub fn rayleigh_fractional_boundary(g: &InducedGraph, f: &[f64]) -> Result<f64> {
    if f.len() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            got: f.len(),
        });
    }
    let ff = linalg::dot(f, f);
    if ff == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let faf = linalg::dot(f, &g.apply(f));
    Ok(g.n() as f64 - faf / ff)
}

/// The fractional-boundary quotient
/// `2^{-(n+1)} Σ_{|x-y|=1} (f(x)-f(y))² / (2^{-n} Σ f²)` evaluated directly
/// from its definition for an arbitrary finitely supported `f` on
/// `{0,1}^n`, given as `(mask, value)` pairs.
pub fn dirichlet_quotient(n: u32, support: &[(u64, f64)]) -> Result<f64> {
    if n > 64 {
        return Err(invalid("dirichlet quotient needs n <= 64"));
    }
    let values: HashMap<u64, f64> = support.iter().copied().collect();
    let mass: f64 = values.values().map(|v| v * v).sum();
    if mass == 0.0 {
        return Err(Error::ZeroFunction);
    }
    // Sum over ordered adjacent pairs (x, y); pairs with exactly one end in
    // the support are reached once from each side only through x.
    let mut energy = 0.0;
    for (&x, &fx) in &values {
        for b in 0..n {
            let y = x ^ (1u64 << b);
            match values.get(&y) {
                Some(&fy) => energy += (fx - fy).powi(2),
                None => energy += 2.0 * fx * fx,
            }
        }
    }
    Ok(energy / 2.0 / mass)
}

/// The `C(n, r-1) × C(n, r)` containment matrix between spheres `r - 1`
/// and `r`.
#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    pub n: u32,
    pub r: u32,
    /// Row labels: sets of size `r - 1`, ascending.
    pub row_masks: Vec<u64>,
    /// Column labels: sets of size `r`, ascending.
    pub col_masks: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn rows(&self) -> usize {
        self.row_masks.len()
    }

    pub fn cols(&self) -> usize {
        self.col_masks.len()
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        let (y, x) = (self.row_masks[row], self.col_masks[col]);
        u8::from(y & x == y)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if self.get(i, j) == 1 {
                    m.set(i, j, 1.0);
                }
            }
        }
        m
    }

    /// Numeric rank from singular values above `rel_tol * σ_max`.
    pub fn numeric_rank(&self, rel_tol: f64) -> usize {
        let sv = linalg::singular_values(&self.to_dense());
        let top = sv.first().copied().unwrap_or(0.0);
        sv.iter().filter(|&&s| s > rel_tol * top).count()
    }
}

pub fn incidence_matrix(n: u32, r: u32, limits: &Limits) -> Result<IncidenceMatrix> {
    if n > 64 {
        return Err(invalid(format!("incidence matrix needs n <= 64, got {n}")));
    }
    if r < 1 || 2 * r > n {
        return Err(invalid(format!(
            "incidence matrix needs 1 <= r <= n/2, got n={n}, r={r}"
        )));
    }
    let count = shell_size(n, r - 1, r).unwrap_or(u128::MAX);
    if count > limits.max_graph_vertices {
        return Err(Error::BudgetExceeded {
            vertex_count: count,
            limit: limits.max_graph_vertices,
        });
    }
    Ok(IncidenceMatrix {
        n,
        r,
        row_masks: masks_of_weight(n, r - 1),
        col_masks: masks_of_weight(n, r),
    })
}
