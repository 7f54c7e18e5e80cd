//! Dense linear algebra used by the verification oracle: a symmetric
//! eigensolver (Householder tridiagonalization followed by implicitly
//! shifted QL, after the EISPACK `tred2`/`tql2` pair) and Gram-Schmidt
//! projections for span and rank checks.

/// Dense real matrix stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other.get(k, j);
                if b == 0.0 {
                    continue;
                }
                let col = self.column(k);
                let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
                for (d, a) in dst.iter_mut().zip(col) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0; self.rows];
        for (j, xj) in x.iter().enumerate() {
            for (yi, a) in y.iter_mut().zip(self.column(j)) {
                *yi += a * xj;
            }
        }
        y
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `j` is the unit eigenvector of `values[j]`.
    pub vectors: Option<DenseMatrix>,
}

/// Eigenvalues (and optionally an orthonormal eigenbasis) of a symmetric
/// matrix. Only the lower triangle is read.
pub fn symmetric_eigen(a: &DenseMatrix, want_vectors: bool) -> SymmetricEigen {
    assert_eq!(a.rows, a.cols, "matrix must be square");
    let n = a.rows;
    if n == 0 {
        return SymmetricEigen {
            values: Vec::new(),
            vectors: want_vectors.then(|| DenseMatrix::zeros(0, 0)),
        };
    }
    let mut v = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e, want_vectors);
    tql2(&mut d, &mut e, want_vectors.then_some(&mut v));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors.then(|| {
        let mut sorted = DenseMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            sorted.data[dst * n..(dst + 1) * n].copy_from_slice(v.column(src));
        }
        sorted
    });
    SymmetricEigen { values, vectors }
}

/// Householder reduction to tridiagonal form. On return `d` holds the
/// diagonal, `e[1..]` the sub-diagonal, and `v` the accumulated orthogonal
/// transformation when `accumulate` is set.
fn tred2(v: &mut DenseMatrix, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let n = v.rows;
    // Index helper: element (row, col) of the column-major matrix.
    let at = |r: usize, c: usize| c * n + r;
    let data = &mut v.data;

    for j in 0..n {
        d[j] = data[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = data[at(i - 1, j)];
                data[at(i, j)] = 0.0;
                data[at(j, i)] = 0.0;
            }
        } else {
            for x in &mut d[..i] {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                data[at(j, i)] = f;
                g = e[j] + data[at(j, j)] * f;
                let col = j * n;
                for k in (j + 1)..i {
                    let vkj = data[col + k];
                    g += vkj * d[k];
                    e[k] += vkj * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = j * n;
                for k in j..i {
                    data[col + k] -= f * e[k] + g * d[k];
                }
                d[j] = data[at(i - 1, j)];
                data[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    if accumulate {
        for i in 0..n - 1 {
            data[at(n - 1, i)] = data[at(i, i)];
            data[at(i, i)] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = data[at(k, i + 1)] / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += data[at(k, i + 1)] * data[at(k, j)];
                    }
                    for k in 0..=i {
                        data[at(k, j)] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                data[at(k, i + 1)] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = data[at(n - 1, j)];
            data[at(n - 1, j)] = 0.0;
        }
        data[at(n - 1, n - 1)] = 1.0;
    } else {
        for j in 0..n {
            d[j] = data[at(j, j)];
        }
    }
    e[0] = 0.0;
}

/// Implicit QL iterations on the tridiagonal `(d, e)`; rotations are
/// applied to `v` when given.
fn tql2(d: &mut [f64], e: &mut [f64], mut v: Option<&mut DenseMatrix>) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = v.as_deref_mut() {
                        let rows = v.rows;
                        let (left, right) = v.data.split_at_mut((i + 1) * rows);
                        let col_i = &mut left[i * rows..];
                        let col_i1 = &mut right[..rows];
                        for (a, b) in col_i.iter_mut().zip(col_i1.iter_mut()) {
                            let hk = *b;
                            *b = s * *a + c * hk;
                            *a = c * *a - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

/// Singular values of a rectangular matrix, descending, via the
/// eigenvalues of the smaller Gram matrix.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let gram = if m.rows <= m.cols {
        m.matmul(&m.transpose())
    } else {
        m.transpose().matmul(m)
    };
    let mut sv: Vec<f64> = symmetric_eigen(&gram, false)
        .values
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    sv.reverse();
    sv
}

/// Orthonormal basis of the span of `columns`, via Gram-Schmidt with one
/// reorthogonalization pass. A column is dropped when its remainder after
/// projection is at most `rel_tol` times its original norm.
pub fn orthonormal_basis(columns: &[Vec<f64>], rel_tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for col in columns {
        let norm0 = norm(col);
        if norm0 == 0.0 {
            continue;
        }
        let mut w = col.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let nw = norm(&w);
        if nw > rel_tol * norm0 {
            w.iter_mut().for_each(|x| *x /= nw);
            basis.push(w);
        }
    }
    basis
}

/// Numeric rank of a set of vectors, at relative tolerance `rel_tol`.
pub fn numeric_rank(columns: &[Vec<f64>], rel_tol: f64) -> usize {
    orthonormal_basis(columns, rel_tol).len()
}

/// Euclidean distance from `f` to the span of an orthonormal `basis`.
pub fn projection_residual(basis: &[Vec<f64>], f: &[f64]) -> f64 {
    let mut w = f.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, &w);
            w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
        }
    }
    norm(&w)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_matrix(n: usize, seed: u64) -> DenseMatrix {
        let mut state = seed;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x = next();
                m.set(i, j, x);
                m.set(j, i, x);
            }
        }
        m
    }

    #[test]
    fn reconstructs_random_symmetric_matrices() {
        for (n, seed) in [(1, 1), (2, 2), (5, 3), (17, 4), (40, 5)] {
            let a = lcg_matrix(n, seed);
            let eig = symmetric_eigen(&a, true);
            let v = eig.vectors.as_ref().unwrap();
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            let vtv = v.transpose().matmul(v);
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((vtv.get(i, j) - want).abs() < 1e-12);
                }
            }
            for (j, lambda) in eig.values.iter().enumerate() {
                let av = a.matvec(v.column(j));
                let r = av
                    .iter()
                    .zip(v.column(j))
                    .map(|(x, y)| (x - lambda * y).abs())
                    .fold(0.0, f64::max);
                assert!(r < 1e-12 * n as f64, "residual {r}");
            }
            let values_only = symmetric_eigen(&a, false).values;
            for (x, y) in values_only.iter().zip(&eig.values) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_and_frobenius_are_preserved() {
        let a = lcg_matrix(30, 9);
        let vals = symmetric_eigen(&a, false).values;
        let trace: f64 = (0..30).map(|i| a.get(i, i)).sum();
        let fro: f64 = (0..30)
            .flat_map(|i| (0..30).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).powi(2))
            .sum();
        assert!((vals.iter().sum::<f64>() - trace).abs() < 1e-11);
        assert!((vals.iter().map(|x| x * x).sum::<f64>() - fro).abs() < 1e-10);
    }

    #[test]
    fn star_graph() {
        let mut a = DenseMatrix::zeros(5, 5);
        for j in 1..5 {
            a.set(0, j, 1.0);
            a.set(j, 0, 1.0);
        }
        let vals = symmetric_eigen(&a, false).values;
        let want = [-2.0, 0.0, 0.0, 0.0, 2.0];
        for (g, w) in vals.iter().zip(want) {
            assert!((g - w).abs() < 1e-14);
        }
    }

    #[test]
    fn rank_and_projection() {
        let cols = vec![
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 2.0],
        ];
        assert_eq!(numeric_rank(&cols, 1e-10), 2);
        let basis = orthonormal_basis(&cols, 1e-10);
        assert!(projection_residual(&basis, &[2.0, 3.0, 5.0]) < 1e-14);
        assert!((projection_residual(&basis, &[1.0, 1.0, -1.0]) - 3f64.sqrt()).abs() < 1e-14);
        let m = DenseMatrix::from_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 4.0, 0.0]]);
        let sv = singular_values(&m);
        assert!((sv[0] - 4.0).abs() < 1e-14 && (sv[1] - 3.0).abs() < 1e-14);
    }
}
