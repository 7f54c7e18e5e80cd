//! Symmetric tridiagonal matrices: Sturm-count bisection for individual
//! eigenvalues and inverse iteration for eigenvectors.

/// An eigenvalue enclosed by Sturm bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub value: f64,
    /// Absolute half-width of the enclosing interval, plus the rounding
    /// allowance of the Sturm recurrence.
    pub radius: f64,
}

/// Real symmetric tridiagonal matrix given by its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
    off_sq: Vec<f64>,
}

impl SymTridiag {
    /// `off.len()` must be `diag.len() - 1` (or zero for an empty matrix).
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            off.len() + 1 == diag.len() || (diag.is_empty() && off.is_empty()),
            "off-diagonal length must be one less than the diagonal"
        );
        let off_sq = off.iter().map(|e| e * e).collect();
        Self { diag, off, off_sq }
    }

    /// Builds from squared off-diagonal entries, which are usually known
    /// exactly.
    pub fn from_squared(diag: Vec<f64>, off_sq: Vec<f64>) -> Self {
        assert!(off_sq.len() + 1 == diag.len() || (diag.is_empty() && off_sq.is_empty()));
        let off = off_sq.iter().map(|v| v.sqrt()).collect();
        Self { diag, off, off_sq }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x` (negative pivots of the
    /// LDLᵀ factorization of `T - xI`).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.dim();
        if n == 0 {
            return 0;
        }
        let pivmin = f64::MIN_POSITIVE * self.norm_bound().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..n {
            if i > 0 {
                q = (self.diag[i] - x) - self.off_sq[i - 1] / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to interval width
    /// at most `tol` or to floating-point resolution.
    pub fn eigenvalue(&self, k: usize, tol: f64) -> Bracket {
        let n = self.dim();
        assert!(k < n, "eigenvalue index out of range");
        let (glo, ghi) = self.gershgorin();
        let slack = 2.0 * f64::EPSILON * self.norm_bound() * n as f64 + f64::MIN_POSITIVE;
        let mut lo = glo - slack;
        let mut hi = ghi + slack;
        // count_below(lo) <= k < count_below(hi)
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Bracket {
            value: 0.5 * (lo + hi),
            radius: 0.5 * (hi - lo) + slack,
        }
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self, tol: f64) -> Vec<Bracket> {
        (0..self.dim()).map(|k| self.eigenvalue(k, tol)).collect()
    }

    /// Eigenvector for a (simple) eigenvalue `lambda` by inverse iteration,
    /// normalized to unit Euclidean length.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        if n == 1 {
            return vec![1.0];
        }
        // Shift slightly off the eigenvalue so the factorization stays
        // nonsingular; the solve then amplifies the wanted direction.
        let shift = lambda + 4.0 * f64::EPSILON * self.norm_bound();
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * (i as f64 + 1.0).sin()).collect();
        normalize(&mut x);
        for _ in 0..3 {
            x = self.solve_shifted(shift, &x);
            normalize(&mut x);
        }
        x
    }

    /// Solve `(T - shift I) y = b` by Gaussian elimination with partial
    /// pivoting; zero pivots are replaced by a tiny perturbation.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let tiny = f64::EPSILON * self.norm_bound();
        // Row i of U holds u0 (diag), u1 (first super), u2 (second super).
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        let mut cur_d = self.diag[0] - shift;
        let mut cur_e = if n > 1 { self.off[0] } else { 0.0 };
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if cur_d == 0.0 { tiny } else { cur_d };
                break;
            }
            let sub = self.off[i];
            let next_d = self.diag[i + 1] - shift;
            let next_e = if i + 2 < n { self.off[i + 1] } else { 0.0 };
            if cur_d.abs() >= sub.abs() {
                let piv = if cur_d == 0.0 { tiny } else { cur_d };
                let m = sub / piv;
                u0[i] = piv;
                u1[i] = cur_e;
                u2[i] = 0.0;
                rhs[i + 1] -= m * rhs[i];
                cur_d = next_d - m * cur_e;
                cur_e = next_e;
            } else {
                // Swap rows i and i+1.
                let m = cur_d / sub;
                u0[i] = sub;
                u1[i] = next_d;
                u2[i] = next_e;
                rhs.swap(i, i + 1);
                rhs[i + 1] -= m * rhs[i];
                let new_d = cur_e - m * next_d;
                let new_e = -m * next_e;
                cur_d = new_d;
                cur_e = new_e;
            }
        }
        let mut y = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= u1[i] * y[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * y[i + 2];
            }
            y[i] = s / u0[i];
        }
        y
    }

    /// `T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}
