//! Closed-form spectrum of `A(n, r1, r2)`.
//!
//! For each `t = 0..=r2` the zero-diagonal Jacobi matrix `M_t` of size
//! `r2 - t* + 1` (`t* = max(t, r1)`) with squared off-diagonals
//! `λ_k = (k-1)(n-2t-k+2)`, `k = t*-t+2 ..= r2-t+1`, contributes its simple
//! eigenvalues `Λ_t`, each with multiplicity `C(n,t) - C(n,t-1)`. Values shared
//! by several `t` are merged into a single line whose multiplicity is the sum.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::binom::{binomial_int, eigenspace_dim, shell_size};
use crate::hamming::{check_radii, oracle_spectrum, InducedGraph, Limits};
use crate::krawtchouk::{self, KrawtchoukPoly, RootList, RootSource};
use crate::tridiag::SymTridiag;
use crate::{Error, Result};

/// Absolute tolerance of the Krawtchouk root route.
pub const EIG_TOL: f64 = 1e-12;

/// `M_t` eigenvalues are bisected to floating-point resolution.
pub const M_T_TOL: f64 = 0.0;

/// Cross-`t` merge threshold per unit of `n + 1`.
pub const MERGE_EPS_SCALE: f64 = 1e-9;

/// Default pass tolerance of [`verify_against_oracle`].
pub const VERIFY_TOL: f64 = 1e-8;

/// The matrix `M_t = M_{n,r1,r2,t}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TridiagonalSym {
    n: u32,
    r1: u32,
    r2: u32,
    t: u32,
    /// Exact squared off-diagonal entries, top to bottom.
    lambda: Vec<u64>,
}

impl TridiagonalSym {
    pub fn new(n: u32, r1: u32, r2: u32, t: u32) -> Result<Self> {
        check_radii(n, r1, r2)?;
        if t > r2 {
            return Err(Error::InvalidParameters(format!(
                "t = {t} exceeds r2 = {r2}"
            )));
        }
        let t_star = t.max(r1);
        let (n64, t64) = (n as u64, t as u64);
        let lambda = ((t_star - t + 2) as u64..=(r2 - t + 1) as u64)
            .map(|k| (k - 1) * (n64 - 2 * t64 + 2 - k))
            .collect();
        Ok(Self {
            n,
            r1,
            r2,
            t,
            lambda,
        })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `max(t, r1)`: the lowest sphere carrying the eigenfunctions.
    pub fn t_star(&self) -> u32 {
        self.t.max(self.r1)
    }

    pub fn dim(&self) -> usize {
        (self.r2 - self.t_star() + 1) as usize
    }

    /// `λ_k` for `k = t*-t+2 ..= r2-t+1`.
    pub fn offdiag_squared(&self) -> &[u64] {
        &self.lambda
    }

    pub fn offdiag(&self) -> Vec<f64> {
        self.lambda.iter().map(|&l| (l as f64).sqrt()).collect()
    }

    pub fn to_tridiag(&self) -> SymTridiag {
        SymTridiag::from_squared(
            vec![0.0; self.dim()],
            self.lambda.iter().map(|&l| l as f64).collect(),
        )
    }

    /// `Λ_t`, ascending. The spectrum of a zero-diagonal Jacobi matrix is
    /// symmetric about 0, so values are paired and the middle eigenvalue of
    /// an odd-sized matrix is set to exactly 0.
    pub fn eigenvalues(&self, tol: f64) -> RootList {
        let brackets = self.to_tridiag().eigenvalues(tol);
        let d = brackets.len();
        let mut values: Vec<f64> = brackets.iter().map(|b| b.value).collect();
        let mut radius: Vec<f64> = brackets.iter().map(|b| b.radius).collect();
        for i in 0..d / 2 {
            let j = d - 1 - i;
            let v = 0.5 * (values[j] - values[i]);
            let r = radius[i].max(radius[j]);
            values[i] = -v;
            values[j] = v;
            radius[i] = r;
            radius[j] = r;
        }
        if d % 2 == 1 {
            values[d / 2] = 0.0;
            radius[d / 2] = 0.0;
        }
        RootList {
            values,
            radius,
            source: RootSource::TridiagonalEigensolve,
        }
    }
}

/// `Λ_t` for the ball `B(n, r)` as `2·R(n-2t, r-t+1) - (n-2t)`, from the roots
/// of a Krawtchouk polynomial. `n - 2t = 0` gives `{0}`.
pub fn krawtchouk_lambda_set(n: u32, r: u32, t: u32) -> Result<RootList> {
    check_radii(n, 0, r)?;
    if t > r {
        return Err(Error::InvalidParameters(format!("t = {t} exceeds r = {r}")));
    }
    let big_n = (n - 2 * t) as u64;
    let k = (r - t + 1) as u64;
    if big_n == 0 {
        return Ok(RootList {
            values: vec![0.0],
            radius: vec![0.0],
            source: RootSource::PolynomialBisection,
        });
    }
    let roots = if big_n <= krawtchouk::EXACT_MAX_DIM as u64 {
        KrawtchoukPoly::build(big_n as i64, k as i64)?.roots(EIG_TOL)?
    } else {
        krawtchouk::jacobi_roots(big_n, k, EIG_TOL)?
    };
    Ok(roots.affine(2.0, -(big_n as f64)))
}

/// `Λ_t` from the `M_t` eigensolve. For balls (`r1 = 0`) the Krawtchouk
/// route is evaluated as well and the two must agree within their combined
/// radii.
pub fn lambda_set(n: u32, r1: u32, r2: u32, t: u32) -> Result<RootList> {
    let m = TridiagonalSym::new(n, r1, r2, t)?;
    let values = m.eigenvalues(M_T_TOL);
    if r1 == 0 && n - 2 * t <= krawtchouk::EXACT_MAX_DIM {
        let other = krawtchouk_lambda_set(n, r2, t)?;
        let dev = max_path_deviation(&values, &other);
        if dev > 0.0 {
            return Err(Error::Internal(format!(
                "Λ_{t} of B({n},{r2}): tridiagonal and Krawtchouk routes differ by {dev:e} beyond their radii"
            )));
        }
    }
    Ok(values)
}

/// Largest amount by which two root lists disagree beyond their combined
/// radii (0 when they agree).
pub fn max_path_deviation(a: &RootList, b: &RootList) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    (0..a.len())
        .map(|i| {
            let gap = (a.values[i] - b.values[i]).abs();
            // Allow a few ulps on top of the certified radii.
            let slack = a.radius[i] + b.radius[i] + 4.0 * f64::EPSILON * a.values[i].abs().max(1.0);
            (gap - slack).max(0.0)
        })
        .fold(0.0, f64::max)
}

/// One eigenvalue of `A` with its multiplicity and the `t` values whose
/// `Λ_t` contain it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLine {
    pub value: f64,
    pub multiplicity: u128,
    #[serde(rename = "t")]
    pub contributors: Vec<u32>,
}

/// The complete spectrum of `A(n, r1, r2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub n: u32,
    pub r1: u32,
    pub r2: u32,
    pub total_dim: u128,
    pub lines: Vec<SpectrumLine>,
    /// Cross-`t` gaps that fell into the ambiguous zone just above the
    /// merge threshold.
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl SpectrumTable {
    /// Eigenvalues repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        self.lines
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.value, l.multiplicity as usize))
            .collect()
    }

    pub fn max_value(&self) -> Option<f64> {
        self.lines.last().map(|l| l.value)
    }
}

/// Tuning knobs for [`full_spectrum_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// `merge_eps = merge_eps_scale * (n + 1)`.
    pub merge_eps_scale: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            merge_eps_scale: MERGE_EPS_SCALE,
        }
    }
}

pub fn full_spectrum(n: u32, r1: u32, r2: u32) -> Result<SpectrumTable> {
    full_spectrum_with(n, r1, r2, &SpectrumOptions::default())
}

pub fn full_spectrum_with(
    n: u32,
    r1: u32,
    r2: u32,
    opts: &SpectrumOptions,
) -> Result<SpectrumTable> {
    check_radii(n, r1, r2)?;
    let total_dim = shell_size(n, r1, r2).ok_or_else(|| {
        Error::InvalidParameters(format!("vertex count of B({n},{r1},{r2}) overflows u128"))
    })?;
    let merge_eps = opts.merge_eps_scale * (n as f64 + 1.0);

    let mut zero_ts: Vec<u32> = Vec::new();
    let mut items: Vec<(f64, u32)> = Vec::new();
    for t in 0..=r2 {
        let set = lambda_set(n, r1, r2, t)?;
        for &v in &set.values {
            if v == 0.0 {
                zero_ts.push(t);
            } else {
                items.push((v, t));
            }
        }
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut warnings = Vec::new();
    let mut clusters: Vec<Vec<(f64, u32)>> = Vec::new();
    for (i, &(v, t)) in items.iter().enumerate() {
        let join = i > 0 && v - items[i - 1].0 < merge_eps;
        if i > 0 && !join && items[i - 1].1 != t {
            let gap = v - items[i - 1].0;
            if gap < 1000.0 * merge_eps {
                warnings.push(format!(
                    "eigenvalues {:.17e} (t={}) and {v:.17e} (t={t}) differ by {gap:e}, just above the merge threshold {merge_eps:e}",
                    items[i - 1].0,
                    items[i - 1].1
                ));
            }
        }
        if join {
            clusters.last_mut().expect("cluster exists").push((v, t));
        } else {
            clusters.push(vec![(v, t)]);
        }
    }

    let mut lines = Vec::with_capacity(clusters.len() + 1);
    let mut zero_pending = !zero_ts.is_empty();
    for cluster in clusters {
        let value = cluster.iter().map(|c| c.0).sum::<f64>() / cluster.len() as f64;
        if zero_pending && value > 0.0 {
            lines.push(make_line(n, 0.0, zero_ts.clone())?);
            zero_pending = false;
        }
        lines.push(make_line(n, value, cluster.iter().map(|c| c.1).collect())?);
    }
    if zero_pending {
        lines.push(make_line(n, 0.0, zero_ts)?);
    }

    let sum: u128 = lines.iter().map(|l| l.multiplicity).sum();
    if sum != total_dim {
        return Err(Error::Internal(format!(
            "multiplicities of A({n},{r1},{r2}) sum to {sum}, expected {total_dim}"
        )));
    }
    Ok(SpectrumTable {
        n,
        r1,
        r2,
        total_dim,
        lines,
        warnings,
    })
}

fn make_line(n: u32, value: f64, mut contributors: Vec<u32>) -> Result<SpectrumLine> {
    contributors.sort_unstable();
    if contributors.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Internal(format!(
            "two eigenvalues of the same M_t merged near {value}"
        )));
    }
    let multiplicity = contributors
        .iter()
        .map(|&t| eigenspace_dim(n, t))
        .sum::<Option<u128>>()
        .ok_or_else(|| Error::InvalidParameters("multiplicity overflows u128".into()))?;
    Ok(SpectrumLine {
        value,
        multiplicity,
        contributors,
    })
}

/// Largest eigenvalue of the ball `B(n, r)`: `n - 2 x`, with `x` the first
/// root of `K_{r+1}^{(n)}`.
pub fn max_eigenvalue(n: u32, r: u32) -> Result<f64> {
    check_radii(n, 0, r)?;
    Ok(n as f64 - 2.0 * krawtchouk::first_root(n as i64, r as i64 + 1, EIG_TOL)?)
}

/// `Σ_{t=0}^{r2} (C(n,t) - C(n,t-1)) · (r2 - max(t,r1) + 1)`, which must equal
/// `|B(n, r1, r2)|`.
pub fn multiplicity_dimension_sum(n: u32, r1: u32, r2: u32) -> BigUint {
    let n = n as i64;
    let total: BigInt = (0..=r2 as i64)
        .map(|t| {
            let dim = binomial_int(n, t) - binomial_int(n, t - 1);
            dim * BigInt::from(r2 as i64 - t.max(r1 as i64) + 1)
        })
        .sum();
    total.to_biguint().expect("nonnegative dimension")
}

/// `Σ_{i=r1}^{r2} C(n, i)` in big integers.
pub fn shell_size_big(n: u32, r1: u32, r2: u32) -> BigUint {
    (r1..=r2)
        .map(|i| crate::binom::binomial(n as i64, i as i64))
        .sum()
}

/// A spectrum line whose predicted multiplicity disagrees with the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityMismatch {
    pub value: f64,
    pub predicted: u128,
    pub observed: usize,
}

/// Outcome of comparing the closed-form spectrum with the dense oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: u32,
    pub r1: u32,
    pub r2: u32,
    pub vertex_count: usize,
    pub lines: usize,
    /// Largest gap after pairing both sorted eigenvalue lists.
    pub max_deviation: f64,
    pub multiplicity_mismatches: Vec<MultiplicityMismatch>,
    pub tol: f64,
    pub pass: bool,
}

/// Compares [`full_spectrum`] with a dense eigendecomposition of the
/// induced adjacency matrix.
pub fn verify_against_oracle(
    n: u32,
    r1: u32,
    r2: u32,
    tol: f64,
    limits: &Limits,
) -> Result<VerifyReport> {
    check_radii(n, r1, r2)?;
    let count = shell_size(n, r1, r2).unwrap_or(u128::MAX);
    if count > limits.dense_limit as u128 {
        return Err(Error::BudgetExceeded {
            vertex_count: count,
            limit: limits.dense_limit as u128,
        });
    }
    let table = full_spectrum(n, r1, r2)?;
    let graph = InducedGraph::build(n, r1, r2, limits)?;
    let oracle = oracle_spectrum(&graph, false, limits)?;
    Ok(compare_with_oracle(&table, &oracle.eigenvalues, tol))
}

/// Pairs predicted and observed eigenvalues in ascending order and checks
/// every line's multiplicity against the number of observed eigenvalues
/// within `tol` of it.
pub fn compare_with_oracle(table: &SpectrumTable, observed: &[f64], tol: f64) -> VerifyReport {
    let predicted = table.expanded();
    let max_deviation = if predicted.len() == observed.len() {
        predicted
            .iter()
            .zip(observed)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let multiplicity_mismatches: Vec<MultiplicityMismatch> = table
        .lines
        .iter()
        .filter_map(|line| {
            let got = observed
                .iter()
                .filter(|&&x| (x - line.value).abs() <= tol)
                .count();
            (got as u128 != line.multiplicity).then_some(MultiplicityMismatch {
                value: line.value,
                predicted: line.multiplicity,
                observed: got,
            })
        })
        .collect();
    VerifyReport {
        n: table.n,
        r1: table.r1,
        r2: table.r2,
        vertex_count: observed.len(),
        lines: table.lines.len(),
        max_deviation,
        pass: max_deviation <= tol && multiplicity_mismatches.is_empty(),
        multiplicity_mismatches,
        tol,
    }
}
