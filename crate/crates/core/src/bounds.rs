//! Entropy-parametrized isoperimetric bounds.
//!
//! For a target cardinality `s` write `r(s) = n·H⁻¹(log₂ s / n)` and
//! `t = ⌊r⌋`. The ball `B(n, t)` has at most `s` vertices, so the largest
//! maximal eigenvalue `Λ(s)` over sets of size `s` is at least
//! `n - 2 x_{t+1}`, with `x_k` the first root of `K_k^{(n)}`; dually the
//! smallest fractional edge boundary `Δ(s)` is at most `2 x_{t+1}`.

use serde::{Deserialize, Serialize};

use crate::krawtchouk::{first_root, DEFAULT_TOL};
use crate::{Error, Result};

/// Absolute accuracy of [`entropy_inv`].
pub const ENTROPY_INV_TOL: f64 = 1e-14;

/// Binary entropy `H(x) = x log₂(1/x) + (1-x) log₂(1/(1-x))`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainViolation {
            value: x,
            domain: "[0, 1]",
        });
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(x) + term(1.0 - x))
}

/// Inverse of `H` restricted to `[0, 1/2]`, where it is strictly increasing.
pub fn entropy_inv(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::DomainViolation {
            value: h,
            domain: "[0, 1]",
        });
    }
    if h == 0.0 || h == 1.0 {
        return Ok(h / 2.0);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > ENTROPY_INV_TOL {
        let mid = 0.5 * (lo + hi);
        if entropy(mid)? < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_log2_s(n: u64, log2_s: f64, lo: f64, hi: f64, domain: &'static str) -> Result<()> {
    if n == 0 || !(lo..=hi).contains(&log2_s) {
        return Err(Error::DomainViolation {
            value: log2_s,
            domain,
        });
    }
    Ok(())
}

/// `n·(1 - 2√(u(1-u)))` with `u = H⁻¹(log₂ s / n)`: a lower bound on the
/// fractional edge boundary of any set of size `s`. Accepts
/// `0 <= log₂ s <= n`; the value is 0 at `log₂ s = n`.
pub fn modls_bound(n: u64, log2_s: f64) -> Result<f64> {
    check_log2_s(n, log2_s, 0.0, n as f64, "[0, n]")?;
    let u = entropy_inv(log2_s / n as f64)?;
    Ok(n as f64 * (1.0 - 2.0 * (u * (1.0 - u)).sqrt()))
}

/// Bounds attached to the cardinality `s = 2^log2_s` in dimension `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: u64,
    pub log2_s: f64,
    /// `n·H⁻¹(log₂ s / n)`.
    pub r: f64,
    pub t: u64,
    /// `n - 2 x_{t+1}`, a lower bound on `Λ(s)`.
    pub lambda_lower: f64,
    /// `2 x_{t+1}`, an upper bound on `Δ(s)`.
    pub delta_upper: f64,
    /// [`modls_bound`], a lower bound on `Δ(s)`.
    pub modls_lower: f64,
    /// `log₂(2ⁿ/s)`: the fractional boundary of a subcube of size `s`.
    pub subcube_delta: f64,
    /// `ln(2ⁿ/s)`.
    pub log_lower: f64,
}

/// Ball-based bounds for `1 <= log₂ s <= n - 1`.
pub fn ball_bound(n: u64, log2_s: f64) -> Result<BoundsReport> {
    check_log2_s(n, log2_s, 1.0, n as f64 - 1.0, "[1, n-1]")?;
    let r = n as f64 * entropy_inv(log2_s / n as f64)?;
    let t = r.floor() as u64;
    let x = first_root(n as i64, t as i64 + 1, DEFAULT_TOL)?;
    let subcube_delta = n as f64 - log2_s;
    Ok(BoundsReport {
        n,
        log2_s,
        r,
        t,
        lambda_lower: n as f64 - 2.0 * x,
        delta_upper: 2.0 * x,
        modls_lower: modls_bound(n, log2_s)?,
        subcube_delta,
        log_lower: subcube_delta * std::f64::consts::LN_2,
    })
}

/// Smallest `i` with `x_i <= t + 1`, found by binary search (first roots
/// strictly decrease in the degree). By reciprocity `x_{t+1} <= i`, so the
/// fractional boundary of `B(n, t)` is at most `2i`; that relation is
/// checked before returning. Requires `2t < n`.
pub fn reciprocity_delta_bound(n: u64, t: u64) -> Result<u64> {
    if 2 * t >= n {
        return Err(Error::InvalidParameters(format!(
            "need 2t < n, got n={n}, t={t}"
        )));
    }
    let n_i = n as i64;
    // Absorbs the bisection error of the floating-point root paths; exact
    // integer roots come out exactly.
    let slack = 1e-9 * n as f64;
    let target = (t + 1) as f64 + slack;
    let (mut lo, mut hi) = (1u64, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if first_root(n_i, mid as i64, DEFAULT_TOL)? <= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let x = first_root(n_i, t as i64 + 1, DEFAULT_TOL)?;
    if x > lo as f64 + slack {
        return Err(Error::Internal(format!(
            "x_{} = {x} exceeds the reciprocity bound {lo} at n = {n}",
            t + 1
        )));
    }
    Ok(lo)
}

/// Fractional boundary and maximal eigenvalue of a `k`-dimensional subcube:
/// `(n - k, k)`.
pub fn subcube_reference(n: u64, k: u64) -> Result<(f64, f64)> {
    if k > n {
        return Err(Error::InvalidParameters(format!(
            "subcube dimension {k} exceeds n = {n}"
        )));
    }
    Ok(((n - k) as f64, k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert_eq!(entropy_inv(1.0).unwrap(), 0.5);
        assert_eq!(entropy_inv(0.0).unwrap(), 0.0);
        assert!((entropy(0.11).unwrap() - 0.499916).abs() < 1e-6);
        let u = entropy_inv(0.5).unwrap();
        assert!((u - 0.11003).abs() < 1e-5);
        assert!((entropy(u).unwrap() - 0.5).abs() < 1e-12);
        assert!(entropy(1.5).is_err());
        assert!(entropy_inv(-0.1).is_err());
    }

    #[test]
    fn modls_examples() {
        assert!(modls_bound(100, 100.0).unwrap().abs() < 1e-6);
        let b = modls_bound(100, 50.0).unwrap();
        // u = 0.110028, 2√(u(1-u)) = 0.625849.
        assert!((b - 37.4151).abs() < 1e-4, "{b}");
        assert!((modls_bound(100, 0.0).unwrap() - 100.0).abs() < 1e-12);
        assert!(modls_bound(100, 101.0).is_err());
    }

    #[test]
    fn ball_bound_small_case() {
        let rep = ball_bound(4, 5f64.log2()).unwrap();
        assert!((rep.r - 0.55).abs() < 0.01, "{}", rep.r);
        assert_eq!(rep.t, 0);
        assert_eq!(rep.lambda_lower, 0.0);
        assert_eq!(rep.delta_upper, 4.0);
        assert_eq!(rep.lambda_lower + rep.delta_upper, 4.0);
        assert!(ball_bound(4, 0.5).is_err());
        assert!(ball_bound(4, 3.5).is_err());
    }

    #[test]
    fn reciprocity_examples() {
        assert_eq!(reciprocity_delta_bound(4, 1).unwrap(), 1);
        for n in [5u64, 9, 21, 101] {
            let t = (n - 1) / 2;
            assert_eq!(reciprocity_delta_bound(n, t).unwrap(), 1);
        }
        assert!(reciprocity_delta_bound(4, 2).is_err());
    }

    #[test]
    fn subcube_examples() {
        assert_eq!(subcube_reference(10, 9).unwrap(), (1.0, 9.0));
        assert_eq!(subcube_reference(10, 10).unwrap(), (0.0, 10.0));
        assert_eq!(subcube_reference(10, 0).unwrap(), (10.0, 0.0));
        assert!(subcube_reference(3, 4).is_err());
    }
}
