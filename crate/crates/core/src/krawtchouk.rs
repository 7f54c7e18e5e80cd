//! Krawtchouk polynomials `K_k^{(N)}(x) = Σ_l (-1)^l C(x,l) C(N-x,k-l)` with
//! exact integer coefficients, and certified isolation of their real roots.
//!
//! Roots are isolated on the integer grid `0..=N`: consecutive roots are more
//! than one apart, so every root is either an integer (exact zero) or the
//! unique root inside a unit interval whose endpoints have opposite signs.
//! Each bracket is then bisected with the sign at every floating-point
//! midpoint evaluated exactly.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::binom::binomial_int;
use crate::tridiag::SymTridiag;
use crate::{Error, Result};

/// Largest ambient dimension for which exact coefficients are built; above it
/// roots come from the Jacobi matrix only.
pub const EXACT_MAX_DIM: u32 = 64;

/// Default absolute root tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// The Krawtchouk polynomial `K_k^{(N)}`, stored as the integer polynomial
/// `k! · K_k` (lowest degree first) together with the scale `k!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrawtchoukPoly {
    n: u32,
    k: u32,
    coeffs: Vec<BigInt>,
    scale: BigInt,
}

/// Where a [`RootList`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootSource {
    PolynomialBisection,
    TridiagonalEigensolve,
}

/// Simple real roots in ascending order, each with a certified absolute
/// radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RootList {
    pub values: Vec<f64>,
    pub radius: Vec<f64>,
    pub source: RootSource,
}

impl RootList {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Applies `x -> scale * x + shift` (with `scale > 0`) to every root.
    pub fn affine(&self, scale: f64, shift: f64) -> RootList {
        assert!(scale > 0.0);
        RootList {
            values: self.values.iter().map(|x| scale * x + shift).collect(),
            radius: self
                .radius
                .iter()
                .zip(&self.values)
                .map(|(r, x)| scale * r + f64::EPSILON * (scale * x + shift).abs())
                .collect(),
            source: self.source,
        }
    }
}

impl KrawtchoukPoly {
    /// Builds `K_k^{(N)}` from the three-term recurrence
    /// `k K_k = (N - 2x) K_{k-1} - (N - k + 2) K_{k-2}`, which for the scaled
    /// polynomials `P_k = k! K_k` reads
    /// `P_k = (N - 2x) P_{k-1} - (k-1)(N-k+2) P_{k-2}`.
    pub fn build(n: i64, k: i64) -> Result<Self> {
        if n < 0 || k < 0 || k > n || n > u32::MAX as i64 {
            return Err(Error::InvalidDegree { n, k });
        }
        let big_n = BigInt::from(n);
        let mut prev: Vec<BigInt> = Vec::new();
        let mut cur: Vec<BigInt> = vec![BigInt::one()];
        let mut scale = BigInt::one();
        for j in 1..=k {
            let mut next = vec![BigInt::zero(); (j + 1) as usize];
            for (i, c) in cur.iter().enumerate() {
                next[i] += &big_n * c;
                next[i + 1] -= c * 2;
            }
            let damp = BigInt::from((j - 1) * (n - j + 2));
            for (i, c) in prev.iter().enumerate() {
                next[i] -= &damp * c;
            }
            scale *= j;
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(Self {
            n: n as u32,
            k: k as u32,
            coeffs: cur,
            scale,
        })
    }

    pub fn ambient_dim(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Coefficients of `k! · K_k`, lowest degree first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `k!`
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// Leading coefficient of `K_k`, which is `(-2)^k / k!`.
    pub fn leading_coefficient(&self) -> BigRational {
        BigRational::new(self.coeffs[self.k as usize].clone(), self.scale.clone())
    }

    /// Coefficients of the monic multiple `k!/(-2)^k · K_k`.
    pub fn monic_coeffs(&self) -> Vec<BigRational> {
        let denom = BigInt::from(-2).pow(self.k);
        self.coeffs
            .iter()
            .map(|c| BigRational::new(c.clone(), denom.clone()))
            .collect()
    }

    /// `k! · K_k(x)` at an integer point.
    pub fn eval_scaled(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact `K_k(x)` at any integer `x`.
    pub fn eval_exact(&self, x: i64) -> BigRational {
        BigRational::new(self.eval_scaled(&BigInt::from(x)), self.scale.clone())
    }

    /// Sign of the polynomial at a finite float, evaluated exactly.
    pub fn sign_at(&self, x: f64) -> Ordering {
        let (mantissa, shift) = dyadic(x);
        // x = mantissa / 2^shift; evaluate the homogenized form
        // Σ c_i mantissa^i 2^{shift (k - i)}, whose sign matches P(x).
        let q = BigInt::one() << shift;
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * &mantissa + c * &qpow;
            qpow *= &q;
        }
        // The loop multiplies the leading term by q^0 and the constant term
        // by q^k, as required.
        match acc.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Approximate value at a real point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let scale = self.scale.to_f64().unwrap_or(f64::INFINITY);
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
            / scale
    }

    /// All `k` roots, ascending, each certified to an interval of width at
    /// most `tol`.
    pub fn roots(&self, tol: f64) -> Result<RootList> {
        if self.k == 0 {
            return Err(Error::InvalidParameters(
                "the constant Krawtchouk polynomial has no roots".into(),
            ));
        }
        let grid: Vec<Ordering> = (0..=self.n as i64)
            .map(|j| self.eval_scaled(&BigInt::from(j)).sign())
            .map(sign_to_ordering)
            .collect();
        let mut values = Vec::with_capacity(self.k as usize);
        let mut radius = Vec::with_capacity(self.k as usize);
        for j in 0..grid.len() {
            if grid[j] == Ordering::Equal {
                values.push(j as f64);
                radius.push(0.0);
                continue;
            }
            if j + 1 < grid.len() && grid[j + 1] != Ordering::Equal && grid[j + 1] != grid[j] {
                let (v, r) = self.bisect(j as f64, (j + 1) as f64, grid[j], tol);
                values.push(v);
                radius.push(r);
            }
        }
        if values.len() != self.k as usize {
            return Err(Error::Internal(format!(
                "isolated {} roots of K_{}^({}), expected {}",
                values.len(),
                self.k,
                self.n,
                self.k
            )));
        }
        Ok(RootList {
            values,
            radius,
            source: RootSource::PolynomialBisection,
        })
    }

    /// Smallest root; only the first bracket is bisected.
    pub fn first_root(&self, tol: f64) -> Result<f64> {
        if self.k == 0 {
            return Err(Error::InvalidParameters(
                "the constant Krawtchouk polynomial has no roots".into(),
            ));
        }
        let mut prev = sign_to_ordering(self.eval_scaled(&BigInt::zero()).sign());
        if prev == Ordering::Equal {
            return Ok(0.0);
        }
        for j in 1..=self.n as i64 {
            let s = sign_to_ordering(self.eval_scaled(&BigInt::from(j)).sign());
            if s == Ordering::Equal {
                return Ok(j as f64);
            }
            if s != prev {
                return Ok(self.bisect((j - 1) as f64, j as f64, prev, tol).0);
            }
            prev = s;
        }
        Err(Error::Internal(format!(
            "no sign change for K_{}^({}) on the integer grid",
            self.k, self.n
        )))
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, sign_lo: Ordering, tol: f64) -> (f64, f64) {
        // Below 1 the tolerance turns relative: roots of degrees close to N
        // can be far smaller than any useful absolute tolerance.
        while hi - lo > tol * lo.abs().min(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match self.sign_at(mid) {
                Ordering::Equal => return (mid, 0.0),
                s if s == sign_lo => lo = mid,
                _ => hi = mid,
            }
        }
        let mid = 0.5 * (lo + hi);
        (mid, 0.5 * (hi - lo) + f64::EPSILON * hi.abs())
    }
}

fn sign_to_ordering(s: Sign) -> Ordering {
    match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Writes a finite float exactly as `mantissa / 2^shift`.
fn dyadic(x: f64) -> (BigInt, u32) {
    assert!(x.is_finite());
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let m = BigInt::from(mant) * sign;
    if exp >= 0 {
        (m << exp as u32, 0)
    } else {
        (m, (-exp) as u32)
    }
}

/// Jacobi matrix whose eigenvalues are the roots of `K_k^{(N)}`: constant
/// diagonal `N/2`, squared off-diagonals `(j-1)(N-j+2)/4` for `j = 2..=k`.
pub fn jacobi_matrix(n: u64, k: u64) -> SymTridiag {
    let diag = vec![n as f64 / 2.0; k as usize];
    let off_sq = (2..=k)
        .map(|j| ((j - 1) as f64) * ((n + 2 - j) as f64) / 4.0)
        .collect();
    SymTridiag::from_squared(diag, off_sq)
}

/// Roots of `K_k^{(N)}` as eigenvalues of the Jacobi matrix.
pub fn jacobi_roots(n: u64, k: u64, tol: f64) -> Result<RootList> {
    if k < 1 || k > n {
        return Err(Error::InvalidDegree {
            n: n as i64,
            k: k as i64,
        });
    }
    let brackets = jacobi_matrix(n, k).eigenvalues(tol);
    Ok(RootList {
        values: brackets.iter().map(|b| b.value).collect(),
        radius: brackets.iter().map(|b| b.radius).collect(),
        source: RootSource::TridiagonalEigensolve,
    })
}

/// Smallest root `x_k` of `K_k^{(N)}`.
///
/// Uses exact polynomial bisection for `N <= 64` and the minimal eigenvalue
/// of the Jacobi matrix otherwise. By convention `N = 0` returns 0 for any
/// `k >= 1`: `K_1^{(0)} = -2x` vanishes at 0, and the spectrum assembly
/// requests exactly this case when `n - 2t = 0`.
pub fn first_root(n: i64, k: i64, tol: f64) -> Result<f64> {
    if n == 0 && k >= 1 {
        return Ok(0.0);
    }
    if n < 0 || k < 1 || k > n {
        return Err(Error::InvalidDegree { n, k });
    }
    if n <= EXACT_MAX_DIM as i64 {
        KrawtchoukPoly::build(n, k)?.first_root(tol)
    } else {
        Ok(jacobi_matrix(n as u64, k as u64).eigenvalue(0, tol).value)
    }
}

/// Checks `C(n,j) K_i(j) = C(n,i) K_j(i)` exactly.
pub fn check_reciprocity(n: i64, i: i64, j: i64) -> Result<bool> {
    let ki = KrawtchoukPoly::build(n, i)?;
    let kj = KrawtchoukPoly::build(n, j)?;
    let lhs = ki.eval_exact(j) * BigRational::from(binomial_int(n, j));
    let rhs = kj.eval_exact(i) * BigRational::from(binomial_int(n, i));
    Ok(lhs == rhs)
}

/// Nearest float to an exact rational.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
