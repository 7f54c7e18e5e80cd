//! Binomial coefficients and fixed-weight bitmask enumeration.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// `C(n, k)` as an arbitrary-precision integer; zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= BigUint::from((n - j) as u64);
        acc /= BigUint::from((j + 1) as u64);
    }
    acc
}

/// Signed variant of [`binomial`].
pub fn binomial_int(n: i64, k: i64) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// `C(n, k)` in `u128`, or `None` on overflow. Zero outside `0 <= k <= n`.
pub fn binomial_u128(n: u32, k: i64) -> Option<u128> {
    if k < 0 || k > n as i64 {
        return Some(0);
    }
    let k = (k as u32).min(n - k as u32);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) is divisible by (j + 1) after the multiplication.
        let num = acc.checked_mul((n - j) as u128)?;
        acc = num / (j + 1) as u128;
    }
    Some(acc)
}

/// `C(n, k)` as a float, for tolerances and reporting only.
pub fn binomial_f64(n: u32, k: i64) -> f64 {
    if k < 0 || k > n as i64 {
        return 0.0;
    }
    let k = (k as u32).min(n - k as u32);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `C(n,t) - C(n,t-1)`, the dimension of the `t`-th eigenspace of a sphere.
pub fn eigenspace_dim(n: u32, t: u32) -> Option<u128> {
    let hi = binomial_u128(n, t as i64)?;
    let lo = binomial_u128(n, t as i64 - 1)?;
    hi.checked_sub(lo)
}

/// Number of vertices of `S(n,r1) ∪ ... ∪ S(n,r2)`.
pub fn shell_size(n: u32, r1: u32, r2: u32) -> Option<u128> {
    (r1..=r2).try_fold(0u128, |acc, i| acc.checked_add(binomial_u128(n, i as i64)?))
}

/// All `n`-bit masks of popcount `w`, in ascending numeric order.
pub fn masks_of_weight(n: u32, w: u32) -> Vec<u64> {
    assert!(n <= 64 && w <= n);
    if w == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut m: u64 = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
    let limit_bit = n;
    loop {
        out.push(m);
        // Gosper's hack: next larger integer with the same popcount.
        let c = m & m.wrapping_neg();
        let r = m.wrapping_add(c);
        if r == 0 {
            break;
        }
        let next = (((r ^ m) >> 2) / c) | r;
        if limit_bit < 64 && next >> limit_bit != 0 {
            break;
        }
        if next <= m {
            break;
        }
        m = next;
    }
    out
}

/// Bit string of `mask` over `n` positions, most significant position first.
pub fn bitstring(mask: u64, n: u32) -> String {
    (0..n)
        .rev()
        .map(|j| if mask >> j & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parse a bit string written most significant position first.
pub fn parse_bitstring(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > 64 {
        return None;
    }
    s.chars().try_fold(0u64, |acc, ch| match ch {
        '0' => Some(acc << 1),
        '1' => Some(acc << 1 | 1),
        _ => None,
    })
}
