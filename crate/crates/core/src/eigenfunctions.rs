//! Explicit eigenfunctions of `A(n, r1, r2)`.
//!
//! For `|y| = t` the zonal semi-symmetric functions `f_{y,i}` (one per sphere
//! `i = t*..=r2`, normalized to 1 on supersets of `y`) span a space `W_y` that
//! `A` maps into itself through the tridiagonal operator `A_y`. An
//! eigenvector `v` of `A_y` yields the eigenfunction `g = Σ v_k f_{y,k}`.
//!
//! Semi-symmetric functions around `y` are constant on the classes
//! `B_c = {x ∈ S(n,i) : |x ∩ y| = c}`, so values are stored per class.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::binom::{binomial_int, binomial_u128, bitstring, masks_of_weight};
use crate::error::invalid;
use crate::hamming::{check_radii, InducedGraph, Limits};
use crate::krawtchouk::rational_to_f64;
use crate::linalg::{self, DenseMatrix};
use crate::spectrum::lambda_set;
use crate::tridiag::SymTridiag;
use crate::{Error, Result};

/// Largest accepted `‖A g - λ g‖∞ / ‖g‖∞` of a synthesized eigenfunction.
pub const SYNTH_TOL: f64 = 1e-8;

/// Relative tolerance of the orthogonality part of the membership test.
pub const ORTHO_TOL: f64 = 1e-10;

/// Relative tolerance of the span part of the membership test.
pub const SPAN_TOL: f64 = 1e-8;

fn check_center(n: u32, t: u32, y: u64) -> Result<()> {
    if n > 64 {
        return Err(invalid(format!(
            "n = {n} exceeds the 64-bit vertex encoding"
        )));
    }
    if n < 64 && y >> n != 0 {
        return Err(invalid(format!("y = {y:#x} has bits beyond n = {n}")));
    }
    if y.count_ones() != t {
        return Err(invalid(format!("|y| = {} but t = {t}", y.count_ones())));
    }
    Ok(())
}

/// Values of `f_{y,i}` on the intersection classes of each sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiSymBasis {
    pub n: u32,
    pub r1: u32,
    pub r2: u32,
    pub t: u32,
    pub y: u64,
    /// `values[i - t*][c]` is the value on `{x ∈ S(n,i) : |x ∩ y| = c}`.
    values: Vec<Vec<BigRational>>,
}

impl SemiSymBasis {
    pub fn t_star(&self) -> u32 {
        self.t.max(self.r1)
    }

    /// Spheres carrying a basis function, ascending.
    pub fn spheres(&self) -> std::ops::RangeInclusive<u32> {
        self.t_star()..=self.r2
    }

    /// Exact value of `f_{y,i}` on class `c`.
    pub fn value(&self, i: u32, c: u32) -> &BigRational {
        &self.values[(i - self.t_star()) as usize][c as usize]
    }

    pub fn value_f64(&self, i: u32, c: u32) -> f64 {
        rational_to_f64(self.value(i, c))
    }

    /// `f_{y,i}` as a vector over `S(n,i)` in ascending mask order.
    pub fn sphere_function(&self, i: u32) -> Vec<f64> {
        let row: Vec<f64> = (0..=self.t).map(|c| self.value_f64(i, c)).collect();
        masks_of_weight(self.n, i)
            .into_iter()
            .map(|x| row[(x & self.y).count_ones() as usize])
            .collect()
    }
}

/// `|B_c| = C(t, c) · C(n - t, i - c)`.
pub fn class_size(n: u32, i: u32, t: u32, c: u32) -> BigInt {
    binomial_int(t as i64, c as i64) * binomial_int((n - t) as i64, i as i64 - c as i64)
}

/// Builds `f_{y,i}` for `i = t*..=r2`: value 1 on `c = t`, lower classes
/// fixed by orthogonality to `G_0, ..., G_{t-1}`, where `G_k` takes the value
/// `C(c, k)` on class `c`. The system is triangular and solved exactly.
pub fn build_basis(n: u32, r1: u32, r2: u32, t: u32, y: u64) -> Result<SemiSymBasis> {
    check_radii(n, r1, r2)?;
    if t > r2 {
        return Err(invalid(format!("t = {t} exceeds r2 = {r2}")));
    }
    check_center(n, t, y)?;
    let t_star = t.max(r1);
    let values = (t_star..=r2)
        .map(|i| sphere_values(n, i, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(SemiSymBasis {
        n,
        r1,
        r2,
        t,
        y,
        values,
    })
}

fn sphere_values(n: u32, i: u32, t: u32) -> Result<Vec<BigRational>> {
    let t_us = t as usize;
    let sizes: Vec<BigInt> = (0..=t).map(|c| class_size(n, i, t, c)).collect();
    let mut a = vec![BigRational::zero(); t_us + 1];
    a[t_us] = BigRational::one();
    for k in (0..t_us).rev() {
        if sizes[k].is_zero() {
            return Err(Error::Internal(format!("empty class c={k} on S({n},{i})")));
        }
        let mut s = BigRational::zero();
        for l in k + 1..=t_us {
            let w = binomial_int(l as i64, k as i64) * &sizes[l];
            s += &a[l] * BigRational::from_integer(w);
        }
        a[k] = -s / BigRational::from_integer(sizes[k].clone());
    }
    Ok(a)
}

/// The operator `A_y` in the basis `f_{y,t*}, ..., f_{y,r2}`: column `j`
/// holds the coordinates of `A f_{y,t*+j}`. Superdiagonal `β_{i+1} = n - i`,
/// subdiagonal `γ_i = (i-t+1)(n-t-i)/(n-i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorAy {
    pub n: u32,
    pub r1: u32,
    pub r2: u32,
    pub t: u32,
    beta: Vec<u64>,
    gamma: Vec<BigRational>,
}

impl OperatorAy {
    pub fn new(n: u32, r1: u32, r2: u32, t: u32) -> Result<Self> {
        check_radii(n, r1, r2)?;
        if t > r2 {
            return Err(invalid(format!("t = {t} exceeds r2 = {r2}")));
        }
        let t_star = t.max(r1);
        let (n64, t64) = (n as i64, t as i64);
        let beta = (t_star..r2).map(|i| (n - i) as u64).collect();
        let gamma = (t_star as i64..r2 as i64)
            .map(|i| BigRational::new(((i - t64 + 1) * (n64 - t64 - i)).into(), (n64 - i).into()))
            .collect();
        Ok(Self {
            n,
            r1,
            r2,
            t,
            beta,
            gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.beta.len() + 1
    }

    pub fn beta(&self) -> &[u64] {
        &self.beta
    }

    pub fn gamma(&self) -> &[BigRational] {
        &self.gamma
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim(), self.dim());
        for j in 0..self.beta.len() {
            m.set(j, j + 1, self.beta[j] as f64);
            m.set(j + 1, j, rational_to_f64(&self.gamma[j]));
        }
        m
    }

    /// Squared off-diagonals `β_{i+1} γ_i = (i-t+1)(n-t-i)` of `D⁻¹ A_y D`.
    pub fn symmetric_offdiag_squared(&self) -> Vec<u64> {
        self.beta
            .iter()
            .zip(&self.gamma)
            .map(|(&b, g)| {
                let p = BigRational::from_integer(b.into()) * g;
                debug_assert!(p.is_integer());
                p.to_integer().to_u64().expect("small product")
            })
            .collect()
    }

    pub fn symmetrized(&self) -> SymTridiag {
        SymTridiag::from_squared(
            vec![0.0; self.dim()],
            self.symmetric_offdiag_squared()
                .iter()
                .map(|&v| v as f64)
                .collect(),
        )
    }

    /// Diagonal of `D`: `x_1 = 1`, `x_{k+1} = x_k · sqrt(γ_k / β_k)`.
    pub fn scaling(&self) -> Vec<f64> {
        let mut d = Vec::with_capacity(self.dim());
        d.push(1.0);
        for (b, g) in self.beta.iter().zip(&self.gamma) {
            let last = *d.last().expect("nonempty");
            d.push(last * (rational_to_f64(g) / *b as f64).sqrt());
        }
        d
    }
}

/// An eigenfunction `g_{y,λ}` of the induced adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFunction {
    pub n: u32,
    pub r1: u32,
    pub r2: u32,
    pub t: u32,
    pub y: u64,
    pub lambda: f64,
    /// Coordinates in `f_{y,t*}, ..., f_{y,r2}`, with `coeffs[0] = 1`.
    pub coeffs: Vec<f64>,
    /// Per-vertex values in the order of the induced graph.
    pub values: Vec<f64>,
    /// `‖A g - λ g‖∞ / ‖g‖∞`.
    pub residual: f64,
    /// `class_values[i - t*][c]`: value on `{x ∈ S(n,i) : |x ∩ y| = c}`.
    pub class_values: Vec<Vec<f64>>,
}

impl EigenFunction {
    pub fn t_star(&self) -> u32 {
        self.t.max(self.r1)
    }

    /// Restriction to `S(n,i)` in ascending mask order (zeros below `t*`).
    pub fn restriction(&self, i: u32) -> Vec<f64> {
        let masks = masks_of_weight(self.n, i);
        if i < self.t_star() || i > self.r2 {
            return vec![0.0; masks.len()];
        }
        let row = &self.class_values[(i - self.t_star()) as usize];
        masks
            .into_iter()
            .map(|x| row[(x & self.y).count_ones() as usize])
            .collect()
    }
}

impl Serialize for EigenFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Class {
            c: u32,
            value: f64,
        }
        #[derive(serde::Serialize)]
        struct Sphere {
            i: u32,
            classes: Vec<Class>,
        }
        let spheres: Vec<Sphere> = self
            .class_values
            .iter()
            .enumerate()
            .map(|(k, row)| Sphere {
                i: self.t_star() + k as u32,
                classes: row
                    .iter()
                    .enumerate()
                    .map(|(c, &value)| Class { c: c as u32, value })
                    .collect(),
            })
            .collect();
        let mut s = serializer.serialize_struct("EigenFunction", 4)?;
        s.serialize_field("lambda", &self.lambda)?;
        s.serialize_field("t", &self.t)?;
        s.serialize_field("y", &bitstring(self.y, self.n))?;
        s.serialize_field("spheres", &spheres)?;
        s.end()
    }
}

/// Synthesizes the eigenfunction for the `which`-th smallest element of
/// `Λ_t`, centered at `y` (`|y| = t`), on the given induced graph.
pub fn synthesize(graph: &InducedGraph, t: u32, y: u64, which: usize) -> Result<EigenFunction> {
    let (n, r1, r2) = (graph.n(), graph.r1(), graph.r2());
    let basis = build_basis(n, r1, r2, t, y)?;
    let op = OperatorAy::new(n, r1, r2, t)?;
    let lambdas = lambda_set(n, r1, r2, t)?;
    if which >= lambdas.len() {
        return Err(Error::InvalidIndex {
            index: which,
            len: lambdas.len(),
        });
    }
    let lambda = lambdas.values[which];

    let sym = op.symmetrized();
    let v_sym = sym.eigenvector(lambda);
    let mut coeffs: Vec<f64> = op
        .scaling()
        .iter()
        .zip(&v_sym)
        .map(|(d, v)| d * v)
        .collect();
    let first = coeffs[0];
    if first == 0.0 {
        return Err(Error::Internal(format!(
            "eigenvector of A_y at λ = {lambda} has zero first coordinate"
        )));
    }
    coeffs.iter_mut().for_each(|c| *c /= first);

    let t_star = basis.t_star();
    let class_values: Vec<Vec<f64>> = basis
        .spheres()
        .map(|i| {
            (0..=t)
                .map(|c| coeffs[(i - t_star) as usize] * basis.value_f64(i, c))
                .collect()
        })
        .collect();

    let mut values = vec![0.0; graph.vertex_count()];
    for i in basis.spheres() {
        let row = &class_values[(i - t_star) as usize];
        for idx in graph.sphere(i) {
            values[idx] = row[(graph.vertex(idx) & y).count_ones() as usize];
        }
    }

    let ag = graph.apply(&values);
    let dev = ag
        .iter()
        .zip(&values)
        .map(|(a, g)| (a - lambda * g).abs())
        .fold(0.0, f64::max);
    let residual = dev / linalg::max_abs(&values);
    if residual.is_nan() || residual > SYNTH_TOL {
        return Err(Error::Internal(format!(
            "eigenfunction residual {residual:e} at λ = {lambda} exceeds {SYNTH_TOL:e}"
        )));
    }
    Ok(EigenFunction {
        n,
        r1,
        r2,
        t,
        y,
        lambda,
        coeffs,
        values,
        residual,
        class_values,
    })
}

/// `g_z` on `S(n,i)`: the indicator of `z ⊆ x`, in ascending mask order.
pub fn g_z(n: u32, i: u32, z: u64) -> Vec<f64> {
    masks_of_weight(n, i)
        .into_iter()
        .map(|x| if x & z == z { 1.0 } else { 0.0 })
        .collect()
}

/// Outcome of [`check_eigenspace_membership`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipReport {
    /// Largest `|<f, g_z>| / (‖f‖ ‖g_z‖)` over `|z| < t`.
    pub max_relative_inner: f64,
    /// Distance from `f` to `span{g_z : |z| <= t}`, relative to `‖f‖`.
    pub relative_residual: f64,
    pub orthogonal: bool,
    pub in_span: bool,
}

impl MembershipReport {
    pub fn holds(&self) -> bool {
        self.orthogonal && self.in_span
    }
}

/// The subspaces of functions on `S(n,i)` that define `V_t`, precomputed
/// for repeated membership tests.
#[derive(Debug, Clone)]
pub struct EigenspaceTest {
    pub n: u32,
    pub i: u32,
    pub t: u32,
    /// `g_z` for `|z| < t`, with their norms.
    lower: Vec<(Vec<f64>, f64)>,
    /// Orthonormal basis of `U_t`.
    u_t: Vec<Vec<f64>>,
}

impl EigenspaceTest {
    pub fn new(n: u32, i: u32, t: u32) -> Result<Self> {
        if n > 64 || i > n {
            return Err(invalid(format!("no sphere S({n},{i})")));
        }
        if t > i {
            return Err(invalid(format!("t = {t} exceeds the sphere index {i}")));
        }
        let mut lower = Vec::new();
        let mut all = Vec::new();
        for k in 0..=t {
            for z in masks_of_weight(n, k) {
                let g = g_z(n, i, z);
                if k < t {
                    let gn = linalg::norm(&g);
                    lower.push((g.clone(), gn));
                }
                all.push(g);
            }
        }
        let u_t = linalg::orthonormal_basis(&all, 1e-10);
        Ok(Self {
            n,
            i,
            t,
            lower,
            u_t,
        })
    }

    pub fn sphere_size(&self) -> usize {
        binomial_u128(self.n, self.i as i64)
            .unwrap_or(u128::MAX)
            .min(usize::MAX as u128) as usize
    }

    /// Tests `f` (over `S(n,i)` in ascending mask order).
    pub fn check(&self, f: &[f64]) -> Result<MembershipReport> {
        let size = self.sphere_size();
        if size != f.len() {
            return Err(Error::DimensionMismatch {
                expected: size,
                got: f.len(),
            });
        }
        let fnorm = linalg::norm(f);
        if fnorm == 0.0 {
            return Ok(MembershipReport {
                max_relative_inner: 0.0,
                relative_residual: 0.0,
                orthogonal: true,
                in_span: true,
            });
        }
        let max_relative_inner = self
            .lower
            .iter()
            .filter(|(_, gn)| *gn > 0.0)
            .map(|(g, gn)| linalg::dot(f, g).abs() / (fnorm * gn))
            .fold(0.0, f64::max);
        let relative_residual = linalg::projection_residual(&self.u_t, f) / fnorm;
        Ok(MembershipReport {
            max_relative_inner,
            relative_residual,
            orthogonal: max_relative_inner <= ORTHO_TOL,
            in_span: relative_residual <= SPAN_TOL,
        })
    }
}

/// Tests whether `f` (over `S(n,i)` in ascending mask order) lies in the
/// `t`-th eigenspace `V_t = U_t ∩ U_{t-1}^⊥` of the sphere, where `U_j` is the
/// span of the `g_z` with `|z| <= j`.
pub fn check_eigenspace_membership(n: u32, i: u32, t: u32, f: &[f64]) -> Result<MembershipReport> {
    EigenspaceTest::new(n, i, t)?.check(f)
}

/// Outcome of [`check_zonal_uniqueness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZonalReport {
    pub n: u32,
    pub i: u32,
    pub t: u32,
    /// Number of nonempty intersection classes `B_0, ..., B_t`.
    pub classes: usize,
    /// Rank of the constraints `<h, g_z> = 0`, `|z| < t`, on class space.
    pub constraint_rank: usize,
    /// `dim(S_{y,i} ∩ V_t)`.
    pub dimension: usize,
    /// Whether every class indicator lies in `U_t`.
    pub classes_in_u_t: bool,
}

/// Computes `dim(S_{y,i} ∩ V_t)` for `y = {0, ..., t-1}` by explicit linear
/// algebra on `S(n,i)`: semi-symmetric functions are spanned by the class
/// indicators, and membership in `V_t` amounts to lying in `U_t` and being
/// orthogonal to every `g_z` with `|z| < t`.
pub fn check_zonal_uniqueness(n: u32, i: u32, t: u32, limits: &Limits) -> Result<ZonalReport> {
    if n > 64 || 2 * i > n || t > i {
        return Err(invalid(format!(
            "need t <= i <= n/2, got n={n}, i={i}, t={t}"
        )));
    }
    let size = binomial_u128(n, i as i64).unwrap_or(u128::MAX);
    if size > limits.dense_limit as u128 {
        return Err(Error::BudgetExceeded {
            vertex_count: size,
            limit: limits.dense_limit as u128,
        });
    }
    let y: u64 = if t == 0 { 0 } else { u64::MAX >> (64 - t) };
    let masks = masks_of_weight(n, i);
    let indicators: Vec<Vec<f64>> = (0..=t)
        .map(|c| {
            masks
                .iter()
                .map(|x| if (x & y).count_ones() == c { 1.0 } else { 0.0 })
                .collect::<Vec<f64>>()
        })
        .filter(|v| v.iter().any(|&e| e != 0.0))
        .collect();

    let mut lower = Vec::new();
    let mut all = Vec::new();
    for k in 0..=t {
        for z in masks_of_weight(n, k) {
            let g = g_z(n, i, z);
            if k < t {
                lower.push(g.clone());
            }
            all.push(g);
        }
    }
    let u_t = linalg::orthonormal_basis(&all, 1e-10);
    let classes_in_u_t = indicators
        .iter()
        .all(|v| linalg::projection_residual(&u_t, v) <= SPAN_TOL * linalg::norm(v));

    // Constraint matrix in class coordinates, one column per class.
    let columns: Vec<Vec<f64>> = indicators
        .iter()
        .map(|v| {
            let scale = linalg::norm(v);
            lower.iter().map(|g| linalg::dot(g, v) / scale).collect()
        })
        .collect();
    let constraint_rank = if lower.is_empty() {
        0
    } else {
        let rows: Vec<Vec<f64>> = (0..lower.len())
            .map(|r| columns.iter().map(|col| col[r]).collect())
            .collect();
        linalg::numeric_rank(&rows, 1e-9)
    };
    Ok(ZonalReport {
        n,
        i,
        t,
        classes: indicators.len(),
        constraint_rank,
        dimension: indicators.len() - constraint_rank,
        classes_in_u_t,
    })
}
