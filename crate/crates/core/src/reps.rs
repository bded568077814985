//! Numeric irreducible representations of the three-generator presentation
//! at `A = exp(iπ/N)`, `N` odd, built from classical shadow data.

use std::f64::consts::PI;

use nalgebra::DMatrix;
pub use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::{chebyshev_with, evaluate};
use crate::error::{Error, Result};
use crate::freealg::{presentation, PresentationId, SkeinElem};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance used by the sampler's rejection tests.
pub const SAMPLE_TOL: f64 = 1e-8;
/// Resample budget of [`sample_shadow`].
pub const RESAMPLE_BUDGET: usize = 1000;

mod cpx {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

mod cmat {
    use super::CMatrix;
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("matrix must be square"));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
    }
}

/// Classical shadow data together with the choices needed to build a
/// representation: `x` with `x^N + x^-N = t3` and a square root of `v1 v2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShadowData {
    pub n: usize,
    #[serde(with = "cpx")]
    pub t1: Complex64,
    #[serde(with = "cpx")]
    pub t2: Complex64,
    #[serde(with = "cpx")]
    pub t3: Complex64,
    #[serde(with = "cpx")]
    pub d0: Complex64,
    #[serde(with = "cpx")]
    pub d1: Complex64,
    #[serde(with = "cpx")]
    pub v1: Complex64,
    #[serde(with = "cpx")]
    pub v2: Complex64,
    #[serde(with = "cpx")]
    pub x: Complex64,
    #[serde(with = "cpx")]
    pub sqrt_v: Complex64,
}

impl ShadowData {
    /// `A = exp(iπ/N)`, a primitive `N`-th root of `-1`.
    pub fn a(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI / self.n as f64)
    }

    /// Evaluation point `(A^(1/2), v1, v2, v3, d0, d1)` with `v3 = 1`.
    pub fn point(&self) -> [Complex64; 6] {
        [
            Complex64::from_polar(1.0, PI / (2 * self.n) as f64),
            self.v1,
            self.v2,
            Complex64::new(1.0, 0.0),
            self.d0,
            self.d1,
        ]
    }

    /// Same shadow with `x` replaced by `x^-1`.
    pub fn with_inverse_x(&self) -> Self {
        Self { x: self.x.inv(), ..self.clone() }
    }

    /// Same shadow with the other square root of `v1 v2`.
    pub fn with_other_sqrt(&self) -> Self {
        Self { sqrt_v: -self.sqrt_v, ..self.clone() }
    }
}

/// `T_N` of a complex number.
pub fn cheb(n: usize, z: Complex64) -> Complex64 {
    chebyshev_with(n as u32, &z, &Complex64::new(1.0, 0.0), false, |a, b| a * b, |a, b| a - b)
}

/// Eigenvalues `λ_k`, the scalars `P_k`, `E_k` and the corner scalar `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderData {
    pub lambda: Vec<Complex64>,
    pub p: Vec<Complex64>,
    pub e: Vec<Complex64>,
    pub u: Complex64,
}

/// Ladder data for `k = 1..N` (stored at index `k - 1`).
pub fn ladder(s: &ShadowData) -> LadderData {
    let a = s.a();
    let x = s.x;
    let vv = s.v1 * s.v2;
    let mut lambda = Vec::with_capacity(s.n);
    let mut p = Vec::with_capacity(s.n);
    let mut e = Vec::with_capacity(s.n);
    for k in 1..=s.n as i32 {
        let l = x * a.powi(2 * k) + x.inv() * a.powi(-2 * k);
        let pk = 2.0 + s.d0 * s.d1 + (s.d0 + s.d1) * (l - x.inv() * a.powi(-2 * k) * (a + a.inv()));
        let ek = -(pk + x * x * a.powi(4 * k + 2) + (x * x).inv() * a.powi(-4 * k - 2)) / vv;
        lambda.push(l);
        p.push(pk);
        e.push(ek);
    }
    let u = -(s.t1 + x.powi(s.n as i32) * s.t2) / s.sqrt_v.powi(s.n as i32);
    LadderData { lambda, p, e, u }
}

/// Per-condition admissibility verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    /// `min |t3 ∓ 2|`.
    pub t3_gap: f64,
    /// `|t1^2 + t2^2 + t1 t2 t3|`.
    pub character: f64,
    /// `|T_N(2 - d0^2) - 2 + t1^2 + t2^2 + t3^2 + t1 t2 t3|`.
    pub puncture: f64,
    /// `|d0 + d1|`.
    pub boundary: f64,
    /// `|x^N + x^-N - t3|`.
    pub x_choice: f64,
    /// `min_k |E_k|`.
    pub e_min: f64,
    #[serde(with = "cpx")]
    pub e_product: Complex64,
    pub admissible: bool,
}

pub fn check_admissibility(s: &ShadowData, tol: f64) -> Admissibility {
    let (t1, t2, t3) = (s.t1, s.t2, s.t3);
    let two = Complex64::new(2.0, 0.0);
    let ld = ladder(s);
    let t3_gap = (t3 - two).norm().min((t3 + two).norm());
    let character = (t1 * t1 + t2 * t2 + t1 * t2 * t3).norm();
    let puncture = (cheb(s.n, two - s.d0 * s.d0) - two + t1 * t1 + t2 * t2 + t3 * t3 + t1 * t2 * t3).norm();
    let boundary = (s.d0 + s.d1).norm();
    let xn = s.x.powi(s.n as i32);
    let x_choice = (xn + xn.inv() - t3).norm();
    let e_min = ld.e.iter().map(|e| e.norm()).fold(f64::INFINITY, f64::min);
    let e_product = ld.e.iter().product();
    let admissible =
        t3_gap > tol && character > tol && puncture < tol && boundary < tol && x_choice < tol && e_min > tol;
    Admissibility { t3_gap, character, puncture, boundary, x_choice, e_min, e_product, admissible }
}

fn random_in_box(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn random_in_annulus(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..2.0 * PI))
}

/// Draws admissible shadow data deterministically from `seed`.
pub fn sample_shadow(n: usize, seed: u64) -> Result<ShadowData> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("N must be odd and at least 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = Complex64::new(2.0, 0.0);
    for _ in 0..RESAMPLE_BUDGET {
        let d0 = random_in_box(&mut rng, 1.5);
        // |x| away from 1 keeps x^N away from ±1, so t3 stays away from ±2
        let modulus = rng.gen_range(1.05f64..1.3).powf(if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
        let x = Complex64::from_polar(modulus, rng.gen_range(0.0..2.0 * PI));
        let xn = x.powi(n as i32);
        let t3 = xn + xn.inv();
        let t1 = random_in_box(&mut rng, 1.5);
        let v1 = random_in_annulus(&mut rng, 0.7, 1.4);
        let v2 = random_in_annulus(&mut rng, 0.7, 1.4);
        // t2^2 + t1 t3 t2 + (t1^2 + t3^2 - 2 + T_N(2 - d0^2)) = 0
        let b = t1 * t3;
        let c = t1 * t1 + t3 * t3 - two + cheb(n, two - d0 * d0);
        let disc = (b * b - 4.0 * c).sqrt();
        let t2 = if rng.gen_bool(0.5) { (-b + disc) / 2.0 } else { (-b - disc) / 2.0 };
        let s = ShadowData { n, t1, t2, t3, d0, d1: -d0, v1, v2, x, sqrt_v: (v1 * v2).sqrt() };
        if check_admissibility(&s, SAMPLE_TOL).admissible {
            return Ok(s);
        }
    }
    Err(Error::ResampleBudget(RESAMPLE_BUDGET))
}

/// Images of `β`, `α`, `γ` in the basis `v_1..v_N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepMatrices {
    #[serde(with = "cmat")]
    pub beta: CMatrix,
    #[serde(with = "cmat")]
    pub alpha: CMatrix,
    #[serde(with = "cmat")]
    pub gamma: CMatrix,
}

impl RepMatrices {
    pub fn dim(&self) -> usize {
        self.gamma.nrows()
    }

    /// Matrices in the alphabet order `b, a, g`.
    pub fn generators(&self) -> [&CMatrix; 3] {
        [&self.beta, &self.alpha, &self.gamma]
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &RepMatrices) -> RepMatrices {
        let sum = |x: &CMatrix, y: &CMatrix| {
            let (n, m) = (x.nrows(), y.nrows());
            let mut out = CMatrix::zeros(n + m, n + m);
            out.view_mut((0, 0), (n, n)).copy_from(x);
            out.view_mut((n, n), (m, m)).copy_from(y);
            out
        };
        RepMatrices {
            beta: sum(&self.beta, &other.beta),
            alpha: sum(&self.alpha, &other.alpha),
            gamma: sum(&self.gamma, &other.gamma),
        }
    }
}

/// Assembles `ρ(β)`, `ρ(α)`, `ρ(γ)` from the ladder formulas.
pub fn build_rep(s: &ShadowData) -> Result<RepMatrices> {
    let n = s.n;
    let ld = ladder(s);
    for i in 0..n {
        for j in 0..i {
            if (ld.lambda[i] - ld.lambda[j]).norm() < SAMPLE_TOL {
                return Err(Error::InvalidArgument(format!("eigenvalues λ_{} and λ_{} coincide", j + 1, i + 1)));
            }
        }
    }
    let a = s.a();
    let x = s.x;
    let zero = Complex64::new(0.0, 0.0);
    let mut beta = CMatrix::from_element(n, n, zero);
    let mut alpha = CMatrix::from_element(n, n, zero);
    let gamma = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(ld.lambda.clone()));
    for k in 1..=n {
        let col = k - 1;
        let kk = k as i32;
        let delta = x * a.powi(2 * kk) - x.inv() * a.powi(-2 * kk);
        // U_k v_k and D_k v_k as (row, scalar)
        let up = if k < n { (k, Complex64::new(1.0, 0.0)) } else { (0, ld.u) };
        let down = if k > 1 { (k - 2, ld.e[k - 2]) } else { (n - 1, ld.e[n - 1] / ld.u) };
        let hu = -x.inv() * a.powi(-2 * kk - 1) / delta;
        let hd = x * a.powi(2 * kk - 1) / delta;
        beta[(up.0, col)] += hu * up.1;
        beta[(down.0, col)] += hd * down.1;
        alpha[(up.0, col)] += -up.1 / delta;
        alpha[(down.0, col)] += down.1 / delta;
    }
    Ok(RepMatrices { beta, alpha, gamma })
}

/// Spectral norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().max()
}

/// Evaluates an element of the three-generator presentation on matrices.
pub fn eval_on(x: &SkeinElem, m: &RepMatrices, point: &[Complex64; 6]) -> CMatrix {
    let n = m.dim();
    let gens = m.generators();
    let mut out = CMatrix::zeros(n, n);
    for (w, c) in x.terms() {
        let mut prod = CMatrix::identity(n, n);
        for &l in w {
            prod *= gens[l as usize];
        }
        out += prod * evaluate(c, point);
    }
    out
}

fn mat_cheb(n: usize, x: &CMatrix) -> CMatrix {
    let id = CMatrix::identity(x.nrows(), x.ncols());
    chebyshev_with(n as u32, x, &id, false, |a, b| a * b, |a, b| a - b)
}

/// Dimension of the joint null space of `X_g M - M Y_g` over the generators.
fn intertwiner_space(x: &RepMatrices, y: &RepMatrices) -> (usize, Option<CMatrix>) {
    let (n, m) = (x.dim(), y.dim());
    let mut k = CMatrix::zeros(3 * n * m, n * m);
    for (g, (xg, yg)) in x.generators().iter().zip(y.generators()).enumerate() {
        // vec(X M - M Y) = (I ⊗ X - Y^T ⊗ I) vec(M), column-major
        let block = CMatrix::identity(m, m).kronecker(*xg) - yg.transpose().kronecker(&CMatrix::identity(n, n));
        k.view_mut((g * n * m, 0), (n * m, n * m)).copy_from(&block);
    }
    let svd = k.svd(false, true);
    let smax = svd.singular_values.max().max(1.0);
    let v_t = svd.v_t.expect("requested");
    let mut null = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s < 1e-9 * smax {
            null.push(i);
        }
    }
    // thin SVD: columns beyond the row count are automatically null
    let dim = null.len() + (n * m).saturating_sub(svd.singular_values.len());
    let sample = null.first().map(|&i| {
        let row = v_t.row(i);
        CMatrix::from_fn(n, m, |r, c| row[c * n + r].conj())
    });
    (dim, sample)
}

/// Residuals and invariants of a candidate representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepReport {
    /// `(relation name, spectral norm of lhs - rhs)`.
    pub relations: Vec<(String, f64)>,
    /// `‖T_N(√(v1 v2) ρ(β)) - t1‖`, `‖T_N(√(v1 v2) ρ(α)) - t2‖`, `‖T_N(ρ(γ)) - t3‖`.
    pub central: [f64; 3],
    pub commutant_dim: usize,
    pub irreducible: bool,
    /// Shadow recovered from the matrices: `t1, t2, t3, d0 + d1, d0 d1`.
    #[serde(with = "recovered")]
    pub recovered: [Complex64; 5],
}

mod recovered {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &[Complex64; 5], s: S) -> Result<S::Ok, S::Error> {
        z.map(|c| [c.re, c.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex64; 5], D::Error> {
        Ok(<[[f64; 2]; 5]>::deserialize(d)?.map(|[re, im]| Complex64::new(re, im)))
    }
}

impl RepReport {
    pub fn max_relation(&self) -> f64 {
        self.relations.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn max_central(&self) -> f64 {
        self.central.iter().copied().fold(0.0, f64::max)
    }
}

pub fn verify_rep(m: &RepMatrices, s: &ShadowData) -> Result<RepReport> {
    let n = m.dim();
    if m.generators().iter().any(|g| g.nrows() != n || g.ncols() != n) {
        return Err(Error::DimensionMismatch("generator matrices differ in size".into()));
    }
    let sys = presentation(PresentationId::Ry022ThreeGen);
    let point = s.point();
    let relations =
        sys.relations().iter().map(|r| (r.name.clone(), op_norm(&eval_on(&r.residue(), m, &point)))).collect();
    let id = CMatrix::identity(n, n);
    let cb = mat_cheb(s.n, &(&m.beta * s.sqrt_v));
    let ca = mat_cheb(s.n, &(&m.alpha * s.sqrt_v));
    let cg = mat_cheb(s.n, &m.gamma);
    let central =
        [op_norm(&(&cb - &id * s.t1)), op_norm(&(&ca - &id * s.t2)), op_norm(&(&cg - &id * s.t3))];
    let (commutant_dim, _) = intertwiner_space(m, m);
    let recovered = recover_shadow(m, s);
    Ok(RepReport { relations, central, commutant_dim, irreducible: commutant_dim == 1, recovered })
}

fn scalar_part(m: &CMatrix) -> Complex64 {
    m.trace() / m.nrows() as f64
}

/// Reads `t1, t2, t3, d0 + d1, d0 d1` off the matrices.
pub fn recover_shadow(m: &RepMatrices, s: &ShadowData) -> [Complex64; 5] {
    let a = s.a();
    let vv = s.v1 * s.v2;
    let (b, al, g) = (&m.beta, &m.alpha, &m.gamma);
    let t1 = scalar_part(&mat_cheb(s.n, &(b * s.sqrt_v)));
    let t2 = scalar_part(&mat_cheb(s.n, &(al * s.sqrt_v)));
    let t3 = scalar_part(&mat_cheb(s.n, g));
    // v1 v2 (A βα - A^-1 αβ) - (A^2 - A^-2) γ = (A - A^-1)(d0 + d1)
    let lhs1 = (b * al * a - al * b * a.inv()) * vv - g * (a * a - a.inv() * a.inv());
    let sum = scalar_part(&lhs1) / (a - a.inv());
    // v1 v2 A βαγ - v1 v2 A^2 β^2 - v1 v2 A^-2 α^2 - A^2 γ^2 - A γ (d0 + d1) + (A - A^-1)^2 = d0 d1
    let lhs4 = b * al * g * (vv * a) - b * b * (vv * a * a) - al * al * (vv * a.inv() * a.inv()) - g * g * (a * a)
        - g * (a * sum);
    let prod = scalar_part(&lhs4) + (a - a.inv()) * (a - a.inv());
    [t1, t2, t3, sum, prod]
}

/// Outcome of comparing two representations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equivalence {
    /// Longest word length whose traces were compared.
    pub word_length: usize,
    /// Largest relative trace difference.
    pub trace_gap: f64,
    /// Dimension of the space of intertwiners.
    pub intertwiner_dim: usize,
    pub equivalent: bool,
}

/// Longest word length used by [`equivalence_check`].
pub const MAX_TRACE_WORD: usize = 8;

/// Compares traces of all words of length `<= min(2N, 8)` and looks for an
/// invertible intertwiner.
pub fn equivalence_check(m1: &RepMatrices, m2: &RepMatrices) -> Equivalence {
    let n = m1.dim();
    if n != m2.dim() {
        return Equivalence { word_length: 0, trace_gap: f64::INFINITY, intertwiner_dim: 0, equivalent: false };
    }
    let word_length = (2 * n).min(MAX_TRACE_WORD);
    let mut gap = 0.0f64;
    let mut stack = vec![(CMatrix::identity(n, n), CMatrix::identity(n, n), 0usize)];
    while let Some((p1, p2, len)) = stack.pop() {
        let (t1, t2) = (p1.trace(), p2.trace());
        gap = gap.max((t1 - t2).norm() / t1.norm().max(1.0));
        if len < word_length {
            for (g1, g2) in m1.generators().iter().zip(m2.generators()) {
                stack.push((&p1 * *g1, &p2 * g2, len + 1));
            }
        }
    }
    let (intertwiner_dim, sample) = intertwiner_space(m1, m2);
    let invertible = sample.is_some_and(|t| {
        let sv = t.singular_values();
        sv.min() > 1e-8 * sv.max()
    });
    let equivalent = gap < 1e-7 && intertwiner_dim >= 1 && invertible;
    Equivalence { word_length, trace_gap: gap, intertwiner_dim, equivalent }
}
