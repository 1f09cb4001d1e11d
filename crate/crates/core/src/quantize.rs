//! The quantization target: dense complex matrices, Heisenberg-Weyl
//! displacement operators, the discrete Weyl transform and its inverse,
//! metaplectic unitaries for symplectic matrices, quadrature projector-valued
//! measures, stabilizer projectors, discrete Wigner functions, and the
//! operational-equivalence comparator against the exact toy theory.
//!
//! Conventions, fixed once: `omega = exp(2 pi i / d)`, `Z|q> = omega^q |q>`,
//! `X|q> = |q+1>`, `D(a, b) = omega^{-inv2 a b} X^a Z^b` per mode. The kernel
//! normalization is `C = 1/d`, pinned by requiring the constant function 1 to
//! map to the identity. Global phases of unitaries are canonicalized by
//! making the first nonzero entry real positive.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epistricted::{canonical_valuations, enumerate_pure_states_guarded, measure, to_ontic, EpistemicState, EpistrictedError};
use crate::fplinalg::{
    enumerate_lagrangians_guarded, symplectic_completion, symplectic_form, FpError, FpMatrix,
    FpSubspace, FpVector, PrimeField,
};
use crate::ENUMERATION_GUARD;

/// Default tolerance for floating-point predicates and equality.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantizeError {
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    Epistricted(#[from] EpistrictedError),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("zero functional has no quadrature observable")]
    ZeroFunctional,
    #[error("subspace is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("unsupported multi-mode input: {0}")]
    UnsupportedMultiMode(String),
    #[error("constructed projectors fail to commute (deviation {0:.2e})")]
    NonCommutingProjectors(f64),
    #[error("json: {0}")]
    Json(String),
}

// ---------------------------------------------------------------------------
// Complex matrices
// ---------------------------------------------------------------------------

/// A dense square complex matrix with a tolerance for approximate predicates.
#[derive(Debug, Clone)]
pub struct CMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    tol: f64,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, entries: vec![Complex64::ZERO; dim * dim], tol: DEFAULT_TOL }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        CMatrix { dim, entries, tol: DEFAULT_TOL }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.entries[r * self.dim + c] = z;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim, "matrix dimensions must agree");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        out.tol = self.tol.max(other.tol);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        CMatrix { dim: self.dim, entries, tol: self.tol.max(other.tol) }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        CMatrix { dim: self.dim, entries, tol: self.tol.max(other.tol) }
    }

    pub fn scale(&self, z: Complex64) -> CMatrix {
        let entries = self.entries.iter().map(|a| a * z).collect();
        CMatrix { dim: self.dim, entries, tol: self.tol }
    }

    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim);
        out.tol = self.tol;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.entries[c * self.dim + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn pow(&self, mut k: usize) -> CMatrix {
        let mut acc = CMatrix::identity(self.dim).with_tol(self.tol);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= self.tol.max(other.tol)
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_abs_diff(&self.dagger()) <= self.tol
    }

    pub fn is_unitary(&self) -> bool {
        self.mul(&self.dagger()).max_abs_diff(&CMatrix::identity(self.dim)) <= self.tol
    }

    pub fn is_projector(&self) -> bool {
        self.is_hermitian() && self.mul(self).max_abs_diff(self) <= self.tol
    }

    /// Rank of a projector, read off the trace.
    pub fn projector_rank(&self) -> usize {
        self.trace().re.round() as usize
    }

    /// Scales by a global phase so the first entry of modulus above the
    /// tolerance becomes real positive.
    pub fn canonical_phase(&self) -> CMatrix {
        for z in &self.entries {
            if z.norm() > self.tol.max(1e-12) {
                return self.scale(z.conj() / z.norm());
            }
        }
        self.clone()
    }

    /// Commutator deviation `max |AB - BA|`.
    pub fn commutator_norm(&self, other: &CMatrix) -> f64 {
        self.mul(other).max_abs_diff(&other.mul(self))
    }
}

/// JSON schema for matrices: `{dim, entries as [re, im] row-major, tol}`.
#[derive(Serialize, Deserialize)]
struct CMatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
    tol: f64,
}

impl CMatrix {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CMatrixJson {
            dim: self.dim,
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
            tol: self.tol,
        })
        .expect("plain data serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CMatrix, QuantizeError> {
        let parsed: CMatrixJson =
            serde_json::from_value(v.clone()).map_err(|e| QuantizeError::Json(e.to_string()))?;
        if parsed.entries.len() != parsed.dim * parsed.dim {
            return Err(QuantizeError::Dimension(parsed.entries.len(), parsed.dim * parsed.dim));
        }
        Ok(CMatrix {
            dim: parsed.dim,
            entries: parsed.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
            tol: parsed.tol,
        })
    }
}

// ---------------------------------------------------------------------------
// Heisenberg-Weyl operators
// ---------------------------------------------------------------------------

/// The Heisenberg-Weyl system for `n` modes of dimension `d`: shift and clock
/// operators per mode and phase-space displacement operators.
pub struct WeylSystem {
    field: PrimeField,
    n: usize,
    omega_powers: Vec<Complex64>,
}

impl WeylSystem {
    pub fn new(field: PrimeField, n: usize) -> Self {
        let d = field.order();
        let omega_powers = (0..d)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64))
            .collect();
        WeylSystem { field, n, omega_powers }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        (self.field.order() as usize).pow(self.n as u32)
    }

    /// `omega^k` with the exponent reduced mod `d`.
    pub fn omega(&self, k: u64) -> Complex64 {
        self.omega_powers[(k % self.field.order()) as usize]
    }

    fn single_x_z(&self, a: u64, b: u64) -> CMatrix {
        // D_1(a, b) = omega^{inv2 a b} X^a Z^b on one mode; this sign makes
        // D(u)-dagger equal D(-u) and the cocycle a function of the
        // symplectic form alone
        let d = self.field.order() as usize;
        let phase = self.omega(self.field.mul(self.field.mul(self.field.inv2(), a), b));
        let mut m = CMatrix::zeros(d);
        for q in 0..d as u64 {
            // X^a Z^b |q> = omega^{b q} |q + a>
            let row = self.field.add(q, a) as usize;
            m.set(row, q as usize, phase * self.omega(self.field.mul(b, q)));
        }
        m
    }

    /// Shift operator on one mode, embedded at mode `i`.
    pub fn x(&self, i: usize) -> CMatrix {
        self.displacement(&FpVector::unit_q(self.field, self.n, i)).expect("unit vector")
    }

    /// Clock operator on one mode, embedded at mode `i`.
    pub fn z(&self, i: usize) -> CMatrix {
        self.displacement(&FpVector::unit_p(self.field, self.n, i)).expect("unit vector")
    }

    /// The displacement `D(u)` for a phase-space vector `u`; the tensor
    /// product of per-mode displacements.
    pub fn displacement(&self, u: &FpVector) -> Result<CMatrix, QuantizeError> {
        if u.modes() != self.n || u.field() != self.field {
            return Err(QuantizeError::Dimension(u.dim(), 2 * self.n));
        }
        let factors: Vec<CMatrix> = (0..self.n)
            .map(|i| self.single_x_z(u.coords()[2 * i], u.coords()[2 * i + 1]))
            .collect();
        Ok(tensor_modes(self.field, &factors))
    }
}

/// Tensor product over modes with the first mode as the fastest-varying
/// index, matching the little-endian position tuple encoding.
fn tensor_modes(field: PrimeField, factors: &[CMatrix]) -> CMatrix {
    let d = field.order() as usize;
    let n = factors.len();
    let dim = d.pow(n as u32);
    CMatrix::from_fn(dim, |r, c| {
        let mut acc = Complex64::ONE;
        let (mut rr, mut cc) = (r, c);
        for f in factors {
            acc *= f.get(rr % d, cc % d);
            if acc.norm_sqr() == 0.0 {
                return Complex64::ZERO;
            }
            rr /= d;
            cc /= d;
        }
        acc
    })
}

/// Embeds a single-mode operator at mode `i` of an `n`-mode system.
fn embed_at_mode(field: PrimeField, op: &CMatrix, i: usize, n: usize) -> CMatrix {
    let d = field.order() as usize;
    let dim = d.pow(n as u32);
    let stride = d.pow(i as u32);
    CMatrix::from_fn(dim, |r, c| {
        let (ri, ci) = (r / stride % d, c / stride % d);
        if r - ri * stride == c - ci * stride {
            op.get(ri, ci)
        } else {
            Complex64::ZERO
        }
    })
}

// ---------------------------------------------------------------------------
// Phase-space functions, Weyl transform and symbol
// ---------------------------------------------------------------------------

/// A complex function on the phase space `Z_d^{2n}`, indexed like ontic
/// distributions (little-endian over the interleaved coordinates).
#[derive(Debug, Clone)]
pub struct PhaseFn {
    field: PrimeField,
    n: usize,
    values: Vec<Complex64>,
}

impl PhaseFn {
    pub fn new(field: PrimeField, n: usize, values: Vec<Complex64>) -> Result<Self, QuantizeError> {
        let size = (field.order() as usize).pow(2 * n as u32);
        if values.len() != size {
            return Err(QuantizeError::Dimension(values.len(), size));
        }
        Ok(PhaseFn { field, n, values })
    }

    pub fn constant(field: PrimeField, n: usize, z: Complex64) -> Self {
        let size = (field.order() as usize).pow(2 * n as u32);
        PhaseFn { field, n, values: vec![z; size] }
    }

    /// Indicator of a set of phase points.
    pub fn indicator(field: PrimeField, n: usize, points: &[FpVector]) -> Self {
        let mut f = PhaseFn::constant(field, n, Complex64::ZERO);
        for m in points {
            f.values[field.point_index(m.coords())] = Complex64::ONE;
        }
        f
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at the phase point with position tuple `x` and momentum tuple `b`.
    pub fn at(&self, x: &[u64], b: &[u64]) -> Complex64 {
        let mut coords = Vec::with_capacity(2 * self.n);
        for i in 0..self.n {
            coords.push(x[i]);
            coords.push(b[i]);
        }
        self.values[self.field.point_index(&coords)]
    }

    pub fn max_abs_diff(&self, other: &PhaseFn) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn position_tuples(field: PrimeField, n: usize) -> Vec<Vec<u64>> {
    let d = field.order() as usize;
    (0..d.pow(n as u32)).map(|idx| field.point_from_index(idx, n)).collect()
}

/// The discrete Weyl (Fourier) transform: maps a phase-space function to the
/// operator with matrix elements
/// `M[x][y] = (1/d^n) sum_b f((x + y)/2, b) omega^{b . (x - y)}`.
///
/// The normalization `1/d^n` is pinned by `weyl_transform(1) = I`.
pub fn weyl_transform(f: &PhaseFn) -> CMatrix {
    let field = f.field;
    let d = field.order();
    let n = f.n;
    let tuples = position_tuples(field, n);
    let ws = WeylSystem::new(field, n);
    let denom = (d as f64).powi(n as i32);
    let dim = tuples.len();
    let mut m = CMatrix::zeros(dim);
    for (r, x) in tuples.iter().enumerate() {
        for (c, y) in tuples.iter().enumerate() {
            let mid: Vec<u64> = (0..n)
                .map(|i| field.mul(field.inv2(), field.add(x[i], y[i])))
                .collect();
            let mut acc = Complex64::ZERO;
            for b in &tuples {
                let mut phase = 0u64;
                for i in 0..n {
                    phase = field.add(phase, field.mul(b[i], field.sub(x[i], y[i])));
                }
                acc += f.at(&mid, b) * ws.omega(phase);
            }
            m.set(r, c, acc / denom);
        }
    }
    m
}

/// The Weyl symbol, exact inverse of [`weyl_transform`]:
/// `f(x, b) = sum_t omega^{-b . t} M[x + t/2][x - t/2]`.
pub fn weyl_symbol(m: &CMatrix, field: PrimeField, n: usize) -> Result<PhaseFn, QuantizeError> {
    let d = field.order();
    let dim = (d as usize).pow(n as u32);
    if m.dim() != dim {
        return Err(QuantizeError::Dimension(m.dim(), dim));
    }
    let tuples = position_tuples(field, n);
    let ws = WeylSystem::new(field, n);
    let size = (d as usize).pow(2 * n as u32);
    let mut values = vec![Complex64::ZERO; size];
    for x in &tuples {
        for b in &tuples {
            let mut acc = Complex64::ZERO;
            for t in &tuples {
                let mut phase = 0u64;
                let mut plus = Vec::with_capacity(n);
                let mut minus = Vec::with_capacity(n);
                for i in 0..n {
                    phase = field.add(phase, field.mul(b[i], t[i]));
                    let half = field.mul(field.inv2(), t[i]);
                    plus.push(field.add(x[i], half));
                    minus.push(field.sub(x[i], half));
                }
                let r = field.point_index(&plus);
                let c = field.point_index(&minus);
                acc += ws.omega(field.neg(phase)) * m.get(r, c);
            }
            let mut coords = Vec::with_capacity(2 * n);
            for i in 0..n {
                coords.push(x[i]);
                coords.push(b[i]);
            }
            values[field.point_index(&coords)] = acc;
        }
    }
    PhaseFn::new(field, n, values)
}

/// The discrete Wigner function: the Weyl symbol scaled by `1/d^n`, so that
/// the values sum to the trace.
pub fn wigner(m: &CMatrix, field: PrimeField, n: usize) -> Result<PhaseFn, QuantizeError> {
    let sym = weyl_symbol(m, field, n)?;
    let denom = (field.order() as f64).powi(n as i32);
    let values = sym.values.iter().map(|z| z / denom).collect();
    PhaseFn::new(field, n, values)
}

/// Wigner table as a CSV grid: rows are position values ascending, columns
/// momentum values ascending (single mode).
pub fn wigner_csv(w: &PhaseFn) -> Result<String, QuantizeError> {
    if w.modes() != 1 {
        return Err(QuantizeError::UnsupportedMultiMode("csv grid is single-mode".into()));
    }
    let d = w.field.order();
    let mut out = String::new();
    for x in 0..d {
        let row: Vec<String> = (0..d)
            .map(|b| {
                let v = w.at(&[x], &[b]);
                if v.im.abs() > 1e-12 {
                    format!("{:.12}{:+.12}i", v.re, v.im)
                } else {
                    format!("{:.12}", v.re)
                }
            })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Metaplectic representation
// ---------------------------------------------------------------------------

fn dft(field: PrimeField) -> CMatrix {
    let d = field.order() as usize;
    let ws = WeylSystem::new(field, 1);
    let norm = 1.0 / (d as f64).sqrt();
    CMatrix::from_fn(d, |j, k| ws.omega((j as u64) * (k as u64) % field.order()) * norm)
}

fn chirp(field: PrimeField, c: u64) -> CMatrix {
    let d = field.order() as usize;
    let ws = WeylSystem::new(field, 1);
    let mut m = CMatrix::zeros(d);
    for x in 0..d as u64 {
        let exp = field.mul(field.mul(field.inv2(), c), field.mul(x, x));
        m.set(x as usize, x as usize, ws.omega(exp));
    }
    m
}

fn scale_perm(field: PrimeField, a: u64) -> CMatrix {
    let d = field.order() as usize;
    let mut m = CMatrix::zeros(d);
    for x in 0..d as u64 {
        m.set(field.mul(a, x) as usize, x as usize, Complex64::ONE);
    }
    m
}

/// A unitary `U` with `U D(u) U^dag` proportional to `D(S u)` for every
/// displacement, for a single degree of freedom.
///
/// Deterministic construction: clear the lower-left entry with a shear (or a
/// fourier flip when the top-left entry vanishes), then split the remaining
/// triangle into a scaling and an upper shear. The global phase is
/// canonicalized; the identity matrix maps to the exact identity.
pub fn metaplectic(s: &FpMatrix) -> Result<CMatrix, QuantizeError> {
    if s.rows() != 2 || s.cols() != 2 {
        return Err(QuantizeError::UnsupportedMultiMode(
            "metaplectic construction is per-mode; factor multi-mode matrices".into(),
        ));
    }
    if !s.is_symplectic()? {
        return Err(QuantizeError::NotSymplectic);
    }
    let field = s.field();
    if *s == FpMatrix::identity(field, 2) {
        return Ok(CMatrix::identity(field.order() as usize));
    }
    let (alpha, gamma) = (s.get(0, 0), s.get(1, 0));
    let (tri, pre): (FpMatrix, Option<CMatrix>) = if gamma == 0 {
        (s.clone(), None)
    } else if alpha != 0 {
        // S = L_c T with c = gamma / alpha
        let c = field.mul(gamma, field.inv(alpha));
        let l_inv = FpMatrix::from_rows(field, &[&[1, 0], &[field.neg(c), 1]])?;
        (l_inv.mul(s)?, Some(chirp(field, c)))
    } else {
        // S = F^{-1} (F S), and F S is upper triangular when alpha = 0
        let f = FpMatrix::from_rows(field, &[&[0, field.neg(1)], &[1, 0]])?;
        (f.mul(s)?, Some(dft(field).dagger()))
    };
    // tri = [[a, b], [0, a^{-1}]] = P_a U_u with u = b / a
    debug_assert_eq!(tri.get(1, 0), 0);
    let a = tri.get(0, 0);
    let u = field.mul(field.inv(a), tri.get(0, 1));
    let f_hat = dft(field);
    let upper = f_hat.mul(&chirp(field, field.neg(u))).mul(&f_hat.dagger());
    let tri_unitary = scale_perm(field, a).mul(&upper);
    let result = match pre {
        Some(p) => p.mul(&tri_unitary),
        None => tri_unitary,
    };
    Ok(result.canonical_phase())
}

/// Metaplectic unitary for a block-diagonal (per-mode) symplectic matrix.
pub fn metaplectic_modes(blocks: &[FpMatrix]) -> Result<CMatrix, QuantizeError> {
    if blocks.is_empty() {
        return Err(QuantizeError::UnsupportedMultiMode("no modes given".into()));
    }
    let field = blocks[0].field();
    let factors: Vec<CMatrix> = blocks.iter().map(metaplectic).collect::<Result<_, _>>()?;
    Ok(tensor_modes(field, &factors))
}

// ---------------------------------------------------------------------------
// Projector-valued measures and stabilizer projectors
// ---------------------------------------------------------------------------

/// A projector-valued measure: outcome labels with their projectors.
#[derive(Debug, Clone)]
pub struct Pvm {
    labels: Vec<Vec<u64>>,
    projectors: Vec<CMatrix>,
}

impl Pvm {
    pub fn new(labels: Vec<Vec<u64>>, projectors: Vec<CMatrix>) -> Self {
        assert_eq!(labels.len(), projectors.len());
        Pvm { labels, projectors }
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn labels(&self) -> &[Vec<u64>] {
        &self.labels
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn projector_for(&self, label: &[u64]) -> Option<&CMatrix> {
        self.labels.iter().position(|l| l == label).map(|i| &self.projectors[i])
    }

    /// Checks idempotency, hermiticity, completeness and pairwise
    /// orthogonality; returns the worst deviation when all hold.
    pub fn validate(&self, tol: f64) -> Result<f64, QuantizeError> {
        let dim = self.projectors[0].dim();
        let mut worst: f64 = 0.0;
        let mut sum = CMatrix::zeros(dim);
        for p in &self.projectors {
            worst = worst.max(p.max_abs_diff(&p.dagger()));
            worst = worst.max(p.mul(p).max_abs_diff(p));
            sum = sum.add(p);
        }
        worst = worst.max(sum.max_abs_diff(&CMatrix::identity(dim)));
        for (i, p) in self.projectors.iter().enumerate() {
            for q in &self.projectors[i + 1..] {
                let prod = p.mul(q);
                worst = worst.max(prod.max_abs_diff(&CMatrix::zeros(dim)));
            }
        }
        if worst <= tol {
            Ok(worst)
        } else {
            Err(QuantizeError::NonCommutingProjectors(worst))
        }
    }
}

fn single_mode_part(f: &FpVector) -> Result<(usize, u64, u64), QuantizeError> {
    let n = f.modes();
    let mut found = None;
    for i in 0..n {
        let (a, b) = (f.coords()[2 * i], f.coords()[2 * i + 1]);
        if a != 0 || b != 0 {
            if found.is_some() {
                return Err(QuantizeError::UnsupportedMultiMode(format!(
                    "functional {f} mixes modes; only single-mode-supported functionals quantize directly"
                )));
            }
            found = Some((i, a, b));
        }
    }
    found.ok_or(QuantizeError::ZeroFunctional)
}

/// The quadrature observable for a nonzero functional `f`: the position PVM
/// conjugated by the metaplectic unitary of the completion `S_f`, with
/// outcome labels `[k]` for `k` in `Z_d`.
///
/// The result does not depend on the choice of completion: two completions
/// differ by a lower shear, whose chirp unitary is diagonal and fixes every
/// position projector.
pub fn quadrature_pvm(f: &FpVector) -> Result<Pvm, QuantizeError> {
    let field = f.field();
    let d = field.order() as usize;
    let n = f.modes();
    let (mode, a, b) = single_mode_part(f)?;
    let single = FpVector::new(field, vec![a, b])?;
    let s = symplectic_completion(&single)?;
    let v = metaplectic(&s)?;
    let mut labels = Vec::with_capacity(d);
    let mut projectors = Vec::with_capacity(d);
    for k in 0..d {
        let mut basis_proj = CMatrix::zeros(d);
        basis_proj.set(k, k, Complex64::ONE);
        let small = v.mul(&basis_proj).mul(&v.dagger());
        let proj = if n == 1 {
            small
        } else {
            embed_at_mode(field, &small, mode, n)
        };
        labels.push(vec![k as u64]);
        projectors.push(proj);
    }
    Ok(Pvm::new(labels, projectors))
}

/// The stabilizer projector `Pi_V(v)`: the product of the commuting
/// quadrature projectors over an echelon basis of the isotropic subspace
/// `V`, each at outcome `f^T v`. Rank `d^{n - dim V}`; the identity for the
/// zero subspace; rank one when `V` is Lagrangian.
pub fn stabilizer_projector(v_sub: &FpSubspace, v: &FpVector) -> Result<CMatrix, QuantizeError> {
    if !v_sub.is_isotropic() {
        return Err(QuantizeError::NotIsotropic(v_sub.to_string()));
    }
    let field = v_sub.field();
    let n = v_sub.ambient_dim() / 2;
    let dim = (field.order() as usize).pow(n as u32);
    let mut factors = Vec::new();
    for f in v_sub.basis() {
        let outcome = f.dot(v)?;
        let pvm = quadrature_pvm(f)?;
        factors.push(pvm.projector_for(&[outcome]).expect("outcome in range").clone());
    }
    // commuting product; commutation is asserted, not assumed
    let mut worst: f64 = 0.0;
    for (i, p) in factors.iter().enumerate() {
        for q in &factors[i + 1..] {
            worst = worst.max(p.commutator_norm(q));
        }
    }
    if worst > DEFAULT_TOL {
        return Err(QuantizeError::NonCommutingProjectors(worst));
    }
    let mut out = CMatrix::identity(dim);
    for p in &factors {
        out = out.mul(p);
    }
    Ok(out)
}

/// The maximal PVM of a Lagrangian (or any isotropic) subspace: one
/// stabilizer projector per canonical valuation class.
pub fn lagrangian_pvm(v_sub: &FpSubspace) -> Result<Pvm, QuantizeError> {
    let mut labels = Vec::new();
    let mut projectors = Vec::new();
    for valuation in canonical_valuations(v_sub) {
        projectors.push(stabilizer_projector(v_sub, &valuation)?);
        labels.push(valuation.coords().to_vec());
    }
    Ok(Pvm::new(labels, projectors))
}

/// Whether the quadrature observables of `f` and `g` commute as operators,
/// paired with whether the functionals are symplectically orthogonal. The
/// two answers agree; both are returned so the theorem stays checkable.
pub fn commutation_check(f: &FpVector, g: &FpVector) -> Result<(bool, bool), QuantizeError> {
    if f.is_zero() || g.is_zero() {
        return Err(QuantizeError::ZeroFunctional);
    }
    let pf = quadrature_pvm(f)?;
    let pg = quadrature_pvm(g)?;
    let mut worst: f64 = 0.0;
    for p in pf.projectors() {
        for q in pg.projectors() {
            worst = worst.max(p.commutator_norm(q));
        }
    }
    let commute = worst <= DEFAULT_TOL;
    let poisson = symplectic_form(f, g)? == 0;
    Ok((commute, poisson))
}

// ---------------------------------------------------------------------------
// Operational equivalence
// ---------------------------------------------------------------------------

/// Outcome of comparing the quantized theory against the exact toy theory.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub d: u64,
    pub n: usize,
    pub states: usize,
    pub observables: usize,
    pub born_cases: usize,
    /// Worst deviation between a stabilizer Wigner function and the exact
    /// ontic distribution.
    pub max_wigner_dev: f64,
    /// Worst deviation between a Born probability and the exact toy
    /// measurement probability.
    pub max_born_dev: f64,
    /// Smallest Wigner value encountered across all pure states.
    pub min_wigner: f64,
    pub tol: f64,
    pub pass: bool,
}

fn rational_to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// For every pure state, checks that the Wigner function of its stabilizer
/// projector equals the exact ontic distribution, and that every Born
/// probability against every Lagrangian observable equals the exact toy
/// measurement probability.
pub fn operational_equivalence_report(
    field: PrimeField,
    n: usize,
    tol: f64,
) -> Result<EquivalenceReport, QuantizeError> {
    operational_equivalence_report_guarded(field, n, tol, ENUMERATION_GUARD)
}

pub fn operational_equivalence_report_guarded(
    field: PrimeField,
    n: usize,
    tol: f64,
    guard: u64,
) -> Result<EquivalenceReport, QuantizeError> {
    let states = enumerate_pure_states_guarded(field, n, guard)?;
    let lagrangians = enumerate_lagrangians_guarded(field, n, guard)?;
    let observables: Vec<(FpSubspace, Pvm)> = lagrangians
        .iter()
        .map(|w| lagrangian_pvm(w).map(|pvm| (w.clone(), pvm)))
        .collect::<Result<_, _>>()?;

    let mut max_wigner_dev: f64 = 0.0;
    let mut max_born_dev: f64 = 0.0;
    let mut min_wigner = f64::INFINITY;
    let mut born_cases = 0usize;

    for state in &states {
        let projector = stabilizer_projector(state.known(), state.valuation())?;
        let w = wigner(&projector, field, n)?;
        let ontic = to_ontic(state);
        for (idx, value) in w.values().iter().enumerate() {
            let exact = rational_to_f64(&ontic.weights()[idx]);
            max_wigner_dev = max_wigner_dev.max((value.re - exact).abs()).max(value.im.abs());
            min_wigner = min_wigner.min(value.re);
        }
        let trace = projector.trace().re;
        for (w_sub, pvm) in &observables {
            let toy = measure(state, w_sub)?;
            for (label, proj) in pvm.labels().iter().zip(pvm.projectors()) {
                let valuation = FpVector::new(field, label.clone())?;
                let exact = toy.get(&valuation).map(rational_to_f64).unwrap_or(0.0);
                let born = proj.mul(&projector).trace().re / trace;
                max_born_dev = max_born_dev.max((born - exact).abs());
                born_cases += 1;
            }
        }
    }

    let pass = max_wigner_dev <= tol && max_born_dev <= tol;
    Ok(EquivalenceReport {
        d: field.order(),
        n,
        states: states.len(),
        observables: observables.len(),
        born_cases,
        max_wigner_dev,
        max_born_dev,
        min_wigner,
        tol,
        pass,
    })
}

/// Convenience: the pure-state stabilizer projector of an epistemic state.
pub fn quantize_state(state: &EpistemicState) -> Result<CMatrix, QuantizeError> {
    stabilizer_projector(state.known(), state.valuation())
}
