//! Exact arithmetic over the prime field `Z_d` (`d` an odd prime) and
//! symplectic linear algebra on the phase space `Omega = Z_d^{2n}`.
//!
//! Phase-space points and functional coefficient vectors both use the fixed
//! coordinate order `(q_1, p_1, ..., q_n, p_n)`. The symplectic form is
//! `<f, g> = sum_i (a_i b'_i - b_i a'_i)`, realized by the block-diagonal
//! matrix `J` with `n` blocks `[[0, 1], [-1, 0]]`. Subspaces are always kept
//! in reduced row-echelon form so equality is structural.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ENUMERATION_GUARD;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("field order {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("operands live over different fields (d = {0} vs d = {1})")]
    FieldMismatch(u64, u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("coordinate {0} is out of range for Z_{1}")]
    OutOfRange(u64, u64),
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension {0} is odd; symplectic structure needs 2n")]
    OddDimension(usize),
    #[error("enumeration guard exceeded: d^2n = {size} > {guard}")]
    GuardExceeded { size: u64, guard: u64 },
    #[error("vector is zero where a nonzero vector is required")]
    ZeroVector,
}

fn is_odd_prime(d: u64) -> bool {
    if d < 3 || d.is_multiple_of(2) {
        return false;
    }
    let mut k = 3;
    while k * k <= d {
        if d.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// The prime field `Z_d` for an odd prime `d`, carrying the inverse of 2.
///
/// Construction rejects `d = 2` and composite orders: every downstream
/// construction divides by two at some point, so evenness is ruled out here,
/// once, for the whole pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    d: u64,
    inv2: u64,
}

impl PrimeField {
    pub fn new(d: u64) -> Result<Self, FpError> {
        if !is_odd_prime(d) {
            return Err(FpError::NotOddPrime(d));
        }
        // (d + 1) / 2 doubles to d + 1 = 1 mod d.
        Ok(PrimeField { d, inv2: d.div_ceil(2) })
    }

    pub fn order(&self) -> u64 {
        self.d
    }

    /// The multiplicative inverse of 2.
    pub fn inv2(&self) -> u64 {
        self.inv2
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.d
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.d - b % self.d) % self.d
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.d) * (b % self.d) % self.d
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.d - a % self.d) % self.d
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.d;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.d;
            }
            base = base * base % self.d;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero mod `d`.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.d), "inverse of zero");
        self.pow(a, self.d - 2)
    }

    /// Index of a point of `Z_d^k` under little-endian base-`d` encoding.
    pub fn point_index(&self, coords: &[u64]) -> usize {
        let mut idx = 0usize;
        for &c in coords.iter().rev() {
            idx = idx * self.d as usize + c as usize;
        }
        idx
    }

    /// Inverse of [`PrimeField::point_index`].
    pub fn point_from_index(&self, mut idx: usize, k: usize) -> Vec<u64> {
        let mut coords = Vec::with_capacity(k);
        for _ in 0..k {
            coords.push((idx % self.d as usize) as u64);
            idx /= self.d as usize;
        }
        coords
    }
}

/// A vector of `Z_d^{2n}` in the coordinate order `(q_1, p_1, ..., q_n, p_n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpVector {
    field: PrimeField,
    coords: Vec<u64>,
}

impl FpVector {
    pub fn new(field: PrimeField, coords: Vec<u64>) -> Result<Self, FpError> {
        if !coords.len().is_multiple_of(2) {
            return Err(FpError::OddDimension(coords.len()));
        }
        for &c in &coords {
            if c >= field.order() {
                return Err(FpError::OutOfRange(c, field.order()));
            }
        }
        Ok(FpVector { field, coords })
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        FpVector { field, coords: vec![0; 2 * n] }
    }

    /// The coefficient vector of the position functional `q_i`.
    pub fn unit_q(field: PrimeField, n: usize, i: usize) -> Self {
        let mut coords = vec![0; 2 * n];
        coords[2 * i] = 1;
        FpVector { field, coords }
    }

    /// The coefficient vector of the momentum functional `p_i`.
    pub fn unit_p(field: PrimeField, n: usize, i: usize) -> Self {
        let mut coords = vec![0; 2 * n];
        coords[2 * i + 1] = 1;
        FpVector { field, coords }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Degrees of freedom, `n = dim / 2`.
    pub fn modes(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), FpError> {
        if self.field != other.field {
            return Err(FpError::FieldMismatch(self.field.d, other.field.d));
        }
        if self.coords.len() != other.coords.len() {
            return Err(FpError::DimensionMismatch(self.coords.len(), other.coords.len()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, FpError> {
        self.check_compatible(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(FpVector { field: self.field, coords })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FpError> {
        self.check_compatible(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(FpVector { field: self.field, coords })
    }

    pub fn scale(&self, k: u64) -> Self {
        let coords = self.coords.iter().map(|&a| self.field.mul(a, k)).collect();
        FpVector { field: self.field, coords }
    }

    pub fn neg(&self) -> Self {
        let coords = self.coords.iter().map(|&a| self.field.neg(a)).collect();
        FpVector { field: self.field, coords }
    }

    /// Ordinary (non-symplectic) dot product `f^T g`.
    pub fn dot(&self, other: &Self) -> Result<u64, FpError> {
        self.check_compatible(other)?;
        let mut acc = 0;
        for (&a, &b) in self.coords.iter().zip(&other.coords) {
            acc = self.field.add(acc, self.field.mul(a, b));
        }
        Ok(acc)
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The symplectic inner product `<f, g> = sum_i (a_i b'_i - b_i a'_i)`.
pub fn symplectic_form(f: &FpVector, g: &FpVector) -> Result<u64, FpError> {
    f.check_compatible(g)?;
    let fd = f.field;
    let mut acc = 0;
    for i in 0..f.modes() {
        let (a, b) = (f.coords[2 * i], f.coords[2 * i + 1]);
        let (a2, b2) = (g.coords[2 * i], g.coords[2 * i + 1]);
        acc = fd.add(acc, fd.sub(fd.mul(a, b2), fd.mul(b, a2)));
    }
    Ok(acc)
}

/// A matrix over `Z_d`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self, FpError> {
        if entries.len() != rows * cols {
            return Err(FpError::DimensionMismatch(entries.len(), rows * cols));
        }
        for &e in &entries {
            if e >= field.order() {
                return Err(FpError::OutOfRange(e, field.order()));
            }
        }
        Ok(FpMatrix { field, rows, cols, entries })
    }

    pub fn from_rows(field: PrimeField, rows: &[&[u64]]) -> Result<Self, FpError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(FpError::DimensionMismatch(row.len(), c));
            }
            entries.extend_from_slice(row);
        }
        FpMatrix::new(field, r, c, entries)
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        FpMatrix { field, rows: n, cols: n, entries }
    }

    /// The block-diagonal symplectic structure matrix with `n` blocks
    /// `[[0, 1], [-1, 0]]`.
    pub fn symplectic_j(field: PrimeField, n: usize) -> Self {
        let dim = 2 * n;
        let mut entries = vec![0; dim * dim];
        for i in 0..n {
            entries[(2 * i) * dim + 2 * i + 1] = 1;
            entries[(2 * i + 1) * dim + 2 * i] = field.neg(1);
        }
        FpMatrix { field, rows: dim, cols: dim, entries }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FpError> {
        if self.field != other.field {
            return Err(FpError::FieldMismatch(self.field.d, other.field.d));
        }
        if self.cols != other.rows {
            return Err(FpError::DimensionMismatch(self.cols, other.rows));
        }
        let fd = self.field;
        let mut entries = vec![0; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    entries[idx] = fd.add(entries[idx], fd.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(FpMatrix { field: fd, rows: self.rows, cols: other.cols, entries })
    }

    pub fn mul_vec(&self, v: &FpVector) -> Result<FpVector, FpError> {
        if self.field != v.field {
            return Err(FpError::FieldMismatch(self.field.d, v.field.d));
        }
        if self.cols != v.dim() {
            return Err(FpError::DimensionMismatch(self.cols, v.dim()));
        }
        let fd = self.field;
        let coords = (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = fd.add(acc, fd.mul(self.get(i, j), v.coords[j]));
                }
                acc
            })
            .collect();
        Ok(FpVector { field: fd, coords })
    }

    pub fn transpose(&self) -> Self {
        let mut entries = vec![0; self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[j * self.rows + i] = self.get(i, j);
            }
        }
        FpMatrix { field: self.field, rows: self.cols, cols: self.rows, entries }
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let fd = self.field;
        let mut a = self.entries.clone();
        let mut inv = FpMatrix::identity(fd, n).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r * n + col] != 0)?;
            a.swap_chunks(pivot, col, n);
            inv.swap_chunks(pivot, col, n);
            let s = fd.inv(a[col * n + col]);
            for j in 0..n {
                a[col * n + j] = fd.mul(a[col * n + j], s);
                inv[col * n + j] = fd.mul(inv[col * n + j], s);
            }
            for r in 0..n {
                if r == col || a[r * n + col] == 0 {
                    continue;
                }
                let factor = a[r * n + col];
                for j in 0..n {
                    a[r * n + j] = fd.sub(a[r * n + j], fd.mul(factor, a[col * n + j]));
                    inv[r * n + j] = fd.sub(inv[r * n + j], fd.mul(factor, inv[col * n + j]));
                }
            }
        }
        Some(FpMatrix { field: fd, rows: n, cols: n, entries: inv })
    }

    /// Whether `S^T J S = J`.
    pub fn is_symplectic(&self) -> Result<bool, FpError> {
        if self.rows != self.cols {
            return Err(FpError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if !self.rows.is_multiple_of(2) {
            return Err(FpError::OddDimension(self.rows));
        }
        let j = FpMatrix::symplectic_j(self.field, self.rows / 2);
        let lhs = self.transpose().mul(&j)?.mul(self)?;
        Ok(lhs == j)
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, r1: usize, r2: usize, width: usize);
}

impl SwapChunks for Vec<u64> {
    fn swap_chunks(&mut self, r1: usize, r2: usize, width: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..width {
            self.swap(r1 * width + j, r2 * width + j);
        }
    }
}

/// How a subspace sits relative to its symplectic complement.
///
/// The cases overlap (the full space is both coisotropic and symplectic;
/// the zero subspace is both isotropic and symplectic), so they are reported
/// as independent flags rather than a single label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceClass {
    pub isotropic: bool,
    pub coisotropic: bool,
    pub symplectic: bool,
    pub lagrangian: bool,
}

impl fmt::Display for SubspaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Vec::new();
        if self.lagrangian {
            names.push("lagrangian");
        }
        if self.isotropic {
            names.push("isotropic");
        }
        if self.coisotropic {
            names.push("coisotropic");
        }
        if self.symplectic {
            names.push("symplectic");
        }
        if names.is_empty() {
            names.push("none");
        }
        write!(f, "{}", names.join("+"))
    }
}

/// A subspace of `Z_d^{2n}` held as a reduced row-echelon basis.
///
/// Two equal subspaces have identical bases, so derived equality and
/// ordering are canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpSubspace {
    field: PrimeField,
    ambient_dim: usize,
    basis: Vec<FpVector>,
}

/// Canonical echelon basis of the span of `vectors` inside `Z_d^{ambient_dim}`.
pub fn rref(field: PrimeField, ambient_dim: usize, vectors: &[FpVector]) -> Result<FpSubspace, FpError> {
    for v in vectors {
        if v.field != field {
            return Err(FpError::FieldMismatch(v.field.d, field.d));
        }
        if v.dim() != ambient_dim {
            return Err(FpError::DimensionMismatch(v.dim(), ambient_dim));
        }
    }
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.coords.clone()).collect();
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for col in 0..ambient_dim {
        let Some(r) = rows.iter().position(|row| row[col] != 0) else {
            continue;
        };
        let mut pivot_row = rows.swap_remove(r);
        let s = field.inv(pivot_row[col]);
        for x in pivot_row.iter_mut() {
            *x = field.mul(*x, s);
        }
        for row in rows.iter_mut() {
            let factor = row[col];
            if factor != 0 {
                for j in 0..ambient_dim {
                    row[j] = field.sub(row[j], field.mul(factor, pivot_row[j]));
                }
            }
        }
        // back-substitute into earlier pivot rows
        for b in basis.iter_mut() {
            let factor = b[col];
            if factor != 0 {
                for j in 0..ambient_dim {
                    b[j] = field.sub(b[j], field.mul(factor, pivot_row[j]));
                }
            }
        }
        basis.push(pivot_row);
        pivot_cols.push(col);
        rows.retain(|row| row.iter().any(|&x| x != 0));
        if rows.is_empty() {
            break;
        }
    }
    let basis = basis
        .into_iter()
        .map(|coords| FpVector { field, coords })
        .collect();
    Ok(FpSubspace { field, ambient_dim, basis })
}

impl FpSubspace {
    pub fn zero(field: PrimeField, ambient_dim: usize) -> Self {
        FpSubspace { field, ambient_dim, basis: Vec::new() }
    }

    pub fn full(field: PrimeField, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut coords = vec![0; ambient_dim];
                coords[i] = 1;
                FpVector { field, coords }
            })
            .collect();
        FpSubspace { field, ambient_dim, basis }
    }

    /// Span of the given vectors (canonicalized).
    pub fn span(field: PrimeField, ambient_dim: usize, vectors: &[FpVector]) -> Result<Self, FpError> {
        rref(field, ambient_dim, vectors)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.basis
    }

    fn pivot_cols(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|b| b.coords.iter().position(|&x| x != 0).expect("echelon rows are nonzero"))
            .collect()
    }

    /// Canonical coset representative of `v` modulo this subspace: eliminate
    /// every pivot coordinate of `v` against the echelon basis.
    pub fn reduce(&self, v: &FpVector) -> Result<FpVector, FpError> {
        if v.field != self.field {
            return Err(FpError::FieldMismatch(v.field.d, self.field.d));
        }
        if v.dim() != self.ambient_dim {
            return Err(FpError::DimensionMismatch(v.dim(), self.ambient_dim));
        }
        let mut out = v.clone();
        for (b, pc) in self.basis.iter().zip(self.pivot_cols()) {
            let factor = out.coords[pc];
            if factor != 0 {
                out = out.sub(&b.scale(factor))?;
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &FpVector) -> bool {
        match self.reduce(v) {
            Ok(r) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// All `d^dim` points of the subspace.
    pub fn points(&self) -> Vec<FpVector> {
        let d = self.field.order();
        let k = self.basis.len();
        let total = (d as usize).pow(k as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let coeffs = self.field.point_from_index(idx, k);
            let mut v = FpVector::zero(self.field, self.ambient_dim / 2);
            for (c, b) in coeffs.iter().zip(&self.basis) {
                v = v.add(&b.scale(*c)).expect("same ambient space");
            }
            out.push(v);
        }
        out
    }

    /// Kernel of the linear map whose matrix rows are `constraints`.
    fn kernel(field: PrimeField, ambient_dim: usize, constraints: &[FpVector]) -> Result<FpSubspace, FpError> {
        let echelon = rref(field, ambient_dim, constraints)?;
        let pivots = echelon.pivot_cols();
        let free: Vec<usize> = (0..ambient_dim).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut coords = vec![0; ambient_dim];
            coords[fc] = 1;
            // solve pivot coordinates from the echelon constraints
            for (row, &pc) in echelon.basis.iter().zip(&pivots) {
                coords[pc] = field.neg(row.coords[fc]);
            }
            basis.push(FpVector { field, coords });
        }
        rref(field, ambient_dim, &basis)
    }

    /// Symplectic complement `{w : <w, b> = 0 for every basis vector b}`.
    pub fn symplectic_complement(&self) -> FpSubspace {
        let n = self.ambient_dim / 2;
        let j = FpMatrix::symplectic_j(self.field, n);
        // <w, b> = w^T J b, so the constraint row for b is (J b)^T.
        let constraints: Vec<FpVector> = self
            .basis
            .iter()
            .map(|b| j.mul_vec(b).expect("compatible"))
            .collect();
        Self::kernel(self.field, self.ambient_dim, &constraints).expect("constraints well-formed")
    }

    /// Ordinary annihilator `{w : f^T w = 0 for all f in the subspace}`.
    pub fn dot_annihilator(&self) -> FpSubspace {
        Self::kernel(self.field, self.ambient_dim, &self.basis).expect("basis well-formed")
    }

    pub fn classify(&self) -> SubspaceClass {
        let comp = self.symplectic_complement();
        let contained = self.basis.iter().all(|b| comp.contains(b));
        let contains = comp.basis.iter().all(|b| self.contains(b));
        let lagrangian = *self == comp;
        // V symplectic iff V and V-perp intersect trivially, i.e. their
        // joint span has dimension dim V + dim V-perp = 2n.
        let mut joint = self.basis.clone();
        joint.extend(comp.basis.iter().cloned());
        let joint = rref(self.field, self.ambient_dim, &joint).expect("same ambient");
        SubspaceClass {
            isotropic: contained,
            coisotropic: contains,
            symplectic: joint.dim() == self.ambient_dim,
            lagrangian,
        }
    }

    pub fn is_isotropic(&self) -> bool {
        self.classify().isotropic
    }

    pub fn is_lagrangian(&self) -> bool {
        self.classify().lagrangian
    }
}

impl fmt::Display for FpSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

fn check_guard(field: PrimeField, n: usize, guard: u64) -> Result<(), FpError> {
    let size = field.order().checked_pow(2 * n as u32).unwrap_or(u64::MAX);
    if size > guard {
        return Err(FpError::GuardExceeded { size, guard });
    }
    Ok(())
}

/// All subspaces of `Z_d^{2n}`, grown dimension by dimension.
pub fn enumerate_subspaces(field: PrimeField, n: usize, guard: u64) -> Result<Vec<FpSubspace>, FpError> {
    check_guard(field, n, guard)?;
    let ambient = 2 * n;
    let mut all: Vec<FpSubspace> = vec![FpSubspace::zero(field, ambient)];
    let mut frontier = all.clone();
    let full = FpSubspace::full(field, ambient);
    while !frontier.is_empty() {
        let mut next = std::collections::BTreeSet::new();
        for sub in &frontier {
            for v in full.points() {
                if v.is_zero() || sub.contains(&v) {
                    continue;
                }
                let mut vs = sub.basis.to_vec();
                vs.push(v);
                next.insert(rref(field, ambient, &vs)?);
            }
        }
        frontier = next.into_iter().collect();
        all.extend(frontier.iter().cloned());
    }
    Ok(all)
}

/// All Lagrangian subspaces of `Z_d^{2n}`, canonically ordered.
///
/// Grows isotropic subspaces one dimension at a time, extending only by
/// vectors of the symplectic complement; the count is `prod_{i=1..n} (d^i + 1)`.
pub fn enumerate_lagrangians(field: PrimeField, n: usize) -> Result<Vec<FpSubspace>, FpError> {
    enumerate_lagrangians_guarded(field, n, ENUMERATION_GUARD)
}

pub fn enumerate_lagrangians_guarded(
    field: PrimeField,
    n: usize,
    guard: u64,
) -> Result<Vec<FpSubspace>, FpError> {
    check_guard(field, n, guard)?;
    let ambient = 2 * n;
    let mut layer = std::collections::BTreeSet::new();
    layer.insert(FpSubspace::zero(field, ambient));
    for _ in 0..n {
        let mut next = std::collections::BTreeSet::new();
        for sub in &layer {
            for v in sub.symplectic_complement().points() {
                if v.is_zero() || sub.contains(&v) {
                    continue;
                }
                let mut vs = sub.basis.to_vec();
                vs.push(v);
                next.insert(rref(field, ambient, &vs)?);
            }
        }
        layer = next;
    }
    Ok(layer.into_iter().collect())
}

/// Completes a nonzero functional vector `f` (one degree of freedom) to the
/// symplectic matrix `S_f` that carries the position functional to `f`.
///
/// The induced action on functionals of the point map `m -> S m` is
/// `f -> (S^{-1})^T f`, so the condition "q goes to f" pins the second
/// column of `S_f` to `J^{-1} f`; the first column is the lexicographically
/// least `u` with `f^T u = 1`.
pub fn symplectic_completion(f: &FpVector) -> Result<FpMatrix, FpError> {
    if f.modes() != 1 {
        return Err(FpError::DimensionMismatch(f.dim(), 2));
    }
    if f.is_zero() {
        return Err(FpError::ZeroVector);
    }
    let fd = f.field;
    let (a, b) = (f.coords[0], f.coords[1]);
    // J^{-1} (a, b) = (-b, a)
    let w = (fd.neg(b), a);
    let mut first = None;
    'outer: for u1 in 0..fd.order() {
        for u2 in 0..fd.order() {
            if fd.add(fd.mul(a, u1), fd.mul(b, u2)) == 1 {
                first = Some((u1, u2));
                break 'outer;
            }
        }
    }
    let (u1, u2) = first.expect("nonzero f admits f^T u = 1");
    FpMatrix::from_rows(fd, &[&[u1, w.0], &[u2, w.1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    fn vec3(coords: &[u64]) -> FpVector {
        FpVector::new(f3(), coords.to_vec()).unwrap()
    }

    #[test]
    fn field_rejects_two_and_composites() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
        for d in [3, 5, 7, 11, 101] {
            let fd = PrimeField::new(d).unwrap();
            assert_eq!(fd.mul(2, fd.inv2()), 1);
        }
    }

    #[test]
    fn symplectic_form_examples() {
        assert_eq!(symplectic_form(&vec3(&[1, 0]), &vec3(&[0, 1])).unwrap(), 1);
        let f = vec3(&[2, 1]);
        assert_eq!(symplectic_form(&f, &f).unwrap(), 0);
        // q+p against q+2p: 1*2 - 1*1 = 1
        assert_eq!(symplectic_form(&vec3(&[1, 1]), &vec3(&[1, 2])).unwrap(), 1);
    }

    #[test]
    fn symplectic_form_matches_matrix_route() {
        // the block-diagonal J reproduces the coordinate formula
        for d in [3u64, 5] {
            let fd = PrimeField::new(d).unwrap();
            let j = FpMatrix::symplectic_j(fd, 2);
            let pts = FpSubspace::full(fd, 4).points();
            for f in pts.iter().take(30) {
                for g in pts.iter().take(30) {
                    let via_j = f.dot(&j.mul_vec(g).unwrap()).unwrap();
                    assert_eq!(symplectic_form(f, g).unwrap(), via_j);
                }
            }
        }
    }

    #[test]
    fn symplectic_form_bilinear_antisymmetric_exhaustive() {
        // every pair and triple of Z_3^{2n} for n = 1, 2
        for n in [1usize, 2] {
            let fd = f3();
            let pts = FpSubspace::full(fd, 2 * n).points();
            for f in &pts {
                for g in &pts {
                    let fg = symplectic_form(f, g).unwrap();
                    assert_eq!(fg, fd.neg(symplectic_form(g, f).unwrap()));
                    for k in 0..3 {
                        assert_eq!(symplectic_form(&f.scale(k), g).unwrap(), fd.mul(k, fg));
                    }
                    for h in &pts {
                        let sum = f.add(h).unwrap();
                        let lhs = symplectic_form(&sum, g).unwrap();
                        let rhs = fd.add(fg, symplectic_form(h, g).unwrap());
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn symplectic_form_mismatch_errors() {
        let f5 = PrimeField::new(5).unwrap();
        let f = vec3(&[1, 0]);
        let g = FpVector::new(f5, vec![1, 0]).unwrap();
        assert!(symplectic_form(&f, &g).is_err());
        let h = vec3(&[1, 0, 0, 0]);
        assert!(symplectic_form(&f, &h).is_err());
    }

    #[test]
    fn rref_examples() {
        let s = rref(f3(), 2, &[vec3(&[1, 0]), vec3(&[2, 0])]).unwrap();
        assert_eq!(s.basis(), &[vec3(&[1, 0])]);

        let empty = rref(f3(), 2, &[]).unwrap();
        assert_eq!(empty.dim(), 0);

        let full = rref(f3(), 2, &[vec3(&[1, 1]), vec3(&[1, 2])]).unwrap();
        assert_eq!(full.basis(), &[vec3(&[1, 0]), vec3(&[0, 1])]);
    }

    #[test]
    fn rref_is_idempotent_and_canonical() {
        let fd = PrimeField::new(5).unwrap();
        let v1 = FpVector::new(fd, vec![2, 3, 1, 0]).unwrap();
        let v2 = FpVector::new(fd, vec![4, 1, 0, 2]).unwrap();
        let s = rref(fd, 4, &[v1.clone(), v2.clone()]).unwrap();
        let again = rref(fd, 4, s.basis()).unwrap();
        assert_eq!(s, again);
        // any scaled/shuffled generating set gives the same subspace
        let t = rref(fd, 4, &[v2.scale(3), v1.add(&v2).unwrap(), v1]).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn complement_examples() {
        let zero = FpSubspace::zero(f3(), 2);
        assert_eq!(zero.symplectic_complement(), FpSubspace::full(f3(), 2));

        let line = rref(f3(), 2, &[vec3(&[1, 0])]).unwrap();
        assert_eq!(line.symplectic_complement(), line);

        let v = rref(f3(), 4, &[vec3(&[1, 0, 2, 1]), vec3(&[0, 1, 1, 0])]).unwrap();
        assert_eq!(v.symplectic_complement().symplectic_complement(), v);
    }

    #[test]
    fn complement_dimensions_exhaustive() {
        for (d, n) in [(3u64, 1usize), (3, 2)] {
            let fd = PrimeField::new(d).unwrap();
            for s in enumerate_subspaces(fd, n, ENUMERATION_GUARD).unwrap() {
                let c = s.symplectic_complement();
                assert_eq!(s.dim() + c.dim(), 2 * n);
                assert_eq!(c.symplectic_complement(), s);
            }
        }
    }

    #[test]
    fn classify_examples() {
        let line = rref(f3(), 2, &[vec3(&[1, 0])]).unwrap();
        let c = line.classify();
        assert!(c.lagrangian && c.isotropic && c.coisotropic && !c.symplectic);

        let zero = FpSubspace::zero(f3(), 2);
        assert!(zero.classify().isotropic);
        assert!(!zero.classify().lagrangian);

        let full = FpSubspace::full(f3(), 2);
        let cf = full.classify();
        assert!(cf.coisotropic && cf.symplectic && !cf.isotropic && !cf.lagrangian);
    }

    #[test]
    fn symplectic_matrix_examples() {
        let id = FpMatrix::identity(f3(), 2);
        assert!(id.is_symplectic().unwrap());

        let shear = FpMatrix::from_rows(f3(), &[&[1, 0], &[1, 1]]).unwrap();
        assert!(shear.is_symplectic().unwrap());

        let scale21 = FpMatrix::from_rows(f3(), &[&[2, 0], &[0, 1]]).unwrap();
        assert!(!scale21.is_symplectic().unwrap());
        // diag(2, 2) has det 4 = 1 mod 3, so it is symplectic
        let scale22 = FpMatrix::from_rows(f3(), &[&[2, 0], &[0, 2]]).unwrap();
        assert!(scale22.is_symplectic().unwrap());

        let rect = FpMatrix::new(f3(), 1, 2, vec![1, 0]).unwrap();
        assert!(rect.is_symplectic().is_err());
    }

    #[test]
    fn symplectic_matrices_preserve_form_exhaustively() {
        // all symplectic 2x2 over Z_3 preserve the form on all vector pairs
        let fd = f3();
        let pts = FpSubspace::full(fd, 2).points();
        let mut count = 0;
        for e in 0..81u64 {
            let m = fd.point_from_index(e as usize, 4);
            let s = FpMatrix::new(fd, 2, 2, m).unwrap();
            if !s.is_symplectic().unwrap() {
                continue;
            }
            count += 1;
            assert!(s.inverse().is_some());
            for f in &pts {
                for g in &pts {
                    let lhs = symplectic_form(&s.mul_vec(f).unwrap(), &s.mul_vec(g).unwrap()).unwrap();
                    assert_eq!(lhs, symplectic_form(f, g).unwrap());
                }
            }
        }
        // |SL(2, Z_3)| = 24
        assert_eq!(count, 24);
    }

    #[test]
    fn lagrangian_enumeration_counts() {
        let cases: &[(u64, usize, usize)] = &[(3, 1, 4), (5, 1, 6), (7, 1, 8), (3, 2, 40)];
        for &(d, n, expected) in cases {
            let fd = PrimeField::new(d).unwrap();
            let ls = enumerate_lagrangians(fd, n).unwrap();
            assert_eq!(ls.len(), expected, "d={d} n={n}");
            let mut product = 1usize;
            for i in 1..=n {
                product *= (d as usize).pow(i as u32) + 1;
            }
            assert_eq!(ls.len(), product);
            for l in &ls {
                assert!(l.is_lagrangian());
            }
        }
    }

    #[test]
    fn trit_lagrangians_are_the_four_quadrature_lines() {
        let ls = enumerate_lagrangians(f3(), 1).unwrap();
        let expect: Vec<FpSubspace> = [[1u64, 0], [0, 1], [1, 1], [1, 2]]
            .iter()
            .map(|c| rref(f3(), 2, &[vec3(c)]).unwrap())
            .collect();
        for e in &expect {
            assert!(ls.contains(e));
        }
        assert_eq!(ls.len(), 4);
    }

    #[test]
    fn enumeration_guard_trips() {
        let fd = PrimeField::new(101).unwrap();
        assert!(matches!(
            enumerate_lagrangians_guarded(fd, 2, 1000),
            Err(FpError::GuardExceeded { .. })
        ));
    }

    #[test]
    fn completion_examples() {
        let q = vec3(&[1, 0]);
        assert_eq!(symplectic_completion(&q).unwrap(), FpMatrix::identity(f3(), 2));
        let p = vec3(&[0, 1]);
        let s = symplectic_completion(&p).unwrap();
        assert_eq!(s, FpMatrix::from_rows(f3(), &[&[0, 2], &[1, 0]]).unwrap());
        assert!(s.is_symplectic().unwrap());
        for coords in [[1u64, 1], [1, 2], [2, 1]] {
            let f = vec3(&coords);
            let s = symplectic_completion(&f).unwrap();
            assert!(s.is_symplectic().unwrap());
            // second column is J^{-1} f
            let fd = f3();
            assert_eq!(s.get(0, 1), fd.neg(coords[1]));
            assert_eq!(s.get(1, 1), coords[0]);
        }
        assert!(symplectic_completion(&vec3(&[0, 0])).is_err());
    }

    #[test]
    fn reduce_is_canonical_coset_representative() {
        let fd = f3();
        let sub = rref(fd, 4, &[vec3(&[1, 0, 1, 2]), vec3(&[0, 1, 2, 0])]).unwrap();
        let v = vec3(&[2, 2, 1, 1]);
        let r = sub.reduce(&v).unwrap();
        // difference lies in the subspace; representative has zero pivots
        assert!(sub.contains(&v.sub(&r).unwrap()));
        assert_eq!(sub.reduce(&r).unwrap(), r);
        for b in sub.basis() {
            assert_eq!(sub.reduce(&v.add(b).unwrap()).unwrap(), r);
        }
    }

    proptest! {
        #[test]
        fn prop_even_or_composite_orders_rejected(d in 0u64..10_000) {
            let expect = is_odd_prime(d);
            prop_assert_eq!(PrimeField::new(d).is_ok(), expect);
            if d % 2 == 0 {
                prop_assert!(PrimeField::new(d).is_err());
            }
        }

        #[test]
        fn prop_form_bilinear_antisymmetric(
            d in prop::sample::select(vec![3u64, 5, 7]),
            raw in prop::collection::vec(0u64..7, 12),
            k in 0u64..7,
        ) {
            let fd = PrimeField::new(d).unwrap();
            let take = |lo: usize| -> FpVector {
                FpVector::new(fd, raw[lo..lo + 4].iter().map(|x| x % d).collect()).unwrap()
            };
            let (f, g, h) = (take(0), take(4), take(8));
            let k = k % d;
            let sf = |a: &FpVector, b: &FpVector| symplectic_form(a, b).unwrap();
            prop_assert_eq!(sf(&f, &g), fd.neg(sf(&g, &f)));
            prop_assert_eq!(sf(&f.add(&h).unwrap(), &g), fd.add(sf(&f, &g), sf(&h, &g)));
            prop_assert_eq!(sf(&f.scale(k), &g), fd.mul(k, sf(&f, &g)));
        }

        #[test]
        fn prop_rref_span_invariant(
            raw in prop::collection::vec(0u64..3, 8),
        ) {
            let fd = PrimeField::new(3).unwrap();
            let v1 = FpVector::new(fd, raw[0..4].to_vec()).unwrap();
            let v2 = FpVector::new(fd, raw[4..8].to_vec()).unwrap();
            let s = rref(fd, 4, &[v1.clone(), v2.clone()]).unwrap();
            prop_assert!(s.contains(&v1));
            prop_assert!(s.contains(&v2));
            prop_assert!(s.dim() <= 2);
        }
    }
}
