//! Semantics of the quadrature epistricted theory over `Z_d`: knowability,
//! epistemic states, affine symplectic dynamics and sharp measurements.
//!
//! Every rule here is grounded by an exact brute-force ontic oracle: an
//! epistemic state is realized as the uniform rational distribution over the
//! affine subspace of ontic states consistent with the known variables, and
//! transformations and measurements are pushforwards of that distribution.
//! Probabilities are exact rationals throughout, never floats.

use std::collections::BTreeMap;

use num::rational::Rational64;
use num::Zero;
use thiserror::Error;

use crate::fplinalg::{
    symplectic_form, FpError, FpMatrix, FpSubspace, FpVector, PrimeField,
};
use crate::ENUMERATION_GUARD;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpistrictedError {
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error("the set of known variables must be isotropic, got {0}")]
    NotIsotropic(String),
    #[error("a nonempty set of functionals is required")]
    EmptySet,
    #[error("transformation matrix is not symplectic")]
    NotSymplectic,
}

/// An affine functional `f(m) = fvec^T m + c` of the phase-space coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadratureFunctional {
    fvec: FpVector,
    c: u64,
}

impl QuadratureFunctional {
    pub fn new(fvec: FpVector, c: u64) -> Self {
        let c = c % fvec.field().order();
        QuadratureFunctional { fvec, c }
    }

    /// The position functional `q_i`.
    pub fn position(field: PrimeField, n: usize, i: usize) -> Self {
        QuadratureFunctional { fvec: FpVector::unit_q(field, n, i), c: 0 }
    }

    /// The momentum functional `p_i`.
    pub fn momentum(field: PrimeField, n: usize, i: usize) -> Self {
        QuadratureFunctional { fvec: FpVector::unit_p(field, n, i), c: 0 }
    }

    pub fn coefficients(&self) -> &FpVector {
        &self.fvec
    }

    pub fn constant(&self) -> u64 {
        self.c
    }

    pub fn evaluate(&self, m: &FpVector) -> Result<u64, EpistrictedError> {
        Ok(self.fvec.field().add(self.fvec.dot(m)?, self.c))
    }
}

/// The finite-difference Poisson bracket, evaluated literally at the point `m`:
///
/// `sum_i [(f(m+q_i) - f(m))(g(m+p_i) - g(m)) - (f(m+p_i) - f(m))(g(m+q_i) - g(m))]`
///
/// where `q_i`, `p_i` are the unit displacement directions. For quadrature
/// functionals the result is independent of `m` and equals the symplectic
/// inner product of the coefficient vectors.
pub fn poisson_bracket(
    f: &QuadratureFunctional,
    g: &QuadratureFunctional,
    m: &FpVector,
) -> Result<u64, EpistrictedError> {
    let fd = m.field();
    let n = m.modes();
    let mut acc = 0;
    for i in 0..n {
        let mq = m.add(&FpVector::unit_q(fd, n, i))?;
        let mp = m.add(&FpVector::unit_p(fd, n, i))?;
        let df_q = fd.sub(f.evaluate(&mq)?, f.evaluate(m)?);
        let df_p = fd.sub(f.evaluate(&mp)?, f.evaluate(m)?);
        let dg_q = fd.sub(g.evaluate(&mq)?, g.evaluate(m)?);
        let dg_p = fd.sub(g.evaluate(&mp)?, g.evaluate(m)?);
        acc = fd.add(acc, fd.sub(fd.mul(df_q, dg_p), fd.mul(df_p, dg_q)));
    }
    Ok(acc)
}

/// Whether all pairs Poisson-commute, equivalently whether the span of the
/// coefficient vectors is isotropic.
pub fn jointly_knowable(fs: &[QuadratureFunctional]) -> Result<bool, EpistrictedError> {
    if fs.is_empty() {
        return Err(EpistrictedError::EmptySet);
    }
    for (i, f) in fs.iter().enumerate() {
        for g in &fs[i + 1..] {
            if symplectic_form(f.coefficients(), g.coefficients())? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An epistemic state: a pair of an isotropic subspace `V` of known quadrature
/// functionals and a valuation vector `v` assigning their values.
///
/// Only `f^T v` for `f` in `V` is observable, so `v` is stored as the
/// canonical coset representative modulo the ordinary annihilator of `V`;
/// derived equality is therefore semantic state equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EpistemicState {
    known: FpSubspace,
    valuation: FpVector,
}

impl EpistemicState {
    pub fn new(known: FpSubspace, valuation: FpVector) -> Result<Self, EpistrictedError> {
        if !known.is_isotropic() {
            return Err(EpistrictedError::NotIsotropic(known.to_string()));
        }
        let valuation = known.dot_annihilator().reduce(&valuation)?;
        Ok(EpistemicState { known, valuation })
    }

    /// Total ignorance: nothing known.
    pub fn ignorance(field: PrimeField, n: usize) -> Self {
        EpistemicState {
            known: FpSubspace::zero(field, 2 * n),
            valuation: FpVector::zero(field, n),
        }
    }

    pub fn known(&self) -> &FpSubspace {
        &self.known
    }

    pub fn valuation(&self) -> &FpVector {
        &self.valuation
    }

    pub fn field(&self) -> PrimeField {
        self.valuation.field()
    }

    pub fn modes(&self) -> usize {
        self.valuation.modes()
    }

    /// Pure states are exactly those with Lagrangian `V`.
    pub fn is_pure(&self) -> bool {
        self.known.is_lagrangian()
    }
}

/// An affine symplectic transformation `m -> S m + a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSymplectic {
    s: FpMatrix,
    a: FpVector,
}

impl AffineSymplectic {
    pub fn new(s: FpMatrix, a: FpVector) -> Result<Self, EpistrictedError> {
        if !s.is_symplectic()? {
            return Err(EpistrictedError::NotSymplectic);
        }
        if s.rows() != a.dim() {
            return Err(FpError::DimensionMismatch(s.rows(), a.dim()).into());
        }
        Ok(AffineSymplectic { s, a })
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        AffineSymplectic {
            s: FpMatrix::identity(field, 2 * n),
            a: FpVector::zero(field, n),
        }
    }

    pub fn linear(&self) -> &FpMatrix {
        &self.s
    }

    pub fn displacement(&self) -> &FpVector {
        &self.a
    }

    pub fn apply_point(&self, m: &FpVector) -> Result<FpVector, EpistrictedError> {
        Ok(self.s.mul_vec(m)?.add(&self.a)?)
    }

    /// `self` after `first`, i.e. the map `m -> self(first(m))`.
    pub fn compose(&self, first: &Self) -> Result<Self, EpistrictedError> {
        let s = self.s.mul(&first.s)?;
        let a = self.s.mul_vec(&first.a)?.add(&self.a)?;
        AffineSymplectic::new(s, a)
    }
}

/// An exact rational probability table over the ontic space `Z_d^{2n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnticDistribution {
    field: PrimeField,
    n: usize,
    weights: Vec<Rational64>,
}

impl OnticDistribution {
    /// Uniform distribution over the given points.
    pub fn uniform_on(field: PrimeField, n: usize, points: &[FpVector]) -> Self {
        assert!(!points.is_empty(), "a distribution needs a nonempty support");
        let size = (field.order() as usize).pow(2 * n as u32);
        let mut weights = vec![Rational64::zero(); size];
        let w = Rational64::new(1, points.len() as i64);
        for m in points {
            weights[field.point_index(m.coords())] = w;
        }
        OnticDistribution { field, n, weights }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[Rational64] {
        &self.weights
    }

    pub fn prob(&self, m: &FpVector) -> Rational64 {
        self.weights[self.field.point_index(m.coords())]
    }

    pub fn support(&self) -> Vec<FpVector> {
        (0..self.weights.len())
            .filter(|&i| !self.weights[i].is_zero())
            .map(|i| {
                FpVector::new(self.field, self.field.point_from_index(i, 2 * self.n))
                    .expect("decoded point is in range")
            })
            .collect()
    }

    pub fn total(&self) -> Rational64 {
        self.weights.iter().sum()
    }

    /// Pushforward under an affine symplectic point map (a bijection).
    pub fn pushforward(&self, t: &AffineSymplectic) -> Result<Self, EpistrictedError> {
        let mut weights = vec![Rational64::zero(); self.weights.len()];
        for (i, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let m = FpVector::new(self.field, self.field.point_from_index(i, 2 * self.n))?;
            let image = t.apply_point(&m)?;
            weights[self.field.point_index(image.coords())] += *w;
        }
        Ok(OnticDistribution { field: self.field, n: self.n, weights })
    }
}

/// The ontic oracle: the uniform distribution over
/// `A(V, v) = {m : f^T m = f^T v for all f in V}`, the "knows the values of
/// V, maximally ignorant otherwise" distribution. The support size is
/// `d^{2n - dim V}`.
pub fn to_ontic(state: &EpistemicState) -> OnticDistribution {
    let field = state.field();
    let n = state.modes();
    let size = (field.order() as usize).pow(2 * n as u32);
    let mut points = Vec::new();
    'points: for idx in 0..size {
        let m = FpVector::new(field, field.point_from_index(idx, 2 * n)).expect("in range");
        for f in state.known().basis() {
            if f.dot(&m).expect("same space") != f.dot(state.valuation()).expect("same space") {
                continue 'points;
            }
        }
        points.push(m);
    }
    OnticDistribution::uniform_on(field, n, &points)
}

/// Transforms an epistemic state by an affine symplectic map.
///
/// The result is the unique state whose ontic distribution is the pushforward
/// of the input's. Closed form: `V' = (S^T)^{-1} V` and `v' = S v + a`,
/// since `f'^T (S v + a) = (S^T f')^T v + f'^T a` for every `f'` in `V'`.
pub fn apply_transform(
    state: &EpistemicState,
    t: &AffineSymplectic,
) -> Result<EpistemicState, EpistrictedError> {
    let st_inv = t
        .linear()
        .transpose()
        .inverse()
        .expect("symplectic matrices are invertible");
    let new_basis: Vec<FpVector> = state
        .known()
        .basis()
        .iter()
        .map(|f| st_inv.mul_vec(f))
        .collect::<Result<_, _>>()?;
    let known = FpSubspace::span(state.field(), 2 * state.modes(), &new_basis)?;
    let valuation = t.apply_point(state.valuation())?;
    EpistemicState::new(known, valuation)
}

/// All pure epistemic states: every Lagrangian subspace paired with every
/// canonical valuation class. The count is `prod_{i=1..n}(d^i + 1) * d^n`.
pub fn enumerate_pure_states(field: PrimeField, n: usize) -> Result<Vec<EpistemicState>, EpistrictedError> {
    enumerate_pure_states_guarded(field, n, ENUMERATION_GUARD)
}

pub fn enumerate_pure_states_guarded(
    field: PrimeField,
    n: usize,
    guard: u64,
) -> Result<Vec<EpistemicState>, EpistrictedError> {
    let lagrangians = crate::fplinalg::enumerate_lagrangians_guarded(field, n, guard)?;
    let mut out = Vec::new();
    for v_sub in lagrangians {
        for valuation in canonical_valuations(&v_sub) {
            out.push(EpistemicState { known: v_sub.clone(), valuation });
        }
    }
    Ok(out)
}

/// The canonical valuation representatives for a subspace of known variables:
/// vectors vanishing on the pivot columns of the annihilator's echelon basis.
pub fn canonical_valuations(known: &FpSubspace) -> Vec<FpVector> {
    let field = known.field();
    let ann = known.dot_annihilator();
    let pivots: Vec<usize> = ann
        .basis()
        .iter()
        .map(|b| b.coords().iter().position(|&x| x != 0).expect("echelon row"))
        .collect();
    let free: Vec<usize> = (0..known.ambient_dim()).filter(|c| !pivots.contains(c)).collect();
    let d = field.order() as usize;
    let total = d.pow(free.len() as u32);
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let digits = field.point_from_index(idx, free.len());
        let mut coords = vec![0; known.ambient_dim()];
        for (pos, &col) in free.iter().enumerate() {
            coords[col] = digits[pos];
        }
        out.push(FpVector::new(field, coords).expect("in range"));
    }
    out
}

/// Sharp measurement of the isotropic subspace `W` on a state: the pushforward
/// of the ontic distribution under `m -> (canonical valuation of W at m)`.
/// Outcomes are canonical valuation vectors; probabilities sum to one.
pub fn measure(
    state: &EpistemicState,
    w: &FpSubspace,
) -> Result<BTreeMap<FpVector, Rational64>, EpistrictedError> {
    if !w.is_isotropic() {
        return Err(EpistrictedError::NotIsotropic(w.to_string()));
    }
    let ann = w.dot_annihilator();
    let ontic = to_ontic(state);
    let mut out: BTreeMap<FpVector, Rational64> = BTreeMap::new();
    for m in ontic.support() {
        let key = ann.reduce(&m)?;
        *out.entry(key).or_insert_with(Rational64::zero) += ontic.prob(&m);
    }
    Ok(out)
}
