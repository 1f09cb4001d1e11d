//! Groupoids extracted from dagger Frobenius algebras, pair groupoids, the
//! endomorphism monoid with its embedding, and the symplectic structure of
//! the multiplication graph.
//!
//! A verified special dagger Frobenius algebra in the category of relations
//! is exactly a groupoid: the multiplication is single-valued on its domain
//! of composable pairs, the counit picks out the units, and sources, targets
//! and inverses are recovered from composability against units. The
//! extraction here re-checks every groupoid axiom on the result, so a
//! non-algebra that slips through is reported rather than silently accepted.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::fplinalg::{rref, FpSubspace, FpVector, PrimeField};
use crate::relcat::{
    carrier_point, DaggerFrobenius, FinSet, RelError, Relation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("groupoid axiom violated: {0}")]
    Axiom(String),
    #[error("not a groupoid algebra: {0}")]
    NotGroupoidAlgebra(String),
    #[error("embedding is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("inclusion maps must be injective")]
    NotInjective,
    #[error("carrier size {0} is not d^2 for d = {1}")]
    CarrierShape(usize, u64),
    #[error("multiplication graph is not linear")]
    GraphNotLinear,
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Fp(#[from] crate::fplinalg::FpError),
}

/// A finite groupoid with explicit structure maps.
///
/// `comp` maps a pair of arrow indices `(g, h)` with `source(g) = target(h)`
/// to the composite `g o h`; `unit` maps each object to its identity arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    objects: FinSet,
    arrows: FinSet,
    source: Vec<u32>,
    target: Vec<u32>,
    unit: Vec<u32>,
    inverse: Vec<u32>,
    comp: BTreeMap<(u32, u32), u32>,
}

impl Groupoid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        objects: FinSet,
        arrows: FinSet,
        source: Vec<u32>,
        target: Vec<u32>,
        unit: Vec<u32>,
        inverse: Vec<u32>,
        comp: BTreeMap<(u32, u32), u32>,
    ) -> Result<Self, GroupoidError> {
        let g = Groupoid { objects, arrows, source, target, unit, inverse, comp };
        g.validate()?;
        Ok(g)
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn arrows(&self) -> &FinSet {
        &self.arrows
    }

    pub fn source(&self, g: usize) -> usize {
        self.source[g] as usize
    }

    pub fn target(&self, g: usize) -> usize {
        self.target[g] as usize
    }

    pub fn unit(&self, o: usize) -> usize {
        self.unit[o] as usize
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g] as usize
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.comp.get(&(g as u32, h as u32)).map(|&z| z as usize)
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.comp.iter().map(|(&(g, h), &z)| (g as usize, h as usize, z as usize))
    }

    /// Arrows with source and target at the given object.
    pub fn isotropy(&self, o: usize) -> Vec<usize> {
        (0..self.arrows.size())
            .filter(|&g| self.source(g) == o && self.target(g) == o)
            .collect()
    }

    /// Checks every groupoid axiom family; errors name the first failure.
    pub fn validate(&self) -> Result<(), GroupoidError> {
        let n_arr = self.arrows.size();
        let n_obj = self.objects.size();
        let fail = |msg: String| Err(GroupoidError::Axiom(msg));
        if self.source.len() != n_arr || self.target.len() != n_arr || self.inverse.len() != n_arr {
            return fail("structure map lengths disagree with the arrow set".into());
        }
        if self.unit.len() != n_obj {
            return fail("unit map length disagrees with the object set".into());
        }
        // comp defined exactly on source(g) = target(h)
        let mut by_target: Vec<Vec<u32>> = vec![Vec::new(); n_obj];
        for h in 0..n_arr {
            by_target[self.target(h)].push(h as u32);
        }
        for g in 0..n_arr {
            let defined: Vec<u32> = self
                .comp
                .range((g as u32, 0)..=(g as u32, u32::MAX))
                .map(|(&(_, h), _)| h)
                .collect();
            if defined != by_target[self.source(g)] {
                return fail(format!("composability domain mismatch at arrow {g}"));
            }
        }
        for (&(g, h), &z) in &self.comp {
            if self.source(z as usize) != self.source(h as usize)
                || self.target(z as usize) != self.target(g as usize)
            {
                return fail(format!("composite ({g}, {h}) has wrong endpoints"));
            }
        }
        // associativity on composable triples
        for (&(g, h), &gh) in &self.comp {
            for &k in &by_target[self.source(h as usize)] {
                let hk = self.comp.get(&(h, k));
                let left = self.comp.get(&(gh, k));
                let right = hk.and_then(|&hk| self.comp.get(&(g, hk)));
                match (left, right) {
                    (Some(a), Some(b)) if a == b => {}
                    _ => return fail(format!("associativity fails at ({g}, {h}, {k})")),
                }
            }
        }
        // unit laws
        for o in 0..n_obj {
            let u = self.unit(o);
            if self.source(u) != o || self.target(u) != o {
                return fail(format!("unit of object {o} is not an endo-arrow"));
            }
        }
        for g in 0..n_arr {
            if self.compose(g, self.unit(self.source(g))) != Some(g) {
                return fail(format!("right unit law fails at {g}"));
            }
            if self.compose(self.unit(self.target(g)), g) != Some(g) {
                return fail(format!("left unit law fails at {g}"));
            }
        }
        // inverse laws
        for g in 0..n_arr {
            let gi = self.inverse(g);
            if self.compose(g, gi) != Some(self.unit(self.target(g)))
                || self.compose(gi, g) != Some(self.unit(self.source(g)))
            {
                return fail(format!("inverse laws fail at {g}"));
            }
        }
        Ok(())
    }
}

/// Extracts the groupoid of a verified dagger Frobenius algebra: arrows are
/// the carrier, composable pairs are the domain of the multiplication,
/// objects are the units, and sources/targets/inverses are determined by
/// composability with units.
pub fn groupoid_from_frobenius(alg: &DaggerFrobenius) -> Result<Groupoid, GroupoidError> {
    let n = alg.carrier().size();
    // single-valued multiplication on composable pairs
    let mut comp_raw: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for &(xy, z) in alg.multiplication().pairs() {
        let key = ((xy as usize / n) as u32, (xy as usize % n) as u32);
        if comp_raw.insert(key, z).is_some() {
            return Err(GroupoidError::NotGroupoidAlgebra(format!(
                "multiplication is multi-valued at {key:?}"
            )));
        }
    }
    let units = alg.unit_elements();
    let obj_index: BTreeMap<usize, u32> = units.iter().enumerate().map(|(i, &u)| (u, i as u32)).collect();
    let objects = FinSet::new(units.iter().map(|&u| alg.carrier().label(u).to_string()).collect());

    let mut source = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    for f in 0..n {
        let mut ss: Vec<u32> = units
            .iter()
            .filter(|&&u| comp_raw.contains_key(&(f as u32, u as u32)))
            .map(|&u| obj_index[&u])
            .collect();
        let mut ts: Vec<u32> = units
            .iter()
            .filter(|&&u| comp_raw.contains_key(&(u as u32, f as u32)))
            .map(|&u| obj_index[&u])
            .collect();
        if ss.len() != 1 || ts.len() != 1 {
            return Err(GroupoidError::NotGroupoidAlgebra(format!(
                "arrow {f} composes with {} units on the right and {} on the left",
                ss.len(),
                ts.len()
            )));
        }
        source.push(ss.pop().unwrap());
        target.push(ts.pop().unwrap());
    }
    let unit: Vec<u32> = units.iter().map(|&u| u as u32).collect();
    let mut inverse = Vec::with_capacity(n);
    for g in 0..n {
        let mut candidates: Vec<u32> = (0..n as u32)
            .filter(|&f| {
                comp_raw
                    .get(&(g as u32, f))
                    .is_some_and(|&z| units.contains(&(z as usize)))
                    && comp_raw
                        .get(&(f, g as u32))
                        .is_some_and(|&z| units.contains(&(z as usize)))
            })
            .collect();
        if candidates.len() != 1 {
            return Err(GroupoidError::NotGroupoidAlgebra(format!(
                "arrow {g} has {} two-sided inverses",
                candidates.len()
            )));
        }
        inverse.push(candidates.pop().unwrap());
    }
    Groupoid::new(objects, alg.carrier().clone(), source, target, unit, inverse, comp_raw)
}

/// Rebuilds the algebra of a groupoid: multiplication is the partial
/// composition as a relation, the counit deletes the unit arrows.
pub fn algebra_from_groupoid(g: &Groupoid) -> DaggerFrobenius {
    let n = g.arrows.size();
    let xx = g.arrows.product(&g.arrows);
    let m_pairs: BTreeSet<(u32, u32)> = g
        .comp
        .iter()
        .map(|(&(x, y), &z)| (x * n as u32 + y, z))
        .collect();
    let m = Relation::new(xx, g.arrows.clone(), m_pairs).expect("indices in range");
    let e_pairs: BTreeSet<(u32, u32)> = g.unit.iter().map(|&u| (u, 0)).collect();
    let e = Relation::new(g.arrows.clone(), FinSet::unit(), e_pairs).expect("indices in range");
    DaggerFrobenius::new(g.arrows.clone(), m, e).expect("shapes by construction")
}

/// The pair groupoid of a set: arrows `M x M`, `(x, y) . (y, z) = (x, z)`,
/// `s(x, y) = y`, `t(x, y) = x`.
pub fn pair_groupoid(m: &FinSet) -> Groupoid {
    let k = m.size();
    let arrows = m.product(m);
    let mut source = Vec::with_capacity(k * k);
    let mut target = Vec::with_capacity(k * k);
    for x in 0..k {
        for y in 0..k {
            let _ = (x, y);
            target.push(x as u32);
            source.push(y as u32);
        }
    }
    let unit: Vec<u32> = (0..k as u32).map(|x| x * k as u32 + x).collect();
    let inverse: Vec<u32> = (0..(k * k) as u32)
        .map(|g| {
            let (x, y) = (g / k as u32, g % k as u32);
            y * k as u32 + x
        })
        .collect();
    let mut comp = BTreeMap::new();
    for x in 0..k as u32 {
        for y in 0..k as u32 {
            for z in 0..k as u32 {
                comp.insert((x * k as u32 + y, y * k as u32 + z), x * k as u32 + z);
            }
        }
    }
    Groupoid {
        objects: m.clone(),
        arrows,
        source,
        target,
        unit,
        inverse,
        comp,
    }
}

/// The endomorphism monoid on `X x X`: multiplication `1 x cap x 1` with the
/// diagonal cup, which is exactly pair-groupoid composition
/// `((x, y), (y, z)) -> (x, z)`; the unit state is the diagonal `{(a, a)}`.
pub fn endomorphism_monoid(alg: &DaggerFrobenius) -> Result<DaggerFrobenius, GroupoidError> {
    let x = alg.carrier();
    let n = x.size() as u32;
    let carrier = x.product(x);
    let nn = carrier.size() as u32;
    let mut m_pairs = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let left = a * n + b;
                let right = b * n + c;
                m_pairs.insert((left * nn + right, a * n + c));
            }
        }
    }
    let m = Relation::new(carrier.product(&carrier), carrier.clone(), m_pairs)?;
    let e_pairs: BTreeSet<(u32, u32)> = (0..n).map(|a| (a * n + a, 0)).collect();
    let e = Relation::new(carrier.clone(), FinSet::unit(), e_pairs)?;
    Ok(DaggerFrobenius::new(carrier, m, e)?)
}

/// The embedding of an algebra into its endomorphism monoid: the relation
/// `h : X -> X x X` obtained by re-currying the multiplication, which sends
/// each element to the graph of left translation by it.
///
/// Both homomorphism equations are checked by exact relation equality:
/// `h o m = m' o (h x h)` and `h o unit = unit'`.
pub fn embed_h(alg: &DaggerFrobenius) -> Result<Relation, GroupoidError> {
    let x = alg.carrier();
    let n = x.size() as u32;
    let xx = x.product(x);
    let pairs: BTreeSet<(u32, u32)> = alg
        .multiplication()
        .pairs()
        .iter()
        .map(|&(ka, b)| {
            let (k, a) = (ka / n, ka % n);
            (k, a * n + b)
        })
        .collect();
    let h = Relation::new(x.clone(), xx, pairs)?;

    let end = endomorphism_monoid(alg)?;
    let lhs = alg.multiplication().then(&h)?;
    let rhs = h.product(&h).then(end.multiplication())?;
    if lhs != rhs {
        return Err(GroupoidError::NotHomomorphism(
            "h o m differs from m' o (h x h)".into(),
        ));
    }
    let unit_image = alg.counit().dagger().then(&h)?;
    if unit_image != end.counit().dagger() {
        return Err(GroupoidError::NotHomomorphism(
            "h does not carry the unit to the diagonal".into(),
        ));
    }
    Ok(h)
}

/// The twisted symplectic form on a direct sum of three copies of the arrow
/// space: `sum_j signs[j] * <u_j, v_j>`.
pub fn twisted_form(field: PrimeField, u: &FpVector, v: &FpVector, signs: [i8; 3]) -> u64 {
    let per = u.dim() / 3;
    let mut acc = 0;
    for (j, &sign) in signs.iter().enumerate() {
        let uj = FpVector::new(field, u.coords()[j * per..(j + 1) * per].to_vec()).expect("in range");
        let vj = FpVector::new(field, v.coords()[j * per..(j + 1) * per].to_vec()).expect("in range");
        let w = crate::fplinalg::symplectic_form(&uj, &vj).expect("same space");
        acc = if sign >= 0 { field.add(acc, w) } else { field.sub(acc, w) };
    }
    acc
}

/// The triples `(xy, x, y)` of the multiplication, as vectors of `Z_d^6`
/// under the carrier labeling.
pub fn multiplication_graph_triples(
    alg: &DaggerFrobenius,
    field: PrimeField,
) -> Result<Vec<FpVector>, GroupoidError> {
    let n = alg.carrier().size();
    let d = field.order() as usize;
    if n != d * d {
        return Err(GroupoidError::CarrierShape(n, field.order()));
    }
    let mut triples = Vec::new();
    for &(xy, z) in alg.multiplication().pairs() {
        let (x, y) = (xy as usize / n, xy as usize % n);
        let (zq, zp) = carrier_point(field, z as usize);
        let (xq, xp) = carrier_point(field, x);
        let (yq, yp) = carrier_point(field, y);
        triples.push(FpVector::new(field, vec![zq, zp, xq, xp, yq, yp])?);
    }
    Ok(triples)
}

/// The multiplication graph `{(xy, x, y)}` as a subspace of `Z_d^6`.
///
/// Errors if the triples do not form a linear subspace (the graph of a
/// groupoid multiplication compatible with the labeling always does: it is
/// parametrized by block, left offset and right offset).
pub fn multiplication_graph(
    alg: &DaggerFrobenius,
    field: PrimeField,
) -> Result<FpSubspace, GroupoidError> {
    let triples = multiplication_graph_triples(alg, field)?;
    let span = rref(field, 6, &triples)?;
    let expected = (field.order() as usize).pow(span.dim() as u32);
    if expected != triples.len() {
        return Err(GroupoidError::GraphNotLinear);
    }
    for t in &triples {
        if !span.contains(t) {
            return Err(GroupoidError::GraphNotLinear);
        }
    }
    Ok(span)
}

/// Whether a subspace equals its annihilator under the given twisted form
/// (checked literally: annihilator by linear solve, equality structurally).
pub fn is_lagrangian_under_twisted_form(
    field: PrimeField,
    sub: &FpSubspace,
    signs: [i8; 3],
) -> bool {
    // constraint rows: w such that twisted(w, b) = 0 for all basis b.
    // twisted(w, b) is linear in w; build its coefficient vector.
    let dim = sub.ambient_dim();
    let mut constraint_rows = Vec::new();
    for b in sub.basis() {
        let mut coeffs = vec![0u64; dim];
        for (pos, c) in coeffs.iter_mut().enumerate() {
            let mut probe = vec![0u64; dim];
            probe[pos] = 1;
            let probe = FpVector::new(field, probe).expect("in range");
            *c = twisted_form(field, &probe, b, signs);
        }
        constraint_rows.push(FpVector::new(field, coeffs).expect("in range"));
    }
    let ann = match rref(field, dim, &constraint_rows) {
        Ok(echelon) => {
            // solve the homogeneous system by brute force over the basis of
            // the kernel computed through rref of constraints
            let pivots: Vec<usize> = echelon
                .basis()
                .iter()
                .map(|b| b.coords().iter().position(|&x| x != 0).expect("echelon row"))
                .collect();
            let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
            let mut kernel_basis = Vec::new();
            for &fc in &free {
                let mut coords = vec![0u64; dim];
                coords[fc] = 1;
                for (row, &pc) in echelon.basis().iter().zip(&pivots) {
                    coords[pc] = field.neg(row.coords()[fc]);
                }
                kernel_basis.push(FpVector::new(field, coords).expect("in range"));
            }
            rref(field, dim, &kernel_basis).expect("well-formed")
        }
        Err(_) => return false,
    };
    ann == *sub
}

/// Checks that the given maps exhibit `h` as a subgroupoid of `g`: injective
/// on objects and arrows, commuting with all five structure maps, and closed
/// under composition.
pub fn is_subgroupoid(
    h: &Groupoid,
    g: &Groupoid,
    obj_map: &[usize],
    arr_map: &[usize],
) -> Result<bool, GroupoidError> {
    if obj_map.len() != h.objects.size() || arr_map.len() != h.arrows.size() {
        return Err(GroupoidError::Axiom("inclusion map lengths disagree".into()));
    }
    let inj = |m: &[usize], bound: usize| {
        let set: BTreeSet<usize> = m.iter().copied().collect();
        set.len() == m.len() && m.iter().all(|&x| x < bound)
    };
    if !inj(obj_map, g.objects.size()) || !inj(arr_map, g.arrows.size()) {
        return Err(GroupoidError::NotInjective);
    }
    for a in 0..h.arrows.size() {
        if g.source(arr_map[a]) != obj_map[h.source(a)] || g.target(arr_map[a]) != obj_map[h.target(a)] {
            return Ok(false);
        }
        if g.inverse(arr_map[a]) != arr_map[h.inverse(a)] {
            return Ok(false);
        }
    }
    for o in 0..h.objects.size() {
        if g.unit(obj_map[o]) != arr_map[h.unit(o)] {
            return Ok(false);
        }
    }
    for (a, b, c) in h.composable_pairs() {
        if g.compose(arr_map[a], arr_map[b]) != Some(arr_map[c]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the chosen subsets of objects and arrows are closed under the
/// ambient structure maps (units of chosen objects, endpoints, inverses and
/// composites of chosen arrows stay chosen).
pub fn closed_under_structure(g: &Groupoid, objs: &BTreeSet<usize>, arrs: &BTreeSet<usize>) -> bool {
    for &o in objs {
        if !arrs.contains(&g.unit(o)) {
            return false;
        }
    }
    for &a in arrs {
        if !objs.contains(&g.source(a)) || !objs.contains(&g.target(a)) {
            return false;
        }
        if !arrs.contains(&g.inverse(a)) {
            return false;
        }
        for &b in arrs {
            if let Some(c) = g.compose(a, b) {
                if !arrs.contains(&c) {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks that the given bijections form a groupoid isomorphism.
pub fn is_isomorphism(g: &Groupoid, h: &Groupoid, obj_map: &[usize], arr_map: &[usize]) -> bool {
    if g.objects.size() != h.objects.size() || g.arrows.size() != h.arrows.size() {
        return false;
    }
    let bij = |m: &[usize], n: usize| {
        m.len() == n && m.iter().copied().collect::<BTreeSet<_>>().len() == n && m.iter().all(|&x| x < n)
    };
    if !bij(obj_map, h.objects.size()) || !bij(arr_map, h.arrows.size()) {
        return false;
    }
    for a in 0..g.arrows.size() {
        if h.source(arr_map[a]) != obj_map[g.source(a)]
            || h.target(arr_map[a]) != obj_map[g.target(a)]
            || h.inverse(arr_map[a]) != arr_map[g.inverse(a)]
        {
            return false;
        }
    }
    for o in 0..g.objects.size() {
        if h.unit(obj_map[o]) != arr_map[g.unit(o)] {
            return false;
        }
    }
    // same number of composable pairs plus preservation gives equality
    let mut count = 0;
    for (a, b, c) in g.composable_pairs() {
        if h.compose(arr_map[a], arr_map[b]) != Some(arr_map[c]) {
            return false;
        }
        count += 1;
    }
    count == h.comp.len()
}

// ---------------------------------------------------------------------------
// Plain-text export
// ---------------------------------------------------------------------------

/// Edge-list export: `OBJ k`, `ARR g s t ginv`, `CMP g h gh` lines.
pub fn write_groupoid(g: &Groupoid) -> String {
    let mut out = String::new();
    for o in 0..g.objects.size() {
        out.push_str(&format!("OBJ {o}\n"));
    }
    for a in 0..g.arrows.size() {
        out.push_str(&format!("ARR {a} {} {} {}\n", g.source(a), g.target(a), g.inverse(a)));
    }
    for (a, b, c) in g.composable_pairs() {
        out.push_str(&format!("CMP {a} {b} {c}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcat::{build_spek_algebra, cyclic_group_algebra, verify_frobenius};

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn spek_groupoid_has_three_objects_and_z3_isotropy() {
        let alg = build_spek_algebra(f3());
        let g = groupoid_from_frobenius(&alg).unwrap();
        let objs: Vec<&str> = (0..g.objects().size()).map(|o| g.objects().label(o)).collect();
        assert_eq!(objs, ["1", "4", "7"]);
        assert_eq!(g.arrows().size(), 9);
        for o in 0..3 {
            let iso = g.isotropy(o);
            assert_eq!(iso.len(), 3);
            // each isotropy group is cyclic of order 3: any non-unit generates
            let unit = g.unit(o);
            for &a in &iso {
                if a == unit {
                    continue;
                }
                let sq = g.compose(a, a).unwrap();
                assert_ne!(sq, a);
                assert_eq!(g.compose(sq, a).unwrap(), unit);
            }
        }
    }

    #[test]
    fn cyclic_group_extracts_to_one_object() {
        for d in [3usize, 5, 7] {
            let alg = cyclic_group_algebra(d);
            let g = groupoid_from_frobenius(&alg).unwrap();
            assert_eq!(g.objects().size(), 1);
            assert_eq!(g.arrows().size(), d);
            assert_eq!(g.isotropy(0).len(), d);
        }
    }

    #[test]
    fn spek_d5_extracts_to_five_copies_of_z5() {
        let alg = build_spek_algebra(PrimeField::new(5).unwrap());
        let g = groupoid_from_frobenius(&alg).unwrap();
        assert_eq!(g.objects().size(), 5);
        assert_eq!(g.arrows().size(), 25);
        for o in 0..5 {
            assert_eq!(g.isotropy(o).len(), 5);
        }
    }

    #[test]
    fn extraction_round_trips_to_the_same_algebra() {
        for d in [3u64, 5] {
            let alg = build_spek_algebra(PrimeField::new(d).unwrap());
            let g = groupoid_from_frobenius(&alg).unwrap();
            let back = algebra_from_groupoid(&g);
            assert_eq!(back.multiplication().pairs(), alg.multiplication().pairs());
            assert_eq!(back.counit().pairs(), alg.counit().pairs());
        }
    }

    #[test]
    fn extraction_rejects_non_groupoid_input() {
        let alg = build_spek_algebra(f3());
        // adding a cross-block pair makes the multiplication multi-valued or
        // the unit structure ambiguous
        let mut pairs = alg.multiplication().pairs().clone();
        pairs.insert((0, 5));
        let m = Relation::new(alg.carrier().product(alg.carrier()), alg.carrier().clone(), pairs).unwrap();
        let broken = DaggerFrobenius::new(alg.carrier().clone(), m, alg.counit().clone()).unwrap();
        assert!(groupoid_from_frobenius(&broken).is_err());
    }

    #[test]
    fn pair_groupoid_shapes() {
        let trivial = pair_groupoid(&FinSet::range(1));
        assert_eq!(trivial.arrows().size(), 1);
        trivial.validate().unwrap();

        let p3 = pair_groupoid(&FinSet::range(3));
        assert_eq!(p3.arrows().size(), 9);
        p3.validate().unwrap();

        let p9 = pair_groupoid(&FinSet::range(9));
        assert_eq!(p9.arrows().size(), 81);
        p9.validate().unwrap();
    }

    #[test]
    fn endomorphism_monoid_is_the_pair_groupoid() {
        let alg = build_spek_algebra(f3());
        let end = endomorphism_monoid(&alg).unwrap();
        assert_eq!(end.carrier().size(), 81);
        // the unit is the diagonal {(a, a)}
        let unit_labels: Vec<&str> = end
            .unit_elements()
            .iter()
            .map(|&u| end.carrier().label(u))
            .collect();
        for (a, label) in unit_labels.iter().enumerate() {
            assert_eq!(*label, format!("{0},{0}", a + 1));
        }
        assert!(verify_frobenius(&end).all());

        let g = groupoid_from_frobenius(&end).unwrap();
        let pair = pair_groupoid(alg.carrier());
        // canonical bijection: arrow index is already the pair index, and
        // the i-th extracted object is the i-th diagonal point
        let obj_map: Vec<usize> = (0..9).collect();
        let arr_map: Vec<usize> = (0..81).collect();
        assert!(is_isomorphism(&g, &pair, &obj_map, &arr_map));
    }

    #[test]
    fn endomorphism_monoid_of_singleton_is_trivial() {
        let alg = cyclic_group_algebra(1);
        let end = endomorphism_monoid(&alg).unwrap();
        assert_eq!(end.carrier().size(), 1);
        assert!(verify_frobenius(&end).all());
    }

    #[test]
    fn endomorphism_monoid_d5_is_pair_groupoid_of_25_points() {
        let alg = build_spek_algebra(PrimeField::new(5).unwrap());
        let end = endomorphism_monoid(&alg).unwrap();
        let g = groupoid_from_frobenius(&end).unwrap();
        let pair = pair_groupoid(alg.carrier());
        assert_eq!(g.objects().size(), 25);
        assert_eq!(g.arrows().size(), 625);
        let obj_map: Vec<usize> = (0..25).collect();
        let arr_map: Vec<usize> = (0..625).collect();
        assert!(is_isomorphism(&g, &pair, &obj_map, &arr_map));
    }

    #[test]
    fn embedding_preserves_multiplication_and_unit() {
        let h = embed_h(&build_spek_algebra(f3())).unwrap();
        assert_eq!(h.pairs().len(), 27);
        assert!(embed_h(&cyclic_group_algebra(3)).is_ok());
    }

    #[test]
    fn embedding_fails_for_mutated_multiplication() {
        let alg = build_spek_algebra(f3());
        let mut pairs = alg.multiplication().pairs().clone();
        let first = *pairs.iter().next().unwrap();
        pairs.remove(&first);
        let m = Relation::new(alg.carrier().product(alg.carrier()), alg.carrier().clone(), pairs).unwrap();
        let mutant = DaggerFrobenius::new(alg.carrier().clone(), m, alg.counit().clone()).unwrap();
        assert!(embed_h(&mutant).is_err());
    }

    #[test]
    fn multiplication_graph_is_lagrangian_for_the_twisted_form() {
        let fd = f3();
        let alg = build_spek_algebra(fd);
        let graph = multiplication_graph(&alg, fd).unwrap();
        assert_eq!(graph.dim(), 3);
        assert_eq!(graph.ambient_dim(), 6);
        assert!(is_lagrangian_under_twisted_form(fd, &graph, [1, -1, -1]));
        assert!(!is_lagrangian_under_twisted_form(fd, &graph, [1, 1, 1]));
    }

    #[test]
    fn printed_basis_spans_a_lagrangian_for_its_twist() {
        // the three printed basis vectors span the graph with inverted first
        // argument, Lagrangian under the twist with minus on the third slot
        let fd = f3();
        let vectors = [
            FpVector::new(fd, vec![0, 0, 0, 1, 0, 1]).unwrap(),
            FpVector::new(fd, vec![0, 1, 0, 0, 0, 1]).unwrap(),
            FpVector::new(fd, vec![1, 0, 1, 0, 1, 0]).unwrap(),
        ];
        let span = rref(fd, 6, &vectors).unwrap();
        assert_eq!(span.dim(), 3);
        assert!(is_lagrangian_under_twisted_form(fd, &span, [1, 1, -1]));
        assert!(!is_lagrangian_under_twisted_form(fd, &span, [1, -1, -1]));
        // and it is not the literal multiplication graph
        let alg = build_spek_algebra(fd);
        assert_ne!(span, multiplication_graph(&alg, fd).unwrap());
    }

    #[test]
    fn graph_dimension_is_half_ambient_for_d5() {
        let fd = PrimeField::new(5).unwrap();
        let alg = build_spek_algebra(fd);
        let graph = multiplication_graph(&alg, fd).unwrap();
        assert_eq!(graph.dim(), 3);
        assert!(is_lagrangian_under_twisted_form(fd, &graph, [1, -1, -1]));
    }

    #[test]
    fn subgroupoid_checks() {
        let alg = build_spek_algebra(f3());
        let g = groupoid_from_frobenius(&alg).unwrap();
        // the whole groupoid includes into itself
        let all_obj: Vec<usize> = (0..3).collect();
        let all_arr: Vec<usize> = (0..9).collect();
        assert!(is_subgroupoid(&g, &g, &all_obj, &all_arr).unwrap());

        // a single isotropy group is a subgroupoid
        let iso = g.isotropy(0);
        let single = cyclic_group_algebra(3);
        let single_g = groupoid_from_frobenius(&single).unwrap();
        // map generator-compatible arrows: unit -> unit, then powers
        let unit = g.unit(0);
        let gen = *iso.iter().find(|&&a| a != unit).unwrap();
        let gen_sq = g.compose(gen, gen).unwrap();
        let arr_map = vec![unit, gen, gen_sq];
        assert!(is_subgroupoid(&single_g, &g, &[0], &arr_map).unwrap());

        // arrow subsets missing an inverse are not closed
        let objs: BTreeSet<usize> = [0].into();
        let missing: BTreeSet<usize> = [unit, gen].into();
        assert!(!closed_under_structure(&g, &objs, &missing));
        let closed: BTreeSet<usize> = [unit, gen, gen_sq].into();
        assert!(closed_under_structure(&g, &objs, &closed));

        // non-injective inclusion is an error
        assert!(is_subgroupoid(&single_g, &g, &[0], &[unit, gen, gen]).is_err());
    }

    #[test]
    fn export_lists_all_structure() {
        let alg = cyclic_group_algebra(2);
        let g = groupoid_from_frobenius(&alg).unwrap();
        let text = write_groupoid(&g);
        assert!(text.contains("OBJ 0"));
        assert!(text.contains("ARR 1 0 0 1"));
        assert!(text.contains("CMP 1 1 0"));
    }
}
