//! The dagger symmetric monoidal category of finite sets and relations,
//! special dagger Frobenius algebras, and the concrete block algebra on
//! `Z_d x Z_d` generalizing the nine-element example to any odd prime.
//!
//! Relations are stored sparsely as ordered pairs of 0-based indices but
//! behave exactly like boolean matrices. The tensor product is the cartesian
//! product with row-major indexing; product labels are joined flat (and the
//! one-element set contributes nothing), so the unitor and associator
//! isomorphisms are literal identities and composites can be checked for
//! equality structurally.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fplinalg::{FpMatrix, FpVector, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("object mismatch: {0} vs {1}")]
    ObjectMismatch(String, String),
    #[error("pair ({0}, {1}) out of range for {2}x{3}")]
    PairOutOfRange(usize, usize, usize, usize),
    #[error("expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("not a permutation of the carrier")]
    NotAPermutation,
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("field error: {0}")]
    Fp(#[from] crate::fplinalg::FpError),
}

/// A finite set with display labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinSet {
    labels: Arc<Vec<String>>,
}

impl FinSet {
    pub fn new(labels: Vec<String>) -> Self {
        FinSet { labels: Arc::new(labels) }
    }

    /// Labels `"1"`, `"2"`, ..., `"n"`.
    pub fn range(n: usize) -> Self {
        FinSet::new((1..=n).map(|k| k.to_string()).collect())
    }

    /// The one-element set.
    pub fn unit() -> Self {
        FinSet::new(vec!["\u{2022}".to_string()])
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_unit(&self) -> bool {
        self.labels.len() == 1 && self.labels[0] == "\u{2022}"
    }

    /// Cartesian product with row-major indexing. Labels are joined flat,
    /// with the one-element set contributing nothing, so nested products of
    /// the same factors in any association are equal as objects.
    pub fn product(&self, other: &FinSet) -> FinSet {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let mut labels = Vec::with_capacity(self.size() * other.size());
        for a in self.labels.iter() {
            for b in other.labels.iter() {
                labels.push(format!("{a},{b}"));
            }
        }
        FinSet::new(labels)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} elements}}", self.size())
    }
}

/// A relation between finite sets: a sparse boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relation {
    dom: FinSet,
    cod: FinSet,
    pairs: BTreeSet<(u32, u32)>,
}

impl Relation {
    pub fn new(dom: FinSet, cod: FinSet, pairs: BTreeSet<(u32, u32)>) -> Result<Self, RelError> {
        for &(x, y) in &pairs {
            if x as usize >= dom.size() || y as usize >= cod.size() {
                return Err(RelError::PairOutOfRange(x as usize, y as usize, dom.size(), cod.size()));
            }
        }
        Ok(Relation { dom, cod, pairs })
    }

    pub fn from_pairs(dom: FinSet, cod: FinSet, pairs: &[(usize, usize)]) -> Result<Self, RelError> {
        Relation::new(dom, cod, pairs.iter().map(|&(x, y)| (x as u32, y as u32)).collect())
    }

    pub fn empty(dom: FinSet, cod: FinSet) -> Self {
        Relation { dom, cod, pairs: BTreeSet::new() }
    }

    pub fn identity(set: &FinSet) -> Self {
        let pairs = (0..set.size() as u32).map(|i| (i, i)).collect();
        Relation { dom: set.clone(), cod: set.clone(), pairs }
    }

    /// The swap `X x Y -> Y x X`.
    pub fn swap(x: &FinSet, y: &FinSet) -> Self {
        let dom = x.product(y);
        let cod = y.product(x);
        let (nx, ny) = (x.size() as u32, y.size() as u32);
        let pairs = (0..nx)
            .flat_map(|a| (0..ny).map(move |b| (a * ny + b, b * nx + a)))
            .collect();
        Relation { dom, cod, pairs }
    }

    /// A state of `X`: the relation `1 -> X` hitting exactly `elements`.
    pub fn state(x: &FinSet, elements: &[usize]) -> Result<Self, RelError> {
        Relation::from_pairs(FinSet::unit(), x.clone(), &elements.iter().map(|&e| (0, e)).collect::<Vec<_>>())
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn pairs(&self) -> &BTreeSet<(u32, u32)> {
        &self.pairs
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x as u32, y as u32))
    }

    /// Image of a domain element.
    pub fn image_of(&self, x: usize) -> Vec<usize> {
        self.pairs
            .range((x as u32, 0)..=(x as u32, u32::MAX))
            .map(|&(_, y)| y as usize)
            .collect()
    }

    pub fn is_total(&self) -> bool {
        let firsts: BTreeSet<u32> = self.pairs.iter().map(|&(x, _)| x).collect();
        firsts.len() == self.dom.size()
    }

    /// Diagrammatic composite: `self` followed by `next` (`next o self`).
    pub fn then(&self, next: &Relation) -> Result<Relation, RelError> {
        if self.cod != next.dom {
            return Err(RelError::ObjectMismatch(self.cod.to_string(), next.dom.to_string()));
        }
        let mut by_mid: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &(y, z) in &next.pairs {
            by_mid.entry(y).or_default().push(z);
        }
        let mut pairs = BTreeSet::new();
        for &(x, y) in &self.pairs {
            if let Some(zs) = by_mid.get(&y) {
                for &z in zs {
                    pairs.insert((x, z));
                }
            }
        }
        Ok(Relation { dom: self.dom.clone(), cod: next.cod.clone(), pairs })
    }

    /// The relational converse (dagger).
    pub fn dagger(&self) -> Relation {
        Relation {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    /// Tensor (cartesian) product of relations, row-major indexing.
    pub fn product(&self, other: &Relation) -> Relation {
        let dom = self.dom.product(&other.dom);
        let cod = self.cod.product(&other.cod);
        let (od, oc) = (other.dom.size() as u32, other.cod.size() as u32);
        let mut pairs = BTreeSet::new();
        for &(x, y) in &self.pairs {
            for &(x2, y2) in &other.pairs {
                pairs.insert((x * od + x2, y * oc + y2));
            }
        }
        Relation { dom, cod, pairs }
    }
}

/// Composition in application order: `compose(r, s) = s o r` (first `r`, then `s`).
pub fn compose(r: &Relation, s: &Relation) -> Result<Relation, RelError> {
    r.then(s)
}

/// An algebra candidate `(X, m, e)` with `m : X x X -> X` and `e : X -> 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaggerFrobenius {
    carrier: FinSet,
    m: Relation,
    e: Relation,
}

impl DaggerFrobenius {
    pub fn new(carrier: FinSet, m: Relation, e: Relation) -> Result<Self, RelError> {
        let xx = carrier.product(&carrier);
        if *m.dom() != xx || *m.cod() != carrier {
            return Err(RelError::ShapeMismatch {
                expected: format!("m : {}^2 -> {}", carrier.size(), carrier.size()),
                got: format!("m : {} -> {}", m.dom().size(), m.cod().size()),
            });
        }
        if *e.dom() != carrier || !e.cod().is_unit() {
            return Err(RelError::ShapeMismatch {
                expected: format!("e : {} -> 1", carrier.size()),
                got: format!("e : {} -> {}", e.dom().size(), e.cod().size()),
            });
        }
        Ok(DaggerFrobenius { carrier, m, e })
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    /// The multiplication `m : X x X -> X`.
    pub fn multiplication(&self) -> &Relation {
        &self.m
    }

    /// The deleting relation `e : X -> 1`; its dagger is the unit state.
    pub fn counit(&self) -> &Relation {
        &self.e
    }

    /// Unit elements (the image of the unit state).
    pub fn unit_elements(&self) -> Vec<usize> {
        self.e.pairs().iter().map(|&(x, _)| x as usize).collect()
    }

    /// The compact structure `eta = m-dagger after e-dagger : 1 -> X x X`.
    pub fn cup(&self) -> Relation {
        self.e.dagger().then(&self.m.dagger()).expect("shapes fixed by constructor")
    }
}

/// Axiom report for a dagger Frobenius algebra candidate: the Frobenius law
/// (F), specialness (M), associativity (A) and unitality (U). When unital,
/// the witnessing counit is returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub frobenius: bool,
    pub special: bool,
    pub associative: bool,
    pub unital: bool,
    pub unit_witness: Option<Relation>,
}

impl FrobeniusReport {
    pub fn all(&self) -> bool {
        self.frobenius && self.special && self.associative && self.unital
    }
}

impl fmt::Display for FrobeniusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "pass" } else { "FAIL" };
        write!(
            f,
            "F={} M={} A={} U={}",
            mark(self.frobenius),
            mark(self.special),
            mark(self.associative),
            mark(self.unital)
        )
    }
}

/// Evaluates the four axioms by exact relation equality.
pub fn verify_frobenius(alg: &DaggerFrobenius) -> FrobeniusReport {
    let x = alg.carrier();
    let id = Relation::identity(x);
    let m = alg.multiplication();
    let md = m.dagger();
    let e_state = alg.counit().dagger();

    let chain = |a: &Relation, b: &Relation| a.then(b).expect("shapes align");

    // (F): (1 x m) o (m-dagger x 1) = m-dagger o m = (m x 1) o (1 x m-dagger)
    let left = chain(&md.product(&id), &id.product(m));
    let mid = chain(m, &md);
    let right = chain(&id.product(&md), &m.product(&id));
    let frobenius = left == mid && mid == right;

    // (M): m o m-dagger = 1
    let special = chain(&md, m) == id;

    // (A): m o (1 x m) = m o (m x 1)
    let associative = chain(&id.product(m), m) == chain(&m.product(&id), m);

    // (U): m o (e-dagger x 1) = 1 = m o (1 x e-dagger)
    let left_unit = chain(&e_state.product(&id), m) == id;
    let right_unit = chain(&id.product(&e_state), m) == id;
    let unital = left_unit && right_unit;

    FrobeniusReport {
        frobenius,
        special,
        associative,
        unital,
        unit_witness: unital.then(|| alg.counit().clone()),
    }
}

/// Checks the snake equations for `eta = m-dagger after e-dagger`.
pub fn verify_compact(alg: &DaggerFrobenius) -> bool {
    let x = alg.carrier();
    let id = Relation::identity(x);
    let eta = alg.cup();
    let cap = eta.dagger();
    let chain = |a: &Relation, b: &Relation| a.then(b).expect("shapes align");
    let snake1 = chain(&id.product(&eta), &cap.product(&id));
    let snake2 = chain(&eta.product(&id), &id.product(&cap));
    snake1 == id && snake2 == id
}

/// The transpose `name(r) = (1 x r) o eta : 1 -> X x Y` of `r : X -> Y`.
pub fn name_of(r: &Relation, a: &DaggerFrobenius) -> Result<Relation, RelError> {
    a.cup().then(&Relation::identity(a.carrier()).product(r))
}

/// Checks the two displayed conditions defining morphisms of Frobenius
/// algebras, by exact relation equality.
pub fn verify_frobenius_morphism(
    r: &Relation,
    a: &DaggerFrobenius,
    b: &DaggerFrobenius,
) -> Result<bool, RelError> {
    if r.dom() != a.carrier() || r.cod() != b.carrier() {
        return Err(RelError::ShapeMismatch {
            expected: format!("r : {} -> {}", a.carrier().size(), b.carrier().size()),
            got: format!("r : {} -> {}", r.dom().size(), r.cod().size()),
        });
    }
    let idx = Relation::identity(a.carrier());
    let idy = Relation::identity(b.carrier());
    let name_r = name_of(r, a)?;

    // (m_X x m_Y) o (1 x swap x 1) o (name x name) = name
    let shuffle = idx.product(&Relation::swap(b.carrier(), a.carrier())).product(&idy);
    let lhs = name_r
        .product(&name_r)
        .then(&shuffle)?
        .then(&a.multiplication().product(b.multiplication()))?;
    let cond1 = lhs == name_r;

    // (r x eta_X-dagger) o (m_X-dagger x 1) o (e_X-dagger x 1)
    //   = (e_Y x 1) o (m_Y x 1) o (r x eta_Y)
    let lhs2 = a
        .counit()
        .dagger()
        .product(&idx)
        .then(&a.multiplication().dagger().product(&idx))?
        .then(&r.product(&a.cup().dagger()))?;
    let rhs2 = r
        .product(&b.cup())
        .then(&b.multiplication().product(&idy))?
        .then(&b.counit().product(&idy))?;
    let cond2 = lhs2 == rhs2;

    Ok(cond1 && cond2)
}

/// Index of the phase point `(q, p)` in the carrier labeling `1..d^2`,
/// `k <-> (block, offset) = (q, p)` with `block = ceil(k/d) - 1` and
/// `offset = (k-1) mod d`.
pub fn carrier_index(field: PrimeField, q: u64, p: u64) -> usize {
    (q * field.order() + p) as usize
}

/// Inverse of [`carrier_index`].
pub fn carrier_point(field: PrimeField, idx: usize) -> (u64, u64) {
    let d = field.order() as usize;
    ((idx / d) as u64, (idx % d) as u64)
}

/// The block algebra on `X = Z_d x Z_d`: the disjoint union of `d` copies of
/// the additive group `Z_d`, with `(i, a) . (i, b) = (i, a + b)` and units
/// `(i, 0)`. At `d = 3` the units are `{1, 4, 7}` and the copyable states of
/// the comultiplication are the three blocks.
pub fn build_spek_algebra(field: PrimeField) -> DaggerFrobenius {
    let d = field.order() as usize;
    let carrier = FinSet::range(d * d);
    let xx = carrier.product(&carrier);
    let mut m_pairs = BTreeSet::new();
    for i in 0..d as u64 {
        for a in 0..d as u64 {
            for b in 0..d as u64 {
                let x = carrier_index(field, i, a);
                let y = carrier_index(field, i, b);
                let z = carrier_index(field, i, field.add(a, b));
                m_pairs.insert(((x * d * d + y) as u32, z as u32));
            }
        }
    }
    let m = Relation::new(xx, carrier.clone(), m_pairs).expect("indices in range");
    let e_pairs = (0..d as u64)
        .map(|i| (carrier_index(field, i, 0) as u32, 0))
        .collect();
    let e = Relation::new(carrier.clone(), FinSet::unit(), e_pairs).expect("indices in range");
    DaggerFrobenius { carrier, m, e }
}

/// The group algebra of `Z_d` in Rel: one copy of the additive group.
pub fn cyclic_group_algebra(d: usize) -> DaggerFrobenius {
    let carrier = FinSet::new((0..d).map(|k| k.to_string()).collect());
    let xx = carrier.product(&carrier);
    let mut m_pairs = BTreeSet::new();
    for a in 0..d {
        for b in 0..d {
            m_pairs.insert(((a * d + b) as u32, ((a + b) % d) as u32));
        }
    }
    let m = Relation::new(xx, carrier.clone(), m_pairs).expect("indices in range");
    let e = Relation::from_pairs(carrier.clone(), FinSet::unit(), &[(0, 0)]).expect("in range");
    DaggerFrobenius { carrier, m, e }
}

/// The multiplication presented the way the nine-element table is printed:
/// each element `k` is related to the graph `{(x, x.k)}` of right translation
/// by `k` (partial, since `x.k` is only defined within `k`'s block).
pub fn right_translation_graph(alg: &DaggerFrobenius) -> Relation {
    let n = alg.carrier().size();
    let xx = alg.carrier().product(alg.carrier());
    let mut pairs = BTreeSet::new();
    for &(xy, z) in alg.multiplication().pairs() {
        let x = xy as usize / n;
        let k = xy as usize % n;
        pairs.insert((k as u32, (x * n + z as usize) as u32));
    }
    Relation { dom: alg.carrier().clone(), cod: xx, pairs }
}

/// All copyable states of the algebra: states `c : 1 -> X` with
/// `m-dagger o c = c x c` and `e o c` total.
///
/// Candidates are generated as the per-unit isotropy sets (elements that
/// compose with a given unit on both sides) and then filtered by the literal
/// relational conditions, which keeps the search linear in the carrier
/// instead of over all `2^|X|` subsets.
pub fn copyable_states(alg: &DaggerFrobenius) -> Vec<Relation> {
    let n = alg.carrier().size();
    let composable: BTreeSet<(u32, u32)> = alg
        .multiplication()
        .pairs()
        .iter()
        .map(|&(xy, _)| ((xy as usize / n) as u32, (xy as usize % n) as u32))
        .collect();
    let mut out = Vec::new();
    for u in alg.unit_elements() {
        let candidate: Vec<usize> = (0..n)
            .filter(|&g| composable.contains(&(g as u32, u as u32)) && composable.contains(&(u as u32, g as u32)))
            .collect();
        let c = Relation::state(alg.carrier(), &candidate).expect("in range");
        if is_copyable(alg, &c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out.sort();
    out
}

/// The literal copyability conditions for a state `c : 1 -> X`.
pub fn is_copyable(alg: &DaggerFrobenius, c: &Relation) -> bool {
    let copied = c.then(&alg.multiplication().dagger()).expect("shapes align");
    let squared = c.product(c);
    // c x c : 1 x 1 -> X x X and 1 x 1 = 1 under the flat product
    copied == squared && c.then(alg.counit()).map(|r| r.is_total()).unwrap_or(false)
}

/// Conjugates an algebra by a permutation of its carrier:
/// `m' = s o m o (s^{-1} x s^{-1})`, `e' = e o s^{-1}`.
pub fn conjugate_by_permutation(alg: &DaggerFrobenius, perm: &[usize]) -> Result<DaggerFrobenius, RelError> {
    let n = alg.carrier().size();
    if perm.len() != n {
        return Err(RelError::NotAPermutation);
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(RelError::NotAPermutation);
        }
        seen[p] = true;
    }
    let m_pairs = alg
        .multiplication()
        .pairs()
        .iter()
        .map(|&(xy, z)| {
            let (x, y) = (xy as usize / n, xy as usize % n);
            ((perm[x] * n + perm[y]) as u32, perm[z as usize] as u32)
        })
        .collect();
    let e_pairs = alg
        .counit()
        .pairs()
        .iter()
        .map(|&(x, dot)| (perm[x as usize] as u32, dot))
        .collect();
    Ok(DaggerFrobenius {
        carrier: alg.carrier().clone(),
        m: Relation::new(alg.carrier().product(alg.carrier()), alg.carrier().clone(), m_pairs)?,
        e: Relation::new(alg.carrier().clone(), FinSet::unit(), e_pairs)?,
    })
}

/// The permutation of carrier indices induced by the affine symplectic point
/// map `m -> S m + a` on the phase space (one degree of freedom).
pub fn affine_point_permutation(
    field: PrimeField,
    s: &FpMatrix,
    a: &FpVector,
) -> Result<Vec<usize>, RelError> {
    let d = field.order() as usize;
    let mut perm = vec![0usize; d * d];
    for (slot, item) in perm.iter_mut().enumerate() {
        let (q, p) = carrier_point(field, slot);
        let v = FpVector::new(field, vec![q, p])?;
        let image = s.mul_vec(&v)?.add(a)?;
        *item = carrier_index(field, image.coords()[0], image.coords()[1]);
    }
    Ok(perm)
}

// ---------------------------------------------------------------------------
// Plain-text import/export
// ---------------------------------------------------------------------------

/// Serializes a relation as `REL dom=<n> cod=<m>` followed by 0-based pairs.
pub fn write_relation(r: &Relation) -> String {
    let mut out = format!("REL dom={} cod={}\n", r.dom().size(), r.cod().size());
    for &(x, y) in r.pairs() {
        out.push_str(&format!("{x} {y}\n"));
    }
    out
}

/// An algebra file is the `m` block followed by the `e` block.
pub fn write_algebra(alg: &DaggerFrobenius) -> String {
    format!("{}{}", write_relation(alg.multiplication()), write_relation(alg.counit()))
}

struct RelBlock {
    dom: usize,
    cod: usize,
    pairs: Vec<(usize, usize)>,
}

fn parse_blocks(text: &str) -> Result<Vec<RelBlock>, RelError> {
    let mut blocks: Vec<RelBlock> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("REL ") {
            let mut dom = None;
            let mut cod = None;
            for part in rest.split_whitespace() {
                if let Some(v) = part.strip_prefix("dom=") {
                    dom = v.parse::<usize>().ok();
                } else if let Some(v) = part.strip_prefix("cod=") {
                    cod = v.parse::<usize>().ok();
                }
            }
            match (dom, cod) {
                (Some(dom), Some(cod)) => blocks.push(RelBlock { dom, cod, pairs: Vec::new() }),
                _ => {
                    return Err(RelError::Parse {
                        line: lineno + 1,
                        reason: "REL header needs dom=<n> cod=<m>".into(),
                    })
                }
            }
        } else {
            let block = blocks.last_mut().ok_or(RelError::Parse {
                line: lineno + 1,
                reason: "pair before any REL header".into(),
            })?;
            let mut it = line.split_whitespace();
            let x = it.next().and_then(|t| t.parse::<usize>().ok());
            let y = it.next().and_then(|t| t.parse::<usize>().ok());
            match (x, y, it.next()) {
                (Some(x), Some(y), None) => block.pairs.push((x, y)),
                _ => {
                    return Err(RelError::Parse {
                        line: lineno + 1,
                        reason: format!("expected `x y`, got {line:?}"),
                    })
                }
            }
        }
    }
    if blocks.is_empty() {
        return Err(RelError::Parse { line: 0, reason: "no REL blocks found".into() });
    }
    Ok(blocks)
}

/// Reads a single relation (labels are generated as `1..n`).
pub fn read_relation(text: &str) -> Result<Relation, RelError> {
    let blocks = parse_blocks(text)?;
    let b = &blocks[0];
    Relation::from_pairs(FinSet::range(b.dom), FinSet::range(b.cod), &b.pairs)
}

/// Reads an algebra: the first block is `m : X^2 -> X`, the second `e : X -> 1`.
pub fn read_algebra(text: &str) -> Result<DaggerFrobenius, RelError> {
    let blocks = parse_blocks(text)?;
    if blocks.len() != 2 {
        return Err(RelError::Parse {
            line: 0,
            reason: format!("algebra needs exactly 2 REL blocks (m, e), found {}", blocks.len()),
        });
    }
    let (mb, eb) = (&blocks[0], &blocks[1]);
    let n = eb.dom;
    if mb.dom != n * n || mb.cod != n || eb.cod != 1 {
        return Err(RelError::Parse {
            line: 0,
            reason: format!(
                "inconsistent shapes: m is {}->{}, e is {}->{}; need {}->{} and {}->1",
                mb.dom,
                mb.cod,
                eb.dom,
                eb.cod,
                n * n,
                n,
                n
            ),
        });
    }
    let carrier = FinSet::range(n);
    let m = Relation::from_pairs(carrier.product(&carrier), carrier.clone(), &mb.pairs)?;
    let e = Relation::from_pairs(carrier.clone(), FinSet::unit(), &eb.pairs)?;
    DaggerFrobenius::new(carrier, m, e)
}
