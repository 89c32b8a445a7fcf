//! Finite sesquiads: monoids with zero carrying a partial addition that
//! embeds them into a ring.  Construction, validation, pairs inside finite
//! residue rings, tensor products, direct products, morphisms and
//! localization at a multiplicative subset.

use crate::lattice::{hnf, preimage, IntMatrix, Lattice};
use crate::monoid::{MonoidError, MonoidTable};
use crate::ring::{kernel_of_map, Frac, LocalizedRing, RingElement, RingError, UniversalRing};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SesquiadError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("relation refers to element index {0}, table has {1} elements")]
    BadRelationIndex(usize, usize),
    #[error("relation has no terms")]
    EmptyRelation,
    #[error("subset is not multiplicatively closed: {0} * {1} missing")]
    SubsetNotClosed(String, String),
    #[error("subset must contain the zero tuple and the unit tuple")]
    SubsetMissingConstants,
    #[error("subset tuple {0} does not match the number of moduli")]
    BadTupleLength(String),
    #[error("duplicate subset tuple {0}")]
    DuplicateTuple(String),
    #[error("moduli must be >= 1")]
    BadModulus,
    #[error("localization subset is not multiplicatively closed")]
    NotMultiplicative,
    #[error("localization subset must contain 1")]
    MissingOne,
    #[error("partition is not a congruence")]
    NotACongruence,
    #[error("value set did not close under multiplication")]
    NotClosedUnderProduct,
}

/// Declared sum: sum of coefficient * element equals the named element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionRelation {
    pub terms: Vec<(BigInt, usize)>,
    pub sum: usize,
}

/// Ambient description of a pair sesquiad: the ring is the product of the
/// residue rings modulo each modulus, the monoid is the listed subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDescriptor {
    pub moduli: Vec<u64>,
    pub subset: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Abstract,
    Pair(PairDescriptor),
}

/// A validated sesquiad: monoid table, generating addition relations, the
/// universal ring and the canonical images of all elements in it.
///
/// The canonical map into the universal ring is injective by construction;
/// a sum query "is k1 a1 + ... + kn an defined?" is a lattice membership
/// test against the element images.
#[derive(Clone, Debug)]
pub struct Sesquiad {
    table: MonoidTable,
    relations: Vec<AdditionRelation>,
    provenance: Provenance,
    ring: UniversalRing,
    images: Vec<RingElement>,
}

impl Sesquiad {
    /// Validates the table, builds the universal ring from the translate
    /// closure of the relations and checks that no two elements collapse.
    pub fn new(
        table: MonoidTable,
        relations: Vec<AdditionRelation>,
        provenance: Provenance,
    ) -> Result<Self, SesquiadError> {
        let n = table.len();
        if n == 1 {
            // the zero sesquiad: legal as a computed value, never parsed
            let ring = UniversalRing::from_parts(vec![], vec![], vec![], Lattice::zero(0));
            let images = vec![ring.zero()];
            return Ok(Sesquiad { table, relations, provenance, ring, images });
        }
        for r in &relations {
            if r.terms.is_empty() {
                return Err(SesquiadError::EmptyRelation);
            }
            if r.sum >= n {
                return Err(SesquiadError::BadRelationIndex(r.sum, n));
            }
            for (_, a) in &r.terms {
                if *a >= n {
                    return Err(SesquiadError::BadRelationIndex(*a, n));
                }
            }
        }
        let rel = relation_lattice(&table, &relations);
        let (ring, images) = UniversalRing::from_monoid(&table, rel, true)?;
        Ok(Sesquiad { table, relations, provenance, ring, images })
    }

    pub fn trivial_addition(table: MonoidTable) -> Result<Self, SesquiadError> {
        Sesquiad::new(table, Vec::new(), Provenance::Abstract)
    }

    /// The one-element sesquiad where 1 = 0.
    pub fn zero_sesquiad() -> Self {
        Sesquiad::new(MonoidTable::zero_monoid(), Vec::new(), Provenance::Abstract)
            .expect("zero sesquiad always builds")
    }

    pub fn is_zero_sesquiad(&self) -> bool {
        self.table.len() == 1
    }

    /// The initial sesquiad {0, 1} with trivial addition.
    pub fn initial() -> Self {
        Sesquiad::trivial_addition(
            MonoidTable::new(vec!["0".into(), "1".into()], 0, 1, vec![0, 0, 0, 1]).unwrap(),
        )
        .expect("initial sesquiad builds")
    }

    /// Sesquiad of a subset of a product of residue rings, with the maximal
    /// addition induced by the ambient ring.  The universal ring is the
    /// subring generated by the subset.
    pub fn from_pair(d: &PairDescriptor) -> Result<Self, SesquiadError> {
        if d.moduli.is_empty() || d.moduli.iter().any(|&m| m == 0) {
            return Err(SesquiadError::BadModulus);
        }
        let k = d.moduli.len();
        let tuple_name = |t: &[u64]| -> String {
            if k == 1 {
                t[0].to_string()
            } else {
                format!("({})", t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        };
        let mut subset: Vec<Vec<u64>> = Vec::new();
        for t in &d.subset {
            if t.len() != k {
                return Err(SesquiadError::BadTupleLength(tuple_name(t)));
            }
            let norm: Vec<u64> = t.iter().zip(&d.moduli).map(|(x, m)| x % m).collect();
            if subset.contains(&norm) {
                return Err(SesquiadError::DuplicateTuple(tuple_name(&norm)));
            }
            subset.push(norm);
        }
        let zero_t: Vec<u64> = vec![0; k];
        let one_t: Vec<u64> = d.moduli.iter().map(|&m| 1 % m).collect();
        let zero = subset.iter().position(|t| *t == zero_t);
        let one = subset.iter().position(|t| *t == one_t);
        let (Some(zero), Some(one)) = (zero, one) else {
            return Err(SesquiadError::SubsetMissingConstants);
        };
        if zero == one && subset.len() > 1 {
            return Err(SesquiadError::SubsetMissingConstants);
        }
        let n = subset.len();
        let mut mul = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod: Vec<u64> = subset[i]
                    .iter()
                    .zip(&subset[j])
                    .zip(&d.moduli)
                    .map(|((a, b), m)| (a * b) % m)
                    .collect();
                match subset.iter().position(|t| *t == prod) {
                    Some(p) => mul[i * n + j] = p,
                    None => {
                        return Err(SesquiadError::SubsetNotClosed(
                            tuple_name(&subset[i]),
                            tuple_name(&subset[j]),
                        ))
                    }
                }
            }
        }
        let names: Vec<String> = subset.iter().map(|t| tuple_name(t)).collect();
        let table = MonoidTable::new(names, zero, one, mul)?;
        // kernel of Z0[A] -> ambient ring, over the nonzero-element basis
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (i, t) in subset.iter().enumerate() {
            if i == zero {
                continue;
            }
            rows.push(t.iter().map(|&x| BigInt::from(x)).collect());
        }
        let mut diag = IntMatrix::zero(k, k);
        for (i, &m) in d.moduli.iter().enumerate() {
            diag.set(i, i, BigInt::from(m));
        }
        let kernel = preimage(&IntMatrix::from_rows(rows), &hnf(&diag));
        let relations = relations_from_kernel(&table, &kernel);
        Sesquiad::new(table, relations, Provenance::Pair(d.clone()))
    }

    /// Materializes the submonoid of `ring` spanned by the given element
    /// vectors, with the addition induced by the ring.  Vectors must be
    /// pairwise distinct, closed under multiplication, and contain 0 and 1.
    pub fn from_ring_image(
        ring: &UniversalRing,
        values: &[RingElement],
        names: Vec<String>,
    ) -> Result<Self, SesquiadError> {
        let n = values.len();
        let zero = values.iter().position(|v| v.is_zero()).expect("image must contain 0");
        let one = values.iter().position(|v| *v == ring.one()).expect("image must contain 1");
        let mut mul = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                let p = ring.mul(&values[i], &values[j]);
                match values.iter().position(|v| *v == p) {
                    Some(ix) => mul[i * n + j] = ix,
                    None => return Err(SesquiadError::NotClosedUnderProduct),
                }
            }
        }
        let table = MonoidTable::new(names, zero, one, mul)?;
        let nonzero: Vec<RingElement> =
            (0..n).filter(|&i| i != zero).map(|i| values[i].clone()).collect();
        let kernel = kernel_of_map(&nonzero, ring);
        let relations = relations_from_kernel(&table, &kernel);
        Sesquiad::new(table, relations, Provenance::Abstract)
    }

    pub fn table(&self) -> &MonoidTable {
        &self.table
    }

    pub fn relations(&self) -> &[AdditionRelation] {
        &self.relations
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn ring(&self) -> &UniversalRing {
        &self.ring
    }

    pub fn images(&self) -> &[RingElement] {
        &self.images
    }

    pub fn image(&self, elem: usize) -> &RingElement {
        &self.images[elem]
    }

    pub fn image_of_name(&self, name: &str) -> Option<&RingElement> {
        self.table.index_of(name).map(|i| &self.images[i])
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of declared relations with a single term (accepted, surfaced
    /// in reports).
    pub fn unary_relation_count(&self) -> usize {
        self.relations.iter().filter(|r| r.terms.len() == 1).count()
    }

    /// Value of an integer combination of elements in the universal ring.
    pub fn combination(&self, terms: &[(BigInt, usize)]) -> RingElement {
        let mut acc = self.ring.zero();
        for (k, a) in terms {
            acc = self.ring.add(&acc, &self.ring.scalar_mul(k, &self.images[*a]));
        }
        acc
    }

    /// Whether the combination is a defined sum, i.e. lands on the image of
    /// an element; returns that element.
    pub fn sum_defined(&self, terms: &[(BigInt, usize)]) -> Option<usize> {
        let v = self.combination(terms);
        self.images.iter().position(|im| *im == v)
    }

    /// Componentwise product sesquiad; the universal ring is the product
    /// ring.
    pub fn direct_product(a: &Sesquiad, b: &Sesquiad) -> Result<Sesquiad, SesquiadError> {
        let da = a.ring.dim();
        let db = b.ring.dim();
        let dim = da + db;
        let mut names = Vec::with_capacity(dim);
        for n in a.ring.basis_names() {
            names.push(format!("({n},0)"));
        }
        for n in b.ring.basis_names() {
            names.push(format!("(0,{n})"));
        }
        let embed_a = |v: &[BigInt]| -> Vec<BigInt> {
            let mut w = v.to_vec();
            w.extend(std::iter::repeat(BigInt::zero()).take(db));
            w
        };
        let embed_b = |v: &[BigInt]| -> Vec<BigInt> {
            let mut w = vec![BigInt::zero(); da];
            w.extend_from_slice(v);
            w
        };
        let mut pair_products = vec![vec![BigInt::zero(); dim]; dim * dim];
        for i in 0..da {
            for j in 0..da {
                let mut e = self_basis(da, i);
                e = a.ring.reduce(&e).unwrap().coords;
                let f = a.ring.reduce(&self_basis(da, j)).unwrap().coords;
                let p = a.ring.mul(
                    &RingElement { coords: e },
                    &RingElement { coords: f },
                );
                pair_products[i * dim + j] = embed_a(&p.coords);
            }
        }
        for i in 0..db {
            for j in 0..db {
                let p = b.ring.mul(
                    &RingElement { coords: self_basis(db, i) },
                    &RingElement { coords: self_basis(db, j) },
                );
                pair_products[(da + i) * dim + (da + j)] = embed_b(&p.coords);
            }
        }
        let mut rel_rows: Vec<Vec<BigInt>> = Vec::new();
        for r in a.ring.relation_lattice().basis().row_vecs() {
            rel_rows.push(embed_a(&r));
        }
        for r in b.ring.relation_lattice().basis().row_vecs() {
            rel_rows.push(embed_b(&r));
        }
        let rel = if rel_rows.is_empty() {
            Lattice::zero(dim)
        } else {
            hnf(&IntMatrix::from_rows(rel_rows))
        };
        let one: Vec<BigInt> = {
            let mut w = a.ring.one().coords;
            w.extend(b.ring.one().coords);
            w
        };
        let prod_ring = UniversalRing::from_parts(names, one, pair_products, rel);
        let mut values = Vec::new();
        let mut names = Vec::new();
        for x in 0..a.len() {
            for y in 0..b.len() {
                let mut v = a.image(x).coords.clone();
                v.extend(b.image(y).coords.clone());
                values.push(prod_ring.reduce(&v).unwrap());
                names.push(format!("({},{})", a.table.name(x), b.table.name(y)));
            }
        }
        Sesquiad::from_ring_image(&prod_ring, &values, names)
    }

    /// Tensor product: the monoid of decomposable tensors inside the tensor
    /// product of the universal rings, which is its universal ring.
    pub fn tensor(a: &Sesquiad, b: &Sesquiad) -> Result<Sesquiad, SesquiadError> {
        let da = a.ring.dim();
        let db = b.ring.dim();
        let dim = da * db;
        let kron = |u: &[BigInt], v: &[BigInt]| -> Vec<BigInt> {
            let mut w = vec![BigInt::zero(); dim];
            for (i, ui) in u.iter().enumerate() {
                if ui.is_zero() {
                    continue;
                }
                for (j, vj) in v.iter().enumerate() {
                    if !vj.is_zero() {
                        w[i * db + j] = ui * vj;
                    }
                }
            }
            w
        };
        let mut names = Vec::with_capacity(dim);
        for na in a.ring.basis_names() {
            for nb in b.ring.basis_names() {
                names.push(format!("{na}⊗{nb}"));
            }
        }
        let mut pair_products = Vec::with_capacity(dim * dim);
        for i1 in 0..da {
            for j1 in 0..db {
                for i2 in 0..da {
                    for j2 in 0..db {
                        let pa = a.ring.mul(
                            &RingElement { coords: self_basis(da, i1) },
                            &RingElement { coords: self_basis(da, i2) },
                        );
                        let pb = b.ring.mul(
                            &RingElement { coords: self_basis(db, j1) },
                            &RingElement { coords: self_basis(db, j2) },
                        );
                        pair_products.push(kron(&pa.coords, &pb.coords));
                    }
                }
            }
        }
        let mut rel_rows: Vec<Vec<BigInt>> = Vec::new();
        for r in a.ring.relation_lattice().basis().row_vecs() {
            for j in 0..db {
                rel_rows.push(kron(&r, &self_basis(db, j)));
            }
        }
        for r in b.ring.relation_lattice().basis().row_vecs() {
            for i in 0..da {
                rel_rows.push(kron(&self_basis(da, i), &r));
            }
        }
        let rel = if rel_rows.is_empty() {
            Lattice::zero(dim)
        } else {
            hnf(&IntMatrix::from_rows(rel_rows))
        };
        let one = kron(&a.ring.one().coords, &b.ring.one().coords);
        let tens_ring = UniversalRing::from_parts(names, one, pair_products, rel);
        // decomposable tensors, deduped by canonical form
        let mut values: Vec<RingElement> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        for x in 0..a.len() {
            for y in 0..b.len() {
                let v = tens_ring.reduce(&kron(&a.image(x).coords, &b.image(y).coords)).unwrap();
                if !values.contains(&v) {
                    names.push(format!("{}⊗{}", a.table.name(x), b.table.name(y)));
                    values.push(v);
                }
            }
        }
        Sesquiad::from_ring_image(&tens_ring, &values, names)
    }

    /// Quotient by a congruence (multiplicative compatibility is checked;
    /// separation is re-checked by the constructor).  The quotient carries
    /// the minimal addition: its universal ring is R_A modulo the ideal
    /// generated by the identified differences.
    pub fn quotient(&self, class_of: &[usize]) -> Result<Sesquiad, SesquiadError> {
        let n = self.len();
        assert_eq!(class_of.len(), n);
        // multiplicative compatibility
        for a in 0..n {
            for b in 0..n {
                if class_of[a] != class_of[b] {
                    continue;
                }
                for x in 0..n {
                    if class_of[self.table.mul(x, a)] != class_of[self.table.mul(x, b)] {
                        return Err(SesquiadError::NotACongruence);
                    }
                }
            }
        }
        let num_classes = class_of.iter().max().unwrap() + 1;
        let mut reps = vec![usize::MAX; num_classes];
        for e in 0..n {
            if reps[class_of[e]] == usize::MAX {
                reps[class_of[e]] = e;
            }
        }
        if num_classes == 1 {
            return Ok(Sesquiad::zero_sesquiad());
        }
        let names: Vec<String> =
            reps.iter().map(|&r| self.table.name(r).to_string()).collect();
        let mut mul = vec![0usize; num_classes * num_classes];
        for i in 0..num_classes {
            for j in 0..num_classes {
                mul[i * num_classes + j] = class_of[self.table.mul(reps[i], reps[j])];
            }
        }
        let zero = class_of[self.table.zero()];
        let one = class_of[self.table.one()];
        let table = MonoidTable::new(names, zero, one, mul)?;
        // kernel of Z0[A/C] -> R_A / J(C) over the class representatives
        let j = crate::ring::congruence_ideal(&self.ring, &self.table, &self.images, class_of);
        let target = self.ring.quotient(&j);
        let rep_images: Vec<RingElement> = (0..num_classes)
            .filter(|&c| c != zero)
            .map(|c| self.ring.project(&target, &self.images[reps[c]]))
            .collect();
        let kernel = kernel_of_map(&rep_images, &target);
        let relations = relations_from_kernel(&table, &kernel);
        Sesquiad::new(table, relations, Provenance::Abstract)
            .map_err(|e| match e {
                SesquiadError::Ring(RingError::AdditionCollapses(_, _)) => {
                    SesquiadError::NotACongruence
                }
                other => other,
            })
    }

    /// Localization at a multiplicatively closed subset containing 1.
    pub fn localize_at_submonoid(
        &self,
        subset: &[usize],
        depth: usize,
    ) -> Result<Localization, SesquiadError> {
        if !subset.contains(&self.table.one()) {
            return Err(SesquiadError::MissingOne);
        }
        for &s in subset {
            for &t in subset {
                if !subset.contains(&self.table.mul(s, t)) {
                    return Err(SesquiadError::NotMultiplicative);
                }
            }
        }
        if subset.contains(&self.table.zero()) {
            return Ok(Localization {
                exactness: Exactness::Exact,
                sesquiad: Some(Sesquiad::zero_sesquiad()),
                values: vec!["0".into()],
            });
        }
        let gens: Vec<RingElement> = subset.iter().map(|&s| self.images[s].clone()).collect();
        let loc = LocalizedRing::new(&self.ring, &gens)?;
        // generators of the fraction monoid: images of A and 1/s for each s
        let mut seeds: Vec<(Frac, String)> = Vec::new();
        for e in 0..self.len() {
            seeds.push((loc.from_base(&self.images[e]), self.table.name(e).to_string()));
        }
        for (ix, &s) in subset.iter().enumerate() {
            // 1/s = (product of the other generators) / g
            let mut num = self.ring.one();
            for (jx, &t) in subset.iter().enumerate() {
                if jx != ix {
                    num = self.ring.mul(&num, &self.images[t]);
                }
            }
            let f = loc.normalize(&Frac { num: loc.base().project(loc.quotient_ring(), &num), pow: 1 });
            seeds.push((f, format!("1/{}", self.table.name(s))));
        }
        materialize_fraction_monoid(&loc, seeds, depth)
    }
}

/// Exactness certificate of an enumerated object.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// Complete by a finiteness proof (finite localized ring, or one of the
    /// section shortcuts).
    Exact,
    /// Enumerated up to the recorded depth; `stabilized` records that the
    /// closure reached a fixpoint before the cap, which certifies the value
    /// set complete even when the ambient ring is infinite.
    Bounded { depth: usize, stabilized: bool },
}

impl Exactness {
    /// True when the value set is certified complete.
    pub fn is_certified(&self) -> bool {
        matches!(self, Exactness::Exact | Exactness::Bounded { stabilized: true, .. })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact)
    }
}

/// Result of localizing a sesquiad: the materialized value sesquiad when the
/// enumeration is certified complete, plus fraction descriptions.
#[derive(Clone, Debug)]
pub struct Localization {
    pub exactness: Exactness,
    pub sesquiad: Option<Sesquiad>,
    pub values: Vec<String>,
}

/// Closes a seeded set of fractions under multiplication; builds the value
/// sesquiad when the closure stabilizes.
pub(crate) fn materialize_fraction_monoid(
    loc: &LocalizedRing,
    seeds: Vec<(Frac, String)>,
    depth: usize,
) -> Result<Localization, SesquiadError> {
    let mut values: Vec<(Frac, String)> = Vec::new();
    for (f, name) in &seeds {
        if !values.iter().any(|(v, _)| loc.eq(v, f)) {
            values.push((f.clone(), name.clone()));
        }
    }
    let mut stabilized = false;
    let mut rounds = 0usize;
    for round in 0..depth {
        rounds = round + 1;
        let mut fresh: Vec<(Frac, String)> = Vec::new();
        for (v, vn) in &values {
            for (s, sn) in &seeds {
                let p = loc.mul(v, s);
                if !values.iter().chain(fresh.iter()).any(|(w, _)| loc.eq(w, &p)) {
                    fresh.push((p, format!("{vn}·{sn}")));
                }
            }
        }
        if fresh.is_empty() {
            stabilized = true;
            break;
        }
        values.extend(fresh);
    }
    let exactness = if loc.is_finite() {
        Exactness::Exact
    } else {
        Exactness::Bounded { depth: rounds, stabilized }
    };
    let names: Vec<String> = values.iter().map(|(_, n)| n.clone()).collect();
    if !exactness.is_certified() {
        return Ok(Localization { exactness, sesquiad: None, values: names });
    }
    // cross-multiply all fractions to a common power of g so the kernel
    // lattice can be computed in the saturated quotient ring
    let q = loc.quotient_ring();
    let max_pow = values.iter().map(|(f, _)| f.pow).max().unwrap_or(0);
    let lifted: Vec<RingElement> = values
        .iter()
        .map(|(f, _)| q.mul(&f.num, &q.pow(loc.g(), max_pow - f.pow)))
        .collect();
    let zero_at = values.iter().position(|(f, _)| loc.is_zero(f)).expect("0 is seeded");
    let nonzero: Vec<RingElement> = (0..values.len())
        .filter(|&i| i != zero_at)
        .map(|i| lifted[i].clone())
        .collect();
    let kernel = kernel_of_map(&nonzero, q);
    // multiplication table on fractions
    let n = values.len();
    let one_at = values
        .iter()
        .position(|(f, _)| loc.eq(f, &loc.from_base(&loc.base().one())))
        .expect("1 is seeded");
    let mut mul = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            let p = loc.mul(&values[i].0, &values[j].0);
            match values.iter().position(|(w, _)| loc.eq(w, &p)) {
                Some(ix) => mul[i * n + j] = ix,
                None => return Err(SesquiadError::NotClosedUnderProduct),
            }
        }
    }
    let table = MonoidTable::new(names.clone(), zero_at, one_at, mul)?;
    let relations = relations_from_kernel(&table, &kernel);
    let sesquiad = Sesquiad::new(table, relations, Provenance::Abstract)?;
    Ok(Localization { exactness, sesquiad: Some(sesquiad), values: names })
}

fn self_basis(dim: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); dim];
    v[i] = BigInt::one();
    v
}

/// Relation lattice: the translate closure of the declared relation vectors
/// over the nonzero-element basis.
fn relation_lattice(table: &MonoidTable, relations: &[AdditionRelation]) -> Lattice {
    let n = table.len();
    let dim = n - 1;
    let to_basis = |e: usize| -> Option<usize> {
        match e.cmp(&table.zero()) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(e),
            std::cmp::Ordering::Greater => Some(e - 1),
        }
    };
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for r in relations {
        for x in 0..n {
            if x == table.zero() {
                continue;
            }
            let mut v = vec![BigInt::zero(); dim];
            for (k, a) in &r.terms {
                if let Some(i) = to_basis(table.mul(x, *a)) {
                    v[i] += k;
                }
            }
            if let Some(i) = to_basis(table.mul(x, r.sum)) {
                v[i] -= BigInt::one();
            }
            if v.iter().any(|z| !z.is_zero()) {
                rows.push(v);
            }
        }
    }
    if rows.is_empty() {
        Lattice::zero(dim)
    } else {
        hnf(&IntMatrix::from_rows(rows))
    }
}

/// Reads a kernel lattice basis back as "combination equals zero" relations.
fn relations_from_kernel(table: &MonoidTable, kernel: &Lattice) -> Vec<AdditionRelation> {
    let from_basis = |i: usize| -> usize {
        if i < table.zero() {
            i
        } else {
            i + 1
        }
    };
    kernel
        .basis()
        .row_vecs()
        .into_iter()
        .map(|row| AdditionRelation {
            terms: row
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (c, from_basis(i)))
                .collect(),
            sum: table.zero(),
        })
        .collect()
}

/// A validated morphism of sesquiads.
#[derive(Clone, Debug)]
pub struct SesquiadMorphism {
    source: Sesquiad,
    target: Sesquiad,
    map: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("map must list an image for each of the {0} source elements")]
    WrongLength(usize),
    #[error("map does not preserve zero or one")]
    ConstantsNotPreserved,
    #[error("map is not multiplicative at ({0}, {1})")]
    NotMultiplicative(usize, usize),
    #[error("declared sum is not preserved by the map")]
    AdditionNotPreserved,
}

impl SesquiadMorphism {
    /// Checks multiplicativity and that every generating relation of the
    /// source, transported by the map, holds in the target's universal ring.
    pub fn validate(
        source: &Sesquiad,
        target: &Sesquiad,
        map: Vec<usize>,
    ) -> Result<Self, MorphismError> {
        let n = source.len();
        if map.len() != n || map.iter().any(|&i| i >= target.len()) {
            return Err(MorphismError::WrongLength(n));
        }
        if map[source.table().zero()] != target.table().zero()
            || map[source.table().one()] != target.table().one()
        {
            return Err(MorphismError::ConstantsNotPreserved);
        }
        for a in 0..n {
            for b in 0..n {
                if map[source.table().mul(a, b)] != target.table().mul(map[a], map[b]) {
                    return Err(MorphismError::NotMultiplicative(a, b));
                }
            }
        }
        for r in source.relations() {
            let transported: Vec<(BigInt, usize)> =
                r.terms.iter().map(|(k, a)| (k.clone(), map[*a])).collect();
            let v = target.combination(&transported);
            if v != *target.image(map[r.sum]) {
                return Err(MorphismError::AdditionNotPreserved);
            }
        }
        Ok(SesquiadMorphism { source: source.clone(), target: target.clone(), map })
    }

    pub fn identity(s: &Sesquiad) -> Self {
        SesquiadMorphism {
            source: s.clone(),
            target: s.clone(),
            map: (0..s.len()).collect(),
        }
    }

    pub fn source(&self) -> &Sesquiad {
        &self.source
    }

    pub fn target(&self) -> &Sesquiad {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, e: usize) -> usize {
        self.map[e]
    }

    pub fn compose(first: &SesquiadMorphism, second: &SesquiadMorphism) -> SesquiadMorphism {
        assert_eq!(first.target.len(), second.source.len());
        SesquiadMorphism {
            source: first.source.clone(),
            target: second.target.clone(),
            map: first.map.iter().map(|&e| second.map[e]).collect(),
        }
    }

    /// Matrix of the induced ring map on the nonzero-element bases.
    pub fn induced_matrix(&self) -> IntMatrix {
        let src = self.source.table();
        let rows: Vec<Vec<BigInt>> = (0..self.source.len())
            .filter(|&e| e != src.zero())
            .map(|e| self.target.image(self.map[e]).coords.clone())
            .collect();
        IntMatrix::from_rows(rows)
    }

    /// Embedding test: the induced ring map has zero kernel, i.e. the
    /// preimage of the target relation lattice is exactly the source one.
    pub fn is_embedding(&self) -> bool {
        let pre = preimage(&self.induced_matrix(), self.target.ring().relation_lattice());
        pre == *self.source.ring().relation_lattice()
    }

    /// Local test: preimage of the target's units equals the source's units.
    pub fn is_local(&self) -> bool {
        let tgt_units = self.target.table().units();
        let src_units = self.source.table().units();
        (0..self.source.len())
            .all(|e| tgt_units.contains(&self.map[e]) == src_units.contains(&e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idempotent() -> Sesquiad {
        Sesquiad::trivial_addition(
            MonoidTable::new(
                vec!["0".into(), "1".into(), "e".into()],
                0,
                1,
                vec![0, 0, 0, 0, 1, 2, 0, 2, 2],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn two_elements() -> Sesquiad {
        Sesquiad::initial()
    }

    fn klein() -> Sesquiad {
        // {0, 1, a, b, ab} with a^2 = b^2 = 1
        let names = vec!["0".into(), "1".into(), "a".into(), "b".into(), "ab".into()];
        let mul = vec![
            0, 0, 0, 0, 0, //
            0, 1, 2, 3, 4, //
            0, 2, 1, 4, 3, //
            0, 3, 4, 1, 2, //
            0, 4, 3, 2, 1,
        ];
        Sesquiad::trivial_addition(MonoidTable::new(names, 0, 1, mul).unwrap()).unwrap()
    }

    #[test]
    fn validate_examples() {
        let s = idempotent();
        assert_eq!(s.ring().free_rank(), 2);
        // {0,1} with relation 1+1=1 collapses
        let t = MonoidTable::new(vec!["0".into(), "1".into()], 0, 1, vec![0, 0, 0, 1]).unwrap();
        let r = Sesquiad::new(
            t,
            vec![AdditionRelation { terms: vec![(1.into(), 1), (1.into(), 1)], sum: 1 }],
            Provenance::Abstract,
        );
        assert!(matches!(
            r,
            Err(SesquiadError::Ring(RingError::AdditionCollapses(_, _)))
        ));
        let p = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![7],
            subset: vec![vec![0], vec![1], vec![2], vec![4]],
        })
        .unwrap();
        assert_eq!(p.ring().cardinality().unwrap(), BigInt::from(7));
    }

    #[test]
    fn initial_sesquiad_has_integer_ring() {
        let f1 = two_elements();
        assert_eq!(f1.ring().free_rank(), 1);
        assert_eq!(f1.ring().group_shape(), "Z");
    }

    #[test]
    fn klein_ring_is_rank_four() {
        let k = klein();
        assert_eq!(k.ring().free_rank(), 4);
    }

    #[test]
    fn pair_validation_errors() {
        // subset missing 1
        let r = Sesquiad::from_pair(&PairDescriptor { moduli: vec![6], subset: vec![vec![0]] });
        assert!(matches!(r, Err(SesquiadError::SubsetMissingConstants)));
        // subset not closed: 2*2 = 4 missing mod 6
        let r = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![6],
            subset: vec![vec![0], vec![1], vec![2]],
        });
        assert!(matches!(r, Err(SesquiadError::SubsetNotClosed(_, _))));
    }

    #[test]
    fn z15_units_ring_has_fifteen_elements() {
        let s = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![15],
            subset: (0..15u64)
                .filter(|&x| x == 0 || num_integer::gcd(x, 15) == 1)
                .map(|x| vec![x])
                .collect(),
        })
        .unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.ring().cardinality().unwrap(), BigInt::from(15));
        assert_eq!(s.ring().torsion_invariants(), vec![BigInt::from(15)]);
    }

    #[test]
    fn z4_pair_has_nilpotent_two() {
        let s = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![4],
            subset: vec![vec![0], vec![1], vec![2]],
        })
        .unwrap();
        assert_eq!(s.ring().cardinality().unwrap(), BigInt::from(4));
        assert!(s.ring().is_nilpotent(s.image(2)));
    }

    #[test]
    fn tensor_with_initial_is_identity() {
        let f1 = two_elements();
        for s in [idempotent(), klein()] {
            let t = Sesquiad::tensor(&f1, &s).unwrap();
            assert_eq!(t.len(), s.len());
            assert_eq!(t.ring().free_rank(), s.ring().free_rank());
            assert_eq!(t.ring().torsion_invariants(), s.ring().torsion_invariants());
        }
    }

    #[test]
    fn tensor_of_idempotent_pair_has_five_elements() {
        let s = idempotent();
        let t = Sesquiad::tensor(&s, &s).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.ring().free_rank(), 4);
    }

    #[test]
    fn tensor_with_zero_sesquiad_collapses() {
        let z = Sesquiad::zero_sesquiad();
        let t = Sesquiad::tensor(&idempotent(), &z).unwrap();
        assert!(t.is_zero_sesquiad());
    }

    #[test]
    fn direct_product_shapes() {
        let f1 = two_elements();
        let p = Sesquiad::direct_product(&f1, &f1).unwrap();
        assert_eq!(p.len(), 4);
        // the two nontrivial idempotents (1,0) and (0,1)
        let idems = (0..p.len())
            .filter(|&e| {
                p.table().mul(e, e) == e && e != p.table().zero() && e != p.table().one()
            })
            .count();
        assert_eq!(idems, 2);
        let q = Sesquiad::direct_product(&idempotent(), &f1).unwrap();
        assert_eq!(q.len(), 6);
    }

    #[test]
    fn morphism_validation_and_composition() {
        let s = idempotent();
        let f1 = two_elements();
        let id = SesquiadMorphism::validate(&s, &s, vec![0, 1, 2]).unwrap();
        assert!(id.is_embedding());
        assert!(id.is_local());
        // e -> 0 is a monoid morphism to {0,1}
        let m = SesquiadMorphism::validate(&s, &f1, vec![0, 1, 0]).unwrap();
        assert!(m.is_local()); // unit preimage is {1}
        // e -> 1 is multiplicative but not local
        let m2 = SesquiadMorphism::validate(&s, &f1, vec![0, 1, 1]).unwrap();
        assert!(!m2.is_local());
        // e -> e composed with e -> 0
        let c = SesquiadMorphism::compose(&id, &m);
        assert_eq!(c.map(), &[0, 1, 0]);
    }

    #[test]
    fn embedding_detects_ring_injectivity() {
        // multiplicative monoid of F3 with trivial addition -> F3: not an
        // embedding (free ring maps onto the field)
        let f3_mult = Sesquiad::trivial_addition(
            MonoidTable::new(
                vec!["0".into(), "1".into(), "2".into()],
                0,
                1,
                vec![0, 0, 0, 0, 1, 2, 0, 2, 1],
            )
            .unwrap(),
        )
        .unwrap();
        let f3 = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![3],
            subset: vec![vec![0], vec![1], vec![2]],
        })
        .unwrap();
        let m = SesquiadMorphism::validate(&f3_mult, &f3, vec![0, 1, 2]).unwrap();
        assert!(!m.is_embedding());
        // {0,1,2,4} in F7 with the field addition on both sides: identity
        // on the pair is an embedding
        let f7 = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![7],
            subset: vec![vec![0], vec![1], vec![2], vec![4]],
        })
        .unwrap();
        let id = SesquiadMorphism::validate(&f7, &f7, vec![0, 1, 2, 3]).unwrap();
        assert!(id.is_embedding());
    }

    #[test]
    fn localize_inverting_idempotent() {
        let s = idempotent();
        let e = s.table().index_of("e").unwrap();
        let one = s.table().one();
        let loc = s.localize_at_submonoid(&[one, e], 8).unwrap();
        assert!(loc.exactness.is_certified());
        let t = loc.sesquiad.unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.ring().group_shape(), "Z");
    }

    #[test]
    fn localize_at_units_changes_nothing() {
        let f7 = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![7],
            subset: vec![vec![0], vec![1], vec![2], vec![4]],
        })
        .unwrap();
        let subset: Vec<usize> = [1u64, 2, 4]
            .iter()
            .map(|x| f7.table().index_of(&x.to_string()).unwrap())
            .collect();
        let loc = f7.localize_at_submonoid(&subset, 8).unwrap();
        assert!(loc.exactness.is_exact());
        assert_eq!(loc.sesquiad.unwrap().len(), 4);
    }

    #[test]
    fn localize_at_one_is_identity() {
        let s = klein();
        let loc = s.localize_at_submonoid(&[s.table().one()], 8).unwrap();
        let t = loc.sesquiad.unwrap();
        assert_eq!(t.len(), s.len());
        assert_eq!(t.ring().free_rank(), s.ring().free_rank());
    }

    #[test]
    fn localize_at_zero_gives_zero_sesquiad() {
        let s = idempotent();
        let loc = s.localize_at_submonoid(&[s.table().one(), s.table().zero()], 8).unwrap();
        assert!(loc.sesquiad.unwrap().is_zero_sesquiad());
    }

    #[test]
    fn quotient_examples() {
        let s = idempotent();
        // quotient by the discrete partition is the sesquiad itself
        let q = s.quotient(&[0, 1, 2]).unwrap();
        assert_eq!(q.len(), 3);
        // e ~ 0 gives {0,1} with ring Z
        let q = s.quotient(&[0, 1, 0]).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.ring().group_shape(), "Z");
        // merging everything gives the zero sesquiad
        let q = s.quotient(&[0, 0, 0]).unwrap();
        assert!(q.is_zero_sesquiad());
    }

    #[test]
    fn sum_queries_against_the_ring() {
        let f7 = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![7],
            subset: vec![vec![0], vec![1], vec![2], vec![4]],
        })
        .unwrap();
        let one = f7.table().index_of("1").unwrap();
        // 1 + 1 = 2 is defined
        let two = f7.sum_defined(&[(1.into(), one), (1.into(), one)]);
        assert_eq!(two, f7.table().index_of("2"));
        // 1 + 2 = 3 is not in the subset
        let one_ix = one;
        let two_ix = f7.table().index_of("2").unwrap();
        assert_eq!(f7.sum_defined(&[(1.into(), one_ix), (1.into(), two_ix)]), None);
    }
}
