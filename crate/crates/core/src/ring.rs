//! Universal rings of sesquiads: finitely generated abelian groups Z^n / L
//! with a commutative multiplication given on the basis, plus ideal,
//! nilpotency, quotient, localization and finite-spectrum machinery.
//!
//! The basis vectors are the nonzero elements of a monoid (or pairs of such,
//! for tensor and product rings); the relation lattice L is kept in Hermite
//! normal form, so equality of ring elements is equality of canonical
//! coordinate vectors.

use crate::lattice::{self, hnf, preimage, snf_diagonal, IntMatrix, Lattice};
use crate::monoid::MonoidTable;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("declared relations collapse distinct monoid elements ({0} and {1})")]
    AdditionCollapses(String, String),
    #[error("ring is infinite")]
    RingInfinite,
    #[error("ring has {0} elements, above the enumeration cap {1}")]
    RingTooLarge(BigInt, usize),
    #[error("annihilator chain did not stabilize within {0} steps")]
    SaturationDiverged(usize),
    #[error("coordinate vector has length {0}, expected {1}")]
    DimensionMismatch(usize, usize),
}

/// Element of a universal ring in canonical (lattice-reduced) coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RingElement {
    pub coords: Vec<BigInt>,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// A commutative unital ring presented as Z^dim modulo a relation lattice,
/// with structure constants on the basis.
#[derive(Clone, Debug)]
pub struct UniversalRing {
    dim: usize,
    basis_names: Vec<String>,
    one: RingElement,
    rel: Lattice,
    // canonical product of basis pair (i, j), row major
    pair_prod: Vec<RingElement>,
    // Smith invariant factors of the relation lattice basis
    snf: Vec<BigInt>,
}

impl UniversalRing {
    /// Builds a ring from raw data: products of basis pairs (as raw integer
    /// vectors) and a relation lattice.
    pub fn from_parts(
        basis_names: Vec<String>,
        one: Vec<BigInt>,
        pair_products: Vec<Vec<BigInt>>,
        rel: Lattice,
    ) -> Self {
        let dim = basis_names.len();
        assert_eq!(rel.ambient_dim(), dim);
        assert_eq!(pair_products.len(), dim * dim);
        let snf = if rel.is_zero() { Vec::new() } else { snf_diagonal(rel.basis()) };
        let pair_prod = pair_products
            .into_iter()
            .map(|v| RingElement { coords: rel.reduce_vec(&v) })
            .collect();
        let one = RingElement { coords: rel.reduce_vec(&one) };
        UniversalRing { dim, basis_names, one, rel, pair_prod, snf }
    }

    /// The ring Z0[A]/L for a monoid table and an explicit relation lattice
    /// over the nonzero-element basis.  Returns the ring together with the
    /// canonical image of every monoid element.  When `check_injective` is
    /// set, images of distinct monoid elements must stay distinct.
    pub fn from_monoid(
        table: &MonoidTable,
        rel: Lattice,
        check_injective: bool,
    ) -> Result<(Self, Vec<RingElement>), RingError> {
        let n = table.len();
        let dim = n - 1;
        let to_basis = |e: usize| -> Option<usize> {
            match e.cmp(&table.zero()) {
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Less => Some(e),
                std::cmp::Ordering::Greater => Some(e - 1),
            }
        };
        let mut basis_names = Vec::with_capacity(dim);
        let mut basis_elems = Vec::with_capacity(dim);
        for e in 0..n {
            if e != table.zero() {
                basis_names.push(table.name(e).to_string());
                basis_elems.push(e);
            }
        }
        let mut pair_products = Vec::with_capacity(dim * dim);
        for &a in &basis_elems {
            for &b in &basis_elems {
                let mut v = vec![BigInt::zero(); dim];
                if let Some(k) = to_basis(table.mul(a, b)) {
                    v[k] = BigInt::one();
                }
                pair_products.push(v);
            }
        }
        let mut one = vec![BigInt::zero(); dim];
        one[to_basis(table.one()).expect("zero monoid has no unit basis vector")] = BigInt::one();
        let ring = UniversalRing::from_parts(basis_names, one, pair_products, rel);
        let mut images = Vec::with_capacity(n);
        for e in 0..n {
            let mut v = vec![BigInt::zero(); dim];
            if let Some(k) = to_basis(e) {
                v[k] = BigInt::one();
            }
            images.push(ring.reduce(&v).expect("dimension is correct"));
        }
        if check_injective {
            for a in 0..n {
                for b in a + 1..n {
                    if images[a] == images[b] {
                        return Err(RingError::AdditionCollapses(
                            table.name(a).to_string(),
                            table.name(b).to_string(),
                        ));
                    }
                }
            }
        }
        Ok((ring, images))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn relation_lattice(&self) -> &Lattice {
        &self.rel
    }

    /// Smith invariant factors of the relation lattice (1s included).
    pub fn invariants(&self) -> &[BigInt] {
        &self.snf
    }

    /// Invariant factors different from 1: the torsion part of the additive
    /// group.
    pub fn torsion_invariants(&self) -> Vec<BigInt> {
        self.snf.iter().filter(|d| !d.is_one() && !d.is_zero()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.dim - self.rel.rank()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Additive group cardinality, when finite.
    pub fn cardinality(&self) -> Option<BigInt> {
        self.rel.index_in_ambient()
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coords: vec![BigInt::zero(); self.dim] }
    }

    pub fn one(&self) -> RingElement {
        self.one.clone()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.one.is_zero()
    }

    /// Canonical representative of a raw coordinate vector.
    pub fn reduce(&self, v: &[BigInt]) -> Result<RingElement, RingError> {
        if v.len() != self.dim {
            return Err(RingError::DimensionMismatch(v.len(), self.dim));
        }
        Ok(RingElement { coords: self.rel.reduce_vec(v) })
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let v: Vec<BigInt> = x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect();
        RingElement { coords: self.rel.reduce_vec(&v) }
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        let v: Vec<BigInt> = x.coords.iter().map(|a| -a).collect();
        RingElement { coords: self.rel.reduce_vec(&v) }
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let v: Vec<BigInt> = x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect();
        RingElement { coords: self.rel.reduce_vec(&v) }
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let mut acc = vec![BigInt::zero(); self.dim];
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, pk) in self.pair_prod[i * self.dim + j].coords.iter().enumerate() {
                    if !pk.is_zero() {
                        acc[k] += &c * pk;
                    }
                }
            }
        }
        RingElement { coords: self.rel.reduce_vec(&acc) }
    }

    pub fn pow(&self, x: &RingElement, k: usize) -> RingElement {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn scalar_mul(&self, c: &BigInt, x: &RingElement) -> RingElement {
        let v: Vec<BigInt> = x.coords.iter().map(|a| c * a).collect();
        RingElement { coords: self.rel.reduce_vec(&v) }
    }

    /// Matrix of multiplication by `x` on the basis (row i = reduce(e_i x)).
    pub fn mul_matrix(&self, x: &RingElement) -> IntMatrix {
        let mut rows = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut e = self.zero();
            e.coords[i] = BigInt::one();
            rows.push(self.mul(&e, x).coords);
        }
        IntMatrix::from_rows(rows)
    }

    /// All elements of a finite ring, canonical order, capped.
    pub fn elements(&self, cap: usize) -> Result<Vec<RingElement>, RingError> {
        let card = self.cardinality().ok_or(RingError::RingInfinite)?;
        if card > BigInt::from(cap) {
            return Err(RingError::RingTooLarge(card, cap));
        }
        // canonical representatives fill the box under the HNF diagonal
        let mut radii = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let d = self.rel.basis().get(i, i).clone();
            let r: usize = d.to_string().parse().expect("pivot fits usize under cap");
            radii.push(r.max(1));
        }
        let mut out = Vec::new();
        let mut cur = vec![0usize; self.dim];
        loop {
            let v: Vec<BigInt> = cur.iter().map(|&c| BigInt::from(c)).collect();
            out.push(RingElement { coords: self.rel.reduce_vec(&v) });
            let mut pos = 0;
            loop {
                if pos == self.dim {
                    out.sort_by(|a, b| a.coords.cmp(&b.coords));
                    out.dedup();
                    return Ok(out);
                }
                cur[pos] += 1;
                if cur[pos] < radii[pos] {
                    break;
                }
                cur[pos] = 0;
                pos += 1;
            }
        }
    }

    /// True iff x^k = 0 for some k.  Rational phase: x^d must lie in the
    /// rational span of the relation lattice (d = free rank); torsion phase:
    /// iterate powers through the finite torsion regime with cycle
    /// detection.
    pub fn is_nilpotent(&self, x: &RingElement) -> bool {
        if x.is_zero() {
            return true;
        }
        let d = self.free_rank();
        let mut z = x.clone();
        if d > 0 {
            z = self.pow(x, d);
            if !self.in_rational_span(&z) {
                return false;
            }
        }
        let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
        loop {
            if z.is_zero() {
                return true;
            }
            if !seen.insert(z.coords.clone()) {
                return false; // nonzero cycle never reaches 0
            }
            z = self.mul(&z, x);
        }
    }

    fn in_rational_span(&self, x: &RingElement) -> bool {
        if x.is_zero() {
            return true;
        }
        if self.rel.is_zero() {
            return false;
        }
        let stacked = self.rel.basis().stack(&IntMatrix::from_rows(vec![x.coords.clone()]));
        hnf(&stacked).rank() == self.rel.rank()
    }

    /// Annihilator {x : x g = 0} as a lattice containing the relation
    /// lattice.
    pub fn annihilator(&self, g: &RingElement) -> Lattice {
        preimage(&self.mul_matrix(g), &self.rel)
    }

    /// Union of the ascending chain Ann(g^k), detected by lattice equality of
    /// consecutive terms.
    pub fn saturation_kernel(&self, g: &RingElement) -> Result<Lattice, RingError> {
        const CAP: usize = 64;
        let mut power = g.clone();
        let mut prev = self.annihilator(&power);
        for _ in 0..CAP {
            power = self.mul(&power, g);
            let next = self.annihilator(&power);
            if next == prev {
                return Ok(prev);
            }
            prev = next;
        }
        Err(RingError::SaturationDiverged(CAP))
    }

    /// Quotient by an additional relation lattice (same ambient basis).
    pub fn quotient(&self, extra: &Lattice) -> UniversalRing {
        let rel = self.rel.sum(extra);
        UniversalRing::from_parts(
            self.basis_names.clone(),
            self.one.coords.clone(),
            self.pair_prod.iter().map(|p| p.coords.clone()).collect(),
            rel,
        )
    }

    /// Image of an element in a quotient ring over the same basis.
    pub fn project(&self, quotient: &UniversalRing, x: &RingElement) -> RingElement {
        quotient.reduce(&x.coords).expect("same ambient dimension")
    }

    /// Human-readable additive group shape, e.g. "Z^2" or "Z/3 + Z/15".
    pub fn group_shape(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in self.torsion_invariants() {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Prime ideal of a finite ring: its lattice (containing the relation
/// lattice) and the residue field size.
#[derive(Clone, Debug)]
pub struct PrimeIdealData {
    pub lattice: Lattice,
    pub residue_size: BigInt,
}

impl PrimeIdealData {
    pub fn contains(&self, x: &RingElement) -> bool {
        self.lattice.contains(&x.coords)
    }
}

/// Prime ideals of a finite commutative ring.  Primes coincide with maximal
/// ideals there; they are the annihilators of the primitive idempotents of
/// the reduction modulo the nilradical.
pub fn ring_spectrum_finite(
    ring: &UniversalRing,
    cap: usize,
) -> Result<Vec<PrimeIdealData>, RingError> {
    if !ring.is_finite() {
        return Err(RingError::RingInfinite);
    }
    let elems = ring.elements(cap)?;
    if ring.is_zero_ring() {
        return Ok(Vec::new());
    }
    // nilradical as an additive subgroup: x is nilpotent iff its 2^k-th
    // power vanishes, k = ceil(log2 |R|)
    let log2 = usize::BITS - elems.len().leading_zeros();
    let nil: Vec<Vec<BigInt>> = elems
        .iter()
        .filter(|x| {
            let mut p = (*x).clone();
            for _ in 0..=log2 {
                p = ring.mul(&p, &p);
            }
            p.is_zero()
        })
        .map(|x| x.coords.clone())
        .collect();
    let nil_lat = if nil.is_empty() {
        ring.relation_lattice().clone()
    } else {
        ring.relation_lattice().sum(&hnf(&IntMatrix::from_rows(nil)))
    };
    let red = ring.quotient(&nil_lat);
    let red_elems = red.elements(cap)?;
    let idem: Vec<&RingElement> =
        red_elems.iter().filter(|e| red.mul(e, e) == **e && !e.is_zero()).collect();
    let primitive: Vec<&RingElement> =
        idem.iter().filter(|e| !idem.iter().any(|f| f != *e && red.mul(e, f) == **f)).cloned().collect();
    let mut out = Vec::new();
    for e in primitive {
        let p_lattice = preimage(&red.mul_matrix(e), red.relation_lattice());
        let residue_size =
            p_lattice.index_in_ambient().expect("maximal ideal of a finite ring has finite index");
        out.push(PrimeIdealData { lattice: p_lattice, residue_size });
    }
    out.sort_by(|a, b| {
        a.residue_size
            .cmp(&b.residue_size)
            .then_with(|| a.lattice.basis().row_vecs().cmp(&b.lattice.basis().row_vecs()))
    });
    Ok(out)
}

/// Field test for a finite ring: nonzero, no nonzero nilpotents, no
/// idempotents besides 0 and 1.
pub fn is_field_finite(ring: &UniversalRing, cap: usize) -> Result<bool, RingError> {
    if !ring.is_finite() {
        return Err(RingError::RingInfinite);
    }
    if ring.is_zero_ring() {
        return Ok(false);
    }
    let elems = ring.elements(cap)?;
    let log2 = usize::BITS - elems.len().leading_zeros();
    for x in &elems {
        if x.is_zero() {
            continue;
        }
        let mut p = x.clone();
        for _ in 0..=log2 {
            p = ring.mul(&p, &p);
        }
        if p.is_zero() {
            return Ok(false); // nonzero nilpotent
        }
        if ring.mul(x, x) == *x && *x != ring.one() {
            return Ok(false); // nontrivial idempotent
        }
    }
    Ok(true)
}

/// Fraction x / g^pow over the saturated quotient of a localized ring.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: RingElement,
    pub pow: usize,
}

/// Localization of a ring at the multiplicative set generated by `gens`:
/// the saturated quotient base/K together with the class g of the product
/// of the generators, which is a nonzerodivisor there.
#[derive(Clone, Debug)]
pub struct LocalizedRing {
    base: UniversalRing,
    quotient: UniversalRing,
    kernel: Lattice,
    g: RingElement,
    g_inverse: Option<RingElement>,
}

impl LocalizedRing {
    pub fn new(base: &UniversalRing, gens: &[RingElement]) -> Result<Self, RingError> {
        let mut g = base.one();
        for x in gens {
            g = base.mul(&g, x);
        }
        let kernel = base.saturation_kernel(&g)?;
        let quotient = base.quotient(&kernel);
        let g = base.project(&quotient, &g);
        let g_inverse = if quotient.is_zero_ring() {
            Some(quotient.one())
        } else if quotient.is_finite() {
            // powers of a nonzerodivisor in a finite commutative ring cycle
            // through 1
            let card = quotient.cardinality().expect("finite");
            let mut p = g.clone();
            let mut prev = quotient.one();
            let mut inv = None;
            let mut count = BigInt::zero();
            while count <= card {
                if p == quotient.one() {
                    inv = Some(prev);
                    break;
                }
                prev = p.clone();
                p = quotient.mul(&p, &g);
                count += BigInt::one();
            }
            Some(inv.expect("nonzerodivisor in a finite commutative ring is a unit"))
        } else {
            None
        };
        Ok(LocalizedRing { base: base.clone(), quotient, kernel, g, g_inverse })
    }

    pub fn base(&self) -> &UniversalRing {
        &self.base
    }

    /// The saturated quotient base/K; the localization equals it whenever it
    /// is finite (g becomes a unit there).
    pub fn quotient_ring(&self) -> &UniversalRing {
        &self.quotient
    }

    pub fn kernel(&self) -> &Lattice {
        &self.kernel
    }

    pub fn g(&self) -> &RingElement {
        &self.g
    }

    pub fn is_zero_ring(&self) -> bool {
        self.quotient.is_zero_ring()
    }

    pub fn is_finite(&self) -> bool {
        self.quotient.is_finite()
    }

    /// Image of a base-ring element.
    pub fn from_base(&self, x: &RingElement) -> Frac {
        self.normalize(&Frac { num: self.base.project(&self.quotient, x), pow: 0 })
    }

    /// Canonical form: over a finite quotient every fraction clears its
    /// denominator.
    pub fn normalize(&self, f: &Frac) -> Frac {
        if let Some(ginv) = &self.g_inverse {
            let mut num = f.num.clone();
            for _ in 0..f.pow {
                num = self.quotient.mul(&num, ginv);
            }
            Frac { num, pow: 0 }
        } else {
            f.clone()
        }
    }

    pub fn eq(&self, a: &Frac, b: &Frac) -> bool {
        // x/g^k = y/g^l iff x g^l = y g^k in the saturated quotient
        let left = self.quotient.mul(&a.num, &self.quotient.pow(&self.g, b.pow));
        let right = self.quotient.mul(&b.num, &self.quotient.pow(&self.g, a.pow));
        left == right
    }

    pub fn is_zero(&self, a: &Frac) -> bool {
        a.num.is_zero()
    }

    pub fn mul(&self, a: &Frac, b: &Frac) -> Frac {
        self.normalize(&Frac { num: self.quotient.mul(&a.num, &b.num), pow: a.pow + b.pow })
    }

    pub fn add(&self, a: &Frac, b: &Frac) -> Frac {
        let (hi, lo) = if a.pow >= b.pow { (a, b) } else { (b, a) };
        let shift = self.quotient.pow(&self.g, hi.pow - lo.pow);
        let lifted = self.quotient.mul(&lo.num, &shift);
        let num = self.quotient.add(&hi.num, &lifted);
        self.normalize(&Frac { num, pow: hi.pow })
    }

    /// 1/g as a fraction.
    pub fn g_inv(&self) -> Frac {
        self.normalize(&Frac { num: self.quotient.one(), pow: 1 })
    }
}

/// Ideal of `ring` generated by all differences image(a) - image(b) over
/// pairs in the same class, as a lattice.  The relation lattice is included:
/// the lattice is the full preimage of the ideal in Z^dim.
pub fn congruence_ideal(
    ring: &UniversalRing,
    table: &MonoidTable,
    images: &[RingElement],
    class_of: &[usize],
) -> Lattice {
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    let n = table.len();
    let mut reps: Vec<Option<usize>> = vec![None; n];
    for a in 0..n {
        let c = class_of[a];
        match reps[c] {
            None => reps[c] = Some(a),
            Some(r) => {
                // translate (a - r) by every monoid element
                for x in 0..n {
                    let xa = &images[table.mul(x, a)];
                    let xr = &images[table.mul(x, r)];
                    let diff: Vec<BigInt> =
                        xa.coords.iter().zip(&xr.coords).map(|(p, q)| p - q).collect();
                    if diff.iter().any(|z| !z.is_zero()) {
                        gens.push(diff);
                    }
                }
            }
        }
    }
    if gens.is_empty() {
        return ring.relation_lattice().clone();
    }
    ring.relation_lattice().sum(&hnf(&IntMatrix::from_rows(gens)))
}

/// Kernel lattice of the ring map sending basis vectors to the given images:
/// {w : sum w_i image_i lies in the target's relation lattice}.
pub fn kernel_of_map(images: &[RingElement], target: &UniversalRing) -> Lattice {
    let rows: Vec<Vec<BigInt>> = images.iter().map(|x| x.coords.clone()).collect();
    preimage(&IntMatrix::from_rows(rows), target.relation_lattice())
}

pub use lattice::solve_left_mod;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sesquiad::{PairDescriptor, Sesquiad};

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

    fn z15_units() -> Sesquiad {
        Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![15],
            subset: (0..15u64)
                .filter(|&x| x == 0 || num_integer::gcd(x, 15) == 1)
                .map(|x| vec![x])
                .collect(),
        })
        .unwrap()
    }

    #[test]
    fn free_ring_of_trivial_addition() {
        let s = idempotent();
        let r = s.ring();
        assert_eq!(r.free_rank(), 2);
        assert!(!r.is_finite());
        let e = s.image(2);
        assert_eq!(r.mul(e, e), *e);
        assert_eq!(r.group_shape(), "Z^2");
    }

    #[test]
    fn reduce_is_idempotent_and_seven_is_zero() {
        let s = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![7],
            subset: vec![vec![0], vec![1], vec![2], vec![4]],
        })
        .unwrap();
        let r = s.ring();
        assert_eq!(r.cardinality().unwrap(), BigInt::from(7));
        // 1 + 2 + 4 = 7 = 0
        let v = r.add(&r.add(s.image(1), s.image(2)), s.image(3));
        assert!(v.is_zero());
        let raw: Vec<BigInt> = vec![3.into(), 5.into(), (-2).into()];
        let once = r.reduce(&raw).unwrap();
        let twice = r.reduce(&once.coords).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn nilpotency_in_z4_pair() {
        let s = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![4],
            subset: vec![vec![0], vec![1], vec![2]],
        })
        .unwrap();
        let r = s.ring();
        assert!(r.is_nilpotent(s.image(2))); // 2^2 = 0 mod 4
        assert!(r.is_nilpotent(&r.zero()));
        assert!(!r.is_nilpotent(s.image(1)));
    }

    #[test]
    fn nilpotency_in_free_ring() {
        let s = idempotent();
        let r = s.ring();
        assert!(!r.is_nilpotent(s.image(2))); // e idempotent, nonzero
        let x = r.sub(s.image(1), s.image(2));
        assert!(!r.is_nilpotent(&x));
    }

    #[test]
    fn localization_kills_complementary_idempotent() {
        let s = idempotent();
        let r = s.ring();
        let one_minus_e = r.sub(s.image(1), s.image(2));
        let loc = LocalizedRing::new(r, &[one_minus_e]).unwrap();
        // the e-component dies: base/K is the integers
        assert_eq!(loc.quotient_ring().free_rank(), 1);
        assert!(!loc.is_zero_ring());
        // g is a nonzerodivisor in the quotient: Ann(g) = K
        let ann = loc.quotient_ring().annihilator(loc.g());
        assert_eq!(&ann, loc.quotient_ring().relation_lattice());
    }

    #[test]
    fn localization_at_one_is_identity() {
        let s = idempotent();
        let r = s.ring();
        let loc = LocalizedRing::new(r, &[r.one()]).unwrap();
        assert_eq!(loc.kernel(), r.relation_lattice());
    }

    #[test]
    fn localization_inverting_both_components_gives_zero_ring() {
        // ring of 15 elements; invert an element divisible by 3 and one by 5
        let s = z15_units();
        let r = s.ring();
        let three = r.sub(s.image_of_name("4").unwrap(), s.image_of_name("1").unwrap());
        let five = r.sub(s.image_of_name("7").unwrap(), s.image_of_name("2").unwrap());
        let loc = LocalizedRing::new(r, &[three, five]).unwrap();
        assert!(loc.is_zero_ring());
    }

    #[test]
    fn finite_spectrum_of_z15() {
        let s = z15_units();
        let primes = ring_spectrum_finite(s.ring(), 4096).unwrap();
        let sizes: Vec<BigInt> = primes.iter().map(|p| p.residue_size.clone()).collect();
        assert_eq!(sizes, vec![BigInt::from(3), BigInt::from(5)]);
    }

    #[test]
    fn finite_spectrum_of_field_and_local_ring() {
        let f7 = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![7],
            subset: vec![vec![0], vec![1], vec![2], vec![4]],
        })
        .unwrap();
        let primes = ring_spectrum_finite(f7.ring(), 4096).unwrap();
        assert_eq!(primes.len(), 1);
        assert_eq!(primes[0].residue_size, BigInt::from(7));
        assert!(is_field_finite(f7.ring(), 4096).unwrap());

        let z4 = Sesquiad::from_pair(&PairDescriptor {
            moduli: vec![4],
            subset: vec![vec![0], vec![1], vec![2]],
        })
        .unwrap();
        let primes = ring_spectrum_finite(z4.ring(), 4096).unwrap();
        assert_eq!(primes.len(), 1);
        assert_eq!(primes[0].residue_size, BigInt::from(2));
        assert!(primes[0].contains(z4.image(2)));
        assert!(!is_field_finite(z4.ring(), 4096).unwrap());
    }

    #[test]
    fn congruence_ideal_examples() {
        let s = idempotent();
        let r = s.ring();
        // discrete partition: zero lattice (trivial addition, empty rel)
        let j = congruence_ideal(r, s.table(), s.images(), &[0, 1, 2]);
        assert!(j.is_zero());
        // e ~ 0: span of e and its multiples
        let j = congruence_ideal(r, s.table(), s.images(), &[0, 1, 0]);
        assert!(j.contains(&s.image(2).coords));
        assert!(!j.contains(&s.image(1).coords));
        // all-in-one: contains 1
        let j = congruence_ideal(r, s.table(), s.images(), &[0, 0, 0]);
        assert!(j.contains(&s.image(1).coords));
    }

    #[test]
    fn ring_axioms_spot_checked_on_small_rings() {
        for s in [
            idempotent(),
            Sesquiad::from_pair(&PairDescriptor {
                moduli: vec![4],
                subset: vec![vec![0], vec![1], vec![2]],
            })
            .unwrap(),
        ] {
            let r = s.ring();
            let xs: Vec<RingElement> = s.images().to_vec();
            for x in &xs {
                assert_eq!(r.mul(x, &r.one()), *x);
                for y in &xs {
                    assert_eq!(r.mul(x, y), r.mul(y, x));
                    for z in &xs {
                        assert_eq!(r.mul(&r.mul(x, y), z), r.mul(x, &r.mul(y, z)));
                        // distributivity
                        assert_eq!(
                            r.mul(x, &r.add(y, z)),
                            r.add(&r.mul(x, y), &r.mul(x, z))
                        );
                    }
                }
            }
        }
    }
}
