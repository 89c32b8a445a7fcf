//! Exact integer-matrix algebra: Hermite and Smith normal forms, lattice
//! membership, kernels and preimages.
//!
//! Every ring computation in this crate reduces to operations on sublattices
//! of Z^n.  The Hermite convention is fixed once and for all: row style,
//! positive pivots with strictly increasing pivot columns, entries above a
//! pivot reduced into [0, pivot).  With that convention the basis of a
//! lattice is canonical and lattice equality is plain matrix equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense integer matrix, row major, arbitrary precision.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        IntMatrix { rows: r, cols: c, data }
    }

    /// Convenience constructor from machine integers, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in stack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Row-vector times matrix.
    pub fn apply_left(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j] += vi * self.get(i, j);
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        }
        write!(f, "]")
    }
}

/// A sublattice of Z^n, stored by its canonical row-HNF basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn zero(ambient_dim: usize) -> Self {
        Lattice { ambient_dim, basis: IntMatrix::zero(0, ambient_dim) }
    }

    /// The full lattice Z^n.
    pub fn full(ambient_dim: usize) -> Self {
        let mut m = IntMatrix::zero(ambient_dim, ambient_dim);
        for i in 0..ambient_dim {
            m.set(i, i, BigInt::one());
        }
        Lattice { ambient_dim, basis: m }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }

    /// True iff `v` lies in the row span, by back-substitution against the
    /// HNF basis.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "dimension mismatch");
        let mut w = v.to_vec();
        for i in 0..self.basis.rows() {
            let pj = pivot_col(&self.basis, i).expect("HNF basis row must be nonzero");
            if w[pj].is_zero() {
                continue;
            }
            let (q, r) = w[pj].div_rem(self.basis.get(i, pj));
            if !r.is_zero() {
                return false;
            }
            for j in pj..self.ambient_dim {
                let t = &q * self.basis.get(i, j);
                w[j] -= t;
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    /// Canonical representative of `v` modulo the lattice: each pivot
    /// coordinate is reduced into [0, pivot).
    pub fn reduce_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ambient_dim, "dimension mismatch");
        let mut w = v.to_vec();
        for i in 0..self.basis.rows() {
            let pj = pivot_col(&self.basis, i).expect("HNF basis row must be nonzero");
            let q = w[pj].div_floor(self.basis.get(i, pj));
            if q.is_zero() {
                continue;
            }
            for j in pj..self.ambient_dim {
                let t = &q * self.basis.get(i, j);
                w[j] -= t;
            }
        }
        w
    }

    /// Smallest lattice containing both summands.
    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        hnf(&self.basis.stack(&other.basis))
    }

    /// Intersection of two sublattices of the same ambient space.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        if self.is_zero() || other.is_zero() {
            return Lattice::zero(self.ambient_dim);
        }
        // x in both spans iff x = a*B1 = -b*B2 for some (a, b) in the left
        // kernel of [B1; B2].
        let stacked = self.basis.stack(&other.basis);
        let ker = left_kernel(&stacked);
        let rows: Vec<Vec<BigInt>> = ker
            .row_vecs()
            .into_iter()
            .map(|k| self.basis.apply_left(&k[..self.basis.rows()]))
            .collect();
        hnf(&IntMatrix::from_rows(if rows.is_empty() {
            vec![vec![BigInt::zero(); self.ambient_dim]]
        } else {
            rows
        }))
    }

    /// Index [Z^n : L] as the product of pivot entries; `None` when the
    /// lattice has lower rank (infinite index).
    pub fn index_in_ambient(&self) -> Option<BigInt> {
        if self.rank() < self.ambient_dim {
            return None;
        }
        let mut p = BigInt::one();
        for i in 0..self.basis.rows() {
            p *= self.basis.get(i, i);
        }
        Some(p)
    }
}

fn pivot_col(m: &IntMatrix, row: usize) -> Option<usize> {
    (0..m.cols()).find(|&j| !m.get(row, j).is_zero())
}

/// Row Hermite normal form of the span of `m`.
pub fn hnf(m: &IntMatrix) -> Lattice {
    let cols = m.cols();
    let mut rows: Vec<Vec<BigInt>> =
        m.row_vecs().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row index, col)
    let mut r = 0;
    for c in 0..cols {
        // gcd-combine every row below r that is nonzero in column c
        let mut i = r;
        while i < rows.len() {
            if rows[i][c].is_zero() {
                i += 1;
                continue;
            }
            if i == r {
                i += 1;
                continue;
            }
            if rows[r][c].is_zero() || rows[i][c].abs() < rows[r][c].abs() {
                rows.swap(r, i);
            }
            if rows[i][c].is_zero() {
                i += 1;
                continue;
            }
            let q = div_round(&rows[i][c], &rows[r][c]);
            for j in 0..cols {
                let t = &q * &rows[r][j];
                rows[i][j] -= t;
            }
            if rows[i][c].is_zero() {
                i += 1;
            }
            // otherwise stay on row i: its entry shrank and we loop again
        }
        if rows.get(r).map(|row| !row[c].is_zero()).unwrap_or(false) {
            if rows[r][c].is_negative() {
                for j in 0..cols {
                    rows[r][j] = -rows[r][j].clone();
                }
            }
            pivots.push((r, c));
            r += 1;
        }
    }
    rows.truncate(r);
    // second pass: reduce entries above each pivot into [0, pivot)
    for &(pr, pc) in pivots.iter() {
        for i in 0..pr {
            let q = rows[i][pc].div_floor(&rows[pr][pc]);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                let t = &q * &rows[pr][j];
                rows[i][j] -= t;
            }
        }
    }
    if rows.is_empty() {
        Lattice::zero(cols)
    } else {
        Lattice { ambient_dim: cols, basis: IntMatrix::from_rows(rows) }
    }
}

// Rounded division keeps the Euclidean descent in hnf short.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Smith invariant factors d1 | d2 | ... of `m`, zeros last for rank deficit.
/// The returned sequence has length min(rows, cols).
pub fn snf_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.row_vecs();
    let rows = m.rows();
    let cols = m.cols();
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);
    let mut top = 0usize;
    while top < n {
        // locate a nonzero entry in the working block
        let mut found = None;
        'search: for i in top..rows {
            for j in top..cols {
                if !a[i][j].is_zero() {
                    found = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = found else { break };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(top, pj);
        }
        // clear row and column `top`, restarting whenever a remainder appears
        loop {
            let mut dirty = false;
            for i in top + 1..rows {
                while !a[i][top].is_zero() {
                    let q = a[i][top].div_floor(&a[top][top]);
                    for j in top..cols {
                        let t = &q * &a[top][j];
                        a[i][j] -= t;
                    }
                    if !a[i][top].is_zero() {
                        a.swap(top, i);
                        dirty = true;
                    }
                }
            }
            for j in top + 1..cols {
                while !a[top][j].is_zero() {
                    let q = a[top][j].div_floor(&a[top][top]);
                    for row in a.iter_mut().take(rows).skip(top) {
                        let t = &q * &row[top];
                        row[j] -= t;
                    }
                    if !a[top][j].is_zero() {
                        for row in a.iter_mut().take(rows).skip(top) {
                            row.swap(top, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        // enforce divisibility of the remaining block by the pivot
        let mut fixed = true;
        'divis: for i in top + 1..rows {
            for j in top + 1..cols {
                if !(&a[i][j] % &a[top][top]).is_zero() {
                    for jj in top..cols {
                        let t = a[i][jj].clone();
                        a[top][jj] += t;
                    }
                    fixed = false;
                    break 'divis;
                }
            }
        }
        if !fixed {
            continue; // redo elimination with the enlarged pivot row
        }
        diag.push(a[top][top].abs());
        top += 1;
    }
    while diag.len() < n {
        diag.push(BigInt::zero());
    }
    diag
}

/// Basis of the left kernel {x : x M = 0}.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    // reduce [M | I] by row operations; rows whose M part vanishes carry a
    // kernel basis in the I part
    let mut aug: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            for k in 0..n {
                r.push(if k == i { BigInt::one() } else { BigInt::zero() });
            }
            r
        })
        .collect();
    let cols = m.cols();
    let mut r = 0usize;
    for c in 0..cols {
        let mut i = r;
        while i < aug.len() {
            if aug[i][c].is_zero() || i == r {
                i += 1;
                continue;
            }
            if aug[r][c].is_zero() || aug[i][c].abs() < aug[r][c].abs() {
                aug.swap(r, i);
            }
            if aug[i][c].is_zero() {
                i += 1;
                continue;
            }
            let q = div_round(&aug[i][c], &aug[r][c]);
            for j in 0..cols + n {
                let t = &q * &aug[r][j];
                aug[i][j] -= t;
            }
            if aug[i][c].is_zero() {
                i += 1;
            }
        }
        if r < aug.len() && !aug[r][c].is_zero() {
            r += 1;
        }
    }
    let rows: Vec<Vec<BigInt>> = aug
        .into_iter()
        .filter(|row| row[..cols].iter().all(|x| x.is_zero()))
        .map(|row| row[cols..].to_vec())
        .collect();
    if rows.is_empty() {
        IntMatrix::zero(0, n)
    } else {
        IntMatrix::from_rows(rows)
    }
}

/// The lattice {x : x M lies in L}.
pub fn preimage(m: &IntMatrix, l: &Lattice) -> Lattice {
    assert_eq!(m.cols(), l.ambient_dim());
    let n = m.rows();
    let stacked = m.stack(l.basis());
    let ker = left_kernel(&stacked);
    let rows: Vec<Vec<BigInt>> = ker.row_vecs().into_iter().map(|k| k[..n].to_vec()).collect();
    if rows.is_empty() {
        Lattice::zero(n)
    } else {
        hnf(&IntMatrix::from_rows(rows))
    }
}

/// One solution x of x M = c modulo nothing, or None when the system is
/// unsolvable over the integers.
pub fn solve_left(m: &IntMatrix, c: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.cols(), c.len());
    let n = m.rows();
    // track U with U M = H while reducing
    let mut h = m.row_vecs();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let cols = m.cols();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0usize;
    for cix in 0..cols {
        let mut i = r;
        while i < h.len() {
            if h[i][cix].is_zero() || i == r {
                i += 1;
                continue;
            }
            if h[r][cix].is_zero() || h[i][cix].abs() < h[r][cix].abs() {
                h.swap(r, i);
                u.swap(r, i);
            }
            if h[i][cix].is_zero() {
                i += 1;
                continue;
            }
            let q = div_round(&h[i][cix], &h[r][cix]);
            for j in 0..cols {
                let t = &q * &h[r][j];
                h[i][j] -= t;
            }
            for j in 0..n {
                let t = &q * &u[r][j];
                u[i][j] -= t;
            }
            if h[i][cix].is_zero() {
                i += 1;
            }
        }
        if r < h.len() && !h[r][cix].is_zero() {
            pivots.push((r, cix));
            r += 1;
        }
    }
    // back-substitute c against the echelon rows
    let mut w = c.to_vec();
    let mut x = vec![BigInt::zero(); n];
    for &(ri, cj) in &pivots {
        if w[cj].is_zero() {
            continue;
        }
        let (q, rem) = w[cj].div_rem(&h[ri][cj]);
        if !rem.is_zero() {
            return None;
        }
        for j in 0..cols {
            let t = &q * &h[ri][j];
            w[j] -= t;
        }
        for j in 0..n {
            let t = &q * &u[ri][j];
            x[j] += t;
        }
    }
    if w.iter().all(|z| z.is_zero()) {
        Some(x)
    } else {
        None
    }
}

/// Solves x M = c (mod L): a single solution if one exists.
pub fn solve_left_mod(m: &IntMatrix, c: &[BigInt], l: &Lattice) -> Option<Vec<BigInt>> {
    let stacked = m.stack(l.basis());
    solve_left(&stacked, c).map(|x| x[..m.rows()].to_vec())
}
