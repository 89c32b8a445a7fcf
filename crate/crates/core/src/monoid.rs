//! Finite commutative monoids with zero, given by explicit multiplication
//! tables.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error("monoid has no absorbing zero element")]
    NoZero,
    #[error("monoid has no identity element")]
    NoOne,
    #[error("multiplication is not commutative at ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("product entry out of range at ({0}, {1})")]
    BadEntry(usize, usize),
}

/// Multiplication table of a finite commutative monoid with zero.
///
/// Elements are indexed 0..len; `zero` and `one` are indices into that range.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonoidTable {
    names: Vec<String>,
    zero: usize,
    one: usize,
    mul: Vec<usize>, // row major, len*len
}

impl MonoidTable {
    /// Validates commutativity, associativity, identity and absorption.
    pub fn new(
        names: Vec<String>,
        zero: usize,
        one: usize,
        mul: Vec<usize>,
    ) -> Result<Self, MonoidError> {
        let n = names.len();
        assert_eq!(mul.len(), n * n, "table size mismatch");
        for i in 0..n {
            for j in i + 1..n {
                if names[i] == names[j] {
                    return Err(MonoidError::DuplicateName(names[i].clone()));
                }
            }
        }
        let t = MonoidTable { names, zero, one, mul };
        for i in 0..n {
            for j in 0..n {
                if t.mul(i, j) >= n {
                    return Err(MonoidError::BadEntry(i, j));
                }
                if t.mul(i, j) != t.mul(j, i) {
                    return Err(MonoidError::NotCommutative(i, j));
                }
            }
        }
        for a in 0..n {
            if t.mul(t.one, a) != a {
                return Err(MonoidError::NoOne);
            }
            if t.mul(t.zero, a) != t.zero {
                return Err(MonoidError::NoZero);
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c)) {
                        return Err(MonoidError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.names.len() + b]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The one-element table where 1 = 0 (the zero monoid).
    pub fn zero_monoid() -> Self {
        MonoidTable { names: vec!["0".to_string()], zero: 0, one: 0, mul: vec![0] }
    }

    /// Indices of invertible elements.
    pub fn units(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| (0..self.len()).any(|b| self.mul(a, b) == self.one)).collect()
    }

    /// Integrality at the table level: 1 != 0 and af = bf forces a = b or
    /// f = 0.
    pub fn is_integral(&self) -> bool {
        if self.zero == self.one {
            return false;
        }
        for f in 0..self.len() {
            if f == self.zero {
                continue;
            }
            for a in 0..self.len() {
                for b in 0..self.len() {
                    if a != b && self.mul(a, f) == self.mul(b, f) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// x^k by repeated multiplication.
    pub fn pow(&self, x: usize, k: usize) -> usize {
        let mut acc = self.one;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }
}
