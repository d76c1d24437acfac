//! Incremental Gauss–Jordan elimination over a generic exact field backend.
//!
//! Rows are fed one at a time into a basis kept in reduced row-echelon form.
//! Over GF(p) the backend works on raw `u64` residues; over Q on
//! `BigRational`. Optionally every basis row remembers which input rows it
//! was combined from, so an inconsistent row yields a certificate.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{mod_inv, Scalar};

pub(crate) trait Arith {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `target -= f * x`
    fn sub_mul(&self, target: &mut Self::E, f: &Self::E, x: &Self::E);
    fn inv(&self, a: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn lift(&self, s: &Scalar) -> Self::E;
    fn lower(&self, e: &Self::E) -> Scalar;
}

#[derive(Clone, Copy)]
pub(crate) struct ModP(pub u64);

impl Arith for ModP {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    #[inline]
    fn sub_mul(&self, target: &mut u64, f: &u64, x: &u64) {
        let p = self.0;
        *target = (*target + p - (f * x) % p) % p;
    }
    fn inv(&self, a: &u64) -> u64 {
        mod_inv(*a, self.0)
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn lift(&self, s: &Scalar) -> u64 {
        s.residue()
    }
    fn lower(&self, e: &u64) -> Scalar {
        Scalar::Mod { value: *e, p: self.0 }
    }
}

#[derive(Clone, Copy)]
pub(crate) struct Rat;

impl Arith for Rat {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub_mul(&self, target: &mut BigRational, f: &BigRational, x: &BigRational) {
        if !x.is_zero() {
            *target -= f * x;
        }
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn lift(&self, s: &Scalar) -> BigRational {
        s.as_rational().clone()
    }
    fn lower(&self, e: &BigRational) -> Scalar {
        Scalar::Rat(e.clone())
    }
}

/// Source rows with their coefficients, and the nonzero right-hand side they sum to.
pub(crate) type Combination<E> = (Vec<(usize, E)>, E);

/// Result of feeding rows: canonical RREF basis (sorted by pivot), and, if a
/// row reduced to `0 = r` with `r != 0`, the combination that proves it.
pub(crate) struct Reduced<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
    pub inconsistency: Option<Combination<E>>,
}

pub(crate) struct Echelon<'a, A: Arith> {
    ar: &'a A,
    width: usize,
    augmented: bool,
    rows: Vec<Vec<A::E>>,
    pivots: Vec<usize>,
    certify: bool,
    combos: Vec<Vec<A::E>>,
    slot_source: Vec<usize>,
    inconsistency: Option<Combination<A::E>>,
}

impl<'a, A: Arith> Echelon<'a, A> {
    pub fn new(ar: &'a A, width: usize, augmented: bool, certify: bool) -> Self {
        Echelon {
            ar,
            width,
            augmented,
            rows: Vec::new(),
            pivots: Vec::new(),
            certify,
            combos: Vec::new(),
            slot_source: Vec::new(),
            inconsistency: None,
        }
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistency.is_some()
    }

    /// Feeds one row (length `width`, plus one rhs entry when augmented).
    /// `source` is the caller's index for the row, used in certificates.
    pub fn push(&mut self, source: usize, mut row: Vec<A::E>) {
        if self.inconsistency.is_some() {
            return;
        }
        let ar = self.ar;
        let full_rank = self.rows.len() == self.width;
        let mut combo: Vec<A::E> = if self.certify { vec![ar.zero(); self.slot_source.len()] } else { Vec::new() };

        for (i, basis) in self.rows.iter().enumerate() {
            let c = self.pivots[i];
            if ar.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            if full_rank {
                // only the rhs entry can survive
                if self.augmented {
                    let w = self.width;
                    ar.sub_mul(&mut row[w], &f, &basis[w]);
                }
                row[c] = ar.zero();
            } else {
                for k in c..row.len() {
                    if !ar.is_zero(&basis[k]) {
                        ar.sub_mul(&mut row[k], &f, &basis[k]);
                    }
                }
            }
            if self.certify {
                for (s, v) in self.combos[i].iter().enumerate() {
                    if !ar.is_zero(v) {
                        ar.sub_mul(&mut combo[s], &f, v);
                    }
                }
            }
        }

        let lead = if full_rank { None } else { (0..self.width).find(|&k| !ar.is_zero(&row[k])) };
        let Some(c) = lead else {
            if self.augmented && !ar.is_zero(&row[self.width]) {
                let mut comb: Vec<(usize, A::E)> = Vec::new();
                if self.certify {
                    for (s, v) in combo.iter().enumerate() {
                        if !ar.is_zero(v) {
                            comb.push((self.slot_source[s], v.clone()));
                        }
                    }
                }
                comb.push((source, ar.one()));
                comb.sort_by_key(|(i, _)| *i);
                self.inconsistency = Some((comb, row[self.width].clone()));
            }
            return;
        };

        let scale = ar.inv(&row[c]);
        for v in row.iter_mut() {
            if !ar.is_zero(v) {
                *v = ar.mul(v, &scale);
            }
        }
        if self.certify {
            let slot = self.slot_source.len();
            self.slot_source.push(source);
            combo.push(ar.one());
            for v in combo.iter_mut() {
                *v = ar.mul(v, &scale);
            }
            for other in self.combos.iter_mut() {
                other.resize(slot + 1, ar.zero());
            }
        }

        for (i, basis) in self.rows.iter_mut().enumerate() {
            if ar.is_zero(&basis[c]) {
                continue;
            }
            let f = basis[c].clone();
            for k in c..basis.len() {
                if !ar.is_zero(&row[k]) {
                    ar.sub_mul(&mut basis[k], &f, &row[k]);
                }
            }
            if self.certify {
                let target = &mut self.combos[i];
                for (s, v) in combo.iter().enumerate() {
                    if !ar.is_zero(v) {
                        ar.sub_mul(&mut target[s], &f, v);
                    }
                }
            }
        }
        self.rows.push(row);
        self.pivots.push(c);
        if self.certify {
            self.combos.push(combo);
        }
    }

    pub fn finish(self) -> Reduced<A::E> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows_opt: Vec<Option<Vec<A::E>>> = self.rows.into_iter().map(Some).collect();
        let rows = order.iter().map(|&i| rows_opt[i].take().expect("row")).collect();
        let pivots = order.iter().map(|&i| self.pivots[i]).collect();
        Reduced { rows, pivots, inconsistency: self.inconsistency }
    }
}

/// Null space of the row-reduced matrix, as unnormalised vectors indexed by
/// free column.
pub(crate) fn null_vectors<A: Arith>(ar: &A, rows: &[Vec<A::E>], pivots: &[usize], width: usize) -> Vec<Vec<A::E>> {
    let mut is_pivot = vec![false; width];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..width).filter(|&c| !is_pivot[c]) {
        let mut v = vec![ar.zero(); width];
        v[free] = ar.one();
        for (row, &c) in rows.iter().zip(pivots) {
            if !ar.is_zero(&row[free]) {
                v[c] = ar.neg(&row[free]);
            }
        }
        out.push(v);
    }
    out
}

pub(crate) fn lift_vec<A: Arith>(ar: &A, v: &[Scalar]) -> Vec<A::E> {
    v.iter().map(|s| ar.lift(s)).collect()
}

pub(crate) fn lower_vec<A: Arith>(ar: &A, v: &[A::E]) -> Vec<Scalar> {
    v.iter().map(|e| ar.lower(e)).collect()
}

/// Dispatches a generic routine to the backend matching `field`.
macro_rules! with_arith {
    ($field:expr, |$ar:ident| $body:expr) => {
        match $field {
            $crate::exactla::Field::Prime(p) => {
                let $ar = &$crate::exactla::elim::ModP(p);
                $body
            }
            $crate::exactla::Field::Rationals => {
                let $ar = &$crate::exactla::elim::Rat;
                $body
            }
        }
    };
}
pub(crate) use with_arith;
