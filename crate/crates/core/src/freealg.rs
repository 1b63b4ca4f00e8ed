//! The free noncommutative algebra over the Laurent coefficient ring.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::ring::{write_unsigned_term, LaurentPoly, RingError};

/// A named generator such as `a1` (an arc) or `g2` (a closed curve).
///
/// Index 0 means the generator is written without a subscript (`a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: char,
    pub index: u32,
}

impl Generator {
    pub const fn new(name: char, index: u32) -> Self {
        Generator { name, index }
    }

    pub const fn alpha(index: u32) -> Self {
        Generator::new('a', index)
    }

    pub const fn gamma(index: u32) -> Self {
        Generator::new('g', index)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}{}", self.name, self.index)
        }
    }
}

/// A word in the generators; the empty word is the identity.
///
/// Words are ordered by length first, then lexicographically. This order is
/// compatible with concatenation on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn from_gens(gens: &[Generator]) -> Self {
        Word(gens.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Position of the leftmost occurrence of `pattern`.
    pub fn find(&self, pattern: &Word) -> Option<usize> {
        self.find_all(pattern).next()
    }

    pub fn find_all<'a>(&'a self, pattern: &'a Word) -> impl Iterator<Item = usize> + 'a {
        let n = pattern.len();
        let last = (self.len() + 1).saturating_sub(n.max(1));
        (0..last).filter(move |&i| n > 0 && self.0[i..i + n] == pattern.0[..])
    }

    /// Splits around `pattern` at `pos`, returning `(prefix, suffix)`.
    pub fn split_around(&self, pos: usize, len: usize) -> (Word, Word) {
        (Word(self.0[..pos].to_vec()), Word(self.0[pos + len..].to_vec()))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == g {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "{}", g)?;
            } else {
                write!(f, "{}^{}", g, run)?;
            }
            i += run;
        }
        Ok(())
    }
}

impl From<Vec<Generator>> for Word {
    fn from(v: Vec<Generator>) -> Self {
        Word(v)
    }
}

/// A finite linear combination of words with Laurent polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgElement {
    arity: usize,
    terms: BTreeMap<Word, LaurentPoly>,
}

impl AlgElement {
    pub fn zero(arity: usize) -> Self {
        AlgElement { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::scalar(LaurentPoly::one(arity))
    }

    pub fn scalar(c: LaurentPoly) -> Self {
        Self::monomial(c, Word::one())
    }

    pub fn monomial(c: LaurentPoly, w: Word) -> Self {
        let arity = c.arity();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        AlgElement { arity, terms }
    }

    pub fn word(arity: usize, w: Word) -> Self {
        Self::monomial(LaurentPoly::one(arity), w)
    }

    pub fn generator(arity: usize, g: Generator) -> Self {
        Self::word(arity, Word(vec![g]))
    }

    pub fn from_terms(arity: usize, it: impl IntoIterator<Item = (Word, LaurentPoly)>) -> Self {
        let mut x = Self::zero(arity);
        for (w, c) in it {
            assert_eq!(c.arity(), arity, "coefficient arity");
            x.add_term(w, c);
        }
        x
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl DoubleEndedIterator<Item = (Word, LaurentPoly)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, w: &Word) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_else(|| LaurentPoly::zero(self.arity))
    }

    pub fn support(&self) -> BTreeSet<Word> {
        self.terms.keys().cloned().collect()
    }

    /// The largest word with nonzero coefficient.
    pub fn leading(&self) -> Option<(&Word, &LaurentPoly)> {
        self.terms.iter().next_back()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Returns the scalar when the element is a multiple of the empty word.
    pub fn as_scalar(&self) -> Option<LaurentPoly> {
        match self.terms.len() {
            0 => Some(LaurentPoly::zero(self.arity)),
            1 => self.terms.get(&Word::one()).cloned(),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, w: Word, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub(crate) fn remove_term(&mut self, w: &Word) -> Option<LaurentPoly> {
        self.terms.remove(w)
    }

    fn check_arity(&self, other: &AlgElement) -> Result<(), RingError> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(RingError::ArityMismatch(self.arity, other.arity))
        }
    }

    pub fn fadd(&self, other: &AlgElement) -> Result<AlgElement, RingError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    /// Free (relation-free) product: bilinear extension of concatenation.
    pub fn fmul(&self, other: &AlgElement) -> Result<AlgElement, RingError> {
        self.check_arity(other)?;
        let mut out = AlgElement::zero(self.arity);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &LaurentPoly) -> Result<AlgElement, RingError> {
        if c.arity() != self.arity {
            return Err(RingError::ArityMismatch(self.arity, c.arity()));
        }
        let mut out = AlgElement::zero(self.arity);
        for (w, d) in &self.terms {
            out.add_term(w.clone(), c * d);
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient, dropping zero results.
    pub fn map_coefficients(&self, arity: usize, mut f: impl FnMut(&LaurentPoly) -> LaurentPoly) -> AlgElement {
        let mut out = AlgElement::zero(arity);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> AlgElement {
        let mut acc = AlgElement::one(self.arity);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Generators occurring in any word of the support.
    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).collect()
    }
}

impl fmt::Display for AlgElement {
    /// Words in descending term order; multi-term coefficients are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>, neg: bool| -> fmt::Result {
            let s = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            write!(f, "{}", s)
        };
        for (w, c) in self.terms.iter().rev() {
            if w.is_empty() {
                for (m, k) in c.terms().rev() {
                    sep(f, k.is_negative())?;
                    write_unsigned_term(f, &k.abs(), m)?;
                }
            } else if let Some((k, m)) = c.as_single_term() {
                sep(f, k.is_negative())?;
                let k = k.abs();
                if !(m.is_one() && k.is_one()) {
                    write_unsigned_term(f, &k, m)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", w)?;
            } else {
                sep(f, false)?;
                write!(f, "({})*{}", c, w)?;
            }
        }
        Ok(())
    }
}

impl Add for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        self.fadd(rhs).expect("AlgElement addition")
    }
}

impl Add for AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: AlgElement) -> AlgElement {
        &self + &rhs
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        self + &(-rhs)
    }
}

impl Sub for AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: AlgElement) -> AlgElement {
        &self - &rhs
    }
}

impl Mul for &AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        self.fmul(rhs).expect("AlgElement multiplication")
    }
}

impl Mul for AlgElement {
    type Output = AlgElement;
    fn mul(self, rhs: AlgElement) -> AlgElement {
        &self * &rhs
    }
}

crate::ring::mixed_ops!(AlgElement, Add add, Sub sub, Mul mul);

impl Mul<&AlgElement> for &LaurentPoly {
    type Output = AlgElement;
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        rhs.scalar_mul(self).expect("scalar multiplication")
    }
}

impl Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        self.map_coefficients(self.arity, |c| -c)
    }
}

impl Neg for AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        -&self
    }
}

/// Integer scaling.
impl Mul<&AlgElement> for &BigInt {
    type Output = AlgElement;
    fn mul(self, rhs: &AlgElement) -> AlgElement {
        rhs.map_coefficients(rhs.arity, |c| c.scale(self))
    }
}
