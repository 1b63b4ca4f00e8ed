//! Laurent polynomials in `A^(1/2)` and the puncture variables `v1, ..., vn`.
//!
//! Exponents of `A` are stored in half units, so `A` itself is the monomial
//! with `half_a == 2` and `A^(1/2) + A^(-1/2)` has integral exponents `1, -1`.
//! Coefficients are arbitrary-precision integers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("substitution value for {0} is zero")]
    ZeroSubstitution(String),
    #[error("expected {expected} puncture values, got {got}")]
    WrongValueCount { expected: usize, got: usize },
}

/// A monomial `A^(half_a/2) * v1^e1 * ... * vn^en`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub half_a: i64,
    pub vexp: Vec<i64>,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial { half_a: 0, vexp: vec![0; arity] }
    }

    pub fn arity(&self) -> usize {
        self.vexp.len()
    }

    pub fn is_one(&self) -> bool {
        self.half_a == 0 && self.vexp.iter().all(|&e| e == 0)
    }

    fn degree(&self) -> i64 {
        self.half_a + self.vexp.iter().sum::<i64>()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), other.arity());
        Monomial {
            half_a: self.half_a + other.half_a,
            vexp: self.vexp.iter().zip(&other.vexp).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial { half_a: self.half_a * k, vexp: self.vexp.iter().map(|e| e * k).collect() }
    }
}

// Graded lexicographic: total degree first, then (half_a, vexp) lexicographically.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.half_a.cmp(&other.half_a))
            .then_with(|| self.vexp.cmp(&other.vexp))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        match self.half_a {
            0 => {}
            2 => factors.push("A".to_string()),
            h if h % 2 == 0 => factors.push(format!("A^{}", h / 2)),
            h => factors.push(format!("A^({}/2)", h)),
        }
        for (i, &e) in self.vexp.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(format!("v{}", i + 1)),
                e => factors.push(format!("v{}^{}", i + 1, e)),
            }
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

/// An element of `Z[A^(±1/2), v1^(±1), ..., vn^(±1)]` in canonical sparse form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    arity: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero(arity: usize) -> Self {
        LaurentPoly { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, 1)
    }

    pub fn constant(arity: usize, c: impl Into<BigInt>) -> Self {
        Self::term(arity, c, Monomial::one(arity))
    }

    pub fn term(arity: usize, c: impl Into<BigInt>, m: Monomial) -> Self {
        assert_eq!(m.arity(), arity, "monomial arity");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { arity, terms }
    }

    /// `A^(half/2)`.
    pub fn a_half_pow(arity: usize, half: i64) -> Self {
        Self::term(arity, 1, Monomial { half_a: half, vexp: vec![0; arity] })
    }

    /// `A^k`.
    pub fn a_pow(arity: usize, k: i64) -> Self {
        Self::a_half_pow(arity, 2 * k)
    }

    /// `v_i^k` with `i` counted from 1.
    pub fn v_pow(arity: usize, i: usize, k: i64) -> Self {
        assert!(i >= 1 && i <= arity, "puncture index {i} out of range 1..={arity}");
        let mut m = Monomial::one(arity);
        m.vexp[i - 1] = k;
        Self::term(arity, 1, m)
    }

    /// `δ = A^(1/2) + A^(-1/2)`.
    pub fn delta(arity: usize) -> Self {
        Self::a_half_pow(arity, 1) + Self::a_half_pow(arity, -1)
    }

    /// The trivial loop value `-A^2 - A^-2`.
    pub fn framing_loop(arity: usize) -> Self {
        -(Self::a_pow(arity, 2) + Self::a_pow(arity, -2))
    }

    /// The value of a loop around a single puncture, `A + A^-1`.
    pub fn puncture_loop(arity: usize) -> Self {
        Self::a_pow(arity, 1) + Self::a_pow(arity, -1)
    }

    pub fn from_terms(arity: usize, it: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero(arity);
        for (m, c) in it {
            assert_eq!(m.arity(), arity, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map_or(false, |(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Returns `(c, m)` when the polynomial is a single term `c * m`.
    pub fn as_single_term(&self) -> Option<(&BigInt, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    /// The multiplicative inverse, which exists exactly for `±monomial`.
    pub fn unit_inverse(&self) -> Option<LaurentPoly> {
        let (c, m) = self.as_single_term()?;
        if c.abs().is_one() {
            Some(Self::term(self.arity, c.clone(), m.pow(-1)))
        } else {
            None
        }
    }

    /// True when no `v` appears and every power of `A` is whole.
    pub fn is_skein_scalar(&self) -> bool {
        self.terms.keys().all(|m| m.half_a % 2 == 0 && m.vexp.iter().all(|&e| e == 0))
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &LaurentPoly) -> Result<(), RingError> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(RingError::ArityMismatch(self.arity, other.arity))
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        self.check_arity(other)?;
        let mut out = LaurentPoly::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> LaurentPoly {
        if k.is_zero() {
            return LaurentPoly::zero(self.arity);
        }
        LaurentPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Non-negative powers of any element; negative powers of units.
    pub fn pow(&self, k: i64) -> Option<LaurentPoly> {
        if k < 0 {
            return self.unit_inverse()?.pow(-k);
        }
        let mut acc = LaurentPoly::one(self.arity);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }

    /// Re-embeds into a ring with `arity` puncture variables, padding with zero exponents.
    /// Fails if a variable with index above `arity` is used.
    pub fn with_arity(&self, arity: usize) -> Option<LaurentPoly> {
        let mut out = LaurentPoly::zero(arity);
        for (m, c) in &self.terms {
            if m.vexp.iter().skip(arity).any(|&e| e != 0) {
                return None;
            }
            let mut vexp = m.vexp.clone();
            vexp.resize(arity, 0);
            out.add_term(Monomial { half_a: m.half_a, vexp }, c.clone());
        }
        Some(out)
    }

    /// Substitutes `A^(1/2) -> a_half` and `v_i -> vs[i-1]`.
    pub fn specialize(&self, a_half: &BigRational, vs: &[BigRational]) -> Result<BigRational, RingError> {
        if vs.len() != self.arity {
            return Err(RingError::WrongValueCount { expected: self.arity, got: vs.len() });
        }
        if a_half.is_zero() {
            return Err(RingError::ZeroSubstitution("A^(1/2)".into()));
        }
        if let Some(i) = vs.iter().position(|v| v.is_zero()) {
            return Err(RingError::ZeroSubstitution(format!("v{}", i + 1)));
        }
        let rpow = |x: &BigRational, e: i64| -> BigRational {
            let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
            if e < 0 {
                p.recip()
            } else {
                p
            }
        };
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone()) * rpow(a_half, m.half_a);
            for (v, &e) in vs.iter().zip(&m.vexp) {
                t *= rpow(v, e);
            }
            total += t;
        }
        Ok(total)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write_unsigned_term(f, &c.abs(), m)?;
        }
        Ok(())
    }
}

/// Writes `|c| * m` without sign, omitting a unit coefficient or a trivial monomial.
pub(crate) fn write_unsigned_term(f: &mut impl fmt::Write, c: &BigInt, m: &Monomial) -> fmt::Result {
    if m.is_one() {
        write!(f, "{}", c)
    } else if c.is_one() {
        write!(f, "{}", m)
    } else {
        write!(f, "{}*{}", c, m)
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = crate::expr::ParseError;

    /// Parses with the arity inferred from the largest `v` index present.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::expr::parse_scalar(s, None)
    }
}

impl LaurentPoly {
    /// Parses the canonical text form into a ring of the given arity.
    pub fn parse(s: &str, arity: usize) -> Result<Self, crate::expr::ParseError> {
        crate::expr::parse_scalar(s, Some(arity))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("LaurentPoly addition")
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("LaurentPoly multiplication")
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

macro_rules! mixed_ops {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    )*};
}
pub(crate) use mixed_ops;

mixed_ops!(LaurentPoly, Add add, Sub sub, Mul mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(k: i64) -> LaurentPoly {
        LaurentPoly::a_pow(2, k)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = a(1) + (-a(1));
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn term_merge() {
        let p = (a(1) + a(-1)) + LaurentPoly::framing_loop(2);
        assert_eq!(p.to_string(), "-A^2 + A + A^-1 - A^-2");
    }

    #[test]
    fn coefficient_addition() {
        let v1 = LaurentPoly::v_pow(2, 1, 1);
        assert_eq!((&v1 + &v1).to_string(), "2*v1");
    }

    #[test]
    fn products() {
        let d = a(1) - a(-1);
        assert_eq!((&d * &d).to_string(), "A^2 - 2 + A^-2");
        let delta = LaurentPoly::delta(0);
        assert_eq!((&delta * &delta).to_string(), "A + 2 + A^-1");
        let v = LaurentPoly::v_pow(1, 1, 1) * LaurentPoly::v_pow(1, 1, -1);
        assert!(v.is_one());
    }

    #[test]
    fn arity_mismatch() {
        let p = LaurentPoly::one(1);
        let q = LaurentPoly::one(2);
        assert_eq!(p.try_add(&q), Err(RingError::ArityMismatch(1, 2)));
        assert_eq!(p.try_mul(&q), Err(RingError::ArityMismatch(1, 2)));
    }

    #[test]
    fn specialize_examples() {
        assert_eq!(LaurentPoly::a_pow(0, 2).specialize(&q(2, 1), &[]).unwrap(), q(16, 1));
        assert_eq!(LaurentPoly::delta(0).specialize(&q(2, 1), &[]).unwrap(), q(5, 2));
        let p = LaurentPoly::v_pow(2, 1, -1) * LaurentPoly::v_pow(2, 2, 1);
        assert_eq!(p.specialize(&q(1, 1), &[q(3, 1), q(5, 1)]).unwrap(), q(5, 3));
    }

    #[test]
    fn specialize_rejects_zero() {
        let p = LaurentPoly::one(1);
        assert!(matches!(p.specialize(&q(0, 1), &[q(1, 1)]), Err(RingError::ZeroSubstitution(_))));
        assert!(matches!(p.specialize(&q(1, 1), &[q(0, 1)]), Err(RingError::ZeroSubstitution(_))));
        assert!(matches!(p.specialize(&q(1, 1), &[]), Err(RingError::WrongValueCount { .. })));
    }

    #[test]
    fn unit_inverse_only_for_signed_monomials() {
        let m = -LaurentPoly::a_half_pow(1, 3);
        assert!((&m * &m.unit_inverse().unwrap()).is_one());
        assert!(LaurentPoly::delta(1).unit_inverse().is_none());
        assert!(LaurentPoly::constant(1, 2).unit_inverse().is_none());
    }

    #[test]
    fn display_half_powers() {
        assert_eq!(LaurentPoly::delta(0).to_string(), "A^(1/2) + A^(-1/2)");
        let p = LaurentPoly::a_half_pow(3, 3) * LaurentPoly::v_pow(3, 3, -1).scale(&BigInt::from(-4));
        assert_eq!(p.to_string(), "-4*A^(3/2)*v3^-1");
    }
}
