//! Exact Laurent polynomials in `q^{1/2}` with integer coefficients.
//!
//! Exponents are stored doubled (`e2 = 2e`), so `q^{1/2}` is the monomial with
//! key 1 and `q` the monomial with key 2. Coefficients are `i128`; every
//! arithmetic step is checked and overflow aborts instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Coeff = i128;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentQ {
    terms: BTreeMap<i64, Coeff>,
}

fn add_coeff(a: Coeff, b: Coeff) -> Coeff {
    a.checked_add(b).expect("coefficient overflow in LaurentQ addition")
}

fn mul_coeff(a: Coeff, b: Coeff) -> Coeff {
    a.checked_mul(b).expect("coefficient overflow in LaurentQ multiplication")
}

impl LaurentQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c * q^{e2/2}`.
    pub fn monomial(e2: i64, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e2, c);
        }
        LaurentQ { terms }
    }

    /// `q^{e2/2}`.
    pub fn qpow(e2: i64) -> Self {
        Self::monomial(e2, 1)
    }

    /// `q^e` for an integer exponent.
    pub fn q(e: i64) -> Self {
        Self::qpow(2 * e)
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(0, c)
    }

    /// Builds from `(e2, coeff)` pairs, summing repeated exponents.
    pub fn from_pairs<I: IntoIterator<Item = (i64, Coeff)>>(pairs: I) -> Self {
        let mut out = LaurentQ::zero();
        for (e2, c) in pairs {
            out.add_term(e2, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0) == Some(&1)
    }

    /// Iterates `(e2, coeff)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Coeff)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^{e2/2}`.
    pub fn coeff(&self, e2: i64) -> Coeff {
        self.terms.get(&e2).copied().unwrap_or(0)
    }

    pub fn min_e2(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_e2(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e2: i64, c: Coeff) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e2).or_insert(0);
        *slot = add_coeff(*slot, c);
        if *slot == 0 {
            self.terms.remove(&e2);
        }
    }

    pub fn scale(&self, n: Coeff) -> Self {
        if n == 0 {
            return LaurentQ::zero();
        }
        LaurentQ { terms: self.terms.iter().map(|(&e, &c)| (e, mul_coeff(c, n))).collect() }
    }

    /// Multiplies by `q^{e2/2}`.
    pub fn shift(&self, e2: i64) -> Self {
        LaurentQ { terms: self.terms.iter().map(|(&e, &c)| (e + e2, c)).collect() }
    }

    /// Single term `±q^{e2/2}`; returns `(e2, ±1)`.
    pub fn as_unit_monomial(&self) -> Option<(i64, Coeff)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&e, &c) = self.terms.iter().next()?;
        (c == 1 || c == -1).then_some((e, c))
    }

    /// No negative exponents: the element lies in the ring of functions regular at `q = 0`.
    pub fn is_regular_at_zero(&self) -> bool {
        self.terms.keys().all(|&e| e >= 0)
    }

    /// Every exponent is a non-negative integer power of `q`.
    pub fn is_int_poly(&self) -> bool {
        self.terms.keys().all(|&e| e >= 0 && e % 2 == 0)
    }

    pub fn has_half_integer_exponent(&self) -> bool {
        self.terms.keys().any(|&e| e % 2 != 0)
    }

    /// Class modulo `q^2 Z[q]` as `(c0, c1)`; `None` when the value is not in `Z[q]`.
    pub fn mod_q2(&self) -> Option<(Coeff, Coeff)> {
        if !self.is_int_poly() {
            return None;
        }
        Some((self.coeff(0), self.coeff(2)))
    }

    /// Value at `q = 0`; `None` signals a pole.
    pub fn at_q0(&self) -> Option<Coeff> {
        if !self.is_regular_at_zero() {
            return None;
        }
        Some(self.coeff(0))
    }
}

impl fmt::Debug for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn fmt_power(e2: i64) -> String {
    match e2 {
        0 => String::new(),
        2 => "q".to_string(),
        _ if e2 % 2 == 0 => format!("q^{}", e2 / 2),
        _ => format!("q^({}/2)", e2),
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&e2, &c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if idx == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let pow = fmt_power(e2);
            match (mag, pow.is_empty()) {
                (_, true) => write!(f, "{}", mag)?,
                (1, false) => write!(f, "{}", pow)?,
                (_, false) => write!(f, "{}*{}", mag, pow)?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, Coeff)> = self.terms().collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, Coeff)> = Vec::deserialize(d)?;
        let mut prev = None;
        for &(e2, c) in &pairs {
            if c == 0 {
                return Err(D::Error::custom("zero coefficient in LaurentQ encoding"));
            }
            if prev.is_some_and(|p| p >= e2) {
                return Err(D::Error::custom("LaurentQ exponents must be strictly ascending"));
            }
            prev = Some(e2);
        }
        Ok(LaurentQ { terms: pairs.into_iter().collect() })
    }
}

impl<'a> Add<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentQ {
    type Output = LaurentQ;
    fn add(mut self, rhs: LaurentQ) -> LaurentQ {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentQ> for LaurentQ {
    fn add_assign(&mut self, rhs: &LaurentQ) {
        for (&e, &c) in &rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl<'a> Sub<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(e, c.checked_neg().expect("coefficient overflow in negation"));
        }
        out
    }
}

impl Sub for LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: LaurentQ) -> LaurentQ {
        &self - &rhs
    }
}

impl Neg for &LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        self.scale(-1)
    }
}

impl Neg for LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        self.scale(-1)
    }
}

impl<'a> Mul<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (&ea, &ca) in &self.terms {
            for (&eb, &cb) in &rhs.terms {
                out.add_term(ea + eb, mul_coeff(ca, cb));
            }
        }
        out
    }
}

impl Mul for LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: LaurentQ) -> LaurentQ {
        &self * &rhs
    }
}

pub fn lp_add(a: &LaurentQ, b: &LaurentQ) -> LaurentQ {
    a + b
}

pub fn lp_mul(a: &LaurentQ, b: &LaurentQ) -> LaurentQ {
    a * b
}

pub fn lp_scale(a: &LaurentQ, n: Coeff) -> LaurentQ {
    a.scale(n)
}

pub fn lp_qpow(e2: i64) -> LaurentQ {
    LaurentQ::qpow(e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(e: i64) -> LaurentQ {
        LaurentQ::q(e)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(lp_mul(&q(2), &q(-2)), LaurentQ::one());
        let lhs = lp_mul(&q(-1), &(LaurentQ::one() - q(2)));
        assert_eq!(lhs, q(-1) - q(1));
        let sum = lp_add(&(q(4) - LaurentQ::one()), &LaurentQ::one());
        assert_eq!(sum, q(4));
        assert_eq!(sum.len(), 1);
        assert_eq!(lp_qpow(1).coeff(1), 1);
        assert_eq!(lp_scale(&q(3), 0), LaurentQ::zero());
    }

    #[test]
    fn predicates() {
        let one_q2 = LaurentQ::one() + q(2);
        assert!(one_q2.is_regular_at_zero());
        assert!(!q(-1).is_regular_at_zero());
        assert!(LaurentQ::zero().is_regular_at_zero());

        assert!((q(4) - LaurentQ::one()).is_int_poly());
        assert!(!LaurentQ::qpow(1).is_int_poly());
        assert!(!q(-2).is_int_poly());
        assert!(LaurentQ::qpow(1).is_regular_at_zero());
    }

    #[test]
    fn reductions() {
        assert_eq!((LaurentQ::one() + q(2)).mod_q2(), Some((1, 0)));
        assert_eq!((q(4) - LaurentQ::one()).mod_q2(), Some((-1, 0)));
        assert_eq!(q(-1).mod_q2(), None);
        assert_eq!((q(1).scale(5) + q(3)).mod_q2(), Some((0, 5)));

        assert_eq!((LaurentQ::one() + q(2)).at_q0(), Some(1));
        assert_eq!((q(1) * (q(2) - LaurentQ::constant(3))).at_q0(), Some(0));
        assert_eq!(q(-1).at_q0(), None);
    }

    #[test]
    fn display() {
        assert_eq!((q(-1) - q(1)).to_string(), "q^-1 - q");
        assert_eq!((q(4) - LaurentQ::one()).to_string(), "-1 + q^4");
        assert_eq!(LaurentQ::zero().to_string(), "0");
        assert_eq!(LaurentQ::monomial(1, -3).to_string(), "-3*q^(1/2)");
    }

    #[test]
    fn json_encoding() {
        let a = q(-1).scale(2) - q(3);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, "[[-2,2],[6,-1]]");
        let back: LaurentQ = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<LaurentQ>("[[2,1],[0,1]]").is_err());
        assert!(serde_json::from_str::<LaurentQ>("[[0,0]]").is_err());
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_aborts() {
        let big = LaurentQ::constant(i128::MAX);
        let _ = &big + &LaurentQ::one();
    }

    fn arb_lq() -> impl Strategy<Value = LaurentQ> {
        prop::collection::vec((-8i64..8, -5i128..5), 0..6).prop_map(LaurentQ::from_pairs)
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_lq(), b in arb_lq(), c in arb_lq()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &LaurentQ::one(), a.clone());
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn int_poly_closed(a in arb_lq(), b in arb_lq()) {
            if a.is_int_poly() && b.is_int_poly() {
                prop_assert!((&a * &b).is_int_poly());
            }
        }

        #[test]
        fn reductions_are_homomorphisms(a in arb_lq(), b in arb_lq()) {
            if let (Some(x), Some(y)) = (a.at_q0(), b.at_q0()) {
                prop_assert_eq!((&a * &b).at_q0(), Some(x * y));
                prop_assert_eq!((&a + &b).at_q0(), Some(x + y));
            }
            if let (Some((a0, a1)), Some((b0, b1))) = (a.mod_q2(), b.mod_q2()) {
                prop_assert_eq!((&a * &b).mod_q2(), Some((a0 * b0, a0 * b1 + a1 * b0)));
            }
        }

        #[test]
        fn json_round_trip(a in arb_lq()) {
            let text = serde_json::to_string(&a).unwrap();
            let back: LaurentQ = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
