//! Exact scalar fields: prime fields GF(p) and the rationals.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::ParseError;

/// Which field a computation runs over, as named in files and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rationals,
}

impl FieldSpec {
    /// Parses `gf 5`, `gf5`, `GF(5)`, `q` or `rationals`.
    pub fn parse(text: &str) -> Result<FieldSpec, ParseError> {
        let t: String = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect::<String>()
            .to_ascii_lowercase();
        if t == "q" || t == "rationals" || t == "qq" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("gf")
            .or_else(|| t.strip_prefix("fp"))
            .ok_or_else(|| ParseError::bare(format!("unknown field `{text}`")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| ParseError::bare(format!("malformed field characteristic `{text}`")))?;
        if p >= (1 << 31) || !is_prime(p) {
            return Err(ParseError::bare(format!("{p} is not a prime below 2^31")));
        }
        Ok(FieldSpec::Prime(p))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "gf {p}"),
            FieldSpec::Rationals => write!(f, "q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldSpec::parse(s)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field with runtime parameters. Elements are plain values; all arithmetic
/// goes through the field instance so that GF(p) elements stay reduced.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Fails when the denominator is not invertible in the field.
    fn from_rational(&self, r: &BigRational) -> Option<Self::Elem>;
    /// Canonical rational representative (`0..p` for GF(p)).
    fn to_rational(&self, a: &Self::Elem) -> BigRational;
    /// Number of elements, `None` for infinite fields.
    fn order(&self) -> Option<u64>;
    fn characteristic(&self) -> u64;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// All elements in canonical order, for finite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        self.order()
            .map(|q| (0..q as i64).map(|i| self.from_i64(i)).collect())
    }

    fn parse_elem(&self, text: &str) -> Result<Self::Elem, ParseError> {
        let r = parse_rational(text)?;
        self.from_rational(&r)
            .ok_or_else(|| ParseError::bare(format!("scalar `{text}` is not defined in {}", self.spec())))
    }

    fn format_elem(&self, a: &Self::Elem) -> String {
        self.to_rational(a).to_string()
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let t = text.trim();
    let bad = || ParseError::bare(format!("malformed scalar `{text}`"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// The prime field GF(p), p < 2^31, elements stored reduced in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        assert!(p < (1 << 31) && is_prime(p), "GF(p) needs a prime p < 2^31, got {p}");
        Fp { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Field for Fp {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, r: &BigRational) -> Option<u64> {
        let p = BigInt::from(self.p);
        let n = r.numer().mod_floor(&p).to_u64()?;
        let d = r.denom().mod_floor(&p).to_u64()?;
        self.div(&n, &d)
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
    fn order(&self) -> Option<u64> {
        Some(self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// The rationals with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, r: &BigRational) -> Option<BigRational> {
        Some(r.clone())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        // Small integers keep random systems readable and entries bounded.
        self.from_i64(rng.gen_range(-3..=3))
    }
    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_negative() {
            format!("-{}", a.abs())
        } else {
            a.to_string()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_parsing() {
        assert_eq!(FieldSpec::parse("gf 5").unwrap(), FieldSpec::Prime(5));
        assert_eq!(FieldSpec::parse("gf5").unwrap(), FieldSpec::Prime(5));
        assert_eq!(FieldSpec::parse("GF(7)").unwrap(), FieldSpec::Prime(7));
        assert_eq!(FieldSpec::parse("q").unwrap(), FieldSpec::Rationals);
        assert!(FieldSpec::parse("gf 6").is_err());
        assert!(FieldSpec::parse("gf 2147483659").is_err());
        assert!(FieldSpec::parse("reals").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Fp::new(5);
        assert_eq!(f.from_i64(-2), 3);
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.parse_elem("1/2").unwrap(), 3);
        assert!(f.parse_elem("1/5").is_err());
        assert_eq!(f.mul(&4, &4), 1);
        assert_eq!(f.elements().unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn rational_parsing() {
        let q = Rationals;
        let half = q.parse_elem("1/2").unwrap();
        assert_eq!(q.add(&half, &half), q.one());
        assert!(q.parse_elem("1/0").is_err());
        assert_eq!(q.format_elem(&q.from_i64(-3)), "-3");
    }
}
