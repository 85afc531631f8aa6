//! Commutative rings and their elements.
//!
//! Three concrete rings are supported: arbitrary-precision integers,
//! rationals kept in lowest terms, and prime fields `Z/p` with `p < 2^61`.
//! Elements carry enough information to know which ring they belong to, so
//! mixing operands from different rings is detected rather than silently
//! producing garbage.
//!
//! The `checked_*` methods report mismatched operands as errors. The
//! operator impls (`&a + &b`, `&a * &b`, ...) are meant for hot loops where
//! the caller has already validated that all operands share a ring; they
//! panic on mismatch.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exclusive upper bound on prime moduli.
pub const MODULUS_LIMIT: u64 = 1 << 61;

/// The Mersenne prime `2^61 - 1`, the largest supported modulus.
pub const M61: u64 = (1 << 61) - 1;

/// Which commutative ring a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingSpec {
    Integer,
    Rational,
    PrimeField { modulus: u64 },
}

impl RingSpec {
    /// Prime field `Z/p`. Fails unless `2 <= p < 2^61` and `p` is prime.
    pub fn prime_field(modulus: u64) -> Result<Self> {
        if !(2..MODULUS_LIMIT).contains(&modulus) {
            return Err(Error::InvalidModulus {
                modulus,
                reason: "must satisfy 2 <= p < 2^61",
            });
        }
        if !is_prime(modulus) {
            return Err(Error::InvalidModulus {
                modulus,
                reason: "not prime",
            });
        }
        Ok(RingSpec::PrimeField { modulus })
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, RingSpec::Integer)
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            RingSpec::PrimeField { modulus } => Some(*modulus),
            _ => None,
        }
    }

    pub fn zero(&self) -> RingElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> RingElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> RingElement {
        match *self {
            RingSpec::Integer => RingElement::Int(BigInt::from(v)),
            RingSpec::Rational => RingElement::Rat(BigRational::from_integer(BigInt::from(v))),
            RingSpec::PrimeField { modulus } => {
                let r = (v as i128).rem_euclid(modulus as i128) as u64;
                RingElement::Mod { value: r, modulus }
            }
        }
    }

    /// Residue class of an arbitrary integer in this ring.
    pub fn from_bigint(&self, v: BigInt) -> RingElement {
        match *self {
            RingSpec::Integer => RingElement::Int(v),
            RingSpec::Rational => RingElement::Rat(BigRational::from_integer(v)),
            RingSpec::PrimeField { modulus } => {
                let r = v.mod_floor(&BigInt::from(modulus));
                RingElement::Mod {
                    value: r.to_u64().expect("residue below modulus"),
                    modulus,
                }
            }
        }
    }

    /// Fraction `num/den` over the rationals. `den` must be nonzero.
    pub fn fraction(&self, num: i64, den: i64) -> Result<RingElement> {
        if den == 0 {
            return Err(Error::NotInvertible);
        }
        match self {
            RingSpec::Rational => Ok(RingElement::Rat(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            _ => self
                .from_i64(num)
                .checked_mul(&self.from_i64(den).inverse()?),
        }
    }

    /// Parse a literal in this ring's grammar.
    ///
    /// Integers and residues: `-?[0-9]+`; residues are reduced mod `p`.
    /// Rationals: `-?[0-9]+(/[1-9][0-9]*)?`, canonicalized on the way in.
    pub fn parse_literal(&self, text: &str) -> Result<RingElement> {
        let malformed = || Error::MalformedLiteral {
            literal: text.to_string(),
            ring: *self,
        };
        let (num_text, den_text) = match text.split_once('/') {
            Some((n, d)) if *self == RingSpec::Rational => (n, Some(d)),
            Some(_) => return Err(malformed()),
            None => (text, None),
        };
        if !is_signed_digits(num_text) {
            return Err(malformed());
        }
        let num: BigInt = num_text.parse().map_err(|_| malformed())?;
        match den_text {
            None => Ok(self.from_bigint(num)),
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) || d.starts_with('0') {
                    return Err(malformed());
                }
                let den: BigInt = d.parse().map_err(|_| malformed())?;
                Ok(RingElement::Rat(BigRational::new(num, den)))
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integer => write!(f, "int"),
            RingSpec::Rational => write!(f, "rational"),
            RingSpec::PrimeField { modulus } => write!(f, "mod {modulus}"),
        }
    }
}

fn is_signed_digits(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// An element of one of the supported rings, always in canonical form.
///
/// Rationals are reduced with a positive denominator and residues lie in
/// `[0, p)`, so derived equality is ring equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElement {
    Int(BigInt),
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl RingElement {
    pub fn spec(&self) -> RingSpec {
        match self {
            RingElement::Int(_) => RingSpec::Integer,
            RingElement::Rat(_) => RingSpec::Rational,
            RingElement::Mod { modulus, .. } => RingSpec::PrimeField { modulus: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Int(v) => v.is_zero(),
            RingElement::Rat(v) => v.is_zero(),
            RingElement::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RingElement::Int(v) => v.is_one(),
            RingElement::Rat(v) => v.is_one(),
            RingElement::Mod { value, .. } => *value == 1,
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        let (a, b) = (self.spec(), other.spec());
        if a == b {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: a, right: b })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self * other)
    }

    /// Multiplicative inverse. Only defined in fields, and never for zero.
    pub fn inverse(&self) -> Result<Self> {
        match self {
            RingElement::Int(_) => Err(Error::Unsupported(
                "inverse is not defined over the integer ring",
            )),
            _ if self.is_zero() => Err(Error::NotInvertible),
            RingElement::Rat(v) => Ok(RingElement::Rat(v.recip())),
            RingElement::Mod { value, modulus } => Ok(RingElement::Mod {
                value: mod_inverse(*value, *modulus),
                modulus: *modulus,
            }),
        }
    }

    /// `self^exp` by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Sign-adjusted copy: `self` if `negate` is false, `-self` otherwise.
    pub fn signed(&self, negate: bool) -> Self {
        if negate {
            -self
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Int(v) => write!(f, "{v}"),
            RingElement::Rat(v) => {
                if v.denom().is_one() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
            RingElement::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch(a: &RingElement, b: &RingElement) -> ! {
    panic!("ring mismatch: {} vs {}", a.spec(), b.spec())
}

impl Add for &RingElement {
    type Output = RingElement;

    fn add(self, rhs: &RingElement) -> RingElement {
        match (self, rhs) {
            (RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a + b),
            (RingElement::Rat(a), RingElement::Rat(b)) => RingElement::Rat(a + b),
            (
                RingElement::Mod { value: a, modulus },
                RingElement::Mod {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => {
                // both below 2^61, so the sum cannot overflow
                let s = a + b;
                RingElement::Mod {
                    value: if s >= *modulus { s - modulus } else { s },
                    modulus: *modulus,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &RingElement {
    type Output = RingElement;

    fn sub(self, rhs: &RingElement) -> RingElement {
        match (self, rhs) {
            (RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a - b),
            (RingElement::Rat(a), RingElement::Rat(b)) => RingElement::Rat(a - b),
            (
                RingElement::Mod { value: a, modulus },
                RingElement::Mod {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => RingElement::Mod {
                value: if a >= b { a - b } else { a + modulus - b },
                modulus: *modulus,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &RingElement {
    type Output = RingElement;

    fn mul(self, rhs: &RingElement) -> RingElement {
        match (self, rhs) {
            (RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a * b),
            (RingElement::Rat(a), RingElement::Rat(b)) => RingElement::Rat(a * b),
            (
                RingElement::Mod { value: a, modulus },
                RingElement::Mod {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => RingElement::Mod {
                value: mul_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        match self {
            RingElement::Int(a) => RingElement::Int(-a),
            RingElement::Rat(a) => RingElement::Rat(-a),
            RingElement::Mod { value, modulus } => RingElement::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        -&self
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime, by extended Euclid.
fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(m as i128) as u64
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// True if `e` is a unit of its ring (`±1` over the integers).
pub fn is_unit(e: &RingElement) -> bool {
    match e {
        RingElement::Int(v) => v.abs().is_one(),
        _ => !e.is_zero(),
    }
}
