//! Exact arithmetic in the quadratic rings Z[τ] and Z[β].
//!
//! `τ = (√5 − 1)/2` satisfies `τ² = 1 − τ`; `β = √2 − 1` satisfies
//! `β² = 1 − 2β`. Both are units, so every integer power of the generator is
//! an element of the ring. Coefficients are `i128`; every operation is
//! overflow-checked and the operator impls panic with a descriptive message
//! instead of wrapping. The `checked_*` methods return `None` instead.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::Error;

/// Common surface of the two rings, used by trees, diagrams and PL maps.
pub trait Scalar:
    Copy
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + FromStr<Err = Error>
    + 'static
{
    /// Text used for the generator in serialized form (`t` or `s`).
    const SYMBOL: char;

    fn new(a: i128, b: i128) -> Self;
    fn coeffs(self) -> (i128, i128);
    fn zero() -> Self {
        Self::new(0, 0)
    }
    fn one() -> Self {
        Self::new(1, 0)
    }
    /// Exact integer power of the ring's distinguished unit.
    fn unit_power(e: i64) -> Self;
    fn sign(self) -> i8;
    fn to_f64(self) -> f64;
}

/// Sign of `p + q·√d` using only integer arithmetic.
fn sign_surd(p: i128, q: i128, d: i128) -> i8 {
    let sp = p.signum() as i8;
    let sq = q.signum() as i8;
    if sp >= 0 && sq >= 0 {
        return if sp == 0 && sq == 0 { 0 } else { 1 };
    }
    if sp <= 0 && sq <= 0 {
        return -1;
    }
    // mixed signs: compare p² with d·q²
    let cmp = match (p.checked_mul(p), q.checked_mul(q).and_then(|q2| q2.checked_mul(d))) {
        (Some(p2), Some(dq2)) => p2.cmp(&dq2),
        _ => {
            let (bp, bq) = (BigInt::from(p), BigInt::from(q));
            (&bp * &bp).cmp(&(&bq * &bq * BigInt::from(d)))
        }
    };
    let s = match cmp {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    };
    if sp > 0 {
        s
    } else {
        -s
    }
}

fn overflow() -> ! {
    panic!("{}", Error::Overflow)
}

macro_rules! quadratic_ring {
    ($name:ident, $sym:expr, $doc:expr) => {
        #[doc = $doc]
        #[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
        pub struct $name {
            pub a: i128,
            pub b: i128,
        }

        impl $name {
            pub const ZERO: Self = Self { a: 0, b: 0 };
            pub const ONE: Self = Self { a: 1, b: 0 };
            pub const GEN: Self = Self { a: 0, b: 1 };

            pub const fn new(a: i128, b: i128) -> Self {
                Self { a, b }
            }

            pub fn checked_add(self, o: Self) -> Option<Self> {
                Some(Self::new(self.a.checked_add(o.a)?, self.b.checked_add(o.b)?))
            }

            pub fn checked_sub(self, o: Self) -> Option<Self> {
                Some(Self::new(self.a.checked_sub(o.a)?, self.b.checked_sub(o.b)?))
            }

            pub fn checked_neg(self) -> Option<Self> {
                Some(Self::new(self.a.checked_neg()?, self.b.checked_neg()?))
            }

            pub fn is_zero(self) -> bool {
                self.a == 0 && self.b == 0
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, o: Self) -> Self {
                self.checked_add(o).unwrap_or_else(|| overflow())
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, o: Self) -> Self {
                self.checked_sub(o).unwrap_or_else(|| overflow())
            }
        }

        impl Neg for $name {
            type Output = Self;
            fn neg(self) -> Self {
                self.checked_neg().unwrap_or_else(|| overflow())
            }
        }

        impl Mul for $name {
            type Output = Self;
            fn mul(self, o: Self) -> Self {
                self.checked_mul(o).unwrap_or_else(|| overflow())
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl Ord for $name {
            fn cmp(&self, other: &Self) -> Ordering {
                match (*self - *other).sign() {
                    -1 => Ordering::Less,
                    0 => Ordering::Equal,
                    _ => Ordering::Greater,
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.b < 0 {
                    write!(f, "{}-{}*{}", self.a, self.b.unsigned_abs(), $sym)
                } else {
                    write!(f, "{}+{}*{}", self.a, self.b, $sym)
                }
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(self, f)
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self, Error> {
                let (a, b) = parse_linear(s, $sym)?;
                Ok(Self::new(a, b))
            }
        }

        impl serde::Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

quadratic_ring!(ZTau, 't', "An element `a + b·τ` of Z[τ], τ = (√5 − 1)/2.");
quadratic_ring!(ZBeta, 's', "An element `a + b·β` of Z[β], β = √2 − 1.");

impl ZTau {
    /// `(a + bτ)(c + dτ) = (ac + bd) + (ad + bc − bd)τ`
    pub fn checked_mul(self, o: Self) -> Option<Self> {
        let ac = self.a.checked_mul(o.a)?;
        let bd = self.b.checked_mul(o.b)?;
        let ad = self.a.checked_mul(o.b)?;
        let bc = self.b.checked_mul(o.a)?;
        Some(Self::new(ac.checked_add(bd)?, ad.checked_add(bc)?.checked_sub(bd)?))
    }

    pub fn tau_power(e: i64) -> Self {
        // τ⁻¹ = 1 + τ
        let base = if e >= 0 { Self::GEN } else { Self::new(1, 1) };
        pow(base, e.unsigned_abs())
    }

    pub fn sign(self) -> i8 {
        // 2(a + bτ) = (2a − b) + b√5
        match self.a.checked_mul(2).and_then(|x| x.checked_sub(self.b)) {
            Some(p) => sign_surd(p, self.b, 5),
            None => {
                let p = BigInt::from(self.a) * 2 - BigInt::from(self.b);
                big_sign_surd(p, BigInt::from(self.b), 5)
            }
        }
    }
}

impl ZBeta {
    /// `(a + bβ)(c + dβ) = (ac + bd) + (ad + bc − 2bd)β`
    pub fn checked_mul(self, o: Self) -> Option<Self> {
        let ac = self.a.checked_mul(o.a)?;
        let bd = self.b.checked_mul(o.b)?;
        let ad = self.a.checked_mul(o.b)?;
        let bc = self.b.checked_mul(o.a)?;
        Some(Self::new(
            ac.checked_add(bd)?,
            ad.checked_add(bc)?.checked_sub(bd.checked_mul(2)?)?,
        ))
    }

    pub fn beta_power(e: i64) -> Self {
        // β⁻¹ = 2 + β
        let base = if e >= 0 { Self::GEN } else { Self::new(2, 1) };
        pow(base, e.unsigned_abs())
    }

    pub fn sign(self) -> i8 {
        // a + bβ = (a − b) + b√2
        match self.a.checked_sub(self.b) {
            Some(p) => sign_surd(p, self.b, 2),
            None => big_sign_surd(BigInt::from(self.a) - BigInt::from(self.b), BigInt::from(self.b), 2),
        }
    }
}

fn big_sign_surd(p: BigInt, q: BigInt, d: u32) -> i8 {
    use num_bigint::Sign;
    let sg = |x: &BigInt| match x.sign() {
        Sign::Minus => -1i8,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    };
    let (sp, sq) = (sg(&p), sg(&q));
    if sp >= 0 && sq >= 0 {
        return if sp == 0 && sq == 0 { 0 } else { 1 };
    }
    if sp <= 0 && sq <= 0 {
        return -1;
    }
    let s = match (&p * &p).cmp(&(&q * &q * BigInt::from(d))) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    };
    if sp > 0 {
        s
    } else {
        -s
    }
}

fn pow<T: Copy + Mul<Output = T> + Scalar>(base: T, mut e: u64) -> T {
    let mut acc = T::one();
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * sq;
        }
        e >>= 1;
        if e > 0 {
            sq = sq * sq;
        }
    }
    acc
}

impl Scalar for ZTau {
    const SYMBOL: char = 't';
    fn new(a: i128, b: i128) -> Self {
        ZTau::new(a, b)
    }
    fn coeffs(self) -> (i128, i128) {
        (self.a, self.b)
    }
    fn unit_power(e: i64) -> Self {
        ZTau::tau_power(e)
    }
    fn sign(self) -> i8 {
        ZTau::sign(self)
    }
    fn to_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * ((5f64).sqrt() - 1.0) / 2.0
    }
}

impl Scalar for ZBeta {
    const SYMBOL: char = 's';
    fn new(a: i128, b: i128) -> Self {
        ZBeta::new(a, b)
    }
    fn coeffs(self) -> (i128, i128) {
        (self.a, self.b)
    }
    fn unit_power(e: i64) -> Self {
        ZBeta::beta_power(e)
    }
    fn sign(self) -> i8 {
        ZBeta::sign(self)
    }
    fn to_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * ((2f64).sqrt() - 1.0)
    }
}

/// Parses `a+b*t`, `a-b*t`, `a`, `b*t`, `t`, `-t` and similar (whitespace ignored).
fn parse_linear(s: &str, sym: char) -> Result<(i128, i128), Error> {
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(Error::Parse("empty ring element".into()));
    }
    let bad = || Error::Parse(format!("malformed ring element {s:?}"));
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(&text[start..i]);
            start = i;
        }
    }
    terms.push(&text[start..]);
    let (mut a, mut b) = (0i128, 0i128);
    for term in terms {
        let (neg, body) = match term.as_bytes().first() {
            Some(b'+') => (false, &term[1..]),
            Some(b'-') => (true, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let (value, is_gen) = if let Some(coef) = body.strip_suffix(sym) {
            let v = match coef.strip_suffix('*') {
                Some("") => return Err(bad()),
                Some(c) => c.parse::<i128>().map_err(|_| bad())?,
                None if coef.is_empty() => 1,
                None => coef.parse::<i128>().map_err(|_| bad())?,
            };
            (v, true)
        } else {
            (body.parse::<i128>().map_err(|_| bad())?, false)
        };
        let value = if neg { -value } else { value };
        if is_gen {
            b = b.checked_add(value).ok_or(Error::Overflow)?;
        } else {
            a = a.checked_add(value).ok_or(Error::Overflow)?;
        }
    }
    Ok((a, b))
}
