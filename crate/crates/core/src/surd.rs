//! Exact arithmetic in real quadratic fields and integer Möbius actions.
//!
//! A [`QuadNum`] is `(p + q·√d) / r` with arbitrary-precision integers. All
//! comparisons are decided by integer sign analysis; nothing here touches
//! floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurdError {
    #[error("cannot combine numbers from Q(sqrt {0}) and Q(sqrt {1})")]
    IncompatibleFields(u64, u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("Möbius map has a pole at the given point")]
    Pole,
}

/// The real number `(p + q·√d) / r` in canonical form.
///
/// Canonical means `r > 0`, `gcd(p, q, r) = 1`, `d` squarefree, and rational
/// values carry `q = 0, d = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: u64,
}

/// Splits `d` as `s² · m` with `m` squarefree.
fn square_part(mut d: u64) -> (u64, u64) {
    if d == 0 {
        return (1, 0);
    }
    let mut s = 1u64;
    let mut m = 1u64;
    let mut f = 2u64;
    while f * f <= d {
        let mut e = 0;
        while d.is_multiple_of(f) {
            d /= f;
            e += 1;
        }
        s *= f.pow(e / 2);
        if e % 2 == 1 {
            m *= f;
        }
        f += 1;
    }
    (s, m * d)
}

impl QuadNum {
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        r: impl Into<BigInt>,
        d: u64,
    ) -> Result<Self, SurdError> {
        let r = r.into();
        if r.is_zero() {
            return Err(SurdError::ZeroDenominator);
        }
        Ok(Self::canonical(p.into(), q.into(), r, d))
    }

    pub fn int(n: i64) -> Self {
        Self::canonical(n.into(), BigInt::zero(), BigInt::one(), 0)
    }

    pub fn rational(p: i64, r: i64) -> Result<Self, SurdError> {
        Self::new(p, 0, r, 0)
    }

    /// `√d`, reduced to an integer when `d` is a perfect square.
    pub fn sqrt(d: u64) -> Self {
        Self::canonical(BigInt::zero(), BigInt::one(), BigInt::one(), d)
    }

    fn canonical(mut p: BigInt, mut q: BigInt, mut r: BigInt, d: u64) -> Self {
        let (s, mut d) = square_part(d);
        q *= BigInt::from(s);
        if d == 1 {
            p += &q;
            q = BigInt::zero();
        }
        if d == 0 {
            q = BigInt::zero();
        }
        if q.is_zero() {
            d = 0;
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        QuadNum { p, q, r, d }
    }

    pub fn rational_part(&self) -> &BigInt {
        &self.p
    }

    pub fn surd_part(&self) -> &BigInt {
        &self.q
    }

    pub fn denominator(&self) -> &BigInt {
        &self.r
    }

    /// The radicand; `0` for rational values.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn field_with(&self, other: &QuadNum) -> Result<u64, SurdError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(SurdError::IncompatibleFields(a, b)),
        }
    }

    /// Sign of the real value as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        sign_of_surd(&self.p, &self.q, self.d)
    }

    pub fn neg(&self) -> QuadNum {
        QuadNum { p: -&self.p, q: -&self.q, r: self.r.clone(), d: self.d }
    }

    pub fn add(&self, o: &QuadNum) -> Result<QuadNum, SurdError> {
        let d = self.field_with(o)?;
        Ok(Self::canonical(
            &self.p * &o.r + &o.p * &self.r,
            &self.q * &o.r + &o.q * &self.r,
            &self.r * &o.r,
            d,
        ))
    }

    pub fn sub(&self, o: &QuadNum) -> Result<QuadNum, SurdError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QuadNum) -> Result<QuadNum, SurdError> {
        let d = self.field_with(o)?;
        let dd = BigInt::from(d);
        Ok(Self::canonical(
            &self.p * &o.p + &self.q * &o.q * &dd,
            &self.p * &o.q + &self.q * &o.p,
            &self.r * &o.r,
            d,
        ))
    }

    pub fn recip(&self) -> Result<QuadNum, SurdError> {
        if self.is_zero() {
            return Err(SurdError::DivisionByZero);
        }
        // r / (p + q√d) = r (p - q√d) / (p² - q² d)
        let norm = &self.p * &self.p - &self.q * &self.q * BigInt::from(self.d);
        Ok(Self::canonical(&self.r * &self.p, -(&self.r * &self.q), norm, self.d))
    }

    pub fn div(&self, o: &QuadNum) -> Result<QuadNum, SurdError> {
        self.mul(&o.recip()?)
    }

    pub fn scale(&self, k: i64) -> QuadNum {
        let k = BigInt::from(k);
        Self::canonical(&self.p * &k, &self.q * &k, self.r.clone(), self.d)
    }

    /// Exact comparison of real values.
    pub fn try_cmp(&self, o: &QuadNum) -> Result<Ordering, SurdError> {
        quad_cmp(self, o)
    }
}

/// Sign of `p + q√d` using integer arithmetic only.
fn sign_of_surd(p: &BigInt, q: &BigInt, d: u64) -> i32 {
    let sp = sgn(p);
    let sq = if d == 0 { 0 } else { sgn(q) };
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    // signs conflict: compare p² with q² d
    let lhs = p * p;
    let rhs = q * q * BigInt::from(d);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => 0,
    }
}

fn sgn(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact comparison of two surds from the same field (or with one rational).
pub fn quad_cmp(x: &QuadNum, y: &QuadNum) -> Result<Ordering, SurdError> {
    let d = x.field_with(y)?;
    let p = &x.p * &y.r - &y.p * &x.r;
    let q = &x.q * &y.r - &y.q * &x.r;
    Ok(match sign_of_surd(&p, &q, d) {
        1 => Ordering::Greater,
        -1 => Ordering::Less,
        _ => Ordering::Equal,
    })
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = if self.q.is_zero() {
            self.p.to_string()
        } else if self.p.is_zero() {
            format!("{}√{}", self.q, self.d)
        } else {
            format!("{}{:+}√{}", self.p, self.q, self.d)
        };
        if self.r.is_one() {
            write!(f, "{num}")
        } else if self.q.is_zero() {
            write!(f, "{num}/{}", self.r)
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

/// Integer 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2 { a: 1, b: 0, c: 0, d: 1 };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.a.checked_mul(self.d).zip(self.b.checked_mul(self.c)), Some((x, y)) if (x - y).abs() == 1)
    }

    pub fn checked_mul(&self, o: &IntMatrix2) -> Option<IntMatrix2> {
        let dot = |x: i64, y: i64, z: i64, w: i64| x.checked_mul(y)?.checked_add(z.checked_mul(w)?);
        Some(IntMatrix2 {
            a: dot(self.a, o.a, self.b, o.c)?,
            b: dot(self.a, o.b, self.b, o.d)?,
            c: dot(self.c, o.a, self.d, o.c)?,
            d: dot(self.c, o.b, self.d, o.d)?,
        })
    }

    /// Inverse over the integers; `None` unless the determinant is ±1.
    pub fn inverse(&self) -> Option<IntMatrix2> {
        match self.det() {
            1 => Some(IntMatrix2::new(self.d, -self.b, -self.c, self.a)),
            -1 => Some(IntMatrix2::new(-self.d, self.b, self.c, -self.a)),
            _ => None,
        }
    }

    pub fn transpose(&self) -> IntMatrix2 {
        IntMatrix2::new(self.a, self.c, self.b, self.d)
    }

    /// `self^k`, negative powers through the integer inverse.
    pub fn checked_pow(&self, k: i64) -> Option<IntMatrix2> {
        let base = if k < 0 { self.inverse()? } else { *self };
        let mut acc = IntMatrix2::IDENTITY;
        for _ in 0..k.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Some(acc)
    }

    pub fn checked_apply(&self, v: [i64; 2]) -> Option<[i64; 2]> {
        let x = self.a.checked_mul(v[0])?.checked_add(self.b.checked_mul(v[1])?)?;
        let y = self.c.checked_mul(v[0])?.checked_add(self.d.checked_mul(v[1])?)?;
        Some([x, y])
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Self {
        IntMatrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }
}

impl From<[[i64; 2]; 2]> for IntMatrix2 {
    fn from(rows: [[i64; 2]; 2]) -> Self {
        IntMatrix2::from_rows(rows)
    }
}

impl From<IntMatrix2> for [[i64; 2]; 2] {
    fn from(m: IntMatrix2) -> Self {
        m.rows()
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `(a·x + b) / (c·x + d)` in canonical form.
pub fn mobius_apply(m: &IntMatrix2, x: &QuadNum) -> Result<QuadNum, SurdError> {
    let num = x.scale(m.a).add(&QuadNum::int(m.b))?;
    let den = x.scale(m.c).add(&QuadNum::int(m.d))?;
    if den.is_zero() {
        return Err(SurdError::Pole);
    }
    num.div(&den)
}

/// Lossy conversion for display and diagnostics only.
pub fn approx_f64(x: &QuadNum) -> f64 {
    let p = x.p.to_f64().unwrap_or(f64::NAN);
    let q = x.q.to_f64().unwrap_or(f64::NAN);
    let r = x.r.to_f64().unwrap_or(f64::NAN);
    (p + q * (x.d as f64).sqrt()) / r
}
