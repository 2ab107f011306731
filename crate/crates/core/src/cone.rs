//! Positive cones as deterministic sign oracles.
//!
//! Every cone answers `sign(w)` for nonidentity `w` of its group. The concrete
//! families are the slope cones of `Z²` (rational and quadratic-irrational),
//! the four cones of the Klein bottle group, lexicographic cones on group
//! extensions, a dynamical cone on the free group of rank two, and the
//! derived cones produced by conjugation and restriction.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::ses::{Embedding, Ses};
use crate::surd::{mobius_apply, quad_cmp, IntMatrix2, QuadNum};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// Sign of a nonzero integer.
    pub fn of(x: i64) -> Option<Sign> {
        match x.cmp(&0) {
            Ordering::Greater => Some(Sign::Positive),
            Ordering::Less => Some(Sign::Negative),
            Ordering::Equal => None,
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The four cones attached to a rational direction `a`.
///
/// The first sign picks the open half-plane (`a·v > 0` or `a·v < 0`), the
/// second picks which ray of the line `a·v = 0` is positive: `+` means the
/// ray through `(−a₂, a₁)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "++")]
    PlusPlus,
    #[serde(rename = "+-")]
    PlusMinus,
    #[serde(rename = "-+")]
    MinusPlus,
    #[serde(rename = "--")]
    MinusMinus,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::PlusPlus, Variant::PlusMinus, Variant::MinusPlus, Variant::MinusMinus];

    pub fn new(half: Sign, line: Sign) -> Variant {
        match (half, line) {
            (Sign::Positive, Sign::Positive) => Variant::PlusPlus,
            (Sign::Positive, Sign::Negative) => Variant::PlusMinus,
            (Sign::Negative, Sign::Positive) => Variant::MinusPlus,
            (Sign::Negative, Sign::Negative) => Variant::MinusMinus,
        }
    }

    pub fn half(self) -> Sign {
        match self {
            Variant::PlusPlus | Variant::PlusMinus => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    pub fn line(self) -> Sign {
        match self {
            Variant::PlusPlus | Variant::MinusPlus => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    pub fn flip_both(self) -> Variant {
        Variant::new(self.half().flip(), self.line().flip())
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Variant::PlusPlus => "++",
            Variant::PlusMinus => "+-",
            Variant::MinusPlus => "-+",
            Variant::MinusMinus => "--",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        Variant::ALL.into_iter().find(|v| v.symbol() == s)
    }
}

/// A projective direction in `R²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    /// Primitive `(p, q)` with `p > 0`, or `p = 0` and `q = 1`.
    Rational { p: i64, q: i64 },
    /// The direction `(1, m)` with irrational `m`.
    Irrational(QuadNum),
}

impl Slope {
    pub fn rational(p: i64, q: i64) -> Result<Slope> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidSlope("zero vector".into()));
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if p < 0 || (p == 0 && q < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope::Rational { p, q })
    }

    /// The direction of `(x, y)`, which must be irrational.
    pub fn irrational(x: &QuadNum, y: &QuadNum) -> Result<Slope> {
        if x.is_zero() {
            return Err(Error::WrongConstructor("vertical direction is rational".into()));
        }
        let m = y.div(x)?;
        if m.is_rational() {
            return Err(Error::WrongConstructor("direction has rational slope".into()));
        }
        Ok(Slope::Irrational(m))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Rational { p, q } => write!(f, "[({p}, {q})]"),
            Slope::Irrational(m) => write!(f, "[(1, {m})]"),
        }
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parameters of a cone defined by an action of `Free(n)` on the universal
/// cover of the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DynamicalSpec {
    pub images: Vec<IntMatrix2>,
    pub basepoints: Vec<QuadNum>,
}

impl Default for DynamicalSpec {
    fn default() -> Self {
        DynamicalSpec {
            images: vec![IntMatrix2::new(1, 2, 0, 1), IntMatrix2::new(1, 0, 2, 1)],
            basepoints: vec![QuadNum::sqrt(2), QuadNum::sqrt(3)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cone {
    /// `Z` ordered by `sign·n > 0`.
    Integer { sign: Sign },
    Slope { a: [i64; 2], variant: Variant },
    QuadSlope { a: [QuadNum; 2], sign: Sign },
    Klein { ex: Sign, ey: Sign },
    Lex { ses: Ses, kernel: Box<Cone>, quotient: Box<Cone> },
    Dynamical(DynamicalSpec),
    /// `g·P`: `sign(w) = sign_P(g⁻¹ w g)`.
    Conjugate { base: Box<Cone>, by: Word },
    /// A kernel cone moved by conjugation inside the total group:
    /// `sign(k) = sign_P(i⁻¹(g⁻¹ i(k) g))`.
    KernelConjugate { ses: Ses, base: Box<Cone>, by: Word },
    Restriction { base: Box<Cone>, embedding: Embedding },
}

/// Anything that assigns a sign to nonidentity elements of a group.
pub trait SignOracle {
    fn group(&self) -> Group;
    fn sign(&self, w: &Word) -> Result<Sign>;
}

impl SignOracle for Cone {
    fn group(&self) -> Group {
        Cone::group(self)
    }

    fn sign(&self, w: &Word) -> Result<Sign> {
        cone_sign(self, w)
    }
}

/// A sign oracle with a memo table, for scans that revisit elements.
pub struct Memo<'a, O: SignOracle + ?Sized> {
    inner: &'a O,
    table: std::cell::RefCell<HashMap<Word, Sign>>,
}

impl<'a, O: SignOracle + ?Sized> Memo<'a, O> {
    pub fn new(inner: &'a O) -> Self {
        Memo { inner, table: Default::default() }
    }
}

impl<O: SignOracle + ?Sized> SignOracle for Memo<'_, O> {
    fn group(&self) -> Group {
        self.inner.group()
    }

    fn sign(&self, w: &Word) -> Result<Sign> {
        let w = self.inner.group().normalize(w)?;
        if let Some(s) = self.table.borrow().get(&w) {
            return Ok(*s);
        }
        let s = self.inner.sign(&w)?;
        self.table.borrow_mut().insert(w, s);
        Ok(s)
    }
}

impl Cone {
    pub fn group(&self) -> Group {
        match self {
            Cone::Integer { .. } => Group::zpow(1),
            Cone::Slope { .. } | Cone::QuadSlope { .. } => Group::zpow(2),
            Cone::Klein { .. } => Group::Klein,
            Cone::Lex { ses, .. } => ses.total(),
            Cone::Dynamical(spec) => Group::free(spec.images.len()),
            Cone::Conjugate { base, .. } => base.group(),
            Cone::KernelConjugate { ses, .. } => ses.kernel(),
            Cone::Restriction { embedding, .. } => embedding.sub.clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Cone::Integer { .. } => "integer",
            Cone::Slope { .. } => "slope",
            Cone::QuadSlope { .. } => "quad_slope",
            Cone::Klein { .. } => "klein",
            Cone::Lex { .. } => "lex",
            Cone::Dynamical(_) => "dynamical",
            Cone::Conjugate { .. } => "conjugate",
            Cone::KernelConjugate { .. } => "kernel_conjugate",
            Cone::Restriction { .. } => "restriction",
        }
    }
}

/// The standard ordering of `Z` (or its reverse).
pub fn integer_cone(sign: Sign) -> Cone {
    Cone::Integer { sign }
}

/// The cone `P_a^{variant}` on `Z²`, with `a` reduced to a primitive vector.
pub fn slope_cone(a: [i64; 2], variant: Variant) -> Result<Cone> {
    if a == [0, 0] {
        return Err(Error::InvalidSlope("zero vector".into()));
    }
    let g = gcd(a[0], a[1]);
    Ok(Cone::Slope { a: [a[0] / g, a[1] / g], variant })
}

/// The cone `{ (m, n) : sign·(a₁m + a₂n) > 0 }` for an irrational ratio `a₁ : a₂`.
pub fn quad_slope_cone(a: [QuadNum; 2], sign: Sign) -> Result<Cone> {
    if a[0].is_zero() && a[1].is_zero() {
        return Err(Error::InvalidSlope("zero vector".into()));
    }
    if a[0].is_zero() || a[1].is_zero() || a[0].div(&a[1])?.is_rational() {
        return Err(Error::WrongConstructor("rational direction: use slope_cone".into()));
    }
    Ok(Cone::QuadSlope { a, sign })
}

/// The four positive cones of the Klein bottle group, in the order
/// `(+,+), (+,−), (−,+), (−,−)` of `(εx, εy)`.
pub fn klein_cones() -> Vec<Cone> {
    let s = [Sign::Positive, Sign::Negative];
    s.iter().flat_map(|&ex| s.iter().map(move |&ey| Cone::Klein { ex, ey })).collect()
}

/// `lex(P_K, P_H) = i(P_K) ∪ q⁻¹(P_H)`.
pub fn lex_cone(ses: Ses, kernel: Cone, quotient: Cone) -> Result<Cone> {
    if kernel.group() != ses.kernel() {
        return Err(Error::ContextMismatch("kernel cone is not on the kernel group".into()));
    }
    if quotient.group() != ses.quotient() {
        return Err(Error::ContextMismatch("quotient cone is not on the quotient group".into()));
    }
    Ok(Cone::Lex { ses, kernel: Box::new(kernel), quotient: Box::new(quotient) })
}

pub fn dynamical_cone() -> Cone {
    Cone::Dynamical(DynamicalSpec::default())
}

pub fn dynamical_cone_with(spec: DynamicalSpec) -> Result<Cone> {
    if let Some(m) = spec.images.iter().find(|m| m.det() != 1) {
        return Err(Error::InvalidCone(format!("generator image {m} does not have determinant 1")));
    }
    if spec.basepoints.is_empty() {
        return Err(Error::InsufficientBasepoints);
    }
    Ok(Cone::Dynamical(spec))
}

/// `g·P` without any simplification.
pub fn conjugate_raw(c: &Cone, g: &Word) -> Result<Cone> {
    c.group().check_word(g)?;
    Ok(Cone::Conjugate { base: Box::new(c.clone()), by: g.clone() })
}

/// The restriction of `c` along `embedding`, simplified when the descriptor
/// allows (restricting a lex cone to its kernel gives the kernel cone back).
pub fn restrict_cone(c: &Cone, embedding: &Embedding) -> Result<Cone> {
    if embedding.ambient != c.group() {
        return Err(Error::ContextMismatch("embedding target is not the cone's group".into()));
    }
    embedding.spot_check(2)?;
    Ok(Cone::Restriction { base: Box::new(c.clone()), embedding: embedding.clone() }.simplify())
}

/// Sign of a nonidentity element.
pub fn cone_sign(c: &Cone, w: &Word) -> Result<Sign> {
    let group = c.group();
    let w = group.normalize(w)?;
    if w.is_identity() {
        return Err(Error::NoSign);
    }
    match c {
        Cone::Integer { sign } => {
            let n = group.zvec(&w)?[0];
            Ok(sign.times(Sign::of(n).ok_or(Error::NoSign)?))
        }
        Cone::Slope { a, variant } => {
            let v = group.zvec(&w)?;
            Ok(slope_sign(*a, *variant, [v[0], v[1]]))
        }
        Cone::QuadSlope { a, sign } => {
            let v = group.zvec(&w)?;
            let s = a[0].scale(v[0]).add(&a[1].scale(v[1]))?.signum();
            let s = Sign::of(s as i64).ok_or_else(|| Error::InvalidCone("point on an irrational line".into()))?;
            Ok(sign.times(s))
        }
        Cone::Klein { ex, ey } => {
            let (b, a) = group.klein_coords(&w)?;
            match Sign::of(a) {
                Some(sa) => Ok(ex.times(sa)),
                None => Ok(ey.times(Sign::of(b).ok_or(Error::NoSign)?)),
            }
        }
        Cone::Lex { ses, kernel, quotient } => {
            let h = ses.project(&w)?;
            if !h.is_identity() {
                cone_sign(quotient, &h)
            } else {
                cone_sign(kernel, &ses.kernel_preimage(&w)?)
            }
        }
        Cone::Dynamical(spec) => dynamical_sign(spec, &w),
        Cone::Conjugate { base, by } => {
            let inner = group.normalize(&by.formal_inverse().concat(&w).concat(by))?;
            cone_sign(base, &inner)
        }
        Cone::KernelConjugate { ses, base, by } => {
            let total = ses.total();
            let iw = ses.inject(&w)?;
            let inner = total.normalize(&by.formal_inverse().concat(&iw).concat(by))?;
            cone_sign(base, &ses.kernel_preimage(&inner)?)
        }
        Cone::Restriction { base, embedding } => cone_sign(base, &embedding.embed(&w)?),
    }
}

/// `J a = (−a₂, a₁)`.
pub fn rot(a: [i64; 2]) -> [i64; 2] {
    [-a[1], a[0]]
}

fn dot(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[0] + u[1] * v[1]
}

/// Positive ray of the boundary line of `P_a^{variant}`.
pub fn line_direction(a: [i64; 2], variant: Variant) -> [i64; 2] {
    let d = rot(a);
    match variant.line() {
        Sign::Positive => d,
        Sign::Negative => [-d[0], -d[1]],
    }
}

fn slope_sign(a: [i64; 2], variant: Variant, v: [i64; 2]) -> Sign {
    match Sign::of(dot(a, v)) {
        Some(s) => variant.half().times(s),
        // on the line: v = c·(−a₂, a₁), decided by the sign of c
        None => variant.line().times(Sign::of(dot(v, rot(a))).expect("nonzero lattice point")),
    }
}

/// Pulls a slope cone back along a unimodular `m`: `sign'(v) = sign(m v)`.
fn pullback_slope(a: [i64; 2], variant: Variant, m: &IntMatrix2) -> Result<Cone> {
    let a2 = m.transpose().checked_apply(a).ok_or(Error::Overflow)?;
    let d = line_direction(a, variant);
    let d2 = m.inverse().ok_or(Error::Overflow)?.checked_apply(d).ok_or(Error::Overflow)?;
    let line = Sign::of(dot(d2, rot(a2))).expect("unimodular image of a nonzero vector");
    slope_cone(a2, Variant::new(variant.half(), line))
}

fn pullback_quad(a: &[QuadNum; 2], sign: Sign, m: &IntMatrix2) -> Result<Cone> {
    let a0 = a[0].scale(m.a).add(&a[1].scale(m.c))?;
    let a1 = a[0].scale(m.b).add(&a[1].scale(m.d))?;
    quad_slope_cone([a0, a1], sign)
}

impl Cone {
    /// An equivalent descriptor with conjugations and restrictions folded
    /// away wherever the family has a closed form.
    pub fn simplify(&self) -> Cone {
        self.try_simplify().unwrap_or_else(|_| self.clone())
    }

    fn try_simplify(&self) -> Result<Cone> {
        Ok(match self {
            Cone::Lex { ses, kernel, quotient } => Cone::Lex {
                ses: ses.clone(),
                kernel: Box::new(kernel.simplify()),
                quotient: Box::new(quotient.simplify()),
            },
            Cone::Conjugate { base, by } => {
                let base = base.simplify();
                let group = base.group();
                let by = group.normalize(by)?;
                if by.is_identity() || group.is_abelian() {
                    return Ok(base);
                }
                match base {
                    Cone::Klein { ex, ey } => {
                        let (_, a) = group.klein_coords(&by)?;
                        if a.rem_euclid(2) == 1 {
                            Cone::Klein { ex, ey: ey.flip() }
                        } else {
                            Cone::Klein { ex, ey }
                        }
                    }
                    Cone::Lex { ses, kernel, quotient } => {
                        let k = Cone::KernelConjugate { ses: ses.clone(), base: kernel, by: by.clone() }.simplify();
                        let h = Cone::Conjugate { base: quotient, by: ses.project(&by)? }.simplify();
                        Cone::Lex { ses, kernel: Box::new(k), quotient: Box::new(h) }
                    }
                    Cone::Conjugate { base: inner, by: h } => {
                        // g·(h·P) = (gh)·P
                        Cone::Conjugate { base: inner, by: group.mul(&by, &h)? }.simplify()
                    }
                    other => Cone::Conjugate { base: Box::new(other), by },
                }
            }
            Cone::KernelConjugate { ses, base, by } => {
                let base = base.simplify();
                let total = ses.total();
                let by = total.normalize(by)?;
                if by.is_identity() {
                    return Ok(base);
                }
                match (ses, &base) {
                    (Ses::SemidirectOverZ { matrix }, _) => {
                        // g⁻¹ (v, 0) g = (A^{-k} v, 0) for g = (u, k)
                        let (_, k) = total.sol_coords(&by)?;
                        let m = matrix.checked_pow(-k).ok_or(Error::Overflow)?;
                        match &base {
                            Cone::Slope { a, variant } => pullback_slope(*a, *variant, &m)?,
                            Cone::QuadSlope { a, sign } => pullback_quad(a, *sign, &m)?,
                            _ => Cone::KernelConjugate { ses: ses.clone(), base: Box::new(base), by },
                        }
                    }
                    (Ses::DirectFactor { .. }, _) => {
                        let k = ses.kernel_preimage(&ses.kernel_part(&by)?)?;
                        Cone::Conjugate { base: Box::new(base), by: k }.simplify()
                    }
                    (Ses::KleinOverZ, Cone::Integer { sign }) => {
                        let (_, a) = total.klein_coords(&by)?;
                        let sign = if a.rem_euclid(2) == 1 { sign.flip() } else { *sign };
                        Cone::Integer { sign }
                    }
                    _ => Cone::KernelConjugate { ses: ses.clone(), base: Box::new(base), by },
                }
            }
            Cone::Restriction { base, embedding } => {
                let base = base.simplify();
                let identity = embedding.sub == embedding.ambient
                    && embedding.images.iter().enumerate().all(|(i, w)| *w == Word::gen(i));
                if identity {
                    return Ok(base);
                }
                if let Cone::Lex { ses, kernel, .. } = &base {
                    if ses.kernel_embedding().ok().as_ref() == Some(embedding) {
                        return Ok((**kernel).clone());
                    }
                }
                Cone::Restriction { base: Box::new(base), embedding: embedding.clone() }
            }
            other => other.clone(),
        })
    }

    /// The unique descriptor of this cone within its family, when it has one.
    pub fn canonical(&self) -> Option<Cone> {
        match self.simplify() {
            c @ (Cone::Integer { .. } | Cone::Klein { .. } | Cone::Dynamical(_)) => Some(c),
            Cone::Slope { a, variant } => {
                if a[0] < 0 || (a[0] == 0 && a[1] < 0) {
                    Some(Cone::Slope { a: [-a[0], -a[1]], variant: variant.flip_both() })
                } else {
                    Some(Cone::Slope { a, variant })
                }
            }
            Cone::QuadSlope { a, sign } => {
                // scale to (1, a₂/a₁); a negative a₁ flips the sign
                let ratio = a[1].div(&a[0]).ok()?;
                let sign = if a[0].signum() < 0 { sign.flip() } else { sign };
                Some(Cone::QuadSlope { a: [QuadNum::int(1), ratio], sign })
            }
            Cone::Lex { ses, kernel, quotient } => Some(Cone::Lex {
                ses,
                kernel: Box::new(kernel.canonical()?),
                quotient: Box::new(quotient.canonical()?),
            }),
            _ => None,
        }
    }
}

/// Outcome of comparing two cones by descriptor alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescriptorVerdict {
    Equal,
    Distinct(Option<Word>),
}

/// Decides equality from canonical descriptors; `None` when either side has
/// no canonical descriptor (or two dynamical specs differ, which proves nothing).
pub fn descriptor_compare(c1: &Cone, c2: &Cone) -> Option<DescriptorVerdict> {
    let (k1, k2) = (c1.canonical()?, c2.canonical()?);
    if k1 == k2 {
        return Some(DescriptorVerdict::Equal);
    }
    match (&k1, &k2) {
        (Cone::Integer { .. }, Cone::Integer { .. }) => Some(DescriptorVerdict::Distinct(Some(Word::gen(0)))),
        (Cone::Klein { ex: x1, .. }, Cone::Klein { ex: x2, .. }) => {
            let w = if x1 != x2 { crate::group::KLEIN_X } else { crate::group::KLEIN_Y };
            Some(DescriptorVerdict::Distinct(Some(Word::gen(w))))
        }
        (Cone::Slope { a: a1, variant: v1 }, Cone::Slope { a: a2, variant: v2 }) => {
            let w = slope_witness(*a1, *v1, *a2, *v2);
            Some(DescriptorVerdict::Distinct(Some(crate::group::zvec_word(&w))))
        }
        (Cone::Slope { .. } | Cone::QuadSlope { .. }, Cone::Slope { .. } | Cone::QuadSlope { .. }) => {
            Some(DescriptorVerdict::Distinct(search_z2_witness(&k1, &k2, 64)))
        }
        (Cone::Lex { ses: s1, kernel: kk1, quotient: q1 }, Cone::Lex { ses: s2, kernel: kk2, quotient: q2 })
            if s1 == s2 =>
        {
            let verdict_q = descriptor_compare(q1, q2)?;
            if let DescriptorVerdict::Distinct(w) = verdict_q {
                let w = w.and_then(|h| s1.section(&h).ok());
                return Some(DescriptorVerdict::Distinct(w));
            }
            match descriptor_compare(kk1, kk2)? {
                DescriptorVerdict::Distinct(w) => {
                    Some(DescriptorVerdict::Distinct(w.and_then(|k| s1.inject(&k).ok())))
                }
                DescriptorVerdict::Equal => Some(DescriptorVerdict::Equal),
            }
        }
        _ => None,
    }
}

/// A lattice point positive in exactly one of two distinct rational slope cones.
fn slope_witness(a1: [i64; 2], v1: Variant, a2: [i64; 2], v2: Variant) -> [i64; 2] {
    let d1 = line_direction(a1, v1);
    let d2 = line_direction(a2, v2);
    if dot(rot(a1), a2) == 0 {
        // same line
        if v1.half().times(Sign::of(dot(a1, a1)).unwrap()) == v2.half().times(Sign::of(dot(a2, a1)).unwrap()) {
            return d1;
        }
        return match v1.half() {
            Sign::Positive => a1,
            Sign::Negative => [-a1[0], -a1[1]],
        };
    }
    if slope_sign(a2, v2, d1) == Sign::Negative {
        return d1;
    }
    if slope_sign(a1, v1, d2) == Sign::Negative {
        return d2;
    }
    // d1 lies in the open half of cone 2 and d2 in that of cone 1, so d2 − d1
    // is positive for cone 1 and negative for cone 2
    [d2[0] - d1[0], d2[1] - d1[1]]
}

fn search_z2_witness(c1: &Cone, c2: &Cone, bound: i64) -> Option<Word> {
    for n in 1..=bound {
        for x in -n..=n {
            for y in [-n, n] {
                for v in [[x, y], [y, x]] {
                    let w = crate::group::zvec_word(&v);
                    if cone_sign(c1, &w).ok()? != cone_sign(c2, &w).ok()? {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

// ---- dynamical cone -------------------------------------------------------

/// A point on the universal cover of the projective line: a sheet index and
/// a position `x ∈ R ∪ {∞}`, with `∞` the top of each sheet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPoint {
    pub sheet: i64,
    pub x: Option<QuadNum>,
}

impl LiftedPoint {
    pub fn at(x: QuadNum) -> Self {
        LiftedPoint { sheet: 0, x: Some(x) }
    }

    pub fn try_cmp(&self, o: &LiftedPoint) -> Result<Ordering> {
        Ok(match self.sheet.cmp(&o.sheet) {
            Ordering::Equal => match (&self.x, &o.x) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some(a), Some(b)) => quad_cmp(a, b)?,
            },
            o => o,
        })
    }
}

/// The lift of a determinant-one Möbius map that fixes the sheet of points
/// left of its pole.
pub fn lift_apply(m: &IntMatrix2, p: &LiftedPoint) -> Result<LiftedPoint> {
    if m.c == 0 {
        return Ok(match &p.x {
            None => p.clone(),
            Some(x) => LiftedPoint { sheet: p.sheet, x: Some(mobius_apply(m, x)?) },
        });
    }
    let Some(x) = &p.x else {
        return Ok(LiftedPoint { sheet: p.sheet + 1, x: Some(QuadNum::rational(m.a, m.c)?) });
    };
    let pole = QuadNum::rational(-m.d, m.c)?;
    Ok(match quad_cmp(x, &pole)? {
        Ordering::Equal => LiftedPoint { sheet: p.sheet, x: None },
        Ordering::Less => LiftedPoint { sheet: p.sheet, x: Some(mobius_apply(m, x)?) },
        Ordering::Greater => LiftedPoint { sheet: p.sheet + 1, x: Some(mobius_apply(m, x)?) },
    })
}

/// Deck shift `s` with `lift(M⁻¹) ∘ lift(M) = T^s`.
fn inverse_shift(m: &IntMatrix2) -> Result<i64> {
    let minv = m.inverse().ok_or(Error::Overflow)?;
    let p = LiftedPoint::at(QuadNum::int(0));
    let back = lift_apply(&minv, &lift_apply(m, &p)?)?;
    Ok(back.sheet - p.sheet)
}

/// Applies `w` (rightmost letter first) to a lifted point.
pub fn dynamical_act(spec: &DynamicalSpec, w: &Word, p: &LiftedPoint) -> Result<LiftedPoint> {
    let shifts = spec.images.iter().map(inverse_shift).collect::<Result<Vec<_>>>()?;
    let mut p = p.clone();
    for s in w.syllables().iter().rev() {
        let m = &spec.images[s.gen];
        for _ in 0..s.exp.unsigned_abs() {
            p = if s.exp > 0 {
                lift_apply(m, &p)?
            } else {
                let q = lift_apply(&m.inverse().ok_or(Error::Overflow)?, &p)?;
                LiftedPoint { sheet: q.sheet - shifts[s.gen], x: q.x }
            };
        }
    }
    Ok(p)
}

/// Matrix image of a word in `SL(2, Z)`.
pub fn dynamical_matrix(spec: &DynamicalSpec, w: &Word) -> Result<IntMatrix2> {
    let mut acc = IntMatrix2::IDENTITY;
    for s in w.syllables() {
        let m = spec.images[s.gen].checked_pow(s.exp).ok_or(Error::Overflow)?;
        acc = acc.checked_mul(&m).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

fn dynamical_sign(spec: &DynamicalSpec, w: &Word) -> Result<Sign> {
    for b in &spec.basepoints {
        let p = LiftedPoint::at(b.clone());
        match dynamical_act(spec, w, &p)?.try_cmp(&p)? {
            Ordering::Greater => return Ok(Sign::Positive),
            Ordering::Less => return Ok(Sign::Negative),
            Ordering::Equal => {}
        }
    }
    Err(Error::InsufficientBasepoints)
}

// ---- axioms and slope detection --------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `sign(w⁻¹) ≠ −sign(w)`.
    Antisymmetry { w: Word },
    /// `u, v` positive but `uv` is not.
    Closure { u: Word, v: Word, uv: Word },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomReport {
    Pass { radius: usize },
    Witness(AxiomViolation),
}

impl AxiomViolation {
    /// Re-evaluates the violation against the oracle.
    pub fn verify<O: SignOracle + ?Sized>(&self, o: &O) -> Result<bool> {
        let g = o.group();
        Ok(match self {
            AxiomViolation::Antisymmetry { w } => o.sign(&g.inv(w)?)? == o.sign(w)?,
            AxiomViolation::Closure { u, v, uv } => {
                g.mul(u, v)? == *uv
                    && o.sign(u)? == Sign::Positive
                    && o.sign(v)? == Sign::Positive
                    && o.sign(uv)? == Sign::Negative
            }
        })
    }
}

/// Checks antisymmetry and closure of positives on `B_r ∖ {1}`.
pub fn check_cone_axioms_on_ball<O: SignOracle + ?Sized>(o: &O, r: usize) -> Result<AxiomReport> {
    let g = o.group();
    let ball = g.ball(r)?;
    let mut signs: HashMap<&Word, Sign> = HashMap::new();
    for w in ball.iter().filter(|w| !w.is_identity()) {
        signs.insert(w, o.sign(w)?);
    }
    for w in ball.iter().filter(|w| !w.is_identity()) {
        let wi = g.inv(w)?;
        if signs[&wi] != signs[w].flip() {
            return Ok(AxiomReport::Witness(AxiomViolation::Antisymmetry { w: w.clone() }));
        }
    }
    let positives: Vec<&Word> = ball.iter().filter(|w| signs.get(w) == Some(&Sign::Positive)).collect();
    for u in &positives {
        for v in &positives {
            let uv = g.mul(u, v)?;
            if let Some(s) = signs.get(&uv) {
                if *s != Sign::Positive {
                    return Ok(AxiomReport::Witness(AxiomViolation::Closure {
                        u: (*u).clone(),
                        v: (*v).clone(),
                        uv,
                    }));
                }
            }
        }
    }
    Ok(AxiomReport::Pass { radius: r })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeDetection {
    Rational { slope: Slope, variant: Variant },
    Irrational { slope: Slope, sign: Sign },
    /// The boundary line lies in the closed sector from `from` (last positive
    /// direction) to `to` (first negative direction), counterclockwise.
    /// `readings` lists the rational slope cones through either end that agree
    /// with every scanned sign; finite data cannot choose between them and
    /// the irrational lines strictly inside.
    Candidate { from: [i64; 2], to: [i64; 2], radius: usize, readings: Vec<(Slope, Variant)> },
}

fn upper(v: [i64; 2]) -> bool {
    v[1] > 0 || (v[1] == 0 && v[0] > 0)
}

fn cross(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

fn angle_cmp(u: [i64; 2], v: [i64; 2]) -> Ordering {
    match (upper(u), upper(v)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => 0.cmp(&cross(u, v)),
    }
}

impl SlopeDetection {
    /// Whether the direction `(x, y)` or its opposite lies strictly inside a
    /// candidate sector. Exact slopes report whether they equal the direction.
    pub fn contains_direction(&self, x: &QuadNum, y: &QuadNum) -> Result<bool> {
        let cr = |u: [i64; 2], s: i64| -> Result<i32> {
            // sign of cross(u, s·(x, y))
            Ok(y.scale(u[0] * s).sub(&x.scale(u[1] * s))?.signum())
        };
        match self {
            SlopeDetection::Candidate { from, to, .. } => {
                for s in [1, -1] {
                    if cr(*from, s)? > 0 && -cr(*to, s)? > 0 {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            SlopeDetection::Rational { slope: Slope::Rational { p, q }, .. } => {
                Ok(y.scale(*p).sub(&x.scale(*q))?.is_zero())
            }
            SlopeDetection::Irrational { slope: Slope::Irrational(m), .. } => {
                Ok(!x.is_zero() && y.div(x)? == *m)
            }
            _ => Ok(false),
        }
    }
}

/// The slope detected by a cone on `Z²`: read from the descriptor when the
/// cone simplifies to a slope cone, otherwise located by an angular scan of
/// the primitive vectors in `B_r`.
pub fn detect_slope(c: &Cone, r: usize) -> Result<SlopeDetection> {
    if c.group() != Group::zpow(2) {
        return Err(Error::ContextMismatch("slope detection needs a cone on Z²".into()));
    }
    match c.simplify() {
        Cone::Slope { a, variant } => {
            let d = rot(a);
            Ok(SlopeDetection::Rational { slope: Slope::rational(d[0], d[1])?, variant })
        }
        Cone::QuadSlope { a, sign } => {
            Ok(SlopeDetection::Irrational { slope: Slope::irrational(&a[1].neg(), &a[0])?, sign })
        }
        other => detect_slope_scan(&other, r),
    }
}

/// Slope detection from signs alone.
pub fn detect_slope_scan<O: SignOracle + ?Sized>(o: &O, r: usize) -> Result<SlopeDetection> {
    let g = o.group();
    if g != Group::zpow(2) {
        return Err(Error::ContextMismatch("slope detection needs a cone on Z²".into()));
    }
    if let AxiomReport::Witness(v) = check_cone_axioms_on_ball(o, r)? {
        return Err(Error::InvalidCone(format!("axioms fail on the ball: {v:?}")));
    }
    let mut dirs: Vec<[i64; 2]> = Vec::new();
    for w in g.ball(r)? {
        let v = g.zvec(&w)?;
        if gcd(v[0], v[1]) == 1 {
            dirs.push([v[0], v[1]]);
        }
    }
    if dirs.is_empty() {
        return Err(Error::InvalidCone("radius too small to scan".into()));
    }
    dirs.sort_by(|u, v| angle_cmp(*u, *v));
    let signs = dirs
        .iter()
        .map(|v| o.sign(&crate::group::zvec_word(v)))
        .collect::<Result<Vec<_>>>()?;
    let n = dirs.len();
    let mut down = None;
    let mut up = None;
    for i in 0..n {
        let j = (i + 1) % n;
        match (signs[i], signs[j]) {
            (Sign::Positive, Sign::Negative) if down.is_none() => down = Some((dirs[i], dirs[j])),
            (Sign::Negative, Sign::Positive) if up.is_none() => up = Some((dirs[i], dirs[j])),
            (a, b) if a != b => return Err(Error::InvalidCone("more than two sign changes".into())),
            _ => {}
        }
    }
    let (Some((u1, w1)), Some(_)) = (down, up) else {
        return Err(Error::InvalidCone("signs never change around the circle".into()));
    };
    // Both ends of the sector are realized lines; each reading is kept only if
    // it reproduces every scanned sign.
    let mut readings = Vec::new();
    for d in [u1, [-w1[0], -w1[1]]] {
        let slope = Slope::rational(d[0], d[1])?;
        let Slope::Rational { p, q } = slope else { unreachable!() };
        let a = [q, -p];
        let line = if d == [p, q] { Sign::Positive } else { Sign::Negative };
        for half in [Sign::Positive, Sign::Negative] {
            let variant = Variant::new(half, line);
            if dirs.iter().zip(&signs).all(|(v, s)| slope_sign(a, variant, *v) == *s) {
                readings.push((slope.clone(), variant));
            }
        }
    }
    Ok(SlopeDetection::Candidate { from: u1, to: w1, radius: r, readings })
}
