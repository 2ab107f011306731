//! Conradian, convexity and order-homomorphism checks on word balls.
//!
//! Every check is a bounded search: a pass at radius `r` only means no
//! violation was found among elements of `B_r`. Witnesses are the first
//! violation in shortlex order and re-verify against the cone.

use rayon::prelude::*;

use crate::cone::{Cone, Sign, SignOracle};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<W> {
    Pass(usize),
    Witness(W),
}

impl<W> Outcome<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Outcome::Witness(w) => Some(w),
            Outcome::Pass(_) => None,
        }
    }
}

/// `g, h > 1` with `g⁻¹hg² ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConradianViolation {
    pub g: Word,
    pub h: Word,
}

impl ConradianViolation {
    pub fn verify<O: SignOracle + Sync + ?Sized>(&self, c: &O) -> Result<bool> {
        Ok(c.sign(&self.g)? == Sign::Positive
            && c.sign(&self.h)? == Sign::Positive
            && !positive(c, &conradian_word(&c.group(), &self.g, &self.h)?)?)
    }
}

fn conradian_word(group: &Group, g: &Word, h: &Word) -> Result<Word> {
    group.normalize(&g.formal_inverse().concat(h).concat(g).concat(g))
}

/// `sign(w) = +`, with the identity counted as not positive.
fn positive<O: SignOracle + ?Sized>(c: &O, w: &Word) -> Result<bool> {
    if c.group().normalize(w)?.is_identity() {
        return Ok(false);
    }
    Ok(c.sign(w)? == Sign::Positive)
}

fn positives<O: SignOracle + ?Sized>(c: &O, r: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for w in c.group().ball(r)?.into_iter().skip(1) {
        if c.sign(&w)? == Sign::Positive {
            out.push(w);
        }
    }
    Ok(out)
}

/// Looks for positive `g, h ∈ B_r` with `g⁻¹hg²` not positive.
pub fn conradian_check<O: SignOracle + Sync + ?Sized>(c: &O, r: usize) -> Result<Outcome<ConradianViolation>> {
    let group = c.group();
    let pos = positives(c, r)?;
    let found = pos
        .par_iter()
        .map(|g| -> Result<Option<ConradianViolation>> {
            for h in &pos {
                if !positive(c, &conradian_word(&group, g, h)?)? {
                    return Ok(Some(ConradianViolation { g: g.clone(), h: h.clone() }));
                }
            }
            Ok(None)
        })
        .find_map_first(|res| match res {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        Some(res) => Ok(Outcome::Witness(res?.expect("only hits are kept"))),
        None => Ok(Outcome::Pass(r)),
    }
}

/// A membership test.
pub type Membership<'a> = Box<dyn Fn(&Word) -> Result<bool> + Sync + 'a>;

/// A subgroup given by generators and a membership test.
pub struct Subgroup<'a> {
    pub generators: Vec<Word>,
    pub contains: Membership<'a>,
}

impl<'a> Subgroup<'a> {
    /// `⟨g⟩`. Membership is exact in free abelian groups and in the Klein
    /// group; elsewhere powers `g^n` are searched for `|n|` up to `4(|w| + 1)`.
    pub fn cyclic(group: &Group, g: &Word) -> Result<Subgroup<'a>> {
        let group = group.clone();
        let g = group.normalize(g)?;
        if g.is_identity() {
            return Err(Error::InvalidEmbedding("cyclic subgroup of the identity".into()));
        }
        let gen = g.clone();
        let contains: Membership<'a> = match &group {
            Group::Zpow { .. } => {
                let gv = group.zvec(&g)?;
                Box::new(move |w| Ok(multiple_of(&group.zvec(w)?, &gv)))
            }
            Group::Klein => {
                let (gb, ga) = group.klein_coords(&g)?;
                Box::new(move |w| {
                    let (b, a) = group.klein_coords(w)?;
                    // g^n = y^{nb} x^{na} when a is even, y^{b·[n odd]} x^{na} when a is odd
                    if ga == 0 {
                        return Ok(a == 0 && b % gb == 0);
                    }
                    if a % ga != 0 {
                        return Ok(false);
                    }
                    let n = a / ga;
                    let expect = if ga % 2 == 0 { n * gb } else if n.rem_euclid(2) == 1 { gb } else { 0 };
                    Ok(b == expect)
                })
            }
            _ => Box::new(move |w| {
                let w = group.normalize(w)?;
                let bound = 4 * (w.len() as i64 + 1);
                for n in -bound..=bound {
                    if group.pow(&g, n)? == w {
                        return Ok(true);
                    }
                }
                Ok(false)
            }),
        };
        Ok(Subgroup { generators: vec![gen], contains })
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        (self.contains)(w)
    }
}

fn multiple_of(v: &[i64], g: &[i64]) -> bool {
    let Some(i) = g.iter().position(|&x| x != 0) else { return v.iter().all(|&x| x == 0) };
    if v[i] % g[i] != 0 {
        return false;
    }
    let n = v[i] / g[i];
    v.iter().zip(g).all(|(a, b)| *a == n * b)
}

/// `c₁ < f < c₂` with `c₁, c₂ ∈ C` and `f ∉ C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityViolation {
    pub c1: Word,
    pub f: Word,
    pub c2: Word,
}

impl ConvexityViolation {
    pub fn verify<O: SignOracle + ?Sized>(&self, c: &O, sub: &Subgroup) -> Result<bool> {
        let group = c.group();
        Ok(sub.contains(&self.c1)?
            && sub.contains(&self.c2)?
            && !sub.contains(&self.f)?
            && positive(c, &group.mul(&group.inv(&self.c1)?, &self.f)?)?
            && positive(c, &group.mul(&group.inv(&self.f)?, &self.c2)?)?)
    }
}

/// Checks that `C ∩ B_r` is convex among elements of `B_r`, scanning
/// `c₁`, then `c₂`, then `f` in shortlex order.
pub fn convexity_check<O: SignOracle + Sync + ?Sized>(
    c: &O,
    sub: &Subgroup,
    r: usize,
) -> Result<Outcome<ConvexityViolation>> {
    let mut first = None;
    scan_convexity(c, sub, r, &mut |v| {
        first = Some(v);
        false
    })?;
    Ok(first.map_or(Outcome::Pass(r), Outcome::Witness))
}

/// Every convexity violation inside `B_r`, in the scan order of
/// [`convexity_check`].
pub fn convexity_violations<O: SignOracle + Sync + ?Sized>(
    c: &O,
    sub: &Subgroup,
    r: usize,
) -> Result<Vec<ConvexityViolation>> {
    let mut all = Vec::new();
    scan_convexity(c, sub, r, &mut |v| {
        all.push(v);
        true
    })?;
    Ok(all)
}

fn scan_convexity<O: SignOracle + ?Sized>(
    c: &O,
    sub: &Subgroup,
    r: usize,
    found: &mut dyn FnMut(ConvexityViolation) -> bool,
) -> Result<()> {
    let group = c.group();
    let ball = group.ball(r)?;
    let mut members = Vec::new();
    let mut outside = Vec::new();
    for w in &ball {
        if sub.contains(w)? {
            members.push(w.clone());
        } else {
            outside.push(w.clone());
        }
    }
    for c1 in &members {
        let c1i = group.inv(c1)?;
        // f above c₁
        let mut above = Vec::new();
        for f in &outside {
            if positive(c, &group.mul(&c1i, f)?)? {
                above.push((f, group.inv(f)?));
            }
        }
        for c2 in &members {
            for (f, fi) in &above {
                if positive(c, &group.mul(fi, c2)?)? {
                    let v = ConvexityViolation { c1: c1.clone(), f: (*f).clone(), c2: c2.clone() };
                    if !found(v) {
                        return Ok(());
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cofinality {
    /// `u^n < g` for every `|n| ≤ N`.
    Holds(u64),
    /// The first exponent, in the order `0, 1, −1, 2, −2, …`, with `u^n ≥ g`.
    Fails(i64),
}

pub fn cofinality_witness<O: SignOracle + ?Sized>(c: &O, u: &Word, g: &Word, n_max: u64) -> Result<Cofinality> {
    let group = c.group();
    let (u, g) = (group.normalize(u)?, group.normalize(g)?);
    if u.is_identity() || g.is_identity() {
        return Err(Error::NoSign);
    }
    let exps = std::iter::once(0).chain((1..=n_max as i64).flat_map(|n| [n, -n]));
    for n in exps {
        let w = group.mul(&group.pow(&u, -n)?, &g)?;
        if !positive(c, &w)? {
            return Ok(Cofinality::Fails(n));
        }
    }
    Ok(Cofinality::Holds(n_max))
}

/// `g < h` but `φ(g) > φ(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomViolation {
    pub g: Word,
    pub h: Word,
}

impl HomViolation {
    pub fn verify<O: SignOracle + ?Sized>(&self, c: &O, phi: &dyn Fn(&Word) -> Result<i64>) -> Result<bool> {
        let group = c.group();
        Ok(positive(c, &group.mul(&group.inv(&self.g)?, &self.h)?)? && phi(&self.g)? > phi(&self.h)?)
    }
}

/// Checks that `φ` is order-preserving on `B_r` after spot-checking that it
/// is a homomorphism on products of pairs from `B_r`.
pub fn order_hom_check<O: SignOracle + ?Sized>(
    c: &O,
    phi: &dyn Fn(&Word) -> Result<i64>,
    r: usize,
) -> Result<Outcome<HomViolation>> {
    let group = c.group();
    let ball = group.ball(r)?;
    let values = ball.iter().map(phi).collect::<Result<Vec<_>>>()?;
    for (u, pu) in ball.iter().zip(&values) {
        for (v, pv) in ball.iter().zip(&values) {
            if phi(&group.mul(u, v)?)? != pu + pv {
                return Err(Error::InvalidHom(format!("phi({u} {v}) != phi({u}) + phi({v})")));
            }
        }
    }
    for (g, pg) in ball.iter().zip(&values) {
        let gi = group.inv(g)?;
        for (h, ph) in ball.iter().zip(&values) {
            if pg > ph && positive(c, &group.mul(&gi, h)?)? {
                return Ok(Outcome::Witness(HomViolation { g: g.clone(), h: h.clone() }));
            }
        }
    }
    Ok(Outcome::Pass(r))
}

/// The `i`-th free coordinate of the abelianization.
pub fn abelian_coordinate(group: &Group, i: usize) -> impl Fn(&Word) -> Result<i64> + '_ {
    move |w| {
        let ab = group.abelianize(w)?;
        ab.free.get(i).copied().ok_or_else(|| Error::InvalidHom(format!("no free coordinate {i}")))
    }
}

/// Lex witnesses split by the quotient: a Conradian violation of a lex cone
/// has both entries in the kernel or both outside it.
pub fn lex_witness_pattern(c: &Cone, v: &ConradianViolation) -> Result<Option<(bool, bool)>> {
    match c {
        Cone::Lex { ses, .. } => Ok(Some((ses.project(&v.g)?.is_identity(), ses.project(&v.h)?.is_identity()))),
        _ => Ok(None),
    }
}
