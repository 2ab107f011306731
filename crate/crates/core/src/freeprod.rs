//! The kernel of `G ∗ H → G × H` and its free basis of commutators.
//!
//! The kernel is free on `x_{g,h} = [g, h] = g h g⁻¹ h⁻¹` for nonidentity
//! `g ∈ G`, `h ∈ H`. Labels are stored as normal forms of the factors, and a
//! label with an identity entry denotes the trivial element and is dropped.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::word::Word;

/// A free product of exactly two factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeProduct2 {
    pub g: Group,
    pub h: Group,
}

impl FreeProduct2 {
    pub fn new(g: Group, h: Group) -> Self {
        FreeProduct2 { g, h }
    }

    /// `Z ∗ Z` with generators `a` (left) and `b` (right).
    pub fn z_star_z() -> Self {
        FreeProduct2::new(Group::zpow(1), Group::zpow(1))
    }

    pub fn from_group(group: &Group) -> Result<Self> {
        match group {
            Group::FreeProduct { factors } if factors.len() == 2 => {
                Ok(FreeProduct2::new(factors[0].clone(), factors[1].clone()))
            }
            _ => Err(Error::ContextMismatch("expected a free product of two factors".into())),
        }
    }

    pub fn group(&self) -> Group {
        Group::FreeProduct { factors: vec![self.g.clone(), self.h.clone()] }
    }

    fn offset(&self) -> usize {
        self.g.rank()
    }

    /// A `G`-word as an element of the free product.
    pub fn lift_g(&self, g: &Word) -> Word {
        g.clone()
    }

    /// An `H`-word as an element of the free product.
    pub fn lift_h(&self, h: &Word) -> Word {
        let off = self.offset();
        h.map_gens(|i| i + off)
    }

    /// `x_{g,h}` expanded as a word of the free product.
    pub fn commutator(&self, g: &Word, h: &Word) -> Result<Word> {
        let (g, h) = (self.lift_g(g), self.lift_h(h));
        self.group().normalize(&g.concat(&h).concat(&g.formal_inverse()).concat(&h.formal_inverse()))
    }
}

/// The image of `w` in `G × H`.
pub fn fp_project(fp: &FreeProduct2, w: &Word) -> Result<(Word, Word)> {
    let w = fp.group().normalize(w)?;
    let off = fp.offset();
    let mut g = Word::identity();
    let mut h = Word::identity();
    for s in w.syllables() {
        if s.gen < off {
            g.push(s.gen, s.exp);
        } else {
            h.push(s.gen - off, s.exp);
        }
    }
    Ok((fp.g.normalize(&g)?, fp.h.normalize(&h)?))
}

/// One letter `x_{g,h}^e` of a word in the commutator basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisLetter {
    pub g: Word,
    pub h: Word,
    pub e: i64,
}

/// A freely reduced word in the basis `{x_{g,h}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KernelBasisWord {
    letters: Vec<BasisLetter>,
}

impl KernelBasisWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn letter(g: Word, h: Word, e: i64) -> Self {
        let mut k = Self::identity();
        k.push(g, h, e);
        k
    }

    /// Appends `x_{g,h}^e`, dropping degenerate labels and merging with the
    /// last letter.
    pub fn push(&mut self, g: Word, h: Word, e: i64) {
        if e == 0 || g.is_identity() || h.is_identity() {
            return;
        }
        match self.letters.last_mut() {
            Some(last) if last.g == g && last.h == h => {
                last.e += e;
                if last.e == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push(BasisLetter { g, h, e }),
        }
    }

    pub fn concat(&self, other: &KernelBasisWord) -> KernelBasisWord {
        let mut k = self.clone();
        for l in &other.letters {
            k.push(l.g.clone(), l.h.clone(), l.e);
        }
        k
    }

    pub fn inverse(&self) -> KernelBasisWord {
        let mut k = Self::identity();
        for l in self.letters.iter().rev() {
            k.push(l.g.clone(), l.h.clone(), -l.e);
        }
        k
    }

    pub fn letters(&self) -> &[BasisLetter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The element of `G ∗ H` this word represents.
    pub fn expand(&self, fp: &FreeProduct2) -> Result<Word> {
        let mut out = Word::identity();
        for l in &self.letters {
            let x = fp.commutator(&l.g, &l.h)?;
            let x = if l.e > 0 { x } else { x.formal_inverse() };
            for _ in 0..l.e.unsigned_abs() {
                out = out.concat(&x);
            }
        }
        fp.group().normalize(&out)
    }

    pub fn display(&self, fp: &FreeProduct2) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let group = fp.group();
        self.letters
            .iter()
            .map(|l| {
                let base =
                    format!("x[{}, {}]", group.display_word(&fp.lift_g(&l.g)), group.display_word(&fp.lift_h(&l.h)));
                if l.e == 1 {
                    base
                } else {
                    format!("{base}^{}", l.e)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for KernelBasisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| format!("x[{}, {}]^{}", l.g, l.h, l.e)).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Rewrites a kernel element in the commutator basis.
///
/// Reading left to right with coset representative `g h` for the prefix, an
/// `H`-syllable contributes nothing and a `G`-syllable `x` contributes
/// `g h x h⁻¹ x⁻¹ g⁻¹ = x_{g,h} x_{gx,h}⁻¹`.
pub fn kernel_decompose(fp: &FreeProduct2, w: &Word) -> Result<KernelBasisWord> {
    let w = fp.group().normalize(w)?;
    let (pg, ph) = fp_project(fp, &w)?;
    if !pg.is_identity() || !ph.is_identity() {
        return Err(Error::NotInKernel);
    }
    let off = fp.offset();
    let mut g = Word::identity();
    let mut h = Word::identity();
    let mut out = KernelBasisWord::identity();
    for s in w.syllables() {
        if s.gen >= off {
            h = fp.h.mul(&h, &Word::pow(s.gen - off, s.exp))?;
        } else {
            let gx = fp.g.mul(&g, &Word::pow(s.gen, s.exp))?;
            out.push(g.clone(), h.clone(), 1);
            out.push(gx.clone(), h.clone(), -1);
            g = gx;
        }
    }
    Ok(out)
}

/// `by · x_{g,h} · by⁻¹` in the basis.
///
/// Uses the closed forms for `by = b ∈ H`, `by = a ∈ G` and `by = ab`;
/// anything else is decomposed directly.
pub fn conj_basis(fp: &FreeProduct2, letter: (&Word, &Word), by: &Word) -> Result<KernelBasisWord> {
    let (g, h) = (fp.g.normalize(letter.0)?, fp.h.normalize(letter.1)?);
    let by = fp.group().normalize(by)?;
    match split_ab(fp, &by) {
        Some((a, b)) => conj_closed_form(fp, &g, &h, &a, &b),
        None => conj_basis_direct(fp, (&g, &h), &by),
    }
}

/// `by · x_{g,h} · by⁻¹`, always through [`kernel_decompose`].
pub fn conj_basis_direct(fp: &FreeProduct2, letter: (&Word, &Word), by: &Word) -> Result<KernelBasisWord> {
    let x = fp.commutator(letter.0, letter.1)?;
    let w = by.concat(&x).concat(&by.formal_inverse());
    kernel_decompose(fp, &w)
}

/// Writes `by = a b` with `a ∈ G`, `b ∈ H` when possible.
fn split_ab(fp: &FreeProduct2, by: &Word) -> Option<(Word, Word)> {
    let off = fp.offset();
    let cut = by.syllables().iter().position(|s| s.gen >= off).unwrap_or(by.syllables().len());
    let (a, b) = by.syllables().split_at(cut);
    if b.iter().any(|s| s.gen < off) {
        return None;
    }
    let a = Word::from_pairs(a.iter().map(|s| (s.gen, s.exp)));
    let b = Word::from_pairs(b.iter().map(|s| (s.gen - off, s.exp)));
    Some((a, b))
}

/// `ab x_{g,h} b⁻¹a⁻¹ = x_{a,b} x_{ag,b}⁻¹ x_{ag,bh} x_{a,bh}⁻¹`, which reduces
/// to `x_{g,b}⁻¹ x_{g,bh}` for `a = 1` and `x_{ag,h} x_{a,h}⁻¹` for `b = 1`.
fn conj_closed_form(fp: &FreeProduct2, g: &Word, h: &Word, a: &Word, b: &Word) -> Result<KernelBasisWord> {
    let ag = fp.g.mul(a, g)?;
    let bh = fp.h.mul(b, h)?;
    let mut k = KernelBasisWord::identity();
    if a.is_identity() && b.is_identity() {
        k.push(g.clone(), h.clone(), 1);
        return Ok(k);
    }
    k.push(a.clone(), b.clone(), 1);
    k.push(ag.clone(), b.clone(), -1);
    k.push(ag, bh.clone(), 1);
    k.push(a.clone(), bh, -1);
    Ok(k)
}

/// Total exponent of `x_{g,h}` in `k`.
pub fn exponent_sum(k: &KernelBasisWord, gen: (&Word, &Word)) -> i64 {
    k.letters.iter().filter(|l| l.g == *gen.0 && l.h == *gen.1).map(|l| l.e).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureVerdict {
    /// Every generator outside `S` has exponent sum zero. Necessary for
    /// membership in the normal closure of `S`, not sufficient.
    Consistent,
    Violates { g: Word, h: Word, sum: i64 },
}

/// Scans generators outside `S` in shortlex order of `(g, h)` for a nonzero
/// exponent sum.
pub fn normal_closure_criterion(k: &KernelBasisWord, s: &[(Word, Word)]) -> ClosureVerdict {
    let mut gens: Vec<(&Word, &Word)> = k.letters.iter().map(|l| (&l.g, &l.h)).collect();
    gens.sort();
    gens.dedup();
    for (g, h) in gens {
        if s.iter().any(|(sg, sh)| sg == g && sh == h) {
            continue;
        }
        let sum = exponent_sum(k, (g, h));
        if sum != 0 {
            return ClosureVerdict::Violates { g: g.clone(), h: h.clone(), sum };
        }
    }
    ClosureVerdict::Consistent
}

/// The three conjugation identities for one instance, each checked by
/// expanding both sides in `G ∗ H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub by_b: bool,
    pub by_a: bool,
    pub by_ab: bool,
}

impl IdentityCheck {
    pub fn all(&self) -> bool {
        self.by_b && self.by_a && self.by_ab
    }
}

/// Verifies the closed forms for conjugation by `b`, `a` and `ab` against
/// the free-product conjugate of `x_{g,h}`.
pub fn check_identities(fp: &FreeProduct2, g: &Word, h: &Word, a: &Word, b: &Word) -> Result<IdentityCheck> {
    let group = fp.group();
    let x = fp.commutator(g, h)?;
    let lhs = |by: &Word| group.conj(by, &x);
    let check = |by: Word, a: &Word, b: &Word| -> Result<bool> {
        let rhs = conj_closed_form(fp, g, h, a, b)?.expand(fp)?;
        Ok(lhs(&by)? == rhs)
    };
    let id = Word::identity();
    Ok(IdentityCheck {
        by_b: check(fp.lift_h(b), &id, b)?,
        by_a: check(fp.lift_g(a), a, &id)?,
        by_ab: check(fp.lift_g(a).concat(&fp.lift_h(b)), a, b)?,
    })
}
