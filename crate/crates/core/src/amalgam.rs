//! Normal forms in amalgamated products `A ∗_C B` of two infinite cyclic
//! groups, and a bounded malnormality search.
//!
//! Elements are written over the free generators `a` (id 0) and `b` (id 1).
//! Each side is described by a [`SideOracle`] that splits `a^k` (or `b^k`)
//! as an element of `C` times a transversal representative.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

/// Membership in `C` and coset representatives for one cyclic factor.
pub trait SideOracle {
    /// Writes `x^k = c0^c · x^r` with `x^r` a transversal representative.
    /// `c0` is the fixed generator of `C`.
    fn split(&self, k: i64) -> (i64, i64);
    /// The exponent `m` with `x^m = c0`; zero when `C` is trivial.
    fn index(&self) -> i64;
}

/// `C = ⟨x^m⟩` with transversal `{x^0, …, x^{m−1}}`; `m = 0` means `C = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicSide {
    pub m: i64,
}

impl SideOracle for CyclicSide {
    fn split(&self, k: i64) -> (i64, i64) {
        if self.m == 0 {
            (0, k)
        } else {
            (k.div_euclid(self.m), k.rem_euclid(self.m))
        }
    }

    fn index(&self) -> i64 {
        self.m
    }
}

/// `⟨a, b | a^m = b^n⟩`, or `Z ∗ Z` when `m = n = 0`.
pub struct Amalgam<SA: SideOracle = CyclicSide, SB: SideOracle = CyclicSide> {
    pub a: SA,
    pub b: SB,
}

impl Amalgam {
    pub fn cyclic(m: i64, n: i64) -> Result<Self> {
        if m < 0 || n < 0 || (m == 0) != (n == 0) {
            return Err(Error::InvalidOracle(format!("a^{m} = b^{n} does not define a cyclic amalgam")));
        }
        Ok(Amalgam { a: CyclicSide { m }, b: CyclicSide { m: n } })
    }

    /// `⟨a, b | a² = b²⟩`.
    pub fn klein_amalgam() -> Self {
        Amalgam { a: CyclicSide { m: 2 }, b: CyclicSide { m: 2 } }
    }

    pub fn free() -> Self {
        Amalgam { a: CyclicSide { m: 0 }, b: CyclicSide { m: 0 } }
    }
}

/// `c0^c · x₁ ⋯ x_m`, with the `x_i` alternating between transversal
/// representatives of `A ∖ C` and `B ∖ C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AmalgamForm {
    pub prefix: i64,
    pub factors: Vec<(Side, i64)>,
}

impl AmalgamForm {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn in_factor(&self, side: Side) -> bool {
        match self.factors.as_slice() {
            [] => true,
            [(s, _)] => *s == side,
            _ => false,
        }
    }

    /// A word over `a, b` for this element, with the prefix written on the
    /// `A` side.
    pub fn to_word<SA: SideOracle, SB: SideOracle>(&self, am: &Amalgam<SA, SB>) -> Word {
        let mut w = Word::pow(0, self.prefix * am.a.index());
        for (s, e) in &self.factors {
            w.push(if *s == Side::A { 0 } else { 1 }, *e);
        }
        w
    }

    pub fn display(&self, c0: &str) -> String {
        let mut parts = Vec::new();
        if self.prefix != 0 {
            parts.push(if self.prefix == 1 { c0.to_string() } else { format!("{c0}^{}", self.prefix) });
        }
        for (s, e) in &self.factors {
            let n = if *s == Side::A { "a" } else { "b" };
            parts.push(if *e == 1 { n.to_string() } else { format!("{n}^{e}") });
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

fn checked_split<O: SideOracle>(o: &O, k: i64) -> Result<(i64, i64)> {
    let (c, r) = o.split(k);
    let back = c.checked_mul(o.index()).and_then(|x| x.checked_add(r)).ok_or(Error::Overflow)?;
    if back != k || o.split(r) != (0, r) {
        return Err(Error::InvalidOracle(format!("split({k}) = ({c}, {r}) is not a canonical coset decomposition")));
    }
    Ok((c, r))
}

/// Normal form of a word over `a, b`, built right to left so the `C` part
/// collects on the left.
pub fn amalgam_normal_form<SA: SideOracle, SB: SideOracle>(am: &Amalgam<SA, SB>, w: &Word) -> Result<AmalgamForm> {
    Group::free(2).check_word(w)?;
    let mut prefix = 0i64;
    // factors stored reversed: last element is the leftmost factor
    let mut rev: Vec<(Side, i64)> = Vec::new();
    for s in w.syllables().iter().rev() {
        let side = if s.gen == 0 { Side::A } else { Side::B };
        let index = match side {
            Side::A => am.a.index(),
            Side::B => am.b.index(),
        };
        // x^e · c0^prefix · (leading factor, if on this side)
        let mut k = prefix.checked_mul(index).and_then(|x| x.checked_add(s.exp)).ok_or(Error::Overflow)?;
        if index == 0 && prefix != 0 {
            return Err(Error::InvalidOracle("nontrivial C element with trivial amalgamation".into()));
        }
        if let Some((top, r)) = rev.last() {
            if *top == side {
                k = k.checked_add(*r).ok_or(Error::Overflow)?;
                rev.pop();
            }
        }
        let (c, r) = match side {
            Side::A => checked_split(&am.a, k)?,
            Side::B => checked_split(&am.b, k)?,
        };
        prefix = c;
        if r != 0 {
            rev.push((side, r));
        }
    }
    rev.reverse();
    Ok(AmalgamForm { prefix, factors: rev })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Malnormality {
    Pass(usize),
    /// `a ∈ A ∖ {1}` and `w ∉ A` with `w⁻¹ a w ∈ A`.
    Witness { a: Word, w: Word },
}

/// Searches `a^k` (`0 < |k| ≤ r`, shortlex) against words `w` of `B_r` lying
/// outside `A`, one word per element.
pub fn malnormality_check<SA: SideOracle, SB: SideOracle>(am: &Amalgam<SA, SB>, r: usize) -> Result<Malnormality> {
    let mut outside: Vec<Word> = Vec::new();
    let mut seen = HashSet::new();
    for w in Group::free(2).ball(r)? {
        let nf = amalgam_normal_form(am, &w)?;
        if !nf.in_factor(Side::A) && seen.insert(nf) {
            outside.push(w);
        }
    }
    for k in (1..=r as i64).flat_map(|k| [k, -k]) {
        let a = Word::pow(0, k);
        for w in &outside {
            let conj = w.formal_inverse().concat(&a).concat(w);
            if amalgam_normal_form(am, &conj)?.in_factor(Side::A) {
                return Ok(Malnormality::Witness { a, w: w.clone() });
            }
        }
    }
    Ok(Malnormality::Pass(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(pairs: &[(usize, i64)]) -> Word {
        Word::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn normal_form_examples() {
        let am = Amalgam::klein_amalgam();
        // a² b⁻¹ = b² b⁻¹ = b
        let nf = amalgam_normal_form(&am, &w(&[(0, 2), (1, -1)])).unwrap();
        assert_eq!(nf, AmalgamForm { prefix: 0, factors: vec![(Side::B, 1)] });
        let nf = amalgam_normal_form(&am, &w(&[(0, 1)])).unwrap();
        assert_eq!(nf.factors, vec![(Side::A, 1)]);
        assert!(nf.in_factor(Side::A));
        let nf = amalgam_normal_form(&am, &w(&[(0, 1), (1, 1)])).unwrap();
        assert_eq!(nf.factors, vec![(Side::A, 1), (Side::B, 1)]);
        let nf = amalgam_normal_form(&am, &w(&[(0, 2), (1, -2)])).unwrap();
        assert_eq!(nf, AmalgamForm { prefix: 0, factors: vec![] });
        let nf = amalgam_normal_form(&am, &w(&[(1, 3), (0, 1)])).unwrap();
        assert_eq!(nf, AmalgamForm { prefix: 1, factors: vec![(Side::B, 1), (Side::A, 1)] });
    }

    #[test]
    fn normal_form_is_idempotent() {
        let am = Amalgam::klein_amalgam();
        for x in Group::free(2).ball(5).unwrap() {
            let nf = amalgam_normal_form(&am, &x).unwrap();
            assert_eq!(amalgam_normal_form(&am, &nf.to_word(&am)).unwrap(), nf);
        }
    }

    #[test]
    fn normal_form_respects_products() {
        let am = Amalgam::cyclic(2, 3).unwrap();
        let ball = Group::free(2).ball(3).unwrap();
        for u in &ball {
            for v in &ball {
                let nu = amalgam_normal_form(&am, u).unwrap().to_word(&am);
                let nv = amalgam_normal_form(&am, v).unwrap().to_word(&am);
                assert_eq!(
                    amalgam_normal_form(&am, &u.concat(v)).unwrap(),
                    amalgam_normal_form(&am, &nu.concat(&nv)).unwrap()
                );
            }
        }
    }

    #[test]
    fn free_product_forms_are_reduced_words() {
        let am = Amalgam::free();
        for x in Group::free(2).ball(4).unwrap() {
            let nf = amalgam_normal_form(&am, &x).unwrap();
            assert_eq!(nf.prefix, 0);
            assert_eq!(nf.to_word(&am), x);
        }
    }

    struct BadSide;

    impl SideOracle for BadSide {
        fn split(&self, k: i64) -> (i64, i64) {
            (0, k + 1)
        }
        fn index(&self) -> i64 {
            2
        }
    }

    #[test]
    fn inconsistent_oracle_is_rejected() {
        let am = Amalgam { a: BadSide, b: CyclicSide { m: 2 } };
        assert!(matches!(amalgam_normal_form(&am, &Word::gen(0)), Err(Error::InvalidOracle(_))));
    }

    #[test]
    fn malnormality_examples() {
        assert_eq!(malnormality_check(&Amalgam::free(), 4).unwrap(), Malnormality::Pass(4));
        assert_eq!(
            malnormality_check(&Amalgam::klein_amalgam(), 4).unwrap(),
            Malnormality::Witness { a: Word::pow(0, 2), w: Word::gen(1) }
        );
    }
}
