//! Group contexts: normal forms, products, balls and abelianization for every
//! supported family.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Limits, Result};
use crate::surd::IntMatrix2;
use crate::word::Word;

/// A group family with a confluent normal form.
///
/// Generator ids are local to the family: `Free`/`Zpow` number their basis
/// `0..rank`, `Klein` uses `x = 0, y = 1`, `Semidirect` uses `e1 = 0, e2 = 1,
/// t = 2`, and products concatenate their factors' generators in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Group {
    Free { rank: usize },
    Zpow { rank: usize },
    /// `⟨x, y | x y x⁻¹ = y⁻¹⟩`, normal form `y^b x^a`.
    Klein,
    FreeProduct { factors: Vec<Group> },
    DirectProduct { factors: Vec<Group> },
    /// `Z² ⋊_A Z`, normal form `(v, k) = v·t^k`.
    Semidirect { matrix: IntMatrix2 },
}

pub const KLEIN_X: usize = 0;
pub const KLEIN_Y: usize = 1;
pub const SOL_T: usize = 2;

/// Image of a word in the abelianization: free coordinates followed by
/// torsion coordinates `(modulus, residue)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianImage {
    pub free: Vec<i64>,
    pub torsion: Vec<(u64, u64)>,
}

impl AbelianImage {
    fn extend(&mut self, other: AbelianImage) {
        self.free.extend(other.free);
        self.torsion.extend(other.torsion);
    }
}

impl Group {
    pub fn free(rank: usize) -> Self {
        Group::Free { rank }
    }

    pub fn zpow(rank: usize) -> Self {
        Group::Zpow { rank }
    }

    pub fn semidirect(matrix: IntMatrix2) -> Result<Self> {
        let g = Group::Semidirect { matrix };
        g.validate()?;
        Ok(g)
    }

    /// `Z² ⋊_A Z` with `A = [[2, 1], [1, 1]]`.
    pub fn sol() -> Self {
        Group::Semidirect { matrix: IntMatrix2::new(2, 1, 1, 1) }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Group::Semidirect { matrix } if !matrix.is_unimodular() => Err(Error::ContextMismatch(format!(
                "semidirect product needs a unimodular matrix, got {matrix}"
            ))),
            Group::FreeProduct { factors } | Group::DirectProduct { factors } => {
                factors.iter().try_for_each(Group::validate)
            }
            _ => Ok(()),
        }
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        match self {
            Group::Free { rank } | Group::Zpow { rank } => *rank,
            Group::Klein => 2,
            Group::Semidirect { .. } => 3,
            Group::FreeProduct { factors } | Group::DirectProduct { factors } => {
                factors.iter().map(Group::rank).sum()
            }
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Group::Zpow { .. } => true,
            Group::Free { rank } => *rank <= 1,
            Group::DirectProduct { factors } => factors.iter().all(Group::is_abelian),
            Group::FreeProduct { factors } => factors.iter().filter(|f| f.rank() > 0).count() <= 1,
            Group::Klein | Group::Semidirect { .. } => false,
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        match self {
            Group::Free { rank } => (0..*rank)
                .map(|i| {
                    if *rank <= 26 {
                        ((b'a' + i as u8) as char).to_string()
                    } else {
                        format!("g{i}")
                    }
                })
                .collect(),
            Group::Zpow { rank } => (1..=*rank).map(|i| format!("e{i}")).collect(),
            Group::Klein => vec!["x".into(), "y".into()],
            Group::Semidirect { .. } => vec!["e1".into(), "e2".into(), "t".into()],
            Group::FreeProduct { factors } | Group::DirectProduct { factors } => {
                let per: Vec<Vec<String>> = factors.iter().map(Group::generator_names).collect();
                let all: Vec<&String> = per.iter().flatten().collect();
                let unique = all.iter().collect::<HashSet<_>>().len() == all.len();
                if !unique && all.len() <= 26 && per.iter().all(|names| names.len() == 1) {
                    return (0..all.len()).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
                }
                per.iter()
                    .enumerate()
                    .flat_map(|(i, names)| {
                        names.iter().map(move |n| if unique { n.clone() } else { format!("{i}.{n}") })
                    })
                    .collect()
            }
        }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names().iter().position(|n| n == name)
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display_with(&self.generator_names())
    }

    /// Generator-id offset of each factor of a product.
    pub fn factor_offsets(&self) -> Vec<usize> {
        match self {
            Group::FreeProduct { factors } | Group::DirectProduct { factors } => factors
                .iter()
                .scan(0, |acc, f| {
                    let o = *acc;
                    *acc += f.rank();
                    Some(o)
                })
                .collect(),
            _ => vec![0],
        }
    }

    fn factor_of(&self, factors: &[Group], gen: usize) -> (usize, usize) {
        let mut offset = 0;
        for (i, f) in factors.iter().enumerate() {
            if gen < offset + f.rank() {
                return (i, gen - offset);
            }
            offset += f.rank();
        }
        unreachable!("generator checked against rank")
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        let rank = self.rank();
        match w.max_gen() {
            Some(g) if g >= rank => Err(Error::UnknownGenerator { gen: g, rank }),
            _ => Ok(()),
        }
    }

    /// Canonical normal form.
    pub fn normalize(&self, w: &Word) -> Result<Word> {
        self.check_word(w)?;
        match self {
            Group::Free { .. } => Ok(w.clone()),
            Group::Zpow { rank } => {
                let mut v = vec![0i64; *rank];
                for s in w.syllables() {
                    v[s.gen] = v[s.gen].checked_add(s.exp).ok_or(Error::Overflow)?;
                }
                Ok(zvec_word(&v))
            }
            Group::Klein => {
                let (b, a) = klein_coords(w)?;
                Ok(klein_word(b, a))
            }
            Group::Semidirect { matrix } => {
                let (v, k) = sol_coords(matrix, w)?;
                Ok(sol_word(v, k))
            }
            Group::DirectProduct { factors } => {
                let offsets = self.factor_offsets();
                let mut parts: Vec<Word> = vec![Word::identity(); factors.len()];
                for s in w.syllables() {
                    let (i, local) = self.factor_of(factors, s.gen);
                    parts[i].push(local, s.exp);
                }
                let mut out = Word::identity();
                for (i, (f, part)) in factors.iter().zip(parts).enumerate() {
                    let nf = f.normalize(&part)?;
                    out = out.concat(&nf.map_gens(|g| g + offsets[i]));
                }
                Ok(out)
            }
            Group::FreeProduct { factors } => {
                let offsets = self.factor_offsets();
                let mut stack: Vec<(usize, Word)> = Vec::new();
                let mut blocks: Vec<(usize, Word)> = Vec::new();
                for s in w.syllables() {
                    let (i, local) = self.factor_of(factors, s.gen);
                    match blocks.last_mut() {
                        Some((j, b)) if *j == i => b.push(local, s.exp),
                        _ => blocks.push((i, Word::pow(local, s.exp))),
                    }
                }
                for (i, block) in blocks {
                    let nf = factors[i].normalize(&block)?;
                    if nf.is_identity() {
                        continue;
                    }
                    match stack.last_mut() {
                        Some((j, top)) if *j == i => {
                            let merged = factors[i].normalize(&top.concat(&nf))?;
                            if merged.is_identity() {
                                stack.pop();
                            } else {
                                *top = merged;
                            }
                        }
                        _ => stack.push((i, nf)),
                    }
                }
                let mut out = Word::identity();
                for (i, part) in stack {
                    out = out.concat(&part.map_gens(|g| g + offsets[i]));
                }
                Ok(out)
            }
        }
    }

    pub fn mul(&self, u: &Word, v: &Word) -> Result<Word> {
        self.check_word(v)?;
        self.normalize(&u.concat(v))
    }

    pub fn inv(&self, u: &Word) -> Result<Word> {
        self.normalize(&u.formal_inverse())
    }

    /// `g w g⁻¹`.
    pub fn conj(&self, g: &Word, w: &Word) -> Result<Word> {
        self.normalize(&g.concat(w).concat(&g.formal_inverse()))
    }

    pub fn pow(&self, w: &Word, n: i64) -> Result<Word> {
        let base = if n < 0 { w.formal_inverse() } else { w.clone() };
        let mut acc = Word::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.concat(&base);
        }
        self.normalize(&acc)
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.normalize(w)?.is_identity())
    }

    /// The symmetric generating set: each generator and its inverse.
    pub fn letters(&self) -> Vec<Word> {
        (0..self.rank()).flat_map(|g| [Word::gen(g), Word::pow(g, -1)]).collect()
    }

    /// All normal forms of products of at most `r` letters, in shortlex order.
    pub fn ball(&self, r: usize) -> Result<Vec<Word>> {
        self.ball_with_cap(r, Limits::from_env().ball_cap)
    }

    pub fn ball_with_cap(&self, r: usize, cap: usize) -> Result<Vec<Word>> {
        let letters = self.letters();
        let mut seen: HashSet<Word> = HashSet::new();
        seen.insert(Word::identity());
        let mut frontier = vec![Word::identity()];
        for _ in 0..r {
            let mut next = Vec::new();
            for w in &frontier {
                for l in &letters {
                    let p = self.mul(w, l)?;
                    if seen.insert(p.clone()) {
                        next.push(p);
                        if seen.len() > cap {
                            return Err(Error::ResourceLimit { what: "ball", size: seen.len(), cap });
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Word> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Max-norm box `{ v : |v_i| ≤ r }` of a free abelian group, shortlex ordered.
    pub fn box_ball(&self, r: i64) -> Result<Vec<Word>> {
        let Group::Zpow { rank } = self else {
            return Err(Error::ContextMismatch("box balls exist only for Z^n".into()));
        };
        let mut out = vec![Vec::new()];
        for _ in 0..*rank {
            out = out
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (-r..=r).map(move |x| {
                        let mut v = v.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        let mut words: Vec<Word> = out.iter().map(|v| zvec_word(v)).collect();
        words.sort();
        Ok(words)
    }

    pub fn abelianize(&self, w: &Word) -> Result<AbelianImage> {
        self.check_word(w)?;
        match self {
            Group::Free { rank } | Group::Zpow { rank } => {
                let mut v = vec![0i64; *rank];
                for s in w.syllables() {
                    v[s.gen] += s.exp;
                }
                Ok(AbelianImage { free: v, torsion: vec![] })
            }
            Group::Klein => {
                let (b, a) = klein_coords(w)?;
                Ok(AbelianImage { free: vec![a], torsion: vec![(2, b.rem_euclid(2) as u64)] })
            }
            Group::Semidirect { matrix } => {
                let (v, k) = sol_coords(matrix, w)?;
                let m = IntMatrix2::new(matrix.a - 1, matrix.b, matrix.c, matrix.d - 1);
                let (u, diag) = smith2(&m);
                let uv = u.checked_apply(v).ok_or(Error::Overflow)?;
                let mut img = AbelianImage::default();
                for (x, dv) in uv.iter().zip(diag) {
                    match dv {
                        0 => img.free.push(*x),
                        1 => {}
                        m => img.torsion.push((m as u64, x.rem_euclid(m) as u64)),
                    }
                }
                img.free.push(k);
                Ok(img)
            }
            Group::DirectProduct { factors } | Group::FreeProduct { factors } => {
                let offsets = self.factor_offsets();
                let mut img = AbelianImage::default();
                for (i, f) in factors.iter().enumerate() {
                    let part = Word::from_pairs(
                        w.syllables()
                            .iter()
                            .filter(|s| s.gen >= offsets[i] && s.gen < offsets[i] + f.rank())
                            .map(|s| (s.gen - offsets[i], s.exp)),
                    );
                    img.extend(f.abelianize(&part)?);
                }
                Ok(img)
            }
        }
    }

    /// Coordinates `(v, k)` of a word in a semidirect product.
    pub fn sol_coords(&self, w: &Word) -> Result<([i64; 2], i64)> {
        match self {
            Group::Semidirect { matrix } => {
                self.check_word(w)?;
                sol_coords(matrix, w)
            }
            _ => Err(Error::ContextMismatch("not a semidirect product".into())),
        }
    }

    /// Coordinates `(b, a)` of `y^b x^a` in the Klein bottle group.
    pub fn klein_coords(&self, w: &Word) -> Result<(i64, i64)> {
        match self {
            Group::Klein => {
                self.check_word(w)?;
                klein_coords(w)
            }
            _ => Err(Error::ContextMismatch("not the Klein bottle group".into())),
        }
    }

    /// Coordinate vector of a word in `Z^n`.
    pub fn zvec(&self, w: &Word) -> Result<Vec<i64>> {
        match self {
            Group::Zpow { .. } => Ok(self.abelianize(w)?.free),
            _ => Err(Error::ContextMismatch("not a free abelian group".into())),
        }
    }
}

pub fn zvec_word(v: &[i64]) -> Word {
    Word::from_pairs(v.iter().enumerate().map(|(i, &e)| (i, e)))
}

pub fn klein_word(b: i64, a: i64) -> Word {
    Word::from_pairs([(KLEIN_Y, b), (KLEIN_X, a)])
}

pub fn sol_word(v: [i64; 2], k: i64) -> Word {
    Word::from_pairs([(0, v[0]), (1, v[1]), (SOL_T, k)])
}

fn klein_coords(w: &Word) -> Result<(i64, i64)> {
    // y^b x^a · y^e = y^(b + (-1)^a e) x^a
    let (mut b, mut a) = (0i64, 0i64);
    for s in w.syllables() {
        if s.gen == KLEIN_X {
            a = a.checked_add(s.exp).ok_or(Error::Overflow)?;
        } else {
            let e = if a.rem_euclid(2) == 0 { s.exp } else { -s.exp };
            b = b.checked_add(e).ok_or(Error::Overflow)?;
        }
    }
    Ok((b, a))
}

fn sol_coords(matrix: &IntMatrix2, w: &Word) -> Result<([i64; 2], i64)> {
    // (v, k)(e_i^n, 0) = (v + A^k n e_i, k)
    let mut v = [0i64; 2];
    let mut k = 0i64;
    for s in w.syllables() {
        if s.gen == SOL_T {
            k = k.checked_add(s.exp).ok_or(Error::Overflow)?;
        } else {
            let mut e = [0i64; 2];
            e[s.gen] = s.exp;
            let ak = matrix.checked_pow(k).ok_or(Error::Overflow)?;
            let d = ak.checked_apply(e).ok_or(Error::Overflow)?;
            v[0] = v[0].checked_add(d[0]).ok_or(Error::Overflow)?;
            v[1] = v[1].checked_add(d[1]).ok_or(Error::Overflow)?;
        }
    }
    Ok((v, k))
}

/// Smith normal form of a 2×2 integer matrix: returns unimodular `U` and the
/// invariant factors `[d1, d2]` (nonnegative, `d1 | d2`) with
/// `U·M·V = diag(d1, d2)` for some unimodular `V`.
pub fn smith2(m: &IntMatrix2) -> (IntMatrix2, [i64; 2]) {
    let mut a = [[m.a, m.b], [m.c, m.d]];
    let mut u = [[1i64, 0], [0, 1]];
    let row_op = |a: &mut [[i64; 2]; 2], u: &mut [[i64; 2]; 2], dst: usize, src: usize, k: i64| {
        for j in 0..2 {
            a[dst][j] -= k * a[src][j];
            u[dst][j] -= k * u[src][j];
        }
    };
    loop {
        // move the smallest nonzero entry to (0, 0)
        let mut best: Option<(usize, usize)> = None;
        for i in 0..2 {
            for j in 0..2 {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj): (usize, usize)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            return (IntMatrix2::from_rows(u), [0, 0]);
        };
        if bi == 1 {
            a.swap(0, 1);
            u.swap(0, 1);
        }
        if bj == 1 {
            for row in a.iter_mut() {
                row.swap(0, 1);
            }
        }
        let p = a[0][0];
        let q = a[1][0] / p;
        row_op(&mut a, &mut u, 1, 0, q);
        let q = a[0][1] / p;
        for row in a.iter_mut() {
            row[1] -= q * row[0];
        }
        if a[1][0] != 0 || a[0][1] != 0 {
            continue;
        }
        if a[1][1] % p != 0 {
            // fold row 1 into row 0 and reduce again
            row_op(&mut a, &mut u, 0, 1, -1);
            continue;
        }
        if a[0][0] < 0 {
            for j in 0..2 {
                a[0][j] = -a[0][j];
                u[0][j] = -u[0][j];
            }
        }
        if a[1][1] < 0 {
            for j in 0..2 {
                a[1][j] = -a[1][j];
                u[1][j] = -u[1][j];
            }
        }
        return (IntMatrix2::from_rows(u), [a[0][0], a[1][1]]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(p: &[(usize, i64)]) -> Word {
        Word::from_pairs(p.iter().copied())
    }

    #[test]
    fn free_reduction() {
        let f2 = Group::free(2);
        assert_eq!(f2.normalize(&w(&[(0, 1), (0, -1), (1, 1)])).unwrap(), Word::gen(1));
        assert_eq!(f2.mul(&w(&[(0, 1), (1, 1)]), &w(&[(1, -1), (0, 1)])).unwrap(), Word::pow(0, 2));
    }

    #[test]
    fn klein_relation() {
        let k = Group::Klein;
        let xy = w(&[(KLEIN_X, 1), (KLEIN_Y, 1)]);
        assert_eq!(k.normalize(&xy).unwrap(), w(&[(KLEIN_Y, -1), (KLEIN_X, 1)]));
        let xy3x = w(&[(KLEIN_X, 1), (KLEIN_Y, 3), (KLEIN_X, -1)]);
        assert_eq!(k.normalize(&xy3x).unwrap(), Word::pow(KLEIN_Y, -3));
        assert_eq!(k.conj(&Word::gen(KLEIN_X), &Word::gen(KLEIN_Y)).unwrap(), Word::pow(KLEIN_Y, -1));
    }

    #[test]
    fn abelian_conjugation_trivial() {
        let z2 = Group::zpow(2);
        let g = w(&[(0, 3), (1, -2)]);
        let x = w(&[(1, 5), (0, 1)]);
        assert_eq!(z2.conj(&g, &x).unwrap(), z2.normalize(&x).unwrap());
    }

    #[test]
    fn unknown_generator() {
        assert_eq!(
            Group::free(2).normalize(&Word::gen(2)).unwrap_err(),
            Error::UnknownGenerator { gen: 2, rank: 2 }
        );
    }

    #[test]
    fn ball_sizes() {
        let z2 = Group::zpow(2).ball(1).unwrap();
        assert_eq!(z2.len(), 5);
        assert_eq!(z2[0], Word::identity());
        // 1 + 4 + 12 freely reduced words
        assert_eq!(Group::free(2).ball(2).unwrap().len(), 17);
        // brute force: every product of ≤ 2 letters, deduplicated
        let k = Group::Klein;
        let mut brute = HashSet::new();
        let letters = k.letters();
        brute.insert(Word::identity());
        for a in &letters {
            brute.insert(k.normalize(a).unwrap());
            for b in &letters {
                brute.insert(k.mul(a, b).unwrap());
            }
        }
        let ball = k.ball(2).unwrap();
        assert_eq!(ball.len(), brute.len());
        assert!(ball.iter().all(|x| brute.contains(x)));
    }

    #[test]
    fn ball_cap() {
        let err = Group::free(2).ball_with_cap(6, 100).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }

    #[test]
    fn ball_nested_and_symmetric() {
        for g in [Group::Klein, Group::sol(), Group::free(2), Group::zpow(2)] {
            let b3 = g.ball(3).unwrap();
            let b4: HashSet<Word> = g.ball(4).unwrap().into_iter().collect();
            let b3set: HashSet<Word> = b3.iter().cloned().collect();
            for x in &b3 {
                assert!(b4.contains(x));
                assert!(b3set.contains(&g.inv(x).unwrap()));
            }
        }
    }

    #[test]
    fn box_ball() {
        let b = Group::zpow(2).box_ball(1).unwrap();
        assert_eq!(b.len(), 9);
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(Group::free(2).abelianize(&w(&[(0, 2), (1, -1)])).unwrap().free, vec![2, -1]);
        let k = Group::Klein.abelianize(&w(&[(KLEIN_Y, 3), (KLEIN_X, 2)])).unwrap();
        assert_eq!(k, AbelianImage { free: vec![2], torsion: vec![(2, 1)] });
        assert_eq!(Group::zpow(2).abelianize(&w(&[(0, 3), (1, -4)])).unwrap().free, vec![3, -4]);
        // A - I is invertible for the cat map, so H1(Sol) = Z
        let s = Group::sol().abelianize(&w(&[(0, 5), (1, 2), (SOL_T, -3)])).unwrap();
        assert_eq!(s, AbelianImage { free: vec![-3], torsion: vec![] });
    }

    #[test]
    fn smith_normal_form() {
        let (u, d) = smith2(&IntMatrix2::new(2, 4, 6, 8));
        assert_eq!(d, [2, 4]);
        assert_eq!(u.det().abs(), 1);
        assert_eq!(smith2(&IntMatrix2::new(0, 0, 0, 0)).1, [0, 0]);
        assert_eq!(smith2(&IntMatrix2::new(2, 0, 0, 3)).1, [1, 6]);
        assert_eq!(smith2(&IntMatrix2::new(1, 1, 1, 0)).1, [1, 1]);
    }

    #[test]
    fn semidirect_abelianization_is_homomorphism() {
        // A = [[1, 2], [0, 1]]: A - I = [[0, 2], [0, 0]], H1 = Z ⊕ Z/2 ⊕ Z
        let g = Group::semidirect(IntMatrix2::new(1, 2, 0, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let u = random_word(&mut rng, 3, 6);
            let v = random_word(&mut rng, 3, 6);
            let au = g.abelianize(&u).unwrap();
            let av = g.abelianize(&v).unwrap();
            let auv = g.abelianize(&g.mul(&u, &v).unwrap()).unwrap();
            let sum: Vec<i64> = au.free.iter().zip(&av.free).map(|(a, b)| a + b).collect();
            assert_eq!(auv.free, sum);
            for ((m, x), (_, y)) in au.torsion.iter().zip(&av.torsion) {
                assert!(auv.torsion.contains(&(*m, (x + y) % m)));
            }
        }
    }

    #[test]
    fn direct_and_free_products() {
        let dp = Group::DirectProduct { factors: vec![Group::zpow(1), Group::free(2)] };
        assert_eq!(dp.generator_names(), vec!["e1", "a", "b"]);
        let x = w(&[(1, 1), (0, 2), (2, 1), (0, 1)]);
        assert_eq!(dp.normalize(&x).unwrap(), w(&[(0, 3), (1, 1), (2, 1)]));
        let fp = Group::FreeProduct { factors: vec![Group::zpow(1), Group::zpow(1)] };
        let c = w(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        assert_eq!(fp.normalize(&c).unwrap(), c);
        let collapse = w(&[(0, 1), (1, 1), (1, -1), (0, -1)]);
        assert!(fp.normalize(&collapse).unwrap().is_identity());
        assert_eq!(fp.generator_names(), vec!["a", "b"]);
        let zz = Group::DirectProduct { factors: vec![Group::zpow(2), Group::zpow(2)] };
        assert_eq!(zz.generator_names(), vec!["0.e1", "0.e2", "1.e1", "1.e2"]);
    }

    pub(crate) fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Word {
        let n = rng.gen_range(0..=len);
        Word::from_pairs((0..n).map(|_| (rng.gen_range(0..rank), if rng.gen_bool(0.5) { 1 } else { -1 })))
    }

    fn families() -> Vec<Group> {
        vec![
            Group::free(2),
            Group::zpow(2),
            Group::Klein,
            Group::sol(),
            Group::DirectProduct { factors: vec![Group::zpow(1), Group::free(2)] },
            Group::FreeProduct { factors: vec![Group::Klein, Group::zpow(1)] },
        ]
    }

    #[test]
    fn normal_form_soundness() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for g in families() {
            for _ in 0..1000 {
                let u = random_word(&mut rng, g.rank(), 8);
                let v = random_word(&mut rng, g.rank(), 8);
                let nu = g.normalize(&u).unwrap();
                let nv = g.normalize(&v).unwrap();
                assert_eq!(g.normalize(&nu).unwrap(), nu);
                assert_eq!(g.mul(&u, &v).unwrap(), g.mul(&nu, &nv).unwrap());
                assert!(g.mul(&u, &g.inv(&u).unwrap()).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn klein_normal_form_injective() {
        let mut seen = HashSet::new();
        for b in -4..=4 {
            for a in -4..=4 {
                assert!(seen.insert(Group::Klein.normalize(&klein_word(b, a)).unwrap()));
            }
        }
    }

    proptest! {
        #[test]
        fn semidirect_associative(seed in 0u64..500) {
            let g = Group::sol();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_word(&mut rng, 3, 6);
            let v = random_word(&mut rng, 3, 6);
            let x = random_word(&mut rng, 3, 6);
            let left = g.mul(&g.mul(&u, &v).unwrap(), &x).unwrap();
            let right = g.mul(&u, &g.mul(&v, &x).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
