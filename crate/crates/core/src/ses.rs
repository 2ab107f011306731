//! Short exact sequences `1 → K → G → H → 1` with explicit set-theoretic
//! sections, and subgroup embeddings given by generator images.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{sol_word, zvec_word, Group, KLEIN_X, KLEIN_Y};
use crate::surd::IntMatrix2;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ses {
    /// `K → K × H → H`, kernel first.
    DirectFactor { kernel: Group, quotient: Group },
    /// `Z² → Z² ⋊_A Z → Z`, section `k ↦ t^k`.
    SemidirectOverZ { matrix: IntMatrix2 },
    /// `⟨y⟩ → Klein → Z`, quotient recording the `x`-exponent, section `a ↦ x^a`.
    KleinOverZ,
}

impl Ses {
    pub fn direct(kernel: Group, quotient: Group) -> Self {
        Ses::DirectFactor { kernel, quotient }
    }

    pub fn sol() -> Self {
        Ses::SemidirectOverZ { matrix: IntMatrix2::new(2, 1, 1, 1) }
    }

    pub fn kernel(&self) -> Group {
        match self {
            Ses::DirectFactor { kernel, .. } => kernel.clone(),
            Ses::SemidirectOverZ { .. } => Group::zpow(2),
            Ses::KleinOverZ => Group::zpow(1),
        }
    }

    pub fn total(&self) -> Group {
        match self {
            Ses::DirectFactor { kernel, quotient } => {
                Group::DirectProduct { factors: vec![kernel.clone(), quotient.clone()] }
            }
            Ses::SemidirectOverZ { matrix } => Group::Semidirect { matrix: *matrix },
            Ses::KleinOverZ => Group::Klein,
        }
    }

    pub fn quotient(&self) -> Group {
        match self {
            Ses::DirectFactor { quotient, .. } => quotient.clone(),
            Ses::SemidirectOverZ { .. } | Ses::KleinOverZ => Group::zpow(1),
        }
    }

    /// `i : K → G`.
    pub fn inject(&self, k: &Word) -> Result<Word> {
        let k = self.kernel().normalize(k)?;
        match self {
            Ses::DirectFactor { .. } => self.total().normalize(&k),
            Ses::SemidirectOverZ { .. } => {
                let v = Group::zpow(2).zvec(&k)?;
                Ok(sol_word([v[0], v[1]], 0))
            }
            Ses::KleinOverZ => {
                let n = Group::zpow(1).zvec(&k)?[0];
                Ok(Word::pow(KLEIN_Y, n))
            }
        }
    }

    /// `q : G → H`.
    pub fn project(&self, g: &Word) -> Result<Word> {
        let total = self.total();
        let g = total.normalize(g)?;
        match self {
            Ses::DirectFactor { kernel, quotient } => {
                let off = kernel.rank();
                let h = Word::from_pairs(
                    g.syllables().iter().filter(|s| s.gen >= off).map(|s| (s.gen - off, s.exp)),
                );
                quotient.normalize(&h)
            }
            Ses::SemidirectOverZ { .. } => Ok(zvec_word(&[total.sol_coords(&g)?.1])),
            Ses::KleinOverZ => Ok(zvec_word(&[total.klein_coords(&g)?.1])),
        }
    }

    /// `s : H → G`, a set-theoretic section of `q`.
    pub fn section(&self, h: &Word) -> Result<Word> {
        let h = self.quotient().normalize(h)?;
        match self {
            Ses::DirectFactor { kernel, .. } => {
                let off = kernel.rank();
                self.total().normalize(&h.map_gens(|g| g + off))
            }
            Ses::SemidirectOverZ { .. } => {
                let k = Group::zpow(1).zvec(&h)?[0];
                Ok(sol_word([0, 0], k))
            }
            Ses::KleinOverZ => {
                let a = Group::zpow(1).zvec(&h)?[0];
                Ok(Word::pow(KLEIN_X, a))
            }
        }
    }

    /// `g · s(q(g))⁻¹`, which lies in the image of `i`.
    pub fn kernel_part(&self, g: &Word) -> Result<Word> {
        let total = self.total();
        let s = self.section(&self.project(g)?)?;
        total.mul(g, &total.inv(&s)?)
    }

    /// The unique `k` with `i(k) = g`; errors unless `q(g) = 1`.
    pub fn kernel_preimage(&self, g: &Word) -> Result<Word> {
        let total = self.total();
        let g = total.normalize(g)?;
        if !self.project(&g)?.is_identity() {
            return Err(Error::BrokenSes("element does not lie in the kernel".into()));
        }
        let k = match self {
            Ses::DirectFactor { kernel, .. } => {
                if g.max_gen().is_some_and(|m| m >= kernel.rank()) {
                    return Err(Error::BrokenSes("kernel part has quotient letters".into()));
                }
                g.clone()
            }
            Ses::SemidirectOverZ { .. } => {
                let (v, _) = total.sol_coords(&g)?;
                zvec_word(&v)
            }
            Ses::KleinOverZ => {
                let (b, _) = total.klein_coords(&g)?;
                zvec_word(&[b])
            }
        };
        if self.inject(&k)? != g {
            return Err(Error::BrokenSes("injection does not reproduce the element".into()));
        }
        Ok(k)
    }

    /// Checks exactness and the section identities on balls of radius `r`.
    pub fn verify(&self, r: usize) -> Result<()> {
        let total = self.total();
        for k in self.kernel().ball(r)? {
            if !self.project(&self.inject(&k)?)?.is_identity() {
                return Err(Error::BrokenSes(format!("q(i(k)) != 1 for k = {k}")));
            }
        }
        for h in self.quotient().ball(r)? {
            if self.project(&self.section(&h)?)? != h {
                return Err(Error::BrokenSes(format!("q(s(h)) != h for h = {h}")));
            }
        }
        for g in total.ball(r)? {
            let k = self.kernel_part(&g)?;
            let pre = self.kernel_preimage(&k)?;
            let back = total.mul(&self.inject(&pre)?, &self.section(&self.project(&g)?)?)?;
            if back != g {
                return Err(Error::BrokenSes(format!("i(k) s(q(g)) != g for g = {g}")));
            }
        }
        Ok(())
    }

    /// The kernel inclusion as an [`Embedding`].
    pub fn kernel_embedding(&self) -> Result<Embedding> {
        let kernel = self.kernel();
        let images = (0..kernel.rank()).map(|g| self.inject(&Word::gen(g))).collect::<Result<Vec<_>>>()?;
        Ok(Embedding { sub: kernel, ambient: self.total(), images })
    }
}

/// A homomorphism `sub → ambient` determined by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub sub: Group,
    pub ambient: Group,
    pub images: Vec<Word>,
}

impl Embedding {
    /// Builds and spot-checks an embedding on the radius-2 ball of `sub`.
    pub fn new(sub: Group, ambient: Group, images: Vec<Word>) -> Result<Self> {
        if images.len() != sub.rank() {
            return Err(Error::InvalidEmbedding(format!(
                "{} generator images for a group of rank {}",
                images.len(),
                sub.rank()
            )));
        }
        let images = images.iter().map(|w| ambient.normalize(w)).collect::<Result<Vec<_>>>()?;
        let e = Embedding { sub, ambient, images };
        e.spot_check(2)?;
        Ok(e)
    }

    /// The cyclic subgroup `⟨g⟩ ≅ Z` of `ambient`.
    pub fn cyclic(ambient: Group, g: Word) -> Result<Self> {
        Embedding::new(Group::zpow(1), ambient, vec![g])
    }

    pub fn embed(&self, w: &Word) -> Result<Word> {
        let w = self.sub.normalize(w)?;
        let mut out = Word::identity();
        for s in w.syllables() {
            let img = &self.images[s.gen];
            let piece = if s.exp > 0 { img.clone() } else { img.formal_inverse() };
            for _ in 0..s.exp.unsigned_abs() {
                out = out.concat(&piece);
            }
        }
        self.ambient.normalize(&out)
    }

    /// Homomorphism and injectivity spot check on `B_r` of the subgroup.
    pub fn spot_check(&self, r: usize) -> Result<()> {
        let ball = self.sub.ball(r)?;
        for u in &ball {
            let eu = self.embed(u)?;
            if !u.is_identity() && eu.is_identity() {
                return Err(Error::InvalidEmbedding(format!("nontrivial {u} maps to the identity")));
            }
            for v in &ball {
                let lhs = self.embed(&self.sub.mul(u, v)?)?;
                let rhs = self.ambient.mul(&eu, &self.embed(v)?)?;
                if lhs != rhs {
                    return Err(Error::InvalidEmbedding(format!("not a homomorphism at ({u}, {v})")));
                }
            }
        }
        Ok(())
    }
}
