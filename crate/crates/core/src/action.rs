//! The conjugation action of a group on its cones, cone equality, orbits,
//! and the diagonal action on (kernel cone, quotient cone) pairs.

use crate::cone::{
    cone_sign, conjugate_raw, descriptor_compare, detect_slope, restrict_cone, Cone, DescriptorVerdict,
    SlopeDetection,
};
use crate::error::{Error, Result};
use crate::ses::{Embedding, Ses};
use crate::word::Word;

/// `g·P = gPg⁻¹`, simplified to a closed-form descriptor when one exists.
/// Its sign oracle is `sign(w) = sign_P(g⁻¹wg)`, so `h·(g·P) = (hg)·P`.
pub fn conj_cone(c: &Cone, g: &Word) -> Result<Cone> {
    Ok(conjugate_raw(c, g)?.simplify())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    DescriptorExact,
    Ball(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeEquality {
    Equal,
    Distinct { witness: Option<Word> },
    /// Signs agree on `B_r` but the descriptors cannot be compared.
    Unknown(usize),
}

pub fn cone_equal(c1: &Cone, c2: &Cone, strategy: Strategy) -> Result<ConeEquality> {
    let group = c1.group();
    if group != c2.group() {
        return Err(Error::ContextMismatch("cones live on different groups".into()));
    }
    let exact = descriptor_compare(c1, c2).map(|v| match v {
        DescriptorVerdict::Equal => ConeEquality::Equal,
        DescriptorVerdict::Distinct(witness) => ConeEquality::Distinct { witness },
    });
    match strategy {
        Strategy::DescriptorExact => Ok(exact.unwrap_or(ConeEquality::Unknown(0))),
        Strategy::Ball(r) => {
            for w in group.ball(r)?.iter().skip(1) {
                if cone_sign(c1, w)? != cone_sign(c2, w)? {
                    return Ok(ConeEquality::Distinct { witness: Some(w.clone()) });
                }
            }
            Ok(exact.unwrap_or(ConeEquality::Unknown(r)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitSize {
    Exact(usize),
    ExceededBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub representatives: Vec<Cone>,
    pub size: OrbitSize,
    pub strategy: Strategy,
    pub conjugators: Vec<Word>,
}

/// Breadth-first closure of `{c}` under conjugation by `conjugators`.
///
/// Only the listed conjugators are applied; for a finite orbit this is the
/// full orbit of the generated group. An `Unknown` comparison aborts with
/// [`Error::OrbitUndecided`] carrying the partial report.
pub fn orbit(c: &Cone, conjugators: &[Word], strategy: Strategy, max_size: usize) -> Result<OrbitReport> {
    let group = c.group();
    let conjugators = conjugators.iter().map(|g| group.normalize(g)).collect::<Result<Vec<_>>>()?;
    let mut reps = vec![c.simplify()];
    let mut next = 0;
    let report = |reps: &[Cone], size| OrbitReport {
        representatives: reps.to_vec(),
        size,
        strategy,
        conjugators: conjugators.clone(),
    };
    while next < reps.len() {
        let current = reps[next].clone();
        next += 1;
        for g in &conjugators {
            let image = conj_cone(&current, g)?;
            let mut seen = false;
            let mut undecided = false;
            for r in &reps {
                match cone_equal(&image, r, strategy)? {
                    ConeEquality::Equal => {
                        seen = true;
                        break;
                    }
                    ConeEquality::Unknown(_) => undecided = true,
                    ConeEquality::Distinct { .. } => {}
                }
            }
            if seen {
                continue;
            }
            if undecided {
                return Err(Error::OrbitUndecided(Box::new(report(&reps, OrbitSize::Exact(reps.len())))));
            }
            if reps.len() == max_size {
                return Ok(report(&reps, OrbitSize::ExceededBound));
            }
            reps.push(image);
        }
    }
    let n = reps.len();
    Ok(report(&reps, OrbitSize::Exact(n)))
}

/// `g·(P_K, P_H) = (g·P_K, q(g)·P_H)`, the kernel component moved by the
/// automorphism `k ↦ g⁻¹kg` of the kernel.
pub fn diag_conj(pair: (&Cone, &Cone), g: &Word, ses: &Ses) -> Result<(Cone, Cone)> {
    let (k, h) = pair;
    if k.group() != ses.kernel() || h.group() != ses.quotient() {
        return Err(Error::ContextMismatch("pair does not live on the kernel and quotient".into()));
    }
    let total = ses.total();
    let g = total.normalize(g)?;
    let k = Cone::KernelConjugate { ses: ses.clone(), base: Box::new(k.clone()), by: g.clone() }.simplify();
    let h = conj_cone(h, &ses.project(&g)?)?;
    Ok((k, h))
}

/// A map from kernel cones to quotient cones.
pub trait ConeMap {
    fn apply(&self, c: &Cone) -> Result<Cone>;
}

/// `θ ≡ P`.
pub struct ConstantMap(pub Cone);

impl ConeMap for ConstantMap {
    fn apply(&self, _: &Cone) -> Result<Cone> {
        Ok(self.0.clone())
    }
}

/// `θ(P) = P`, for sequences whose kernel and quotient coincide.
pub struct IdentityMap;

impl ConeMap for IdentityMap {
    fn apply(&self, c: &Cone) -> Result<Cone> {
        Ok(c.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivarianceReport {
    Pass { samples: usize, radius: usize },
    /// `θ(g·P)` and `q(g)·θ(P)` disagree on `word`.
    Witness { g: Word, cone: Box<Cone>, word: Option<Word> },
}

/// Checks `θ(g·P) = q(g)·θ(P)` on `B_r` of the quotient for each sample.
pub fn equivariance_check(
    theta: &dyn ConeMap,
    ses: &Ses,
    samples: &[(Word, Cone)],
    r: usize,
) -> Result<EquivarianceReport> {
    for (g, p) in samples {
        let (gp, _) = diag_conj((p, &theta.apply(p)?), g, ses)?;
        let lhs = theta.apply(&gp)?;
        let rhs = conj_cone(&theta.apply(p)?, &ses.project(g)?)?;
        if let ConeEquality::Distinct { witness } = cone_equal(&lhs, &rhs, Strategy::Ball(r))? {
            return Ok(EquivarianceReport::Witness { g: g.clone(), cone: Box::new(p.clone()), word: witness });
        }
    }
    Ok(EquivarianceReport::Pass { samples: samples.len(), radius: r })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedSample {
    pub conjugator: Word,
    pub cone: Cone,
    pub detection: SlopeDetection,
}

/// Restrictions of `g·c` to a `Z²` subgroup for every product `g` of one to
/// `k` conjugators, deduplicated by exact detected slope and variant.
pub fn restricted_orbit_sample(
    c: &Cone,
    embedding: &Embedding,
    conjugators: &[Word],
    k: usize,
) -> Result<Vec<RestrictedSample>> {
    let group = c.group();
    let mut words: Vec<Word> = Vec::new();
    let mut layer = vec![Word::identity()];
    for _ in 0..k {
        let mut grown = Vec::new();
        for w in &layer {
            for g in conjugators {
                grown.push(w.concat(g));
            }
        }
        words.extend(grown.iter().cloned());
        layer = grown;
    }
    let mut out: Vec<RestrictedSample> = Vec::new();
    for w in words {
        let g = group.normalize(&w)?;
        let cone = restrict_cone(&conj_cone(c, &g)?, embedding)?;
        let detection = detect_slope(&cone, 4)?;
        let exact = !matches!(detection, SlopeDetection::Candidate { .. });
        if exact && out.iter().any(|s| s.detection == detection) {
            continue;
        }
        out.push(RestrictedSample { conjugator: g, cone, detection });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{
        dynamical_cone, integer_cone, klein_cones, lex_cone, slope_cone, Sign, Slope, Variant,
    };
    use crate::group::{sol_word, zvec_word, Group, KLEIN_X, KLEIN_Y, SOL_T};

    fn sol_lex() -> Cone {
        lex_cone(Ses::sol(), slope_cone([1, 0], Variant::PlusPlus).unwrap(), integer_cone(Sign::Positive)).unwrap()
    }

    #[test]
    fn klein_conjugation() {
        let pp = Cone::Klein { ex: Sign::Positive, ey: Sign::Positive };
        assert_eq!(conj_cone(&pp, &Word::gen(KLEIN_X)).unwrap(), Cone::Klein { ex: Sign::Positive, ey: Sign::Negative });
        assert_eq!(conj_cone(&pp, &Word::gen(KLEIN_Y)).unwrap(), pp);
    }

    #[test]
    fn equality_examples() {
        let c = slope_cone([1, 0], Variant::PlusPlus).unwrap();
        assert_eq!(cone_equal(&c, &c, Strategy::DescriptorExact).unwrap(), ConeEquality::Equal);
        let k = klein_cones();
        assert_eq!(
            cone_equal(&k[0], &k[1], Strategy::DescriptorExact).unwrap(),
            ConeEquality::Distinct { witness: Some(Word::gen(KLEIN_Y)) }
        );
        let d = dynamical_cone();
        let da = conjugate_raw(&d, &Word::gen(0)).unwrap();
        match cone_equal(&d, &da, Strategy::Ball(4)).unwrap() {
            ConeEquality::Distinct { witness: Some(w) } => {
                assert_ne!(cone_sign(&d, &w).unwrap(), cone_sign(&da, &w).unwrap())
            }
            ConeEquality::Unknown(4) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conjugation_by_identity_and_composition() {
        let lex = sol_lex();
        let g = sol_word([1, -1], 1);
        let h = sol_word([0, 2], -1);
        let sol = Group::sol();
        let lhs = conj_cone(&conj_cone(&lex, &g).unwrap(), &h).unwrap();
        let rhs = conjugate_raw(&lex, &sol.mul(&h, &g).unwrap()).unwrap();
        for w in sol.ball(3).unwrap().iter().skip(1) {
            assert_eq!(cone_sign(&lhs, w).unwrap(), cone_sign(&rhs, w).unwrap());
        }
        assert_eq!(conj_cone(&lex, &Word::identity()).unwrap(), lex);
    }

    #[test]
    fn klein_orbit() {
        let k = klein_cones();
        let rep = orbit(&k[0], &[Word::gen(KLEIN_X), Word::gen(KLEIN_Y)], Strategy::DescriptorExact, 10).unwrap();
        assert_eq!(rep.size, OrbitSize::Exact(2));
        assert_eq!(rep.representatives, vec![k[0].clone(), k[1].clone()]);
    }

    #[test]
    fn abelian_orbit_is_trivial() {
        let c = slope_cone([2, 3], Variant::MinusPlus).unwrap();
        let rep = orbit(&c, &[Word::gen(0), Word::gen(1)], Strategy::Ball(3), 10).unwrap();
        assert_eq!(rep.size, OrbitSize::Exact(1));
    }

    #[test]
    fn sol_orbit_exceeds_bound() {
        let rep = orbit(&sol_lex(), &[Word::gen(SOL_T)], Strategy::DescriptorExact, 6).unwrap();
        assert_eq!(rep.size, OrbitSize::ExceededBound);
        assert_eq!(rep.representatives.len(), 6);
    }

    #[test]
    fn dynamical_orbit_is_undecided_or_distinct() {
        match orbit(&dynamical_cone(), &[Word::gen(0)], Strategy::Ball(2), 3) {
            Err(Error::OrbitUndecided(partial)) => assert!(!partial.representatives.is_empty()),
            Ok(rep) => assert!(rep.representatives.len() <= 3),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn diag_conj_examples() {
        let ses = Ses::sol();
        let k = slope_cone([1, 0], Variant::PlusPlus).unwrap();
        let h = integer_cone(Sign::Positive);
        let (k2, h2) = diag_conj((&k, &h), &Word::gen(SOL_T), &ses).unwrap();
        assert_eq!(h2, h);
        // a ↦ (A⁻¹)ᵀ a with A⁻¹ = [[1,−1],[−1,2]]
        assert_eq!(k2, slope_cone([1, -1], Variant::PlusPlus).unwrap());
        assert_eq!(diag_conj((&k, &h), &Word::identity(), &ses).unwrap(), (k.clone(), h.clone()));

        let dp = Ses::direct(Group::zpow(1), Group::free(2));
        let (k3, _) = diag_conj((&integer_cone(Sign::Positive), &dynamical_cone()), &Word::gen(1), &dp).unwrap();
        assert_eq!(k3, integer_cone(Sign::Positive));
    }

    #[test]
    fn lex_diag_compatibility() {
        let ses = Ses::sol();
        let k = slope_cone([2, -1], Variant::MinusPlus).unwrap();
        let h = integer_cone(Sign::Negative);
        let lex = lex_cone(ses.clone(), k.clone(), h.clone()).unwrap();
        let sol = Group::sol();
        for g in [sol_word([1, 2], 1), sol_word([0, -1], -2), Word::gen(SOL_T)] {
            let (k2, h2) = diag_conj((&k, &h), &g, &ses).unwrap();
            let lhs = lex_cone(ses.clone(), k2, h2).unwrap();
            let rhs = conjugate_raw(&lex, &g).unwrap();
            for w in sol.ball(3).unwrap().iter().skip(1) {
                assert_eq!(cone_sign(&lhs, w).unwrap(), cone_sign(&rhs, w).unwrap());
            }
        }
    }

    #[test]
    fn equivariance_examples() {
        let ses = Ses::sol();
        let k = slope_cone([1, 0], Variant::PlusPlus).unwrap();
        let samples = vec![(Word::gen(SOL_T), k.clone()), (sol_word([1, 1], 2), k.clone())];
        let theta = ConstantMap(integer_cone(Sign::Positive));
        assert!(matches!(equivariance_check(&theta, &ses, &samples, 3).unwrap(), EquivarianceReport::Pass { .. }));

        let ses = Ses::direct(Group::zpow(1), Group::Klein);
        let theta = ConstantMap(klein_cones()[0].clone());
        let x = Word::gen(1 + KLEIN_X);
        let samples = vec![(x, integer_cone(Sign::Positive))];
        match equivariance_check(&theta, &ses, &samples, 3).unwrap() {
            EquivarianceReport::Witness { word, .. } => assert_eq!(word, Some(Word::gen(KLEIN_Y))),
            other => panic!("{other:?}"),
        }

        let ses = Ses::direct(Group::zpow(2), Group::zpow(2));
        let samples = vec![(Word::gen(0), slope_cone([1, 1], Variant::PlusMinus).unwrap())];
        assert!(matches!(equivariance_check(&IdentityMap, &ses, &samples, 3).unwrap(), EquivarianceReport::Pass { .. }));
    }

    #[test]
    fn restricted_sample_examples() {
        let ses = Ses::sol();
        let emb = ses.kernel_embedding().unwrap();
        let out = restricted_orbit_sample(&sol_lex(), &emb, &[Word::gen(SOL_T)], 5).unwrap();
        assert_eq!(out.len(), 5);
        let a = IntMatrixCheck::sol();
        let mut prev = (0i64, 1i64);
        for s in &out {
            let SlopeDetection::Rational { slope, .. } = &s.detection else { panic!() };
            let next = a.apply(prev);
            assert_eq!(*slope, Slope::rational(next.0, next.1).unwrap());
            prev = next;
        }

        let z2 = Group::zpow(2);
        let id = Embedding::new(z2.clone(), z2, vec![zvec_word(&[1, 0]), zvec_word(&[0, 1])]).unwrap();
        let c = slope_cone([1, 2], Variant::PlusPlus).unwrap();
        let out = restricted_orbit_sample(&c, &id, &[Word::gen(0), Word::gen(1)], 2).unwrap();
        assert_eq!(out.len(), 1);

        // the kernel is abelian, so its own elements act trivially on it
        let out = restricted_orbit_sample(&sol_lex(), &emb, &[Word::gen(0), Word::gen(1)], 2).unwrap();
        assert_eq!(out.len(), 1);
    }

    struct IntMatrixCheck([[i64; 2]; 2]);

    impl IntMatrixCheck {
        fn sol() -> Self {
            IntMatrixCheck([[2, 1], [1, 1]])
        }
        fn apply(&self, v: (i64, i64)) -> (i64, i64) {
            (self.0[0][0] * v.0 + self.0[0][1] * v.1, self.0[1][0] * v.0 + self.0[1][1] * v.1)
        }
    }
}
