//! Exhaustive enumeration of sign assignments on a word ball that look like
//! positive cones from inside the ball.
//!
//! A ball cone on `B_r` gives each nonidentity element a sign so that
//! `sign(w⁻¹) = −sign(w)` and `u, v > 1 ⇒ uv > 1` whenever `uv ∈ B_r`. The
//! search is a backtracking solver over one boolean per inverse pair with
//! unit propagation on the closure clauses.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cone::{Sign, SignOracle};
use crate::error::{Error, Limits, Result};
use crate::group::Group;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BallCone {
    pub radius: usize,
    /// Nonidentity elements of `B_r` in shortlex order with their signs.
    pub entries: Vec<(Word, Sign)>,
}

impl BallCone {
    /// The restriction of a sign oracle to `B_r`.
    pub fn restrict<O: SignOracle + ?Sized>(o: &O, r: usize) -> Result<BallCone> {
        let entries = o
            .group()
            .ball(r)?
            .into_iter()
            .skip(1)
            .map(|w| o.sign(&w).map(|s| (w, s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(BallCone { radius: r, entries })
    }

    pub fn sign(&self, w: &Word) -> Option<Sign> {
        self.entries.iter().find(|(x, _)| x == w).map(|(_, s)| *s)
    }

    /// Restriction to a smaller ball.
    pub fn shrink(&self, r: usize) -> BallCone {
        BallCone {
            radius: r.min(self.radius),
            entries: self.entries.iter().filter(|(w, _)| w.len() <= r as u64).cloned().collect(),
        }
    }

    pub fn to_json(&self, group: &Group) -> Value {
        let signs: Vec<Value> =
            self.entries.iter().map(|(w, s)| json!([group.display_word(w), s.symbol()])).collect();
        json!({ "radius": self.radius, "signs": signs })
    }
}

/// `(var, value)`: the literal "variable `var` takes `value`".
type Lit = (usize, bool);

struct Problem {
    elems: Vec<Word>,
    index: HashMap<Word, usize>,
    /// For each element, its variable and whether the element is the
    /// variable's representative (positive exactly when the variable is true).
    var_of: Vec<(usize, bool)>,
    nvars: usize,
    clauses: Vec<[Lit; 3]>,
    occ: Vec<Vec<usize>>,
}

impl Problem {
    fn new(group: &Group, r: usize, limits: &Limits) -> Result<Problem> {
        let ball = group.ball_with_cap(r, limits.ball_cap)?;
        let elems: Vec<Word> = ball.into_iter().skip(1).collect();
        if elems.len() > limits.census_cap {
            return Err(Error::ResourceLimit { what: "census ball", size: elems.len(), cap: limits.census_cap });
        }
        let index: HashMap<Word, usize> = elems.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut var_of = vec![(usize::MAX, true); elems.len()];
        let mut nvars = 0;
        for (i, w) in elems.iter().enumerate() {
            if var_of[i].0 != usize::MAX {
                continue;
            }
            let j = index[&group.inv(w)?];
            if j == i {
                return Err(Error::InvalidCone(format!("{} has order two, so the group has no cones", group.display_word(w))));
            }
            var_of[i] = (nvars, true);
            var_of[j] = (nvars, false);
            nvars += 1;
        }
        let mut clauses = Vec::new();
        for (i, u) in elems.iter().enumerate() {
            for (j, v) in elems.iter().enumerate() {
                let uv = group.mul(u, v)?;
                if let Some(&k) = index.get(&uv) {
                    let neg = |e: usize| (var_of[e].0, !var_of[e].1);
                    let pos = |e: usize| (var_of[e].0, var_of[e].1);
                    clauses.push([neg(i), neg(j), pos(k)]);
                }
            }
        }
        let mut occ = vec![Vec::new(); nvars];
        for (c, clause) in clauses.iter().enumerate() {
            for &(v, _) in clause {
                if occ[v].last() != Some(&c) {
                    occ[v].push(c);
                }
            }
        }
        Ok(Problem { elems, index, var_of, nvars, clauses, occ })
    }

    fn decode(&self, r: usize, assign: &[Option<bool>]) -> BallCone {
        let entries = self
            .elems
            .iter()
            .zip(&self.var_of)
            .map(|(w, &(v, rep))| {
                let positive = assign[v] == Some(rep);
                (w.clone(), if positive { Sign::Positive } else { Sign::Negative })
            })
            .collect();
        BallCone { radius: r, entries }
    }
}

struct Solver<'a> {
    p: &'a Problem,
    assign: Vec<Option<bool>>,
    trail: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(p: &'a Problem) -> Self {
        Solver { p, assign: vec![None; p.nvars], trail: Vec::new() }
    }

    fn lit_value(&self, (v, val): Lit) -> Option<bool> {
        self.assign[v].map(|x| x == val)
    }

    /// Assigns and propagates; false on conflict (the trail is left for the
    /// caller to undo).
    fn assign_and_propagate(&mut self, (v, val): Lit) -> bool {
        match self.assign[v] {
            Some(x) => return x == val,
            None => {
                self.assign[v] = Some(val);
                self.trail.push(v);
            }
        }
        let mut head = self.trail.len() - 1;
        while head < self.trail.len() {
            let var = self.trail[head];
            head += 1;
            for &c in &self.p.occ[var] {
                let clause = self.p.clauses[c];
                let mut open = None;
                let mut n_open = 0;
                let mut sat = false;
                for lit in clause {
                    match self.lit_value(lit) {
                        Some(true) => {
                            sat = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            if open != Some(lit) {
                                n_open += 1;
                            }
                            open = Some(lit);
                        }
                    }
                }
                if sat {
                    continue;
                }
                match n_open {
                    0 => return false,
                    1 => {
                        let (ov, oval) = open.expect("one open literal");
                        if self.assign[ov].is_none() {
                            self.assign[ov] = Some(oval);
                            self.trail.push(ov);
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().expect("trail longer than len");
            self.assign[v] = None;
        }
    }

    /// Depth-first search, `+` before `−`, first unassigned variable in
    /// shortlex order. `found` returns false to stop the search.
    fn search(&mut self, found: &mut dyn FnMut(&[Option<bool>]) -> Result<bool>) -> Result<bool> {
        let Some(v) = (0..self.p.nvars).find(|&v| self.assign[v].is_none()) else {
            return found(&self.assign);
        };
        for val in [true, false] {
            let mark = self.trail.len();
            if self.assign_and_propagate((v, val)) && !self.search(found)? {
                self.undo(mark);
                return Ok(false);
            }
            self.undo(mark);
        }
        Ok(true)
    }
}

/// All ball cones on `B_r`, in lexicographic order of their sign vectors
/// (`+` before `−`).
pub fn enumerate_ball_cones(group: &Group, r: usize, limits: &Limits) -> Result<Vec<BallCone>> {
    let p = Problem::new(group, r, limits)?;
    let mut out = Vec::new();
    let mut solver = Solver::new(&p);
    let cap = limits.list_cap;
    solver.search(&mut |assign| {
        out.push(p.decode(r, assign));
        if out.len() > cap {
            return Err(Error::ResourceLimit { what: "ball cone list", size: out.len(), cap });
        }
        Ok(true)
    })?;
    Ok(out)
}

fn extends(p: &Problem, cone: &BallCone) -> Result<bool> {
    let mut solver = Solver::new(p);
    for (w, s) in &cone.entries {
        let Some(&e) = p.index.get(w) else {
            return Err(Error::ContextMismatch(format!("{w} is not in the target ball")));
        };
        let (v, rep) = p.var_of[e];
        if !solver.assign_and_propagate((v, (*s == Sign::Positive) == rep)) {
            return Ok(false);
        }
    }
    let mut any = false;
    solver.search(&mut |_| {
        any = true;
        Ok(false)
    })?;
    Ok(any)
}

/// The ball cones that extend to some ball cone on `B_{r'}`, order preserved.
pub fn extendable_filter(group: &Group, cones: &[BallCone], target: usize, limits: &Limits) -> Result<Vec<BallCone>> {
    if cones.iter().all(|c| c.radius >= target) {
        return Ok(cones.to_vec());
    }
    let p = Problem::new(group, target, limits)?;
    let keep = cones.par_iter().map(|c| extends(&p, c)).collect::<Result<Vec<_>>>()?;
    Ok(cones.iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c.clone()).collect())
}

/// `count:sha256` of the canonical serialization of a list of ball cones.
pub fn digest(group: &Group, cones: &[BallCone]) -> String {
    let list: Vec<Value> = cones.iter().map(|c| c.to_json(group)).collect();
    let text = serde_json::to_string(&list).expect("json values serialize");
    format!("{}:{}", cones.len(), hex::encode(Sha256::digest(text.as_bytes())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{
        check_cone_axioms_on_ball, dynamical_cone, integer_cone, klein_cones, slope_cone, AxiomReport, Variant,
    };

    fn limits() -> Limits {
        Limits::default()
    }

    /// Brute force over all `2^pairs` antisymmetric assignments.
    fn brute_force(group: &Group, r: usize) -> Vec<BallCone> {
        let ball: Vec<Word> = group.ball(r).unwrap().into_iter().skip(1).collect();
        let mut reps = Vec::new();
        for w in &ball {
            let wi = group.inv(w).unwrap();
            if !reps.contains(&wi) {
                reps.push(w.clone());
            }
        }
        let mut out = Vec::new();
        for mask in 0u64..(1 << reps.len()) {
            let sign_of = |w: &Word| -> Sign {
                if let Some(i) = reps.iter().position(|x| x == w) {
                    if mask >> (reps.len() - 1 - i) & 1 == 0 { Sign::Positive } else { Sign::Negative }
                } else {
                    let i = reps.iter().position(|x| *x == group.inv(w).unwrap()).unwrap();
                    if mask >> (reps.len() - 1 - i) & 1 == 0 { Sign::Negative } else { Sign::Positive }
                }
            };
            let entries: Vec<(Word, Sign)> = ball.iter().map(|w| (w.clone(), sign_of(w))).collect();
            let ok = ball.iter().all(|u| {
                ball.iter().all(|v| {
                    let uv = group.mul(u, v).unwrap();
                    !(sign_of(u) == Sign::Positive && sign_of(v) == Sign::Positive)
                        || uv.is_identity()
                        || !ball.contains(&uv)
                        || sign_of(&uv) == Sign::Positive
                })
            });
            if ok {
                out.push(BallCone { radius: r, entries });
            }
        }
        out
    }

    #[test]
    fn integers() {
        let cones = enumerate_ball_cones(&Group::zpow(1), 3, &limits()).unwrap();
        assert_eq!(cones.len(), 2);
        assert_eq!(cones[0], BallCone::restrict(&integer_cone(Sign::Positive), 3).unwrap());
        assert_eq!(cones[1], BallCone::restrict(&integer_cone(Sign::Negative), 3).unwrap());
    }

    #[test]
    fn matches_brute_force() {
        for (g, r) in [(Group::zpow(2), 1), (Group::zpow(2), 2), (Group::Klein, 1), (Group::free(2), 1)] {
            let mut found = enumerate_ball_cones(&g, r, &limits()).unwrap();
            let mut brute = brute_force(&g, r);
            assert_eq!(found.len(), brute.len(), "{g:?} r={r}");
            found.sort_by_key(|c| c.entries.iter().map(|(_, s)| *s).collect::<Vec<_>>());
            brute.sort_by_key(|c| c.entries.iter().map(|(_, s)| *s).collect::<Vec<_>>());
            assert_eq!(found, brute);
        }
    }

    #[test]
    fn output_is_in_sign_vector_order() {
        let cones = enumerate_ball_cones(&Group::Klein, 2, &limits()).unwrap();
        let keys: Vec<Vec<Sign>> = cones.iter().map(|c| c.entries.iter().map(|(_, s)| *s).collect()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn genuine_cones_appear() {
        let klein = enumerate_ball_cones(&Group::Klein, 2, &limits()).unwrap();
        for c in klein_cones() {
            assert!(klein.contains(&BallCone::restrict(&c, 2).unwrap()));
        }
        let z2 = enumerate_ball_cones(&Group::zpow(2), 2, &limits()).unwrap();
        for v in Variant::ALL {
            for a in [[1, 0], [1, 2], [-3, 1]] {
                assert!(z2.contains(&BallCone::restrict(&slope_cone(a, v).unwrap(), 2).unwrap()));
            }
        }
        let f2 = enumerate_ball_cones(&Group::free(2), 1, &limits()).unwrap();
        assert!(f2.contains(&BallCone::restrict(&dynamical_cone(), 1).unwrap()));
    }

    #[test]
    fn every_ball_cone_passes_axioms() {
        struct Table<'a>(&'a BallCone, Group);
        impl SignOracle for Table<'_> {
            fn group(&self) -> Group {
                self.1.clone()
            }
            fn sign(&self, w: &Word) -> Result<Sign> {
                self.0.sign(w).ok_or(Error::NoSign)
            }
        }
        for c in enumerate_ball_cones(&Group::Klein, 2, &limits()).unwrap() {
            let t = Table(&c, Group::Klein);
            // closure is only required inside the ball
            let ball = Group::Klein.ball(2).unwrap();
            for u in ball.iter().skip(1) {
                for v in ball.iter().skip(1) {
                    let uv = Group::Klein.mul(u, v).unwrap();
                    if ball.contains(&uv) && !uv.is_identity() && t.sign(u).unwrap() == Sign::Positive && t.sign(v).unwrap() == Sign::Positive {
                        assert_eq!(t.sign(&uv).unwrap(), Sign::Positive);
                    }
                }
            }
        }
        assert_eq!(
            check_cone_axioms_on_ball(&klein_cones()[0], 2).unwrap(),
            AxiomReport::Pass { radius: 2 }
        );
    }

    #[test]
    fn filter_to_same_radius_is_identity() {
        let cones = enumerate_ball_cones(&Group::Klein, 2, &limits()).unwrap();
        assert_eq!(extendable_filter(&Group::Klein, &cones, 2, &limits()).unwrap(), cones);
    }

    #[test]
    fn filter_is_monotone() {
        let g = Group::zpow(2);
        let cones = enumerate_ball_cones(&g, 1, &limits()).unwrap();
        let at3 = extendable_filter(&g, &cones, 3, &limits()).unwrap();
        let at4 = extendable_filter(&g, &cones, 4, &limits()).unwrap();
        assert!(at4.iter().all(|c| at3.contains(c)));
    }

    #[test]
    fn cap_is_enforced() {
        let tight = Limits { census_cap: 10, ..Limits::default() };
        assert!(matches!(enumerate_ball_cones(&Group::free(2), 2, &tight), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn digest_is_stable() {
        let cones = enumerate_ball_cones(&Group::zpow(1), 2, &limits()).unwrap();
        let d = digest(&Group::zpow(1), &cones);
        assert!(d.starts_with("2:"));
        assert_eq!(d, digest(&Group::zpow(1), &cones));
    }
}
