use std::cmp::Ordering;
use std::fmt;

/// One generator raised to a nonzero power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub gen: usize,
    pub exp: i64,
}

/// A freely reduced sequence of syllables.
///
/// A word carries no group of its own; it is interpreted (and normalized) by a
/// [`Group`](crate::group::Group). Adjacent syllables always have distinct
/// generators and the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn gen(gen: usize) -> Self {
        Word::pow(gen, 1)
    }

    pub fn pow(gen: usize, exp: i64) -> Self {
        Word::from_pairs([(gen, exp)])
    }

    /// Builds a word from `(generator, exponent)` pairs, freely reducing.
    pub fn from_pairs<I: IntoIterator<Item = (usize, i64)>>(pairs: I) -> Self {
        let mut w = Word::identity();
        for (gen, exp) in pairs {
            w.push(gen, exp);
        }
        w
    }

    /// Appends `gen^exp`, merging with the last syllable when possible.
    pub fn push(&mut self, gen: usize, exp: i64) {
        if exp == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.gen == gen => {
                last.exp += exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(Syllable { gen, exp }),
        }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, i.e. the sum of absolute exponents.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Letters as `(generator, inverted)` pairs.
    pub fn letters(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.syllables
            .iter()
            .flat_map(|s| std::iter::repeat_n((s.gen, s.exp < 0), s.exp.unsigned_abs() as usize))
    }

    /// Free concatenation; the result is freely reduced but not group-normalized.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for s in &other.syllables {
            w.push(s.gen, s.exp);
        }
        w
    }

    /// Formal inverse (reverse, negate exponents).
    pub fn formal_inverse(&self) -> Word {
        Word {
            syllables: self.syllables.iter().rev().map(|s| Syllable { gen: s.gen, exp: -s.exp }).collect(),
        }
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.syllables.iter().map(|s| s.gen).max()
    }

    /// Relabels generators through `f`.
    pub fn map_gens(&self, f: impl Fn(usize) -> usize) -> Word {
        Word::from_pairs(self.syllables.iter().map(|s| (f(s.gen), s.exp)))
    }

    /// Renders with the given generator names, e.g. `x y^-3`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_identity() {
            return "1".to_string();
        }
        self.syllables
            .iter()
            .map(|s| {
                let name = names.get(s.gen).cloned().unwrap_or_else(|| format!("g{}", s.gen));
                if s.exp == 1 {
                    name
                } else {
                    format!("{name}^{}", s.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Shortlex: shorter words first, then letterwise with `g < g⁻¹ < h < h⁻¹`
/// for generator ids `g < h`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters().cmp(other.letters()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_reduces() {
        let w = Word::from_pairs([(0, 1), (0, -1), (1, 1)]);
        assert_eq!(w, Word::gen(1));
        assert!(Word::from_pairs([(0, 2), (1, 0), (0, -2)]).is_identity());
    }

    #[test]
    fn shortlex_letter_order() {
        let a = Word::gen(0);
        let ai = Word::pow(0, -1);
        let b = Word::gen(1);
        let bi = Word::pow(1, -1);
        let mut v = vec![bi.clone(), Word::pow(0, 2), b.clone(), ai.clone(), a.clone(), Word::identity()];
        v.sort();
        assert_eq!(v, vec![Word::identity(), a, ai, b, bi, Word::pow(0, 2)]);
    }

    #[test]
    fn inverse_and_len() {
        let w = Word::from_pairs([(0, 2), (1, -3)]);
        assert_eq!(w.len(), 5);
        assert!(w.concat(&w.formal_inverse()).is_identity());
    }
}
