//! Free-group words: reduction, cyclic reduction, primitive roots,
//! abelianization, zero-weight projection and the power maps.
//!
//! The letter order used for canonical forms is generator index ascending
//! with the positive letter before its inverse, extended lexicographically
//! to words.

use std::fmt;

use num_traits::Zero;

use crate::alphabet::WeightedAlphabet;
use crate::error::{Error, Result};

/// A single signed generator occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }

    /// Exponent contribution, +1 or -1.
    pub fn sign(self) -> i64 {
        if self.inverse { -1 } else { 1 }
    }
}

/// A word in the free group, not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// gen^exp as a word.
    pub fn power_of(generator: usize, exp: i64) -> Self {
        let letter = Letter::new(generator, exp < 0);
        Word { letters: vec![letter; exp.unsigned_abs() as usize] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// self^n, |n| copies of self or its inverse.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(self.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    /// Free reduction to the unique normal form.
    pub fn reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if stack.last().is_some_and(|&top| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    /// Reduction that also reports which input positions survive, in order.
    pub fn reduce_with_survivors(&self) -> (Word, Vec<usize>) {
        let mut stack: Vec<(Letter, usize)> = Vec::with_capacity(self.len());
        for (i, &l) in self.letters.iter().enumerate() {
            if stack.last().is_some_and(|&(top, _)| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push((l, i));
            }
        }
        let letters = stack.iter().map(|&(l, _)| l).collect();
        let survivors = stack.iter().map(|&(_, i)| i).collect();
        (Word { letters }, survivors)
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// The word with the given positions deleted (positions refer to `self`).
    pub fn delete_positions(&self, removed: &[usize]) -> Word {
        let mut mask = vec![false; self.len()];
        for &p in removed {
            mask[p] = true;
        }
        let letters = self
            .letters
            .iter()
            .enumerate()
            .filter(|(i, _)| !mask[*i])
            .map(|(_, &l)| l)
            .collect();
        Word { letters }
    }

    /// Write `self = conjugator * core * conjugator^-1` with `core`
    /// cyclically reduced.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let mut core = self.reduce().letters;
        let mut conjugator = Vec::new();
        while core.len() >= 2 && core.first().unwrap().cancels(*core.last().unwrap()) {
            conjugator.push(core.remove(0));
            core.pop();
        }
        (Word { letters: core }, Word { letters: conjugator })
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        if !self.is_reduced() {
            return false;
        }
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.len() == 1 || !f.cancels(l),
            _ => true,
        }
    }

    /// Exponent-sum vector indexed by generators.
    pub fn abelianize(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &l in &self.letters {
            v[l.generator] += l.sign();
        }
        v
    }

    /// Delete all letters of weight zero, then reduce.
    pub fn sharp_project(&self, alphabet: &WeightedAlphabet) -> Word {
        let letters = self
            .letters
            .iter()
            .filter(|l| !alphabet.weight(l.generator).is_zero())
            .copied()
            .collect();
        Word { letters }.reduce()
    }

    /// The endomorphism sending each generator a to a^d.
    pub fn psi_d(&self, d: i64) -> Word {
        let mut letters = Vec::with_capacity(self.len() * d.unsigned_abs() as usize);
        for &l in &self.letters {
            let rep = if d < 0 { l.inv() } else { l };
            for _ in 0..d.unsigned_abs() {
                letters.push(rep);
            }
        }
        Word { letters }.reduce()
    }

    pub fn rotated(&self, by: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let n = self.len();
        let letters = (0..n).map(|i| self.letters[(i + by) % n]).collect();
        Word { letters }
    }

    pub fn display(&self, alphabet: &WeightedAlphabet) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.len() {
            let l = self.letters[i];
            let mut run = 1usize;
            while i + run < self.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(alphabet.name(l.generator));
            match (l.inverse, run) {
                (false, 1) => {}
                (true, 1) => out.push('\''),
                (false, _) => out.push_str(&format!("^{run}")),
                (true, _) => out.push_str(&format!("^-{run}")),
            }
            i += run;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}{}", l.generator, if l.inverse { "'" } else { "" })?;
        }
        Ok(())
    }
}

/// Canonical representative of the conjugacy class of a pure cyclically
/// reduced element, up to inversion: the lexicographic minimum over all
/// rotations of the element and of its inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjugacyClassRep {
    theta: Word,
}

impl ConjugacyClassRep {
    pub fn word(&self) -> &Word {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

/// Minimal period of `w` as a cyclic word; divides `w.len()`.
fn cyclic_period(w: &Word) -> usize {
    let n = w.len();
    'period: for p in 1..=n {
        if n % p != 0 {
            continue;
        }
        for i in p..n {
            if w.letters[i] != w.letters[i - p] {
                continue 'period;
            }
        }
        return p;
    }
    n
}

/// Pure root of a nontrivial word: `w` is conjugate to `theta^k` with
/// `theta` the canonical pure representative and `k != 0` carrying the sign.
pub fn primitive_root(w: &Word) -> Result<(ConjugacyClassRep, i64)> {
    let (core, _) = w.cyclically_reduce();
    if core.is_empty() {
        return Err(Error::EmptyWord);
    }
    let p = cyclic_period(&core);
    let k = (core.len() / p) as i64;
    let root = Word::from_letters(core.letters[..p].to_vec());
    let inv = root.inverse();

    let mut best = root.rotated(0);
    let mut from_inverse = false;
    for i in 0..p {
        let cand = root.rotated(i);
        if cand < best {
            best = cand;
            from_inverse = false;
        }
        let cand = inv.rotated(i);
        if cand < best {
            best = cand;
            from_inverse = true;
        }
    }
    let k = if from_inverse { -k } else { k };
    Ok((ConjugacyClassRep { theta: best }, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn w(s: &str) -> Word {
        let ab = WeightedAlphabet::unit(["a", "b", "c"]);
        crate::parse::parse_word(s, &ab).unwrap()
    }

    #[test]
    fn reduce_basic() {
        assert_eq!(w("a a'").reduce(), Word::empty());
        assert_eq!(w("a b b' a").reduce(), w("a a"));
    }

    #[test]
    fn reduce_idempotent() {
        let word = w("a b b' a a' c");
        assert_eq!(word.reduce().reduce(), word.reduce());
    }

    #[test]
    fn survivors_spell_reduced_word() {
        let word = w("a b b' a a' c");
        let (red, surv) = word.reduce_with_survivors();
        let picked: Vec<Letter> = surv.iter().map(|&i| word.letters[i]).collect();
        assert_eq!(picked, red.letters);
        assert_eq!(red, w("a c"));
    }

    #[test]
    fn cyclic_reduction() {
        let (core, conj) = w("b a b'").cyclically_reduce();
        assert_eq!(core, w("a"));
        assert_eq!(conj, w("b"));
        // conj * core * conj^-1 == original
        let back = conj.concat(&core).concat(&conj.inverse());
        assert_eq!(back.reduce(), w("b a b'").reduce());

        let (core, conj) = w("a b a b").cyclically_reduce();
        assert_eq!(core, w("a b a b"));
        assert!(conj.is_empty());
    }

    #[test]
    fn primitive_root_examples() {
        let (theta, k) = primitive_root(&w("a b a b a b")).unwrap();
        assert_eq!(theta.word(), &w("a b"));
        assert_eq!(k, 3);

        let (theta, k) = primitive_root(&w("b a b'")).unwrap();
        assert_eq!(theta.word(), &w("a"));
        assert_eq!(k, 1);

        // a^-6: canonical root is a, exponent carries the sign
        let (theta, k) = primitive_root(&w("a^-6")).unwrap();
        assert_eq!(theta.word(), &w("a"));
        assert_eq!(k, -6);

        assert_eq!(primitive_root(&w("a a'")).unwrap_err(), Error::EmptyWord);
    }

    #[test]
    fn primitive_root_conjugate_stability() {
        let g = w("a b a b");
        let (theta, _) = primitive_root(&g).unwrap();
        for h in ["b", "a b'", "c a", "b b a'"] {
            let h = w(h);
            let conj = h.concat(&g).concat(&h.inverse());
            let (t2, k2) = primitive_root(&conj).unwrap();
            assert_eq!(&theta, &t2);
            assert_eq!(k2, 2);
            let (t3, k3) = primitive_root(&conj.inverse()).unwrap();
            assert_eq!(&theta, &t3);
            assert_eq!(k3, -2);
        }
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(w("a b a' b'").abelianize(3), vec![0, 0, 0]);
        assert_eq!(w("a a a b'").abelianize(3), vec![3, -1, 0]);
    }

    #[test]
    fn sharp_projection() {
        use num_rational::Rational64;
        let al = WeightedAlphabet::new(vec![
            ("a".into(), Rational64::new(0, 1)),
            ("b".into(), Rational64::new(1, 1)),
        ])
        .unwrap();
        let word = crate::parse::parse_word("a b a", &al).unwrap();
        assert_eq!(word.sharp_project(&al), crate::parse::parse_word("b", &al).unwrap());
    }

    #[test]
    fn psi_d_examples() {
        assert_eq!(w("a b").psi_d(3), w("a^3 b^3"));
        assert_eq!(w("a b").psi_d(0), Word::empty());
        assert_eq!(w("a b'").psi_d(-2), w("a^-2 b^2"));
    }
}
