//! The rational points of the real free group: words whose syllables carry
//! exact rational exponents, the scaling maps, truncation to integer words,
//! exact norms with real-valued cancellation witnesses, limit sampling and
//! geodesics.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::alphabet::WeightedAlphabet;
use crate::error::{Error, Result};
use crate::norm::{cancellation_norm_capped, DEFAULT_LENGTH_CAP};
use crate::word::Word;

/// A word with rational exponents, element of the rational free group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RealWord {
    syllables: Vec<(usize, Rational64)>,
}

/// `s` lies in the closed interval between 0 and `r`.
fn in_interval(s: Rational64, r: Rational64) -> bool {
    if r >= Rational64::zero() {
        s >= Rational64::zero() && s <= r
    } else {
        s >= r && s <= Rational64::zero()
    }
}

/// Round toward zero.
fn trunc(x: Rational64) -> i64 {
    x.numer() / x.denom()
}

impl RealWord {
    pub fn empty() -> Self {
        RealWord { syllables: Vec::new() }
    }

    pub fn from_syllables(syllables: Vec<(usize, Rational64)>) -> Self {
        RealWord { syllables }
    }

    /// Embed an integer word, one syllable per maximal letter run.
    pub fn from_word(w: &Word) -> Self {
        let mut syllables: Vec<(usize, Rational64)> = Vec::new();
        for &l in &w.letters {
            let e = Rational64::from_integer(l.sign());
            match syllables.last_mut() {
                Some((g, r)) if *g == l.generator => *r += e,
                _ => syllables.push((l.generator, e)),
            }
        }
        RealWord { syllables }
    }

    pub fn syllables(&self) -> &[(usize, Rational64)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Merge adjacent syllables of the same generator and drop zero
    /// exponents, to a fixpoint. The result is the unique normal form.
    pub fn normalize(&self) -> RealWord {
        let mut stack: Vec<(usize, Rational64)> = Vec::new();
        for &(g, r) in &self.syllables {
            if r.is_zero() {
                continue;
            }
            match stack.last_mut() {
                Some((top, acc)) if *top == g => {
                    *acc += r;
                    if acc.is_zero() {
                        stack.pop();
                    }
                }
                _ => stack.push((g, r)),
            }
        }
        RealWord { syllables: stack }
    }

    pub fn is_normalized(&self) -> bool {
        self.syllables.iter().all(|(_, r)| !r.is_zero())
            && self.syllables.windows(2).all(|w| w[0].0 != w[1].0)
    }

    pub fn inverse(&self) -> RealWord {
        RealWord {
            syllables: self.syllables.iter().rev().map(|&(g, r)| (g, -r)).collect(),
        }
    }

    pub fn concat(&self, other: &RealWord) -> RealWord {
        let mut syllables = self.syllables.clone();
        syllables.extend_from_slice(&other.syllables);
        RealWord { syllables }
    }

    /// The scaling endomorphism a(r) -> a(t r).
    pub fn psi_t(&self, t: Rational64) -> RealWord {
        RealWord {
            syllables: self.syllables.iter().map(|&(g, r)| (g, t * r)).collect(),
        }
        .normalize()
    }

    /// Truncation to an integer word: each exponent becomes trunc(t r),
    /// rounding toward zero. A monoid morphism on concatenation.
    pub fn truncate(&self, t: Rational64) -> Result<Word> {
        if t <= Rational64::zero() {
            return Err(Error::PreconditionViolated("truncation scale must be positive".into()));
        }
        let mut letters = Vec::new();
        for &(g, r) in &self.syllables {
            letters.extend_from_slice(&Word::power_of(g, trunc(t * r)).letters);
        }
        Ok(Word::from_letters(letters))
    }

    /// Least common denominator of the exponents.
    pub fn common_denominator(&self) -> i64 {
        self.syllables
            .iter()
            .fold(1i64, |acc, (_, r)| acc.lcm(r.denom()))
    }

    pub fn display(&self, alphabet: &WeightedAlphabet) -> String {
        if self.syllables.is_empty() {
            return "1".to_string();
        }
        self.syllables
            .iter()
            .map(|&(g, r)| format!("{}({})", alphabet.name(g), r))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Per-syllable cancellation amounts s_i with s_i between 0 and r_i, whose
/// removal leaves a trivial residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealCancellationWitness {
    pub amounts: Vec<Rational64>,
}

impl RealCancellationWitness {
    /// Check the witness against the normalized form of `w`: interval
    /// membership and triviality of the residual.
    pub fn verify(&self, w: &RealWord) -> Result<()> {
        let w = w.normalize();
        if self.amounts.len() != w.syllables.len() {
            return Err(Error::InvalidWitness("amount count mismatch".into()));
        }
        let mut residual = Vec::new();
        for (&s, &(g, r)) in self.amounts.iter().zip(&w.syllables) {
            if !in_interval(s, r) {
                return Err(Error::InvalidWitness(format!(
                    "amount {s} outside the interval of {r}"
                )));
            }
            residual.push((g, r - s));
        }
        if !RealWord::from_syllables(residual).normalize().is_empty() {
            return Err(Error::InvalidWitness("residual is not trivial".into()));
        }
        Ok(())
    }

    pub fn total_weight(&self, w: &RealWord, alphabet: &WeightedAlphabet) -> Rational64 {
        let w = w.normalize();
        self.amounts
            .iter()
            .zip(&w.syllables)
            .map(|(&s, &(g, _))| alphabet.weight(g) * s.abs())
            .sum()
    }
}

/// An exact rational norm with a real cancellation witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealNormCertificate {
    pub value: Rational64,
    pub witness: RealCancellationWitness,
    /// Normalized form of the input the witness refers to.
    pub word: RealWord,
}

/// Exact norm of a rational word. With m the common denominator of the
/// exponents, the limit (1/t)||w<t>|| is constant along t = mN, so the
/// value is (1/m) times the cancellation norm of the truncation at m.
/// The witness divides the integer witness multiplicities by m.
pub fn rational_norm_exact(
    w: &RealWord,
    alphabet: &WeightedAlphabet,
) -> Result<RealNormCertificate> {
    rational_norm_exact_capped(w, alphabet, DEFAULT_LENGTH_CAP)
}

pub fn rational_norm_exact_capped(
    w: &RealWord,
    alphabet: &WeightedAlphabet,
    cap: usize,
) -> Result<RealNormCertificate> {
    let nw = w.normalize();
    for &(g, _) in nw.syllables() {
        if g >= alphabet.len() {
            return Err(Error::UnknownGenerator(format!("#{g}")));
        }
    }
    let m = nw.common_denominator();
    let m_rat = Rational64::from_integer(m);

    // Zero-weight syllables are cancelled in full at no cost; the DP runs
    // on the blocks of the positive-weight syllables only.
    let mut letters = Vec::new();
    let mut block_of_syllable: Vec<Option<(usize, usize)>> = Vec::new();
    for &(g, r) in nw.syllables() {
        if alphabet.weight(g).is_zero() {
            block_of_syllable.push(None);
        } else {
            let count = trunc(m_rat * r); // exact: m clears the denominator
            let start = letters.len();
            letters.extend_from_slice(&Word::power_of(g, count).letters);
            block_of_syllable.push(Some((start, letters.len())));
        }
    }
    let blocks = Word::from_letters(letters);
    let cert = cancellation_norm_capped(&blocks, alphabet, cap)?;

    let mut amounts = Vec::with_capacity(nw.syllables.len());
    for (&(_, r), block) in nw.syllables.iter().zip(&block_of_syllable) {
        match block {
            None => amounts.push(r),
            Some((start, end)) => {
                let removed =
                    cert.removed.iter().filter(|&&p| p >= *start && p < *end).count();
                let sign = if r.is_negative() { -1 } else { 1 };
                amounts.push(Rational64::new(sign * removed as i64, m));
            }
        }
    }
    let witness = RealCancellationWitness { amounts };
    let value = cert.value / m_rat;
    debug_assert!(witness.verify(&nw).is_ok());
    debug_assert_eq!(witness.total_weight(&nw, alphabet), value);
    Ok(RealNormCertificate { value, witness, word: nw })
}

/// One sample of the scaled truncation curve, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitSample {
    pub t: Rational64,
    pub value: Rational64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormLimitEstimate {
    pub samples: Vec<LimitSample>,
    /// The last sample.
    pub estimate: Rational64,
    /// max - min over the last three samples, an a-posteriori diagnostic.
    pub spread: Rational64,
}

/// Sample the Cauchy function t -> (1/t)||w<t>|| on a positive increasing
/// grid.
pub fn norm_limit_estimate(
    w: &RealWord,
    alphabet: &WeightedAlphabet,
    t_grid: &[Rational64],
    cap: usize,
) -> Result<NormLimitEstimate> {
    if t_grid.is_empty() {
        return Err(Error::PreconditionViolated("empty t grid".into()));
    }
    if t_grid[0] <= Rational64::zero() || t_grid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::PreconditionViolated(
            "t grid must be positive and increasing".into(),
        ));
    }
    let nw = w.normalize();
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let truncated = nw.truncate(t)?;
        let cert = cancellation_norm_capped(&truncated, alphabet, cap)?;
        samples.push(LimitSample { t, value: cert.value / t });
    }
    let tail = &samples[samples.len().saturating_sub(3)..];
    let max = tail.iter().map(|s| s.value).max().unwrap();
    let min = tail.iter().map(|s| s.value).min().unwrap();
    let estimate = samples.last().unwrap().value;
    Ok(NormLimitEstimate { samples, estimate, spread: max - min })
}

/// Certified upper bound on the norm distance of two words with the same
/// generator skeleton: the weighted sum of exponent gaps.
pub fn approximation_error_bound(
    w: &RealWord,
    other: &RealWord,
    alphabet: &WeightedAlphabet,
) -> Result<Rational64> {
    let a = w.normalize();
    let b = other.normalize();
    if a.syllables.len() != b.syllables.len()
        || a.syllables.iter().zip(&b.syllables).any(|(x, y)| x.0 != y.0)
    {
        return Err(Error::SkeletonMismatch);
    }
    Ok(a
        .syllables
        .iter()
        .zip(&b.syllables)
        .map(|(&(g, r), &(_, q))| alphabet.weight(g) * (r - q).abs())
        .sum())
}

/// Points of the geodesic alpha(t) = a_1(r_1 - s_1 t) ... a_n(r_n - s_n t)
/// from w (t = 0) to the identity (t = 1).
pub fn geodesic_sample(
    w: &RealWord,
    witness: &RealCancellationWitness,
    t_samples: &[Rational64],
) -> Result<Vec<RealWord>> {
    let nw = w.normalize();
    witness.verify(&nw)?;
    let mut points = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        if t < Rational64::zero() || t > Rational64::from_integer(1) {
            return Err(Error::PreconditionViolated("geodesic parameter outside [0,1]".into()));
        }
        let syllables = nw
            .syllables
            .iter()
            .zip(&witness.amounts)
            .map(|(&(g, r), &s)| (g, r - s * t))
            .collect();
        points.push(RealWord::from_syllables(syllables).normalize());
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_rational, parse_real_word};

    fn ab() -> WeightedAlphabet {
        WeightedAlphabet::unit(["a", "b"])
    }

    fn rw(s: &str) -> RealWord {
        parse_real_word(s, &ab()).unwrap()
    }

    fn q(s: &str) -> Rational64 {
        parse_rational(s).unwrap()
    }

    #[test]
    fn normalize_merges_and_drops() {
        assert_eq!(rw("a(1/2) a(1/2)").normalize(), rw("a(1)"));
        assert_eq!(rw("a(1) a(-1)").normalize(), RealWord::empty());
        assert_eq!(rw("a(1) b(0) a(2)").normalize(), rw("a(3)"));
    }

    #[test]
    fn psi_t_examples() {
        assert_eq!(rw("a(3/2)").psi_t(q("2")), rw("a(3)"));
        assert_eq!(rw("a(1) b(2)").psi_t(q("0")), RealWord::empty());
        let w = rw("a(5/3) b(-2) a(7)");
        assert_eq!(w.psi_t(q("3")).psi_t(q("1/3")), w.normalize());
    }

    #[test]
    fn truncate_rounds_toward_zero() {
        let w = rw("a(3/2) b(-2)");
        let t4 = w.truncate(q("4")).unwrap();
        assert_eq!(t4, crate::parse::parse_word("a^6 b^-8", &ab()).unwrap());
        let t3 = rw("a(3/2)").truncate(q("3")).unwrap();
        assert_eq!(t3, crate::parse::parse_word("a^4", &ab()).unwrap());
        let t3n = rw("a(-3/2)").truncate(q("3")).unwrap();
        assert_eq!(t3n, crate::parse::parse_word("a^-4", &ab()).unwrap());
        assert!(w.truncate(q("0")).is_err());
    }

    #[test]
    fn truncation_is_a_monoid_morphism() {
        let u = rw("a(3/2) b(-2)");
        let v = rw("b(1/3) a(7/2)");
        let t = q("5/2");
        assert_eq!(
            u.concat(&v).truncate(t).unwrap(),
            u.truncate(t).unwrap().concat(&v.truncate(t).unwrap())
        );
    }

    #[test]
    fn rational_norm_examples() {
        let cert = rational_norm_exact(&rw("a(1/2) b(1/2)"), &ab()).unwrap();
        assert_eq!(cert.value, q("1"));
        cert.witness.verify(&cert.word).unwrap();

        // a single syllable has norm |r| mu(a)
        let cert = rational_norm_exact(&rw("a(-7/3)"), &ab()).unwrap();
        assert_eq!(cert.value, q("7/3"));

        let cert = rational_norm_exact(&rw("a(1) a(-1)"), &ab()).unwrap();
        assert_eq!(cert.value, q("0"));
    }

    #[test]
    fn rational_norm_with_zero_weights() {
        use num_traits::Zero;
        let al = WeightedAlphabet::new(vec![
            ("a".into(), Rational64::zero()),
            ("b".into(), Rational64::from_integer(1)),
        ])
        .unwrap();
        let w = parse_real_word("a(5/2) b(1/2) a(-1/2)", &al).unwrap();
        let cert = rational_norm_exact(&w, &al).unwrap();
        assert_eq!(cert.value, q("1/2"));
        cert.witness.verify(&w).unwrap();
    }

    #[test]
    fn limit_estimate_constant_on_aligned_grid() {
        let w = rw("a(1/2) b(1/2)");
        let grid: Vec<Rational64> =
            (1..=5).map(|n| Rational64::from_integer(2 * n)).collect();
        let est = norm_limit_estimate(&w, &ab(), &grid, 3000).unwrap();
        assert!(est.samples.iter().all(|s| s.value == q("1")));
        assert_eq!(est.spread, q("0"));
    }

    #[test]
    fn limit_estimate_single_generator() {
        let w = rw("a(1)");
        let grid = vec![q("1"), q("3/2"), q("2"), q("7")];
        let est = norm_limit_estimate(&w, &ab(), &grid, 3000).unwrap();
        for s in &est.samples {
            assert!(s.value <= q("1"));
            assert_eq!(s.value, Rational64::from_integer(trunc(s.t)) / s.t);
        }
    }

    #[test]
    fn error_bound_examples() {
        let w = rw("a(1)");
        assert_eq!(approximation_error_bound(&w, &w, &ab()).unwrap(), q("0"));
        assert_eq!(
            approximation_error_bound(&w, &rw("a(3/2)"), &ab()).unwrap(),
            q("1/2")
        );
        assert!(matches!(
            approximation_error_bound(&w, &rw("b(1)"), &ab()),
            Err(Error::SkeletonMismatch)
        ));
    }

    #[test]
    fn geodesic_endpoints_and_midpoint() {
        let w = rw("a(1)");
        let witness = RealCancellationWitness { amounts: vec![q("1")] };
        let pts = geodesic_sample(&w, &witness, &[q("0"), q("1/2"), q("1")]).unwrap();
        assert_eq!(pts[0], w.normalize());
        assert_eq!(pts[1], rw("a(1/2)"));
        assert!(pts[2].is_empty());
        let d = rational_norm_exact(&pts[0].inverse().concat(&pts[1]), &ab())
            .unwrap()
            .value;
        assert_eq!(d, q("1/2"));
    }

    #[test]
    fn geodesic_rejects_bad_witness() {
        let w = rw("a(1) b(1)");
        let witness = RealCancellationWitness { amounts: vec![q("1"), q("0")] };
        assert!(matches!(
            geodesic_sample(&w, &witness, &[q("0")]),
            Err(Error::InvalidWitness(_))
        ));
    }
}
