//! Stable length brackets: upper bounds from powers via Fekete's lemma,
//! lower bounds from the abelianization, and the kappa lower bound for
//! products of powers of distinct pure classes.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use crate::alphabet::WeightedAlphabet;
use crate::error::{Error, Result};
use crate::norm::cancellation_norm_capped;
use crate::word::{ConjugacyClassRep, Word};

/// A certified bracket lower <= tau(g) <= upper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableLengthEstimate {
    /// Exact samples (n, ||g^n|| / n).
    pub upper_sequence: Vec<(u32, Rational64)>,
    /// Minimum of the sampled sequence; tau is the infimum over all n.
    pub upper: Rational64,
    /// Certified lower bound.
    pub lower: Rational64,
    /// How the lower bound was obtained.
    pub method: LowerBoundMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBoundMethod {
    Abelianization,
    Injected,
}

/// Weighted L1 norm of the exponent-sum vector; the abelianization
/// quotient is 1-Lipschitz and its stable length is the norm itself.
pub fn abelianization_lower_bound(g: &Word, alphabet: &WeightedAlphabet) -> Rational64 {
    g.abelianize(alphabet.len())
        .iter()
        .enumerate()
        .map(|(i, &e)| alphabet.weight(i) * Rational64::from_integer(e.abs()))
        .sum()
}

/// Bracket tau(g) = lim ||g^n|| / n by sampling powers on a schedule.
pub fn stable_length_bounds(
    g: &Word,
    alphabet: &WeightedAlphabet,
    n_schedule: &[u32],
    cap: usize,
) -> Result<StableLengthEstimate> {
    if n_schedule.is_empty()
        || n_schedule[0] == 0
        || n_schedule.windows(2).any(|p| p[0] >= p[1])
    {
        return Err(Error::PreconditionViolated(
            "power schedule must be increasing and start at n >= 1".into(),
        ));
    }
    let g = g.reduce();
    if g.is_empty() {
        return Ok(StableLengthEstimate {
            upper_sequence: vec![],
            upper: Rational64::zero(),
            lower: Rational64::zero(),
            method: LowerBoundMethod::Abelianization,
        });
    }
    let mut upper_sequence = Vec::with_capacity(n_schedule.len());
    for &n in n_schedule {
        let power = g.pow(n as i64);
        let cert = cancellation_norm_capped(&power, alphabet, cap)?;
        upper_sequence.push((n, cert.value / Rational64::from_integer(n as i64)));
    }
    let upper = upper_sequence.iter().map(|&(_, v)| v).min().unwrap();
    let lower = abelianization_lower_bound(&g, alphabet);
    debug_assert!(lower <= upper);
    Ok(StableLengthEstimate {
        upper_sequence,
        upper,
        lower,
        method: LowerBoundMethod::Abelianization,
    })
}

/// kappa_i = |theta_i| / (9 l + |theta_i| (1 + |theta_i|) / tau_i) with
/// l the lcm of the |theta_i|; monotone increasing in tau_i, so a lower
/// bound on tau gives a valid kappa.
pub fn kappa(theta_len: usize, ell: i64, tau_lower: Rational64) -> Rational64 {
    let len = Rational64::from_integer(theta_len as i64);
    len / (Rational64::from_integer(9 * ell) + len * (Rational64::from_integer(1) + len) / tau_lower)
}

/// Certified strict lower bound on ||theta_1^{n_1} ... theta_p^{n_p}||:
/// min_i |n_i| kappa_i, valid whenever adjacent classes differ and
/// |n_i| > 6 l / |theta_i|.
pub fn product_lower_bound(
    thetas: &[ConjugacyClassRep],
    exps: &[i64],
    tau_lower: &[Rational64],
) -> Result<Rational64> {
    if thetas.is_empty() || thetas.len() != exps.len() || thetas.len() != tau_lower.len() {
        return Err(Error::PreconditionViolated(
            "thetas, exponents and tau bounds must be non-empty and aligned".into(),
        ));
    }
    if thetas.iter().any(|t| t.is_empty()) {
        return Err(Error::PreconditionViolated("trivial theta".into()));
    }
    for pair in thetas.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::PreconditionViolated("adjacent equal theta classes".into()));
        }
    }
    for &tau in tau_lower {
        if tau <= Rational64::zero() {
            return Err(Error::PreconditionViolated("tau lower bound must be positive".into()));
        }
    }
    let ell = thetas.iter().fold(1i64, |acc, t| acc.lcm(&(t.len() as i64)));
    let mut bound: Option<Rational64> = None;
    for ((theta, &n), &tau) in thetas.iter().zip(exps).zip(tau_lower) {
        // |n_i| > 6 l / |theta_i|, i.e. |n_i| |theta_i| > 6 l
        if n.unsigned_abs() as i64 * theta.len() as i64 <= 6 * ell {
            return Err(Error::PreconditionViolated(format!(
                "exponent {n} too small for |theta| = {}, need |n| > {}",
                theta.len(),
                Rational64::new(6 * ell, theta.len() as i64)
            )));
        }
        let candidate = Rational64::from_integer(n.abs()) * kappa(theta.len(), ell, tau);
        bound = Some(match bound {
            Some(b) if b <= candidate => b,
            _ => candidate,
        });
    }
    Ok(bound.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;
    use crate::word::primitive_root;

    fn ab() -> WeightedAlphabet {
        WeightedAlphabet::unit(["a", "b"])
    }

    fn w(s: &str) -> Word {
        parse_word(s, &ab()).unwrap()
    }

    #[test]
    fn generator_bracket_collapses() {
        let est = stable_length_bounds(&w("a"), &ab(), &[1, 2, 4, 8], 3000).unwrap();
        assert_eq!(est.upper, Rational64::from_integer(1));
        assert_eq!(est.lower, Rational64::from_integer(1));
        for &(n, v) in &est.upper_sequence {
            assert_eq!(v, Rational64::from_integer(1), "at n = {n}");
        }
    }

    #[test]
    fn identity_bracket_is_zero() {
        let est = stable_length_bounds(&w("a a'"), &ab(), &[1, 2], 3000).unwrap();
        assert_eq!(est.upper, Rational64::zero());
        assert_eq!(est.lower, Rational64::zero());
    }

    #[test]
    fn commutator_lower_bound_is_zero() {
        let est =
            stable_length_bounds(&w("a b a' b'"), &ab(), &[1, 2, 4, 8], 3000).unwrap();
        assert_eq!(est.lower, Rational64::zero());
        assert!(est.upper > Rational64::zero());
        // running minimum along the schedule is non-increasing
        let mut running = est.upper_sequence[0].1;
        for &(_, v) in &est.upper_sequence {
            running = running.min(v);
            assert!(v >= est.upper);
        }
        assert_eq!(running, est.upper);
    }

    #[test]
    fn schedule_must_increase() {
        assert!(stable_length_bounds(&w("a"), &ab(), &[2, 2], 3000).is_err());
        assert!(stable_length_bounds(&w("a"), &ab(), &[0, 1], 3000).is_err());
    }

    #[test]
    fn kappa_instantiation() {
        // |theta| = 1, l = 1, tau = 1: kappa = 1/11
        assert_eq!(kappa(1, 1, Rational64::from_integer(1)), Rational64::new(1, 11));
    }

    #[test]
    fn product_bound_examples() {
        let (ta, _) = primitive_root(&w("a")).unwrap();
        let (tb, _) = primitive_root(&w("b")).unwrap();
        let ones = vec![Rational64::from_integer(1); 2];
        let thetas = vec![ta, tb];
        assert_eq!(
            product_lower_bound(&thetas, &[10, 10], &ones).unwrap(),
            Rational64::new(10, 11)
        );
        assert_eq!(
            product_lower_bound(&thetas, &[7, 100], &ones).unwrap(),
            Rational64::new(7, 11)
        );
        // exponent below the 6l/|theta| threshold
        assert!(product_lower_bound(&thetas, &[6, 10], &ones).is_err());
        // adjacent equal classes
        let thetas2 = vec![thetas[0].clone(), thetas[0].clone()];
        assert!(product_lower_bound(&thetas2, &[10, 10], &ones).is_err());
        // nonpositive tau
        assert!(product_lower_bound(&thetas, &[10, 10], &[Rational64::zero(); 2]).is_err());
    }

    #[test]
    fn product_bound_is_strictly_below_the_norm() {
        let (ta, _) = primitive_root(&w("a")).unwrap();
        let (tb, _) = primitive_root(&w("b")).unwrap();
        let bound = product_lower_bound(
            &[ta, tb],
            &[10, 10],
            &[Rational64::from_integer(1); 2],
        )
        .unwrap();
        let word = w("a^10 b^10");
        let norm = cancellation_norm_capped(&word, &ab(), 3000).unwrap().value;
        assert_eq!(norm, Rational64::from_integer(20));
        assert!(norm > bound);
    }
}
