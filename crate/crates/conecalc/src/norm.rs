//! The conjugation-invariant cancellation norm on a free group with a
//! weighted generating set.
//!
//! The norm of a word is the minimum total weight of a set of letters whose
//! removal leaves a word reducing to the identity. It is computed by an
//! interval dynamic program on the reduced word:
//!
//!   cost(i, j) = min( mu(a_i) + cost(i+1, j),
//!                     min over k in (i, j] with a_k = a_i^-1 of
//!                         cost(i+1, k-1) + cost(k+1, j) )
//!
//! with cost of the empty interval zero. O(n^3) time, O(n^2) space. The
//! brute-force subset search `norm_bruteforce` serves as an independent
//! oracle at small sizes.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use crate::alphabet::WeightedAlphabet;
use crate::error::{Error, Result};
use crate::word::Word;

pub const DEFAULT_BRUTEFORCE_LIMIT: usize = 14;
pub const DEFAULT_LENGTH_CAP: usize = 3000;

/// A norm value together with a witness cancellation sequence and the
/// reduction trace showing the residual is trivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormCertificate {
    /// The norm, an exact rational.
    pub value: Rational64,
    /// Removed letter positions, indices into the input word.
    pub removed: Vec<usize>,
    /// Cancelling pairs (positions in the input word) witnessing that the
    /// residual reduces to the identity.
    pub residual_pairs: Vec<(usize, usize)>,
}

impl NormCertificate {
    /// Check the certificate against the word it was issued for: the
    /// removed letters have total weight `value` and the residual reduces
    /// to the identity.
    pub fn verify(&self, w: &Word, alphabet: &WeightedAlphabet) -> Result<()> {
        if self.removed.iter().any(|&p| p >= w.len()) {
            return Err(Error::InvalidCertificate("position out of range".into()));
        }
        let mut weight = Rational64::zero();
        for &p in &self.removed {
            weight += alphabet.weight(w.letters[p].generator);
        }
        if weight != self.value {
            return Err(Error::InvalidCertificate(format!(
                "claimed value {} but removed weight is {}",
                self.value, weight
            )));
        }
        let residual = w.delete_positions(&self.removed);
        if !residual.reduce().is_empty() {
            return Err(Error::InvalidCertificate("residual is not trivial".into()));
        }
        Ok(())
    }
}

fn check_letters(w: &Word, alphabet: &WeightedAlphabet) -> Result<()> {
    for l in &w.letters {
        if l.generator >= alphabet.len() {
            return Err(Error::UnknownGenerator(format!("#{}", l.generator)));
        }
    }
    Ok(())
}

/// Integer letter weights over a common denominator, for a fast DP.
fn scaled_weights(alphabet: &WeightedAlphabet) -> (Vec<u64>, i64) {
    let mut denom: i64 = 1;
    for i in 0..alphabet.len() {
        denom = denom.lcm(alphabet.weight(i).denom());
    }
    let weights = (0..alphabet.len())
        .map(|i| {
            let w = alphabet.weight(i);
            (w.numer() * (denom / w.denom())) as u64
        })
        .collect();
    (weights, denom)
}

struct DpTable {
    n: usize,
    cost: Vec<u64>,
}

impl DpTable {
    fn get(&self, i: usize, j: usize) -> u64 {
        // empty interval (j < i) costs nothing
        if j < i || j >= self.n {
            0
        } else {
            self.cost[i * self.n + j]
        }
    }
}

fn run_dp(w: &Word, letter_cost: &[u64]) -> DpTable {
    let n = w.len();
    let mut table = DpTable { n, cost: vec![0; n * n] };
    for len in 1..=n {
        for i in 0..=(n - len) {
            let j = i + len - 1;
            let mut best = letter_cost[i] + table.get(i + 1, j);
            for k in (i + 1)..=j {
                if w.letters[k].cancels(w.letters[i]) {
                    let cand = table.get(i + 1, k - 1) + table.get(k + 1, j);
                    if cand < best {
                        best = cand;
                    }
                }
            }
            table.cost[i * n + j] = best;
        }
    }
    table
}

/// Backtrack the DP table. Matching is preferred over removal and the
/// smallest matching index wins, so witnesses are deterministic.
fn backtrack(
    w: &Word,
    letter_cost: &[u64],
    table: &DpTable,
    removed: &mut Vec<usize>,
    pairs: &mut Vec<(usize, usize)>,
) {
    let mut stack = vec![(0usize, w.len().wrapping_sub(1))];
    while let Some((i, j)) = stack.pop() {
        if j == usize::MAX || i > j {
            continue;
        }
        let target = table.get(i, j);
        let mut matched = false;
        for k in (i + 1)..=j {
            if w.letters[k].cancels(w.letters[i])
                && table.get(i + 1, k - 1) + table.get(k + 1, j) == target
            {
                pairs.push((i, k));
                stack.push((i + 1, k.wrapping_sub(1)));
                stack.push((k + 1, j));
                matched = true;
                break;
            }
        }
        if !matched {
            debug_assert_eq!(letter_cost[i] + table.get(i + 1, j), target);
            removed.push(i);
            stack.push((i + 1, j));
        }
    }
}

/// Minimum-weight cancellation sequence of `w`, with witness. Positions in
/// the certificate refer to `w` as given, even when `w` is not reduced.
pub fn cancellation_norm(w: &Word, alphabet: &WeightedAlphabet) -> Result<NormCertificate> {
    cancellation_norm_capped(w, alphabet, DEFAULT_LENGTH_CAP)
}

pub fn cancellation_norm_capped(
    w: &Word,
    alphabet: &WeightedAlphabet,
    cap: usize,
) -> Result<NormCertificate> {
    check_letters(w, alphabet)?;
    let (reduced, survivors) = w.reduce_with_survivors();
    if reduced.len() > cap {
        return Err(Error::BudgetExceeded { len: reduced.len(), cap });
    }
    let (scaled, denom) = scaled_weights(alphabet);
    let letter_cost: Vec<u64> =
        reduced.letters.iter().map(|l| scaled[l.generator]).collect();
    let table = run_dp(&reduced, &letter_cost);

    let mut removed = Vec::new();
    let mut pairs = Vec::new();
    backtrack(&reduced, &letter_cost, &table, &mut removed, &mut pairs);

    // map positions of the reduced word back to the input word
    let mut removed: Vec<usize> = removed.iter().map(|&p| survivors[p]).collect();
    removed.sort_unstable();
    let mut pairs: Vec<(usize, usize)> =
        pairs.iter().map(|&(p, q)| (survivors[p], survivors[q])).collect();
    // letters cancelled while reducing the input are part of the trace too
    let mut red_stack: Vec<(crate::word::Letter, usize)> = Vec::new();
    for (i, &l) in w.letters.iter().enumerate() {
        if red_stack.last().is_some_and(|&(top, _)| top.cancels(l)) {
            let (_, j) = red_stack.pop().unwrap();
            pairs.push((j, i));
        } else {
            red_stack.push((l, i));
        }
    }
    pairs.sort_unstable();

    let value = Rational64::new(table.get(0, reduced.len().wrapping_sub(1)) as i64, denom);
    let cert = NormCertificate { value, removed, residual_pairs: pairs };
    debug_assert!(cert.verify(w, alphabet).is_ok());
    Ok(cert)
}

/// Exhaustive minimum over all removal subsets; the independent oracle.
pub fn norm_bruteforce(w: &Word, alphabet: &WeightedAlphabet) -> Result<Rational64> {
    norm_bruteforce_limited(w, alphabet, DEFAULT_BRUTEFORCE_LIMIT)
}

pub fn norm_bruteforce_limited(
    w: &Word,
    alphabet: &WeightedAlphabet,
    limit: usize,
) -> Result<Rational64> {
    check_letters(w, alphabet)?;
    let n = w.len();
    if n > limit {
        return Err(Error::TooLong { len: n, limit });
    }
    let mut best: Option<Rational64> = None;
    for mask in 0u32..(1u32 << n) {
        let mut residual = Vec::with_capacity(n);
        let mut weight = Rational64::zero();
        for (i, &l) in w.letters.iter().enumerate() {
            if mask & (1 << i) != 0 {
                weight += alphabet.weight(l.generator);
            } else if residual.last().is_some_and(|&top: &crate::word::Letter| top.cancels(l)) {
                residual.pop();
            } else {
                residual.push(l);
            }
        }
        if residual.is_empty() && best.is_none_or(|b| weight < b) {
            best = Some(weight);
        }
    }
    Ok(best.expect("the full word is always a cancellation sequence"))
}

/// Rewrite a certificate as a product of conjugates of single letters,
/// one per removed position, whose product reduces back to `w`.
pub fn factor_into_conjugates(
    cert: &NormCertificate,
    w: &Word,
) -> Result<Vec<(Word, crate::word::Letter)>> {
    if cert.removed.iter().any(|&p| p >= w.len()) {
        return Err(Error::InvalidCertificate("position out of range".into()));
    }
    if !w.delete_positions(&cert.removed).reduce().is_empty() {
        return Err(Error::InvalidCertificate("residual is not trivial".into()));
    }
    let mut removed = cert.removed.clone();
    removed.sort_unstable();

    // w = u_0 x_{p_1} u_1 ... x_{p_k} u_k with u_0...u_k trivial; then
    // w = prod_i (c_i x_{p_i} c_i^-1) with c_i = u_0 u_1 ... u_{i-1}.
    let mut factors = Vec::with_capacity(removed.len());
    let mut prefix = Word::empty();
    let mut cursor = 0usize;
    for &p in &removed {
        let segment = Word::from_letters(w.letters[cursor..p].to_vec());
        prefix = prefix.concat(&segment).reduce();
        factors.push((prefix.clone(), w.letters[p]));
        cursor = p + 1;
    }
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;

    fn ab() -> WeightedAlphabet {
        WeightedAlphabet::unit(["a", "b"])
    }

    fn w(s: &str) -> Word {
        parse_word(s, &ab()).unwrap()
    }

    #[test]
    fn syllable_norm_is_its_length() {
        // the only cancellation sequence in a^d is the whole syllable
        let cert = cancellation_norm(&w("a^5"), &ab()).unwrap();
        assert_eq!(cert.value, Rational64::from_integer(5));
        assert_eq!(cert.removed, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn empty_word_norm_zero() {
        let cert = cancellation_norm(&Word::empty(), &ab()).unwrap();
        assert_eq!(cert.value, Rational64::zero());
        assert!(cert.removed.is_empty());
    }

    #[test]
    fn commutator_norm_two() {
        let word = w("a b a' b'");
        assert_eq!(norm_bruteforce(&word, &ab()).unwrap(), Rational64::from_integer(2));
        let cert = cancellation_norm(&word, &ab()).unwrap();
        assert_eq!(cert.value, Rational64::from_integer(2));
        cert.verify(&word, &ab()).unwrap();
        // tie-break: pairing preferred at the leftmost letter; `a` pairs
        // with `a'`, so the `b`-pair is removed
        assert_eq!(cert.removed, vec![1, 3]);
    }

    #[test]
    fn ab_norm_two() {
        assert_eq!(norm_bruteforce(&w("a b"), &ab()).unwrap(), Rational64::from_integer(2));
        assert_eq!(
            cancellation_norm(&w("a b"), &ab()).unwrap().value,
            Rational64::from_integer(2)
        );
    }

    #[test]
    fn bruteforce_rejects_long_words() {
        let word = w("a^15");
        assert!(matches!(
            norm_bruteforce(&word, &ab()),
            Err(Error::TooLong { len: 15, limit: 14 })
        ));
    }

    #[test]
    fn unknown_generator_rejected() {
        let abc = WeightedAlphabet::unit(["a", "b", "c"]);
        let word = parse_word("c", &abc).unwrap();
        assert!(matches!(
            cancellation_norm(&word, &ab()),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn certificate_positions_refer_to_unreduced_input() {
        // input reduces before the DP but positions map back
        let word = w("b b' a b a' b'");
        let cert = cancellation_norm(&word, &ab()).unwrap();
        assert_eq!(cert.value, Rational64::from_integer(2));
        cert.verify(&word, &ab()).unwrap();
    }

    #[test]
    fn zero_weight_pseudonorm() {
        use num_traits::Zero;
        let al = WeightedAlphabet::new(vec![
            ("a".into(), Rational64::zero()),
            ("b".into(), Rational64::from_integer(1)),
        ])
        .unwrap();
        let word = parse_word("a b a", &al).unwrap();
        let cert = cancellation_norm(&word, &al).unwrap();
        assert_eq!(cert.value, Rational64::from_integer(1));
        // norm vanishes iff the sharp projection is trivial
        let zero = parse_word("a^7", &al).unwrap();
        assert_eq!(cancellation_norm(&zero, &al).unwrap().value, Rational64::zero());
        assert!(zero.sharp_project(&al).is_empty());
    }

    #[test]
    fn factorization_reconstructs_word() {
        for s in ["a b a' b'", "a", "a b a b'", "b a^3 b' a^-2"] {
            let word = w(s);
            let cert = cancellation_norm(&word, &ab()).unwrap();
            let factors = factor_into_conjugates(&cert, &word).unwrap();
            let mut product = Word::empty();
            for (c, letter) in &factors {
                let piece = c
                    .concat(&Word::from_letters(vec![*letter]))
                    .concat(&c.inverse());
                product = product.concat(&piece);
            }
            assert_eq!(product.reduce(), word.reduce(), "failed for {s}");
            assert_eq!(factors.len(), cert.removed.len());
        }
    }

    #[test]
    fn factorization_rejects_bad_certificate() {
        let word = w("a b");
        let cert = NormCertificate {
            value: Rational64::from_integer(1),
            removed: vec![0],
            residual_pairs: vec![],
        };
        assert!(factor_into_conjugates(&cert, &word).is_err());
    }
}
