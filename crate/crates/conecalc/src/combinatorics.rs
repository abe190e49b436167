//! Packet and interval-partition combinatorics backing the product
//! lower-bound machinery: packet membership, the interval collision
//! lemma, and an executable check of the small-interval reduction bound.

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::word::{ConjugacyClassRep, Word};

/// A partition of {1,...,N} into non-empty consecutive intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    /// End position of each interval, 1-based inclusive; strictly
    /// increasing, last entry is N.
    boundaries: Vec<usize>,
}

impl IntervalPartition {
    pub fn new(boundaries: Vec<usize>) -> Result<Self> {
        if boundaries.is_empty()
            || boundaries[0] == 0
            || boundaries.windows(2).any(|p| p[0] >= p[1])
        {
            return Err(Error::PreconditionViolated(
                "boundaries must be strictly increasing and start above 0".into(),
            ));
        }
        Ok(IntervalPartition { boundaries })
    }

    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::PreconditionViolated("empty interval".into()));
        }
        let mut boundaries = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in sizes {
            acc += s;
            boundaries.push(acc);
        }
        Self::new(boundaries)
    }

    pub fn total(&self) -> usize {
        *self.boundaries.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.boundaries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Intervals as 1-based inclusive (start, end) pairs.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.boundaries.len());
        let mut start = 1;
        for &end in &self.boundaries {
            out.push((start, end));
            start = end + 1;
        }
        out
    }
}

/// Is `v` an interval of theta^n for some n != 0? On success returns the
/// witness: 0-based offset into the power and the signed power count
/// (negative n means an interval of a power of theta^-1).
pub fn is_theta_packet(v: &Word, theta: &ConjugacyClassRep) -> Option<(usize, i64)> {
    let t = theta.word();
    if !t.is_cyclically_reduced() || t.is_empty() {
        return None;
    }
    if v.is_empty() {
        return Some((0, 1));
    }
    let p = t.len();
    for (base, sign) in [(t.clone(), 1i64), (t.inverse(), -1i64)] {
        'offset: for offset in 0..p {
            for (i, &l) in v.letters.iter().enumerate() {
                if base.letters[(offset + i) % p] != l {
                    continue 'offset;
                }
            }
            let n = (offset + v.len()).div_ceil(p) as i64;
            return Some((offset, sign * n));
        }
    }
    None
}

/// Two interval partitions of {1,...,N} with N >= ell (m1 + m2) must share
/// an intersection interval of length at least ell. Returns the first hit
/// in row-major order: (index in p1, index in p2, (start, end)).
pub fn find_interval_collision(
    p1: &IntervalPartition,
    p2: &IntervalPartition,
    ell: usize,
) -> Result<(usize, usize, (usize, usize))> {
    if ell == 0 {
        return Err(Error::PreconditionViolated("ell must be positive".into()));
    }
    if p1.total() != p2.total() {
        return Err(Error::PreconditionViolated(
            "partitions cover different sets".into(),
        ));
    }
    let n = p1.total();
    if n < ell * (p1.len() + p2.len()) {
        return Err(Error::PreconditionViolated(format!(
            "N = {n} < ell (m1 + m2) = {}",
            ell * (p1.len() + p2.len())
        )));
    }
    for (i, &(a1, b1)) in p1.intervals().iter().enumerate() {
        for (j, &(a2, b2)) in p2.intervals().iter().enumerate() {
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if hi >= lo && hi - lo + 1 >= ell {
                return Ok((i, j, (lo, hi)));
            }
        }
    }
    // the collision lemma guarantees a hit under the precondition
    unreachable!("no collision found although N >= ell (m1 + m2)");
}

/// Outcome of one small-interval reduction trial on g^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallIntervalReport {
    /// Number of removed symbols.
    pub removed: usize,
    /// Deleted intervals of g^n after reduction, 0-based inclusive.
    pub intervals: Vec<(usize, usize)>,
    /// Total deleted length.
    pub total_deleted: usize,
    /// The bound |g| (1 + |g|) / tau_lower * m.
    pub bound: Rational64,
    /// interval count <= m and total deleted length <= bound.
    pub holds: bool,
}

/// Remove the given positions from g^n, reduce left to right, and measure
/// the deleted intervals against the small-interval bound. `tau_lower`
/// must be a certified positive lower bound on the stable length of g;
/// the bound is monotone decreasing in tau, so it stays valid.
pub fn check_small_interval_bound(
    g: &Word,
    n: u32,
    removal: &[usize],
    tau_lower: Rational64,
) -> Result<SmallIntervalReport> {
    if tau_lower <= Rational64::zero() {
        return Err(Error::PreconditionViolated("tau lower bound must be positive".into()));
    }
    if !g.is_cyclically_reduced() || g.is_empty() {
        return Err(Error::PreconditionViolated(
            "g must be nontrivial and cyclically reduced".into(),
        ));
    }
    let power = g.pow(n as i64);
    if removal.iter().any(|&p| p >= power.len()) {
        return Err(Error::PreconditionViolated("removal position out of range".into()));
    }
    let mut removed_mask = vec![false; power.len()];
    for &p in removal {
        removed_mask[p] = true;
    }
    let m = removed_mask.iter().filter(|&&b| b).count();

    // deterministic left-to-right reduction, tracking surviving positions
    let mut stack: Vec<usize> = Vec::new();
    for (i, &l) in power.letters.iter().enumerate() {
        if removed_mask[i] {
            continue;
        }
        if stack
            .last()
            .is_some_and(|&top| power.letters[top].cancels(l))
        {
            stack.pop();
        } else {
            stack.push(i);
        }
    }
    let mut survives = vec![false; power.len()];
    for &i in &stack {
        survives[i] = true;
    }

    let mut intervals = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &alive) in survives.iter().enumerate() {
        match (alive, start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                intervals.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push((s, power.len() - 1));
    }
    let total_deleted: usize = intervals.iter().map(|&(s, e)| e - s + 1).sum();

    let glen = Rational64::from_integer(g.len() as i64);
    let bound =
        glen * (Rational64::from_integer(1) + glen) / tau_lower * Rational64::from_integer(m as i64);
    let holds = intervals.len() <= m && Rational64::from_integer(total_deleted as i64) <= bound;
    Ok(SmallIntervalReport { removed: m, intervals, total_deleted, bound, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::WeightedAlphabet;
    use crate::parse::parse_word;
    use crate::word::primitive_root;

    fn w(s: &str) -> Word {
        let ab = WeightedAlphabet::unit(["a", "b"]);
        parse_word(s, &ab).unwrap()
    }

    fn theta(s: &str) -> ConjugacyClassRep {
        primitive_root(&w(s)).unwrap().0
    }

    #[test]
    fn packet_examples() {
        let t = theta("a b");
        assert!(is_theta_packet(&w("a b a b a"), &t).is_some());
        assert!(is_theta_packet(&w("a b b a"), &t).is_none());
        // intervals of the inverse power
        let (_, n) = is_theta_packet(&w("b' a' b'"), &t).unwrap();
        assert!(n < 0);
    }

    #[test]
    fn sub_intervals_of_packets_are_packets() {
        let t = theta("a b");
        let power = t.word().pow(5);
        for start in 0..power.len() {
            for end in start..=power.len() {
                let v = Word::from_letters(power.letters[start..end].to_vec());
                assert!(is_theta_packet(&v, &t).is_some(), "[{start}, {end})");
            }
        }
    }

    #[test]
    fn packet_witness_is_consistent() {
        let t = theta("a b");
        let (offset, n) = is_theta_packet(&w("b a b a"), &t).unwrap();
        assert_eq!((offset, n), (1, 3));
        // the witness reproduces v as an interval of theta^n
        let power = t.word().pow(n);
        assert_eq!(power.letters[offset..offset + 4], w("b a b a").letters[..]);
    }

    #[test]
    fn collision_examples() {
        let p1 = IntervalPartition::from_sizes(&[4, 4]).unwrap();
        let p2 = IntervalPartition::from_sizes(&[2, 6]).unwrap();
        let (i, j, (lo, hi)) = find_interval_collision(&p1, &p2, 2).unwrap();
        // first hit in row-major order: [1..4] meets [1..2] at [1..2]
        assert_eq!((i, j), (0, 0));
        assert_eq!((lo, hi), (1, 2));
        assert!(hi - lo + 1 >= 2);

        let p = IntervalPartition::from_sizes(&[2]).unwrap();
        let (i, j, (lo, hi)) = find_interval_collision(&p, &p, 1).unwrap();
        assert_eq!((i, j, lo, hi), (0, 0, 1, 2));
    }

    #[test]
    fn collision_precondition_enforced() {
        let p1 = IntervalPartition::from_sizes(&[1, 1]).unwrap();
        let p2 = IntervalPartition::from_sizes(&[1, 1]).unwrap();
        assert!(find_interval_collision(&p1, &p2, 1).is_err());
    }

    #[test]
    fn small_interval_no_removal() {
        let r =
            check_small_interval_bound(&w("a"), 10, &[], Rational64::from_integer(1)).unwrap();
        assert_eq!(r.removed, 0);
        assert!(r.intervals.is_empty());
        assert!(r.holds);
    }

    #[test]
    fn small_interval_two_symbols_from_a_power() {
        // g = a, n = 10, remove 2 symbols: 2 intervals of total length 2,
        // bound (1 * 2 / 1) * 2 = 4
        let r = check_small_interval_bound(&w("a"), 10, &[2, 7], Rational64::from_integer(1))
            .unwrap();
        assert_eq!(r.removed, 2);
        assert_eq!(r.intervals.len(), 2);
        assert_eq!(r.total_deleted, 2);
        assert_eq!(r.bound, Rational64::from_integer(4));
        assert!(r.holds);
    }

    #[test]
    fn small_interval_requires_positive_tau() {
        assert!(check_small_interval_bound(&w("a"), 2, &[], Rational64::zero()).is_err());
        assert!(check_small_interval_bound(&w("a b a'"), 2, &[], Rational64::from_integer(1))
            .is_err());
    }
}
