//! Randomized and exhaustive property suites over the whole library.
//! The CLI `check-lemmas` subcommand runs them all; the acceptance test
//! suite runs them at pinned trial counts.

use num_rational::Rational64;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::alphabet::WeightedAlphabet;
use crate::combinatorics::{
    check_small_interval_bound, find_interval_collision, is_theta_packet, IntervalPartition,
};
use crate::cone::{abelian_cone_norm, cone_curve_sample, heisenberg_central_witness};
use crate::norm::{cancellation_norm, factor_into_conjugates, norm_bruteforce};
use crate::parse::parse_cone_desc;
use crate::realword::{geodesic_sample, norm_limit_estimate, rational_norm_exact, RealWord};
use crate::stable::{abelianization_lower_bound, product_lower_bound, stable_length_bounds};
use crate::word::{primitive_root, Letter, Word};

pub type CheckResult = Result<(), String>;

fn fail(msg: impl Into<String>) -> CheckResult {
    Err(msg.into())
}

// ---------------------------------------------------------------- generators

pub fn random_word(rng: &mut StdRng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5)))
        .collect();
    Word::from_letters(letters)
}

pub fn random_reduced_word(rng: &mut StdRng, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5));
        if letters.last().is_some_and(|&top| top.cancels(l)) {
            continue;
        }
        letters.push(l);
    }
    Word::from_letters(letters)
}

pub fn random_weights(rng: &mut StdRng, names: &[&str]) -> WeightedAlphabet {
    let pairs = names
        .iter()
        .map(|&n| {
            (n.to_string(), Rational64::new(rng.gen_range(1..=4), rng.gen_range(1..=4)))
        })
        .collect();
    WeightedAlphabet::new(pairs).unwrap()
}

/// Normalized random rational word with bounded denominators.
pub fn random_real_word(
    rng: &mut StdRng,
    rank: usize,
    max_syllables: usize,
    max_denominator: i64,
) -> RealWord {
    let count = rng.gen_range(0..=max_syllables);
    let mut syllables: Vec<(usize, Rational64)> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut g = rng.gen_range(0..rank);
        while syllables.last().is_some_and(|&(prev, _)| prev == g) && rank > 1 {
            g = rng.gen_range(0..rank);
        }
        let mut numer = 0;
        while numer == 0 {
            numer = rng.gen_range(-8..=8);
        }
        let denom = rng.gen_range(1..=max_denominator);
        syllables.push((g, Rational64::new(numer, denom)));
    }
    RealWord::from_syllables(syllables).normalize()
}

// -------------------------------------------------------------------- suites

/// DP norm equals the brute-force subset oracle: a full sweep of all
/// reduced words over two unit-weight generators up to `sweep_len`, plus
/// random words up to length 10.
pub fn oracle_equivalence(seed: u64, sweep_len: usize, random_trials: usize) -> CheckResult {
    let ab = WeightedAlphabet::unit(["a", "b"]);
    // sweep
    let mut stack: Vec<Vec<Letter>> = vec![vec![]];
    while let Some(prefix) = stack.pop() {
        let w = Word::from_letters(prefix.clone());
        let dp = cancellation_norm(&w, &ab).map_err(|e| e.to_string())?.value;
        let bf = norm_bruteforce(&w, &ab).map_err(|e| e.to_string())?;
        if dp != bf {
            return fail(format!("sweep mismatch on {w:?}: dp {dp} vs brute {bf}"));
        }
        if prefix.len() < sweep_len {
            for g in 0..2 {
                for inv in [false, true] {
                    let l = Letter::new(g, inv);
                    if prefix.last().is_some_and(|&top| top.cancels(l)) {
                        continue;
                    }
                    let mut next = prefix.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
        }
    }
    // random words, not necessarily reduced
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..random_trials {
        let w = random_word(&mut rng, 2, 10);
        let dp = cancellation_norm(&w, &ab).map_err(|e| e.to_string())?.value;
        let bf = norm_bruteforce(&w, &ab).map_err(|e| e.to_string())?;
        if dp != bf {
            return fail(format!("random mismatch on {w:?}: dp {dp} vs brute {bf}"));
        }
    }
    Ok(())
}

/// ||psi_d(g)|| = d ||g|| exactly, under random rational weights.
pub fn psi_homogeneity(seed: u64, trials: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..trials {
        let alphabet = random_weights(&mut rng, &["a", "b"]);
        let w = random_word(&mut rng, 2, 8);
        let d = rng.gen_range(2..=5i64);
        let base = cancellation_norm(&w, &alphabet).map_err(|e| e.to_string())?.value;
        let scaled =
            cancellation_norm(&w.psi_d(d), &alphabet).map_err(|e| e.to_string())?.value;
        if scaled != Rational64::from_integer(d) * base {
            return fail(format!(
                "psi_{d} homogeneity failed on {w:?}: {scaled} vs {d} * {base}"
            ));
        }
    }
    Ok(())
}

/// (1/(mN)) ||w<mN>|| is constant over N = 1..=5 and equals the exact
/// rational norm.
pub fn rational_stability(seed: u64, trials: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let ab = WeightedAlphabet::unit(["a", "b"]);
    for _ in 0..trials {
        let w = random_real_word(&mut rng, 2, 4, 4);
        let exact = rational_norm_exact(&w, &ab).map_err(|e| e.to_string())?;
        let m = w.common_denominator();
        for n in 1..=5i64 {
            let t = Rational64::from_integer(m * n);
            let truncated = w.truncate(t).map_err(|e| e.to_string())?;
            let scaled =
                cancellation_norm(&truncated, &ab).map_err(|e| e.to_string())?.value / t;
            if scaled != exact.value {
                return fail(format!(
                    "stability failed on {w:?} at t = {t}: {scaled} vs {}",
                    exact.value
                ));
            }
        }
    }
    Ok(())
}

/// Conjugation invariance, symmetry, triangle inequality, the telescoping
/// bound and sharp invariance, each on `trials` random instances.
pub fn norm_axioms(seed: u64, trials: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let norm = |w: &Word, al: &WeightedAlphabet| -> Result<Rational64, String> {
        Ok(cancellation_norm(w, al).map_err(|e| e.to_string())?.value)
    };
    for _ in 0..trials {
        let al = random_weights(&mut rng, &["a", "b"]);
        let w = random_word(&mut rng, 2, 8);
        let h = random_word(&mut rng, 2, 4);
        let conj = h.concat(&w).concat(&h.inverse());
        if norm(&conj, &al)? != norm(&w, &al)? {
            return fail(format!("conjugation invariance failed on {w:?}, {h:?}"));
        }
    }
    for _ in 0..trials {
        let al = random_weights(&mut rng, &["a", "b"]);
        let w = random_word(&mut rng, 2, 8);
        if norm(&w.inverse(), &al)? != norm(&w, &al)? {
            return fail(format!("symmetry failed on {w:?}"));
        }
    }
    for _ in 0..trials {
        let al = random_weights(&mut rng, &["a", "b"]);
        let u = random_word(&mut rng, 2, 6);
        let v = random_word(&mut rng, 2, 6);
        if norm(&u.concat(&v), &al)? > norm(&u, &al)? + norm(&v, &al)? {
            return fail(format!("triangle inequality failed on {u:?}, {v:?}"));
        }
    }
    for _ in 0..trials {
        // ||(g1...gn)^-1 (h1...hn)|| <= sum ||gi^-1 hi||
        let al = random_weights(&mut rng, &["a", "b"]);
        let n = rng.gen_range(1..=3);
        let gs: Vec<Word> = (0..n).map(|_| random_word(&mut rng, 2, 4)).collect();
        let hs: Vec<Word> = (0..n).map(|_| random_word(&mut rng, 2, 4)).collect();
        let gprod = gs.iter().fold(Word::empty(), |acc, g| acc.concat(g));
        let hprod = hs.iter().fold(Word::empty(), |acc, h| acc.concat(h));
        let lhs = norm(&gprod.inverse().concat(&hprod), &al)?;
        let rhs: Rational64 = gs
            .iter()
            .zip(&hs)
            .map(|(g, h)| norm(&g.inverse().concat(h), &al))
            .sum::<Result<Rational64, String>>()?;
        if lhs > rhs {
            return fail(format!("telescoping bound failed: {lhs} > {rhs}"));
        }
    }
    for _ in 0..trials {
        // sharp invariance under a zero weight
        let al = WeightedAlphabet::new(vec![
            ("a".into(), Rational64::zero()),
            ("b".into(), Rational64::new(rng.gen_range(1..=4), rng.gen_range(1..=4))),
        ])
        .unwrap();
        let w = random_word(&mut rng, 2, 8);
        if norm(&w, &al)? != norm(&w.sharp_project(&al), &al)? {
            return fail(format!("sharp invariance failed on {w:?}"));
        }
    }
    Ok(())
}

/// Certificates verify, and the conjugate factorization reconstructs the
/// word with one factor per removed letter.
pub fn certificate_soundness(seed: u64, trials: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..trials {
        let al = random_weights(&mut rng, &["a", "b"]);
        let w = random_word(&mut rng, 2, 10);
        let cert = cancellation_norm(&w, &al).map_err(|e| e.to_string())?;
        cert.verify(&w, &al).map_err(|e| e.to_string())?;
        let factors = factor_into_conjugates(&cert, &w).map_err(|e| e.to_string())?;
        let mut product = Word::empty();
        for (c, letter) in &factors {
            product = product
                .concat(c)
                .concat(&Word::from_letters(vec![*letter]))
                .concat(&c.inverse());
        }
        if product.reduce() != w.reduce() {
            return fail(format!("factorization does not reconstruct {w:?}"));
        }
    }
    Ok(())
}

/// ||alpha(t1)^-1 alpha(t2)|| = (t2 - t1) ||w|| at quarter points.
pub fn geodesic_equation(seed: u64, trials: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let ab = WeightedAlphabet::unit(["a", "b"]);
    let ts: Vec<Rational64> = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
        .iter()
        .map(|&(p, q)| Rational64::new(p, q))
        .collect();
    for _ in 0..trials {
        let w = random_real_word(&mut rng, 2, 4, 4);
        let cert = rational_norm_exact(&w, &ab).map_err(|e| e.to_string())?;
        let points =
            geodesic_sample(&cert.word, &cert.witness, &ts).map_err(|e| e.to_string())?;
        for (i, t1) in ts.iter().enumerate() {
            for (j, t2) in ts.iter().enumerate().skip(i) {
                let d = rational_norm_exact(&points[i].inverse().concat(&points[j]), &ab)
                    .map_err(|e| e.to_string())?
                    .value;
                if d != (t2 - t1) * cert.value {
                    return fail(format!(
                        "geodesic equation failed on {w:?} at ({t1}, {t2}): {d}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Cauchy-style decay: the spread over a doubled grid never exceeds the
/// spread over the base grid by more than the certified truncation error.
pub fn limit_spread_decay(seed: u64, trials: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let ab = WeightedAlphabet::unit(["a", "b"]);
    let grid1: Vec<Rational64> =
        [10, 20, 40].iter().map(|&n| Rational64::from_integer(n)).collect();
    let grid2: Vec<Rational64> =
        [40, 80, 160].iter().map(|&n| Rational64::from_integer(n)).collect();
    for _ in 0..trials {
        let w = random_real_word(&mut rng, 2, 3, 4);
        let e1 = norm_limit_estimate(&w, &ab, &grid1, 3000).map_err(|e| e.to_string())?;
        let e2 = norm_limit_estimate(&w, &ab, &grid2, 3000).map_err(|e| e.to_string())?;
        if e2.spread > e1.spread {
            return fail(format!(
                "spread grew on {w:?}: {} at coarse grid, {} at fine grid",
                e1.spread, e2.spread
            ));
        }
    }
    Ok(())
}

/// Exhaustive collision lemma sweep: every partition pair of {1,...,N}
/// with N <= max_n and ell <= max_ell meeting N >= ell (m1 + m2) collides.
pub fn collision_exhaustive(max_n: usize, max_ell: usize) -> CheckResult {
    for n in 1..=max_n {
        // all partitions of {1,...,n}: one per subset of the n-1 cut points
        let mut partitions: Vec<IntervalPartition> = Vec::new();
        for mask in 0u32..(1 << (n - 1)) {
            let mut sizes = Vec::new();
            let mut run = 1;
            for bit in 0..(n - 1) {
                if mask & (1 << bit) != 0 {
                    sizes.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            sizes.push(run);
            partitions.push(IntervalPartition::from_sizes(&sizes).unwrap());
        }
        for ell in 1..=max_ell {
            for p1 in &partitions {
                if ell * p1.len() >= n + 1 {
                    continue;
                }
                for p2 in &partitions {
                    if n < ell * (p1.len() + p2.len()) {
                        continue;
                    }
                    let (i, j, (lo, hi)) =
                        find_interval_collision(p1, p2, ell).map_err(|e| e.to_string())?;
                    let (a1, b1) = p1.intervals()[i];
                    let (a2, b2) = p2.intervals()[j];
                    if lo < a1.max(a2) || hi > b1.min(b2) || hi - lo + 1 < ell {
                        return fail(format!(
                            "bogus collision witness at n = {n}, ell = {ell}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// If a long enough v is a theta1-packet and v^-1 a theta2-packet, the
/// canonical classes agree.
pub fn equal_packets(seed: u64, trials: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..trials {
        let len1 = rng.gen_range(1..=4);
        let g1 = random_reduced_word(&mut rng, 2, len1);
        let len2 = rng.gen_range(1..=4);
        let g2 = random_reduced_word(&mut rng, 2, len2);
        let (Ok((theta1, _)), Ok((theta2, _))) = (primitive_root(&g1), primitive_root(&g2))
        else {
            continue;
        };
        if !theta1.word().is_cyclically_reduced() || !theta2.word().is_cyclically_reduced() {
            return fail("primitive root is not cyclically reduced");
        }
        let ell = num_integer::lcm(theta1.len(), theta2.len());
        // random packet of theta1 of length >= lcm
        let n = (ell / theta1.len() + 2) as i64;
        let power = theta1.word().pow(n);
        let len = rng.gen_range(ell..=power.len());
        let start = rng.gen_range(0..=power.len() - len);
        let v = Word::from_letters(power.letters[start..start + len].to_vec());
        if is_theta_packet(&v, &theta1).is_none() {
            return fail(format!("interval of a power of {theta1:?} is not a packet"));
        }
        if is_theta_packet(&v.inverse(), &theta2).is_some() && theta1 != theta2 {
            return fail(format!(
                "equal-packets violated: {theta1:?} vs {theta2:?} share {v:?}"
            ));
        }
    }
    Ok(())
}

/// The kappa product bound is strictly below the DP norm whenever its
/// preconditions hold, for roots a, b and ab.
pub fn product_nontriviality(seed: u64, trials: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let ab = WeightedAlphabet::unit(["a", "b"]);
    let roots: Vec<_> = ["a", "b", "a b"]
        .iter()
        .map(|s| {
            let w = crate::parse::parse_word(s, &ab).unwrap();
            primitive_root(&w).unwrap().0
        })
        .collect();
    let ell = 2i64; // lcm(1, 1, 2)
    for _ in 0..trials {
        let p = rng.gen_range(1..=3usize);
        let mut thetas = Vec::with_capacity(p);
        let mut exps = Vec::with_capacity(p);
        let mut taus = Vec::with_capacity(p);
        for _ in 0..p {
            let mut pick = rng.gen_range(0..roots.len());
            while thetas.last() == Some(&roots[pick]) {
                pick = rng.gen_range(0..roots.len());
            }
            let theta: &crate::word::ConjugacyClassRep = &roots[pick];
            let threshold = 6 * ell / theta.len() as i64;
            let magnitude = rng.gen_range(threshold + 1..=threshold + 20);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            thetas.push(theta.clone());
            exps.push(sign * magnitude);
            taus.push(abelianization_lower_bound(theta.word(), &ab));
        }
        let bound =
            product_lower_bound(&thetas, &exps, &taus).map_err(|e| e.to_string())?;
        let mut word = Word::empty();
        for (theta, &n) in thetas.iter().zip(&exps) {
            word = word.concat(&theta.word().pow(n));
        }
        let norm = cancellation_norm(&word, &ab).map_err(|e| e.to_string())?.value;
        if norm <= bound {
            return fail(format!(
                "product bound not strict: ||{word:?}|| = {norm} <= {bound}"
            ));
        }
    }
    Ok(())
}

/// Randomized removals from g^n stay within the small-interval bound.
pub fn small_interval(seed: u64, trials: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(seed);
    let ab = WeightedAlphabet::unit(["a", "b"]);
    let gs: Vec<Word> = ["a", "a b", "a a b"]
        .iter()
        .map(|s| crate::parse::parse_word(s, &ab).unwrap())
        .collect();
    for _ in 0..trials {
        let g = &gs[rng.gen_range(0..gs.len())];
        let tau_lower = abelianization_lower_bound(g, &ab);
        let n = rng.gen_range(1..=10u32);
        let total = g.len() * n as usize;
        let m = rng.gen_range(0..=total.min(6));
        let mut removal = Vec::with_capacity(m);
        while removal.len() < m {
            let p = rng.gen_range(0..total);
            if !removal.contains(&p) {
                removal.push(p);
            }
        }
        let report = check_small_interval_bound(g, n, &removal, tau_lower)
            .map_err(|e| e.to_string())?;
        if !report.holds {
            return fail(format!(
                "small-interval bound failed for g = {g:?}, n = {n}, removal {removal:?}: \
                 {} intervals, total {} > bound {}",
                report.intervals.len(),
                report.total_deleted,
                report.bound
            ));
        }
    }
    Ok(())
}

/// Closed-form cone norms: the plane example, Heisenberg central collapse
/// and the single-syllable stable-length identity.
pub fn cone_closed_forms() -> CheckResult {
    // Z^2 with slopes (3/2, -2)
    let d = parse_cone_desc("base=zn rank=2; word= (1,0)(3/2) (0,1)(-2)")
        .map_err(|e| e.to_string())?;
    let expected = Rational64::new(7, 2);
    if abelian_cone_norm(&d).map_err(|e| e.to_string())? != expected {
        return fail("plane cone norm is not 7/2");
    }
    let grid: Vec<Rational64> =
        (1..=4).map(|i| Rational64::from_integer(2 * i)).collect();
    let samples = cone_curve_sample(&d, &grid, 3000).map_err(|e| e.to_string())?;
    if samples.iter().any(|&(_, v)| v != expected) {
        return fail("plane cone curve does not stabilize at 7/2");
    }

    // Heisenberg: central drift is invisible
    let with_drift = parse_cone_desc("base=heis; word= [x](3/2) [y](-2) [z](100)")
        .map_err(|e| e.to_string())?;
    let without = parse_cone_desc("base=heis; word= [x](3/2) [y](-2)")
        .map_err(|e| e.to_string())?;
    let a = abelian_cone_norm(&with_drift).map_err(|e| e.to_string())?;
    let b = abelian_cone_norm(&without).map_err(|e| e.to_string())?;
    if a != b || a != expected {
        return fail("Heisenberg cone norm does not collapse the center");
    }
    for n in [1i64, 5, -3] {
        let (central, factors) = heisenberg_central_witness(n);
        if !central.is_central() || factors[0].mul(&factors[1]) != central {
            return fail("Heisenberg central witness does not factor");
        }
    }

    // single syllable a(2): samples are 2 trunc(t)/t and the Fekete
    // minimum of the power sequence is exactly 2
    let d = parse_cone_desc("base=free alphabet=a,b; word= [a](2)")
        .map_err(|e| e.to_string())?;
    let grid: Vec<Rational64> = [(1, 1), (3, 2), (2, 1), (4, 1), (8, 1)]
        .iter()
        .map(|&(p, q)| Rational64::new(p, q))
        .collect();
    let samples = cone_curve_sample(&d, &grid, 3000).map_err(|e| e.to_string())?;
    for &(t, v) in &samples {
        let two_t = Rational64::from_integer(2) * t;
        let expected = Rational64::from_integer(two_t.numer() / two_t.denom()) / t;
        if v != expected {
            return fail(format!("single-syllable sample at t = {t} is {v}"));
        }
    }
    let ab = WeightedAlphabet::unit(["a", "b"]);
    let a_word = crate::parse::parse_word("a", &ab).unwrap();
    let est = stable_length_bounds(&a_word, &ab, &[1, 2, 4, 8], 3000)
        .map_err(|e| e.to_string())?;
    let fekete = Rational64::from_integer(2) * est.upper;
    if fekete != Rational64::from_integer(2) {
        return fail("Fekete minimum for a(2) is not 2");
    }
    Ok(())
}

/// Named suite list at the default trial counts used by `check-lemmas`.
pub fn run_all(seed: u64) -> Vec<(&'static str, CheckResult)> {
    vec![
        ("oracle-equivalence", oracle_equivalence(seed, 5, 500)),
        ("psi-homogeneity", psi_homogeneity(seed.wrapping_add(1), 200)),
        ("rational-stability", rational_stability(seed.wrapping_add(2), 100)),
        ("norm-axioms", norm_axioms(seed.wrapping_add(3), 200)),
        ("certificate-soundness", certificate_soundness(seed.wrapping_add(4), 200)),
        ("geodesic-equation", geodesic_equation(seed.wrapping_add(5), 50)),
        ("limit-spread-decay", limit_spread_decay(seed.wrapping_add(6), 25)),
        ("collision-exhaustive", collision_exhaustive(10, 3)),
        ("equal-packets", equal_packets(seed.wrapping_add(7), 200)),
        ("product-nontriviality", product_nontriviality(seed.wrapping_add(8), 50)),
        ("small-interval", small_interval(seed.wrapping_add(9), 100)),
        ("cone-closed-forms", cone_closed_forms()),
    ]
}
