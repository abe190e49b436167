//! Finite descriptions of directional-cone elements and their norm
//! machinery: canonicalization onto pure roots, truncation-curve sampling,
//! bracketing between sampled lower bounds and stable-length upper bounds,
//! and the closed-form cone norm for groups with bounded commutators.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::alphabet::WeightedAlphabet;
use crate::error::{Error, Result};
use crate::norm::cancellation_norm_capped;
use crate::realword::{rational_norm_exact_capped, RealWord};
use crate::word::{primitive_root, Word};

/// Element of the integral Heisenberg group, the unipotent matrix
/// [[1, a, c], [0, 1, b], [0, 0, 1]].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HeisenbergElement {
    pub fn identity() -> Self {
        HeisenbergElement { a: 0, b: 0, c: 0 }
    }

    pub fn x() -> Self {
        HeisenbergElement { a: 1, b: 0, c: 0 }
    }

    pub fn y() -> Self {
        HeisenbergElement { a: 0, b: 1, c: 0 }
    }

    /// The central generator, image of the commutator of x and y.
    pub fn z() -> Self {
        HeisenbergElement { a: 0, b: 0, c: 1 }
    }

    pub fn mul(&self, other: &Self) -> Self {
        HeisenbergElement {
            a: self.a + other.a,
            b: self.b + other.b,
            c: self.c + other.c + self.a * other.b,
        }
    }

    pub fn inverse(&self) -> Self {
        HeisenbergElement { a: -self.a, b: -self.b, c: self.a * self.b - self.c }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = Self::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.mul(self).mul(&h.inverse())
    }

    pub fn is_central(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Image in the abelianization, the (a, b) coordinates.
    pub fn abelianized(&self) -> (i64, i64) {
        (self.a, self.b)
    }
}

/// The commutator-style central element y^-n x^-1 y^n x, together with its
/// factorization as two conjugates of generators; this is the witness that
/// the commutator subgroup is bounded in the generator norm.
pub fn heisenberg_central_witness(n: i64) -> (HeisenbergElement, [HeisenbergElement; 2]) {
    let x = HeisenbergElement::x();
    let y_n = HeisenbergElement::y().pow(n);
    let first = x.inverse().conjugate_by(&y_n.inverse());
    (first.mul(&x), [first, x])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeBase {
    FreeGroup(WeightedAlphabet),
    Zn(usize),
    Heisenberg,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseElement {
    Free(Word),
    Zn(Vec<i64>),
    Heisenberg(HeisenbergElement),
}

/// A directional-cone element described by finitely many base-group
/// syllables with rational exponents; the element is the limit class of
/// the truncation curve t -> g_1^{trunc(t r_1)} ... g_k^{trunc(t r_k)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeElementDesc {
    base: ConeBase,
    syllables: Vec<(BaseElement, Rational64)>,
}

impl ConeElementDesc {
    pub fn new(base: ConeBase, syllables: Vec<(BaseElement, Rational64)>) -> Self {
        ConeElementDesc { base, syllables }
    }

    pub fn base(&self) -> &ConeBase {
        &self.base
    }

    pub fn syllables(&self) -> &[(BaseElement, Rational64)] {
        &self.syllables
    }

    pub fn common_denominator(&self) -> i64 {
        self.syllables.iter().fold(1i64, |acc, (_, r)| acc.lcm(r.denom()))
    }
}

/// Exact sample points of the scaled norm curve t -> (1/t) ||g(t)||.
pub type CurveSamples = Vec<(Rational64, Rational64)>;

/// Bracket on the cone norm of a description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeNormBracket {
    /// Certified lower bound (largest curve sample, tightened by the
    /// stable-length bracket for single-syllable descriptions).
    pub lower: Rational64,
    /// Upper bound from the tau-weighted norm of the description.
    pub upper: Rational64,
    pub samples: CurveSamples,
}

fn trunc(x: Rational64) -> i64 {
    x.numer() / x.denom()
}

/// Rewrite a free-group description over canonical pure roots: each
/// syllable g(r) with g conjugate to theta^k becomes theta(k r); trivial
/// syllables are dropped and adjacent equal roots merge. Represents the
/// same cone element.
pub fn cone_canonicalize(desc: &ConeElementDesc) -> Result<ConeElementDesc> {
    let ConeBase::FreeGroup(_) = &desc.base else {
        return Err(Error::UnsupportedBase(
            "canonicalization applies to free-group descriptions".into(),
        ));
    };
    let mut out: Vec<(BaseElement, Rational64)> = Vec::new();
    for (elem, r) in &desc.syllables {
        let BaseElement::Free(g) = elem else {
            return Err(Error::UnsupportedBase("mixed base elements".into()));
        };
        if g.reduce().is_empty() || r.is_zero() {
            continue;
        }
        let (theta, k) = primitive_root(g)?;
        let exponent = Rational64::from_integer(k) * r;
        match out.last_mut() {
            Some((BaseElement::Free(top), acc)) if top == theta.word() => {
                *acc += exponent;
                if acc.is_zero() {
                    out.pop();
                }
            }
            _ => out.push((BaseElement::Free(theta.word().clone()), exponent)),
        }
    }
    Ok(ConeElementDesc { base: desc.base.clone(), syllables: out })
}

/// Sample the curve (1/t) ||g(t)|| on a positive increasing grid, in the
/// base group's own norm.
pub fn cone_curve_sample(
    desc: &ConeElementDesc,
    t_grid: &[Rational64],
    cap: usize,
) -> Result<CurveSamples> {
    if t_grid.is_empty()
        || t_grid[0] <= Rational64::zero()
        || t_grid.windows(2).any(|p| p[0] >= p[1])
    {
        return Err(Error::PreconditionViolated(
            "t grid must be positive and increasing".into(),
        ));
    }
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let value = match &desc.base {
            ConeBase::FreeGroup(alphabet) => {
                let mut word = Word::empty();
                for (elem, r) in &desc.syllables {
                    let BaseElement::Free(g) = elem else {
                        return Err(Error::UnsupportedBase("mixed base elements".into()));
                    };
                    word = word.concat(&g.pow(trunc(t * r)));
                }
                cancellation_norm_capped(&word, alphabet, cap)?.value / t
            }
            ConeBase::Zn(rank) => {
                let mut v = vec![0i64; *rank];
                for (elem, r) in &desc.syllables {
                    let BaseElement::Zn(gen) = elem else {
                        return Err(Error::UnsupportedBase("mixed base elements".into()));
                    };
                    let k = trunc(t * r);
                    for (acc, &coord) in v.iter_mut().zip(gen) {
                        *acc += k * coord;
                    }
                }
                let l1: i64 = v.iter().map(|&c| c.abs()).sum();
                Rational64::from_integer(l1) / t
            }
            ConeBase::Heisenberg => {
                return Err(Error::UnsupportedBase(
                    "no exact norm sampler for the Heisenberg base; use abelian_cone_norm".into(),
                ))
            }
        };
        samples.push((t, value));
    }
    Ok(samples)
}

/// Bracket the cone norm of a canonicalized free-group description.
/// `tau_brackets` gives a certified (lower, upper) stable-length bracket
/// for the root of each syllable, aligned with the syllables.
pub fn cone_norm_bracket(
    desc: &ConeElementDesc,
    t_grid: &[Rational64],
    tau_brackets: &[(Rational64, Rational64)],
    cap: usize,
) -> Result<ConeNormBracket> {
    let ConeBase::FreeGroup(_) = &desc.base else {
        return Err(Error::UnsupportedBase("bracketing requires a free-group base".into()));
    };
    if tau_brackets.len() != desc.syllables.len() {
        return Err(Error::PreconditionViolated(
            "one tau bracket per syllable is required".into(),
        ));
    }
    for &(lo, hi) in tau_brackets {
        if hi < lo {
            return Err(Error::InvalidBracket);
        }
    }
    if desc.syllables.is_empty() {
        return Ok(ConeNormBracket {
            lower: Rational64::zero(),
            upper: Rational64::zero(),
            samples: Vec::new(),
        });
    }

    // upper bound: norm of the description word over the root alphabet,
    // weighted by the tau upper bounds
    let mut roots: Vec<&Word> = Vec::new();
    let mut weights: Vec<Rational64> = Vec::new();
    let mut indices = Vec::with_capacity(desc.syllables.len());
    for ((elem, _), &(lo, hi)) in desc.syllables.iter().zip(tau_brackets) {
        let BaseElement::Free(g) = elem else {
            return Err(Error::UnsupportedBase("mixed base elements".into()));
        };
        match roots.iter().position(|&r| r == g) {
            Some(i) => {
                let _ = lo;
                if weights[i] != hi {
                    return Err(Error::PreconditionViolated(
                        "conflicting tau brackets for one root".into(),
                    ));
                }
                indices.push(i);
            }
            None => {
                roots.push(g);
                weights.push(hi);
                indices.push(roots.len() - 1);
            }
        }
    }
    let theta_alphabet = WeightedAlphabet::new(
        roots
            .iter()
            .enumerate()
            .map(|(i, _)| (format!("t{i}"), weights[i]))
            .collect(),
    )?;
    let desc_word = RealWord::from_syllables(
        desc.syllables
            .iter()
            .zip(&indices)
            .map(|((_, r), &i)| (i, *r))
            .collect(),
    );
    let upper = rational_norm_exact_capped(&desc_word, &theta_alphabet, cap)?.value;

    let samples = cone_curve_sample(desc, t_grid, cap)?;
    let mut lower = samples.iter().map(|&(_, v)| v).max().unwrap_or_default();
    if desc.syllables.len() == 1 {
        // single syllable theta(r): the cone norm is exactly |r| tau(theta)
        let r = desc.syllables[0].1;
        lower = lower.max(r.abs() * tau_brackets[0].0);
    }
    Ok(ConeNormBracket { lower, upper, samples })
}

/// Closed-form cone norm for bases with bounded commutator subgroup: the
/// weighted-free L1 norm of the abelianized slope vector. Central drift in
/// the Heisenberg base is collapsed.
pub fn abelian_cone_norm(desc: &ConeElementDesc) -> Result<Rational64> {
    match &desc.base {
        ConeBase::Zn(rank) => {
            let mut slopes = vec![Rational64::zero(); *rank];
            for (elem, r) in &desc.syllables {
                let BaseElement::Zn(gen) = elem else {
                    return Err(Error::UnsupportedBase("mixed base elements".into()));
                };
                for (acc, &coord) in slopes.iter_mut().zip(gen) {
                    *acc += *r * Rational64::from_integer(coord);
                }
            }
            Ok(slopes.iter().map(|s| s.abs()).sum())
        }
        ConeBase::Heisenberg => {
            let mut sx = Rational64::zero();
            let mut sy = Rational64::zero();
            for (elem, r) in &desc.syllables {
                let BaseElement::Heisenberg(m) = elem else {
                    return Err(Error::UnsupportedBase("mixed base elements".into()));
                };
                let (a, b) = m.abelianized();
                sx += *r * Rational64::from_integer(a);
                sy += *r * Rational64::from_integer(b);
            }
            Ok(sx.abs() + sy.abs())
        }
        ConeBase::FreeGroup(_) => Err(Error::UnsupportedBase(
            "no closed form for free-group bases; use cone_norm_bracket".into(),
        )),
    }
}

/// Denominator-aligned doubling grid {m, 2m, 4m, ...} of the given length.
pub fn aligned_grid(desc: &ConeElementDesc, steps: u32) -> Vec<Rational64> {
    let m = desc.common_denominator();
    (0..steps)
        .map(|i| Rational64::from_integer(m << i))
        .collect()
}
