//! Weighted generating sets.
//!
//! An alphabet is an ordered list of generator names together with an exact
//! rational weight for each generator. Weight zero is allowed; generators of
//! positive weight form the "sharp" part of the alphabet.

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A finite ordered generating set with rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedAlphabet {
    names: Vec<String>,
    weights: Vec<Rational64>,
}

impl WeightedAlphabet {
    pub fn new(pairs: Vec<(String, Rational64)>) -> Result<Self> {
        let mut names = Vec::with_capacity(pairs.len());
        let mut weights = Vec::with_capacity(pairs.len());
        for (name, w) in pairs {
            if name.is_empty() {
                return Err(Error::PreconditionViolated("empty generator name".into()));
            }
            if names.contains(&name) {
                return Err(Error::PreconditionViolated(format!(
                    "duplicate generator `{name}`"
                )));
            }
            if w < Rational64::zero() {
                return Err(Error::PreconditionViolated(format!(
                    "negative weight for `{name}`"
                )));
            }
            names.push(name);
            weights.push(w);
        }
        Ok(WeightedAlphabet { names, weights })
    }

    /// Alphabet with unit weights, one generator per name.
    pub fn unit<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let pairs = names
            .into_iter()
            .map(|n| (n.into(), Rational64::new(1, 1)))
            .collect();
        Self::new(pairs).expect("unit alphabet")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weight(&self, index: usize) -> Rational64 {
        self.weights[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// True when every generator has positive weight.
    pub fn is_sharp(&self) -> bool {
        self.weights.iter().all(|w| !w.is_zero())
    }

    /// A stable textual form used for cache keys.
    pub fn cache_repr(&self) -> String {
        let mut s = String::new();
        for (n, w) in self.names.iter().zip(&self.weights) {
            s.push_str(n);
            s.push('=');
            s.push_str(&format!("{}/{};", w.numer(), w.denom()));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let r = WeightedAlphabet::new(vec![
            ("a".into(), Rational64::new(1, 1)),
            ("a".into(), Rational64::new(2, 1)),
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn zero_weight_allowed_negative_rejected() {
        assert!(WeightedAlphabet::new(vec![("a".into(), Rational64::new(0, 1))]).is_ok());
        assert!(WeightedAlphabet::new(vec![("a".into(), Rational64::new(-1, 2))]).is_err());
    }

    #[test]
    fn lookup() {
        let ab = WeightedAlphabet::unit(["a", "b"]);
        assert_eq!(ab.index_of("b").unwrap(), 1);
        assert!(ab.index_of("c").is_err());
        assert!(ab.is_sharp());
    }
}
