//! Conjugation-invariant word norms on free groups and their rational
//! relatives: exact cancellation norms with verifiable certificates, the
//! rational free group with scaling maps and truncation curves, stable
//! length brackets, finite descriptions of directional-cone elements, and
//! the packet/interval combinatorics behind the product lower bounds.
//!
//! All norm values are exact rationals; floating point never enters a
//! computation. Every operation is a pure function over immutable inputs.

pub mod alphabet;
pub mod cache;
pub mod checks;
pub mod combinatorics;
pub mod cone;
pub mod error;
pub mod norm;
pub mod parse;
pub mod realword;
pub mod stable;
pub mod word;

pub use alphabet::WeightedAlphabet;
pub use error::{Error, Result};
pub use norm::{cancellation_norm, norm_bruteforce, NormCertificate};
pub use realword::{rational_norm_exact, RealCancellationWitness, RealWord};
pub use stable::{product_lower_bound, stable_length_bounds, StableLengthEstimate};
pub use word::{primitive_root, ConjugacyClassRep, Letter, Word};

use num_rational::Rational64;

/// Render a rational with 12 significant decimal digits, exactly.
pub fn decimal_render(x: Rational64) -> String {
    const DIGITS: u32 = 12;
    if *x.numer() == 0 {
        return "0".to_string();
    }
    let negative = *x.numer() < 0;
    let mut n = (*x.numer() as i128).unsigned_abs();
    let d = (*x.denom() as i128).unsigned_abs();

    // scale so the integer part has exactly DIGITS significant digits
    let mut exp10: i32 = 0;
    while n / d == 0 {
        n *= 10;
        exp10 -= 1;
    }
    let mut digits = n / d;
    let mut count = 1;
    let mut probe = digits;
    while probe >= 10 {
        probe /= 10;
        count += 1;
    }
    let mut rem = n % d;
    while count < DIGITS {
        rem *= 10;
        digits = digits * 10 + rem / d;
        rem %= d;
        exp10 -= 1;
        count += 1;
    }
    // round half up on the next digit
    if (rem * 10) / d >= 5 {
        digits += 1;
    }

    let mut s = digits.to_string();
    // rounding may add a digit; fold it into the exponent
    if s.len() as u32 > DIGITS {
        s.truncate(DIGITS as usize);
        exp10 += 1;
    }
    while s.len() > 1 && s.ends_with('0') && exp10 < 0 {
        s.pop();
        exp10 += 1;
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exp10 >= 0 {
        out.push_str(&s);
        for _ in 0..exp10 {
            out.push('0');
        }
    } else {
        let frac_len = (-exp10) as usize;
        if s.len() > frac_len {
            let split = s.len() - frac_len;
            out.push_str(&s[..split]);
            out.push('.');
            out.push_str(&s[split..]);
        } else {
            out.push_str("0.");
            for _ in 0..(frac_len - s.len()) {
                out.push('0');
            }
            out.push_str(&s);
        }
    }
    out
}
