//! Text grammars for words, real words, alphabets and cone descriptions.
//!
//! Word grammar: whitespace-separated tokens, where a token is `name`,
//! `name'` or `name^k` with k a possibly negative integer (`a b' a^3`).
//! Tokens may also be juxtaposed without spaces when names are unambiguous
//! (`aba'b'`). The real-word grammar adds `name(p/q)` syllables. Alphabets
//! are given inline as `a=1,b=1/2` (weight defaults to 1) or as a file with
//! one `name weight` pair per line.

use num_rational::Rational64;

use crate::alphabet::WeightedAlphabet;
use crate::cone::{BaseElement, ConeBase, ConeElementDesc, HeisenbergElement};
use crate::error::{Error, Result};
use crate::realword::RealWord;
use crate::word::{Letter, Word};

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    line_start: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0, line: 1, line_start: 0 }
    }

    fn col(&self) -> usize {
        self.pos - self.line_start + 1
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.line_start = self.pos;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    /// Longest generator name matching at the cursor.
    fn generator(&mut self, alphabet: &WeightedAlphabet) -> Result<usize> {
        let rest = self.rest();
        let mut best: Option<usize> = None;
        for (i, name) in alphabet.names().iter().enumerate() {
            if rest.starts_with(name.as_str())
                && best.is_none_or(|b| alphabet.name(b).len() < name.len())
            {
                best = Some(i);
            }
        }
        match best {
            Some(i) => {
                for _ in 0..alphabet.name(i).chars().count() {
                    self.bump();
                }
                Ok(i)
            }
            None => {
                let token: String =
                    rest.chars().take_while(|c| !c.is_whitespace()).collect();
                Err(self.err(format!("unknown generator at `{token}`")))
            }
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.bump();
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        self.src[start..self.pos]
            .parse::<i64>()
            .map_err(|_| self.err("expected an integer"))
    }

    fn rational(&mut self) -> Result<Rational64> {
        let numer = self.integer()?;
        if self.eat('/') {
            let denom = self.integer()?;
            if denom == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(Rational64::new(numer, denom))
        } else {
            Ok(Rational64::from_integer(numer))
        }
    }
}

fn parse_letters(sc: &mut Scanner, alphabet: &WeightedAlphabet) -> Result<Vec<Letter>> {
    let mut letters = Vec::new();
    loop {
        sc.skip_ws();
        match sc.peek() {
            None | Some(']') => break,
            Some('1') => {
                // the identity token, allowed only standalone
                sc.bump();
                continue;
            }
            _ => {}
        }
        let generator = sc.generator(alphabet)?;
        let inverse = sc.eat('\'');
        let exp = if sc.eat('^') { sc.integer()? } else { 1 };
        let exp = if inverse { -exp } else { exp };
        let letter = Letter::new(generator, exp < 0);
        for _ in 0..exp.unsigned_abs() {
            letters.push(letter);
        }
    }
    Ok(letters)
}

pub fn parse_word(input: &str, alphabet: &WeightedAlphabet) -> Result<Word> {
    let mut sc = Scanner::new(input);
    let letters = parse_letters(&mut sc, alphabet)?;
    if !sc.at_end() {
        return Err(sc.err("unexpected trailing input"));
    }
    Ok(Word::from_letters(letters))
}

/// Real words: `a(3/2) b(-2)` plus any plain word tokens with exponent 1.
pub fn parse_real_word(input: &str, alphabet: &WeightedAlphabet) -> Result<RealWord> {
    let mut sc = Scanner::new(input);
    let mut syllables: Vec<(usize, Rational64)> = Vec::new();
    loop {
        sc.skip_ws();
        if sc.peek().is_none() {
            break;
        }
        if sc.eat('1') {
            continue;
        }
        let generator = sc.generator(alphabet)?;
        let exponent = if sc.eat('(') {
            let r = sc.rational()?;
            sc.expect(')')?;
            r
        } else {
            let inverse = sc.eat('\'');
            let exp = if sc.eat('^') { sc.integer()? } else { 1 };
            Rational64::from_integer(if inverse { -exp } else { exp })
        };
        syllables.push((generator, exponent));
    }
    Ok(RealWord::from_syllables(syllables))
}

pub fn parse_rational(input: &str) -> Result<Rational64> {
    let mut sc = Scanner::new(input.trim());
    let r = sc.rational()?;
    if !sc.at_end() {
        return Err(sc.err("unexpected trailing input"));
    }
    Ok(r)
}

/// Inline alphabet: comma-separated `name` or `name=weight`.
pub fn parse_alphabet_inline(input: &str) -> Result<WeightedAlphabet> {
    let mut pairs = Vec::new();
    for part in input.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, weight) = match part.split_once('=') {
            Some((n, w)) => (n.trim(), parse_rational(w)?),
            None => (part, Rational64::from_integer(1)),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::parse(1, 1, format!("bad generator name `{name}`")));
        }
        pairs.push((name.to_string(), weight));
    }
    WeightedAlphabet::new(pairs)
}

/// Alphabet file: one `name weight` per line; blank lines and `#` comments
/// are skipped.
pub fn parse_alphabet_file(input: &str) -> Result<WeightedAlphabet> {
    let mut pairs = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let name = it.next().unwrap();
        let weight = match it.next() {
            Some(w) => parse_rational(w)
                .map_err(|_| Error::parse(lineno + 1, 1, format!("bad weight `{w}`")))?,
            None => return Err(Error::parse(lineno + 1, 1, "missing weight")),
        };
        if it.next().is_some() {
            return Err(Error::parse(lineno + 1, 1, "trailing fields"));
        }
        pairs.push((name.to_string(), weight));
    }
    WeightedAlphabet::new(pairs)
}

/// Cone descriptions:
///   `base=free alphabet=a,b; word= [aba'b'](1/2) [ab](2)`
///   `base=zn rank=2; word= (1,0)(3/2) (0,1)(-2)`
///   `base=heis; word= [x](3/2) [y](-2)`
pub fn parse_cone_desc(input: &str) -> Result<ConeElementDesc> {
    let (header, word_part) = input
        .split_once(';')
        .ok_or_else(|| Error::parse(1, 1, "expected `;` between header and word"))?;

    let mut base_kind: Option<String> = None;
    let mut alphabet: Option<WeightedAlphabet> = None;
    let mut rank: Option<usize> = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::parse(1, 1, format!("bad header field `{field}`")))?;
        match key {
            "base" => base_kind = Some(value.to_string()),
            "alphabet" => alphabet = Some(parse_alphabet_inline(value)?),
            "rank" => {
                rank = Some(value.parse().map_err(|_| {
                    Error::parse(1, 1, format!("bad rank `{value}`"))
                })?)
            }
            _ => return Err(Error::parse(1, 1, format!("unknown header key `{key}`"))),
        }
    }

    let word_part = word_part.trim();
    let word_part = word_part
        .strip_prefix("word=")
        .or_else(|| word_part.strip_prefix("word ="))
        .ok_or_else(|| Error::parse(1, 1, "expected `word=` after `;`"))?;

    match base_kind.as_deref() {
        Some("free") => {
            let alphabet = alphabet
                .ok_or_else(|| Error::parse(1, 1, "base=free requires alphabet="))?;
            let mut sc = Scanner::new(word_part);
            let mut syllables = Vec::new();
            while !sc.at_end() {
                sc.expect('[')?;
                let letters = parse_letters(&mut sc, &alphabet)?;
                sc.expect(']')?;
                sc.expect('(')?;
                let r = sc.rational()?;
                sc.expect(')')?;
                syllables.push((BaseElement::Free(Word::from_letters(letters)), r));
            }
            Ok(ConeElementDesc::new(ConeBase::FreeGroup(alphabet), syllables))
        }
        Some("zn") => {
            let rank = rank.ok_or_else(|| Error::parse(1, 1, "base=zn requires rank="))?;
            let mut sc = Scanner::new(word_part);
            let mut syllables = Vec::new();
            while !sc.at_end() {
                sc.expect('(')?;
                let mut v = Vec::with_capacity(rank);
                loop {
                    sc.skip_ws();
                    v.push(sc.integer()?);
                    sc.skip_ws();
                    if !sc.eat(',') {
                        break;
                    }
                }
                sc.expect(')')?;
                if v.len() != rank {
                    return Err(sc.err(format!("expected a vector of rank {rank}")));
                }
                sc.expect('(')?;
                let r = sc.rational()?;
                sc.expect(')')?;
                syllables.push((BaseElement::Zn(v), r));
            }
            Ok(ConeElementDesc::new(ConeBase::Zn(rank), syllables))
        }
        Some("heis") => {
            let heis_alphabet = WeightedAlphabet::unit(["x", "y", "z"]);
            let mut sc = Scanner::new(word_part);
            let mut syllables = Vec::new();
            while !sc.at_end() {
                sc.expect('[')?;
                let letters = parse_letters(&mut sc, &heis_alphabet)?;
                sc.expect(']')?;
                sc.expect('(')?;
                let r = sc.rational()?;
                sc.expect(')')?;
                let mut m = HeisenbergElement::identity();
                for l in &letters {
                    let g = match l.generator {
                        0 => HeisenbergElement::x(),
                        1 => HeisenbergElement::y(),
                        _ => HeisenbergElement::z(),
                    };
                    m = m.mul(&if l.inverse { g.inverse() } else { g });
                }
                syllables.push((BaseElement::Heisenberg(m), r));
            }
            Ok(ConeElementDesc::new(ConeBase::Heisenberg, syllables))
        }
        Some(other) => Err(Error::parse(1, 1, format!("unknown base `{other}`"))),
        None => Err(Error::parse(1, 1, "missing base= in header")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_tokens() {
        let ab = WeightedAlphabet::unit(["a", "b"]);
        let w = parse_word("a b' a^3", &ab).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.letters[1], Letter::new(1, true));
        // juxtaposed form
        assert_eq!(parse_word("ab'a^3", &ab).unwrap(), w);
        assert_eq!(parse_word("a^-2", &ab).unwrap(), Word::power_of(0, -2));
        assert_eq!(parse_word("", &ab).unwrap(), Word::empty());
        assert_eq!(parse_word("1", &ab).unwrap(), Word::empty());
    }

    #[test]
    fn word_errors_carry_position() {
        let ab = WeightedAlphabet::unit(["a", "b"]);
        match parse_word("a c", &ab) {
            Err(Error::Parse { line: 1, col: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn longest_name_wins() {
        let al = WeightedAlphabet::unit(["a", "ab"]);
        let w = parse_word("ab a", &al).unwrap();
        assert_eq!(w.letters[0].generator, 1);
        assert_eq!(w.letters[1].generator, 0);
    }

    #[test]
    fn real_word_syllables() {
        let ab = WeightedAlphabet::unit(["a", "b"]);
        let w = parse_real_word("a(3/2) b(-2) a'", &ab).unwrap();
        assert_eq!(
            w.syllables(),
            &[
                (0, Rational64::new(3, 2)),
                (1, Rational64::from_integer(-2)),
                (0, Rational64::from_integer(-1)),
            ]
        );
    }

    #[test]
    fn alphabet_inline_forms() {
        let al = parse_alphabet_inline("a=1,b=1/2,c").unwrap();
        assert_eq!(al.len(), 3);
        assert_eq!(al.weight(1), Rational64::new(1, 2));
        assert_eq!(al.weight(2), Rational64::from_integer(1));
    }

    #[test]
    fn alphabet_file_rejects_garbage() {
        assert!(parse_alphabet_file("a 1\nb 1/2\n").is_ok());
        assert!(parse_alphabet_file("a\n").is_err());
        assert!(parse_alphabet_file("a one\n").is_err());
    }

    #[test]
    fn cone_desc_free() {
        let d = parse_cone_desc("base=free alphabet=a,b; word= [aba'b'](1/2) [ab](2)")
            .unwrap();
        assert_eq!(d.syllables().len(), 2);
    }

    #[test]
    fn cone_desc_zn() {
        let d = parse_cone_desc("base=zn rank=2; word= (1,0)(3/2) (0,1)(-2)").unwrap();
        assert_eq!(d.syllables().len(), 2);
        match &d.syllables()[0].0 {
            BaseElement::Zn(v) => assert_eq!(v, &[1, 0]),
            _ => panic!("wrong base element"),
        }
    }
}
