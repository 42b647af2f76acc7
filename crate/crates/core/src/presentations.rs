//! Finitely presented groups, free-group words and Wirtinger presentations.
//!
//! A word is a sequence of letters `x_i^{±1}` stored freely reduced: no
//! adjacent inverse pairs survive construction.  Presentation files are a
//! small line-based format:
//!
//! ```text
//! # optional comment
//! mode: wirtinger
//! gens: x y
//! rel: x y x Y X Y
//! ```
//!
//! Lowercase tokens are generators, the uppercase form of a token is its
//! inverse.  When every generator name is a single character a relator token
//! may also be a run of letters (`xyXY`).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}: unknown generator token '{token}'")]
    UnknownGenerator { token: String, line: usize },
    #[error("line {line}: empty relator")]
    EmptyRelator { line: usize },
    #[error("missing 'gens:' header line")]
    MissingGenerators,
    #[error("duplicate generator name '{0}'")]
    DuplicateGenerator(String),
    #[error("generator name '{0}' must be lowercase")]
    NotLowercase(String),
    #[error("wirtinger presentation needs {expected} relators, found {found}")]
    WirtingerRelatorCount { expected: usize, found: usize },
    #[error("wirtinger relator {index} has nonzero total exponent sum {sum}")]
    WirtingerExponentSum { index: usize, sum: i64 },
    #[error("line {line}: unrecognised directive '{0}'", .directive)]
    BadDirective { directive: String, line: usize },
    #[error("generator index {index} out of range (presentation has {count})")]
    GeneratorOutOfRange { index: usize, count: usize },
}

/// A freely reduced word in a free group; letters are `(generator, ±1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<(usize, i8)>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    /// The single letter `x_gen^{exp}` with `exp = ±1`.
    pub fn letter(gen: usize, exp: i8) -> Self {
        assert!(exp == 1 || exp == -1, "letter exponent must be ±1");
        Self {
            letters: vec![(gen, exp)],
        }
    }

    pub fn generator(gen: usize) -> Self {
        Self::letter(gen, 1)
    }

    /// Build from arbitrary letters, freely reducing.
    pub fn from_letters<I: IntoIterator<Item = (usize, i8)>>(letters: I) -> Self {
        let mut w = Self::identity();
        for (g, e) in letters {
            w.push_reduce(g, e);
        }
        w
    }

    fn push_reduce(&mut self, gen: usize, exp: i8) {
        debug_assert!(exp == 1 || exp == -1);
        match self.letters.last() {
            Some(&(g, e)) if g == gen && e == -exp => {
                self.letters.pop();
            }
            _ => self.letters.push((gen, exp)),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    /// Concatenation followed by free reduction.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &(g, e) in &other.letters {
            out.push_reduce(g, e);
        }
        out
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(g, e)| (g, -e))
                .collect(),
        }
    }

    /// Total exponent sum: the image under the Hurewicz map `ε` that sends
    /// every generator of a Wirtinger presentation to the same element `t`.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&(_, e)| e as i64).sum()
    }

    /// Prefix consisting of the first `k` letters.
    pub fn prefix(&self, k: usize) -> Self {
        Self {
            letters: self.letters[..k].to_vec(),
        }
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }
}

/// A finitely presented group `⟨x_1,…,x_n | r_1,…,r_m⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
    wirtinger: bool,
}

impl Presentation {
    pub fn new(
        generator_names: Vec<String>,
        relators: Vec<Word>,
        wirtinger: bool,
    ) -> Result<Self, PresentationError> {
        if generator_names.is_empty() {
            return Err(PresentationError::MissingGenerators);
        }
        for (i, name) in generator_names.iter().enumerate() {
            if name.chars().any(|c| c.is_uppercase()) {
                return Err(PresentationError::NotLowercase(name.clone()));
            }
            if generator_names[..i].contains(name) {
                return Err(PresentationError::DuplicateGenerator(name.clone()));
            }
        }
        let n = generator_names.len();
        for (idx, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(PresentationError::EmptyRelator { line: idx + 1 });
            }
            if let Some(g) = r.max_generator() {
                if g >= n {
                    return Err(PresentationError::GeneratorOutOfRange { index: g, count: n });
                }
            }
        }
        let p = Self {
            generator_names,
            relators,
            wirtinger,
        };
        if wirtinger {
            p.validate_wirtinger()?;
        }
        Ok(p)
    }

    fn validate_wirtinger(&self) -> Result<(), PresentationError> {
        for (index, r) in self.relators.iter().enumerate() {
            let sum = r.exponent_sum();
            if sum != 0 {
                return Err(PresentationError::WirtingerExponentSum { index, sum });
            }
        }
        let n = self.num_generators();
        if self.relators.len() != n - 1 {
            return Err(PresentationError::WirtingerRelatorCount {
                expected: n - 1,
                found: self.relators.len(),
            });
        }
        Ok(())
    }

    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_wirtinger(&self) -> bool {
        self.wirtinger
    }

    /// Exponent sum of `w`, i.e. the power of `t` under the Hurewicz map.
    pub fn abelianize(&self, w: &Word) -> i64 {
        w.exponent_sum()
    }

    /// Parse the line-based presentation format.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut names: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        let mut wirtinger = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("mode:") {
                match rest.trim() {
                    "wirtinger" => wirtinger = true,
                    other => {
                        return Err(PresentationError::BadDirective {
                            directive: format!("mode: {other}"),
                            line,
                        })
                    }
                }
            } else if let Some(rest) = content.strip_prefix("gens:") {
                names = Some(rest.split_whitespace().map(str::to_owned).collect());
            } else if let Some(rest) = content.strip_prefix("rel:") {
                let names = names.as_ref().ok_or(PresentationError::MissingGenerators)?;
                let word = parse_word(rest, names, line)?;
                if word.is_empty() {
                    return Err(PresentationError::EmptyRelator { line });
                }
                relators.push(word);
            } else {
                return Err(PresentationError::BadDirective {
                    directive: content.to_owned(),
                    line,
                });
            }
        }
        let names = names.ok_or(PresentationError::MissingGenerators)?;
        Self::new(names, relators, wirtinger)
    }

    /// Inverse of [`Presentation::parse`]; the output round-trips.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if self.wirtinger {
            out.push_str("mode: wirtinger\n");
        }
        out.push_str("gens:");
        for name in &self.generator_names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        for r in &self.relators {
            out.push_str("rel:");
            for &(g, e) in r.letters() {
                out.push(' ');
                let name = &self.generator_names[g];
                if e > 0 {
                    out.push_str(name);
                } else {
                    out.push_str(&name.to_uppercase());
                }
            }
            out.push('\n');
        }
        out
    }

    /// Printable form of a word using this presentation's generator names.
    pub fn word_to_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_owned();
        }
        w.letters()
            .iter()
            .map(|&(g, e)| {
                let name = &self.generator_names[g];
                if e > 0 {
                    name.clone()
                } else {
                    name.to_uppercase()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

fn lookup(token: &str, names: &[String]) -> Option<(usize, i8)> {
    if let Some(i) = names.iter().position(|n| n == token) {
        return Some((i, 1));
    }
    let lower = token.to_lowercase();
    if lower != token {
        if let Some(i) = names.iter().position(|n| *n == lower) {
            return Some((i, -1));
        }
    }
    None
}

fn parse_word(text: &str, names: &[String], line: usize) -> Result<Word, PresentationError> {
    let single_char = names.iter().all(|n| n.chars().count() == 1);
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        if let Some(l) = lookup(token, names) {
            letters.push(l);
        } else if single_char && token.chars().count() > 1 {
            // compact form: a run of single-character letters
            for ch in token.chars() {
                let s = ch.to_string();
                match lookup(&s, names) {
                    Some(l) => letters.push(l),
                    None => {
                        return Err(PresentationError::UnknownGenerator {
                            token: s,
                            line,
                        })
                    }
                }
            }
        } else {
            return Err(PresentationError::UnknownGenerator {
                token: token.to_owned(),
                line,
            });
        }
    }
    Ok(Word::from_letters(letters))
}

/// Parse a standalone word (e.g. from a CLI flag) against a presentation.
pub fn parse_word_str(text: &str, p: &Presentation) -> Result<Word, PresentationError> {
    parse_word(text, p.generator_names(), 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction_cancels_inverse_pairs() {
        let w = Word::from_letters([(0, 1), (0, -1)]);
        assert!(w.is_identity());
        let u = Word::from_letters([(0, 1), (1, 1)]);
        let v = Word::from_letters([(1, -1), (0, 1)]);
        let prod = u.multiply(&v);
        assert_eq!(prod, Word::from_letters([(0, 1), (0, 1)]));
    }

    #[test]
    fn reduction_is_idempotent() {
        let w = Word::from_letters([(0, 1), (1, 1), (1, -1), (2, -1), (2, 1), (0, -1)]);
        let again = Word::from_letters(w.letters().iter().copied());
        assert_eq!(w, again);
        assert!(w.is_identity());
    }

    #[test]
    fn inverse_multiplies_to_identity() {
        let w = Word::from_letters([(0, 1), (1, -1), (2, 1), (0, 1)]);
        assert!(w.multiply(&w.inverse()).is_identity());
        assert!(w.inverse().multiply(&w).is_identity());
    }

    #[test]
    fn parses_commutator_file() {
        let p = Presentation::parse("gens: x y\nrel: x y X Y\n").unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(
            p.relators()[0],
            Word::from_letters([(0, 1), (1, 1), (0, -1), (1, -1)])
        );
    }

    #[test]
    fn parses_trefoil_as_wirtinger() {
        let text = "mode: wirtinger\ngens: x y\nrel: x y x Y X Y\n";
        let p = Presentation::parse(text).unwrap();
        assert!(p.is_wirtinger());
        assert_eq!(p.relators()[0].exponent_sum(), 0);
        assert_eq!(p.relators()[0].len(), 6);
    }

    #[test]
    fn compact_token_form_parses() {
        let a = Presentation::parse("gens: x y\nrel: xyXY\n").unwrap();
        let b = Presentation::parse("gens: x y\nrel: x y X Y\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wirtinger_rejects_nonzero_exponent_sum() {
        let err = Presentation::parse("mode: wirtinger\ngens: x\nrel: x x\n").unwrap_err();
        assert_eq!(
            err,
            PresentationError::WirtingerExponentSum { index: 0, sum: 2 }
        );
    }

    #[test]
    fn wirtinger_rejects_wrong_relator_count() {
        let err =
            Presentation::parse("mode: wirtinger\ngens: x y z\nrel: x Y\n").unwrap_err();
        assert_eq!(
            err,
            PresentationError::WirtingerRelatorCount {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn unknown_token_is_reported_with_line() {
        let err = Presentation::parse("gens: x y\nrel: x q\n").unwrap_err();
        assert_eq!(
            err,
            PresentationError::UnknownGenerator {
                token: "q".to_owned(),
                line: 2
            }
        );
    }

    #[test]
    fn empty_relator_is_rejected() {
        // xX reduces to the empty word
        let err = Presentation::parse("gens: x\nrel: x X\n").unwrap_err();
        assert_eq!(err, PresentationError::EmptyRelator { line: 2 });
    }

    #[test]
    fn serialize_round_trips() {
        let text = "mode: wirtinger\ngens: x y\nrel: x y x Y X Y\n";
        let p = Presentation::parse(text).unwrap();
        let q = Presentation::parse(&p.serialize()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn abelianize_examples() {
        let p = Presentation::parse("gens: x y\nrel: x y X Y\n").unwrap();
        let w = Word::from_letters([(0, 1), (1, 1), (0, -1)]);
        assert_eq!(p.abelianize(&w), 1);
        assert_eq!(p.abelianize(&p.relators()[0]), 0);
        assert_eq!(p.abelianize(&Word::identity()), 0);
    }

    #[test]
    fn abelianize_is_additive_on_random_pairs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let mk = |rng: &mut StdRng| {
                let len = rng.gen_range(0..20);
                Word::from_letters((0..len).map(|_| {
                    (rng.gen_range(0..4usize), if rng.gen() { 1i8 } else { -1 })
                }))
            };
            let u = mk(&mut rng);
            let v = mk(&mut rng);
            assert_eq!(
                u.multiply(&v).exponent_sum(),
                u.exponent_sum() + v.exponent_sum()
            );
        }
    }

    #[test]
    fn multiplication_is_associative_on_random_words() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let mk = |rng: &mut StdRng| {
                let len = rng.gen_range(0..15);
                Word::from_letters((0..len).map(|_| {
                    (rng.gen_range(0..3usize), if rng.gen() { 1i8 } else { -1 })
                }))
            };
            let (u, v, w) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            assert_eq!(u.multiply(&v).multiply(&w), u.multiply(&v.multiply(&w)));
        }
    }
}
