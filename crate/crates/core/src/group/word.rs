use std::fmt;

use super::perm::Permutation;
use crate::error::{Error, Result};

/// An indexed generator `g<level>.<index>` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorToken {
    pub level: u32,
    pub index: u32,
    pub inverse: bool,
}

impl GeneratorToken {
    pub fn new(level: u32, index: u32) -> Self {
        GeneratorToken { level, index, inverse: false }
    }

    pub fn inv(self) -> Self {
        GeneratorToken { inverse: !self.inverse, ..self }
    }

    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// One letter of a word: an indexed generator, an explicit permutation, or
/// the identity letter of a standard generating set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Gen(GeneratorToken),
    Perm(Permutation),
    One,
}

impl Letter {
    pub fn gen(level: u32, index: u32) -> Letter {
        Letter::Gen(GeneratorToken::new(level, index))
    }

    pub fn gen_inv(level: u32, index: u32) -> Letter {
        Letter::Gen(GeneratorToken::new(level, index).inv())
    }

    pub fn inverse(&self) -> Letter {
        match self {
            Letter::Gen(t) => Letter::Gen(t.inv()),
            Letter::Perm(p) => Letter::Perm(p.inverse()),
            Letter::One => Letter::One,
        }
    }
}

/// A finite sequence of letters. Words are never freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn single(letter: Letter) -> Self {
        Word { letters: vec![letter] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.letters.iter()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.letters.extend(other.letters.iter().cloned());
    }

    /// The word repeated `k` times.
    pub fn repeat(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend(self.letters.iter().cloned());
        }
        Word { letters }
    }

    /// `[u, v] = u⁻¹ v⁻¹ u v` as a word.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word { letters: iter.into_iter().collect() }
    }
}

/// How a letter is spelled: `g` for indexed generators, `x` for free generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spelling {
    Indexed,
    Free,
}

pub(crate) fn format_letter(letter: &Letter, spelling: Spelling) -> String {
    match letter {
        Letter::Gen(t) => {
            let base = match spelling {
                Spelling::Indexed => format!("g{}.{}", t.level, t.index),
                Spelling::Free => format!("x{}", t.index),
            };
            if t.inverse {
                format!("{base}^-1")
            } else {
                base
            }
        }
        Letter::Perm(p) => p.to_string(),
        Letter::One => "1".to_string(),
    }
}

pub(crate) fn format_word(word: &Word, spelling: Spelling) -> String {
    word.iter().map(|l| format_letter(l, spelling)).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_word(self, Spelling::Indexed))
    }
}

/// A raw token with its byte offset in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawToken<'a> {
    pub text: &'a str,
    pub offset: usize,
}

/// Splits a word into tokens. Adjacent parenthesised cycles, with an optional
/// `^-1`, form a single permutation token.
pub(crate) fn tokenize(text: &str) -> Result<Vec<RawToken<'_>>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if bytes[i] == b'(' {
            while i < bytes.len() && bytes[i] == b'(' {
                match text[i..].find(')') {
                    Some(close) => i += close + 1,
                    None => return Err(Error::parse(i, "unclosed cycle")),
                }
            }
            if text[i..].starts_with("^-1") {
                i += 3;
            }
        } else {
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'(' {
                i += 1;
            }
        }
        out.push(RawToken { text: &text[start..i], offset: start });
    }
    Ok(out)
}

/// Parses `g<level>.<index>` or `x<index>` (with optional `^-1`).
pub(crate) fn parse_indexed(token: &RawToken<'_>) -> Result<Option<(Spelling, GeneratorToken)>> {
    let (body, inverse) = match token.text.strip_suffix("^-1") {
        Some(b) => (b, true),
        None => (token.text, false),
    };
    let bad = || Error::parse(token.offset, format!("malformed generator `{}`", token.text));
    if let Some(rest) = body.strip_prefix('g') {
        let (level, index) = rest.split_once('.').ok_or_else(bad)?;
        let level = level.parse::<u32>().map_err(|_| bad())?;
        let index = index.parse::<u32>().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        return Ok(Some((Spelling::Indexed, GeneratorToken { level, index, inverse })));
    }
    if let Some(rest) = body.strip_prefix('x') {
        let index = rest.parse::<u32>().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        return Ok(Some((Spelling::Free, GeneratorToken { level: 0, index, inverse })));
    }
    Ok(None)
}
