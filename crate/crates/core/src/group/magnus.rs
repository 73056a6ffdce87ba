use super::element::{Element, Structure};
use super::iterated_structure;
use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// Image of the free generator `x_i` (or its inverse) under the iterated
/// Magnus embedding into `W(d−1, r)`: `g_{d−1}.i ⋯ g_0.i`.
pub fn magnus_letter(d: u32, index: u32, inverse: bool) -> Word {
    let w: Word = (0..d).rev().map(|level| Letter::gen(level, index)).collect();
    if inverse {
        w.inverse()
    } else {
        w
    }
}

/// Rewrites a word over `x_1..x_r` into a word over the generators of `W(d−1, r)`.
pub fn magnus_word(d: u32, r: u32, w: &Word) -> Result<Word> {
    if d == 0 {
        return Err(Error::precondition("derived length must be at least 1"));
    }
    let mut out = Word::empty();
    for letter in w.iter() {
        match letter {
            Letter::Gen(t) if (1..=r).contains(&t.index) => {
                out.extend_from(&magnus_letter(d, t.index, t.inverse));
            }
            Letter::One => {}
            other => {
                return Err(Error::InvalidToken {
                    token: super::word::format_letter(other, super::word::Spelling::Free),
                    group: format!("FS({d},{r})"),
                })
            }
        }
    }
    Ok(out)
}

/// The Magnus image of `w` in `W(d−1, r)`. It is the identity exactly when `w`
/// is trivial in the free solvable group of rank `r` and derived length `d`.
pub fn magnus_embed(d: u32, r: u32, w: &Word) -> Result<Element> {
    let structure: Structure = iterated_structure(d - 1, r as usize);
    structure.eval_word(&magnus_word(d, r, w)?)
}
