use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::element::{Element, Structure, WreathElement};
use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// The structure `G^d ≀ ℤ` with `G` routed at level 1.
pub fn power_wreath_z(base: Structure, d: usize) -> Structure {
    Structure::wreath(Structure::Power { base: Box::new(base), copies: d }, Structure::lattice(1))
}

/// Maps an element of `G^d ≀ ℤ` into `G ≀ ℤ` via `t ↦ t^d` and
/// `a ↦ t^i a t^{−i}` for `a` in copy `i`.
pub fn embed_gd_wr_z(d: usize, g: &Element) -> Result<Element> {
    if d == 0 {
        return Err(Error::precondition("d must be at least 1"));
    }
    let w = g.as_wreath().ok_or_else(|| Error::GroupMismatch("expected a wreath element".into()))?;
    let scale = |e: &Element| -> Result<BigInt> {
        match e.as_vector() {
            Some([c]) => Ok(c * BigInt::from(d)),
            _ => Err(Error::GroupMismatch("right factor must be Z".into())),
        }
    };
    let mut support = BTreeMap::new();
    for (p, v) in &w.support {
        let base = scale(p)?;
        let Element::Tuple(parts) = v else {
            return Err(Error::GroupMismatch("left values must be tuples".into()));
        };
        if parts.len() != d {
            return Err(Error::GroupMismatch(format!("expected {d} copies")));
        }
        for (i, x) in parts.iter().enumerate() {
            if !x.is_identity() {
                support.insert(Element::int(&base + i), x.clone());
            }
        }
    }
    Ok(Element::Wreath(WreathElement::new(support, Element::int(scale(&w.cursor)?))))
}

/// `t^i a t^{−i}` as a word over `G ≀ ℤ`, with `t = g0.1`.
pub fn copy_letter(i: usize, a: &Letter) -> Word {
    let mut w = Word::empty();
    for _ in 0..i {
        w.push(Letter::gen(0, 1));
    }
    w.push(a.clone());
    for _ in 0..i {
        w.push(Letter::gen_inv(0, 1));
    }
    w
}

/// `t^k` for `k ≥ 0`, or `(t^{-1})^{|k|}`, as a word over `G ≀ ℤ`.
pub fn t_power(k: i64) -> Word {
    let letter = if k >= 0 { Letter::gen(0, 1) } else { Letter::gen_inv(0, 1) };
    Word::new(vec![letter; k.unsigned_abs() as usize])
}
