use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::Element;

/// `ℤ^r`, or `ℤ/n` when `modulus` is set (then `rank` is 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub rank: usize,
    pub modulus: Option<BigInt>,
}

pub type AVec = Vec<BigInt>;

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, modulus: None }
    }

    pub fn cyclic(n: u64) -> Self {
        AbelianGroup { rank: 1, modulus: Some(BigInt::from(n)) }
    }

    pub fn zero(&self) -> AVec {
        vec![BigInt::zero(); self.rank]
    }

    pub fn reduce(&self, v: &mut AVec) {
        if let Some(n) = &self.modulus {
            for x in v.iter_mut() {
                *x = x.mod_floor(n);
            }
        }
    }

    pub fn is_zero(&self, v: &AVec) -> bool {
        match &self.modulus {
            Some(n) => v.iter().all(|x| x.mod_floor(n).is_zero()),
            None => v.iter().all(Zero::is_zero),
        }
    }

    pub fn add_into(&self, acc: &mut AVec, v: &AVec) {
        for (a, b) in acc.iter_mut().zip(v) {
            *a += b;
        }
        self.reduce(acc);
    }

    pub fn add_scaled(&self, acc: &mut AVec, v: &AVec, k: &BigInt) {
        for (a, b) in acc.iter_mut().zip(v) {
            *a += b * k;
        }
        self.reduce(acc);
    }

    pub fn from_element(&self, e: &Element) -> Result<AVec> {
        match e {
            Element::Vector(v) if v.len() == self.rank => Ok(v.clone()),
            Element::Residue(x) if self.modulus.is_some() => Ok(vec![BigInt::from(*x)]),
            _ => Err(Error::GroupMismatch(format!("{e} is not in the abelian left factor"))),
        }
    }

    pub fn to_element(&self, v: &AVec) -> Element {
        match &self.modulus {
            Some(n) => Element::Residue(v[0].mod_floor(n).to_u64().unwrap_or(0)),
            None => Element::Vector(v.clone()),
        }
    }
}

/// Coprime `(s, t)` with `s > 0` and `s·a = t·b`, when `a` and `b` are
/// parallel; `None` otherwise. Both vectors must be nonzero.
pub fn lattice_ratio(a: &[BigInt], b: &[BigInt]) -> Result<Option<(BigInt, BigInt)>> {
    if a.len() != b.len() {
        return Err(Error::GroupMismatch("vectors of different rank".into()));
    }
    if a.iter().all(Zero::is_zero) || b.iter().all(Zero::is_zero) {
        return Err(Error::precondition("commensurability of the identity"));
    }
    let c = a.iter().position(|x| !x.is_zero()).expect("nonzero vector");
    if b[c].is_zero() {
        return Ok(None);
    }
    let g = a[c].gcd(&b[c]);
    let mut s = &b[c] / &g;
    let mut t = &a[c] / &g;
    if s.is_negative() {
        s = -s;
        t = -t;
    }
    let ok = a.iter().zip(b).all(|(x, y)| &s * x == &t * y);
    Ok(if ok { Some((s, t)) } else { None })
}
