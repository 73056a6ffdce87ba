use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::ToPrimitive;

use super::element::{Element, Structure, WreathElement};
use super::heisenberg::Heis;
use super::perm::Permutation;
use crate::error::{Error, Result};

/// Injective byte encoding of a group element. The identity encodes to the
/// empty sequence; keys compare lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    pub bytes: Vec<u8>,
}

impl CanonicalKey {
    pub fn of(e: &Element) -> CanonicalKey {
        let mut bytes = Vec::new();
        encode_into(e, &mut bytes);
        CanonicalKey { bytes }
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(text: &str) -> Result<CanonicalKey> {
        let text = text.trim();
        if !text.len().is_multiple_of(2) {
            return Err(Error::parse(text.len(), "odd-length hex key"));
        }
        let bytes = (0..text.len())
            .step_by(2)
            .map(|i| {
                u8::from_str_radix(&text[i..i + 2], 16)
                    .map_err(|_| Error::parse(i, "invalid hex digit"))
            })
            .collect::<Result<_>>()?;
        Ok(CanonicalKey { bytes })
    }

    /// Recovers the element of `structure` with this key.
    pub fn decode(&self, structure: &Structure) -> Result<Element> {
        decode(structure, &self.bytes)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

fn put_varint(mut x: u64, out: &mut Vec<u8>) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn put_bigint(x: &BigInt, out: &mut Vec<u8>) {
    let zig: BigUint = match x.sign() {
        Sign::Minus => (x.magnitude() << 1u32) - 1u32,
        _ => x.magnitude() << 1u32,
    };
    if let Some(small) = zig.to_u64() {
        put_varint(small, out);
        return;
    }
    let digits = zig.to_radix_le(128);
    let last = digits.len() - 1;
    for (i, d) in digits.iter().enumerate() {
        out.push(if i == last { *d } else { d | 0x80 });
    }
}

fn put_block(bytes: &[u8], out: &mut Vec<u8>) {
    put_varint(bytes.len() as u64, out);
    out.extend_from_slice(bytes);
}

fn encode_into(e: &Element, out: &mut Vec<u8>) {
    if e.is_identity() {
        return;
    }
    match e {
        Element::Vector(v) => v.iter().for_each(|x| put_bigint(x, out)),
        Element::Residue(x) => put_varint(*x, out),
        Element::Perm(p) => out.extend(p.images().into_iter().map(|x| x as u8)),
        Element::Heis(h) => {
            put_bigint(&h.a, out);
            put_bigint(&h.b, out);
            put_bigint(&h.c, out);
        }
        Element::Tuple(xs) => {
            for x in xs {
                put_block(&CanonicalKey::of(x).bytes, out);
            }
        }
        Element::Wreath(w) => {
            put_block(&CanonicalKey::of(&w.cursor).bytes, out);
            let mut entries: Vec<(Vec<u8>, Vec<u8>)> = w
                .support
                .iter()
                .map(|(p, v)| (CanonicalKey::of(p).bytes, CanonicalKey::of(v).bytes))
                .collect();
            entries.sort();
            for (p, v) in entries {
                put_block(&p, out);
                put_block(&v, out);
            }
        }
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn done(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn fail(&self, msg: &str) -> Error {
        Error::parse(self.pos, msg)
    }

    fn varint_digits(&mut self) -> Result<Vec<u8>> {
        let mut digits = Vec::new();
        loop {
            let b = *self.bytes.get(self.pos).ok_or_else(|| self.fail("truncated varint"))?;
            self.pos += 1;
            digits.push(b & 0x7f);
            if b & 0x80 == 0 {
                return Ok(digits);
            }
        }
    }

    fn varint(&mut self) -> Result<u64> {
        let digits = self.varint_digits()?;
        BigUint::from_radix_le(&digits, 128)
            .and_then(|x| x.to_u64())
            .ok_or_else(|| self.fail("varint overflow"))
    }

    fn bigint(&mut self) -> Result<BigInt> {
        let digits = self.varint_digits()?;
        let zig = BigUint::from_radix_le(&digits, 128).ok_or_else(|| self.fail("bad varint"))?;
        let odd = zig.bit(0);
        let half = BigInt::from(zig >> 1u32);
        Ok(if odd { -half - 1 } else { half })
    }

    fn block(&mut self) -> Result<&'a [u8]> {
        let len = self.varint()? as usize;
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| self.fail("truncated block"))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }
}

fn decode(s: &Structure, bytes: &[u8]) -> Result<Element> {
    if bytes.is_empty() {
        return Ok(s.identity());
    }
    let mut r = Reader { bytes, pos: 0 };
    let e = match s {
        Structure::Lattice { rank, .. } => {
            Element::Vector((0..*rank).map(|_| r.bigint()).collect::<Result<_>>()?)
        }
        Structure::Cyclic { .. } => Element::Residue(r.varint()?),
        Structure::Symmetric { degree: n } | Structure::Dihedral { n, .. } => {
            if bytes.len() != *n {
                return Err(r.fail("permutation key has wrong length"));
            }
            r.pos = bytes.len();
            Element::Perm(Permutation::from_images(bytes.iter().map(|&b| b as usize).collect())?)
        }
        Structure::Heisenberg { .. } => Element::Heis(Heis { a: r.bigint()?, b: r.bigint()?, c: r.bigint()? }),
        Structure::Power { base, copies } => {
            let mut xs = Vec::with_capacity(*copies);
            for _ in 0..*copies {
                xs.push(decode(base, r.block()?)?);
            }
            Element::Tuple(xs)
        }
        Structure::Wreath { left, right } => {
            let cursor = decode(right, r.block()?)?;
            let mut support = std::collections::BTreeMap::new();
            while !r.done() {
                let p = decode(right, r.block()?)?;
                let v = decode(left, r.block()?)?;
                if v.is_identity() {
                    return Err(r.fail("identity value stored in support"));
                }
                support.insert(p, v);
            }
            Element::Wreath(WreathElement::new(support, cursor))
        }
    };
    if !r.done() {
        return Err(r.fail("trailing bytes in key"));
    }
    if !s.check(&e) || e.is_identity() || CanonicalKey::of(&e).bytes != bytes {
        return Err(Error::parse(0, "non-canonical key"));
    }
    Ok(e)
}

impl Element {
    pub fn key(&self) -> CanonicalKey {
        CanonicalKey::of(self)
    }
}
