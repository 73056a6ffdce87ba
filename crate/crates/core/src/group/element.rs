use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::heisenberg::Heis;
use super::perm::Permutation;
use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// The shape of a group value. Leaf structures carry the generator level their
/// letters are routed by.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    Lattice { rank: usize, level: u32 },
    Cyclic { modulus: u64, level: u32 },
    Symmetric { degree: usize },
    /// Dihedral group of order `2n` acting on `n` points.
    Dihedral { n: usize, level: u32 },
    Heisenberg { level: u32 },
    /// Direct power `G^d`.
    Power { base: Box<Structure>, copies: usize },
    Wreath { left: Box<Structure>, right: Box<Structure> },
}

/// A group value. The variant must match the structure it is used with.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Vector(Vec<BigInt>),
    Residue(u64),
    Perm(Permutation),
    Heis(Heis),
    Tuple(Vec<Element>),
    Wreath(WreathElement),
}

/// A finitely supported map `H → A` together with a cursor in `H`.
/// Entries equal to the left identity are never stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WreathElement {
    pub cursor: Box<Element>,
    pub support: BTreeMap<Element, Element>,
}

impl WreathElement {
    pub fn new(support: BTreeMap<Element, Element>, cursor: Element) -> Self {
        WreathElement { cursor: Box::new(cursor), support }
    }
}

impl Element {
    pub fn int(x: impl Into<BigInt>) -> Element {
        Element::Vector(vec![x.into()])
    }

    pub fn vector<I: IntoIterator<Item = T>, T: Into<BigInt>>(xs: I) -> Element {
        Element::Vector(xs.into_iter().map(Into::into).collect())
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Vector(v) => v.iter().all(Zero::is_zero),
            Element::Residue(x) => *x == 0,
            Element::Perm(p) => p.is_identity(),
            Element::Heis(h) => h.is_identity(),
            Element::Tuple(xs) => xs.iter().all(Element::is_identity),
            Element::Wreath(w) => w.support.is_empty() && w.cursor.is_identity(),
        }
    }

    pub fn as_wreath(&self) -> Option<&WreathElement> {
        match self {
            Element::Wreath(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[BigInt]> {
        match self {
            Element::Vector(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vector(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Element::Vector(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Element::Residue(x) => write!(f, "{x}"),
            Element::Perm(p) => write!(f, "{p}"),
            Element::Heis(h) => write!(f, "{h}"),
            Element::Tuple(xs) => {
                let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
                write!(f, "<{}>", parts.join(","))
            }
            Element::Wreath(w) => {
                let parts: Vec<String> =
                    w.support.iter().map(|(p, v)| format!("{p}:{v}")).collect();
                write!(f, "{{{} | {}}}", parts.join(", "), w.cursor)
            }
        }
    }
}

fn mismatch(s: &Structure, e: &Element) -> Error {
    Error::GroupMismatch(format!("element {e} does not belong to {}", s.describe()))
}

impl Structure {
    pub fn lattice(rank: usize) -> Structure {
        Structure::Lattice { rank, level: 0 }
    }

    pub fn wreath(left: Structure, right: Structure) -> Structure {
        Structure::Wreath { left: Box::new(left), right: Box::new(right) }
    }

    pub fn describe(&self) -> String {
        match self {
            Structure::Lattice { rank, .. } => format!("Z^{rank}"),
            Structure::Cyclic { modulus, .. } => format!("Cyc({modulus})"),
            Structure::Symmetric { degree } => format!("Sym({degree})"),
            Structure::Dihedral { n, .. } => format!("Dih({n})"),
            Structure::Heisenberg { .. } => "UT3".to_string(),
            Structure::Power { base, copies } => format!("({})^{copies}", base.describe()),
            Structure::Wreath { left, right } => {
                format!("({} wr {})", left.describe(), right.describe())
            }
        }
    }

    pub fn wreath_parts(&self) -> Option<(&Structure, &Structure)> {
        match self {
            Structure::Wreath { left, right } => Some((left, right)),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Structure::Lattice { rank, .. } => Element::Vector(vec![BigInt::zero(); *rank]),
            Structure::Cyclic { .. } => Element::Residue(0),
            Structure::Symmetric { degree } => Element::Perm(Permutation::identity(*degree)),
            Structure::Dihedral { n, .. } => Element::Perm(Permutation::identity(*n)),
            Structure::Heisenberg { .. } => Element::Heis(Heis::default()),
            Structure::Power { base, copies } => Element::Tuple(vec![base.identity(); *copies]),
            Structure::Wreath { right, .. } => {
                Element::Wreath(WreathElement::new(BTreeMap::new(), right.identity()))
            }
        }
    }

    /// Whether `e` is a well-formed value of this structure.
    pub fn check(&self, e: &Element) -> bool {
        match (self, e) {
            (Structure::Lattice { rank, .. }, Element::Vector(v)) => v.len() == *rank,
            (Structure::Cyclic { modulus, .. }, Element::Residue(x)) => x < modulus,
            (Structure::Symmetric { degree }, Element::Perm(p)) => p.degree() == *degree,
            (Structure::Dihedral { n, .. }, Element::Perm(p)) => {
                p.degree() == *n && is_dihedral(p)
            }
            (Structure::Heisenberg { .. }, Element::Heis(_)) => true,
            (Structure::Power { base, copies }, Element::Tuple(xs)) => {
                xs.len() == *copies && xs.iter().all(|x| base.check(x))
            }
            (Structure::Wreath { left, right }, Element::Wreath(w)) => {
                right.check(&w.cursor)
                    && w.support
                        .iter()
                        .all(|(p, v)| right.check(p) && left.check(v) && !v.is_identity())
            }
            _ => false,
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut out = a.clone();
        self.mul_into(&mut out, b)?;
        Ok(out)
    }

    /// `acc ← acc · b`.
    pub fn mul_into(&self, acc: &mut Element, b: &Element) -> Result<()> {
        match (self, &mut *acc, b) {
            (Structure::Lattice { .. }, Element::Vector(x), Element::Vector(y)) => {
                if x.len() != y.len() {
                    return Err(mismatch(self, b));
                }
                for (xi, yi) in x.iter_mut().zip(y) {
                    *xi += yi;
                }
            }
            (Structure::Cyclic { modulus, .. }, Element::Residue(x), Element::Residue(y)) => {
                *x = ((*x as u128 + *y as u128) % *modulus as u128) as u64;
            }
            (
                Structure::Symmetric { .. } | Structure::Dihedral { .. },
                Element::Perm(x),
                Element::Perm(y),
            ) => {
                *x = x.compose(y);
            }
            (Structure::Heisenberg { .. }, Element::Heis(x), Element::Heis(y)) => {
                *x = x.mul(y);
            }
            (Structure::Power { base, .. }, Element::Tuple(xs), Element::Tuple(ys)) => {
                if xs.len() != ys.len() {
                    return Err(mismatch(self, b));
                }
                for (x, y) in xs.iter_mut().zip(ys) {
                    base.mul_into(x, y)?;
                }
            }
            (Structure::Wreath { left, right }, Element::Wreath(x), Element::Wreath(y)) => {
                let shift = !x.cursor.is_identity();
                for (p, v) in &y.support {
                    let q = if shift { right.mul(&x.cursor, p)? } else { p.clone() };
                    combine_entry(left, &mut x.support, q, v)?;
                }
                right.mul_into(&mut x.cursor, &y.cursor)?;
            }
            _ => return Err(mismatch(self, b)),
        }
        Ok(())
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        Ok(match (self, a) {
            (Structure::Lattice { .. }, Element::Vector(x)) => {
                Element::Vector(x.iter().map(|c| -c).collect())
            }
            (Structure::Cyclic { modulus, .. }, Element::Residue(x)) => {
                Element::Residue((modulus - x) % modulus)
            }
            (Structure::Symmetric { .. } | Structure::Dihedral { .. }, Element::Perm(p)) => {
                Element::Perm(p.inverse())
            }
            (Structure::Heisenberg { .. }, Element::Heis(h)) => Element::Heis(h.inverse()),
            (Structure::Power { base, .. }, Element::Tuple(xs)) => {
                Element::Tuple(xs.iter().map(|x| base.inv(x)).collect::<Result<_>>()?)
            }
            (Structure::Wreath { left, right }, Element::Wreath(w)) => {
                let h_inv = right.inv(&w.cursor)?;
                let mut support = BTreeMap::new();
                for (p, v) in &w.support {
                    support.insert(right.mul(&h_inv, p)?, left.inv(v)?);
                }
                Element::Wreath(WreathElement::new(support, h_inv))
            }
            _ => return Err(mismatch(self, a)),
        })
    }

    pub fn pow(&self, a: &Element, k: &BigInt) -> Result<Element> {
        match (self, a) {
            (Structure::Lattice { .. }, Element::Vector(x)) => {
                return Ok(Element::Vector(x.iter().map(|c| c * k).collect()));
            }
            (Structure::Cyclic { modulus, .. }, Element::Residue(x)) => {
                let m = BigInt::from(*modulus);
                let r = (BigInt::from(*x) * k).mod_floor(&m);
                return Ok(Element::Residue(r.to_u64().unwrap_or(0)));
            }
            (Structure::Heisenberg { .. }, Element::Heis(h)) => return Ok(Element::Heis(h.pow(k))),
            (Structure::Symmetric { .. } | Structure::Dihedral { .. }, Element::Perm(p)) => {
                let order = BigInt::from(p.order());
                let e = k.mod_floor(&order);
                return self.pow_binary(a, &e);
            }
            (Structure::Power { base, .. }, Element::Tuple(xs)) => {
                return Ok(Element::Tuple(
                    xs.iter().map(|x| base.pow(x, k)).collect::<Result<_>>()?,
                ));
            }
            _ => {}
        }
        if k.is_negative() {
            let inv = self.inv(a)?;
            return self.pow_binary(&inv, &-k);
        }
        self.pow_binary(a, k)
    }

    fn pow_binary(&self, a: &Element, k: &BigInt) -> Result<Element> {
        let mut result = self.identity();
        let mut base = a.clone();
        let mut e = k.clone();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                self.mul_into(&mut result, &base)?;
            }
            e /= &two;
            if !e.is_zero() {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// Whether this structure, or one of its factors, has a generator for `letter`.
    pub fn owns(&self, letter: &Letter) -> bool {
        match letter {
            Letter::One => true,
            Letter::Perm(p) => match self {
                Structure::Symmetric { degree } => p.degree() <= *degree,
                Structure::Wreath { left, right } => left.owns(letter) || right.owns(letter),
                _ => false,
            },
            Letter::Gen(t) => match self {
                Structure::Lattice { rank, level } => {
                    t.level == *level && (1..=*rank as u32).contains(&t.index)
                }
                Structure::Cyclic { level, .. } => t.level == *level && t.index == 1,
                Structure::Dihedral { level, .. } | Structure::Heisenberg { level } => {
                    t.level == *level && (t.index == 1 || t.index == 2)
                }
                Structure::Wreath { left, right } => left.owns(letter) || right.owns(letter),
                Structure::Symmetric { .. } | Structure::Power { .. } => false,
            },
        }
    }

    /// The element named by `letter`.
    pub fn letter(&self, letter: &Letter) -> Result<Element> {
        let mut e = self.identity();
        self.apply_letter(&mut e, letter)?;
        Ok(e)
    }

    /// `acc ← acc · letter`, without building the letter's element in the
    /// outer factors.
    pub fn apply_letter(&self, acc: &mut Element, letter: &Letter) -> Result<()> {
        if matches!(letter, Letter::One) {
            return Ok(());
        }
        match (self, &mut *acc) {
            (Structure::Wreath { left, right }, Element::Wreath(w)) => {
                if right.owns(letter) {
                    right.apply_letter(&mut w.cursor, letter)
                } else if left.owns(letter) {
                    match w.support.get_mut(&*w.cursor) {
                        Some(v) => {
                            left.apply_letter(v, letter)?;
                            if v.is_identity() {
                                w.support.remove(&*w.cursor);
                            }
                        }
                        None => {
                            let mut v = left.identity();
                            left.apply_letter(&mut v, letter)?;
                            if !v.is_identity() {
                                w.support.insert((*w.cursor).clone(), v);
                            }
                        }
                    }
                    Ok(())
                } else {
                    Err(invalid_letter(self, letter))
                }
            }
            (Structure::Wreath { .. }, other) => Err(mismatch(self, other)),
            _ => {
                let g = self.leaf_letter(letter)?;
                self.mul_into(acc, &g)
            }
        }
    }

    fn leaf_letter(&self, letter: &Letter) -> Result<Element> {
        if !self.owns(letter) {
            return Err(invalid_letter(self, letter));
        }
        Ok(match (self, letter) {
            (Structure::Symmetric { degree }, Letter::Perm(p)) => Element::Perm(p.extended(*degree)),
            (_, Letter::Gen(t)) => {
                let base = match self {
                    Structure::Lattice { rank, .. } => {
                        let mut v = vec![BigInt::zero(); *rank];
                        v[t.index as usize - 1] = BigInt::one();
                        Element::Vector(v)
                    }
                    Structure::Cyclic { modulus, .. } => Element::Residue(1 % modulus),
                    Structure::Heisenberg { .. } => {
                        if t.index == 1 {
                            Element::Heis(Heis::new(1, 0, 0))
                        } else {
                            Element::Heis(Heis::new(0, 1, 0))
                        }
                    }
                    Structure::Dihedral { n, .. } => {
                        let n = *n;
                        let images = if t.index == 1 {
                            (0..n).map(|i| (i + 1) % n).collect()
                        } else {
                            (0..n).map(|i| (n - i) % n).collect()
                        };
                        Element::Perm(Permutation::from_images(images)?)
                    }
                    _ => return Err(invalid_letter(self, letter)),
                };
                if t.inverse {
                    self.inv(&base)?
                } else {
                    base
                }
            }
            _ => return Err(invalid_letter(self, letter)),
        })
    }

    pub fn eval_word(&self, w: &Word) -> Result<Element> {
        let mut acc = self.identity();
        for letter in w.iter() {
            self.apply_letter(&mut acc, letter)?;
        }
        Ok(acc)
    }

    /// `σ(g)`, the cursor of a wreath element.
    pub fn project_sigma(&self, g: &Element) -> Result<Element> {
        match (self, g) {
            (Structure::Wreath { .. }, Element::Wreath(w)) => Ok((*w.cursor).clone()),
            _ => Err(mismatch(self, g)),
        }
    }

    /// `τ(g)(h)`, the left value stored at position `h`.
    pub fn project_tau_at(&self, g: &Element, h: &Element) -> Result<Element> {
        match (self, g) {
            (Structure::Wreath { left, .. }, Element::Wreath(w)) => {
                Ok(w.support.get(h).cloned().unwrap_or_else(|| left.identity()))
            }
            _ => Err(mismatch(self, g)),
        }
    }

    /// A word evaluating to `g`. Defined for lattices, cyclic groups and
    /// wreath products of those.
    pub fn to_word(&self, g: &Element) -> Result<Word> {
        if !self.check(g) {
            return Err(mismatch(self, g));
        }
        match (self, g) {
            (Structure::Lattice { level, .. }, Element::Vector(v)) => {
                let mut w = Word::empty();
                for (i, x) in v.iter().enumerate() {
                    let n = x.magnitude().to_usize().unwrap_or(usize::MAX);
                    let letter = if x.is_negative() {
                        Letter::gen_inv(*level, i as u32 + 1)
                    } else {
                        Letter::gen(*level, i as u32 + 1)
                    };
                    for _ in 0..n {
                        w.push(letter.clone());
                    }
                }
                Ok(w)
            }
            (Structure::Cyclic { level, .. }, Element::Residue(r)) => {
                Ok((0..*r).map(|_| Letter::gen(*level, 1)).collect())
            }
            (Structure::Wreath { left, right }, Element::Wreath(x)) => {
                let mut w = Word::empty();
                let mut at = right.identity();
                for (pos, value) in &x.support {
                    let step = right.mul(&right.inv(&at)?, pos)?;
                    w.extend_from(&right.to_word(&step)?);
                    w.extend_from(&left.to_word(value)?);
                    at = pos.clone();
                }
                let step = right.mul(&right.inv(&at)?, &x.cursor)?;
                w.extend_from(&right.to_word(&step)?);
                Ok(w)
            }
            _ => Err(Error::Unsupported(format!("spelling elements of {}", self.describe()))),
        }
    }
}

fn combine_entry(
    left: &Structure,
    support: &mut BTreeMap<Element, Element>,
    q: Element,
    v: &Element,
) -> Result<()> {
    match support.get_mut(&q) {
        Some(existing) => {
            left.mul_into(existing, v)?;
            if existing.is_identity() {
                support.remove(&q);
            }
        }
        None => {
            if !v.is_identity() {
                support.insert(q, v.clone());
            }
        }
    }
    Ok(())
}

fn invalid_letter(s: &Structure, letter: &Letter) -> Error {
    Error::InvalidToken {
        token: super::word::format_letter(letter, super::word::Spelling::Indexed),
        group: s.describe(),
    }
}

fn is_dihedral(p: &Permutation) -> bool {
    let n = p.degree();
    if n <= 2 {
        return true;
    }
    let c = p.image(0);
    let rotation = (0..n).all(|i| p.image(i) == (i + c) % n);
    let reflection = (0..n).all(|i| p.image(i) == (c + n - i) % n);
    rotation || reflection
}
