//! Group descriptors, words and exact element arithmetic.

mod element;
mod embed;
mod heisenberg;
mod key;
mod magnus;
mod perm;
mod word;

use std::fmt;

pub use element::{Element, Structure, WreathElement};
pub use embed::{copy_letter, embed_gd_wr_z, power_wreath_z, t_power};
pub use heisenberg::Heis;
pub use key::CanonicalKey;
pub use magnus::{magnus_embed, magnus_letter, magnus_word};
pub use perm::Permutation;
pub use word::{GeneratorToken, Letter, Spelling, Word};
pub(crate) use word::format_word;

use crate::error::{Error, Result};

/// The groups understood by the library.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    FreeAbelian(usize),
    IteratedWreath(u32, usize),
    /// Free solvable group of derived length `d` and rank `r`.
    FreeSolvable(u32, usize),
    Symmetric(usize),
    Cyclic(u64),
    Heisenberg,
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    WreathOverZ(Box<GroupDescriptor>),
}

/// `W(0,r) = ℤ^r`, `W(m,r) = ℤ^r ≀ W(m−1,r)`, with the left copy of `W(m,r)`
/// at level `m`.
pub fn iterated_structure(m: u32, r: usize) -> Structure {
    let mut s = Structure::Lattice { rank: r, level: 0 };
    for level in 1..=m {
        s = Structure::wreath(Structure::Lattice { rank: r, level }, s);
    }
    s
}

impl GroupDescriptor {
    pub fn parse(text: &str) -> Result<GroupDescriptor> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let d = parse_descriptor(&compact, 0)?;
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Unsupported(format!("{self}: {m}")));
        match self {
            GroupDescriptor::FreeAbelian(r) | GroupDescriptor::IteratedWreath(_, r) if *r == 0 => {
                bad("rank must be at least 1")
            }
            GroupDescriptor::FreeSolvable(d, r) if *d == 0 || *r == 0 => {
                bad("derived length and rank must be at least 1")
            }
            GroupDescriptor::Symmetric(n) if *n == 0 || *n > 255 => bad("degree out of range"),
            GroupDescriptor::Dihedral(n) if *n == 0 || *n > 255 => bad("degree out of range"),
            GroupDescriptor::Cyclic(0) => bad("modulus must be at least 1"),
            GroupDescriptor::WreathOverZ(inner) => {
                if inner.is_leaf_finite_or_heisenberg() {
                    inner.validate()
                } else {
                    bad("left factor must be finite or UT3")
                }
            }
            _ => Ok(()),
        }
    }

    fn is_leaf_finite_or_heisenberg(&self) -> bool {
        matches!(
            self,
            GroupDescriptor::Symmetric(_)
                | GroupDescriptor::Cyclic(_)
                | GroupDescriptor::Heisenberg
                | GroupDescriptor::Dihedral(_)
        )
    }

    /// The structure elements are computed in. Leaf letters live at `level`.
    fn leaf_structure(&self, level: u32) -> Structure {
        match self {
            GroupDescriptor::Symmetric(n) => Structure::Symmetric { degree: *n },
            GroupDescriptor::Cyclic(n) => Structure::Cyclic { modulus: *n, level },
            GroupDescriptor::Heisenberg => Structure::Heisenberg { level },
            GroupDescriptor::Dihedral(n) => Structure::Dihedral { n: *n, level },
            _ => self.structure(),
        }
    }

    pub fn structure(&self) -> Structure {
        match self {
            GroupDescriptor::FreeAbelian(r) => Structure::lattice(*r),
            GroupDescriptor::IteratedWreath(m, r) => iterated_structure(*m, *r),
            GroupDescriptor::FreeSolvable(d, r) => iterated_structure(d - 1, *r),
            GroupDescriptor::WreathOverZ(inner) => {
                Structure::wreath(inner.leaf_structure(1), Structure::lattice(1))
            }
            other => other.leaf_structure(0),
        }
    }

    pub fn spelling(&self) -> Spelling {
        match self {
            GroupDescriptor::FreeSolvable(..) => Spelling::Free,
            _ => Spelling::Indexed,
        }
    }

    /// Degree used for permutation literals, if the group has any.
    pub fn permutation_degree(&self) -> Option<usize> {
        match self {
            GroupDescriptor::Symmetric(n) => Some(*n),
            GroupDescriptor::WreathOverZ(inner) => inner.permutation_degree(),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(
            self,
            GroupDescriptor::Symmetric(_) | GroupDescriptor::Cyclic(_) | GroupDescriptor::Dihedral(_)
        )
    }

    /// The left factor of `wrZ(G)`.
    pub fn wreath_over_z_inner(&self) -> Option<&GroupDescriptor> {
        match self {
            GroupDescriptor::WreathOverZ(inner) => Some(inner),
            _ => None,
        }
    }

    /// Declared nilpotency class, where the library knows it.
    pub fn nilpotency_class(&self) -> Result<u32> {
        match self {
            GroupDescriptor::FreeAbelian(_) | GroupDescriptor::Cyclic(_) => Ok(1),
            GroupDescriptor::Heisenberg => Ok(2),
            GroupDescriptor::Symmetric(n) if *n <= 2 => Ok(1),
            GroupDescriptor::Dihedral(n) if n.is_power_of_two() => Ok(n.trailing_zeros().max(1)),
            _ => Err(Error::UnknownClass(self.to_string())),
        }
    }

    /// A generating set, without inverses.
    pub fn generators(&self) -> Vec<Letter> {
        match self {
            GroupDescriptor::FreeAbelian(r) | GroupDescriptor::FreeSolvable(_, r) => {
                (1..=*r as u32).map(|i| Letter::gen(0, i)).collect()
            }
            GroupDescriptor::IteratedWreath(m, r) => (0..=*m)
                .flat_map(|l| (1..=*r as u32).map(move |i| Letter::gen(l, i)))
                .collect(),
            GroupDescriptor::Symmetric(n) => {
                if *n < 2 {
                    return vec![Letter::One];
                }
                let swap = Permutation::from_cycles(*n, &[vec![1, 2]]).expect("valid cycle");
                let cycle = Permutation::from_cycles(*n, &[(1..=*n).collect()]).expect("valid cycle");
                vec![Letter::Perm(swap), Letter::Perm(cycle)]
            }
            GroupDescriptor::Cyclic(_) => vec![Letter::gen(0, 1)],
            GroupDescriptor::Heisenberg | GroupDescriptor::Dihedral(_) => {
                vec![Letter::gen(0, 1), Letter::gen(0, 2)]
            }
            GroupDescriptor::WreathOverZ(inner) => {
                let mut gens: Vec<Letter> = inner
                    .generators()
                    .into_iter()
                    .map(|l| match l {
                        Letter::Gen(t) => Letter::Gen(GeneratorToken { level: 1, ..t }),
                        other => other,
                    })
                    .collect();
                gens.push(Letter::gen(0, 1));
                gens
            }
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let structure = self.structure();
        let mut out = Word::empty();
        for tok in word::tokenize(text)? {
            let letter = if tok.text == "1" || tok.text == "e" {
                Letter::One
            } else if tok.text.starts_with('(') {
                let n = self.permutation_degree().ok_or_else(|| Error::InvalidToken {
                    token: tok.text.to_string(),
                    group: self.to_string(),
                })?;
                let (body, inverse) = match tok.text.strip_suffix("^-1") {
                    Some(b) => (b, true),
                    None => (tok.text, false),
                };
                let p = Permutation::parse_cycles(body, n).map_err(|e| shift_parse(e, tok.offset))?;
                Letter::Perm(if inverse { p.inverse() } else { p })
            } else {
                match word::parse_indexed(&tok)? {
                    Some((spelling, t)) if spelling == self.spelling() => Letter::Gen(t),
                    _ => {
                        return Err(Error::InvalidToken {
                            token: tok.text.to_string(),
                            group: self.to_string(),
                        })
                    }
                }
            };
            let valid = match (self, &letter) {
                (GroupDescriptor::FreeSolvable(_, r), Letter::Gen(t)) => t.index as usize <= *r,
                (_, l) => structure.owns(l),
            };
            if !valid {
                return Err(Error::InvalidToken { token: tok.text.to_string(), group: self.to_string() });
            }
            out.push(letter);
        }
        Ok(out)
    }

    /// Words over free generators are mapped through the Magnus embedding first.
    pub fn to_structure_word(&self, w: &Word) -> Result<Word> {
        match self {
            GroupDescriptor::FreeSolvable(d, r) => magnus_word(*d, *r as u32, w),
            _ => Ok(w.clone()),
        }
    }

    pub fn eval_word(&self, w: &Word) -> Result<Element> {
        self.structure().eval_word(&self.to_structure_word(w)?)
    }

    pub fn format_word(&self, w: &Word) -> String {
        format_word(w, self.spelling())
    }

    /// Parses an element literal of a leaf group: an integer or `[a,b,…]` for
    /// lattices and cyclic groups, `[a,b,c]` for UT3, cycle notation for
    /// permutation groups.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        let structure = self.structure();
        let ints = || -> Result<Vec<num_bigint::BigInt>> {
            let body = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(text);
            body.split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::parse(0, format!("bad integer in `{text}`"))))
                .collect()
        };
        let e = match self {
            GroupDescriptor::FreeAbelian(_) => Element::Vector(ints()?),
            GroupDescriptor::Cyclic(n) => {
                let v = ints()?;
                if v.len() != 1 {
                    return Err(Error::parse(0, format!("expected one residue in `{text}`")));
                }
                let m = num_bigint::BigInt::from(*n);
                let r = num_integer::Integer::mod_floor(&v[0], &m);
                Element::Residue(num_traits::ToPrimitive::to_u64(&r).unwrap_or(0))
            }
            GroupDescriptor::Heisenberg => {
                let v = ints()?;
                if v.len() != 3 {
                    return Err(Error::parse(0, format!("expected [a,b,c] in `{text}`")));
                }
                Element::Heis(Heis { a: v[0].clone(), b: v[1].clone(), c: v[2].clone() })
            }
            GroupDescriptor::Symmetric(n) | GroupDescriptor::Dihedral(n) => {
                if text == "e" || text == "1" {
                    structure.identity()
                } else {
                    Element::Perm(Permutation::parse_cycles(text, *n)?)
                }
            }
            _ => return Err(Error::Unsupported(format!("element literals for {self}"))),
        };
        if !structure.check(&e) {
            return Err(Error::GroupMismatch(format!("`{text}` is not an element of {self}")));
        }
        Ok(e)
    }
}

fn shift_parse(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse { position: position + offset, message },
        other => other,
    }
}

fn parse_args(text: &str, offset: usize) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| s.parse::<usize>().map_err(|_| Error::parse(offset, format!("bad integer `{s}`"))))
        .collect()
}

fn parse_descriptor(text: &str, offset: usize) -> Result<GroupDescriptor> {
    let call = |name: &str| -> Option<&str> {
        text.strip_prefix(name)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
    };
    if text == "Z" {
        return Ok(GroupDescriptor::FreeAbelian(1));
    }
    if let Some(r) = text.strip_prefix("Z^") {
        let r = r.parse().map_err(|_| Error::parse(offset + 2, "bad rank"))?;
        return Ok(GroupDescriptor::FreeAbelian(r));
    }
    if text == "UT3" {
        return Ok(GroupDescriptor::Heisenberg);
    }
    if let Some(inner) = call("wrZ") {
        return Ok(GroupDescriptor::WreathOverZ(Box::new(parse_descriptor(inner, offset + 4)?)));
    }
    let two = |name: &str| -> Result<Option<(usize, usize)>> {
        match call(name) {
            Some(args) => match parse_args(args, offset + name.len() + 1)?.as_slice() {
                [a, b] => Ok(Some((*a, *b))),
                _ => Err(Error::parse(offset, format!("{name} takes two arguments"))),
            },
            None => Ok(None),
        }
    };
    let one = |name: &str| -> Result<Option<usize>> {
        match call(name) {
            Some(args) => match parse_args(args, offset + name.len() + 1)?.as_slice() {
                [a] => Ok(Some(*a)),
                _ => Err(Error::parse(offset, format!("{name} takes one argument"))),
            },
            None => Ok(None),
        }
    };
    if let Some((m, r)) = two("W")? {
        return Ok(GroupDescriptor::IteratedWreath(m as u32, r));
    }
    if let Some((d, r)) = two("FS")? {
        return Ok(GroupDescriptor::FreeSolvable(d as u32, r));
    }
    if let Some(n) = one("Sym")? {
        return Ok(GroupDescriptor::Symmetric(n));
    }
    if let Some(n) = one("Cyc")? {
        return Ok(GroupDescriptor::Cyclic(n as u64));
    }
    if let Some(n) = one("Dih")? {
        return Ok(GroupDescriptor::Dihedral(n));
    }
    Err(Error::parse(offset, format!("unknown group descriptor `{text}`")))
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::FreeAbelian(r) => write!(f, "Z^{r}"),
            GroupDescriptor::IteratedWreath(m, r) => write!(f, "W({m},{r})"),
            GroupDescriptor::FreeSolvable(d, r) => write!(f, "FS({d},{r})"),
            GroupDescriptor::Symmetric(n) => write!(f, "Sym({n})"),
            GroupDescriptor::Cyclic(n) => write!(f, "Cyc({n})"),
            GroupDescriptor::Heisenberg => write!(f, "UT3"),
            GroupDescriptor::Dihedral(n) => write!(f, "Dih({n})"),
            GroupDescriptor::WreathOverZ(inner) => write!(f, "wrZ({inner})"),
        }
    }
}

impl std::str::FromStr for GroupDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GroupDescriptor::parse(s)
    }
}

/// Splits a comma-separated list of element literals at top-level commas.
pub fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = text[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}
