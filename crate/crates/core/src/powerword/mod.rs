//! Power words and the decision procedures built on them.

mod abelian;
mod gwrz;
mod progression;
mod tame;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use abelian::{lattice_ratio, AbelianGroup};
pub use gwrz::powerwp_gwrz;
pub use progression::{interval_partition, progression_sum_support, ArithmeticProgression, SumSupport};
pub use tame::{AbelianWreath, NormFactor, Ray, Tame};

use crate::error::{Error, Result};
use crate::group::{Element, GroupDescriptor, Structure, Word};

/// Default expansion limit for the naive evaluator, in letters.
pub const DEFAULT_GUARD: u64 = 1_000_000;

/// One factor `u^k` of a power word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub period: Word,
    pub exponent: BigInt,
}

/// A succinct product `u_1^{k_1} ⋯ u_d^{k_d}` with arbitrary precision exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PowerWord {
    pub factors: Vec<Factor>,
}

impl PowerWord {
    pub fn new() -> Self {
        PowerWord::default()
    }

    pub fn from_word(w: &Word) -> Self {
        PowerWord::single(w.clone(), BigInt::one())
    }

    pub fn single(period: Word, exponent: impl Into<BigInt>) -> Self {
        PowerWord { factors: vec![Factor { period, exponent: exponent.into() }] }
    }

    pub fn push(&mut self, period: Word, exponent: impl Into<BigInt>) {
        self.factors.push(Factor { period, exponent: exponent.into() });
    }

    pub fn with(mut self, period: Word, exponent: impl Into<BigInt>) -> Self {
        self.push(period, exponent);
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn concat(&self, other: &PowerWord) -> PowerWord {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        PowerWord { factors }
    }

    pub fn inverse(&self) -> PowerWord {
        PowerWord {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| Factor { period: f.period.clone(), exponent: -&f.exponent })
                .collect(),
        }
    }

    /// Merges neighbouring powers of the same period or its inverse and drops
    /// empty factors. The denotation is unchanged.
    pub fn reduced(&self) -> PowerWord {
        let mut out: Vec<Factor> = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            if f.exponent.is_zero() || f.period.is_empty() {
                continue;
            }
            if let Some(top) = out.last_mut() {
                if top.period == f.period {
                    top.exponent += &f.exponent;
                } else if top.period.len() == f.period.len() && top.period == f.period.inverse() {
                    top.exponent -= &f.exponent;
                } else {
                    out.push(f.clone());
                    continue;
                }
                if top.exponent.is_zero() {
                    out.pop();
                }
                continue;
            }
            out.push(f.clone());
        }
        PowerWord { factors: out }
    }

    /// `self⁻¹ · other`, freely reduced.
    pub fn relative(&self, other: &PowerWord) -> PowerWord {
        let common = self.factors.iter().zip(&other.factors).take_while(|(a, b)| a == b).count();
        let head = PowerWord { factors: self.factors[common..].to_vec() };
        let tail = PowerWord { factors: other.factors[common..].to_vec() };
        head.inverse().concat(&tail).reduced()
    }

    /// Applies a letter-level map to every period.
    pub fn map_periods(&self, f: impl Fn(&Word) -> Word) -> PowerWord {
        PowerWord {
            factors: self
                .factors
                .iter()
                .map(|x| Factor { period: f(&x.period), exponent: x.exponent.clone() })
                .collect(),
        }
    }

    /// `Σ |k_i|·|u_i|`, the length of the expansion.
    pub fn expanded_len(&self) -> BigUint {
        self.factors
            .iter()
            .map(|f| f.exponent.magnitude() * BigUint::from(f.period.len()))
            .sum()
    }

    /// The input size `Σ |u_i| + bits(k_i)`.
    pub fn size(&self) -> usize {
        self.factors.iter().map(|f| f.period.len() + f.exponent.bits() as usize).sum()
    }

    /// Expands into a plain word, refusing past `guard` letters.
    pub fn expand(&self, guard: u64) -> Result<Word> {
        let needed = self.expanded_len();
        if needed > BigUint::from(guard) {
            return Err(Error::GuardExceeded { needed: needed.to_string(), limit: guard });
        }
        let mut out = Word::empty();
        for f in &self.factors {
            let w = if f.exponent.is_negative() { f.period.inverse() } else { f.period.clone() };
            let k = f.exponent.magnitude().to_usize().unwrap_or(0);
            for _ in 0..k {
                out.extend_from(&w);
            }
        }
        Ok(out)
    }

    /// Parses a power word body, one `(<tokens>) ^ <int>` factor per line.
    /// `base` is the byte offset of `text` inside its file, for error positions.
    pub fn parse_body(group: &GroupDescriptor, text: &str, base: usize) -> Result<PowerWord> {
        let mut pw = PowerWord::new();
        let mut offset = base;
        for line in text.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let trimmed = strip_comment(line).trim_end();
            let lead = trimmed.len() - trimmed.trim_start().len();
            let body = trimmed.trim_start();
            if body.is_empty() {
                continue;
            }
            let (period, exponent) = parse_factor(group, body, start + lead)?;
            pw.push(period, exponent);
        }
        Ok(pw)
    }

    pub fn format(&self, group: &GroupDescriptor) -> String {
        self.factors
            .iter()
            .map(|f| format!("({}) ^ {}", group.format_word(&f.period), f.exponent))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for PowerWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.factors.iter().map(|x| format!("({})^{}", x.period, x.exponent)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses `(<tokens>) ^ <int>`; a missing exponent means 1.
pub fn parse_factor(group: &GroupDescriptor, body: &str, at: usize) -> Result<(Word, BigInt)> {
    if !body.starts_with('(') {
        return Err(Error::parse(at, "expected `(` to open a factor"));
    }
    let close = body.rfind(')').ok_or_else(|| Error::parse(at, "unclosed factor"))?;
    let inner = &body[1..close];
    let word = group.parse_word(inner).map_err(|e| shift(e, at + 1))?;
    let rest = body[close + 1..].trim();
    let exponent = if rest.is_empty() {
        BigInt::one()
    } else {
        let digits = rest
            .strip_prefix('^')
            .ok_or_else(|| Error::parse(at + close + 1, "expected `^` after factor"))?
            .trim();
        digits
            .parse::<BigInt>()
            .map_err(|_| Error::parse(at + close + 1, format!("bad exponent `{digits}`")))?
    };
    Ok((word, exponent))
}

pub(crate) fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse { position: position + by, message },
        other => other,
    }
}

/// A power word file: a `group:` header followed by factor lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerWordFile {
    pub group: GroupDescriptor,
    pub word: PowerWord,
}

impl PowerWordFile {
    pub fn parse(text: &str, group_override: Option<&GroupDescriptor>) -> Result<PowerWordFile> {
        let (group, body, base) = parse_group_header(text, group_override)?;
        let word = PowerWord::parse_body(&group, body, base)?;
        Ok(PowerWordFile { group, word })
    }

    pub fn format(&self) -> String {
        format!("group: {}\n{}\n", self.group, self.word.format(&self.group))
    }
}

/// Splits off a leading `group: <descriptor>` line. Returns the group, the
/// remaining text and its byte offset.
pub fn parse_group_header<'a>(
    text: &'a str,
    group_override: Option<&GroupDescriptor>,
) -> Result<(GroupDescriptor, &'a str, usize)> {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let content = strip_comment(line).trim();
        if content.is_empty() {
            offset += line.len();
            continue;
        }
        if let Some(desc) = content.strip_prefix("group:") {
            let parsed = GroupDescriptor::parse(desc.trim())
                .map_err(|e| shift(e, offset + line.find(':').unwrap_or(0) + 1))?;
            if let Some(g) = group_override {
                if *g != parsed {
                    return Err(Error::GroupMismatch(format!(
                        "file declares {parsed}, command line says {g}"
                    )));
                }
            }
            let next = offset + line.len();
            return Ok((parsed, &text[next..], next));
        }
        break;
    }
    match group_override {
        Some(g) => Ok((g.clone(), &text[offset..], offset)),
        None => Err(Error::parse(offset, "missing `group:` header")),
    }
}

/// Evaluates a power word by full expansion. This is the reference oracle.
pub fn naive_eval(group: &GroupDescriptor, pw: &PowerWord) -> Result<Element> {
    naive_eval_with_guard(group, pw, DEFAULT_GUARD)
}

pub fn naive_eval_with_guard(group: &GroupDescriptor, pw: &PowerWord, guard: u64) -> Result<Element> {
    naive_eval_structure(&group.structure(), &map_free(group, pw)?, guard)
}

pub fn naive_eval_structure(structure: &Structure, pw: &PowerWord, guard: u64) -> Result<Element> {
    let needed = pw.expanded_len();
    if needed > BigUint::from(guard) {
        return Err(Error::GuardExceeded { needed: needed.to_string(), limit: guard });
    }
    let mut acc = structure.identity();
    for f in &pw.factors {
        let w = if f.exponent.is_negative() { f.period.inverse() } else { f.period.clone() };
        let k = f.exponent.magnitude().to_u64().unwrap_or(0);
        for _ in 0..k {
            for letter in w.iter() {
                structure.apply_letter(&mut acc, letter)?;
            }
        }
    }
    Ok(acc)
}

/// Witness `(s, t)` with `u^s = v^t` generating all solutions of `u^x = v^y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommensurabilityWitness {
    pub s: BigInt,
    pub t: BigInt,
}

fn tame_for(group: &GroupDescriptor) -> Result<Tame> {
    Tame::from_structure(&group.structure())
}

/// Decides `pw = 1`. Dispatches on the group kind.
pub fn powerwp(group: &GroupDescriptor, pw: &PowerWord) -> Result<bool> {
    match group {
        GroupDescriptor::Symmetric(_)
        | GroupDescriptor::Cyclic(_)
        | GroupDescriptor::Dihedral(_)
        | GroupDescriptor::Heisenberg => Ok(eval_by_powers(&group.structure(), pw)?.is_identity()),
        GroupDescriptor::WreathOverZ(inner) if !matches!(**inner, GroupDescriptor::Cyclic(_)) => {
            powerwp_gwrz(group, pw)
        }
        _ => tame_for(group)?.power_wp(&map_free(group, pw)?),
    }
}

fn map_free(group: &GroupDescriptor, pw: &PowerWord) -> Result<PowerWord> {
    let mut out = PowerWord::new();
    for f in &pw.factors {
        out.push(group.to_structure_word(&f.period)?, f.exponent.clone());
    }
    Ok(out)
}

/// Evaluates each factor with fast exponentiation. Only sensible where
/// elements stay small: finite groups, UT3 and lattices.
pub fn eval_by_powers(structure: &Structure, pw: &PowerWord) -> Result<Element> {
    let mut acc = structure.identity();
    for f in &pw.factors {
        let u = structure.eval_word(&f.period)?;
        let p = structure.pow(&u, &f.exponent)?;
        structure.mul_into(&mut acc, &p)?;
    }
    Ok(acc)
}

/// Finds `z` with `u^z = v`, if one exists.
pub fn powerpp(group: &GroupDescriptor, u: &Word, v: &PowerWord) -> Result<Option<BigInt>> {
    match group {
        GroupDescriptor::FreeAbelian(_)
        | GroupDescriptor::IteratedWreath(..)
        | GroupDescriptor::FreeSolvable(..) => {
            let u = group.to_structure_word(u)?;
            tame_for(group)?.power_pp(&u, &map_free(group, v)?)
        }
        GroupDescriptor::WreathOverZ(inner) if matches!(**inner, GroupDescriptor::Cyclic(_)) => {
            tame_for(group)?.power_pp(u, v)
        }
        _ => Err(Error::Unsupported(format!("power problem over {group}"))),
    }
}

pub fn powerwp_iterated(m: u32, r: usize, pw: &PowerWord) -> Result<bool> {
    powerwp(&GroupDescriptor::IteratedWreath(m, r), pw)
}

pub fn powerpp_iterated(m: u32, r: usize, u: &Word, v: &PowerWord) -> Result<Option<BigInt>> {
    powerpp(&GroupDescriptor::IteratedWreath(m, r), u, v)
}

/// `u^z = v` in `ℤ^r`.
pub fn powerpp_zr(r: usize, u: &Word, v: &PowerWord) -> Result<Option<BigInt>> {
    powerpp(&GroupDescriptor::FreeAbelian(r), u, v)
}

/// The full solution lattice of `u^x = v^y` for nontrivial `u`, `v`.
pub fn commensurate(
    group: &GroupDescriptor,
    u: &Word,
    v: &Word,
) -> Result<Option<CommensurabilityWitness>> {
    let tame = tame_for(group)?;
    let u = group.to_structure_word(u)?;
    let v = group.to_structure_word(v)?;
    Ok(tame.commensurate(&u, &v)?.map(|(s, t)| CommensurabilityWitness { s, t }))
}

/// `Int(p, q)` as an arithmetic progression.
pub fn ray_intersection(
    group: &GroupDescriptor,
    p: &Ray,
    q: &Ray,
) -> Result<Option<ArithmeticProgression>> {
    tame_for(group)?.ray_intersection(p, q)
}

/// Rewrites `pw` over `A ≀ H` so that every period is one `A` letter (or
/// none) followed by `H` letters.
pub fn normalize_powerword(group: &GroupDescriptor, pw: &PowerWord) -> Result<PowerWord> {
    match tame_for(group)? {
        Tame::Wreath(w) => Ok(w.normalized_powerword(&map_free(group, pw)?)),
        Tame::Lattice { .. } => Err(Error::Unsupported(format!("{group} is not a wreath product"))),
    }
}

/// `τ(u)(v)` for `u` over `A ≀ H` and a position `v` over `H`.
pub fn tau_eval(group: &GroupDescriptor, u: &PowerWord, v: &PowerWord) -> Result<Element> {
    match tame_for(group)? {
        Tame::Wreath(w) => {
            let value = w.tau_at(&map_free(group, u)?, v)?;
            Ok(w.left.to_element(&value))
        }
        Tame::Lattice { .. } => Err(Error::Unsupported(format!("{group} is not a wreath product"))),
    }
}

/// Whether every exponent is zero or the word is empty.
pub fn is_syntactically_trivial(pw: &PowerWord) -> bool {
    pw.factors.iter().all(|f| f.exponent.is_zero() || f.period.is_empty())
}
