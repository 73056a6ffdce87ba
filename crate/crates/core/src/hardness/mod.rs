//! G-programs over `Sym(5)`, nested commutator witnesses, formula compilation
//! and the reductions into knapsack and power word problems over `G ≀ ℤ`.

mod barrington;
mod reduction;
mod sens;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use barrington::{compile_formula, enumerate_dnfs, Dnf, Literal};
pub use reduction::{
    intended_valuation, reduce_forall_powerword, reduce_qbf2, structured_search, Qbf2Layout,
};
pub use sens::{commutator_pair, five_cycles, sens_witness, SensWitness};

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, Letter, Permutation, Word};

/// Degree of the symmetric group the hardness machinery runs over.
pub const DEGREE: usize = 5;

/// A truth assignment to boolean variables.
pub type Assignment = BTreeMap<String, bool>;

pub fn sym5() -> GroupDescriptor {
    GroupDescriptor::Symmetric(DEGREE)
}

/// `Sym(5) ≀ ℤ`.
pub fn sym5_wreath_z() -> GroupDescriptor {
    GroupDescriptor::WreathOverZ(Box::new(sym5()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instruction {
    pub var: String,
    /// Taken when the variable is 1.
    pub a: Permutation,
    /// Taken when the variable is 0.
    pub b: Permutation,
}

impl Instruction {
    pub fn new(var: impl Into<String>, a: Permutation, b: Permutation) -> Self {
        Instruction { var: var.into(), a: a.extended(DEGREE), b: b.extended(DEGREE) }
    }

    fn inverse(&self) -> Instruction {
        Instruction { var: self.var.clone(), a: self.a.inverse(), b: self.b.inverse() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GProgram {
    pub instructions: Vec<Instruction>,
    pub existential: Vec<String>,
    pub universal: Vec<String>,
}

impl GProgram {
    pub fn new(
        instructions: Vec<Instruction>,
        existential: Vec<String>,
        universal: Vec<String>,
    ) -> Result<Self> {
        let ex: BTreeSet<&String> = existential.iter().collect();
        let un: BTreeSet<&String> = universal.iter().collect();
        if ex.len() != existential.len() || un.len() != universal.len() {
            return Err(Error::precondition("variable declared twice"));
        }
        if let Some(v) = ex.intersection(&un).next() {
            return Err(Error::precondition(format!("`{v}` is both existential and universal")));
        }
        if let Some(i) = instructions.iter().find(|i| !ex.contains(&i.var) && !un.contains(&i.var)) {
            return Err(Error::precondition(format!("undeclared variable `{}`", i.var)));
        }
        Ok(GProgram { instructions, existential, universal })
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Existential variables first, then universal ones.
    pub fn variables(&self) -> Vec<String> {
        self.existential.iter().chain(&self.universal).cloned().collect()
    }

    /// Every assignment to the existential variables, in binary counting order.
    pub fn existential_assignments(&self) -> Vec<Assignment> {
        assignments(&self.existential)
    }

    pub fn universal_assignments(&self) -> Vec<Assignment> {
        assignments(&self.universal)
    }

    /// Whether some existential assignment makes `P` trivial under every universal one.
    pub fn exists_forall(&self) -> Result<bool> {
        for alpha in self.existential_assignments() {
            let mut all = true;
            for beta in self.universal_assignments() {
                let mut gamma = alpha.clone();
                gamma.extend(beta);
                if !gprogram_eval(self, &gamma)?.is_identity() {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Parses the `exists:` / `forall:` headers followed by one
    /// `var a-word b-word` line per instruction.
    pub fn parse(text: &str) -> Result<GProgram> {
        let mut existential = Vec::new();
        let mut universal = Vec::new();
        let mut instructions = Vec::new();
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let at = offset;
            offset += raw.len();
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("exists:") {
                existential.extend(rest.split_whitespace().map(str::to_string));
                continue;
            }
            if let Some(rest) = line.strip_prefix("forall:") {
                universal.extend(rest.split_whitespace().map(str::to_string));
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(at, "expected `var a-word b-word`"));
            }
            let a = parse_perm_word(fields[1]).map_err(|e| shift(e, at + raw.find(fields[1]).unwrap_or(0)))?;
            let b = parse_perm_word(fields[2])
                .map_err(|e| shift(e, at + raw.rfind(fields[2]).unwrap_or(0)))?;
            instructions.push(Instruction::new(fields[0], a, b));
        }
        GProgram::new(instructions, existential, universal)
    }

    pub fn format(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("exists: {}\n", self.existential.join(" ")));
        out.push_str(&format!("forall: {}\n", self.universal.join(" ")));
        for i in &self.instructions {
            out.push_str(&format!("{} {} {}\n", i.var, perm_token(&i.a), perm_token(&i.b)));
        }
        out
    }
}

impl fmt::Display for GProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.instructions {
            write!(f, "({}, {}, {})", i.var, i.a, i.b)?;
        }
        Ok(())
    }
}

fn assignments(vars: &[String]) -> Vec<Assignment> {
    (0u64..1 << vars.len())
        .map(|bits| vars.iter().enumerate().map(|(i, v)| (v.clone(), bits >> i & 1 == 1)).collect())
        .collect()
}

/// `c_1 ⋯ c_ℓ` with `c_j = a_j` when the variable is set and `b_j` otherwise.
pub fn gprogram_eval(p: &GProgram, alpha: &Assignment) -> Result<Permutation> {
    let mut acc = Permutation::identity(DEGREE);
    for i in &p.instructions {
        let bit = alpha
            .get(&i.var)
            .ok_or_else(|| Error::precondition(format!("assignment misses `{}`", i.var)))?;
        acc = acc.compose(if *bit { &i.a } else { &i.b });
    }
    Ok(acc)
}

/// A product of cycles such as `(1,2,3)(4,5)`, or `1` for the identity.
fn parse_perm_word(token: &str) -> Result<Permutation> {
    if token == "1" || token == "e" {
        return Ok(Permutation::identity(DEGREE));
    }
    let mut acc = Permutation::identity(DEGREE);
    let mut rest = token;
    let mut at = 0;
    while !rest.is_empty() {
        let close = rest.find(')').ok_or_else(|| Error::parse(at, "unclosed cycle"))?;
        let mut body = &rest[..=close];
        let mut inverse = false;
        let mut used = close + 1;
        if rest[used..].starts_with("^-1") {
            inverse = true;
            used += 3;
        }
        body = body.trim();
        let p = Permutation::parse_cycles(body, DEGREE).map_err(|e| shift(e, at))?;
        acc = acc.compose(&if inverse { p.inverse() } else { p });
        rest = &rest[used..];
        at += used;
    }
    Ok(acc)
}

fn perm_token(p: &Permutation) -> String {
    let cycles = p.cycles();
    if cycles.is_empty() {
        return "1".into();
    }
    cycles
        .iter()
        .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect()
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse { position: position + by, message },
        other => other,
    }
}

/// A permutation as a single letter, `1` for the identity.
pub fn perm_letter(p: &Permutation) -> Letter {
    if p.is_identity() {
        Letter::One
    } else {
        Letter::Perm(p.clone())
    }
}

pub(crate) fn perm_word(p: &Permutation) -> Word {
    Word::single(perm_letter(p))
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(k);
    let mut n = 2u64;
    while out.len() < k {
        if out.iter().take_while(|&&p| p * p <= n).all(|p| !n.is_multiple_of(*p)) {
            out.push(n);
        }
        n += 1;
    }
    out
}
