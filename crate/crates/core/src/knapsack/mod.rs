//! Knapsack and exponent expressions: evaluation, bounded solving,
//! normalization and ν-decomposition certificates.

mod bounds;
mod certificate;
mod classes;
mod normalize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

pub use bounds::{intersection_bound, magnitude_bounds, BoundEntry, MagnitudeReport};
pub use certificate::{
    check_certificate, nu_decompose, verify_certificate, DecompositionCertificate, Subbundle,
    Triple, Verdict,
};
pub use classes::{parallel_classes, two_variable_lattice, Lattice2, ParallelClassData, TwoVariableSolution};
pub use normalize::{normalize_expression, NormalizedExpression};

use crate::error::{Error, Result};
use crate::group::{Element, GroupDescriptor, Letter, Structure, Word};
use crate::par::{self, Execution};
use crate::powerword::{eval_by_powers, parse_group_header, powerwp, shift, AbelianWreath, PowerWord, Tame};

/// An assignment of natural numbers to variables.
pub type Valuation = BTreeMap<String, BigUint>;

/// One entry of an expression written out atom by atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Const(Word),
    Power(Word, String),
}

/// `v0 u1^{x1} v1 ⋯ ud^{xd} vd`. Repeated variables make it an exponent
/// expression; pairwise distinct ones a knapsack expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackExpression {
    pub group: GroupDescriptor,
    /// `v0, …, vd`.
    pub constants: Vec<Word>,
    /// `(u_i, x_i)`.
    pub powers: Vec<(Word, String)>,
}

impl KnapsackExpression {
    pub fn new(group: GroupDescriptor, constants: Vec<Word>, powers: Vec<(Word, String)>) -> Result<Self> {
        if powers.is_empty() {
            return Err(Error::precondition("an expression needs at least one power"));
        }
        if constants.len() != powers.len() + 1 {
            return Err(Error::precondition("expected one more constant than powers"));
        }
        if let Some((_, x)) = powers.iter().find(|(u, _)| u.is_empty()) {
            return Err(Error::precondition(format!("empty period for variable {x}")));
        }
        Ok(KnapsackExpression { group, constants, powers })
    }

    /// Builds an expression from atoms, merging adjacent constants.
    pub fn from_atoms(group: GroupDescriptor, atoms: Vec<Atom>) -> Result<Self> {
        let mut constants = vec![Word::empty()];
        let mut powers = Vec::new();
        for atom in atoms {
            match atom {
                Atom::Const(w) => constants.last_mut().expect("nonempty").extend_from(&w),
                Atom::Power(u, x) => {
                    powers.push((u, x));
                    constants.push(Word::empty());
                }
            }
        }
        KnapsackExpression::new(group, constants, powers)
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::with_capacity(2 * self.powers.len() + 1);
        for (i, v) in self.constants.iter().enumerate() {
            if !v.is_empty() {
                out.push(Atom::Const(v.clone()));
            }
            if let Some((u, x)) = self.powers.get(i) {
                out.push(Atom::Power(u.clone(), x.clone()));
            }
        }
        out
    }

    pub fn d(&self) -> usize {
        self.powers.len()
    }

    /// `|E| = Σ|u_i| + Σ|v_i|`.
    pub fn size(&self) -> usize {
        self.constants.iter().map(Word::len).sum::<usize>()
            + self.powers.iter().map(|(u, _)| u.len()).sum::<usize>()
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        self.powers.iter().filter(|(_, x)| seen.insert(x.as_str())).map(|(_, x)| x.clone()).collect()
    }

    pub fn is_knapsack(&self) -> bool {
        self.variables().len() == self.d()
    }

    /// `ν(E)` as a power word.
    pub fn instantiate(&self, nu: &Valuation) -> Result<PowerWord> {
        let mut pw = PowerWord::new();
        for (i, v) in self.constants.iter().enumerate() {
            if !v.is_empty() {
                pw.push(v.clone(), 1);
            }
            if let Some((u, x)) = self.powers.get(i) {
                pw.push(u.clone(), BigInt::from(value_of(nu, x)?.clone()));
            }
        }
        Ok(pw)
    }

    /// The body of a knapsack file, without header lines.
    pub fn format_atoms(&self) -> String {
        let mut lines = Vec::new();
        for atom in self.atoms() {
            match atom {
                Atom::Const(w) => lines.push(format!("({})", self.group.format_word(&w))),
                Atom::Power(u, x) => lines.push(format!("({})^{x}", self.group.format_word(&u))),
            }
        }
        lines.join("\n")
    }

    /// Words mapped into the computational structure of the group.
    fn structure_words(&self) -> Result<(Vec<Word>, Vec<Word>)> {
        let v = self.constants.iter().map(|w| self.group.to_structure_word(w)).collect::<Result<_>>()?;
        let u = self.powers.iter().map(|(w, _)| self.group.to_structure_word(w)).collect::<Result<_>>()?;
        Ok((v, u))
    }
}

impl fmt::Display for KnapsackExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .atoms()
            .into_iter()
            .map(|a| match a {
                Atom::Const(w) => format!("({})", self.group.format_word(&w)),
                Atom::Power(u, x) => format!("({})^{x}", self.group.format_word(&u)),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn value_of<'a>(nu: &'a Valuation, x: &str) -> Result<&'a BigUint> {
    nu.get(x).ok_or_else(|| Error::precondition(format!("valuation does not assign {x}")))
}

/// The group `A ≀ H` an expression lives in, for the structural procedures.
pub(crate) fn abelian_wreath(group: &GroupDescriptor) -> Result<AbelianWreath> {
    match Tame::from_structure(&group.structure())? {
        Tame::Wreath(w) => Ok(*w),
        Tame::Lattice { .. } => Err(Error::Unsupported(format!("{group} is not a wreath product"))),
    }
}

/// `ν(E)` as a group element.
pub fn evaluate(e: &KnapsackExpression, nu: &Valuation) -> Result<Element> {
    let (v, u) = e.structure_words()?;
    let mut pw = PowerWord::new();
    for (i, c) in v.into_iter().enumerate() {
        pw.push(c, 1);
        if let Some(p) = u.get(i) {
            pw.push(p.clone(), BigInt::from(value_of(nu, &e.powers[i].1)?.clone()));
        }
    }
    eval_by_powers(&e.group.structure(), &pw)
}

/// Decides `ν(E) = 1` with the power word procedures, never building the element.
pub fn is_solution(e: &KnapsackExpression, nu: &Valuation) -> Result<bool> {
    powerwp(&e.group, &e.instantiate(nu)?)
}

/// Options for [`solve_box_with`].
#[derive(Clone, Debug)]
pub struct BoxSearch {
    pub bound: u64,
    /// Enumeration order; variables of the system missing here are appended.
    pub order: Vec<String>,
    /// Variables held at a fixed value.
    pub fixed: Valuation,
    pub execution: Execution,
}

impl BoxSearch {
    pub fn new(bound: u64) -> Self {
        BoxSearch { bound, order: Vec::new(), fixed: Valuation::new(), execution: Execution::default() }
    }
}

/// All joint solutions with every variable at most `bound`, in lexicographic
/// order of the variables' first appearance.
pub fn solve_box(system: &[KnapsackExpression], bound: u64) -> Result<Vec<Valuation>> {
    solve_box_with(system, &BoxSearch::new(bound))
}

pub fn solve_box_with(system: &[KnapsackExpression], opts: &BoxSearch) -> Result<Vec<Valuation>> {
    let mut vars: Vec<String> = Vec::new();
    let free = |x: &String, vars: &Vec<String>| !opts.fixed.contains_key(x) && !vars.contains(x);
    for x in &opts.order {
        if free(x, &vars) {
            vars.push(x.clone());
        }
    }
    for e in system {
        for x in e.variables() {
            if free(&x, &vars) {
                vars.push(x);
            }
        }
    }
    let plans = system.iter().map(|e| Plan::new(e, &vars, &opts.fixed)).collect::<Result<Vec<_>>>()?;
    let search = Search { plans, bound: opts.bound, nvars: vars.len() };
    let start: Vec<State> = search.plans.iter().map(|p| p.start()).collect::<Result<_>>()?;
    let start = search.advance_all(start, &[])?;
    let found: Vec<Vec<u64>> = if vars.is_empty() {
        if search.accepts(&start) { vec![Vec::new()] } else { Vec::new() }
    } else {
        let branches = par::map_range(opts.execution, opts.bound as usize + 1, |v| {
            let mut xs = vec![0u64; search.nvars];
            xs[0] = v as u64;
            let mut out = Vec::new();
            let states = search.assign(&start, &xs, 0, None)?;
            search.descend(1, &mut xs, states, &mut out)?;
            Ok(out)
        });
        let mut all = Vec::new();
        for b in branches {
            all.extend(b?);
        }
        all
    };
    Ok(found
        .into_iter()
        .map(|xs| {
            let mut nu = opts.fixed.clone();
            for (x, v) in vars.iter().zip(xs) {
                nu.insert(x.clone(), BigUint::from(v));
            }
            nu
        })
        .collect())
}

/// An expression with its atoms evaluated once.
struct Plan {
    structure: Structure,
    constants: Vec<Element>,
    periods: Vec<Element>,
    slots: Vec<Slot>,
}

#[derive(Clone, Copy)]
enum Slot {
    Free(usize),
    Fixed(u64),
}

#[derive(Clone)]
struct State {
    /// Powers consumed so far.
    next: usize,
    /// Value of the prefix ending with `v_next`.
    value: Element,
}

impl Plan {
    fn new(e: &KnapsackExpression, vars: &[String], fixed: &Valuation) -> Result<Plan> {
        let structure = e.group.structure();
        let (v, u) = e.structure_words()?;
        let constants = v.iter().map(|w| structure.eval_word(w)).collect::<Result<_>>()?;
        let periods = u.iter().map(|w| structure.eval_word(w)).collect::<Result<_>>()?;
        let slots = e
            .powers
            .iter()
            .map(|(_, x)| match vars.iter().position(|y| y == x) {
                Some(i) => Ok(Slot::Free(i)),
                None => {
                    let v = value_of(fixed, x)?;
                    v.to_u64()
                        .map(Slot::Fixed)
                        .ok_or_else(|| Error::Unsupported(format!("fixed value of {x} is too large")))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Plan { structure, constants, periods, slots })
    }

    fn start(&self) -> Result<State> {
        Ok(State { next: 0, value: self.constants[0].clone() })
    }

    fn done(&self, s: &State) -> bool {
        s.next == self.slots.len()
    }

    /// The free variable the next power waits on.
    fn pending(&self, s: &State) -> Option<usize> {
        match self.slots.get(s.next) {
            Some(Slot::Free(i)) => Some(*i),
            _ => None,
        }
    }

    /// Consumes powers whose exponents are known: fixed ones and free
    /// variables below `known`.
    fn advance(&self, mut s: State, xs: &[u64], known: usize) -> Result<State> {
        while let Some(slot) = self.slots.get(s.next) {
            let k = match *slot {
                Slot::Fixed(k) => k,
                Slot::Free(i) if i < known => xs[i],
                Slot::Free(_) => break,
            };
            let p = self.structure.pow(&self.periods[s.next], &BigInt::from(k))?;
            self.structure.mul_into(&mut s.value, &p)?;
            s.next += 1;
            self.structure.mul_into(&mut s.value, &self.constants[s.next])?;
        }
        Ok(s)
    }
}

struct Search {
    plans: Vec<Plan>,
    bound: u64,
    nvars: usize,
}

impl Search {
    fn advance_all(&self, states: Vec<State>, xs: &[u64]) -> Result<Vec<State>> {
        self.plans.iter().zip(states).map(|(p, s)| p.advance(s, xs, xs.len())).collect()
    }

    fn accepts(&self, states: &[State]) -> bool {
        states.iter().all(|s| s.value.is_identity())
    }

    /// Whether some finished expression is already nontrivial.
    fn dead(&self, states: &[State]) -> bool {
        self.plans.iter().zip(states).any(|(p, s)| p.done(s) && !s.value.is_identity())
    }

    /// States after fixing variable `level` to `xs[level]`. `running` holds
    /// `value · u^{xs[level]}` for plans waiting on this variable.
    fn assign(
        &self,
        states: &[State],
        xs: &[u64],
        level: usize,
        running: Option<&[Element]>,
    ) -> Result<Vec<State>> {
        let mut out = Vec::with_capacity(states.len());
        for (i, (p, s)) in self.plans.iter().zip(states).enumerate() {
            let mut s = s.clone();
            if p.pending(&s) == Some(level) {
                s.value = match running {
                    Some(r) => r[i].clone(),
                    None => {
                        let q = p.structure.pow(&p.periods[s.next], &BigInt::from(xs[level]))?;
                        p.structure.mul(&s.value, &q)?
                    }
                };
                s.next += 1;
                p.structure.mul_into(&mut s.value, &p.constants[s.next])?;
            }
            out.push(p.advance(s, xs, level + 1)?);
        }
        Ok(out)
    }

    fn descend(&self, level: usize, xs: &mut Vec<u64>, states: Vec<State>, out: &mut Vec<Vec<u64>>) -> Result<()> {
        if self.dead(&states) {
            return Ok(());
        }
        if level == self.nvars {
            if self.accepts(&states) {
                out.push(xs.clone());
            }
            return Ok(());
        }
        let mut running: Vec<Element> = states.iter().map(|s| s.value.clone()).collect();
        for v in 0..=self.bound {
            if v > 0 {
                for (i, (p, s)) in self.plans.iter().zip(&states).enumerate() {
                    if p.pending(s) == Some(level) {
                        p.structure.mul_into(&mut running[i], &p.periods[s.next])?;
                    }
                }
            }
            xs[level] = v;
            let next = self.assign(&states, xs, level, Some(&running))?;
            self.descend(level + 1, xs, next, out)?;
        }
        xs[level] = 0;
        Ok(())
    }
}

/// A knapsack file: `group:` header, optional `vars:` line, one atom per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackFile {
    pub expression: KnapsackExpression,
    pub vars: Vec<String>,
}

impl KnapsackFile {
    pub fn parse(text: &str, group_override: Option<&GroupDescriptor>) -> Result<KnapsackFile> {
        let (group, body, base) = parse_group_header(text, group_override)?;
        let mut atoms = Vec::new();
        let mut declared: Option<Vec<String>> = None;
        let mut offset = base;
        for line in body.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let content = line.split('#').next().unwrap_or("").trim_end();
            let lead = content.len() - content.trim_start().len();
            let content = content.trim_start();
            if content.is_empty() {
                continue;
            }
            let at = start + lead;
            if let Some(rest) = content.strip_prefix("vars:") {
                if declared.is_some() || !atoms.is_empty() {
                    return Err(Error::parse(at, "`vars:` must precede the atoms and appear once"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if let Some(bad) = names.iter().find(|x| !is_identifier(x)) {
                    return Err(Error::parse(at, format!("bad variable name `{bad}`")));
                }
                declared = Some(names);
                continue;
            }
            atoms.push(parse_atom(&group, content, at)?);
        }
        if !atoms.iter().any(|a| matches!(a, Atom::Power(..))) {
            return Err(Error::parse(offset, "no variable powers"));
        }
        let expression = KnapsackExpression::from_atoms(group, atoms)?;
        let used = expression.variables();
        let vars = match declared {
            Some(names) => {
                if let Some(x) = used.iter().find(|x| !names.contains(x)) {
                    return Err(Error::parse(base, format!("variable {x} is not declared in `vars:`")));
                }
                names
            }
            None => used,
        };
        Ok(KnapsackFile { expression, vars })
    }

    pub fn format(&self) -> String {
        format!(
            "group: {}\nvars: {}\n{}\n",
            self.expression.group,
            self.vars.join(" "),
            self.expression.format_atoms()
        )
    }
}

fn is_identifier(x: &str) -> bool {
    let mut chars = x.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_atom(group: &GroupDescriptor, body: &str, at: usize) -> Result<Atom> {
    if !body.starts_with('(') {
        return Err(Error::parse(at, "expected `(` to open an atom"));
    }
    let close = body.rfind(')').ok_or_else(|| Error::parse(at, "unclosed atom"))?;
    let word = group.parse_word(&body[1..close]).map_err(|e| shift(e, at + 1))?;
    let rest = body[close + 1..].trim();
    if rest.is_empty() {
        return Ok(Atom::Const(word));
    }
    let var = rest
        .strip_prefix('^')
        .ok_or_else(|| Error::parse(at + close + 1, "expected `^<variable>` after atom"))?
        .trim();
    if !is_identifier(var) {
        return Err(Error::parse(at + close + 1, format!("bad variable name `{var}`")));
    }
    if word.is_empty() {
        return Err(Error::parse(at, "empty period"));
    }
    Ok(Atom::Power(word, var.to_string()))
}

/// The letter list of a word with `Letter::One` removed.
pub(crate) fn letters(w: &Word) -> impl Iterator<Item = &Letter> {
    w.iter().filter(|l| !matches!(l, Letter::One))
}
