use std::fmt;

use super::sens::{commutator_pair, five_cycles};
use super::{Assignment, GProgram, Instruction, DEGREE};
use crate::error::{Error, Result};
use crate::group::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: String,
    pub positive: bool,
}

/// A formula in disjunctive normal form with quantifier blocks `∃X ∀Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dnf {
    pub exists: Vec<String>,
    pub forall: Vec<String>,
    /// An empty term is `true`.
    pub terms: Vec<Vec<Literal>>,
}

impl Dnf {
    pub fn variables(&self) -> Vec<String> {
        self.exists.iter().chain(&self.forall).cloned().collect()
    }

    pub fn eval(&self, gamma: &Assignment) -> Result<bool> {
        let mut value = false;
        for term in &self.terms {
            let mut t = true;
            for l in term {
                let bit = gamma
                    .get(&l.var)
                    .ok_or_else(|| Error::precondition(format!("assignment misses `{}`", l.var)))?;
                t &= *bit == l.positive;
            }
            value |= t;
        }
        Ok(value)
    }

    /// Brute-force `∃X ∀Y F`.
    pub fn exists_forall(&self) -> Result<bool> {
        let shell = GProgram::new(vec![], self.exists.clone(), self.forall.clone())?;
        for alpha in shell.existential_assignments() {
            let mut all = true;
            for beta in shell.universal_assignments() {
                let mut gamma = alpha.clone();
                gamma.extend(beta);
                if !self.eval(&gamma)? {
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

    /// `exists:` and `forall:` headers, then one term per line as literals
    /// `X1 !Y2`; a line `true` is the empty term.
    pub fn parse(text: &str) -> Result<Dnf> {
        let mut exists = Vec::new();
        let mut forall = Vec::new();
        let mut terms = Vec::new();
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let at = offset;
            offset += raw.len();
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("exists:") {
                exists.extend(rest.split_whitespace().map(str::to_string));
                continue;
            }
            if let Some(rest) = line.strip_prefix("forall:") {
                forall.extend(rest.split_whitespace().map(str::to_string));
                continue;
            }
            if line == "true" {
                terms.push(Vec::new());
                continue;
            }
            let mut term = Vec::new();
            for tok in line.split_whitespace() {
                let (var, positive) = match tok.strip_prefix('!') {
                    Some(v) => (v, false),
                    None => (tok, true),
                };
                if !exists.iter().chain(&forall).any(|x| x == var) {
                    let col = raw.find(tok).unwrap_or(0);
                    return Err(Error::parse(at + col, format!("undeclared variable `{var}`")));
                }
                term.push(Literal { var: var.to_string(), positive });
            }
            terms.push(term);
        }
        let dnf = Dnf { exists, forall, terms };
        GProgram::new(vec![], dnf.exists.clone(), dnf.forall.clone())?;
        Ok(dnf)
    }

    pub fn format(&self) -> String {
        let mut out = format!("exists: {}\nforall: {}\n", self.exists.join(" "), self.forall.join(" "));
        for term in &self.terms {
            if term.is_empty() {
                out.push_str("true\n");
                continue;
            }
            let lits: Vec<String> =
                term.iter().map(|l| format!("{}{}", if l.positive { "" } else { "!" }, l.var)).collect();
            out.push_str(&lits.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "∃{} ∀{} ", self.exists.join(","), self.forall.join(","))?;
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                if t.is_empty() {
                    return "1".to_string();
                }
                t.iter()
                    .map(|l| format!("{}{}", if l.positive { "" } else { "¬" }, l.var))
                    .collect::<Vec<_>>()
                    .join("∧")
            })
            .collect();
        write!(f, "{}", terms.join(" ∨ "))
    }
}

enum Formula {
    Lit(Literal),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
}

fn and_all(mut parts: Vec<Formula>) -> Formula {
    if parts.len() == 1 {
        return parts.pop().expect("one part");
    }
    let right = parts.split_off(parts.len() / 2);
    Formula::And(Box::new(and_all(parts)), Box::new(and_all(right)))
}

/// A program that evaluates to `target` when `f` holds and to `1` otherwise.
fn compile(f: &Formula, target: &Permutation, out: &mut Vec<Instruction>) -> Result<()> {
    let id = Permutation::identity(DEGREE);
    match f {
        Formula::Lit(l) => {
            let (a, b) = if l.positive { (target.clone(), id) } else { (id, target.clone()) };
            out.push(Instruction::new(l.var.clone(), a, b));
        }
        Formula::Not(g) => {
            let start = out.len();
            compile(g, &target.inverse(), out)?;
            let last = out[start..].last_mut().ok_or_else(|| Error::Internal("empty subprogram".into()))?;
            last.a = last.a.compose(target);
            last.b = last.b.compose(target);
        }
        Formula::And(g, h) => {
            let (c0, c1) = commutator_pair(target)
                .ok_or_else(|| Error::Internal(format!("{target} is not a five-cycle")))?;
            let mut p = Vec::new();
            compile(g, &c0, &mut p)?;
            let mut q = Vec::new();
            compile(h, &c1, &mut q)?;
            out.extend(p.iter().rev().map(Instruction::inverse));
            out.extend(q.iter().rev().map(Instruction::inverse));
            out.extend(p);
            out.extend(q);
        }
    }
    Ok(())
}

/// A program over `Sym(5)` that evaluates to the identity exactly on the
/// satisfying assignments of `F`, and to a five-cycle elsewhere.
pub fn compile_formula(f: &Dnf) -> Result<GProgram> {
    if f.terms.is_empty() {
        return Err(Error::precondition("formula has no terms"));
    }
    if f.terms.iter().any(Vec::is_empty) {
        return GProgram::new(vec![], f.exists.clone(), f.forall.clone());
    }
    let negated_terms: Vec<Formula> = f
        .terms
        .iter()
        .map(|t| {
            let lits = t.iter().map(|l| Formula::Lit(l.clone())).collect();
            Formula::Not(Box::new(and_all(lits)))
        })
        .collect();
    let or = Formula::Not(Box::new(and_all(negated_terms)));
    let mut instructions = Vec::new();
    compile(&Formula::Not(Box::new(or)), &five_cycles()[0], &mut instructions)?;
    GProgram::new(instructions, f.exists.clone(), f.forall.clone())
}

/// Every DNF over `vars` with between one and `max_terms` distinct terms,
/// each term a consistent set of literals, with the first `m` variables
/// existential, for every `m ∈ 0..=|vars|`.
pub fn enumerate_dnfs(vars: &[String], max_terms: usize) -> Vec<Dnf> {
    let mut terms: Vec<Vec<Literal>> = vec![Vec::new()];
    for v in vars {
        terms = terms
            .into_iter()
            .flat_map(|t| {
                let mut pos = t.clone();
                pos.push(Literal { var: v.clone(), positive: true });
                let mut neg = t.clone();
                neg.push(Literal { var: v.clone(), positive: false });
                [t, pos, neg]
            })
            .collect();
    }
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((chosen, next)) = stack.pop() {
        if !chosen.is_empty() {
            sets.push(chosen.clone());
        }
        if chosen.len() < max_terms {
            for i in next..terms.len() {
                let mut c = chosen.clone();
                c.push(i);
                stack.push((c, i + 1));
            }
        }
    }
    sets.sort();
    let mut out = Vec::new();
    for m in 0..=vars.len() {
        for set in &sets {
            out.push(Dnf {
                exists: vars[..m].to_vec(),
                forall: vars[m..].to_vec(),
                terms: set.iter().map(|&i| terms[i].clone()).collect(),
            });
        }
    }
    out
}
