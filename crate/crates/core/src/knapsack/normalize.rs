use num_bigint::BigUint;

use super::{abelian_wreath, letters, Atom, KnapsackExpression, Valuation};
use crate::error::Result;
use crate::group::{GroupDescriptor, Letter, Word};
use crate::powerword::AbelianWreath;

/// A normalized expression `E''` and the variable that must be 1 in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedExpression {
    pub expression: KnapsackExpression,
    /// Introduced for `A`-letters in constants; absent when there were none.
    pub pinned: Option<String>,
}

impl NormalizedExpression {
    /// Extends a valuation of `E` to one of `E''`.
    pub fn lift(&self, nu: &Valuation) -> Valuation {
        let mut out = nu.clone();
        if let Some(y) = &self.pinned {
            out.insert(y.clone(), BigUint::from(1u32));
        }
        out
    }

    /// Restricts a valuation of `E''` to the variables of `E`, if it honours the pin.
    pub fn project(&self, nu: &Valuation) -> Option<Valuation> {
        let mut out = nu.clone();
        if let Some(y) = &self.pinned {
            if out.remove(y)? != BigUint::from(1u32) {
                return None;
            }
        }
        Some(out)
    }
}

/// Rewrites `E` over `A ≀ H` so that constants lie in `H`, `v0 = 1`, and each
/// period is `A` letters followed by `H` letters. Expressions over a free
/// solvable group are first carried into its Magnus image.
pub fn normalize_expression(e: &KnapsackExpression) -> Result<NormalizedExpression> {
    let group = match e.group {
        GroupDescriptor::FreeSolvable(d, r) => GroupDescriptor::IteratedWreath(d - 1, r),
        ref g => g.clone(),
    };
    let w = abelian_wreath(&group)?;
    let (v, u) = e.structure_words()?;
    let needs_pin = v.iter().any(|c| letters(c).any(|l| w.is_left(l)));
    let pinned = needs_pin.then(|| fresh_name(&e.variables()));
    let mut atoms = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if let Some(y) = &pinned {
            atoms.extend(constant_atoms(&w, c, y));
        } else {
            atoms.push(Atom::Const(c.clone()));
        }
        if let Some(p) = u.get(i) {
            atoms.extend(power_atoms(&w, p, &e.powers[i].1));
        }
    }
    let lead = atoms.iter().take_while(|a| matches!(a, Atom::Const(_))).count();
    let head: Vec<Atom> = atoms.drain(..lead).collect();
    atoms.extend(head);
    let expression = KnapsackExpression::from_atoms(group, atoms)?;
    Ok(NormalizedExpression { expression, pinned })
}

fn fresh_name(taken: &[String]) -> String {
    std::iter::once("y".to_string())
        .chain((0..).map(|i| format!("y{i}")))
        .find(|c| !taken.contains(c))
        .expect("infinitely many candidates")
}

/// Splits `u` into its `H` prefix and `(A letter, following H letters)` parts.
fn parts(w: &AbelianWreath, u: &Word) -> (Word, Vec<(Letter, Word)>) {
    let mut head = Word::empty();
    let mut parts: Vec<(Letter, Word)> = Vec::new();
    for letter in letters(u) {
        if w.is_left(letter) {
            parts.push((letter.clone(), Word::empty()));
        } else if let Some(last) = parts.last_mut() {
            last.1.push(letter.clone());
        } else {
            head.push(letter.clone());
        }
    }
    (head, parts)
}

/// `u^x` as conjugated powers `b (a c)^x b⁻¹ σ(u)^{-x}`, one per `A` letter,
/// the last `σ(u)^{-x}` cancelling against a closing `σ(u)^x`.
fn power_atoms(w: &AbelianWreath, u: &Word, x: &str) -> Vec<Atom> {
    let (head, parts) = parts(w, u);
    let sigma = w.sigma_word(u);
    if parts.is_empty() {
        return vec![Atom::Power(sigma, x.to_string())];
    }
    let sigma_inv = sigma.inverse();
    let mut out = Vec::new();
    let mut before = head;
    for (i, (letter, h)) in parts.iter().enumerate() {
        let mut period = Word::single(letter.clone());
        period.extend_from(h);
        for (_, later) in &parts[i + 1..] {
            period.extend_from(later);
        }
        period.extend_from(&before);
        out.push(Atom::Const(before.clone()));
        out.push(Atom::Power(period, x.to_string()));
        out.push(Atom::Const(before.inverse()));
        if i + 1 < parts.len() && !sigma_inv.is_empty() {
            out.push(Atom::Power(sigma_inv.clone(), x.to_string()));
        }
        before.extend_from(h);
    }
    out
}

/// A constant as `∏ b a^y b⁻¹` followed by `σ(v)`.
fn constant_atoms(w: &AbelianWreath, v: &Word, y: &str) -> Vec<Atom> {
    let (head, parts) = parts(w, v);
    let mut out = Vec::new();
    let mut before = head;
    for (letter, h) in &parts {
        out.push(Atom::Const(before.clone()));
        out.push(Atom::Power(Word::single(letter.clone()), y.to_string()));
        out.push(Atom::Const(before.inverse()));
        before.extend_from(h);
    }
    out.push(Atom::Const(before));
    out
}

#[cfg(test)]
mod tests {
    use super::super::tests::diagonal_example;
    use super::super::{solve_box, KnapsackFile};
    use super::*;
    use crate::group::Structure;

    fn is_normalized(e: &KnapsackExpression) -> bool {
        let w = abelian_wreath(&e.group).unwrap();
        e.constants[0].is_empty()
            && e.constants.iter().all(|c| letters(c).all(|l| !w.is_left(l)))
            && e.powers.iter().all(|(u, _)| {
                let n = letters(u).filter(|l| w.is_left(l)).count();
                n <= 1 && (n == 0 || w.is_left(letters(u).next().unwrap()))
            })
    }

    fn projected(n: &NormalizedExpression, bound: u64) -> Vec<Valuation> {
        solve_box(std::slice::from_ref(&n.expression), bound)
            .unwrap()
            .iter()
            .filter_map(|nu| n.project(nu))
            .collect()
    }

    #[test]
    fn normalized_input_is_kept() {
        let e = diagonal_example();
        let n = normalize_expression(&e).unwrap();
        assert_eq!(n.pinned, None);
        assert_eq!(n.expression, e);
    }

    #[test]
    fn leading_constant_moves_to_the_end() {
        let text = "group: W(1,1)\n(g1.1 g0.1 g1.1)\n(g0.1^-1 g1.1^-1 g0.1)^x\n(g1.1^-1 g0.1^-1)^z\n";
        let e = KnapsackFile::parse(text, None).unwrap().expression;
        let n = normalize_expression(&e).unwrap();
        assert!(is_normalized(&n.expression));
        assert_eq!(n.pinned.as_deref(), Some("y"));
        let direct = solve_box(&[e], 5).unwrap();
        assert!(!direct.is_empty());
        assert_eq!(projected(&n, 5), direct);
    }

    #[test]
    fn multi_letter_periods_split() {
        let text = "group: W(2,1)\n(g0.1 g2.1 g1.1 g2.1^-1 g0.1)^x\n(g0.1^-1 g1.1^-1 g0.1^-1)^z\n(g1.1)\n";
        let e = KnapsackFile::parse(text, None).unwrap().expression;
        let n = normalize_expression(&e).unwrap();
        assert!(is_normalized(&n.expression));
        let s = Structure::wreath(Structure::Lattice { rank: 1, level: 2 }, crate::group::iterated_structure(1, 1));
        assert_eq!(e.group.structure(), s);
        assert_eq!(projected(&n, 4), solve_box(&[e], 4).unwrap());
    }

    #[test]
    fn free_solvable_goes_to_its_magnus_image() {
        let text = "group: FS(2,2)\n(x1 x2)^s\n(x2^-1 x1^-1)^z\n";
        let e = KnapsackFile::parse(text, None).unwrap().expression;
        let n = normalize_expression(&e).unwrap();
        assert_eq!(n.expression.group, GroupDescriptor::IteratedWreath(1, 2));
        assert_eq!(projected(&n, 3), solve_box(&[e], 3).unwrap());
    }
}
