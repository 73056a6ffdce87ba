use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{abelian_wreath, KnapsackExpression};
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, Word};
use crate::powerword::{AbelianWreath, PowerWord, Tame};

/// A class of mutually commensurable periods `σ(u_r)`, `r` counted from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelClassData {
    pub members: Vec<usize>,
    /// Generates a cyclic group containing every `σ(u_r)` of the class.
    pub h_c: Word,
    /// `h_C = ∏ σ(u_r)^{α_r}`.
    pub alpha: BTreeMap<usize, BigInt>,
    /// `σ(u_r) = h_C^{β_r}`.
    pub beta: BTreeMap<usize, BigInt>,
}

/// Partitions `{r | σ(u_r) ≠ 1}` by commensurability and computes `h_C`, `α`, `β`.
pub fn parallel_classes(e: &KnapsackExpression) -> Result<Vec<ParallelClassData>> {
    let w = abelian_wreath(&e.group)?;
    let (_, u) = e.structure_words()?;
    classes_of(&w, &u)
}

pub(crate) fn classes_of(w: &AbelianWreath, periods: &[Word]) -> Result<Vec<ParallelClassData>> {
    let h = w.right_structure();
    let mut classes: Vec<ParallelClassData> = Vec::new();
    for (i, u) in periods.iter().enumerate() {
        let r = i + 1;
        let sigma = w.sigma_word(u);
        if w.right.is_trivial_word(&sigma)? {
            continue;
        }
        let mut home = None;
        for (c, class) in classes.iter().enumerate() {
            if let Some(pq) = w.right.commensurate(&class.h_c, &sigma)? {
                home = Some((c, pq));
                break;
            }
        }
        let Some((c, (p, q))) = home else {
            classes.push(ParallelClassData {
                members: vec![r],
                h_c: sigma,
                alpha: [(r, BigInt::one())].into(),
                beta: [(r, BigInt::one())].into(),
            });
            continue;
        };
        // h_C^p = σ^q with p, q coprime: the new generator is h_C^l σ^k
        // for kp + lq = 1, and then h_C = gen^q, σ = gen^p.
        let g = p.extended_gcd(&q);
        let (k, l) = if g.gcd.is_negative() { (-g.x, -g.y) } else { (g.x, g.y) };
        let class = &mut classes[c];
        let old = h.eval_word(&class.h_c)?;
        let s = h.eval_word(&sigma)?;
        let gen = h.mul(&h.pow(&old, &l)?, &h.pow(&s, &k)?)?;
        class.h_c = h.to_word(&gen)?;
        for b in class.beta.values_mut() {
            *b *= &q;
        }
        for a in class.alpha.values_mut() {
            *a *= &l;
        }
        class.members.push(r);
        class.beta.insert(r, p);
        class.alpha.insert(r, k);
    }
    for class in &mut classes {
        let first = class.members[0];
        if class.beta[&first].is_negative() {
            class.h_c = class.h_c.inverse();
            class.beta.values_mut().for_each(|b| *b = -&*b);
            class.alpha.values_mut().for_each(|a| *a = -&*a);
        }
        check_class(w, periods, class)?;
    }
    Ok(classes)
}

fn check_class(w: &AbelianWreath, periods: &[Word], class: &ParallelClassData) -> Result<()> {
    let h = w.right_structure();
    let gen = h.eval_word(&class.h_c)?;
    let mut product = h.identity();
    for &r in &class.members {
        let s = h.eval_word(&w.sigma_word(&periods[r - 1]))?;
        if h.pow(&gen, &class.beta[&r])? != s {
            return Err(Error::Internal(format!("h_C^β does not give σ(u_{r})")));
        }
        h.mul_into(&mut product, &h.pow(&s, &class.alpha[&r])?)?;
    }
    if product != gen {
        return Err(Error::Internal("∏ σ(u_r)^α differs from h_C".into()));
    }
    Ok(())
}

/// The solutions of `g1^x g2^y = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lattice2 {
    Zero,
    /// Generated by one vector.
    Cyclic(BigInt, BigInt),
    Full,
}

/// `{(x, y) ∈ ℤ² | g1^x g2^y = h}`: empty or a coset of a [`Lattice2`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoVariableSolution {
    Empty,
    Coset { base: (BigInt, BigInt), lattice: Lattice2 },
}

impl TwoVariableSolution {
    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        let TwoVariableSolution::Coset { base, lattice } = self else {
            return false;
        };
        let (dx, dy) = (x - &base.0, y - &base.1);
        match lattice {
            Lattice2::Full => true,
            Lattice2::Zero => dx.is_zero() && dy.is_zero(),
            Lattice2::Cyclic(p, q) => {
                if p.is_zero() {
                    dx.is_zero() && dy.is_multiple_of(q)
                } else {
                    dx.is_multiple_of(p) && &(&dx / p) * q == dy
                }
            }
        }
    }
}

impl fmt::Display for TwoVariableSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoVariableSolution::Empty => write!(f, "empty"),
            TwoVariableSolution::Coset { base, lattice } => {
                let lattice = match lattice {
                    Lattice2::Zero => "0".to_string(),
                    Lattice2::Cyclic(p, q) => format!("Z({p},{q})"),
                    Lattice2::Full => "Z^2".to_string(),
                };
                write!(f, "({},{}) + {lattice}", base.0, base.1)
            }
        }
    }
}

/// Solves `g1^x g2^y = h` over a torsion-free group. Where the `σ`-images
/// leave a one-parameter family, that parameter is searched within a radius
/// growing with the input length.
pub fn two_variable_lattice(
    group: &GroupDescriptor,
    g1: &Word,
    g2: &Word,
    h: &Word,
) -> Result<TwoVariableSolution> {
    let tame = Tame::from_structure(&group.structure())?;
    if let Tame::Wreath(w) = &tame {
        if w.left.modulus.is_some() {
            return Err(Error::precondition(format!("{group} has torsion")));
        }
    }
    let g1 = group.to_structure_word(g1)?;
    let g2 = group.to_structure_word(g2)?;
    let h = group.to_structure_word(h)?;
    solve(&tame, &g1, &g2, &h)
}

fn solve(tame: &Tame, g1: &Word, g2: &Word, h: &Word) -> Result<TwoVariableSolution> {
    let lattice = homogeneous(tame, g1, g2)?;
    let zero = BigInt::zero;
    let base = match &lattice {
        Lattice2::Full => tame.is_trivial_word(h)?.then(|| (zero(), zero())),
        Lattice2::Cyclic(p, _) if p.is_zero() => {
            tame.power_pp(g1, &PowerWord::from_word(h))?.map(|x| (x, zero()))
        }
        Lattice2::Cyclic(_, q) if q.is_zero() => {
            tame.power_pp(g2, &PowerWord::from_word(h))?.map(|y| (zero(), y))
        }
        Lattice2::Cyclic(p, _) => {
            let mut found = None;
            let mut a = zero();
            while &a < p {
                let target = PowerWord::single(g1.clone(), -&a).with(h.clone(), 1);
                if let Some(b) = tame.power_pp(g2, &target)? {
                    found = Some((a, b));
                    break;
                }
                a += 1;
            }
            found
        }
        Lattice2::Zero => unique(tame, g1, g2, h)?,
    };
    Ok(match base {
        None => TwoVariableSolution::Empty,
        Some(b) => TwoVariableSolution::Coset { base: canonical(b, &lattice), lattice },
    })
}

fn homogeneous(tame: &Tame, g1: &Word, g2: &Word) -> Result<Lattice2> {
    let t1 = tame.is_trivial_word(g1)?;
    let t2 = tame.is_trivial_word(g2)?;
    Ok(match (t1, t2) {
        (true, true) => Lattice2::Full,
        (true, false) => Lattice2::Cyclic(BigInt::one(), BigInt::zero()),
        (false, true) => Lattice2::Cyclic(BigInt::zero(), BigInt::one()),
        (false, false) => match tame.commensurate(g1, g2)? {
            Some((s, t)) => Lattice2::Cyclic(s, -t),
            None => Lattice2::Zero,
        },
    })
}

fn holds(tame: &Tame, g1: &Word, g2: &Word, h: &Word, x: &BigInt, y: &BigInt) -> Result<bool> {
    let pw = PowerWord::single(g1.clone(), x.clone()).with(g2.clone(), y.clone()).with(h.inverse(), 1);
    tame.power_wp(&pw)
}

/// The single solution when `g1`, `g2` are not commensurable.
fn unique(tame: &Tame, g1: &Word, g2: &Word, h: &Word) -> Result<Option<(BigInt, BigInt)>> {
    let w = match tame {
        Tame::Lattice { .. } => {
            let vec = |x: &Word| -> Result<Vec<BigInt>> {
                let e = tame.structure().eval_word(x)?;
                Ok(e.as_vector().map(<[BigInt]>::to_vec).unwrap_or_default())
            };
            return Ok(cramer(&vec(g1)?, &vec(g2)?, &vec(h)?));
        }
        Tame::Wreath(w) => w,
    };
    let below = solve(&w.right, &w.sigma_word(g1), &w.sigma_word(g2), &w.sigma_word(h))?;
    let TwoVariableSolution::Coset { base, lattice } = below else {
        return Ok(None);
    };
    match lattice {
        Lattice2::Zero => Ok(holds(tame, g1, g2, h, &base.0, &base.1)?.then_some(base)),
        Lattice2::Full => base_group_solution(w, g1, g2, h),
        Lattice2::Cyclic(p, q) => {
            let radius = 64 + 4 * (g1.len() + g2.len() + h.len()) as i64;
            for step in 0..=2 * radius {
                let n = if step % 2 == 0 { BigInt::from(step / 2) } else { -BigInt::from(step / 2 + 1) };
                let (x, y) = (&base.0 + &n * &p, &base.1 + &n * &q);
                if holds(tame, g1, g2, h, &x, &y)? {
                    return Ok(Some((x, y)));
                }
            }
            Ok(None)
        }
    }
}

/// `g1`, `g2`, `h` all in the base group: a linear system over `τ`.
fn base_group_solution(
    w: &AbelianWreath,
    g1: &Word,
    g2: &Word,
    h: &Word,
) -> Result<Option<(BigInt, BigInt)>> {
    let maps = [w.tau_of_word(g1)?, w.tau_of_word(g2)?, w.tau_of_word(h)?];
    let mut keys: Vec<_> = maps.iter().flat_map(|m| m.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let flat = |m: &BTreeMap<_, (Word, Vec<BigInt>)>| -> Vec<BigInt> {
        keys.iter()
            .flat_map(|k| m.get(k).map(|(_, v)| v.clone()).unwrap_or_else(|| w.left.zero()))
            .collect()
    };
    Ok(cramer(&flat(&maps[0]), &flat(&maps[1]), &flat(&maps[2])))
}

/// `x·a + y·b = c` for linearly independent `a`, `b`.
fn cramer(a: &[BigInt], b: &[BigInt], c: &[BigInt]) -> Option<(BigInt, BigInt)> {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let det = &a[i] * &b[j] - &a[j] * &b[i];
            if det.is_zero() {
                continue;
            }
            let xn = &c[i] * &b[j] - &c[j] * &b[i];
            let yn = &a[i] * &c[j] - &a[j] * &c[i];
            if !xn.is_multiple_of(&det) || !yn.is_multiple_of(&det) {
                return None;
            }
            let (x, y) = (xn / &det, yn / &det);
            let ok = (0..a.len()).all(|k| &x * &a[k] + &y * &b[k] == c[k]);
            return ok.then_some((x, y));
        }
    }
    None
}

/// The coset representative with least `|x|`, then least `|y|`, then least `x`.
fn canonical(base: (BigInt, BigInt), lattice: &Lattice2) -> (BigInt, BigInt) {
    let (x, y) = base;
    match lattice {
        Lattice2::Full => (BigInt::zero(), BigInt::zero()),
        Lattice2::Zero => (x, y),
        Lattice2::Cyclic(p, q) if p.is_zero() => {
            let m = q.abs();
            let r = y.mod_floor(&m);
            let other = &r - &m;
            (x, if other.abs() <= r { other } else { r })
        }
        Lattice2::Cyclic(p, q) => {
            let m = p.abs();
            let r = x.mod_floor(&m);
            let at = |a: BigInt| {
                let n = (&a - &x) / p;
                let b = &y + &n * q;
                (a, b)
            };
            let (c1, c2) = (at(r.clone()), at(&r - &m));
            let key = |c: &(BigInt, BigInt)| (c.0.abs(), c.1.abs(), c.0.clone());
            if key(&c2) <= key(&c1) {
                c2
            } else {
                c1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Letter;

    fn zwz() -> GroupDescriptor {
        GroupDescriptor::IteratedWreath(1, 1)
    }

    fn word(s: &str) -> Word {
        zwz().parse_word(s).unwrap()
    }

    fn t_pow(k: usize) -> Word {
        Word::new(vec![Letter::gen(0, 1); k])
    }

    fn coset(b: (i64, i64), lattice: Lattice2) -> TwoVariableSolution {
        TwoVariableSolution::Coset { base: (b.0.into(), b.1.into()), lattice }
    }

    fn brute(g: &GroupDescriptor, g1: &Word, g2: &Word, h: &Word, r: i64) -> Vec<(i64, i64)> {
        let s = g.structure();
        let target = g.eval_word(h).unwrap();
        let mut out = Vec::new();
        for x in -r..=r {
            for y in -r..=r {
                let pw = PowerWord::single(g1.clone(), x).with(g2.clone(), y);
                if crate::powerword::naive_eval_structure(&s, &pw, 1 << 20).unwrap() == target {
                    out.push((x, y));
                }
            }
        }
        out
    }

    #[test]
    fn squares_and_cubes_of_t() {
        let sol = two_variable_lattice(&zwz(), &t_pow(2), &t_pow(3), &t_pow(1)).unwrap();
        assert_eq!(sol, coset((-1, 1), Lattice2::Cyclic(3.into(), (-2).into())));
        let hits = brute(&zwz(), &t_pow(2), &t_pow(3), &t_pow(1), 10);
        assert!(!hits.is_empty());
        for x in -10..=10i64 {
            for y in -10..=10i64 {
                assert_eq!(sol.contains(&x.into(), &y.into()), hits.contains(&(x, y)));
            }
        }
    }

    #[test]
    fn degenerate_and_empty_cases() {
        let e = Word::empty();
        assert_eq!(two_variable_lattice(&zwz(), &e, &e, &e).unwrap(), coset((0, 0), Lattice2::Full));
        let sol = two_variable_lattice(&zwz(), &t_pow(1), &t_pow(1), &word("g1.1")).unwrap();
        assert_eq!(sol, TwoVariableSolution::Empty);
    }

    #[test]
    fn agrees_with_brute_force() {
        let g = zwz();
        let cases = [
            ("g1.1 g0.1", "g0.1", "g1.1 g0.1 g0.1"),
            ("g1.1 g0.1", "g1.1^-1 g0.1", "g0.1 g0.1"),
            ("g1.1", "g0.1 g1.1 g0.1^-1", "g1.1 g1.1 g0.1 g1.1 g0.1^-1"),
            ("g1.1", "g0.1 g1.1 g0.1^-1", "g1.1 g0.1 g1.1 g1.1 g1.1 g0.1^-1"),
            ("g1.1 g0.1 g0.1", "g0.1^-1", "g1.1 g0.1"),
            ("g0.1 g1.1", "g1.1 g0.1", "g0.1 g1.1 g1.1 g0.1"),
            ("g1.1", "g1.1 g1.1", "g1.1^-1"),
        ];
        for (a, b, c) in cases {
            let (g1, g2, h) = (word(a), word(b), word(c));
            let sol = two_variable_lattice(&g, &g1, &g2, &h).unwrap();
            let hits = brute(&g, &g1, &g2, &h, 8);
            for x in -8..=8i64 {
                for y in -8..=8i64 {
                    assert_eq!(
                        sol.contains(&x.into(), &y.into()),
                        hits.contains(&(x, y)),
                        "{a} | {b} | {c} at ({x},{y}): {sol}"
                    );
                }
            }
        }
    }

    #[test]
    fn lattice_groups_use_cramer() {
        let g = GroupDescriptor::FreeAbelian(2);
        let w = |s: &str| g.parse_word(s).unwrap();
        let sol = two_variable_lattice(&g, &w("g0.1 g0.1"), &w("g0.2 g0.2"), &w("g0.1")).unwrap();
        assert_eq!(sol, TwoVariableSolution::Empty);
        let sol = two_variable_lattice(&g, &w("g0.1 g0.2"), &w("g0.2"), &w("g0.1 g0.1 g0.2")).unwrap();
        assert_eq!(sol, coset((2, -1), Lattice2::Zero));
    }

    #[test]
    fn classes_of_t_squared_and_cubed() {
        let g = zwz();
        let e = KnapsackExpression::new(
            g,
            vec![Word::empty(), Word::empty(), Word::empty()],
            vec![(word("g1.1 g0.1 g0.1"), "x".into()), (t_pow(3), "y".into())],
        )
        .unwrap();
        let classes = parallel_classes(&e).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].h_c, t_pow(1));
        assert_eq!(classes[0].beta, [(1, BigInt::from(2)), (2, BigInt::from(3))].into());
    }

    #[test]
    fn non_commensurable_periods_are_singletons() {
        let g = GroupDescriptor::IteratedWreath(2, 1);
        let w = |s: &str| g.parse_word(s).unwrap();
        let e = KnapsackExpression::new(
            g.clone(),
            vec![Word::empty(), Word::empty(), Word::empty(), Word::empty()],
            vec![
                (w("g2.1 g1.1 g0.1"), "x".into()),
                (w("g0.1"), "y".into()),
                (w("g2.1"), "z".into()),
            ],
        )
        .unwrap();
        let classes = parallel_classes(&e).unwrap();
        assert_eq!(classes.len(), 2);
        for c in &classes {
            assert_eq!(c.members.len(), 1);
            assert_eq!(c.beta[&c.members[0]], BigInt::one());
        }
    }

    #[test]
    fn negative_first_beta_is_flipped() {
        let e = KnapsackExpression::new(
            zwz(),
            vec![Word::empty(), Word::empty(), Word::empty()],
            vec![(word("g0.1^-1 g0.1^-1"), "x".into()), (t_pow(3), "y".into())],
        )
        .unwrap();
        let c = &parallel_classes(&e).unwrap()[0];
        assert_eq!(c.beta, [(1, BigInt::from(2)), (2, BigInt::from(-3))].into());
    }
}
