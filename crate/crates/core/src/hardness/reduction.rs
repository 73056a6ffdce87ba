use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::{first_primes, perm_word, sym5_wreath_z, Assignment, GProgram, DEGREE};
use crate::error::{Error, Result};
use crate::group::{Letter, Permutation, Word};
use crate::knapsack::{evaluate, Atom, KnapsackExpression, Valuation};
use crate::powerword::PowerWord;

/// Naming and embedding data shared by [`reduce_qbf2`], [`intended_valuation`]
/// and [`structured_search`].
///
/// The expression lives in `(⟨g⟩^{2ℓ+1} × G) ≀ ℤ`, written into `G ≀ ℤ`
/// with `t ↦ t^D` for `D = 2ℓ+2`: copy 0 carries `G` and pebble `g_j` sits
/// in copy `j+1`.
#[derive(Clone, Debug)]
pub struct Qbf2Layout {
    pub ell: usize,
    pub copies: usize,
    pub primes: BTreeMap<String, u64>,
    /// `M`, the product of the primes.
    pub modulus: u64,
    pub pebble: Permutation,
    /// Existential variables the program reads, in declaration order.
    pub queried: Vec<String>,
}

impl Qbf2Layout {
    pub fn new(p: &GProgram) -> Result<Self> {
        let vars = p.variables();
        let primes: BTreeMap<String, u64> =
            vars.iter().cloned().zip(first_primes(vars.len())).collect();
        let modulus = primes
            .values()
            .try_fold(1u64, |acc, q| acc.checked_mul(*q))
            .ok_or_else(|| Error::precondition("prime product exceeds 64 bits"))?;
        let queried = p
            .existential
            .iter()
            .filter(|x| p.instructions.iter().any(|i| &i.var == *x))
            .cloned()
            .collect();
        Ok(Qbf2Layout {
            ell: p.len(),
            copies: 2 * p.len() + 2,
            primes,
            modulus,
            pebble: Permutation::from_cycles(DEGREE, &[vec![1, 2, 3, 4, 5]])?,
            queried,
        })
    }

    /// `t^k` of the small group.
    fn t(&self, k: i64) -> Word {
        let letter = if k >= 0 { Letter::gen(0, 1) } else { Letter::gen_inv(0, 1) };
        Word::new(vec![letter; k.unsigned_abs() as usize * self.copies])
    }

    /// `g_j^{±1}`.
    fn pebble(&self, j: usize, inverse: bool) -> Word {
        let g = if inverse { self.pebble.inverse() } else { self.pebble.clone() };
        let mut w = Word::new(vec![Letter::gen(0, 1); j + 1]);
        w.push(Letter::Perm(g));
        w.extend_from(&Word::new(vec![Letter::gen_inv(0, 1); j + 1]));
        w
    }

    fn pebbles(&self, js: impl IntoIterator<Item = usize>, inverse: bool) -> Word {
        let mut w = Word::empty();
        for j in js {
            w.extend_from(&self.pebble(j, inverse));
        }
        w
    }

    /// The copy of `G ≀ ℤ` position `D·s + c` belongs to: 0 for `G`, `j+1` for pebble `g_j`.
    pub fn copy_of(&self, position: i64) -> usize {
        position.rem_euclid(self.copies as i64) as usize
    }

    /// `(c t)^k`.
    fn walk(&self, c: &Permutation, k: u64) -> Word {
        let mut step = perm_word(c);
        step.extend_from(&self.t(1));
        step.repeat(k as usize)
    }

    pub fn prime(&self, var: &str) -> u64 {
        self.primes[var]
    }
}

pub fn x_var(i: usize) -> String {
    format!("x{i}")
}

pub fn xb_var(i: usize) -> String {
    format!("xb{i}")
}

pub fn y_var(i: usize) -> String {
    format!("y{i}")
}

pub fn z_var(i: usize) -> String {
    format!("z{i}")
}

/// `X̃` and `X̃'`.
pub fn pebble_vars(x: &str) -> (String, String) {
    (format!("p_{x}"), format!("pb_{x}"))
}

/// The knapsack expression `E₂ = E_{2,1} E_{2,2}` over `Sym(5) ≀ ℤ`: it has a
/// solution iff some existential assignment makes `P` trivial under every
/// universal one.
pub fn reduce_qbf2(p: &GProgram) -> Result<KnapsackExpression> {
    let lay = Qbf2Layout::new(p)?;
    let ell = lay.ell;
    let queries = |x: &String| -> Vec<usize> {
        (1..=ell).filter(|&i| &p.instructions[i - 1].var == x).collect()
    };
    let mut atoms = Vec::new();
    atoms.push(Atom::Const(lay.pebbles(0..=ell, false)));
    for x in &lay.queried {
        let js = queries(x).into_iter().map(|i| ell + i);
        atoms.push(Atom::Power(lay.pebbles(js, false), pebble_vars(x).1));
    }
    atoms.push(Atom::Const(lay.t(1)));
    atoms.push(Atom::Power(lay.t(1), "z".into()));
    atoms.push(Atom::Const(lay.pebbles(1..=ell, false)));
    for x in &lay.queried {
        let js = queries(x).into_iter().map(|i| ell + i);
        atoms.push(Atom::Power(lay.pebbles(js, false), pebble_vars(x).0));
    }
    atoms.push(Atom::Const(lay.t(-1)));
    atoms.push(Atom::Power(lay.t(-1), "zb".into()));
    atoms.push(Atom::Const(lay.pebble(0, true)));

    for (idx, ins) in p.instructions.iter().enumerate() {
        let i = idx + 1;
        let q = lay.prime(&ins.var);
        if p.existential.contains(&ins.var) {
            atoms.push(Atom::Power(lay.walk(&ins.a, q), x_var(i)));
            atoms.push(Atom::Const(lay.pebble(ell + i, true)));
            atoms.push(Atom::Power(lay.walk(&ins.b, q), xb_var(i)));
        } else {
            let mut w = lay.walk(&ins.a, 1);
            w.extend_from(&lay.walk(&ins.b, q - 1));
            atoms.push(Atom::Power(w, y_var(i)));
        }
        let mut back = lay.pebble(i, true);
        back.extend_from(&lay.t(-1));
        atoms.push(Atom::Const(back));
        atoms.push(Atom::Power(lay.t(-1), z_var(i)));
        atoms.push(Atom::Const(lay.pebble(i, true)));
    }
    KnapsackExpression::from_atoms(sym5_wreath_z(), atoms)
}

/// The valuation that walks every factor out to `M'` and back, choosing
/// `u_i` or `v_i` by `α`.
pub fn intended_valuation(p: &GProgram, alpha: &Assignment, m_prime: u64) -> Result<Valuation> {
    let lay = Qbf2Layout::new(p)?;
    let pebbles: BTreeMap<String, (u64, u64)> = lay
        .queried
        .iter()
        .map(|x| {
            let bit = *alpha
                .get(x)
                .ok_or_else(|| Error::precondition(format!("assignment misses `{x}`")))?;
            Ok((x.clone(), if bit { (1, 0) } else { (0, 1) }))
        })
        .collect::<Result<_>>()?;
    valuation(p, &lay, alpha, &pebbles, m_prime)
}

fn valuation(
    p: &GProgram,
    lay: &Qbf2Layout,
    alpha: &Assignment,
    pebbles: &BTreeMap<String, (u64, u64)>,
    m_prime: u64,
) -> Result<Valuation> {
    if m_prime == 0 || !m_prime.is_multiple_of(lay.modulus) {
        return Err(Error::precondition(format!("M' = {m_prime} is not a positive multiple of {}", lay.modulus)));
    }
    let n = BigUint::from;
    let mut nu = Valuation::new();
    nu.insert("z".into(), n(m_prime - 1));
    nu.insert("zb".into(), n(m_prime - 1));
    for (x, (tilde, tilde_b)) in pebbles {
        let (pv, pbv) = pebble_vars(x);
        nu.insert(pv, n(*tilde));
        nu.insert(pbv, n(*tilde_b));
    }
    for (idx, ins) in p.instructions.iter().enumerate() {
        let i = idx + 1;
        let share = n(m_prime / lay.prime(&ins.var));
        nu.insert(z_var(i), n(m_prime - 1));
        if p.existential.contains(&ins.var) {
            let bit = *alpha
                .get(&ins.var)
                .ok_or_else(|| Error::precondition(format!("assignment misses `{}`", ins.var)))?;
            let (x, xb) = if bit { (share, n(0)) } else { (n(0), share) };
            nu.insert(x_var(i), x);
            nu.insert(xb_var(i), xb);
        } else {
            nu.insert(y_var(i), share);
        }
    }
    Ok(nu)
}

/// Searches the valuations of `E₂` at `M'` whose `E₁` part walks every
/// factor exactly to `M'` with `u_i`/`v_i` chosen consistently per variable;
/// pebble exponents `X̃, X̃'` range over `{0, 1}`.
pub fn structured_search(p: &GProgram, e2: &KnapsackExpression, m_prime: u64) -> Result<Option<Valuation>> {
    let lay = Qbf2Layout::new(p)?;
    let k = lay.queried.len();
    for bits in 0u64..1 << k {
        let alpha: Assignment =
            lay.queried.iter().enumerate().map(|(j, x)| (x.clone(), bits >> j & 1 == 1)).collect();
        for peb in 0u64..1 << (2 * k) {
            let pebbles = lay
                .queried
                .iter()
                .enumerate()
                .map(|(j, x)| (x.clone(), (peb >> (2 * j) & 1, peb >> (2 * j + 1) & 1)))
                .collect();
            let nu = valuation(p, &lay, &alpha, &pebbles, m_prime)?;
            if evaluate(e2, &nu)?.is_identity() {
                return Ok(Some(nu));
            }
        }
    }
    Ok(None)
}

/// `∏_i w_i^{M/q_i} t^{−M}` with `w_i = a_i t (b_i t)^{q_i−1}`: position `s`
/// of the result carries `P(β_s)` where `β_s(Y) = [s ≡ 0 mod p(Y)]`.
pub fn reduce_forall_powerword(p: &GProgram) -> Result<PowerWord> {
    if !p.existential.is_empty() {
        return Err(Error::precondition("program has existential variables"));
    }
    let primes: BTreeMap<&String, u64> = p.universal.iter().zip(first_primes(p.universal.len())).collect();
    let m = primes
        .values()
        .try_fold(1u64, |acc, q| acc.checked_mul(*q))
        .ok_or_else(|| Error::precondition("prime product exceeds 64 bits"))?;
    let t = Word::single(Letter::gen(0, 1));
    let mut out = PowerWord::new();
    for ins in &p.instructions {
        let q = primes[&ins.var];
        let mut w = perm_word(&ins.a).concat(&t);
        w.extend_from(&perm_word(&ins.b).concat(&t).repeat(q as usize - 1));
        out.push(w, m / q);
        out.push(t.inverse(), m);
    }
    Ok(out)
}
