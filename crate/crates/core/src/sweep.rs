//! Seeded instance generators shared by the oracle sweeps, the benches and
//! the command-line `sweep` harness.

use std::sync::mpsc;
use std::time::Duration;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{Element, GroupDescriptor, Letter, Permutation, Word};
use crate::hardness::{
    reduce_forall_powerword, reduce_qbf2, structured_search, GProgram, Instruction, Qbf2Layout, DEGREE,
};
use crate::knapsack::{
    check_certificate, evaluate, normalize_expression, nu_decompose, parallel_classes, solve_box,
    verify_certificate, DecompositionCertificate, KnapsackExpression, Subbundle, Triple, Valuation, Verdict,
};
use crate::par::{self, Execution};
use crate::periodic::{lcm_of_periods, periodic_check, recurrence_order_bound, trivial_up_to, PeriodicFunction};
use crate::powerword::{naive_eval, powerwp, PowerWord};

pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for random power words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerWordParams {
    pub max_factors: usize,
    pub max_period: usize,
    pub max_exponent: u64,
}

impl Default for PowerWordParams {
    fn default() -> Self {
        PowerWordParams { max_factors: 6, max_period: 6, max_exponent: 512 }
    }
}

/// How an instance was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Random,
    Planted,
    Perturbed,
}

fn random_letter<R: Rng>(rng: &mut R, letters: &[Letter]) -> Letter {
    let l = letters.choose(rng).cloned().unwrap_or(Letter::One);
    if rng.gen_bool(0.5) {
        l.inverse()
    } else {
        l
    }
}

/// A uniformly random word of length `len` over the letters and their inverses.
pub fn random_word<R: Rng>(rng: &mut R, letters: &[Letter], len: usize) -> Word {
    (0..len).map(|_| random_letter(rng, letters)).collect()
}

fn random_exponent<R: Rng>(rng: &mut R, max: u64) -> BigInt {
    let k = rng.gen_range(0..=max) as i64;
    BigInt::from(if rng.gen_bool(0.5) { -k } else { k })
}

pub fn random_powerword<R: Rng>(rng: &mut R, letters: &[Letter], p: PowerWordParams) -> PowerWord {
    let n = rng.gen_range(1..=p.max_factors.max(1));
    let mut pw = PowerWord::new();
    for _ in 0..n {
        let len = rng.gen_range(1..=p.max_period.max(1));
        pw.push(random_word(rng, letters, len), random_exponent(rng, p.max_exponent));
    }
    pw
}

/// The left-generator letters of `group` together with the rest, for groups
/// where conjugates of left letters commute.
fn split_letters(group: &GroupDescriptor) -> Option<(Vec<Letter>, Vec<Letter>)> {
    let top = match group {
        GroupDescriptor::IteratedWreath(m, _) => *m,
        GroupDescriptor::WreathOverZ(_) => 1,
        _ => return None,
    };
    let (left, right): (Vec<Letter>, Vec<Letter>) = group
        .generators()
        .into_iter()
        .partition(|l| match l {
            Letter::Gen(t) => t.level == top,
            _ => true,
        });
    if left.is_empty() || right.is_empty() {
        None
    } else {
        Some((left, right))
    }
}

/// A power word that is trivial by construction.
///
/// Either `P · P⁻¹` with the inverse respelled, or, where available, a
/// commutator `[x^k, y^l]` of two base-group elements.
pub fn planted_trivial<R: Rng>(rng: &mut R, group: &GroupDescriptor, p: PowerWordParams) -> PowerWord {
    let letters = group.generators();
    let abelian_base = matches!(group, GroupDescriptor::IteratedWreath(..))
        || matches!(group, GroupDescriptor::WreathOverZ(inner) if inner.nilpotency_class().ok() == Some(1));
    if p.max_factors >= 4 && abelian_base && rng.gen_bool(0.5) {
        if let Some((left, right)) = split_letters(group) {
            let mut base = || {
                let len = rng.gen_range(0..=p.max_period.saturating_sub(1) / 2);
                let w = random_word(rng, &right, len);
                let a = random_word(rng, &left, 1);
                w.concat(&a).concat(&w.inverse())
            };
            let (x, y) = (base(), base());
            let k = random_exponent(rng, p.max_exponent);
            let l = random_exponent(rng, p.max_exponent);
            return PowerWord::new()
                .with(x.clone(), k.clone())
                .with(y.clone(), l.clone())
                .with(x, -k)
                .with(y, -l);
        }
    }
    let half = PowerWordParams { max_factors: (p.max_factors / 2).max(1), ..p };
    let pw = random_powerword(rng, &letters, half);
    let mut out = pw.clone();
    for f in pw.factors.iter().rev() {
        if rng.gen_bool(0.5) {
            out.push(f.period.inverse(), f.exponent.clone());
        } else {
            out.push(f.period.clone(), -&f.exponent);
        }
    }
    out
}

/// Changes one exponent by one, or one letter of one period.
pub fn perturb<R: Rng>(rng: &mut R, group: &GroupDescriptor, pw: &PowerWord) -> PowerWord {
    let mut out = pw.clone();
    if out.factors.is_empty() {
        out.push(random_word(rng, &group.generators(), 1), 1);
        return out;
    }
    let i = rng.gen_range(0..out.factors.len());
    let f = &mut out.factors[i];
    if f.period.is_empty() || rng.gen_bool(0.5) {
        f.exponent += if rng.gen_bool(0.5) { 1 } else { -1 };
        if f.period.is_empty() {
            f.period = random_word(rng, &group.generators(), 1);
        }
    } else {
        let j = rng.gen_range(0..f.period.len());
        let mut letters: Vec<Letter> = f.period.iter().cloned().collect();
        letters[j] = random_letter(rng, &group.generators());
        f.period = letters.into_iter().collect();
    }
    out
}

/// A mix of random, planted-trivial and perturbed instances.
pub fn powerword_instance<R: Rng>(
    rng: &mut R,
    group: &GroupDescriptor,
    p: PowerWordParams,
) -> (PowerWord, Origin) {
    match rng.gen_range(0..3) {
        0 => (random_powerword(rng, &group.generators(), p), Origin::Random),
        1 => (planted_trivial(rng, group, p), Origin::Planted),
        _ => {
            let base = planted_trivial(rng, group, p);
            (perturb(rng, group, &base), Origin::Perturbed)
        }
    }
}

/// Deterministic per-instance seeds derived from a sweep seed.
pub fn instance_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64).rotate_left(17)
}

/// A knapsack expression over `ℤ ≀ ℤ` with a planted solution in `[0, max_box]^d`.
///
/// Periods are an optional `a^{±1}` followed by a power of `t`; the middle
/// constants are powers of `t`, and the last constant cancels the prefix.
pub fn planted_knapsack<R: Rng>(rng: &mut R, max_d: usize, max_box: u64) -> Result<(KnapsackExpression, Valuation)> {
    let group = GroupDescriptor::IteratedWreath(1, 1);
    let a = Letter::gen(1, 1);
    let t = Letter::gen(0, 1);
    let t_word = |k: i64| -> Word {
        let l = if k >= 0 { t.clone() } else { t.inverse() };
        Word::new(vec![l; k.unsigned_abs() as usize])
    };
    let d = rng.gen_range(1..=max_d.max(1));
    let mut constants = vec![Word::empty()];
    let mut powers = Vec::new();
    let mut nu = Valuation::new();
    let mut prefix = PowerWord::new();
    for r in 1..=d {
        let mut period = Word::empty();
        if rng.gen_bool(0.75) {
            period.push(if rng.gen_bool(0.5) { a.clone() } else { a.inverse() });
        }
        period.extend_from(&t_word(rng.gen_range(-2..=2)));
        if period.is_empty() {
            period.push(t.clone());
        }
        let x = format!("x{r}");
        let value = rng.gen_range(0..=max_box);
        prefix.push(period.clone(), value);
        nu.insert(x.clone(), value.into());
        powers.push((period, x));
        let c = if r < d { t_word(rng.gen_range(-2..=2)) } else { Word::empty() };
        prefix.push(c.clone(), 1);
        constants.push(c);
    }
    let s = group.structure();
    let closing = s.inv(&crate::powerword::eval_by_powers(&s, &prefix)?)?;
    *constants.last_mut().expect("d ≥ 1") = s.to_word(&closing)?;
    Ok((KnapsackExpression::new(group, constants, powers)?, nu))
}

/// A copy of `cert` that the checker must reject: a triple dropped, doubled,
/// or shortened, a stacking position moved, a packed `γ` changed, or a
/// packed ray shifted back by `h_C` and lengthened.
pub fn perturb_certificate<R: Rng>(
    rng: &mut R,
    e: &KnapsackExpression,
    cert: &DecompositionCertificate,
) -> Result<DecompositionCertificate> {
    let h = crate::knapsack::abelian_wreath(&e.group)?.right_structure().clone();
    let classes = parallel_classes(e)?;
    let mut out = cert.clone();
    let n = out.subbundles.len();
    if n == 0 {
        out.subbundles.push(Subbundle::Stacking {
            position: h.identity(),
            triples: vec![Triple { r: 1, s: 0, t: 0 }],
        });
        return Ok(out);
    }
    let b = rng.gen_range(0..n);
    let kind = rng.gen_range(0..5);
    let bundle = &mut out.subbundles[b];
    let count = bundle.triples().len();
    let k = rng.gen_range(0..count.max(1));
    match (kind, bundle) {
        (0, Subbundle::Stacking { triples, .. }) if !triples.is_empty() => {
            triples.remove(k);
        }
        (0, Subbundle::Packed { triples, .. }) if !triples.is_empty() => {
            triples.remove(k);
        }
        (1, Subbundle::Stacking { triples, .. }) if !triples.is_empty() => {
            let tr = triples[k];
            triples.push(tr);
        }
        (1, Subbundle::Packed { triples, .. }) if !triples.is_empty() => {
            let tr = triples[k];
            triples.push(tr);
        }
        (2, Subbundle::Stacking { triples, .. }) if !triples.is_empty() => {
            shrink(&mut triples[k]);
        }
        (2, Subbundle::Packed { triples, .. }) if !triples.is_empty() => {
            shrink(&mut triples[k].0);
        }
        (_, Subbundle::Stacking { position, .. }) => {
            let moves: Vec<Letter> = e.group.generators().into_iter().filter(|l| h.owns(l)).collect();
            let g = h.letter(moves.choose(rng).ok_or_else(|| Error::Internal("no moves".into()))?)?;
            *position = if rng.gen_bool(0.5) { h.mul(position, &g)? } else { h.mul(position, &h.inv(&g)?)? };
        }
        (3, Subbundle::Packed { triples, .. }) if !triples.is_empty() => {
            triples[k].1 += rng.gen_range(1..=3);
        }
        (_, Subbundle::Packed { class, offset, length, .. }) => {
            let data = classes.get(*class).ok_or_else(|| Error::Internal("unknown class".into()))?;
            let hc = h.eval_word(&data.h_c)?;
            *offset = h.mul(offset, &h.inv(&hc)?)?;
            *length += 1;
        }
    }
    Ok(out)
}

fn shrink(t: &mut Triple) {
    if t.t > t.s {
        t.t -= 1;
    } else {
        t.s += 1;
        t.t += 1;
    }
}

/// A uniformly random permutation of `{1, …, n}`.
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("a shuffle is a permutation")
}

/// A program over `Sym(5)` that is often trivial: `half` random instructions,
/// then their inverses in reverse order, then possibly one branch or both of
/// one instruction replaced.
pub fn random_gprogram<R: Rng>(rng: &mut R, exists: &[String], forall: &[String], half: usize) -> GProgram {
    let vars: Vec<&String> = exists.iter().chain(forall).collect();
    let mut ins: Vec<Instruction> = Vec::new();
    if !vars.is_empty() {
        for _ in 0..half {
            let v = vars[rng.gen_range(0..vars.len())].clone();
            ins.push(Instruction::new(v, random_permutation(rng, DEGREE), random_permutation(rng, DEGREE)));
        }
    }
    let back: Vec<Instruction> =
        ins.iter().rev().map(|i| Instruction::new(i.var.clone(), i.a.inverse(), i.b.inverse())).collect();
    ins.extend(back);
    if !ins.is_empty() && rng.gen_bool(0.5) {
        let k = rng.gen_range(0..ins.len());
        match rng.gen_range(0..3) {
            0 => ins[k].a = random_permutation(rng, DEGREE),
            1 => ins[k].b = random_permutation(rng, DEGREE),
            _ => {
                ins[k].a = random_permutation(rng, DEGREE);
                ins[k].b = random_permutation(rng, DEGREE);
            }
        }
    }
    GProgram::new(ins, exists.to_vec(), forall.to_vec()).expect("variables are declared")
}

fn random_element<R: Rng>(rng: &mut R, group: &GroupDescriptor) -> Result<Element> {
    let len = rng.gen_range(0..6);
    group.eval_word(&random_word(rng, &group.generators(), len))
}

/// Up to three functions of period at most `max_period`; usually followed by
/// their pointwise inverses in reverse order, sometimes with one value changed.
pub fn periodic_instance<R: Rng>(
    rng: &mut R,
    group: &GroupDescriptor,
    max_period: usize,
) -> Result<(Vec<PeriodicFunction>, Origin)> {
    let s = group.structure();
    let k = rng.gen_range(1..=3);
    let mut fs = Vec::with_capacity(2 * k);
    for _ in 0..k {
        let n = rng.gen_range(1..=max_period.max(1));
        let values = (0..n).map(|_| random_element(rng, group)).collect::<Result<Vec<_>>>()?;
        fs.push(PeriodicFunction::new(values)?);
    }
    if rng.gen_bool(0.3) {
        return Ok((fs, Origin::Random));
    }
    let inverses = fs
        .iter()
        .rev()
        .map(|f| f.values.iter().map(|v| s.inv(v)).collect::<Result<Vec<_>>>().and_then(PeriodicFunction::new))
        .collect::<Result<Vec<_>>>()?;
    fs.extend(inverses);
    if rng.gen_bool(0.4) {
        let i = rng.gen_range(0..fs.len());
        let j = rng.gen_range(0..fs[i].period());
        fs[i].values[j] = random_element(rng, group)?;
        return Ok((fs, Origin::Perturbed));
    }
    Ok((fs, Origin::Planted))
}

impl Origin {
    pub fn name(self) -> &'static str {
        match self {
            Origin::Random => "random",
            Origin::Planted => "planted",
            Origin::Perturbed => "perturbed",
        }
    }
}

/// The oracle-equivalence suites of the `sweep` harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// `powerwp` against full expansion.
    PowerWp,
    /// `periodic_check` against one full lcm window.
    Periodic,
    /// Planted knapsack instances: box search, certificates, perturbations.
    Knapsack,
    /// The `∀`-reduction against brute force over the universal assignments.
    Forall,
    /// Structured search on `E₂` against brute-force `∃∀`.
    Qbf2,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::PowerWp, Suite::Periodic, Suite::Knapsack, Suite::Forall, Suite::Qbf2];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PowerWp => "powerwp",
            Suite::Periodic => "periodic",
            Suite::Knapsack => "knapsack",
            Suite::Forall => "forall",
            Suite::Qbf2 => "qbf2",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Groups cycled through when none is given.
    pub fn default_groups(self) -> Vec<GroupDescriptor> {
        use GroupDescriptor as G;
        match self {
            Suite::PowerWp => vec![G::IteratedWreath(1, 1), G::IteratedWreath(1, 2), G::IteratedWreath(2, 1)],
            Suite::Periodic => vec![G::Cyclic(12), G::Heisenberg, G::Dihedral(4)],
            Suite::Knapsack => vec![G::IteratedWreath(1, 1)],
            Suite::Forall | Suite::Qbf2 => vec![crate::hardness::sym5_wreath_z()],
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub suite: Suite,
    pub n: usize,
    pub seed: u64,
    /// Overrides the suite's default groups.
    pub group: Option<GroupDescriptor>,
    pub execution: Execution,
    pub timeout: Option<Duration>,
}

impl SweepConfig {
    pub fn new(suite: Suite, n: usize, seed: u64) -> Self {
        SweepConfig { suite, n, seed, group: None, execution: Execution::default(), timeout: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Agree,
    Mismatch(String),
    Timeout,
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceReport {
    pub index: usize,
    pub group: String,
    pub origin: &'static str,
    /// The decision under test, e.g. `trivial` or `sat`.
    pub verdict: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub suite: Suite,
    pub seed: u64,
    pub instances: Vec<InstanceReport>,
}

impl SweepReport {
    fn count(&self, f: impl Fn(&Outcome) -> bool) -> usize {
        self.instances.iter().filter(|i| f(&i.outcome)).count()
    }

    pub fn mismatches(&self) -> usize {
        self.count(|o| matches!(o, Outcome::Mismatch(_)))
    }

    pub fn timeouts(&self) -> usize {
        self.count(|o| matches!(o, Outcome::Timeout))
    }

    pub fn errors(&self) -> usize {
        self.count(|o| matches!(o, Outcome::Error(_)))
    }

    pub fn render(&self) -> String {
        let mut out = format!("suite {} seed {} n {}\n", self.suite.name(), self.seed, self.instances.len());
        for i in &self.instances {
            let outcome = match &i.outcome {
                Outcome::Agree => "agree".to_string(),
                Outcome::Mismatch(m) => format!("MISMATCH {m}"),
                Outcome::Timeout => "timeout".to_string(),
                Outcome::Error(e) => format!("error {e}"),
            };
            out.push_str(&format!("#{} {} {} {} {}\n", i.index, i.group, i.origin, i.verdict, outcome));
        }
        out.push_str(&format!(
            "summary: {} instances, {} mismatches, {} timeouts, {} errors\n",
            self.instances.len(),
            self.mismatches(),
            self.timeouts(),
            self.errors()
        ));
        out
    }
}

/// Runs `f` on a fresh thread and gives up after `limit`. The thread is
/// left to finish on its own.
pub fn with_timeout<R, F>(limit: Option<Duration>, f: F) -> Option<R>
where
    R: Send + 'static,
    F: FnOnce() -> R + Send + 'static,
{
    let Some(limit) = limit else { return Some(f()) };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(f());
    });
    rx.recv_timeout(limit).ok()
}

/// Runs the suite; instance `i` is generated from `instance_seed(seed, i)`
/// and reports are ordered by index.
pub fn run_sweep(cfg: &SweepConfig) -> SweepReport {
    let groups = match &cfg.group {
        Some(g) => vec![g.clone()],
        None => cfg.suite.default_groups(),
    };
    let instances = par::map_range(cfg.execution, cfg.n, |index| {
        let group = groups[index % groups.len()].clone();
        let seed = instance_seed(cfg.seed, index);
        let suite = cfg.suite;
        let name = group.to_string();
        match with_timeout(cfg.timeout, move || run_instance(suite, &group, seed)) {
            Some(Ok((origin, verdict, outcome))) => {
                InstanceReport { index, group: name, origin: origin.name(), verdict, outcome }
            }
            Some(Err(e)) => InstanceReport {
                index,
                group: name,
                origin: "-",
                verdict: "-".into(),
                outcome: Outcome::Error(e.to_string()),
            },
            None => InstanceReport { index, group: name, origin: "-", verdict: "-".into(), outcome: Outcome::Timeout },
        }
    });
    SweepReport { suite: cfg.suite, seed: cfg.seed, instances }
}

fn agreement(decided: bool, expected: bool, what: &str) -> Outcome {
    if decided == expected {
        Outcome::Agree
    } else {
        Outcome::Mismatch(format!("{what}: decided {decided}, oracle {expected}"))
    }
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

fn run_instance(suite: Suite, group: &GroupDescriptor, seed: u64) -> Result<(Origin, String, Outcome)> {
    let mut r = rng(seed);
    match suite {
        Suite::PowerWp => {
            let (pw, origin) = powerword_instance(&mut r, group, PowerWordParams::default());
            let decided = powerwp(group, &pw)?;
            let expected = naive_eval(group, &pw)?.is_identity();
            let mut outcome = agreement(decided, expected, "trivial");
            if origin == Origin::Planted && !decided {
                outcome = Outcome::Mismatch("planted trivial word decided nontrivial".into());
            }
            Ok((origin, verdict_word(decided, "trivial", "nontrivial"), outcome))
        }
        Suite::Periodic => {
            let (fs, origin) = periodic_instance(&mut r, group, 5)?;
            let s = group.structure();
            let window = BigInt::from(lcm_of_periods(&fs));
            let horizon = &window * BigInt::from(10);
            let decided = periodic_check(group, &fs, &horizon)?;
            let expected = trivial_up_to(&s, &fs, &(&window - 1))?;
            let mut outcome = agreement(decided, expected, "trivial");
            let periods: Vec<usize> = fs.iter().map(PeriodicFunction::period).collect();
            let d = BigInt::from(recurrence_order_bound(group.nilpotency_class()?, &periods)?.order);
            let head: BigInt = d.min(horizon.clone()) - 1;
            if trivial_up_to(&s, &fs, &head)? && !trivial_up_to(&s, &fs, &horizon)? {
                outcome = Outcome::Mismatch("vanishes below the recurrence bound but not beyond".into());
            }
            Ok((origin, verdict_word(decided, "trivial", "nontrivial"), outcome))
        }
        Suite::Knapsack => {
            let bound = r.gen_range(1..=6);
            let (e, planted) = planted_knapsack(&mut r, 4, bound)?;
            let n = normalize_expression(&e)?;
            let lifted = n.lift(&planted);
            let solutions = solve_box(std::slice::from_ref(&n.expression), bound)?;
            let mut outcome = if solutions.contains(&lifted) {
                Outcome::Agree
            } else {
                Outcome::Mismatch("planted solution missing".into())
            };
            for nu in &solutions {
                if outcome != Outcome::Agree {
                    break;
                }
                if !evaluate(&n.expression, nu)?.is_identity() {
                    outcome = Outcome::Mismatch("returned valuation is not a solution".into());
                    break;
                }
                let cert = nu_decompose(&n.expression, nu)?;
                if !verify_certificate(&n.expression, nu, &cert)? {
                    outcome = Outcome::Mismatch("certificate rejected".into());
                    break;
                }
                for _ in 0..5 {
                    let bad = perturb_certificate(&mut r, &n.expression, &cert)?;
                    if check_certificate(&n.expression, nu, &bad)? == Verdict::Valid {
                        outcome = Outcome::Mismatch("perturbed certificate accepted".into());
                        break;
                    }
                }
            }
            Ok((Origin::Planted, format!("sat({})", solutions.len()), outcome))
        }
        Suite::Forall => {
            let half = r.gen_range(0..=4);
            let p = random_gprogram(&mut r, &[], &names("Y", 3), half);
            let w = reduce_forall_powerword(&p)?;
            let decided = powerwp(group, &w)?;
            let expected = p.exists_forall()?;
            Ok((Origin::Planted, verdict_word(decided, "trivial", "nontrivial"), agreement(decided, expected, "trivial")))
        }
        Suite::Qbf2 => {
            let half = r.gen_range(0..=2);
            let p = random_gprogram(&mut r, &names("X", 1), &names("Y", 1), half);
            let e = reduce_qbf2(&p)?;
            let m = Qbf2Layout::new(&p)?.modulus;
            let found = structured_search(&p, &e, m)?;
            if let Some(nu) = &found {
                if !evaluate(&e, nu)?.is_identity() {
                    return Ok((Origin::Planted, "sat".into(), Outcome::Mismatch("witness does not solve E2".into())));
                }
            }
            let decided = found.is_some();
            let expected = p.exists_forall()?;
            Ok((Origin::Planted, verdict_word(decided, "sat", "unsat"), agreement(decided, expected, "sat")))
        }
    }
}

fn verdict_word(b: bool, yes: &str, no: &str) -> String {
    if b { yes } else { no }.to_string()
}
