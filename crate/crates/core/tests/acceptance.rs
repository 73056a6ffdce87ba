use std::collections::{BTreeSet, HashMap};
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::seq::SliceRandom;
use rand::Rng;

use wreathkit::group::Permutation;
use wreathkit::hardness::{
    compile_formula, enumerate_dnfs, gprogram_eval, intended_valuation, reduce_forall_powerword, reduce_qbf2,
    structured_search, sym5_wreath_z, Assignment, GProgram, Instruction, Qbf2Layout,
};
use wreathkit::knapsack::{
    check_certificate, evaluate, normalize_expression, nu_decompose, solve_box, verify_certificate, KnapsackFile,
    Valuation, Verdict,
};
use wreathkit::periodic::{
    lcm_of_periods, periodic_check, recurrence_order_bound, trivial_up_to, PeriodicFunction,
};
use wreathkit::powerword::{
    commensurate, naive_eval, powerwp, powerwp_iterated, progression_sum_support, ray_intersection, AbelianGroup,
    ArithmeticProgression, Ray, SumSupport,
};
use wreathkit::sweep::{
    instance_seed, periodic_instance, perturb_certificate, planted_knapsack, powerword_instance, random_gprogram,
    random_permutation, random_powerword, random_word, rng, PowerWordParams,
};
use wreathkit::{CanonicalKey, GroupDescriptor, Letter, PowerWord, Word};

fn g(text: &str) -> GroupDescriptor {
    GroupDescriptor::parse(text).unwrap()
}

fn pow_word(u: &Word, k: i64) -> Word {
    let base = if k < 0 { u.inverse() } else { u.clone() };
    (0..k.abs()).fold(Word::empty(), |acc, _| acc.concat(&base))
}

fn nonidentity_word<R: Rng>(r: &mut R, group: &GroupDescriptor, max_len: usize) -> Word {
    loop {
        let len = r.gen_range(1..=max_len);
        let w = random_word(r, &group.generators(), len);
        if !group.eval_word(&w).unwrap().is_identity() {
            return w;
        }
    }
}

fn names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("V{i}")).collect()
}

fn criterion_1() -> String {
    let start = Instant::now();
    let mut trivial = 0;
    for (m, rank, name) in [(1, 1, "W(1,1)"), (1, 2, "W(1,2)"), (2, 1, "W(2,1)")] {
        let group = g(name);
        let mut r = rng(101);
        for i in 0..1000 {
            let (pw, _) = powerword_instance(&mut r, &group, PowerWordParams::default());
            let fast = powerwp_iterated(m, rank, &pw).unwrap();
            let slow = naive_eval(&group, &pw).unwrap().is_identity();
            assert_eq!(fast, slow, "{name} #{i}: {}", pw.format(&group));
            trivial += usize::from(fast);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    format!("3000 words ({trivial} trivial), 0 mismatches, {elapsed:.1?}")
}

fn criterion_2() -> String {
    let group = g("W(2,1)");
    let mut r = rng(102);
    let mut slowest = Duration::ZERO;
    let mut counts = [0usize; 2];
    for i in 0..50 {
        let u = nonidentity_word(&mut r, &group, 4);
        let k = BigInt::from(r.gen_range(1u64 << 40..=1u64 << 48));
        let mut factors: Vec<(Word, BigInt)> = if r.gen_bool(0.5) {
            let j = BigInt::from(r.gen_range(1u64 << 40..=1u64 << 48));
            vec![(u.clone(), k.clone()), (u.clone(), j.clone()), (u.clone(), -k), (u.clone(), -j)]
        } else {
            let c = nonidentity_word(&mut r, &group, 5);
            vec![
                (u.clone(), k.clone()),
                (c.clone(), 1.into()),
                (u.clone(), -k.clone()),
                (u.clone(), k.clone()),
                (c.inverse(), 1.into()),
                (u.clone(), -k),
            ]
        };
        let trivial = i % 2 == 0;
        if !trivial {
            if r.gen_bool(0.5) {
                let x = nonidentity_word(&mut r, &group, 2);
                let at = r.gen_range(0..=factors.len());
                factors.insert(at, (x, 1.into()));
            } else {
                let last = factors.len() - 1;
                let shift: i64 = *[-2, -1, 1, 2].choose(&mut r).unwrap();
                factors[last].1 += shift;
            }
        }
        let pw = factors.into_iter().fold(PowerWord::new(), |acc, (w, e)| acc.with(w, e));
        let start = Instant::now();
        let got = powerwp(&group, &pw).unwrap();
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        assert_eq!(got, trivial, "#{i}: {}", pw.format(&group));
        assert!(elapsed < Duration::from_secs(1), "#{i} took {elapsed:?}");
        counts[usize::from(trivial)] += 1;
    }
    format!("{} trivial, {} planted nontrivial, slowest {slowest:.1?}", counts[1], counts[0])
}

fn ray(offset: PowerWord, period: Word, last: i64) -> Ray {
    Ray { offset, period, last: last.into() }
}

fn points(s: Option<ArithmeticProgression>) -> Vec<BigInt> {
    s.map(|s| s.elements().collect()).unwrap_or_default()
}

fn criterion_3() -> String {
    let z = g("Z^1");
    let t = Word::single(Letter::gen(0, 1));
    let mut pairs = 0usize;
    for (sp, sq) in [(1, 1), (2, 3), (3, -2), (-1, 2), (4, 6)] {
        let (wp, wq) = (pow_word(&t, sp), pow_word(&t, sq));
        for op in 0..=30i64 {
            for oq in 0..=30i64 {
                for lp in 0..=30i64 {
                    for lq in (0..=30i64).step_by(3) {
                        let p = ray(PowerWord::single(t.clone(), op), wp.clone(), lp);
                        let q = ray(PowerWord::single(t.clone(), oq), wq.clone(), lq);
                        let expected: Vec<BigInt> = (0..=lp)
                            .filter(|i| {
                                let v = op + sp * i - oq;
                                v % sq == 0 && (0..=lq).contains(&(v / sq))
                            })
                            .map(BigInt::from)
                            .collect();
                        let got = points(ray_intersection(&z, &p, &q).unwrap());
                        assert_eq!(got, expected, "ℤ: {op}+{sp}i (i≤{lp}), {oq}+{sq}j (j≤{lq})");
                        pairs += 1;
                    }
                }
            }
        }
    }
    let z_pairs = pairs;

    let w11 = g("W(1,1)");
    let letters = w11.generators();
    let mut r = rng(103);
    let mut nonempty = 0;
    let lengths = [0i64, 4, 11, 30];
    for _ in 0..8 {
        let base = nonidentity_word(&mut r, &w11, 3);
        let offset = random_word(&mut r, &letters, 3);
        let key = |shift: &PowerWord, n: i64| {
            let pw = PowerWord::from_word(&offset).concat(shift).with(base.clone(), n);
            CanonicalKey::of(&naive_eval(&w11, &pw).unwrap())
        };
        let mut strays: Vec<PowerWord> = (0..61).map(|k| PowerWord::single(base.clone(), k - 30)).collect();
        strays.extend((0..20).map(|_| PowerWord::from_word(&random_word(&mut r, &letters, 3))));
        let mut cache: HashMap<(usize, i64), CanonicalKey> = HashMap::new();
        let mut at = |shift: usize, n: i64| {
            cache.entry((shift, n)).or_insert_with(|| key(&strays[shift], n)).clone()
        };
        let home = 30;
        for (i, j) in [(1i64, 1i64), (1, 2), (2, -1), (3, 2), (1, -3)] {
            for (shift, stray) in strays.iter().enumerate() {
                for lp in lengths {
                    for lq in lengths {
                        let p = ray(PowerWord::from_word(&offset), pow_word(&base, i), lp);
                        let q = ray(
                            PowerWord::from_word(&offset).concat(stray),
                            pow_word(&base, j),
                            lq,
                        );
                        let targets: BTreeSet<CanonicalKey> = (0..=lq).map(|m| at(shift, j * m)).collect();
                        let expected: Vec<BigInt> =
                            (0..=lp).filter(|&n| targets.contains(&at(home, i * n))).map(BigInt::from).collect();
                        nonempty += usize::from(!expected.is_empty());
                        let got = points(ray_intersection(&w11, &p, &q).unwrap());
                        assert_eq!(got, expected, "W(1,1): base {base}, {i}/{j}, stray {shift}, {lp}/{lq}");
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs >= 10_000);
    format!("{pairs} pairs ({z_pairs} in ℤ, {} in W(1,1), {nonempty} nonempty there), 0 mismatches", pairs - z_pairs)
}

fn pointwise(m: &[(ArithmeticProgression, Vec<BigInt>)], group: &AbelianGroup) -> Vec<BigInt> {
    let mut sums: std::collections::BTreeMap<BigInt, Vec<BigInt>> = Default::default();
    for (s, value) in m {
        for p in s.elements() {
            group.add_into(sums.entry(p).or_insert_with(|| group.zero()), value);
        }
    }
    sums.into_iter().filter(|(_, v)| !group.is_zero(v)).map(|(p, _)| p).collect()
}

fn criterion_4() -> String {
    let mut r = rng(104);
    let mut overflow = 0;
    for (name, group) in [("ℤ", AbelianGroup::free(1)), ("ℤ/6", AbelianGroup::cyclic(6))] {
        for i in 0..500 {
            let short = r.gen_bool(0.5);
            let mut m: Vec<(ArithmeticProgression, Vec<BigInt>)> = Vec::new();
            let n = r.gen_range(1..=5);
            while m.len() < n {
                let len = if short { r.gen_range(1..=8) } else { r.gen_range(1..=200) };
                let s = ArithmeticProgression::new(r.gen_range(0..=100), r.gen_range(1..=7), len).unwrap();
                let mut v = vec![BigInt::from(r.gen_range(-3..=3))];
                group.reduce(&mut v);
                if m.len() < 4 && r.gen_bool(0.3) {
                    let mut w = vec![-&v[0]];
                    group.reduce(&mut w);
                    m.push((s.clone(), w));
                }
                m.push((s, v));
            }
            let truth = pointwise(&m, &group);
            let got = progression_sum_support(&m, &group, 6).unwrap();
            if truth.len() < 6 {
                assert_eq!(got, SumSupport::Set(truth), "{name} #{i}");
            } else {
                assert_eq!(got, SumSupport::Overflow, "{name} #{i}");
                overflow += 1;
            }
        }
    }
    format!("1000 multisets ({overflow} overflow), 0 mismatches")
}

fn criterion_5() -> String {
    let mut r = rng(105);
    let mut trivial = 0;
    for name in ["Cyc(12)", "UT3", "Dih(4)"] {
        let group = g(name);
        let s = group.structure();
        let class = group.nilpotency_class().unwrap();
        for i in 0..500 {
            let (fs, _) = periodic_instance(&mut r, &group, 5).unwrap();
            let window = BigInt::from(lcm_of_periods(&fs));
            let horizon = &window * BigInt::from(10);
            let expected = trivial_up_to(&s, &fs, &(&window - 1)).unwrap();
            assert_eq!(periodic_check(&group, &fs, &horizon).unwrap(), expected, "{name} #{i}");
            let periods: Vec<usize> = fs.iter().map(PeriodicFunction::period).collect();
            let d = BigInt::from(recurrence_order_bound(class, &periods).unwrap().order);
            let last: BigInt = d.min(window.clone()) - 1;
            if trivial_up_to(&s, &fs, &last).unwrap() {
                assert!(trivial_up_to(&s, &fs, &(&window - 1)).unwrap(), "{name} #{i}: bound unsound");
            }
            trivial += usize::from(expected);
        }
    }
    format!("1500 instances ({trivial} trivial), 0 mismatches, bound sound in all")
}

const DIAGONAL: &str = "group: W(1,1)
vars: x1 x2 x3 x4
(g1.1 g0.1)^x1
(g0.1^-1)^x2
(g1.1^-1 g0.1)^x3
(g0.1^-1)^x4
";

fn criterion_6() -> String {
    let file = KnapsackFile::parse(DIAGONAL, None).unwrap();
    let mut found = solve_box(std::slice::from_ref(&file.expression), 5).unwrap();
    found.sort();
    let diagonal: Vec<Valuation> = (0..=5u32)
        .map(|n| file.vars.iter().map(|v| (v.clone(), BigUint::from(n))).collect())
        .collect();
    assert_eq!(found, diagonal);

    let mut certified = 0;
    let mut rejected = 0;
    for i in 0..200 {
        let mut r = rng(instance_seed(106, i));
        let bound = r.gen_range(1..=6);
        let (e, planted) = planted_knapsack(&mut r, 4, bound).unwrap();
        assert!(evaluate(&e, &planted).unwrap().is_identity(), "#{i}");
        let n = normalize_expression(&e).unwrap();
        let lifted = n.lift(&planted);
        let solutions = solve_box(std::slice::from_ref(&n.expression), bound).unwrap();
        assert!(solutions.contains(&lifted), "#{i}: planted solution missing");
        for nu in &solutions {
            let cert = nu_decompose(&n.expression, nu).unwrap();
            assert!(verify_certificate(&n.expression, nu, &cert).unwrap(), "#{i}");
            certified += 1;
        }
        let cert = nu_decompose(&n.expression, &lifted).unwrap();
        for _ in 0..5 {
            let bad = perturb_certificate(&mut r, &n.expression, &cert).unwrap();
            let verdict = check_certificate(&n.expression, &lifted, &bad).unwrap();
            assert_ne!(verdict, Verdict::Valid, "#{i}: {}", bad.format());
            rejected += 1;
        }
    }
    format!("diagonal = {{(n,n,n,n)}}, {certified} certificates verified, {rejected} perturbations rejected")
}

fn power_keys(group: &GroupDescriptor, u: &Word, bound: i64) -> Vec<CanonicalKey> {
    (-bound..=bound)
        .map(|x| CanonicalKey::of(&naive_eval(group, &PowerWord::single(u.clone(), x)).unwrap()))
        .collect()
}

fn brute_lattice(group: &GroupDescriptor, u: &Word, v: &Word, bound: i64) -> BTreeSet<(i64, i64)> {
    let mut us: HashMap<CanonicalKey, Vec<i64>> = HashMap::new();
    for (x, k) in power_keys(group, u, bound).into_iter().enumerate() {
        us.entry(k).or_default().push(x as i64 - bound);
    }
    let mut out = BTreeSet::new();
    for (y, k) in power_keys(group, v, bound).into_iter().enumerate() {
        for &x in us.get(&k).map(Vec::as_slice).unwrap_or(&[]) {
            out.insert((x, y as i64 - bound));
        }
    }
    out
}

fn criterion_7() -> String {
    let bound = 40;
    let mut none = 0;
    let mut some = 0;
    for name in ["W(1,1)", "W(2,1)"] {
        let group = g(name);
        let letters = group.generators();
        let mut r = rng(107);
        for i in 0..300 {
            let (u, v) = loop {
                let (u, v) = if r.gen_bool(0.5) {
                    let base = nonidentity_word(&mut r, &group, 4);
                    let (a, b) = (r.gen_range(-3i64..=3), r.gen_range(-3i64..=3));
                    (pow_word(&base, a), pow_word(&base, b))
                } else {
                    let (a, b) = (r.gen_range(1..=4), r.gen_range(1..=4));
                    (random_word(&mut r, &letters, a), random_word(&mut r, &letters, b))
                };
                let trivial = |x: &Word| group.eval_word(x).unwrap().is_identity();
                if !trivial(&u) && !trivial(&v) {
                    break (u, v);
                }
            };
            let expected = brute_lattice(&group, &u, &v, bound);
            match commensurate(&group, &u, &v).unwrap() {
                Some(c) => {
                    let (s, t): (i64, i64) = ((&c.s).try_into().unwrap(), (&c.t).try_into().unwrap());
                    let lattice: BTreeSet<(i64, i64)> = (-2 * bound..=2 * bound)
                        .map(|k| (k * s, k * t))
                        .filter(|(x, y)| x.abs() <= bound && y.abs() <= bound)
                        .collect();
                    assert_eq!(expected, lattice, "{name} #{i}: {u} / {v}");
                    some += 1;
                }
                None => {
                    assert_eq!(expected, BTreeSet::from([(0, 0)]), "{name} #{i}: {u} / {v}");
                    none += 1;
                }
            }
        }
    }
    assert!(none > 0 && some > 0);
    format!("600 pairs ({some} commensurable, {none} none), 0 mismatches")
}

fn satisfied_for_all(p: &GProgram, alpha: &Assignment) -> bool {
    p.universal_assignments().iter().all(|beta| {
        let mut gamma = alpha.clone();
        gamma.extend(beta.clone());
        gprogram_eval(p, &gamma).unwrap().is_identity()
    })
}

fn forall_agrees(p: &GProgram) -> bool {
    let w = reduce_forall_powerword(p).unwrap();
    let expected = satisfied_for_all(p, &Assignment::new());
    assert_eq!(powerwp(&sym5_wreath_z(), &w).unwrap(), expected, "{p}");
    expected
}

fn criterion_8() -> String {
    let start = Instant::now();
    let mut formulas = 0;
    let mut holding = 0;
    for k in 1..=3 {
        for f in enumerate_dnfs(&names(k), 3) {
            let p = compile_formula(&f).unwrap();
            let e = reduce_qbf2(&p).unwrap();
            let lay = Qbf2Layout::new(&p).unwrap();
            let mut any = false;
            for alpha in p.existential_assignments() {
                let good = satisfied_for_all(&p, &alpha);
                if good {
                    let nu = intended_valuation(&p, &alpha, lay.modulus).unwrap();
                    assert!(evaluate(&e, &nu).unwrap().is_identity(), "(a) {f}");
                }
                any |= good;
            }
            assert_eq!(any, f.exists_forall().unwrap(), "{f}");
            holding += usize::from(any);
            if k <= 2 {
                for m in [lay.modulus, 2 * lay.modulus] {
                    let hit = structured_search(&p, &e, m).unwrap();
                    assert_eq!(hit.is_some(), any, "(b) {f} at {m}");
                    if let Some(nu) = hit {
                        assert!(evaluate(&e, &nu).unwrap().is_identity(), "(b) {f}");
                    }
                }
            }
            formulas += 1;
        }
    }
    let ab = start.elapsed();

    let vars = names(3);
    let mut programs = 0;
    let mut trivial = 0;
    let small = [
        Permutation::identity(5),
        Permutation::from_cycles(5, &[vec![1, 2]]).unwrap(),
        Permutation::from_cycles(5, &[vec![1, 2, 3, 4, 5]]).unwrap(),
    ];
    let mut choices = Vec::new();
    for v in &vars {
        for a in &small {
            for b in &small {
                choices.push(Instruction::new(v.clone(), a.clone(), b.clone()));
            }
        }
    }
    let mut layer: Vec<Vec<Instruction>> = vec![Vec::new()];
    for len in 0..=3 {
        for ins in &layer {
            let p = GProgram::new(ins.clone(), Vec::new(), vars.clone()).unwrap();
            trivial += usize::from(forall_agrees(&p));
            programs += 1;
        }
        if len < 3 {
            layer = layer
                .iter()
                .flat_map(|ins| {
                    choices.iter().map(move |c| {
                        let mut next = ins.clone();
                        next.push(c.clone());
                        next
                    })
                })
                .collect();
        }
    }
    let exhaustive = programs;
    let mut r = rng(108);
    for i in 0..4000 {
        let p = if i % 2 == 0 {
            let half = r.gen_range(0..=4);
            random_gprogram(&mut r, &[], &vars, half)
        } else {
            let len = r.gen_range(0..=8);
            let ins = (0..len)
                .map(|_| {
                    let v = vars.choose(&mut r).unwrap().clone();
                    Instruction::new(v, random_permutation(&mut r, 5), random_permutation(&mut r, 5))
                })
                .collect();
            GProgram::new(ins, Vec::new(), vars.clone()).unwrap()
        };
        assert!(p.len() <= 8);
        trivial += usize::from(forall_agrees(&p));
        programs += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    format!(
        "{formulas} formulas ({holding} ∃∀-true) in {ab:.1?}; {programs} ∀-programs ({exhaustive} exhaustive over 3 permutations, ℓ ≤ 3; rest sampled ℓ ≤ 8; {trivial} trivial); {elapsed:.1?} total"
    )
}

fn quotient_image(pw: &PowerWord, gens: &[Permutation; 2]) -> Permutation {
    let degree = gens[0].degree();
    let mut acc = Permutation::identity(degree);
    for f in &pw.factors {
        let mut u = Permutation::identity(degree);
        for l in f.period.iter() {
            if let Letter::Gen(x) = l {
                let p = &gens[x.index as usize - 1];
                u = u.compose(&if x.inverse { p.inverse() } else { p.clone() });
            }
        }
        let k: i64 = (&f.exponent).try_into().unwrap();
        for _ in 0..k.rem_euclid(u.order() as i64) {
            acc = acc.compose(&u);
        }
    }
    acc
}

fn commutator(p: &PowerWord, q: &PowerWord) -> PowerWord {
    p.inverse().concat(&q.inverse()).concat(p).concat(q)
}

fn criterion_9() -> String {
    let fs = g("FS(2,2)");
    let letters = fs.generators();
    let mut r = rng(109);
    let p = PowerWordParams { max_factors: 2, max_period: 3, max_exponent: 1 << 20 };
    for i in 0..200 {
        let laws = r.gen_range(1..=3);
        let pw = (0..laws).fold(PowerWord::new(), |acc, _| {
            let parts: Vec<PowerWord> = (0..5).map(|_| random_powerword(&mut r, &letters, p)).collect();
            let law = commutator(&commutator(&parts[0], &parts[1]), &commutator(&parts[2], &parts[3]));
            acc.concat(&parts[4].inverse().concat(&law).concat(&parts[4]))
        });
        assert!(powerwp(&fs, &pw).unwrap(), "planted #{i}: {}", pw.format(&fs));
    }
    let quotient = [
        Permutation::from_cycles(4, &[vec![1, 2], vec![3, 4]]).unwrap(),
        Permutation::from_cycles(4, &[vec![1, 2, 3]]).unwrap(),
    ];
    let p = PowerWordParams { max_factors: 4, max_period: 4, max_exponent: 30 };
    let mut nontrivial = 0;
    while nontrivial < 100 {
        let pw = random_powerword(&mut r, &letters, p);
        if quotient_image(&pw, &quotient).is_identity() {
            continue;
        }
        assert!(!powerwp(&fs, &pw).unwrap(), "{}", pw.format(&fs));
        nontrivial += 1;
    }
    "200 planted laws trivial, 100 words nontrivial in Alt(4) decided nontrivial".into()
}

type Criterion = (&'static str, fn() -> String);

const CRITERIA: [Criterion; 9] = [
    ("power word oracle equivalence", criterion_1),
    ("succinct exponents up to 2^48", criterion_2),
    ("ray intersection exactness", criterion_3),
    ("progression sum support", criterion_4),
    ("periodic checker", criterion_5),
    ("knapsack solutions and certificates", criterion_6),
    ("commensurability lattices", criterion_7),
    ("hardness reductions", criterion_8),
    ("free solvable words", criterion_9),
];

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".into())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        for i in 1..=CRITERIA.len() {
            println!("criterion_{i}: test");
        }
        return ExitCode::SUCCESS;
    }
    let filters: Vec<&String> = args.iter().filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (title, run)) in CRITERIA.iter().enumerate() {
        let id = format!("criterion_{}", i + 1);
        if !filters.is_empty() && !filters.iter().any(|f| id.contains(f.as_str()) || "acceptance".contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        match panic::catch_unwind(run) {
            Ok(detail) => println!("{id} PASS {title}: {detail} [{:.1?}]", start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("{id} FAIL {title}: {}", panic_message(&e));
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
