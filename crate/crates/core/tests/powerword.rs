use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use wreathkit::group::Permutation;
use wreathkit::powerword::{
    commensurate, naive_eval, normalize_powerword, powerpp, powerpp_zr, powerwp, powerwp_gwrz,
    powerwp_iterated, progression_sum_support, ray_intersection, tau_eval, AbelianGroup,
    ArithmeticProgression, PowerWordFile, Ray, SumSupport,
};
use wreathkit::sweep::{
    planted_trivial, powerword_instance, random_powerword, random_word, rng, PowerWordParams,
};
use wreathkit::{CanonicalKey, Element, GroupDescriptor, Letter, PowerWord, Word};

fn g(text: &str) -> GroupDescriptor {
    GroupDescriptor::parse(text).unwrap()
}

fn w(group: &GroupDescriptor, text: &str) -> Word {
    group.parse_word(text).unwrap()
}

fn big(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn a() -> Word {
    Word::single(Letter::gen(1, 1))
}

fn t() -> Word {
    Word::single(Letter::gen(0, 1))
}

fn oracle_agrees(group: &GroupDescriptor, pw: &PowerWord) -> bool {
    powerwp(group, pw).unwrap() == naive_eval(group, pw).unwrap().is_identity()
}

#[test]
fn naive_eval_examples() {
    let w11 = g("W(1,1)");
    assert!(naive_eval(&w11, &PowerWord::single(t(), 0)).unwrap().is_identity());
    let z = g("Z^1");
    let pw = PowerWord::single(t(), 37).with(t().inverse(), 37);
    assert!(naive_eval(&z, &pw).unwrap().is_identity());
    let at = a().concat(&t());
    let value = naive_eval(&w11, &PowerWord::single(at, 3)).unwrap();
    let Element::Wreath(x) = value else { panic!("not a wreath element") };
    assert_eq!(*x.cursor, Element::int(3));
    let support: Vec<(Element, Element)> = x.support.into_iter().collect();
    assert_eq!(support, (0..3).map(|p| (Element::int(p), Element::int(1))).collect::<Vec<_>>());
}

/// Every `A` letter precedes every `H` letter, and there is at most one
/// level-top letter kind per period.
fn in_ah(period: &Word, top: u32) -> bool {
    let levels: Vec<bool> = period
        .iter()
        .filter_map(|l| match l {
            Letter::Gen(x) => Some(x.level == top),
            _ => None,
        })
        .collect();
    levels.windows(2).all(|p| p[0] || !p[1])
}

#[test]
fn normalization_examples() {
    let w11 = g("W(1,1)");
    let pw = PowerWord::single(t().concat(&a()), 5);
    let normal = normalize_powerword(&w11, &pw).unwrap();
    assert!(normal.factors.iter().all(|f| in_ah(&f.period, 1)));
    assert_eq!(naive_eval(&w11, &normal).unwrap(), naive_eval(&w11, &pw).unwrap());

    let already = PowerWord::single(a().concat(&t()), 5);
    let normal = normalize_powerword(&w11, &already).unwrap();
    assert_eq!(naive_eval(&w11, &normal).unwrap(), naive_eval(&w11, &already).unwrap());

    let w12 = g("W(1,2)");
    let p = PowerWordParams { max_factors: 4, max_period: 5, max_exponent: 64 };
    let mut r = rng(14);
    for _ in 0..500 {
        let pw = random_powerword(&mut r, &w12.generators(), p);
        let normal = normalize_powerword(&w12, &pw).unwrap();
        assert!(normal.factors.iter().all(|f| in_ah(&f.period, 1)));
        assert_eq!(naive_eval(&w12, &normal).unwrap(), naive_eval(&w12, &pw).unwrap());
    }
}

/// `g0.1^{v_1} g0.2^{v_2} ⋯`
fn lattice(v: &[i64]) -> Word {
    v.iter()
        .enumerate()
        .fold(Word::empty(), |acc, (i, &k)| acc.concat(&pow_word(&Word::single(Letter::gen(0, i as u32 + 1)), k)))
}

#[test]
fn power_problem_in_lattices() {
    let u = lattice(&[2, 4]);
    let v = PowerWord::from_word(&lattice(&[6, 12]));
    assert_eq!(powerpp_zr(2, &u, &v).unwrap(), Some(BigInt::from(3)));
    let v = PowerWord::from_word(&lattice(&[3, 6]));
    assert_eq!(powerpp_zr(2, &u, &v).unwrap(), None);
    assert_eq!(powerpp_zr(2, &Word::empty(), &PowerWord::new()).unwrap(), Some(BigInt::zero()));
    let v = PowerWord::single(lattice(&[2, 4]), -big(70));
    assert_eq!(powerpp_zr(2, &u, &v).unwrap(), Some(-big(70)));
}

#[test]
fn commensurability_examples() {
    let z1 = g("Z^1");
    let c = commensurate(&z1, &lattice(&[2]), &lattice(&[3])).unwrap().unwrap();
    assert_eq!((c.s, c.t), (BigInt::from(3), BigInt::from(2)));
    let z2 = g("Z^2");
    assert_eq!(commensurate(&z2, &w(&z2, "g0.1"), &w(&z2, "g0.2")).unwrap(), None);
    let w11 = g("W(1,1)");
    assert_eq!(commensurate(&w11, &a().concat(&t()), &t()).unwrap(), None);
}

fn power_table(group: &GroupDescriptor, u: &Word, bound: i64) -> HashMap<CanonicalKey, Vec<i64>> {
    let mut table: HashMap<CanonicalKey, Vec<i64>> = HashMap::new();
    for x in -bound..=bound {
        let e = naive_eval(group, &PowerWord::single(u.clone(), x)).unwrap();
        table.entry(CanonicalKey::of(&e)).or_default().push(x);
    }
    table
}

/// `{(x, y) | u^x = v^y}` inside `[-bound, bound]²`.
fn brute_lattice(group: &GroupDescriptor, u: &Word, v: &Word, bound: i64) -> BTreeSet<(i64, i64)> {
    let us = power_table(group, u, bound);
    let mut out = BTreeSet::new();
    for y in -bound..=bound {
        let e = naive_eval(group, &PowerWord::single(v.clone(), y)).unwrap();
        for &x in us.get(&CanonicalKey::of(&e)).map(Vec::as_slice).unwrap_or(&[]) {
            out.insert((x, y));
        }
    }
    out
}

fn witness_lattice(s: i64, t: i64, bound: i64) -> BTreeSet<(i64, i64)> {
    (-2 * bound..=2 * bound)
        .map(|k| (k * s, k * t))
        .filter(|(x, y)| x.abs() <= bound && y.abs() <= bound)
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn random_pair(group: &GroupDescriptor, seed: u64) -> (Word, Word) {
    let mut r = rng(seed);
    let letters = group.generators();
    loop {
        let (u, v) = if r.gen_bool(0.5) {
            let len = r.gen_range(1..=4);
            let base = random_word(&mut r, &letters, len);
            let (i, j) = (r.gen_range(-3i64..=3), r.gen_range(-3i64..=3));
            (pow_word(&base, i), pow_word(&base, j))
        } else {
            let (i, j) = (r.gen_range(1..=4), r.gen_range(1..=4));
            (random_word(&mut r, &letters, i), random_word(&mut r, &letters, j))
        };
        let trivial = |x: &Word| group.eval_word(x).unwrap().is_identity();
        if !trivial(&u) && !trivial(&v) {
            return (u, v);
        }
    }
}

fn pow_word(u: &Word, k: i64) -> Word {
    let base = if k < 0 { u.inverse() } else { u.clone() };
    (0..k.abs()).fold(Word::empty(), |acc, _| acc.concat(&base))
}

#[test]
fn commensurability_matches_brute_force() {
    for name in ["W(1,1)", "W(2,1)"] {
        let group = g(name);
        for seed in 0..40 {
            let (u, v) = random_pair(&group, seed);
            let expected = brute_lattice(&group, &u, &v, 12);
            match commensurate(&group, &u, &v).unwrap() {
                Some(c) => {
                    let (s, t): (i64, i64) = (c.s.try_into().unwrap(), c.t.try_into().unwrap());
                    assert!(s != 0 && t != 0 && gcd(s, t) == 1, "{name} {u} {v}");
                    assert_eq!(expected, witness_lattice(s, t, 12), "{name} {u} {v}");
                }
                None => assert_eq!(expected, BTreeSet::from([(0, 0)]), "{name} {u} {v}"),
            }
        }
    }
}

fn ray(offset: Word, period: Word, last: i64) -> Ray {
    Ray { offset: PowerWord::from_word(&offset), period, last: last.into() }
}

fn ray_points(group: &GroupDescriptor, r: &Ray) -> Vec<CanonicalKey> {
    let last: i64 = (&r.last).try_into().unwrap();
    (0..=last)
        .map(|i| {
            let pw = r.offset.clone().with(r.period.clone(), i);
            CanonicalKey::of(&naive_eval(group, &pw).unwrap())
        })
        .collect()
}

fn brute_intersection(group: &GroupDescriptor, p: &Ray, q: &Ray) -> Vec<BigInt> {
    let targets: BTreeSet<CanonicalKey> = ray_points(group, q).into_iter().collect();
    ray_points(group, p)
        .into_iter()
        .enumerate()
        .filter(|(_, k)| targets.contains(k))
        .map(|(i, _)| BigInt::from(i))
        .collect()
}

fn progression_points(s: Option<ArithmeticProgression>) -> Vec<BigInt> {
    s.map(|s| s.elements().collect()).unwrap_or_default()
}

#[test]
fn ray_intersection_examples() {
    let z = g("Z^1");
    let tw = |k: i64| pow_word(&t(), k);
    let p = ray(tw(1), tw(2), 4);
    let q = ray(Word::empty(), tw(3), 6);
    let s = ray_intersection(&z, &p, &q).unwrap().unwrap();
    assert_eq!((s.offset, s.period, s.length), (1.into(), 3.into(), 2.into()));
    let s = ray_intersection(&z, &p, &p).unwrap().unwrap();
    assert_eq!((s.offset, s.period, s.length), (0.into(), 1.into(), 5.into()));
    let w11 = g("W(1,1)");
    let p = ray(Word::empty(), tw(2), 2);
    let q = ray(tw(1), tw(2), 2);
    assert_eq!(ray_intersection(&w11, &p, &q).unwrap(), None);
    let skew = ray(Word::empty(), a().concat(&t()), 3);
    assert!(ray_intersection(&w11, &skew, &p).is_err());
}

#[test]
fn ray_intersection_matches_brute_force_in_z() {
    let z = g("Z^1");
    let tw = |k: i64| pow_word(&t(), k);
    for sp in [-3, -1, 1, 2, 3] {
        for sq in [-2, 1, 2, 3] {
            for op in 0..6 {
                for oq in -3..6 {
                    for (lp, lq) in [(0, 4), (5, 2), (7, 7)] {
                        let p = ray(tw(op), tw(sp), lp);
                        let q = ray(tw(oq), tw(sq), lq);
                        let got = progression_points(ray_intersection(&z, &p, &q).unwrap());
                        assert_eq!(got, brute_intersection(&z, &p, &q), "{op}+{sp}i, {oq}+{sq}j");
                    }
                }
            }
        }
    }
}

#[test]
fn ray_intersection_matches_brute_force_in_w11() {
    let w11 = g("W(1,1)");
    let letters = w11.generators();
    let mut r = rng(3);
    let mut nonempty = 0;
    for _ in 0..300 {
        let len = r.gen_range(1..=3);
        let base = random_word(&mut r, &letters, len);
        if w11.eval_word(&base).unwrap().is_identity() {
            continue;
        }
        let (i, j) = (r.gen_range(1..=3), r.gen_range(-3..=3));
        if j == 0 {
            continue;
        }
        let o1 = random_word(&mut r, &letters, 2);
        let o2 = if r.gen_bool(0.7) {
            o1.concat(&pow_word(&base, r.gen_range(-4..=4)))
        } else {
            random_word(&mut r, &letters, 3)
        };
        let p = ray(o1, pow_word(&base, i), r.gen_range(0..12));
        let q = ray(o2, pow_word(&base, j), r.gen_range(0..12));
        let expected = brute_intersection(&w11, &p, &q);
        nonempty += usize::from(!expected.is_empty());
        assert_eq!(progression_points(ray_intersection(&w11, &p, &q).unwrap()), expected);
    }
    assert!(nonempty > 20);
}

#[test]
fn tau_examples() {
    let w11 = g("W(1,1)");
    let u = PowerWord::single(a().concat(&t()), big(40));
    assert_eq!(tau_eval(&w11, &u, &PowerWord::single(t(), 17)).unwrap(), Element::int(1));
    assert_eq!(tau_eval(&w11, &u, &PowerWord::single(t(), big(40))).unwrap(), Element::int(0));
    assert_eq!(tau_eval(&w11, &u, &PowerWord::single(t(), -1)).unwrap(), Element::int(0));
    let plain = PowerWord::single(t().concat(&t()), big(40));
    for j in [-5, 0, 3, 1000] {
        assert_eq!(tau_eval(&w11, &plain, &PowerWord::single(t(), j)).unwrap(), Element::int(0));
    }
    let small = PowerWord::single(a().concat(&t()), 6);
    let Element::Wreath(x) = naive_eval(&w11, &small).unwrap() else { panic!() };
    for j in -2..9 {
        let expected = x.support.get(&Element::int(j)).cloned().unwrap_or(Element::int(0));
        assert_eq!(tau_eval(&w11, &small, &PowerWord::single(t(), j)).unwrap(), expected);
    }
}

fn ap(offset: i64, period: i64, length: i64) -> ArithmeticProgression {
    ArithmeticProgression::new(offset, period, length).unwrap()
}

fn pointwise(m: &[(ArithmeticProgression, Vec<BigInt>)], group: &AbelianGroup) -> Vec<BigInt> {
    let mut sums: std::collections::BTreeMap<BigInt, Vec<BigInt>> = Default::default();
    for (s, value) in m {
        for p in s.elements() {
            let acc = sums.entry(p).or_insert_with(|| group.zero());
            group.add_into(acc, value);
        }
    }
    sums.into_iter().filter(|(_, v)| !group.is_zero(v)).map(|(p, _)| p).collect()
}

fn random_multiset<R: Rng>(r: &mut R, group: &AbelianGroup) -> Vec<(ArithmeticProgression, Vec<BigInt>)> {
    (0..r.gen_range(1..=5))
        .map(|_| {
            let s = ap(r.gen_range(0..=100), r.gen_range(1..=7), r.gen_range(1..=200));
            let mut v = vec![BigInt::from(r.gen_range(-3..=3))];
            group.reduce(&mut v);
            (s, v)
        })
        .collect()
}

#[test]
fn sum_support_examples() {
    let z = AbelianGroup::free(1);
    let m = vec![(ap(0, 2, 4), vec![BigInt::one()]), (ap(0, 2, 4), vec![-BigInt::one()])];
    assert_eq!(progression_sum_support(&m, &z, 3).unwrap(), SumSupport::Set(vec![]));
    let m = vec![(ap(0, 1, 5), vec![BigInt::one()])];
    assert_eq!(progression_sum_support(&m, &z, 3).unwrap(), SumSupport::Overflow);
    assert_eq!(
        progression_sum_support(&m, &z, 6).unwrap(),
        SumSupport::Set((0..5).map(BigInt::from).collect())
    );
}

#[test]
fn sum_support_matches_pointwise_sums() {
    let mut r = rng(4);
    for group in [AbelianGroup::free(1), AbelianGroup::cyclic(6)] {
        for _ in 0..250 {
            let m = random_multiset(&mut r, &group);
            let truth = pointwise(&m, &group);
            let b = r.gen_range(1..=8u64);
            let got = progression_sum_support(&m, &group, b).unwrap();
            if (truth.len() as u64) < b {
                assert_eq!(got, SumSupport::Set(truth));
            } else {
                assert_eq!(got, SumSupport::Overflow);
            }
        }
    }
}

#[test]
fn succinct_trivial_words() {
    let w11 = g("W(1,1)");
    let at = a().concat(&t());
    let pw = PowerWord::single(at.clone(), big(30)).with(at.inverse(), big(30));
    assert!(powerwp(&w11, &pw).unwrap());
    let spelled = PowerWord::single(at, big(30)).with(t().inverse().concat(&a().inverse()), big(30));
    assert!(powerwp(&w11, &spelled).unwrap());
    let small = PowerWord::single(a().concat(&t()), 4).with(t().inverse().concat(&a().inverse()), 4);
    assert!(naive_eval(&w11, &small).unwrap().is_identity());

    let mut r = rng(8);
    for name in ["W(1,1)", "W(1,2)", "W(2,1)"] {
        let group = g(name);
        for _ in 0..10 {
            let u = random_word(&mut r, &group.generators(), 5);
            let pw = PowerWord::single(u.clone(), big(50)).with(u.clone(), -big(50));
            assert!(powerwp(&group, &pw).unwrap());
        }
    }
}

#[test]
fn power_problem_in_wreath_products() {
    let w11 = g("W(1,1)");
    assert_eq!(powerpp(&w11, &t(), &PowerWord::single(t(), big(60))).unwrap(), Some(big(60)));
    assert_eq!(powerpp(&w11, &a(), &PowerWord::single(a(), 12)).unwrap(), Some(BigInt::from(12)));
    assert_eq!(powerpp(&w11, &a(), &PowerWord::single(t(), 1)).unwrap(), None);
    let conj = t().concat(&a()).concat(&t().inverse());
    let v = PowerWord::single(conj.clone(), -big(45));
    assert_eq!(powerpp(&w11, &conj, &v).unwrap(), Some(-big(45)));
}

#[test]
fn wreath_over_z_with_nonabelian_base() {
    let s5 = g("wrZ(Sym(5))");
    let gt = w(&s5, "(1,2,3) g0.1");
    let pw = PowerWord::single(gt.clone(), big(20)).with(gt.inverse(), big(20));
    assert!(powerwp_gwrz(&s5, &pw).unwrap());
    assert!(!powerwp_gwrz(&s5, &PowerWord::single(gt, 2)).unwrap());

    let c6 = g("wrZ(Cyc(6))");
    let p = PowerWordParams { max_factors: 5, max_period: 4, max_exponent: 300 };
    let mut r = rng(6);
    for _ in 0..150 {
        let (pw, _) = powerword_instance(&mut r, &c6, p);
        assert!(oracle_agrees(&c6, &pw), "{}", pw.format(&c6));
    }
    for name in ["wrZ(Sym(3))", "wrZ(UT3)", "wrZ(Dih(4))"] {
        let group = g(name);
        let p = PowerWordParams { max_factors: 4, max_period: 3, max_exponent: 40 };
        for _ in 0..60 {
            let (pw, _) = powerword_instance(&mut r, &group, p);
            assert_eq!(
                powerwp_gwrz(&group, &pw).unwrap(),
                naive_eval(&group, &pw).unwrap().is_identity(),
                "{name}: {}",
                pw.format(&group)
            );
        }
    }
}

#[test]
fn iterated_wreath_sweep() {
    assert!(powerwp_iterated(2, 1, &PowerWord::new()).unwrap());
    let w21 = g("W(2,1)");
    let p = PowerWordParams { max_factors: 6, max_period: 4, max_exponent: 256 };
    let mut r = rng(21);
    for _ in 0..150 {
        let (pw, _) = powerword_instance(&mut r, &w21, p);
        assert_eq!(
            powerwp_iterated(2, 1, &pw).unwrap(),
            naive_eval(&w21, &pw).unwrap().is_identity(),
            "{}",
            pw.format(&w21)
        );
    }
}

fn commutator(p: &PowerWord, q: &PowerWord) -> PowerWord {
    p.inverse().concat(&q.inverse()).concat(p).concat(q)
}

/// `c⁻¹ [[p1, p2], [p3, p4]] c` with random small power words.
fn metabelian_law<R: Rng>(r: &mut R, letters: &[Letter]) -> PowerWord {
    let p = PowerWordParams { max_factors: 2, max_period: 3, max_exponent: 1 << 20 };
    let parts: Vec<PowerWord> = (0..5).map(|_| random_powerword(r, letters, p)).collect();
    let law = commutator(&commutator(&parts[0], &parts[1]), &commutator(&parts[2], &parts[3]));
    parts[4].inverse().concat(&law).concat(&parts[4])
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
        let k = k.rem_euclid(u.order() as i64);
        for _ in 0..k {
            acc = acc.compose(&u);
        }
    }
    acc
}

#[test]
fn free_solvable_words() {
    let fs = g("FS(2,2)");
    let letters = fs.generators();
    let mut r = rng(22);
    for _ in 0..20 {
        let pw = (0..2).fold(PowerWord::new(), |acc, _| acc.concat(&metabelian_law(&mut r, &letters)));
        assert!(powerwp(&fs, &pw).unwrap());
    }
    let quotient = [
        Permutation::from_cycles(4, &[vec![1, 2], vec![3, 4]]).unwrap(),
        Permutation::from_cycles(4, &[vec![1, 2, 3]]).unwrap(),
    ];
    let mut nontrivial = 0;
    let p = PowerWordParams { max_factors: 4, max_period: 4, max_exponent: 30 };
    while nontrivial < 20 {
        let pw = random_powerword(&mut r, &letters, p);
        if quotient_image(&pw, &quotient).is_identity() {
            continue;
        }
        nontrivial += 1;
        assert!(!powerwp(&fs, &pw).unwrap(), "{}", pw.format(&fs));
    }
}

#[test]
fn power_word_files_round_trip() {
    let text = "group: W(1,1)\n(g1.1 g0.1) ^ 1099511627776\n(g0.1^-1 g1.1^-1) ^ -3\n";
    let file = PowerWordFile::parse(text, None).unwrap();
    assert_eq!(file.group, g("W(1,1)"));
    assert_eq!(file.word.factors[0].exponent, big(40));
    assert_eq!(PowerWordFile::parse(&file.format(), None).unwrap(), file);
    assert!(PowerWordFile::parse("(g0.1) ^ 2\n", None).is_err());
}

const SWEEP: [&str; 3] = ["W(1,1)", "W(1,2)", "W(2,1)"];

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn powerwp_matches_the_oracle(which in 0usize..3, seed in any::<u64>()) {
        let group = g(SWEEP[which]);
        let mut r = rng(seed);
        let (pw, _) = powerword_instance(&mut r, &group, PowerWordParams::default());
        prop_assert_eq!(powerwp(&group, &pw).unwrap(), naive_eval(&group, &pw).unwrap().is_identity());
    }

    #[test]
    fn planted_words_are_trivial(which in 0usize..3, seed in any::<u64>()) {
        let group = g(SWEEP[which]);
        let mut r = rng(seed);
        let p = PowerWordParams { max_exponent: 1 << 40, ..PowerWordParams::default() };
        prop_assert!(powerwp(&group, &planted_trivial(&mut r, &group, p)).unwrap());
    }

    #[test]
    fn normalization_preserves_value(seed in any::<u64>()) {
        let group = g("W(1,2)");
        let mut r = rng(seed);
        let p = PowerWordParams { max_factors: 4, max_period: 5, max_exponent: 64 };
        let pw = random_powerword(&mut r, &group.generators(), p);
        let normal = normalize_powerword(&group, &pw).unwrap();
        prop_assert!(normal.factors.iter().all(|f| in_ah(&f.period, 1)));
        prop_assert_eq!(naive_eval(&group, &normal).unwrap(), naive_eval(&group, &pw).unwrap());
    }

    #[test]
    fn sum_support_respects_its_bound(seed in any::<u64>(), b in 1u64..10, cyclic in any::<bool>()) {
        let group = if cyclic { AbelianGroup::cyclic(6) } else { AbelianGroup::free(1) };
        let mut r = rng(seed);
        let m = random_multiset(&mut r, &group);
        let truth = pointwise(&m, &group);
        match progression_sum_support(&m, &group, b).unwrap() {
            SumSupport::Set(s) => {
                prop_assert!((s.len() as u64) < b);
                prop_assert_eq!(s, truth);
            }
            SumSupport::Overflow => prop_assert!(truth.len() as u64 >= b),
        }
    }

    #[test]
    fn solution_sets_are_cosets(seed in any::<u64>()) {
        let group = g("W(1,1)");
        let letters = group.generators();
        let mut r = rng(seed);
        let (l1, l2) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let g1 = random_word(&mut r, &letters, l1);
        let g2 = random_word(&mut r, &letters, l2);
        let (x0, y0) = (r.gen_range(-3i64..=3), r.gen_range(-3i64..=3));
        let h = if r.gen_bool(0.7) {
            pow_word(&g1, x0).concat(&pow_word(&g2, y0))
        } else {
            random_word(&mut r, &letters, 3)
        };
        let eval = |x: i64, y: i64, target: &Word| {
            let pw = PowerWord::single(g1.clone(), x).with(g2.clone(), y).with(target.inverse(), 1);
            naive_eval(&group, &pw).unwrap().is_identity()
        };
        let bound = 6;
        let solutions: Vec<(i64, i64)> = (-bound..=bound)
            .flat_map(|x| (-bound..=bound).map(move |y| (x, y)))
            .filter(|&(x, y)| eval(x, y, &h))
            .collect();
        if let Some(&(bx, by)) = solutions.first() {
            for x in -bound..=bound {
                for y in -bound..=bound {
                    prop_assert_eq!(eval(x, y, &h), eval(x - bx, y - by, &Word::empty()));
                }
            }
        }
    }
}
