use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::classes::{classes_of, ParallelClassData};
use super::{abelian_wreath, is_solution, letters, value_of, KnapsackExpression, Valuation};
use crate::error::{Error, Result};
use crate::group::{CanonicalKey, Element, Structure};
use crate::periodic::recurrence_order_bound;
use crate::powerword::{interval_partition, AbelianWreath, PowerWord};

/// Largest number of occurrences a decomposition is built or checked for.
const OCCURRENCE_LIMIT: u64 = 1 << 20;

/// The occurrences `s..=t` of power `r` (counted from 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub r: usize,
    pub s: u64,
    pub t: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subbundle {
    /// Every occurrence sits at `position`.
    Stacking { position: Element, triples: Vec<Triple> },
    /// Occurrences on the ray `offset · h_C^z`, `0 ≤ z ≤ length`, each triple
    /// filling the residue class `γ` modulo `|β_r|`.
    Packed { class: usize, offset: Element, length: u64, triples: Vec<(Triple, u64)> },
}

impl Subbundle {
    pub fn triples(&self) -> Vec<Triple> {
        match self {
            Subbundle::Stacking { triples, .. } => triples.clone(),
            Subbundle::Packed { triples, .. } => triples.iter().map(|(t, _)| *t).collect(),
        }
    }
}

/// A ν-decomposition split into subbundles whose `τ`-sums vanish.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub subbundles: Vec<Subbundle>,
}

/// Outcome of [`check_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// The triples do not form a ν-decomposition, or refer to unknown data.
    Malformed(String),
    /// Well formed, but some condition fails.
    Invalid(String),
}

impl DecompositionCertificate {
    pub fn triples(&self) -> Vec<Triple> {
        self.subbundles.iter().flat_map(Subbundle::triples).collect()
    }

    pub fn stacking_count(&self) -> usize {
        self.subbundles.iter().filter(|b| matches!(b, Subbundle::Stacking { .. })).count()
    }

    /// One line per subbundle: `stack <key> | r:s..t …` or
    /// `pack <class> <key> <length> | r:s..t@γ …`, keys in hex.
    pub fn format(&self) -> String {
        let mut out = String::new();
        for b in &self.subbundles {
            match b {
                Subbundle::Stacking { position, triples } => {
                    out.push_str(&format!("stack {} |", key_text(position)));
                    for t in triples {
                        out.push_str(&format!(" {}:{}..{}", t.r, t.s, t.t));
                    }
                }
                Subbundle::Packed { class, offset, length, triples } => {
                    out.push_str(&format!("pack {class} {} {length} |", key_text(offset)));
                    for (t, g) in triples {
                        out.push_str(&format!(" {}:{}..{}@{g}", t.r, t.s, t.t));
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`DecompositionCertificate::format`] output for an expression.
    pub fn parse(text: &str, e: &KnapsackExpression) -> Result<DecompositionCertificate> {
        let w = abelian_wreath(&e.group)?;
        let h = w.right_structure();
        let bad = |line: usize, m: &str| Error::MalformedCertificate(format!("line {}: {m}", line + 1));
        let mut subbundles = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, body) = line.split_once('|').ok_or_else(|| bad(n, "missing `|`"))?;
            let fields: Vec<&str> = head.split_whitespace().collect();
            let position = |hex: &str| -> Result<Element> {
                let key = if hex == "-" { CanonicalKey::default() } else { CanonicalKey::from_hex(hex).map_err(|_| bad(n, "bad key"))? };
                key.decode(h).map_err(|_| bad(n, "key does not decode"))
            };
            let mut triples = Vec::new();
            let mut gammas = Vec::new();
            for item in body.split_whitespace() {
                let (range, gamma) = match item.split_once('@') {
                    Some((r, g)) => (r, Some(g.parse::<u64>().map_err(|_| bad(n, "bad remainder"))?)),
                    None => (item, None),
                };
                let (r, st) = range.split_once(':').ok_or_else(|| bad(n, "bad triple"))?;
                let (s, t) = st.split_once("..").ok_or_else(|| bad(n, "bad triple"))?;
                let num = |x: &str| x.parse::<u64>().map_err(|_| bad(n, "bad number"));
                let r = r.parse::<usize>().map_err(|_| bad(n, "bad index"))?;
                triples.push(Triple { r, s: num(s)?, t: num(t)? });
                gammas.push(gamma);
            }
            match fields.as_slice() {
                ["stack", key] => {
                    if gammas.iter().any(Option::is_some) {
                        return Err(bad(n, "remainder on a stacking triple"));
                    }
                    subbundles.push(Subbundle::Stacking { position: position(key)?, triples });
                }
                ["pack", class, key, length] => {
                    let class = class.parse().map_err(|_| bad(n, "bad class"))?;
                    let length = length.parse().map_err(|_| bad(n, "bad length"))?;
                    let triples = triples
                        .into_iter()
                        .zip(gammas)
                        .map(|(t, g)| g.map(|g| (t, g)).ok_or_else(|| bad(n, "missing remainder")))
                        .collect::<Result<_>>()?;
                    subbundles.push(Subbundle::Packed { class, offset: position(key)?, length, triples });
                }
                _ => return Err(bad(n, "expected `stack` or `pack`")),
            }
        }
        Ok(DecompositionCertificate { subbundles })
    }
}

impl fmt::Display for DecompositionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

fn key_text(e: &Element) -> String {
    let key = CanonicalKey::of(e);
    if key.is_empty() {
        "-".to_string()
    } else {
        key.to_hex()
    }
}

/// A normalized expression under a valuation, with everything the
/// decomposition and its check need.
struct Layout {
    w: AbelianWreath,
    a: Vec<Vec<BigInt>>,
    step: Vec<Element>,
    trivial: Vec<bool>,
    nu: Vec<u64>,
    start: Vec<Element>,
    end: Element,
    classes: Vec<ParallelClassData>,
}

impl Layout {
    fn new(e: &KnapsackExpression, nu: &Valuation) -> Result<Layout> {
        let w = abelian_wreath(&e.group)?;
        let (v, u) = e.structure_words()?;
        let h = w.right_structure().clone();
        if let Some(i) = v.iter().position(|c| letters(c).any(|l| w.is_left(l))) {
            return Err(Error::precondition(format!("constant v{i} is not in the right factor")));
        }
        let mut a = Vec::with_capacity(u.len());
        let mut step = Vec::with_capacity(u.len());
        for (i, p) in u.iter().enumerate() {
            let mut value = w.left.zero();
            let mut in_head = true;
            for l in letters(p) {
                if w.is_left(l) {
                    if !in_head {
                        return Err(Error::precondition(format!("period u{} is not normalized", i + 1)));
                    }
                    w.left.add_into(&mut value, &w.left_value(l)?);
                } else {
                    in_head = false;
                }
            }
            a.push(value);
            step.push(h.eval_word(&w.sigma_word(p))?);
        }
        let trivial: Vec<bool> = step.iter().map(Element::is_identity).collect();
        let nu: Vec<u64> = e
            .powers
            .iter()
            .map(|(_, x)| {
                value_of(nu, x)?
                    .to_u64()
                    .ok_or_else(|| Error::Unsupported(format!("value of {x} is too large to decompose")))
            })
            .collect::<Result<_>>()?;
        if nu.iter().sum::<u64>() > OCCURRENCE_LIMIT {
            return Err(Error::Unsupported(format!("more than {OCCURRENCE_LIMIT} occurrences")));
        }
        let mut pos = h.eval_word(&v[0])?;
        let mut start = Vec::with_capacity(u.len());
        for r in 0..u.len() {
            start.push(pos.clone());
            h.mul_into(&mut pos, &h.pow(&step[r], &BigInt::from(nu[r]))?)?;
            h.mul_into(&mut pos, &h.eval_word(&v[r + 1])?)?;
        }
        let classes = classes_of(&w, &u)?;
        Ok(Layout { w, a, step, trivial, nu, start, end: pos, classes })
    }

    fn h(&self) -> &Structure {
        self.w.right_structure()
    }

    /// `σ_ν(r, k)`, the position of the `k`-th occurrence of power `r`.
    fn position(&self, r: usize, k: u64) -> Result<Element> {
        let h = self.h();
        h.mul(&self.start[r - 1], &h.pow(&self.step[r - 1], &BigInt::from(k))?)
    }

    /// `z` with `target = origin · h_C^z`.
    fn coordinate(&self, class: usize, origin: &Element, target: &Element) -> Result<Option<BigInt>> {
        let h = self.h();
        let diff = h.mul(&h.inv(origin)?, target)?;
        let pw = PowerWord::from_word(&h.to_word(&diff)?);
        self.w.right.power_pp(&self.classes[class].h_c, &pw)
    }

    fn along(&self, class: usize, origin: &Element, z: &BigInt) -> Result<Element> {
        let h = self.h();
        let gen = h.eval_word(&self.classes[class].h_c)?;
        h.mul(origin, &h.pow(&gen, z)?)
    }

    fn class_of(&self, r: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.members.contains(&r))
    }

    fn beta(&self, class: usize, r: usize) -> BigInt {
        self.classes[class].beta[&r].clone()
    }
}

/// Builds a certificate for a solution `ν` of a normalized expression.
pub fn nu_decompose(e: &KnapsackExpression, nu: &Valuation) -> Result<DecompositionCertificate> {
    let lay = Layout::new(e, nu)?;
    if !is_solution(e, nu)? {
        return Err(Error::precondition("ν is not a solution"));
    }
    let d = lay.nu.len();
    let progressions: Vec<usize> = (1..=d).filter(|&r| lay.nu[r - 1] > 0).collect();
    let mut occurrences: BTreeMap<usize, Vec<Element>> = BTreeMap::new();
    let mut hits: BTreeMap<Element, BTreeSet<usize>> = BTreeMap::new();
    for &r in &progressions {
        let count = if lay.trivial[r - 1] { 1 } else { lay.nu[r - 1] };
        let h = lay.h();
        let mut pos = lay.start[r - 1].clone();
        let mut list = Vec::with_capacity(count as usize);
        for _ in 0..count {
            hits.entry(pos.clone()).or_default().insert(r);
            list.push(pos.clone());
            h.mul_into(&mut pos, &lay.step[r - 1])?;
        }
        occurrences.insert(r, list);
    }

    // Points where two progressions meet exactly once.
    let mut meets: BTreeMap<(usize, usize), (u64, Element)> = BTreeMap::new();
    for (point, rs) in &hits {
        let rs: Vec<usize> = rs.iter().copied().collect();
        for i in 0..rs.len() {
            for j in i + 1..rs.len() {
                let entry = meets.entry((rs[i], rs[j])).or_insert((0, point.clone()));
                entry.0 += 1;
            }
        }
    }
    let singular: BTreeSet<Element> =
        meets.into_values().filter(|(n, _)| *n == 1).map(|(_, p)| p).collect();

    let mut stacks: BTreeMap<Element, Vec<Triple>> = BTreeMap::new();
    let mut runs: Vec<Triple> = Vec::new();
    let cap = 2 * progressions.len() * progressions.len() + 1;
    for &r in &progressions {
        let last = lay.nu[r - 1] - 1;
        let list = &occurrences[&r];
        if lay.trivial[r - 1] {
            stacks.entry(list[0].clone()).or_default().push(Triple { r, s: 0, t: last });
            continue;
        }
        let mut pieces = 0;
        let mut open: Option<u64> = None;
        for (k, pos) in list.iter().enumerate() {
            let k = k as u64;
            if singular.contains(pos) {
                if let Some(s) = open.take() {
                    runs.push(Triple { r, s, t: k - 1 });
                    pieces += 1;
                }
                stacks.entry(pos.clone()).or_default().push(Triple { r, s: k, t: k });
                pieces += 1;
            } else if open.is_none() {
                open = Some(k);
            }
        }
        if let Some(s) = open {
            runs.push(Triple { r, s, t: last });
            pieces += 1;
        }
        if pieces > cap {
            return Err(Error::Internal(format!("progression {r} refined into {pieces} > {cap} pieces")));
        }
    }

    let mut packed = Vec::new();
    for class in 0..lay.classes.len() {
        let mine: Vec<&Triple> = runs.iter().filter(|t| lay.class_of(t.r) == Some(class)).collect();
        let mut cosets: Vec<(Element, Vec<(Triple, BigInt)>)> = Vec::new();
        'runs: for run in mine {
            let pos = lay.position(run.r, run.s)?;
            for (origin, members) in cosets.iter_mut() {
                if let Some(z) = lay.coordinate(class, origin, &pos)? {
                    members.push((*run, z));
                    continue 'runs;
                }
            }
            cosets.push((pos, vec![(*run, BigInt::zero())]));
        }
        for (origin, members) in cosets {
            let spans: Vec<(BigInt, BigInt)> = members
                .iter()
                .map(|(t, z)| {
                    let end = z + lay.beta(class, t.r) * BigInt::from(t.t - t.s);
                    (z.clone().min(end.clone()), z.clone().max(end))
                })
                .collect();
            for (lo, hi, inside) in interval_partition(&spans) {
                let mut triples = Vec::new();
                for i in inside {
                    let (t, z) = &members[i];
                    if let Some(piece) = restrict(t, z, &lay.beta(class, t.r), &lo, &hi) {
                        triples.push(piece);
                    }
                }
                if triples.is_empty() {
                    continue;
                }
                let offset = lay.along(class, &origin, &lo)?;
                if lo == hi {
                    stacks.entry(offset).or_default().extend(triples.into_iter().map(|(t, _)| t));
                } else {
                    let length = (&hi - &lo)
                        .to_u64()
                        .ok_or_else(|| Error::Internal("ray length overflow".into()))?;
                    packed.push(Subbundle::Packed { class, offset, length, triples });
                }
            }
        }
    }
    let mut subbundles: Vec<Subbundle> = stacks
        .into_iter()
        .map(|(position, mut triples)| {
            triples.sort();
            Subbundle::Stacking { position, triples }
        })
        .collect();
    subbundles.extend(packed);
    Ok(DecompositionCertificate { subbundles })
}

/// The part of run `t`, starting at ray coordinate `z`, inside `[lo, hi]`,
/// with its remainder relative to `lo`.
fn restrict(t: &Triple, z: &BigInt, beta: &BigInt, lo: &BigInt, hi: &BigInt) -> Option<(Triple, u64)> {
    let b = beta.abs();
    let (from, to) = if beta.is_positive() {
        ((lo - z).div_ceil(&b), (hi - z).div_floor(&b))
    } else {
        ((z - hi).div_ceil(&b), (z - lo).div_floor(&b))
    };
    let from = from.max(BigInt::zero());
    let to = to.min(BigInt::from(t.t - t.s));
    if from > to {
        return None;
    }
    let at = |k: &BigInt| z + beta * k;
    let first = at(&from).min(at(&to));
    let gamma = (first - lo).to_u64()?;
    let s = t.s + from.to_u64()?;
    Some((Triple { r: t.r, s, t: t.s + to.to_u64()? }, gamma))
}

/// Checks a certificate against `E` and `ν`, telling malformed from invalid.
pub fn check_certificate(
    e: &KnapsackExpression,
    nu: &Valuation,
    cert: &DecompositionCertificate,
) -> Result<Verdict> {
    let lay = Layout::new(e, nu)?;
    if let Some(reason) = partition_defect(&lay, cert) {
        return Ok(Verdict::Malformed(reason));
    }
    for b in &cert.subbundles {
        if let Subbundle::Packed { class, triples, .. } = b {
            let Some(data) = lay.classes.get(*class) else {
                return Ok(Verdict::Malformed(format!("unknown class {class}")));
            };
            if let Some((t, _)) = triples.iter().find(|(t, _)| !data.members.contains(&t.r)) {
                return Ok(Verdict::Malformed(format!("power {} is not in class {class}", t.r)));
            }
        }
    }
    if !lay.end.is_identity() {
        return Ok(Verdict::Invalid("σ(ν(E)) is not trivial".into()));
    }
    for (i, b) in cert.subbundles.iter().enumerate() {
        let failure = match b {
            Subbundle::Stacking { position, triples } => check_stacking(&lay, position, triples)?,
            Subbundle::Packed { class, offset, length, triples } => {
                check_packed(&lay, *class, offset, *length, triples)?
            }
        };
        if let Some(reason) = failure {
            return Ok(Verdict::Invalid(format!("subbundle {i}: {reason}")));
        }
    }
    Ok(Verdict::Valid)
}

/// Whether `cert` proves `ν(E) = 1`.
pub fn verify_certificate(e: &KnapsackExpression, nu: &Valuation, cert: &DecompositionCertificate) -> Result<bool> {
    Ok(check_certificate(e, nu, cert)? == Verdict::Valid)
}

fn partition_defect(lay: &Layout, cert: &DecompositionCertificate) -> Option<String> {
    let d = lay.nu.len();
    let mut ranges: Vec<Vec<(u64, u64)>> = vec![Vec::new(); d];
    for t in cert.triples() {
        if t.r == 0 || t.r > d {
            return Some(format!("power index {} out of range", t.r));
        }
        if t.s > t.t || t.t >= lay.nu[t.r - 1] {
            return Some(format!("range {}:{}..{} outside the occurrences", t.r, t.s, t.t));
        }
        ranges[t.r - 1].push((t.s, t.t));
    }
    for (i, list) in ranges.iter_mut().enumerate() {
        list.sort();
        let mut next = 0;
        for &(s, t) in list.iter() {
            if s != next {
                return Some(format!("occurrences of power {} are not partitioned", i + 1));
            }
            next = t + 1;
        }
        if next != lay.nu[i] {
            return Some(format!("occurrences of power {} are not covered", i + 1));
        }
    }
    None
}

fn check_stacking(lay: &Layout, position: &Element, triples: &[Triple]) -> Result<Option<String>> {
    let mut sum = lay.w.left.zero();
    for t in triples {
        if t.s != t.t && !lay.trivial[t.r - 1] {
            return Ok(Some(format!("triple {}:{}..{} is not at a single position", t.r, t.s, t.t)));
        }
        if lay.position(t.r, t.s)? != *position {
            return Ok(Some(format!("triple {}:{}..{} is elsewhere", t.r, t.s, t.t)));
        }
        lay.w.left.add_scaled(&mut sum, &lay.a[t.r - 1], &BigInt::from(t.t - t.s + 1));
    }
    Ok((!lay.w.left.is_zero(&sum)).then(|| "left values do not cancel".to_string()))
}

fn check_packed(
    lay: &Layout,
    class: usize,
    offset: &Element,
    length: u64,
    triples: &[(Triple, u64)],
) -> Result<Option<String>> {
    let len = BigInt::from(length);
    let mut periods = Vec::with_capacity(triples.len());
    for (t, gamma) in triples {
        let beta = lay.beta(class, t.r);
        let b = beta.abs();
        let Some(zs) = lay.coordinate(class, offset, &lay.position(t.r, t.s)?)? else {
            return Ok(Some(format!("triple {}:{}..{} is off the ray", t.r, t.s, t.t)));
        };
        let zt = &zs + &beta * BigInt::from(t.t - t.s);
        let (first, last) = (zs.clone().min(zt.clone()), zs.max(zt));
        if first.is_negative() || first >= b || last > len || last <= &len - &b {
            return Ok(Some(format!("triple {}:{}..{} does not fill the ray", t.r, t.s, t.t)));
        }
        if BigInt::from(*gamma) != first {
            return Ok(Some(format!("remainder of {}:{}..{} is wrong", t.r, t.s, t.t)));
        }
        periods.push(b.to_usize().unwrap_or(usize::MAX));
    }
    let order = recurrence_order_bound(1, &periods)?.order;
    let lcm = periods.iter().fold(BigUint::one(), |acc, p| acc.lcm(&BigUint::from(*p)));
    let limit = BigUint::from(length).min(order - 1u32).min(lcm - 1u32);
    let limit = limit.to_u64().unwrap_or(u64::MAX);
    for z in 0..=limit {
        let mut sum = lay.w.left.zero();
        for ((t, gamma), p) in triples.iter().zip(&periods) {
            if z % *p as u64 == *gamma {
                lay.w.left.add_into(&mut sum, &lay.a[t.r - 1]);
            }
        }
        if !lay.w.left.is_zero(&sum) {
            return Ok(Some(format!("left values do not cancel at ray point {z}")));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::super::tests::diagonal_example;
    use super::super::{solve_box, KnapsackExpression};
    use super::*;
    use crate::group::{GroupDescriptor, Letter, Word};

    fn nu(pairs: &[(&str, u64)]) -> Valuation {
        pairs.iter().map(|(x, v)| (x.to_string(), BigUint::from(*v))).collect()
    }

    fn int(k: i64) -> Element {
        Element::int(k)
    }

    #[test]
    fn diagonal_example_at_two() {
        let e = diagonal_example();
        let v = nu(&[("x1", 2), ("x2", 2), ("x3", 2), ("x4", 2)]);
        let cert = nu_decompose(&e, &v).unwrap();
        let positions: Vec<Element> = cert
            .subbundles
            .iter()
            .map(|b| match b {
                Subbundle::Stacking { position, .. } => position.clone(),
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        assert_eq!(positions, vec![int(0), int(1), int(2)]);
        assert_eq!(check_certificate(&e, &v, &cert).unwrap(), Verdict::Valid);
    }

    #[test]
    fn every_boxed_solution_is_certified() {
        let e = diagonal_example();
        for v in solve_box(std::slice::from_ref(&e), 5).unwrap() {
            let cert = nu_decompose(&e, &v).unwrap();
            assert!(verify_certificate(&e, &v, &cert).unwrap());
            let back = DecompositionCertificate::parse(&cert.format(), &e).unwrap();
            assert_eq!(back, cert);
        }
    }

    #[test]
    fn long_rays_are_packed() {
        let g = GroupDescriptor::IteratedWreath(1, 1);
        let w = |s: &str| g.parse_word(s).unwrap();
        let e = KnapsackExpression::new(
            g.clone(),
            vec![Word::empty(), w("g0.1^-1 g0.1^-1"), w("g0.1 g0.1")],
            vec![(w("g1.1 g0.1 g0.1"), "x".into()), (w("g1.1^-1 g0.1^-1 g0.1^-1"), "y".into())],
        )
        .unwrap();
        let v = nu(&[("x", 3), ("y", 3)]);
        assert!(is_solution(&e, &v).unwrap());
        let cert = nu_decompose(&e, &v).unwrap();
        assert_eq!(cert.subbundles.len(), 1);
        let Subbundle::Packed { length, triples, .. } = &cert.subbundles[0] else {
            panic!("expected a packed subbundle");
        };
        assert_eq!(*length, 2);
        assert_eq!(triples.len(), 2);
        assert_eq!(check_certificate(&e, &v, &cert).unwrap(), Verdict::Valid);
    }

    #[test]
    fn torsion_left_factor_stacks() {
        let g = GroupDescriptor::WreathOverZ(Box::new(GroupDescriptor::Cyclic(2)));
        let a = Word::single(Letter::gen(1, 1));
        let e = KnapsackExpression::new(g, vec![Word::empty(), Word::empty()], vec![(a, "x".into())]).unwrap();
        let v = nu(&[("x", 2)]);
        let cert = nu_decompose(&e, &v).unwrap();
        assert_eq!(cert.subbundles.len(), 1);
        assert_eq!(cert.stacking_count(), 1);
        assert!(verify_certificate(&e, &v, &cert).unwrap());
    }

    #[test]
    fn perturbations_are_rejected() {
        let e = diagonal_example();
        let v = nu(&[("x1", 2), ("x2", 2), ("x3", 2), ("x4", 2)]);
        let cert = nu_decompose(&e, &v).unwrap();
        let mut dropped = cert.clone();
        if let Subbundle::Stacking { triples, .. } = &mut dropped.subbundles[1] {
            triples.pop();
        }
        assert!(matches!(check_certificate(&e, &v, &dropped).unwrap(), Verdict::Malformed(_)));
        let mut moved = cert.clone();
        if let Subbundle::Stacking { position, .. } = &mut moved.subbundles[0] {
            *position = int(5);
        }
        assert!(matches!(check_certificate(&e, &v, &moved).unwrap(), Verdict::Invalid(_)));
        let wrong = nu(&[("x1", 2), ("x2", 1), ("x3", 2), ("x4", 3)]);
        assert!(nu_decompose(&e, &wrong).is_err());
        assert!(!verify_certificate(&e, &wrong, &cert).unwrap());
    }

    #[test]
    fn unnormalized_input_is_refused() {
        let g = GroupDescriptor::IteratedWreath(1, 1);
        let w = |s: &str| g.parse_word(s).unwrap();
        let e = KnapsackExpression::new(g.clone(), vec![w("g1.1"), Word::empty()], vec![(w("g0.1"), "x".into())])
            .unwrap();
        assert!(matches!(nu_decompose(&e, &nu(&[("x", 0)])), Err(Error::Precondition(_))));
        let e = KnapsackExpression::new(g.clone(), vec![Word::empty(), Word::empty()], vec![(w("g0.1 g1.1"), "x".into())])
            .unwrap();
        assert!(matches!(nu_decompose(&e, &nu(&[("x", 0)])), Err(Error::Precondition(_))));
    }
}
