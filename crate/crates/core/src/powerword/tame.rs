use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::abelian::{lattice_ratio, AVec, AbelianGroup};
use super::progression::{progression_sum_support, ArithmeticProgression, SumSupport};
use super::PowerWord;
use crate::error::{Error, Result};
use crate::group::{Element, Letter, Structure, Word};

/// The ray `(offset · period^i)_{0 ≤ i ≤ last}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub offset: PowerWord,
    pub period: Word,
    pub last: BigInt,
}

/// Torsion-free groups with a recursive solver for the power word and power
/// problems: `ℤ^r`, and `A ≀ H` with `A` abelian over such an `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tame {
    Lattice { rank: usize, level: u32 },
    Wreath(Box<AbelianWreath>),
}

/// `A ≀ H` with `A = ℤ^r` or `ℤ/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianWreath {
    pub left: AbelianGroup,
    pub left_level: u32,
    pub right: Tame,
    structure: Structure,
    right_structure: Structure,
}

/// A normalized factor `(a h)^k`: one `A` letter (or none) then an `H` word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormFactor {
    pub a: AVec,
    pub a_letter: Option<Letter>,
    pub h: Word,
    pub k: BigInt,
}

impl Tame {
    pub fn from_structure(s: &Structure) -> Result<Tame> {
        match s {
            Structure::Lattice { rank, level } => Ok(Tame::Lattice { rank: *rank, level: *level }),
            Structure::Wreath { left, right } => {
                let (group, level) = match **left {
                    Structure::Lattice { rank, level } => (AbelianGroup::free(rank), level),
                    Structure::Cyclic { modulus, level } => (AbelianGroup::cyclic(modulus), level),
                    _ => {
                        return Err(Error::Unsupported(format!(
                            "left factor of {} is not abelian",
                            s.describe()
                        )))
                    }
                };
                Ok(Tame::Wreath(Box::new(AbelianWreath {
                    left: group,
                    left_level: level,
                    right: Tame::from_structure(right)?,
                    structure: s.clone(),
                    right_structure: (**right).clone(),
                })))
            }
            _ => Err(Error::Unsupported(format!("{} is not an abelian tower", s.describe()))),
        }
    }

    pub fn structure(&self) -> Structure {
        match self {
            Tame::Lattice { rank, level } => Structure::Lattice { rank: *rank, level: *level },
            Tame::Wreath(w) => w.structure.clone(),
        }
    }

    pub fn is_trivial_word(&self, w: &Word) -> Result<bool> {
        match self {
            Tame::Lattice { .. } => Ok(self.lattice_vec(w)?.iter().all(Zero::is_zero)),
            Tame::Wreath(x) => Ok(x.structure.eval_word(w)?.is_identity()),
        }
    }

    fn lattice_vec(&self, w: &Word) -> Result<AVec> {
        let Tame::Lattice { rank, level } = self else {
            return Err(Error::Internal("lattice_vec on a wreath".into()));
        };
        let mut v = vec![BigInt::zero(); *rank];
        for letter in w.iter() {
            match letter {
                Letter::Gen(t) if t.level == *level && (t.index as usize) <= *rank && t.index > 0 => {
                    v[t.index as usize - 1] += if t.inverse { -1 } else { 1 };
                }
                Letter::One => {}
                other => {
                    return Err(Error::InvalidToken {
                        token: format!("{other:?}"),
                        group: self.structure().describe(),
                    })
                }
            }
        }
        Ok(v)
    }

    fn lattice_pw(&self, pw: &PowerWord) -> Result<AVec> {
        let Tame::Lattice { rank, .. } = self else {
            return Err(Error::Internal("lattice_pw on a wreath".into()));
        };
        let mut acc = vec![BigInt::zero(); *rank];
        for f in &pw.factors {
            if f.exponent.is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(self.lattice_vec(&f.period)?) {
                *a += x * &f.exponent;
            }
        }
        Ok(acc)
    }

    /// Decides `pw = 1`.
    pub fn power_wp(&self, pw: &PowerWord) -> Result<bool> {
        match self {
            Tame::Lattice { .. } => Ok(self.lattice_pw(pw)?.iter().all(Zero::is_zero)),
            Tame::Wreath(w) => w.power_wp(pw),
        }
    }

    /// The unique `z` with `u^z = v`, if any; `0` when `u = v = 1`.
    pub fn power_pp(&self, u: &Word, v: &PowerWord) -> Result<Option<BigInt>> {
        match self {
            Tame::Lattice { .. } => {
                let a = self.lattice_vec(u)?;
                let b = self.lattice_pw(v)?;
                Ok(solve_multiple(&a, &b))
            }
            Tame::Wreath(w) => w.power_pp(u, v),
        }
    }

    /// Coprime `(s, t)`, `s > 0`, generating `{(x, y) | u^x = v^y}`, or `None`
    /// when only `(0, 0)` solves it.
    pub fn commensurate(&self, u: &Word, v: &Word) -> Result<Option<(BigInt, BigInt)>> {
        match self {
            Tame::Lattice { .. } => lattice_ratio(&self.lattice_vec(u)?, &self.lattice_vec(v)?),
            Tame::Wreath(w) => w.commensurate(u, v),
        }
    }

    /// `Int(p, q)` for parallel rays.
    pub fn ray_intersection(&self, p: &Ray, q: &Ray) -> Result<Option<ArithmeticProgression>> {
        if p.last.is_negative() || q.last.is_negative() {
            return Ok(None);
        }
        let (mut s, mut t) = self
            .commensurate(&p.period, &q.period)?
            .ok_or_else(|| Error::precondition("rays are not parallel"))?;
        if t.is_negative() {
            s = -s;
            t = -t;
        }
        let base = p.offset.relative(&q.offset);
        let mut t0 = BigInt::zero();
        while t0 < t {
            if t0 > q.last {
                return Ok(None);
            }
            let target = base.clone().with(q.period.clone(), t0.clone());
            if let Some(s0) = self.power_pp(&p.period, &target)? {
                return Ok(clip(&s0, &s, &t0, &t, &p.last, &q.last));
            }
            t0 += 1;
        }
        Ok(None)
    }
}

/// `{s0 + s·y | 0 ≤ t0 + t·y ≤ ℓ} ∩ [0, k]` as a progression.
fn clip(
    s0: &BigInt,
    s: &BigInt,
    t0: &BigInt,
    t: &BigInt,
    k: &BigInt,
    l: &BigInt,
) -> Option<ArithmeticProgression> {
    let y2 = (l - t0).div_floor(t);
    let abs = s.abs();
    let (lo, hi) = if s.is_positive() {
        ((-s0).div_ceil(&abs), (k - s0).div_floor(&abs))
    } else {
        ((s0 - k).div_ceil(&abs), s0.div_floor(&abs))
    };
    let ylo = lo.max(BigInt::zero());
    let yhi = hi.min(y2);
    if ylo > yhi {
        return None;
    }
    let offset = if s.is_positive() { s0 + s * &ylo } else { s0 + s * &yhi };
    Some(ArithmeticProgression { offset, period: abs, length: &yhi - &ylo + 1 })
}

/// `z` with `z·a = b`.
fn solve_multiple(a: &[BigInt], b: &[BigInt]) -> Option<BigInt> {
    match a.iter().position(|x| !x.is_zero()) {
        None => b.iter().all(Zero::is_zero).then(BigInt::zero),
        Some(c) => {
            let (z, r) = b[c].div_rem(&a[c]);
            if !r.is_zero() {
                return None;
            }
            a.iter().zip(b).all(|(x, y)| &z * x == *y).then_some(z)
        }
    }
}

/// A normalized power word with its σ-prefix offsets.
struct Normal<'a> {
    w: &'a AbelianWreath,
    factors: Vec<NormFactor>,
    offsets: Vec<PowerWord>,
    active: Vec<usize>,
    trivial_h: Vec<bool>,
}

impl<'a> Normal<'a> {
    fn new(w: &'a AbelianWreath, factors: Vec<NormFactor>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(factors.len());
        let mut prefix = PowerWord::new();
        for f in &factors {
            offsets.push(prefix.clone());
            if !f.h.is_empty() {
                prefix.push(f.h.clone(), f.k.clone());
            }
        }
        let active: Vec<usize> =
            (0..factors.len()).filter(|&i| !w.left.is_zero(&factors[i].a)).collect();
        let mut trivial_h = vec![false; factors.len()];
        for &i in &active {
            trivial_h[i] = w.right.is_trivial_word(&factors[i].h)?;
        }
        Ok(Normal { w, factors, offsets, active, trivial_h })
    }

    fn ray(&self, i: usize) -> Ray {
        Ray {
            offset: self.offsets[i].clone(),
            period: self.factors[i].h.clone(),
            last: &self.factors[i].k - 1,
        }
    }

    /// Contribution of factor `j` to `τ` at the position `v`.
    fn contribution(&self, j: usize, v: &PowerWord) -> Result<Option<AVec>> {
        let f = &self.factors[j];
        let shifted = self.offsets[j].relative(v);
        if self.trivial_h[j] {
            if self.w.right.power_wp(&shifted)? {
                let mut out = self.w.left.zero();
                self.w.left.add_scaled(&mut out, &f.a, &f.k);
                return Ok(Some(out));
            }
            return Ok(None);
        }
        match self.w.right.power_pp(&f.h, &shifted)? {
            Some(z) if !z.is_negative() && z < f.k => Ok(Some(f.a.clone())),
            _ => Ok(None),
        }
    }

    /// `τ(u)(v)`, skipping factors whose contribution is supplied in `known`.
    fn tau_at(&self, v: &PowerWord, skip: &[usize]) -> Result<AVec> {
        let mut acc = self.w.left.zero();
        for &j in &self.active {
            if skip.contains(&j) {
                continue;
            }
            if let Some(x) = self.contribution(j, v)? {
                self.w.left.add_into(&mut acc, &x);
            }
        }
        Ok(acc)
    }
}

impl AbelianWreath {
    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn right_structure(&self) -> &Structure {
        &self.right_structure
    }

    pub fn is_left(&self, letter: &Letter) -> bool {
        matches!(letter, Letter::Gen(t) if t.level == self.left_level)
    }

    pub fn left_value(&self, letter: &Letter) -> Result<AVec> {
        let Letter::Gen(t) = letter else {
            return Err(Error::Internal("left value of a non-generator".into()));
        };
        if t.index == 0 || t.index as usize > self.left.rank {
            return Err(Error::InvalidToken {
                token: format!("g{}.{}", t.level, t.index),
                group: self.structure.describe(),
            });
        }
        let mut v = self.left.zero();
        v[t.index as usize - 1] = if t.inverse { BigInt::from(-1) } else { BigInt::one() };
        self.left.reduce(&mut v);
        Ok(v)
    }

    pub fn sigma_word(&self, w: &Word) -> Word {
        w.iter().filter(|l| !self.is_left(l) && !matches!(l, Letter::One)).cloned().collect()
    }

    pub fn sigma_pw(&self, pw: &PowerWord) -> PowerWord {
        pw.map_periods(|w| self.sigma_word(w))
    }

    /// Factors every power so that each period is one `A` letter followed by
    /// `H` letters, conjugating by σ-prefixes.
    pub fn normalize(&self, pw: &PowerWord) -> Result<Vec<NormFactor>> {
        let mut out = Vec::new();
        let pure = |h: Word, k: BigInt| NormFactor { a: self.left.zero(), a_letter: None, h, k };
        for f in &pw.factors {
            if f.exponent.is_zero() {
                continue;
            }
            let (u, k) = if f.exponent.is_negative() {
                (f.period.inverse(), -&f.exponent)
            } else {
                (f.period.clone(), f.exponent.clone())
            };
            let mut head = Word::empty();
            let mut parts: Vec<(Letter, Word)> = Vec::new();
            for letter in u.iter() {
                if matches!(letter, Letter::One) {
                    continue;
                }
                if self.is_left(letter) {
                    parts.push((letter.clone(), Word::empty()));
                } else if let Some(last) = parts.last_mut() {
                    last.1.push(letter.clone());
                } else {
                    head.push(letter.clone());
                }
            }
            let sigma_u = self.sigma_word(&u);
            if parts.is_empty() {
                out.push(pure(sigma_u, k));
                continue;
            }
            let sigma_inv = sigma_u.inverse();
            let mut before = head.clone();
            for i in 0..parts.len() {
                let after: Word = parts[i + 1..].iter().flat_map(|(_, h)| h.iter().cloned()).collect();
                let (letter, h) = &parts[i];
                if !before.is_empty() {
                    out.push(pure(before.clone(), BigInt::one()));
                }
                out.push(NormFactor {
                    a: self.left_value(letter)?,
                    a_letter: Some(letter.clone()),
                    h: h.concat(&after).concat(&before),
                    k: k.clone(),
                });
                if !before.is_empty() {
                    out.push(pure(before.inverse(), BigInt::one()));
                }
                if !sigma_inv.is_empty() {
                    out.push(pure(sigma_inv.clone(), k.clone()));
                }
                before.extend_from(h);
            }
            if !sigma_u.is_empty() {
                out.push(pure(sigma_u, k));
            }
        }
        Ok(out)
    }

    pub fn normalized_powerword(&self, pw: &PowerWord) -> PowerWord {
        let mut out = PowerWord::new();
        for f in self.normalize(pw).unwrap_or_default() {
            let mut period = Word::empty();
            if let Some(l) = f.a_letter {
                period.push(l);
            }
            period.extend_from(&f.h);
            out.push(period, f.k);
        }
        out
    }

    pub fn power_wp(&self, pw: &PowerWord) -> Result<bool> {
        let pw = &pw.reduced();
        if !self.right.power_wp(&self.sigma_pw(pw))? {
            return Ok(false);
        }
        let normal = Normal::new(self, self.normalize(pw)?)?;
        if normal.active.is_empty() {
            return Ok(true);
        }
        let rays: Vec<usize> =
            normal.active.iter().copied().filter(|&i| !normal.trivial_h[i]).collect();
        let classes = self.parallel_classes(&normal, &rays)?;
        let bound = normal.factors.len() as u64 + 1;
        for class in &classes {
            for &i in class {
                let mut m = Vec::with_capacity(class.len());
                let mut hits: Vec<(usize, ArithmeticProgression)> = Vec::new();
                for &j in class {
                    let prog = if i == j {
                        Some(ArithmeticProgression {
                            offset: BigInt::zero(),
                            period: BigInt::one(),
                            length: normal.factors[i].k.clone(),
                        })
                    } else {
                        self.right.ray_intersection(&normal.ray(i), &normal.ray(j))?
                    };
                    if let Some(p) = prog {
                        m.push((p.clone(), normal.factors[j].a.clone()));
                        hits.push((j, p));
                    }
                }
                let support = progression_sum_support(&m, &self.left, bound)?;
                let SumSupport::Set(ts) = support else {
                    return Ok(false);
                };
                for t in ts {
                    let pos = normal.offsets[i].clone().with(normal.factors[i].h.clone(), t.clone());
                    let mut value = normal.tau_at(&pos, class)?;
                    for (j, p) in &hits {
                        if p.contains(&t) {
                            self.left.add_into(&mut value, &normal.factors[*j].a);
                        }
                    }
                    if !self.left.is_zero(&value) {
                        return Ok(false);
                    }
                }
            }
        }
        for &i in &normal.active {
            if normal.trivial_h[i] && !self.left.is_zero(&normal.tau_at(&normal.offsets[i], &[])?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Groups ray indices by commensurability of their periods.
    fn parallel_classes(&self, normal: &Normal<'_>, rays: &[usize]) -> Result<Vec<Vec<usize>>> {
        let mut classes: Vec<(Element, Vec<usize>)> = Vec::new();
        let mut seen: BTreeMap<Element, usize> = BTreeMap::new();
        for &i in rays {
            let h = self.right_structure.eval_word(&normal.factors[i].h)?;
            if let Some(&c) = seen.get(&h) {
                classes[c].1.push(i);
                continue;
            }
            let mut found = None;
            for (c, (_, members)) in classes.iter().enumerate() {
                let rep = &normal.factors[members[0]].h;
                if self.right.commensurate(&normal.factors[i].h, rep)?.is_some() {
                    found = Some(c);
                    break;
                }
            }
            let c = match found {
                Some(c) => {
                    classes[c].1.push(i);
                    c
                }
                None => {
                    classes.push((h.clone(), vec![i]));
                    classes.len() - 1
                }
            };
            seen.insert(h, c);
        }
        Ok(classes.into_iter().map(|(_, m)| m).collect())
    }

    /// `τ(pw)(position)`.
    pub fn tau_at(&self, pw: &PowerWord, position: &PowerWord) -> Result<AVec> {
        let normal = Normal::new(self, self.normalize(pw)?)?;
        normal.tau_at(position, &[])
    }

    /// `τ(u)` for a plain word, with the `H` prefix reaching each position.
    pub fn tau_of_word(&self, u: &Word) -> Result<BTreeMap<Element, (Word, AVec)>> {
        let mut pos = self.right_structure.identity();
        let mut prefix = Word::empty();
        let mut out: BTreeMap<Element, (Word, AVec)> = BTreeMap::new();
        for letter in u.iter() {
            if matches!(letter, Letter::One) {
                continue;
            }
            if self.is_left(letter) {
                let value = self.left_value(letter)?;
                let entry = out.entry(pos.clone()).or_insert_with(|| (prefix.clone(), self.left.zero()));
                self.left.add_into(&mut entry.1, &value);
            } else {
                self.right_structure.apply_letter(&mut pos, letter)?;
                prefix.push(letter.clone());
            }
        }
        out.retain(|_, (_, v)| !self.left.is_zero(v));
        Ok(out)
    }

    pub fn power_pp(&self, u: &Word, v: &PowerWord) -> Result<Option<BigInt>> {
        let su = self.sigma_word(u);
        let check = |z: &BigInt| -> Result<bool> {
            self.power_wp(&v.clone().with(u.clone(), -z))
        };
        if !self.right.is_trivial_word(&su)? {
            let Some(z) = self.right.power_pp(&su, &self.sigma_pw(v))? else {
                return Ok(None);
            };
            return Ok(if check(&z)? { Some(z) } else { None });
        }
        if !self.right.power_wp(&self.sigma_pw(v))? {
            return Ok(None);
        }
        let tau = self.tau_of_word(u)?;
        let Some((_, (prefix, a))) = tau.iter().next() else {
            return Ok(if self.power_wp(v)? { Some(BigInt::zero()) } else { None });
        };
        let b = self.tau_at(v, &PowerWord::from_word(prefix))?;
        if let Some(n) = &self.left.modulus {
            let mut z = BigInt::zero();
            while &z < n {
                let hit = ((&z * &a[0]) - &b[0]).mod_floor(n).is_zero();
                if hit && check(&z)? {
                    return Ok(Some(z));
                }
                z += 1;
            }
            return Ok(None);
        }
        let Some(z) = solve_multiple(a, &b) else {
            return Ok(None);
        };
        Ok(if check(&z)? { Some(z) } else { None })
    }

    pub fn commensurate(&self, u: &Word, v: &Word) -> Result<Option<(BigInt, BigInt)>> {
        let (su, sv) = (self.sigma_word(u), self.sigma_word(v));
        let tu = self.right.is_trivial_word(&su)?;
        let tv = self.right.is_trivial_word(&sv)?;
        if !tu && !tv {
            let Some((s, t)) = self.right.commensurate(&su, &sv)? else {
                return Ok(None);
            };
            let pw = PowerWord::single(u.clone(), s.clone()).with(v.clone(), -&t);
            return Ok(if self.power_wp(&pw)? { Some((s, t)) } else { None });
        }
        let fu = self.tau_of_word(u)?;
        let fv = self.tau_of_word(v)?;
        if (tu && fu.is_empty()) || (tv && fv.is_empty()) {
            return Err(Error::precondition("commensurability of the identity"));
        }
        if tu != tv {
            return Ok(None);
        }
        if self.left.modulus.is_some() {
            return Err(Error::Unsupported("commensurability with a torsion left factor".into()));
        }
        if fu.len() != fv.len() || fu.keys().zip(fv.keys()).any(|(x, y)| x != y) {
            return Ok(None);
        }
        let a: AVec = fu.values().flat_map(|(_, x)| x.iter().cloned()).collect();
        let b: AVec = fv.values().flat_map(|(_, x)| x.iter().cloned()).collect();
        lattice_ratio(&a, &b)
    }
}
