use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::abelian::{AVec, AbelianGroup};
use crate::error::{Error, Result};

/// `{offset + period·i | 0 ≤ i < length}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArithmeticProgression {
    pub offset: BigInt,
    pub period: BigInt,
    pub length: BigInt,
}

impl ArithmeticProgression {
    pub fn new(offset: impl Into<BigInt>, period: impl Into<BigInt>, length: impl Into<BigInt>) -> Result<Self> {
        let p = ArithmeticProgression { offset: offset.into(), period: period.into(), length: length.into() };
        if p.period < BigInt::one() || p.length < BigInt::one() || p.offset.is_negative() {
            return Err(Error::precondition(format!("invalid progression {p}")));
        }
        Ok(p)
    }

    pub fn last(&self) -> BigInt {
        &self.offset + &self.period * (&self.length - 1)
    }

    pub fn contains(&self, t: &BigInt) -> bool {
        if t < &self.offset || t > &self.last() {
            return false;
        }
        (t - &self.offset).mod_floor(&self.period).is_zero()
    }

    /// The elements in order; only for small progressions.
    pub fn elements(&self) -> impl Iterator<Item = BigInt> + '_ {
        let n = self.length.to_u64().unwrap_or(u64::MAX);
        (0..n).map(move |i| &self.offset + &self.period * i)
    }
}

impl fmt::Display for ArithmeticProgression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i (0<=i<{})", self.offset, self.period, self.length)
    }
}

/// Splits the hull of `intervals` into consecutive pieces, each contained in or
/// disjoint from every input interval. Each piece lists the intervals containing it.
pub fn interval_partition(intervals: &[(BigInt, BigInt)]) -> Vec<(BigInt, BigInt, Vec<usize>)> {
    let mut cuts: Vec<BigInt> = Vec::with_capacity(2 * intervals.len());
    for (lo, hi) in intervals {
        if lo <= hi {
            cuts.push(lo.clone());
            cuts.push(hi + 1);
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0].clone(), &w[1] - 1);
        let members: Vec<usize> = intervals
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| a <= &lo && &hi <= b)
            .map(|(i, _)| i)
            .collect();
        if !members.is_empty() {
            out.push((lo, hi, members));
        }
    }
    out
}

/// Result of a bounded support computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumSupport {
    Set(Vec<BigInt>),
    Overflow,
}

/// The positions where `Σ f_{s,a}` is nonzero, or `Overflow` once there are
/// at least `b` of them.
pub fn progression_sum_support(
    m: &[(ArithmeticProgression, AVec)],
    group: &AbelianGroup,
    b: u64,
) -> Result<SumSupport> {
    if b == 0 {
        return Ok(SumSupport::Overflow);
    }
    let hulls: Vec<(BigInt, BigInt)> = m.iter().map(|(s, _)| (s.offset.clone(), s.last())).collect();
    let p: BigInt = m.iter().map(|(s, _)| s.period.clone()).sum();
    let window = BigInt::from(b) * &p;
    let mut found = Vec::new();
    for (lo, hi, members) in interval_partition(&hulls) {
        let value_at = |t: &BigInt| -> AVec {
            let mut acc = group.zero();
            for &i in &members {
                let (s, a) = &m[i];
                if (t - &s.offset).mod_floor(&s.period).is_zero() {
                    group.add_into(&mut acc, a);
                }
            }
            acc
        };
        let len = &hi - &lo + 1;
        let scan_to = if len < window { hi.clone() } else { &lo + &window - 1 };
        let mut local = Vec::new();
        let mut t = lo.clone();
        while t <= scan_to {
            if !group.is_zero(&value_at(&t)) {
                local.push(t.clone());
                if found.len() + local.len() >= b as usize {
                    return Ok(SumSupport::Overflow);
                }
            }
            t += 1;
        }
        if len < window {
            found.extend(local);
        } else if !local.is_empty() {
            return Err(Error::Internal(
                "nonzero positions below the overflow bound on a long piece".into(),
            ));
        }
    }
    Ok(SumSupport::Set(found))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prog(o: i64, p: i64, l: i64) -> ArithmeticProgression {
        ArithmeticProgression::new(o, p, l).unwrap()
    }

    #[test]
    fn cancellation_gives_empty_set() {
        let z = AbelianGroup::free(1);
        let m = vec![(prog(0, 2, 4), vec![BigInt::from(1)]), (prog(0, 2, 4), vec![BigInt::from(-1)])];
        assert_eq!(progression_sum_support(&m, &z, 3).unwrap(), SumSupport::Set(vec![]));
    }

    #[test]
    fn overflow_at_bound() {
        let z = AbelianGroup::free(1);
        let m = vec![(prog(0, 1, 5), vec![BigInt::from(1)])];
        assert_eq!(progression_sum_support(&m, &z, 3).unwrap(), SumSupport::Overflow);
        let small: Vec<BigInt> = (0..5).map(BigInt::from).collect();
        assert_eq!(progression_sum_support(&m, &z, 6).unwrap(), SumSupport::Set(small));
    }

    #[test]
    fn partition_pieces_have_constant_membership() {
        let iv = vec![(BigInt::from(0), BigInt::from(10)), (BigInt::from(5), BigInt::from(20))];
        let parts = interval_partition(&iv);
        let shape: Vec<(i64, i64, usize)> = parts
            .iter()
            .map(|(a, b, m)| (a.to_i64().unwrap(), b.to_i64().unwrap(), m.len()))
            .collect();
        assert_eq!(shape, vec![(0, 4, 1), (5, 10, 2), (11, 20, 1)]);
    }
}
