//! Power word problem in `G ≀ ℤ` for an arbitrary finitely generated `G`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{interval_partition, PowerWord};
use crate::error::{Error, Result};
use crate::group::{Element, GroupDescriptor, Structure};
use crate::par::{self, Execution};
use crate::periodic::recurrence_order_bound;

/// One factor `u^k` with `u = (F, δ)`, already normalised to `k > 0`.
struct Piece {
    support: Vec<(BigInt, Element)>,
    delta: BigInt,
    k: BigInt,
    cursor: BigInt,
}

impl Piece {
    fn lo(&self) -> &BigInt {
        &self.support[0].0
    }

    fn hi(&self) -> &BigInt {
        &self.support[self.support.len() - 1].0
    }

    /// Active and interior intervals, in absolute coordinates.
    fn intervals(&self) -> ((BigInt, BigInt), Option<(BigInt, BigInt)>) {
        let (lo, hi, d, k, c) = (self.lo(), self.hi(), &self.delta, &self.k, &self.cursor);
        if d.is_zero() {
            return ((lo + c, hi + c), None);
        }
        let span = d * (k - 1);
        let (active, interior) = if d.is_positive() {
            ((lo.clone(), hi + &span), (hi - d + 1, lo + k * d - 1))
        } else {
            let e = -d;
            ((lo - (k - 1) * &e, hi.clone()), (hi - k * &e + 1, lo + &e - 1))
        };
        let shift = |(a, b): (BigInt, BigInt)| (a + c, b + c);
        let interior = if interior.0 <= interior.1 { Some(shift(interior)) } else { None };
        (shift(active), interior)
    }

    /// This factor's contribution at absolute position `y`.
    fn value_at(&self, left: &Structure, y: &BigInt) -> Result<Element> {
        let y = y - &self.cursor;
        if self.delta.is_zero() {
            return match self.support.binary_search_by(|(p, _)| p.cmp(&y)) {
                Ok(i) => left.pow(&self.support[i].1, &self.k),
                Err(_) => Ok(left.identity()),
            };
        }
        let mut acc = left.identity();
        let mut step = |p: &BigInt, v: &Element| -> Result<()> {
            let (j, r) = (&y - p).div_mod_floor(&self.delta);
            if r.is_zero() && !j.is_negative() && j < self.k {
                left.mul_into(&mut acc, v)?;
            }
            Ok(())
        };
        if self.delta.is_positive() {
            for (p, v) in self.support.iter().rev() {
                step(p, v)?;
            }
        } else {
            for (p, v) in &self.support {
                step(p, v)?;
            }
        }
        Ok(acc)
    }
}

fn position(e: &Element) -> Result<BigInt> {
    e.as_vector()
        .and_then(|v| v.first().cloned())
        .ok_or_else(|| Error::Internal(format!("expected an integer position, got {e}")))
}

/// Decides `pw = 1` in `G ≀ ℤ`, splitting ℤ into short boundary segments
/// checked pointwise and periodic interior segments checked over one window.
pub fn powerwp_gwrz(group: &GroupDescriptor, pw: &PowerWord) -> Result<bool> {
    powerwp_gwrz_with(group, pw, Execution::default())
}

pub fn powerwp_gwrz_with(group: &GroupDescriptor, pw: &PowerWord, exec: Execution) -> Result<bool> {
    let inner = group
        .wreath_over_z_inner()
        .ok_or_else(|| Error::Unsupported(format!("{group} is not of the form G wr Z")))?;
    let structure = group.structure();
    let (left, _) = structure.wreath_parts().ok_or_else(|| Error::Internal("not a wreath".into()))?;
    let class = inner.nilpotency_class().ok();

    let mut pieces = Vec::new();
    let mut cursor = BigInt::zero();
    for f in &pw.factors {
        if f.exponent.is_zero() {
            continue;
        }
        let (word, k) = if f.exponent.is_negative() {
            (f.period.inverse(), -&f.exponent)
        } else {
            (f.period.clone(), f.exponent.clone())
        };
        let u = structure.eval_word(&word)?;
        let w = u.as_wreath().ok_or_else(|| Error::Internal("not a wreath value".into()))?;
        let delta = position(&w.cursor)?;
        let next = &cursor + &delta * &k;
        if !w.support.is_empty() {
            let support = w
                .support
                .iter()
                .map(|(p, v)| Ok((position(p)?, v.clone())))
                .collect::<Result<Vec<_>>>()?;
            pieces.push(Piece { support, delta, k, cursor: cursor.clone() });
        }
        cursor = next;
    }
    if !cursor.is_zero() {
        return Ok(false);
    }

    let mut intervals = Vec::with_capacity(2 * pieces.len());
    for p in &pieces {
        let (active, interior) = p.intervals();
        intervals.push(active);
        intervals.push(interior.unwrap_or((BigInt::one(), BigInt::zero())));
    }

    let tau_at = |y: &BigInt| -> Result<bool> {
        let mut acc = left.identity();
        for p in &pieces {
            let v = p.value_at(left, y)?;
            left.mul_into(&mut acc, &v)?;
        }
        Ok(acc.is_identity())
    };

    for (lo, hi, members) in interval_partition(&intervals) {
        let len: BigInt = &hi - &lo + 1;
        let boundary = members.iter().any(|&m| m % 2 == 0 && !members.contains(&(m + 1)));
        let count = if boundary {
            len
        } else {
            let periods: Vec<BigUint> = members
                .iter()
                .filter(|&&m| m % 2 == 0)
                .map(|&m| pieces[m / 2].delta.magnitude().clone())
                .collect();
            let mut window = periods.iter().fold(BigUint::one(), |a, p| a.lcm(p));
            if let Some(c) = class {
                let small: Option<Vec<usize>> = periods.iter().map(|p| p.to_usize()).collect();
                if let Some(small) = small {
                    window = window.min(recurrence_order_bound(c, &small)?.order);
                }
            }
            len.min(BigInt::from(window))
        };
        let n = count
            .to_usize()
            .ok_or_else(|| Error::GuardExceeded { needed: count.to_string(), limit: usize::MAX as u64 })?;
        let bad = par::any_range(exec, n, |i| match tau_at(&(&lo + i)) {
            Ok(trivial) => !trivial,
            Err(_) => true,
        });
        if bad {
            // Distinguish a real failure from an evaluation error.
            for i in 0..n {
                if !tau_at(&(&lo + i))? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
