//! Pointwise products of periodic group-valued sequences.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{split_top_level, Element, GroupDescriptor, Structure};
use crate::powerword::parse_group_header;

/// `f(t) = values[t mod period]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicFunction {
    pub values: Vec<Element>,
}

impl PeriodicFunction {
    pub fn new(values: Vec<Element>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::precondition("a periodic function needs at least one value"));
        }
        Ok(PeriodicFunction { values })
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn at(&self, t: &BigInt) -> &Element {
        let r = t.mod_floor(&BigInt::from(self.values.len())).to_usize().unwrap_or(0);
        &self.values[r]
    }
}

/// An order `d` such that the product satisfies a recurrence of order `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceBound {
    pub order: BigUint,
    pub class: u32,
    pub max_period: usize,
}

fn triangle(n: &BigUint) -> BigUint {
    n * (n + 1u32) / 2u32
}

/// Recurrence order of an arbitrary element of `G^{ω,n}` for `G` of class `c`.
fn general_order(class: u32, n: &BigUint) -> BigUint {
    if class == 0 {
        return BigUint::zero();
    }
    let next = n.pow(2 * class);
    triangle(n) + general_order(class - 1, &next)
}

/// For class 1 the sum of the periods; otherwise `n(n+1)/2 + p_{c−1}(n^{2c})`
/// with `n` the largest period.
pub fn recurrence_order_bound(class: u32, periods: &[usize]) -> Result<RecurrenceBound> {
    if class < 1 {
        return Err(Error::precondition("nilpotency class must be at least 1"));
    }
    if periods.contains(&0) {
        return Err(Error::precondition("periods must be positive"));
    }
    let max_period = periods.iter().copied().max().unwrap_or(1);
    let order = if class == 1 {
        periods.iter().map(|&p| BigUint::from(p)).sum::<BigUint>().max(BigUint::one())
    } else {
        let n = BigUint::from(max_period);
        triangle(&n) + general_order(class - 1, &n.pow(2 * class))
    };
    Ok(RecurrenceBound { order, class, max_period })
}

pub fn lcm_of_periods(fs: &[PeriodicFunction]) -> BigUint {
    fs.iter().fold(BigUint::one(), |acc, f| acc.lcm(&BigUint::from(f.period())))
}

/// `∏ f_i(t)` in list order.
pub fn product_at(structure: &Structure, fs: &[PeriodicFunction], t: &BigInt) -> Result<Element> {
    let mut acc = structure.identity();
    for f in fs {
        structure.mul_into(&mut acc, f.at(t))?;
    }
    Ok(acc)
}

/// Whether the product is trivial at every `0 ≤ t ≤ last`.
pub fn trivial_up_to(structure: &Structure, fs: &[PeriodicFunction], last: &BigInt) -> Result<bool> {
    let mut t = BigInt::zero();
    while &t <= last {
        if !product_at(structure, fs, &t)?.is_identity() {
            return Ok(false);
        }
        t += 1;
    }
    Ok(true)
}

/// Decides whether `∏ f_i(t) = 1` for all `0 ≤ t ≤ T`, checking only
/// `t ≤ min(T, d−1, lcm−1)` with `d` the recurrence bound of the group's class.
pub fn periodic_check(group: &GroupDescriptor, fs: &[PeriodicFunction], t: &BigInt) -> Result<bool> {
    let class = group.nilpotency_class()?;
    let structure = group.structure();
    for f in fs {
        if let Some(bad) = f.values.iter().find(|v| !structure.check(v)) {
            return Err(Error::GroupMismatch(format!("{bad} is not an element of {group}")));
        }
    }
    let periods: Vec<usize> = fs.iter().map(PeriodicFunction::period).collect();
    let bound = recurrence_order_bound(class, &periods)?;
    let d = BigInt::from(bound.order) - 1;
    let lcm = BigInt::from(lcm_of_periods(fs)) - 1;
    let last = t.clone().min(d).min(lcm);
    trivial_up_to(&structure, fs, &last)
}

/// The same decision using one full lcm window, without a class bound.
pub fn periodic_check_by_lcm(structure: &Structure, fs: &[PeriodicFunction], t: &BigInt) -> Result<bool> {
    let lcm = BigInt::from(lcm_of_periods(fs)) - 1;
    trivial_up_to(structure, fs, &t.clone().min(lcm))
}

/// A periodic-words input file: optional `group:` header, then one function
/// per line as comma-separated element literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicFile {
    pub group: GroupDescriptor,
    pub functions: Vec<PeriodicFunction>,
}

impl PeriodicFile {
    pub fn parse(text: &str, group_override: Option<&GroupDescriptor>) -> Result<PeriodicFile> {
        let (group, body, base) = parse_group_header(text, group_override)?;
        let mut functions = Vec::new();
        let mut offset = base;
        for line in body.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let values = split_top_level(content)
                .into_iter()
                .map(|lit| {
                    group.parse_element(lit).map_err(|e| match e {
                        Error::Parse { position, message } => {
                            Error::Parse { position: start + position, message }
                        }
                        Error::GroupMismatch(m) => Error::Parse { position: start, message: m },
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            functions.push(PeriodicFunction::new(values).map_err(|_| Error::parse(start, "empty function"))?);
        }
        Ok(PeriodicFile { group, functions })
    }
}
