use num_bigint::BigUint;
use num_traits::One;

use super::KnapsackExpression;

/// One bound formula evaluated with every hidden constant set to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub label: &'static str,
    pub formula: &'static str,
    pub value: BigUint,
}

/// Informational magnitude bounds for a system of expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnitudeReport {
    pub entries: Vec<BoundEntry>,
    /// Boxes below this are not certified complete.
    pub threshold: BigUint,
}

impl MagnitudeReport {
    /// A warning line when `bound` is below the threshold.
    pub fn warning(&self, bound: u64) -> Option<String> {
        (BigUint::from(bound) < self.threshold).then(|| {
            format!(
                "warning: box {bound} is below the certified-complete threshold {} (informational)",
                self.threshold
            )
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{}: {} = {} (informational)\n", e.label, e.formula, e.value));
        }
        out.push_str(&format!("threshold: {}\n", self.threshold));
        out
    }
}

/// Magnitude bound for the intersection of `k` semilinear sets in `ℕ^d` of
/// magnitude at most `s`; a single set is its own bound.
pub fn intersection_bound(s: &BigUint, k: u32, d: u32) -> BigUint {
    if k <= 1 {
        return s.clone();
    }
    (s * BigUint::from(k) * BigUint::from(d) + 1u32).pow(k * d)
}

/// Evaluates the bound formulas for `system`: `n` is the largest `|E|`, `d`
/// the number of distinct variables and `k` the number of expressions.
pub fn magnitude_bounds(system: &[KnapsackExpression]) -> MagnitudeReport {
    let n = system.iter().map(KnapsackExpression::size).max().unwrap_or(0) as u32;
    let mut vars: Vec<String> = system.iter().flat_map(KnapsackExpression::variables).collect();
    vars.sort();
    vars.dedup();
    let d = vars.len() as u32;
    let k = system.len() as u32;
    let abelian = BigUint::one() << n;
    let exponent = (BigUint::from(n) * abelian.clone().max(BigUint::one()) + 1u32).pow(n);
    let intersection = intersection_bound(&exponent, k, d);
    MagnitudeReport {
        entries: vec![
            BoundEntry { label: "abelian exponent equations", formula: "2^n", value: abelian.clone() },
            BoundEntry {
                label: "single exponent expression",
                formula: "(n·max(K(n),1)+1)^n",
                value: exponent,
            },
            BoundEntry { label: "intersection of k solution sets", formula: "(s·k·d+1)^(k·d)", value: intersection },
        ],
        threshold: abelian,
    }
}
