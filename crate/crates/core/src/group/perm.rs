use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0, …, n−1}` stored by images.
///
/// Products compose left to right: `(a * b)(i) = b(a(i))`, so a word
/// `a b` acts by `a` first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 256, "degree too large");
        Permutation { images: (0..n).map(|i| i as u8).collect() }
    }

    /// Builds a permutation from 0-based images; rejects non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::precondition("images do not form a permutation"));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|x| x as u8).collect() })
    }

    /// Builds a permutation of degree `n` from 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > n {
                    return Err(Error::precondition(format!("point {p} outside 1..={n}")));
                }
                if touched[p - 1] {
                    return Err(Error::precondition(format!("point {p} repeated in cycles")));
                }
                touched[p - 1] = true;
            }
            for (k, &p) in cycle.iter().enumerate() {
                images[p - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images.get(i).map_or(i, |&x| x as usize)
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    /// Returns the same permutation on `n ≥ degree` points.
    pub fn extended(&self, n: usize) -> Self {
        let mut images = self.images.clone();
        images.extend((self.images.len()..n).map(|i| i as u8));
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.degree().max(other.degree());
        let images = (0..n).map(|i| other.image(self.image(i)) as u8).collect();
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Permutation { images }
    }

    /// `[g, h] = g⁻¹ h⁻¹ g h`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().compose(&other.inverse()).compose(self).compose(other)
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut order = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.image(p);
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }

    /// Disjoint cycles of length ≥ 2, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)`, `(1,2)`, `(12)` or `()`.
    /// Cycles without separators read each digit as one point.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::parse(text.len() - rest.len(), "expected `(`"));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::parse(text.len() - rest.len(), "unclosed cycle"))?;
            let body = &rest[1..close];
            let points: Vec<usize> = if body.contains(|c: char| c == ',' || c.is_whitespace()) {
                body.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::parse(text.len() - rest.len(), "bad cycle entry"))?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::parse(text.len() - rest.len(), "bad cycle entry"))?
            };
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = rest[close + 1..].trim_start();
        }
        Permutation::from_cycles(n, &cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}
