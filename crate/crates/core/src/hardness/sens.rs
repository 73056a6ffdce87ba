use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::OnceLock;

use super::{sym5, DEGREE};
use crate::error::{Error, Result};
use crate::group::{Letter, Permutation, Word};

/// Nested commutator words `w_{d,v}` for `v ∈ {0,1}^{≤d}`.
#[derive(Clone, Debug)]
pub struct SensWitness {
    pub depth: usize,
    /// Keyed by the binary string `v`; the root is `""`.
    pub words: BTreeMap<String, Word>,
}

impl SensWitness {
    pub fn word(&self, v: &str) -> Option<&Word> {
        self.words.get(v)
    }

    pub fn root(&self) -> &Word {
        &self.words[""]
    }

    /// Rechecks the commutator identities, leaf lengths and the root.
    pub fn check(&self) -> Result<()> {
        let g = sym5();
        let mut leaf_len = None;
        for (v, w) in &self.words {
            if v.len() == self.depth {
                if *leaf_len.get_or_insert(w.len()) != w.len() {
                    return Err(Error::Internal(format!("leaf `{v}` has length {}", w.len())));
                }
                continue;
            }
            let (l, r) = (&self.words[&format!("{v}0")], &self.words[&format!("{v}1")]);
            if g.eval_word(w)? != g.eval_word(&Word::commutator(l, r))? {
                return Err(Error::Internal(format!("identity fails at `{v}`")));
            }
        }
        if g.eval_word(self.root())?.is_identity() {
            return Err(Error::Internal("root evaluates to the identity".into()));
        }
        Ok(())
    }
}

/// All 24 five-cycles of `Sym(5)`, in a fixed order.
pub fn five_cycles() -> &'static [Permutation] {
    static CYCLES: OnceLock<Vec<Permutation>> = OnceLock::new();
    CYCLES.get_or_init(|| {
        let mut out = Vec::new();
        let mut rest = [1usize, 2, 3, 4];
        permutations(&mut rest, 0, &mut |tail| {
            let mut c = vec![0usize];
            c.extend_from_slice(tail);
            out.push(Permutation::from_cycles(DEGREE, &[c.iter().map(|x| x + 1).collect()]).expect("5-cycle"));
        });
        out
    })
}

fn permutations(xs: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permutations(xs, k + 1, f);
        xs.swap(k, i);
    }
}

/// Five-cycles `(c0, c1)` with `[c0, c1] = c`, for a five-cycle `c`.
pub fn commutator_pair(c: &Permutation) -> Option<(Permutation, Permutation)> {
    static TABLE: OnceLock<HashMap<Permutation, (Permutation, Permutation)>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = HashMap::new();
        for x in five_cycles() {
            for y in five_cycles() {
                let k = x.commutator(y);
                if k.order() == 5 {
                    t.entry(k).or_insert_with(|| (x.clone(), y.clone()));
                }
            }
        }
        t
    });
    table.get(&c.extended(DEGREE)).cloned()
}

/// Shortest words over the standard generators, padded with `1` to a common length.
fn leaf_words() -> &'static HashMap<Permutation, Word> {
    static LEAVES: OnceLock<HashMap<Permutation, Word>> = OnceLock::new();
    LEAVES.get_or_init(|| {
        let gens: Vec<Permutation> = sym5()
            .generators()
            .into_iter()
            .filter_map(|l| match l {
                Letter::Perm(p) => Some(p),
                _ => None,
            })
            .collect();
        let id = Permutation::identity(DEGREE);
        let mut words: HashMap<Permutation, Word> = HashMap::from([(id.clone(), Word::empty())]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &gens {
                let q = p.compose(g);
                if !words.contains_key(&q) {
                    let mut w = words[&p].clone();
                    w.push(Letter::Perm(g.clone()));
                    words.insert(q.clone(), w);
                    queue.push_back(q);
                }
            }
        }
        let len = five_cycles().iter().map(|c| words[c].len()).max().unwrap_or(0);
        five_cycles()
            .iter()
            .map(|c| {
                let mut w = words[c].clone();
                while w.len() < len {
                    w.push(Letter::One);
                }
                (c.clone(), w)
            })
            .collect()
    })
}

/// Builds `w_{d,v}` top-down from the target `(1 2 3 4 5)`: each node's
/// five-cycle is split into a commutator of two five-cycles, and the leaves
/// are spelled over the standard generators.
pub fn sens_witness(depth: usize) -> Result<SensWitness> {
    let mut target: BTreeMap<String, Permutation> = BTreeMap::new();
    target.insert(String::new(), five_cycles()[0].clone());
    for level in 0..depth {
        let nodes: Vec<(String, Permutation)> =
            target.iter().filter(|(v, _)| v.len() == level).map(|(v, c)| (v.clone(), c.clone())).collect();
        for (v, c) in nodes {
            let (c0, c1) = commutator_pair(&c)
                .ok_or_else(|| Error::Internal(format!("no commutator pair for {c}")))?;
            target.insert(format!("{v}0"), c0);
            target.insert(format!("{v}1"), c1);
        }
    }
    let mut words = BTreeMap::new();
    let leaves = leaf_words();
    for level in (0..=depth).rev() {
        for (v, c) in target.iter().filter(|(v, _)| v.len() == level) {
            let w = if level == depth {
                leaves[c].clone()
            } else {
                Word::commutator(&words[&format!("{v}0")], &words[&format!("{v}1")])
            };
            words.insert(v.clone(), w);
        }
    }
    let witness = SensWitness { depth, words };
    witness.check()?;
    Ok(witness)
}
