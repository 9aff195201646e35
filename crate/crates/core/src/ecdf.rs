//! Online empirical CDF of the observed highest competing bids, plus the
//! DKW concentration helpers used to size its error.
//!
//! Samples live in a treap keyed by value with multiplicity counts and
//! subtree sizes, so both `insert` and the rank query behind `query` run in
//! expected `O(log n)`.

use crate::error::{Error, Result};

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    key: f64,
    count: u64,
    size: u64,
    prio: u64,
    left: u32,
    right: u32,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// `G_t(x) = #{samples <= x} / n`, with `G_t == 1` before any sample.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    lo: f64,
    hi: f64,
    nodes: Vec<Node>,
    root: u32,
    total: u64,
}

impl EmpiricalCdf {
    /// Empty estimator accepting samples in `[lo, hi]`.
    pub fn new(lo: f64, hi: f64) -> Self {
        EmpiricalCdf {
            lo,
            hi,
            nodes: Vec::new(),
            root: NIL,
            total: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.total as usize
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Number of distinct sample values.
    pub fn distinct(&self) -> usize {
        self.nodes.len()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn insert(&mut self, m: f64) -> Result<()> {
        if !(m >= self.lo && m <= self.hi) {
            return Err(Error::OutOfRange {
                value: m,
                lo: self.lo,
                hi: self.hi,
            });
        }
        self.root = self.insert_at(self.root, m);
        self.total += 1;
        Ok(())
    }

    fn size(&self, idx: u32) -> u64 {
        if idx == NIL {
            0
        } else {
            self.nodes[idx as usize].size
        }
    }

    fn refresh(&mut self, idx: u32) {
        let (l, r) = {
            let n = &self.nodes[idx as usize];
            (n.left, n.right)
        };
        let size = self.nodes[idx as usize].count + self.size(l) + self.size(r);
        self.nodes[idx as usize].size = size;
    }

    fn rotate_right(&mut self, idx: u32) -> u32 {
        let l = self.nodes[idx as usize].left;
        self.nodes[idx as usize].left = self.nodes[l as usize].right;
        self.nodes[l as usize].right = idx;
        self.refresh(idx);
        self.refresh(l);
        l
    }

    fn rotate_left(&mut self, idx: u32) -> u32 {
        let r = self.nodes[idx as usize].right;
        self.nodes[idx as usize].right = self.nodes[r as usize].left;
        self.nodes[r as usize].left = idx;
        self.refresh(idx);
        self.refresh(r);
        r
    }

    fn insert_at(&mut self, idx: u32, key: f64) -> u32 {
        if idx == NIL {
            let id = self.nodes.len() as u32;
            self.nodes.push(Node {
                key,
                count: 1,
                size: 1,
                prio: splitmix64(id as u64),
                left: NIL,
                right: NIL,
            });
            return id;
        }
        let node_key = self.nodes[idx as usize].key;
        if key == node_key {
            let node = &mut self.nodes[idx as usize];
            node.count += 1;
            node.size += 1;
            idx
        } else if key < node_key {
            let child = self.insert_at(self.nodes[idx as usize].left, key);
            self.nodes[idx as usize].left = child;
            self.nodes[idx as usize].size += 1;
            if self.nodes[child as usize].prio > self.nodes[idx as usize].prio {
                self.rotate_right(idx)
            } else {
                idx
            }
        } else {
            let child = self.insert_at(self.nodes[idx as usize].right, key);
            self.nodes[idx as usize].right = child;
            self.nodes[idx as usize].size += 1;
            if self.nodes[child as usize].prio > self.nodes[idx as usize].prio {
                self.rotate_left(idx)
            } else {
                idx
            }
        }
    }

    /// `#{samples <= x}`.
    pub fn count_le(&self, x: f64) -> u64 {
        let mut acc = 0;
        let mut idx = self.root;
        while idx != NIL {
            let node = &self.nodes[idx as usize];
            if x < node.key {
                idx = node.left;
            } else {
                acc += self.size(node.left) + node.count;
                idx = node.right;
            }
        }
        acc
    }

    /// Right-continuous step value at `x`.
    pub fn query(&self, x: f64) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        self.count_le(x) as f64 / self.total as f64
    }

    /// Left limit `G_t(x-)`.
    pub fn query_left(&self, x: f64) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        let below = self.count_le(x) - self.count_at(x);
        below as f64 / self.total as f64
    }

    fn count_at(&self, x: f64) -> u64 {
        let mut idx = self.root;
        while idx != NIL {
            let node = &self.nodes[idx as usize];
            if x < node.key {
                idx = node.left;
            } else if x > node.key {
                idx = node.right;
            } else {
                return node.count;
            }
        }
        0
    }

    /// Distinct sample values in increasing order with the cumulative count
    /// `#{samples <= value}` at each.
    pub fn steps(&self) -> Steps<'_> {
        let mut iter = Steps {
            cdf: self,
            stack: Vec::new(),
            cumulative: 0,
        };
        iter.push_left(self.root);
        iter
    }

    /// Strictly increasing list of distinct sample values.
    pub fn jump_points(&self) -> Vec<f64> {
        self.steps().map(|(x, _)| x).collect()
    }

    /// `sup_x |G_t(x) - G(x)|` for a continuous reference CDF, evaluated at
    /// the sample points and their left limits.
    pub fn sup_distance(&self, reference: impl Fn(f64) -> f64) -> f64 {
        if self.total == 0 {
            return 1.0 - reference(self.lo);
        }
        let n = self.total as f64;
        let mut below = 0.0;
        let mut worst: f64 = 0.0;
        for (x, cum) in self.steps() {
            let g = reference(x);
            let at = cum as f64 / n;
            worst = worst.max((at - g).abs()).max((below - g).abs());
            below = at;
        }
        worst
    }
}

/// In-order traversal produced by [`EmpiricalCdf::steps`].
pub struct Steps<'a> {
    cdf: &'a EmpiricalCdf,
    stack: Vec<u32>,
    cumulative: u64,
}

impl Steps<'_> {
    fn push_left(&mut self, mut idx: u32) {
        while idx != NIL {
            self.stack.push(idx);
            idx = self.cdf.nodes[idx as usize].left;
        }
    }
}

impl Iterator for Steps<'_> {
    type Item = (f64, u64);

    fn next(&mut self) -> Option<Self::Item> {
        let idx = self.stack.pop()?;
        let node = &self.cdf.nodes[idx as usize];
        self.cumulative += node.count;
        let item = (node.key, self.cumulative);
        self.push_left(node.right);
        Some(item)
    }
}

/// DKW radius: with probability at least `1 - delta`, the empirical CDF of
/// `n` i.i.d. samples is uniformly within `sqrt(ln(2/delta) / (2n))` of the
/// truth.
pub fn dkw_bound(n: usize, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("DKW bound needs n >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(((2.0 / delta).ln() / (2.0 * n as f64)).sqrt())
}

/// DKW tail `2 exp(-2 n eps^2)`.
pub fn dkw_tail(n: usize, eps: f64) -> f64 {
    2.0 * (-2.0 * n as f64 * eps * eps).exp()
}

/// Union-bound envelope on the CDF error after `t` samples that holds for
/// all periods of a horizon `T` simultaneously with probability `1 - 1/T`.
pub fn err_envelope(t: usize, horizon: usize) -> f64 {
    let t = t.max(1) as f64;
    let horizon = horizon.max(1) as f64;
    ((2f64.ln() + 2.0 * horizon.ln()) / (2.0 * t)).sqrt()
}
