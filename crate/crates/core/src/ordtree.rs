//! An arena-backed treap keyed by `i64`, each key carrying an `i64` value.
//!
//! Every node aggregates the number of keys in its subtree (for rank and
//! k-th key lookups) and the maximum value in its subtree (for "largest value
//! among keys above a threshold" queries). All operations are expected
//! `O(log n)`.

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    key: i64,
    val: i64,
    pri: u64,
    left: u32,
    right: u32,
    size: u32,
    max_val: i64,
}

#[derive(Debug, Clone)]
pub struct OrdTree {
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    seed: u64,
}

impl Default for OrdTree {
    fn default() -> Self {
        Self::new()
    }
}

// splitmix64
fn next_priority(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl OrdTree {
    pub fn new() -> Self {
        OrdTree {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NIL,
            seed: 0x5eed,
        }
    }

    pub fn len(&self) -> usize {
        self.size(self.root) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    pub fn clear(&mut self) {
        self.nodes.clear();
        self.free.clear();
        self.root = NIL;
    }

    #[inline]
    fn size(&self, t: u32) -> u32 {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].size
        }
    }

    #[inline]
    fn max_val(&self, t: u32) -> i64 {
        if t == NIL {
            i64::MIN
        } else {
            self.nodes[t as usize].max_val
        }
    }

    fn pull(&mut self, t: u32) {
        let (l, r, v) = {
            let n = &self.nodes[t as usize];
            (n.left, n.right, n.val)
        };
        let size = 1 + self.size(l) + self.size(r);
        let max_val = v.max(self.max_val(l)).max(self.max_val(r));
        let n = &mut self.nodes[t as usize];
        n.size = size;
        n.max_val = max_val;
    }

    fn alloc(&mut self, key: i64, val: i64) -> u32 {
        let node = Node {
            key,
            val,
            pri: next_priority(&mut self.seed),
            left: NIL,
            right: NIL,
            size: 1,
            max_val: val,
        };
        match self.free.pop() {
            Some(i) => {
                self.nodes[i as usize] = node;
                i
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        }
    }

    /// Split into (keys < key, keys >= key).
    fn split(&mut self, t: u32, key: i64) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        if self.nodes[t as usize].key < key {
            let (a, b) = self.split(self.nodes[t as usize].right, key);
            self.nodes[t as usize].right = a;
            self.pull(t);
            (t, b)
        } else {
            let (a, b) = self.split(self.nodes[t as usize].left, key);
            self.nodes[t as usize].left = b;
            self.pull(t);
            (a, t)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].pri > self.nodes[b as usize].pri {
            let r = self.merge(self.nodes[a as usize].right, b);
            self.nodes[a as usize].right = r;
            self.pull(a);
            a
        } else {
            let l = self.merge(a, self.nodes[b as usize].left);
            self.nodes[b as usize].left = l;
            self.pull(b);
            b
        }
    }

    fn find(&self, key: i64) -> u32 {
        let mut t = self.root;
        while t != NIL {
            let n = &self.nodes[t as usize];
            if key == n.key {
                return t;
            }
            t = if key < n.key { n.left } else { n.right };
        }
        NIL
    }

    pub fn get(&self, key: i64) -> Option<i64> {
        match self.find(key) {
            NIL => None,
            t => Some(self.nodes[t as usize].val),
        }
    }

    /// Insert `key`, or combine its stored value with `val` via `f(old, val)`.
    pub fn upsert(&mut self, key: i64, val: i64, f: impl FnOnce(i64, i64) -> i64) {
        // Split off the single-key middle so aggregates above it get refreshed.
        let (lt, ge) = self.split(self.root, key);
        let (eq, gt) = match key.checked_add(1) {
            Some(next) => self.split(ge, next),
            None => (ge, NIL),
        };
        let mid = if eq == NIL {
            self.alloc(key, val)
        } else {
            let n = &mut self.nodes[eq as usize];
            n.val = f(n.val, val);
            self.pull(eq);
            eq
        };
        let left = self.merge(lt, mid);
        self.root = self.merge(left, gt);
    }

    /// Remove `key`, returning its value.
    pub fn remove(&mut self, key: i64) -> Option<i64> {
        let (lt, ge) = self.split(self.root, key);
        let (eq, gt) = match key.checked_add(1) {
            Some(next) => self.split(ge, next),
            None => (ge, NIL),
        };
        let out = if eq == NIL {
            None
        } else {
            self.free.push(eq);
            Some(self.nodes[eq as usize].val)
        };
        self.root = self.merge(lt, gt);
        out
    }

    /// Largest value stored under a key strictly greater than `key`.
    pub fn max_val_above(&self, key: i64) -> Option<i64> {
        let mut best = None;
        let mut t = self.root;
        while t != NIL {
            let n = &self.nodes[t as usize];
            if n.key > key {
                let here = n.val.max(self.max_val(n.right));
                best = Some(best.map_or(here, |b: i64| b.max(here)));
                t = n.left;
            } else {
                t = n.right;
            }
        }
        best
    }

    /// The `k`-th smallest key (0-based).
    pub fn kth(&self, mut k: usize) -> Option<(i64, i64)> {
        let mut t = self.root;
        while t != NIL {
            let n = &self.nodes[t as usize];
            let ls = self.size(n.left) as usize;
            if k < ls {
                t = n.left;
            } else if k == ls {
                return Some((n.key, n.val));
            } else {
                k -= ls + 1;
                t = n.right;
            }
        }
        None
    }

    pub fn last_key(&self) -> Option<i64> {
        let mut t = self.root;
        let mut out = None;
        while t != NIL {
            out = Some(self.nodes[t as usize].key);
            t = self.nodes[t as usize].right;
        }
        out
    }

    /// In-order `(key, value)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let mut stack = Vec::new();
        let mut t = self.root;
        std::iter::from_fn(move || {
            while t != NIL {
                stack.push(t);
                t = self.nodes[t as usize].left;
            }
            let top = stack.pop()?;
            let n = &self.nodes[top as usize];
            t = n.right;
            Some((n.key, n.val))
        })
    }
}

/// Multiset of heights backed by [`OrdTree`], with rank access to the
/// distinct values.
#[derive(Debug, Clone, Default)]
pub struct HeightMultiset {
    tree: OrdTree,
    total: usize,
}

impl HeightMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, h: i64) {
        self.tree.upsert(h, 1, |c, d| c + d);
        self.total += 1;
    }

    /// Remove one copy of `h`. Returns false when `h` was absent.
    pub fn remove(&mut self, h: i64) -> bool {
        match self.tree.get(h) {
            None => false,
            Some(1) => {
                self.tree.remove(h);
                self.total -= 1;
                true
            }
            Some(_) => {
                self.tree.upsert(h, -1, |c, d| c + d);
                self.total -= 1;
                true
            }
        }
    }

    pub fn distinct(&self) -> usize {
        self.tree.len()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// The `k`-th smallest distinct height.
    pub fn nth_distinct(&self, k: usize) -> Option<i64> {
        self.tree.kth(k).map(|(h, _)| h)
    }

    pub fn count(&self, h: i64) -> usize {
        self.tree.get(h).unwrap_or(0) as usize
    }

    /// Sorted `(height, multiplicity)` pairs.
    pub fn entries(&self) -> Vec<(i64, usize)> {
        self.tree.iter().map(|(h, c)| (h, c as usize)).collect()
    }
}
