//! Disjoint sets with union by rank, path halving and an operation counter.

/// Disjoint-set forest over dense `usize` labels.
///
/// Every `find` and `union` bumps [`DisjointSets::ops`]. When a journal is
/// open, each parent or rank overwrite is recorded so that
/// [`DisjointSets::rollback`] can restore the exact prior state.
#[derive(Clone, Debug, Default)]
pub struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
    ops: u64,
    journal: Option<Journal>,
}

#[derive(Clone, Debug)]
struct Journal {
    len: usize,
    writes: Vec<(usize, usize, u8)>,
}

impl DisjointSets {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a fresh singleton and returns its label.
    pub fn make_set(&mut self) -> usize {
        let x = self.parent.len();
        self.parent.push(x);
        self.rank.push(0);
        x
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }

    fn write(&mut self, x: usize, parent: usize, rank: u8) {
        if let Some(j) = self.journal.as_mut() {
            if x < j.len {
                j.writes.push((x, self.parent[x], self.rank[x]));
            }
        }
        self.parent[x] = parent;
        self.rank[x] = rank;
    }

    /// Representative of `x`, compressing the path by halving.
    pub fn find(&mut self, mut x: usize) -> usize {
        self.ops += 1;
        while self.parent[x] != x {
            let grand = self.parent[self.parent[x]];
            if grand != self.parent[x] {
                let r = self.rank[x];
                self.write(x, grand, r);
            }
            x = grand;
        }
        x
    }

    /// Representative of `x` without mutating the structure.
    pub fn find_const(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b` and returns the new representative.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let ra = self.find(a);
        let rb = self.find(b);
        self.ops += 1;
        if ra == rb {
            return ra;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
        let lo_rank = self.rank[lo];
        self.write(lo, hi, lo_rank);
        if self.rank[hi] == lo_rank {
            let r = self.rank[hi] + 1;
            self.write(hi, hi, r);
        }
        hi
    }

    pub fn begin(&mut self) {
        self.journal = Some(Journal { len: self.parent.len(), writes: Vec::new() });
    }

    pub fn commit(&mut self) {
        self.journal = None;
    }

    pub fn rollback(&mut self) {
        if let Some(j) = self.journal.take() {
            for &(x, p, r) in j.writes.iter().rev() {
                self.parent[x] = p;
                self.rank[x] = r;
            }
            self.parent.truncate(j.len);
            self.rank.truncate(j.len);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_and_find() {
        let mut d = DisjointSets::new();
        let xs: Vec<usize> = (0..6).map(|_| d.make_set()).collect();
        d.union(xs[0], xs[1]);
        d.union(xs[2], xs[3]);
        d.union(xs[1], xs[3]);
        assert_eq!(d.find(xs[0]), d.find(xs[2]));
        assert_ne!(d.find(xs[4]), d.find(xs[0]));
        assert!(d.ops() > 0);
    }

    #[test]
    fn rollback_restores_everything() {
        let mut d = DisjointSets::new();
        for _ in 0..5 {
            d.make_set();
        }
        d.union(0, 1);
        let before: Vec<usize> = (0..5).map(|x| d.find_const(x)).collect();
        d.begin();
        d.union(1, 2);
        d.union(3, 4);
        d.make_set();
        d.union(5, 0);
        d.rollback();
        assert_eq!(d.len(), 5);
        let after: Vec<usize> = (0..5).map(|x| d.find_const(x)).collect();
        assert_eq!(before, after);
    }
}
