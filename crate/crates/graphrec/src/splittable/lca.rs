//! Lowest common ancestors by Euler tour and sparse table.

/// LCA oracle over a forest given by an undirected edge list.
///
/// Each component is rooted at its smallest vertex. Queries on vertices of
/// different components return `None`.
#[derive(Clone, Debug)]
pub struct Lca {
    depth: Vec<usize>,
    comp: Vec<usize>,
    first: Vec<usize>,
    euler: Vec<usize>,
    table: Vec<Vec<usize>>,
}

impl Lca {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut depth = vec![0; n];
        let mut comp = vec![usize::MAX; n];
        let mut first = vec![0; n];
        let mut euler = Vec::with_capacity(2 * n);
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = root;
            first[root] = euler.len();
            euler.push(root);
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            while let Some(&mut (x, ref mut i)) = stack.last_mut() {
                if *i < adj[x].len() {
                    let y = adj[x][*i];
                    *i += 1;
                    if comp[y] == usize::MAX {
                        comp[y] = root;
                        depth[y] = depth[x] + 1;
                        first[y] = euler.len();
                        euler.push(y);
                        stack.push((y, 0));
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _)) = stack.last() {
                        euler.push(p);
                    }
                }
            }
        }
        let len = euler.len();
        let mut table = vec![(0..len).collect::<Vec<_>>()];
        let mut k = 1;
        while 2 * k <= len {
            let prev = table.last().expect("nonempty");
            let row = (0..=len - 2 * k)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + k]);
                    if depth[euler[a]] <= depth[euler[b]] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            table.push(row);
            k *= 2;
        }
        Self { depth, comp, first, euler, table }
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn lca(&self, u: usize, v: usize) -> Option<usize> {
        if self.comp[u] != self.comp[v] {
            return None;
        }
        let (mut l, mut r) = (self.first[u], self.first[v]);
        if l > r {
            std::mem::swap(&mut l, &mut r);
        }
        let span = r - l + 1;
        let k = usize::BITS as usize - 1 - span.leading_zeros() as usize;
        let (a, b) = (self.table[k][l], self.table[k][r + 1 - (1 << k)]);
        let best = if self.depth[self.euler[a]] <= self.depth[self.euler[b]] { a } else { b };
        Some(self.euler[best])
    }

    pub fn dist(&self, u: usize, v: usize) -> Option<usize> {
        self.lca(u, v).map(|w| self.depth[u] + self.depth[v] - 2 * self.depth[w])
    }

    /// Whether `v` lies on the tree path between `a` and `b`.
    pub fn on_path(&self, a: usize, b: usize, v: usize) -> bool {
        match (self.dist(a, b), self.dist(a, v), self.dist(v, b)) {
            (Some(ab), Some(av), Some(vb)) => av + vb == ab,
            _ => false,
        }
    }
}

/// Endpoints of the intersection of tree paths, or `None` when it is empty.
pub fn path_intersection(lca: &Lca, paths: &[(usize, usize)]) -> Option<(usize, usize)> {
    let (&first, rest) = paths.split_first()?;
    lca.lca(first.0, first.1)?;
    let mut cur = first;
    for &(c, d) in rest {
        let (a, b) = cur;
        let mut cand = [lca.lca(a, c)?, lca.lca(a, d)?, lca.lca(b, c)?, lca.lca(b, d)?];
        cand.sort_by_key(|&x| std::cmp::Reverse(lca.depth(x)));
        let (p, q) = (cand[0], cand[1]);
        let ok = |x| lca.on_path(a, b, x) && lca.on_path(c, d, x);
        if ok(p) && ok(q) {
            cur = (p, q);
        } else {
            return None;
        }
    }
    Some(cur)
}
