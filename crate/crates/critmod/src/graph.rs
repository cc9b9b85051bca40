//! Connected multigraphs with loops, the three surgery operations
//! (contract one edge copy, delete one edge copy, contract a whole parallel
//! class), connected partitions, Laplacian and spanning-tree count.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// An undirected connected multigraph on vertices `0..n`.
///
/// Edges are stored as a sorted multiset of normalized pairs `(u, v)` with
/// `u <= v`; `u == v` denotes a loop. Graph equality is labeled equality of
/// the edge multiset — no isomorphism tests anywhere.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Distinct adjacent non-loop pairs `(u, v, multiplicity)`, sorted.
    pairs: Vec<(usize, usize, usize)>,
    loops: usize,
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multigraph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Multigraph {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Disconnected);
        }
        for e in edges.iter_mut() {
            if e.0 >= n {
                return Err(Error::InvalidVertex(e.0, n));
            }
            if e.1 >= n {
                return Err(Error::InvalidVertex(e.1, n));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();

        let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
        let mut loops = 0;
        for &(u, v) in &edges {
            if u == v {
                loops += 1;
            } else {
                match pairs.last_mut() {
                    Some((pu, pv, m)) if *pu == u && *pv == v => *m += 1,
                    _ => pairs.push((u, v, 1)),
                }
            }
        }

        let g = Multigraph {
            n,
            edges,
            pairs,
            loops,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b, _) in &self.pairs {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// The full edge multiset (loops included), sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Distinct adjacent non-loop pairs with multiplicities, sorted.
    pub fn pairs(&self) -> &[(usize, usize, usize)] {
        &self.pairs
    }

    pub fn loop_count(&self) -> usize {
        self.loops
    }

    pub fn nonloop_edge_count(&self) -> usize {
        self.edges.len() - self.loops
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Multiplicity of the unordered pair `{u, v}` (0 when not adjacent).
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        self.pairs
            .iter()
            .find(|&&(a, b, _)| (a, b) == key)
            .map_or(0, |&(_, _, m)| m)
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        u != v && self.multiplicity(u, v) > 0
    }

    /// Non-loop degree of `v`; loops contribute nothing.
    pub fn degree(&self, v: usize) -> usize {
        self.pairs
            .iter()
            .filter(|&&(a, b, _)| a == v || b == v)
            .map(|&(_, _, m)| m)
            .sum()
    }

    /// Cycle rank `m - n + 1` of the loopless part.
    pub fn genus(&self) -> usize {
        self.nonloop_edge_count() + 1 - self.n
    }

    /// Number of edges from `v` leaving the vertex set `inside` (loops never
    /// count). `inside` is given as a boolean mask.
    pub fn edges_leaving(&self, v: usize, inside: &[bool]) -> i64 {
        let mut out = 0i64;
        for &(a, b, m) in &self.pairs {
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !inside[w] {
                out += m as i64;
            }
        }
        out
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n {
            return Err(Error::InvalidVertex(u, self.n));
        }
        if v >= self.n {
            return Err(Error::InvalidVertex(v, self.n));
        }
        if u == v {
            return Err(Error::SameVertex(u));
        }
        if !self.is_adjacent(u, v) {
            return Err(Error::NoSuchEdge(u, v));
        }
        Ok(())
    }

    /// Contracts one copy of an edge between `u` and `v`: the two endpoints
    /// merge and the remaining `m - 1` parallel copies become loops on the
    /// merged vertex. Returns the result together with the old-to-new vertex
    /// relabeling.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<(Multigraph, Vec<usize>)> {
        self.check_pair(u, v)?;
        let relab = merge_relabel(self.n, u, v);
        let mut edges = Vec::with_capacity(self.edges.len() - 1);
        let mut skipped = false;
        for &(a, b) in &self.edges {
            if !skipped && (a, b) == (u.min(v), u.max(v)) {
                skipped = true; // the contracted copy disappears
                continue;
            }
            edges.push((relab[a], relab[b]));
        }
        Ok((Multigraph::new(self.n - 1, edges)?, relab))
    }

    /// Deletes exactly one copy of an edge between `u` and `v`.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Multigraph> {
        self.check_pair(u, v)?;
        let key = (u.min(v), u.max(v));
        let mut edges = self.edges.clone();
        let pos = edges.iter().position(|&e| e == key).unwrap();
        edges.remove(pos);
        Multigraph::new(self.n, edges)
    }

    /// Contracts the whole parallel class between `u` and `v`: the endpoints
    /// merge and all copies vanish (no loops created from them). Pre-existing
    /// loops carry over. Returns the result and the relabeling.
    pub fn contract_pair(&self, u: usize, v: usize) -> Result<(Multigraph, Vec<usize>)> {
        self.check_pair(u, v)?;
        let relab = merge_relabel(self.n, u, v);
        let key = (u.min(v), u.max(v));
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            if (a, b) == key {
                continue;
            }
            edges.push((relab[a], relab[b]));
        }
        Ok((Multigraph::new(self.n - 1, edges)?, relab))
    }

    /// True when `{u, v}` has multiplicity one and removing it disconnects.
    pub fn is_bridge(&self, u: usize, v: usize) -> Result<bool> {
        self.check_pair(u, v)?;
        if self.multiplicity(u, v) > 1 {
            return Ok(false);
        }
        let key = (u.min(v), u.max(v));
        let mut edges = self.edges.clone();
        let pos = edges.iter().position(|&e| e == key).unwrap();
        edges.remove(pos);
        Ok(matches!(
            Multigraph::new(self.n, edges),
            Err(Error::Disconnected)
        ))
    }

    /// All partitions of the vertices into `n - i` blocks whose blocks induce
    /// connected subgraphs ("size i" counts merges). Deterministic order.
    pub fn connected_partitions(&self, i: usize) -> Vec<VertexPartition> {
        let mut out = Vec::new();
        if i >= self.n {
            return out;
        }
        let target_blocks = self.n - i;
        // Restricted growth strings enumerate set partitions in lexicographic
        // order.
        let mut rgs = vec![0usize; self.n];
        loop {
            let blocks = rgs.iter().copied().max().unwrap() + 1;
            if blocks == target_blocks {
                let p = VertexPartition::from_rgs(&rgs);
                if p.blocks().iter().all(|b| self.block_connected(b)) {
                    out.push(p);
                }
            }
            // advance
            let mut k = self.n - 1;
            loop {
                if k == 0 {
                    return out;
                }
                let cap = rgs[..k].iter().copied().max().unwrap() + 1;
                if rgs[k] < cap {
                    rgs[k] += 1;
                    for r in rgs.iter_mut().skip(k + 1) {
                        *r = 0;
                    }
                    break;
                }
                k -= 1;
            }
        }
    }

    fn block_connected(&self, block: &[usize]) -> bool {
        if block.is_empty() {
            return false;
        }
        let inside: Vec<bool> = {
            let mut m = vec![false; self.n];
            for &v in block {
                m[v] = true;
            }
            m
        };
        let mut seen = vec![false; self.n];
        let mut stack = vec![block[0]];
        seen[block[0]] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(a, b, _) in &self.pairs {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == block.len()
    }

    /// The quotient graph of a connected partition: vertices are blocks,
    /// inter-block edges keep their multiplicity, intra-block edges and loops
    /// are discarded.
    pub fn partition_graph(&self, p: &VertexPartition) -> Result<Multigraph> {
        p.validate(self.n)?;
        let block_of = p.block_map(self.n);
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            let (ba, bb) = (block_of[a], block_of[b]);
            if ba != bb {
                edges.push((ba, bb));
            }
        }
        Multigraph::new(p.blocks().len(), edges)
    }

    /// The graph Laplacian; loops contribute nothing.
    pub fn laplacian(&self) -> Vec<Vec<i64>> {
        let mut q = vec![vec![0i64; self.n]; self.n];
        for &(u, v, m) in &self.pairs {
            q[u][v] -= m as i64;
            q[v][u] -= m as i64;
            q[u][u] += m as i64;
            q[v][v] += m as i64;
        }
        q
    }

    /// Number of spanning trees: |det| of the Laplacian with row and column
    /// `drop` removed, in exact big-integer arithmetic.
    pub fn spanning_tree_count_reduced(&self, drop: usize) -> BigInt {
        let q = self.laplacian();
        let idx: Vec<usize> = (0..self.n).filter(|&v| v != drop).collect();
        let minor: Vec<Vec<BigInt>> = idx
            .iter()
            .map(|&r| idx.iter().map(|&c| BigInt::from(q[r][c])).collect())
            .collect();
        det_bareiss(minor).abs()
    }

    pub fn spanning_tree_count(&self) -> BigInt {
        self.spanning_tree_count_reduced(0)
    }

    /// Same graph with all loops removed.
    pub fn strip_loops(&self) -> Multigraph {
        let edges: Vec<_> = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| u != v)
            .collect();
        Multigraph::new(self.n, edges).expect("loop removal preserves connectivity")
    }

    /// Canonical text form: first line `n`, then one `u v` line per edge in
    /// sorted order.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for &(u, v) in &self.edges {
            s.push_str(&format!("{} {}\n", u, v));
        }
        s
    }

    /// Parses the graph text format: line one is the vertex count, each
    /// following non-empty line is `u v` (`u = v` denotes a loop), `#` starts
    /// a comment.
    pub fn from_text(text: &str) -> Result<Multigraph> {
        let mut lines = text.lines().map(|l| {
            let l = l.split('#').next().unwrap_or("");
            l.trim()
        });
        let n: usize = loop {
            match lines.next() {
                Some("") => continue,
                Some(l) => {
                    break l
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad vertex count line {:?}", l)))?
                }
                None => return Err(Error::Parse("empty graph file".into())),
            }
        };
        let mut edges = Vec::new();
        for l in lines {
            if l.is_empty() {
                continue;
            }
            let mut it = l.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line {:?}", l)))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line {:?}", l)))?;
            if it.next().is_some() {
                return Err(Error::Parse(format!(
                    "trailing tokens in edge line {:?}",
                    l
                )));
            }
            edges.push((u, v));
        }
        Multigraph::new(n, edges)
    }

    pub fn into_arc(self) -> Arc<Multigraph> {
        Arc::new(self)
    }
}

/// Relabeling that merges `u` and `v` into `min(u, v)` and compacts the
/// remaining indices downward.
pub fn merge_relabel(n: usize, u: usize, v: usize) -> Vec<usize> {
    let (lo, hi) = (u.min(v), u.max(v));
    (0..n)
        .map(|x| {
            if x == hi {
                lo
            } else if x > hi {
                x - 1
            } else {
                x
            }
        })
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// A partition of the vertex set into disjoint blocks covering `0..n`.
/// Blocks are sorted internally and ordered by their minimum element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        VertexPartition { blocks }
    }

    fn from_rgs(rgs: &[usize]) -> Self {
        let blocks_n = rgs.iter().copied().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); blocks_n];
        for (v, &b) in rgs.iter().enumerate() {
            blocks[b].push(v);
        }
        // RGS block labels are already ordered by first occurrence, which is
        // the minimum element.
        VertexPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of merges: `n` minus the number of blocks.
    pub fn size(&self, n: usize) -> usize {
        n - self.blocks.len()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for b in &self.blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &v in b {
                if v >= n {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {} out of range",
                        v
                    )));
                }
                if seen[v] {
                    return Err(Error::InvalidPartition(format!("vertex {} repeated", v)));
                }
                seen[v] = true;
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::InvalidPartition(
                "blocks do not cover all vertices".into(),
            ))
        }
    }

    /// For each vertex, the index of its block.
    pub fn block_map(&self, n: usize) -> Vec<usize> {
        let mut map = vec![usize::MAX; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                map[v] = i;
            }
        }
        map
    }

    /// Index of the block containing `v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&v))
            .expect("vertex not covered by partition")
    }
}
