//! Acyclic orientations of a multigraph.
//!
//! An orientation assigns one direction per adjacent non-loop vertex pair;
//! all parallel edges between the pair share that direction and loops carry
//! no orientation. Equivalence is generated by source-sink reversals, or —
//! the same thing — by linear equivalence of the associated divisors; both
//! routes are implemented and tested against each other.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::divisor::{q_reduce, Divisor};
use crate::error::{Error, Result};
use crate::graph::{merge_relabel, Multigraph};

/// An acyclic orientation of the non-loop pairs of its host graph.
///
/// `dir[k]` is the direction of `host.pairs()[k]`: `true` means the lower
/// endpoint is the source.
#[derive(Clone, Debug)]
pub struct Orientation {
    host: Arc<Multigraph>,
    dir: Vec<bool>,
}

impl PartialEq for Orientation {
    fn eq(&self, other: &Self) -> bool {
        self.host.vertex_count() == other.host.vertex_count()
            && self.host.edges() == other.host.edges()
            && self.dir == other.dir
    }
}

impl Eq for Orientation {}

impl std::hash::Hash for Orientation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.host.edges().hash(state);
        self.dir.hash(state);
    }
}

impl Orientation {
    fn new_unchecked(host: Arc<Multigraph>, dir: Vec<bool>) -> Self {
        debug_assert_eq!(dir.len(), host.pairs().len());
        Orientation { host, dir }
    }

    pub fn host(&self) -> &Arc<Multigraph> {
        &self.host
    }

    /// Source endpoint of the `k`-th adjacent pair.
    fn source_of(&self, k: usize) -> usize {
        let (u, v, _) = self.host.pairs()[k];
        if self.dir[k] {
            u
        } else {
            v
        }
    }

    fn target_of(&self, k: usize) -> usize {
        let (u, v, _) = self.host.pairs()[k];
        if self.dir[k] {
            v
        } else {
            u
        }
    }

    /// Direction of the pair `{u, v}`: returns the source endpoint.
    pub fn source_of_pair(&self, u: usize, v: usize) -> Result<usize> {
        let key = (u.min(v), u.max(v));
        let k = self
            .host
            .pairs()
            .iter()
            .position(|&(a, b, _)| (a, b) == key)
            .ok_or(Error::NoSuchEdge(u, v))?;
        Ok(self.source_of(k))
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm on the simple digraph.
        let n = self.host.vertex_count();
        let mut indeg = vec![0usize; n];
        for k in 0..self.dir.len() {
            indeg[self.target_of(k)] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for k in 0..self.dir.len() {
                if self.source_of(k) == v {
                    let w = self.target_of(k);
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        queue.push_back(w);
                    }
                }
            }
        }
        seen == n
    }

    /// Out-multiplicity of `v`, counting parallel edges.
    pub fn out_multiplicity(&self, v: usize) -> usize {
        (0..self.dir.len())
            .filter(|&k| self.source_of(k) == v)
            .map(|k| self.host.pairs()[k].2)
            .sum()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        (0..self.dir.len()).all(|k| self.source_of(k) != v)
    }

    pub fn is_source(&self, v: usize) -> bool {
        (0..self.dir.len()).all(|k| self.target_of(k) != v)
    }

    /// All vertices with no outgoing pair.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.host.vertex_count())
            .filter(|&v| self.is_sink(v))
            .collect()
    }

    pub fn has_unique_sink_at(&self, q: usize) -> bool {
        self.sinks() == [q]
    }

    /// The divisor with coordinate `outdeg(v) - 1` at every vertex.
    pub fn divisor(&self) -> Divisor {
        Divisor::new(
            (0..self.host.vertex_count())
                .map(|v| self.out_multiplicity(v) as i64 - 1)
                .collect(),
        )
    }

    /// Flips every pair incident to `v`; `v` must be a source or a sink.
    pub fn source_sink_reverse(&self, v: usize) -> Result<Orientation> {
        if !self.is_sink(v) && !self.is_source(v) {
            return Err(Error::NotSourceOrSink(v));
        }
        let mut dir = self.dir.clone();
        for (k, d) in dir.iter_mut().enumerate() {
            let (u, w, _) = self.host.pairs()[k];
            if u == v || w == v {
                *d = !*d;
            }
        }
        let r = Orientation::new_unchecked(self.host.clone(), dir);
        debug_assert!(r.is_acyclic());
        Ok(r)
    }

    /// Sorted `"u>v"` strings, one per adjacent pair.
    pub fn serialize(&self) -> Vec<String> {
        let mut v: Vec<String> = (0..self.dir.len())
            .map(|k| format!("{}>{}", self.source_of(k), self.target_of(k)))
            .collect();
        v.sort();
        v
    }

    /// Single-string form of [`Orientation::serialize`], used as a stable
    /// label.
    pub fn label(&self) -> String {
        self.serialize().join(" ")
    }
}

/// All acyclic orientations, in lexicographic order over the pair-direction
/// vector.
pub fn enumerate_acyclic(g: &Arc<Multigraph>) -> Vec<Orientation> {
    let p = g.pairs().len();
    assert!(p < usize::BITS as usize, "too many pairs to enumerate");
    let mut out = Vec::new();
    for mask in 0..(1usize << p) {
        let dir: Vec<bool> = (0..p).map(|k| mask >> (p - 1 - k) & 1 == 0).collect();
        let o = Orientation::new_unchecked(g.clone(), dir);
        if o.is_acyclic() {
            out.push(o);
        }
    }
    out
}

/// Acyclic orientations whose unique sink is `q`.
pub fn enumerate_unique_sink(g: &Arc<Multigraph>, q: usize) -> Vec<Orientation> {
    enumerate_acyclic(g)
        .into_iter()
        .filter(|o| o.has_unique_sink_at(q))
        .collect()
}

/// Equivalence via divisors: the associated divisors are linearly
/// equivalent. This is the production route; [`are_equivalent_by_reversals`]
/// is the independent reversal-graph route.
pub fn are_equivalent(a: &Orientation, b: &Orientation) -> bool {
    debug_assert_eq!(a.host.edges(), b.host.edges());
    let g = a.host();
    let da = a.divisor();
    let db = b.divisor();
    q_reduce(g, &da, 0) == q_reduce(g, &db, 0)
}

/// Equivalence via breadth-first search in the source-sink reversal graph.
pub fn are_equivalent_by_reversals(a: &Orientation, b: &Orientation) -> bool {
    reversal_bfs(a, b).is_some()
}

/// Minimum number of source or sink reversals transforming `a` into `b`.
pub fn reversal_distance(a: &Orientation, b: &Orientation) -> Result<usize> {
    reversal_bfs(a, b).ok_or(Error::NotEquivalent)
}

fn reversal_bfs(a: &Orientation, b: &Orientation) -> Option<usize> {
    let n = a.host.vertex_count();
    let mut dist: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(a.dir.clone(), 0);
    queue.push_back(a.clone());
    while let Some(o) = queue.pop_front() {
        let d = dist[&o.dir];
        if o.dir == b.dir {
            return Some(d);
        }
        for v in 0..n {
            if o.is_sink(v) || o.is_source(v) {
                let next = o.source_sink_reverse(v).expect("checked source or sink");
                if !dist.contains_key(&next.dir) {
                    dist.insert(next.dir.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

/// Canonical representatives of orientation classes for a fixed sink.
///
/// Built once per (graph, sink): every unique-sink orientation is keyed by
/// the q-reduced form of its divisor, so canonical lookup is a single
/// reduction. The reversal BFS serves as the test oracle for this table.
#[derive(Clone, Debug)]
pub struct SinkClassTable {
    sink: usize,
    reps: Vec<Orientation>,
    by_reduced: HashMap<Vec<i64>, usize>,
}

impl SinkClassTable {
    pub fn new(g: &Arc<Multigraph>, sink: usize) -> Self {
        let mut reps = enumerate_unique_sink(g, sink);
        reps.sort_by_key(|o| o.label());
        let by_reduced = reps
            .iter()
            .enumerate()
            .map(|(i, o)| (q_reduce(g, &o.divisor(), sink).into_coeffs(), i))
            .collect();
        SinkClassTable {
            sink,
            reps,
            by_reduced,
        }
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Representatives in label order; one per equivalence class.
    pub fn reps(&self) -> &[Orientation] {
        &self.reps
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    /// Index of the class of `a` among the representatives.
    pub fn class_index(&self, a: &Orientation) -> usize {
        let key = q_reduce(a.host(), &a.divisor(), self.sink).into_coeffs();
        *self
            .by_reduced
            .get(&key)
            .expect("every acyclic orientation has a unique-sink representative")
    }

    /// The unique equivalent orientation with unique sink at the table's
    /// sink.
    pub fn canonical_rep(&self, a: &Orientation) -> &Orientation {
        &self.reps[self.class_index(a)]
    }
}

/// Checks that `a` is an orientation of the contraction of the pair `{u, v}`
/// in `g` (same non-loop pair structure).
fn check_contraction_shape(a: &Orientation, g: &Arc<Multigraph>, u: usize, v: usize) -> Result<()> {
    let (pg, _) = g.contract_pair(u, v)?;
    if a.host.vertex_count() != pg.vertex_count() || a.host.pairs() != pg.pairs() {
        return Err(Error::ShapeMismatch(format!(
            "expected an orientation of the contraction of ({}, {})",
            u, v
        )));
    }
    Ok(())
}

/// Lifts an orientation of the contraction of `{u, v}` back to `g`, further
/// orienting every edge of the pair with `u` as the source (`plus = true`)
/// or `v` as the source.
pub fn lift(
    a: &Orientation,
    g: &Arc<Multigraph>,
    u: usize,
    v: usize,
    plus: bool,
) -> Result<Orientation> {
    check_contraction_shape(a, g, u, v)?;
    let relab = merge_relabel(g.vertex_count(), u, v);
    let merged = u.min(v);
    let mut dir = Vec::with_capacity(g.pairs().len());
    for &(x, y, _) in g.pairs() {
        if (x, y) == (u.min(v), u.max(v)) {
            let source = if plus { u } else { v };
            dir.push(source == x);
            continue;
        }
        let (cx, cy) = (relab[x], relab[y]);
        let csrc = a.source_of_pair(cx, cy)?;
        // Map the contracted source back to the endpoint of {x, y} above it.
        let source = if csrc == merged && (x == u || x == v) {
            x
        } else if csrc == merged && (y == u || y == v) {
            y
        } else if relab[x] == csrc {
            x
        } else {
            y
        };
        dir.push(source == x);
    }
    let o = Orientation::new_unchecked(g.clone(), dir);
    debug_assert!(o.is_acyclic(), "lift of an acyclic orientation is acyclic");
    Ok(o)
}

/// The orientation induced on `g` minus one copy of `{u, v}`. When the last
/// copy is removed the pair entry is dropped; otherwise directions are
/// unchanged.
pub fn restrict_delete(a: &Orientation, u: usize, v: usize) -> Result<Orientation> {
    let g = a.host();
    let deleted = Arc::new(g.delete_edge(u, v)?);
    let mut dir = Vec::with_capacity(deleted.pairs().len());
    for &(x, y, _) in deleted.pairs() {
        dir.push(a.source_of_pair(x, y)? == x);
    }
    Ok(Orientation::new_unchecked(deleted, dir))
}

/// The orientation induced on the contraction of the pair `{u, v}`, when it
/// is acyclic; `ContractionNotAcyclic` otherwise.
pub fn restrict_contract(a: &Orientation, u: usize, v: usize) -> Result<Orientation> {
    let g = a.host();
    let (pg, relab) = g.contract_pair(u, v)?;
    let pg = Arc::new(pg);
    let mut dir: Vec<Option<bool>> = vec![None; pg.pairs().len()];
    for &(x, y, _) in g.pairs() {
        if (x, y) == (u.min(v), u.max(v)) {
            continue;
        }
        let (cx, cy) = (relab[x].min(relab[y]), relab[x].max(relab[y]));
        let k = pg
            .pairs()
            .iter()
            .position(|&(a_, b_, _)| (a_, b_) == (cx, cy))
            .expect("contracted pair present");
        let src = a.source_of_pair(x, y)?;
        let csrc = relab[src];
        let d = csrc == cx;
        match dir[k] {
            None => dir[k] = Some(d),
            // Two parallel classes of g map onto this pair; conflicting
            // directions produce a two-cycle through the merged vertex.
            Some(prev) if prev != d => return Err(Error::ContractionNotAcyclic),
            Some(_) => {}
        }
    }
    let dir: Vec<bool> = dir
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .expect("every contracted pair is covered");
    let o = Orientation::new_unchecked(pg, dir);
    if o.is_acyclic() {
        Ok(o)
    } else {
        Err(Error::ContractionNotAcyclic)
    }
}

/// Is the pair `{u, v}` contractible on `a` (induced orientation acyclic)?
pub fn is_contractible(a: &Orientation, u: usize, v: usize) -> bool {
    restrict_contract(a, u, v).is_ok()
}
