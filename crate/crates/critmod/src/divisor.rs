//! Divisor theory on multigraphs: q-reduced forms via Dhar's burning
//! algorithm, linear equivalence, Baker-Norine rank by exhaustive search,
//! Riemann-Roch, and Picard-class enumeration through superstable
//! representatives.
//!
//! Loops never enter: everything here works on the non-loop pair structure,
//! which is exactly what the Laplacian sees.

use serde::Serialize;

use crate::graph::Multigraph;

/// An integer vector indexed by the vertices of its host graph. Serializes
/// as a plain integer array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Divisor {
    coeffs: Vec<i64>,
}

impl Divisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Divisor { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Divisor { coeffs: vec![0; n] }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn get(&self, v: usize) -> i64 {
        self.coeffs[v]
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        Divisor::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

/// A linear equivalence class held by its q-reduced representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorClass {
    pub reduced: Divisor,
    pub q: usize,
}

/// Fires the vertex set given by `inside` once (chips flow out of the set).
fn fire_set(g: &Multigraph, d: &mut [i64], inside: &[bool], times: i64) {
    for &(u, v, m) in g.pairs() {
        match (inside[u], inside[v]) {
            (true, false) => {
                d[u] -= times * m as i64;
                d[v] += times * m as i64;
            }
            (false, true) => {
                d[v] -= times * m as i64;
                d[u] += times * m as i64;
            }
            _ => {}
        }
    }
}

fn bfs_layers(g: &Multigraph, q: usize) -> Vec<usize> {
    let n = g.vertex_count();
    let mut dist = vec![usize::MAX; n];
    dist[q] = 0;
    let mut frontier = vec![q];
    let mut t = 0;
    while !frontier.is_empty() {
        t += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            for &(a, b, _) in g.pairs() {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if dist[w] == usize::MAX {
                    dist[w] = t;
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// The unique divisor linearly equivalent to `d` that is nonnegative away
/// from `q` and superstable off `q`. Idempotent.
pub fn q_reduce(g: &Multigraph, d: &Divisor, q: usize) -> Divisor {
    let n = g.vertex_count();
    let mut c = d.coeffs().to_vec();
    let dist = bfs_layers(g, q);
    let max_dist = dist.iter().copied().max().unwrap();

    // Phase 1: working outward-in over BFS layers, unfire the suffix set
    // {dist >= t} until layer t is nonnegative. Each vertex of layer t has an
    // edge toward layer t-1, so finitely many unfirings suffice, deeper
    // layers only gain, and the damage lands on layers already scheduled.
    for t in (1..=max_dist).rev() {
        let inside: Vec<bool> = (0..n).map(|v| dist[v] >= t).collect();
        let mut times = 0i64;
        for v in 0..n {
            if dist[v] == t && c[v] < 0 {
                let out = g.edges_leaving(v, &inside);
                debug_assert!(out > 0);
                times = times.max((-c[v] + out - 1) / out);
            }
        }
        if times > 0 {
            // Unfiring the suffix = firing its complement `times` times.
            let complement: Vec<bool> = inside.iter().map(|&b| !b).collect();
            fire_set(g, &mut c, &complement, times);
        }
    }
    debug_assert!((0..n).all(|v| v == q || c[v] >= 0));

    // Phase 2: Dhar's burning. While some nonempty subset off q can fire
    // without going negative, fire the whole unburnt set.
    loop {
        let mut burnt = vec![false; n];
        burnt[q] = true;
        loop {
            let mut progress = false;
            for v in 0..n {
                if burnt[v] {
                    continue;
                }
                let unburnt: Vec<bool> = burnt.iter().map(|&b| !b).collect();
                let toward_burnt = g.edges_leaving(v, &unburnt);
                if toward_burnt > c[v] {
                    burnt[v] = true;
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
        if burnt.iter().all(|&b| b) {
            break;
        }
        let unburnt: Vec<bool> = burnt.iter().map(|&b| !b).collect();
        fire_set(g, &mut c, &unburnt, 1);
    }
    Divisor::new(c)
}

/// Number of edges from `v` leaving the subset `s` of vertices (the
/// out-degree `deg_S(v)` used by parking conditions and set firings).
pub fn deg_out_of_set(g: &Multigraph, v: usize, s: &[bool]) -> i64 {
    g.edges_leaving(v, s)
}

/// Is `d` superstable off `q`: no nonempty subset of `V - q` can fire
/// without some member going negative?
pub fn is_superstable(g: &Multigraph, d: &Divisor, q: usize) -> bool {
    let n = g.vertex_count();
    let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
    for mask in 1u64..(1 << others.len()) {
        let mut inside = vec![false; n];
        for (i, &v) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                inside[v] = true;
            }
        }
        let survives = others
            .iter()
            .filter(|&&v| inside[v])
            .all(|&v| d.get(v) >= g.edges_leaving(v, &inside));
        if survives {
            return false;
        }
    }
    true
}

/// All superstable divisors off `q` (nonnegative, zero at `q`), in
/// lexicographic coordinate order. There are exactly as many as spanning
/// trees.
pub fn superstables(g: &Multigraph, q: usize) -> Vec<Divisor> {
    let n = g.vertex_count();
    let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    fn rec(
        g: &Multigraph,
        q: usize,
        others: &[usize],
        pos: usize,
        current: &mut Vec<i64>,
        out: &mut Vec<Divisor>,
    ) {
        if pos == others.len() {
            let d = Divisor::new(current.clone());
            if is_superstable(g, &d, q) {
                out.push(d);
            }
            return;
        }
        let v = others[pos];
        // A coordinate of degree(v) or more already fails the singleton set.
        for val in 0..g.degree(v) as i64 {
            current[v] = val;
            rec(g, q, others, pos + 1, current, out);
        }
        current[v] = 0;
    }
    rec(g, q, &others, 0, &mut current, &mut out);
    out
}

/// Linear equivalence: equal degree and equal q-reduced forms.
pub fn linearly_equivalent(g: &Multigraph, d1: &Divisor, d2: &Divisor, q: usize) -> bool {
    if d1.degree() != d2.degree() {
        return false;
    }
    q_reduce(g, d1, q) == q_reduce(g, d2, q)
}

/// Is `d` linearly equivalent to an effective divisor?
pub fn effective_equivalent(g: &Multigraph, d: &Divisor, q: usize) -> bool {
    if d.degree() < 0 {
        return false;
    }
    q_reduce(g, d, q).get(q) >= 0
}

/// All effective divisors of the given degree on `n` vertices.
fn effective_of_degree(n: usize, degree: i64) -> Vec<Divisor> {
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    fn rec(n: usize, pos: usize, left: i64, current: &mut Vec<i64>, out: &mut Vec<Divisor>) {
        if pos == n - 1 {
            current[pos] = left;
            out.push(Divisor::new(current.clone()));
            return;
        }
        for val in 0..=left {
            current[pos] = val;
            rec(n, pos + 1, left - val, current, out);
        }
        current[pos] = 0;
    }
    if n == 0 {
        return out;
    }
    rec(n, 0, degree, &mut current, &mut out);
    out
}

/// Baker-Norine rank by exhaustive search: the largest `k` such that
/// `d - E` is effective-equivalent for every effective `E` of degree `k`;
/// `-1` when `d` itself has no effective representative.
pub fn rank(g: &Multigraph, d: &Divisor, q: usize) -> i64 {
    if !effective_equivalent(g, d, q) {
        return -1;
    }
    let n = g.vertex_count();
    let mut k = 0i64;
    loop {
        k += 1;
        for e in effective_of_degree(n, k) {
            if !effective_equivalent(g, &d.sub(&e), q) {
                return k - 1;
            }
        }
        debug_assert!(k <= d.degree() + 1);
    }
}

/// The canonical divisor: degree minus two at every vertex (loops ignored).
pub fn canonical_divisor(g: &Multigraph) -> Divisor {
    Divisor::new(
        (0..g.vertex_count())
            .map(|v| g.degree(v) as i64 - 2)
            .collect(),
    )
}

/// Riemann-Roch for graphs: `r(D) - r(K - D) = deg(D) - g + 1`.
pub fn riemann_roch_check(g: &Multigraph, d: &Divisor, q: usize) -> bool {
    let k = canonical_divisor(g);
    let lhs = rank(g, d, q) - rank(g, &k.sub(d), q);
    let rhs = d.degree() - g.genus() as i64 + 1;
    lhs == rhs
}

/// All divisor classes of the given degree, as q-reduced representatives:
/// the off-q coordinates range over superstables and the q coordinate is
/// forced by the degree. Exactly `spanning_tree_count` classes.
pub fn picard_classes(g: &Multigraph, degree: i64, q: usize) -> Vec<DivisorClass> {
    superstables(g, q)
        .into_iter()
        .map(|s| {
            let mut coeffs = s.into_coeffs();
            let off_degree: i64 = coeffs.iter().sum();
            coeffs[q] = degree - off_degree;
            DivisorClass {
                reduced: Divisor::new(coeffs),
                q,
            }
        })
        .collect()
}

/// Classes of degree `g - 1` and rank `-1`.
pub fn nonspecial_classes(g: &Multigraph, q: usize) -> Vec<DivisorClass> {
    picard_classes(g, g.genus() as i64 - 1, q)
        .into_iter()
        .filter(|c| rank(g, &c.reduced, q) == -1)
        .collect()
}
