//! Brute-force reference implementations used as test oracles.
//!
//! Everything here is deliberately independent of the production code paths
//! it checks: spanning trees by subset enumeration, the Tutte polynomial by
//! the corank-nullity expansion, and q-reduction by bounded search over the
//! Laplacian lattice. Oracle disagreement is a test failure, never
//! auto-resolved.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::divisor::{is_superstable, Divisor};
use crate::graph::Multigraph;
use crate::tutte::BiPoly;

/// Number of spanning trees by enumerating all (n-1)-subsets of the edge
/// multiset.
pub fn spanning_trees_by_enumeration(g: &Multigraph) -> u64 {
    let n = g.vertex_count();
    let edges = g.edges();
    if n == 1 {
        return 1;
    }
    let m = edges.len();
    let mut count = 0u64;
    for mask in 0u64..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..m)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| edges[i])
            .collect();
        if spans(n, &chosen) {
            count += 1;
        }
    }
    count
}

fn spans(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut components = n;
    for &(u, v) in edges {
        if u == v {
            return false; // a loop can never be a tree edge
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
        components -= 1;
    }
    components == 1
}

fn component_count(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut components = n;
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            components -= 1;
        }
    }
    components
}

/// The Tutte polynomial by the corank-nullity expansion
/// `sum over A of (x-1)^(r(E)-r(A)) (y-1)^(|A|-r(A))`.
pub fn tutte_corank_nullity(g: &Multigraph) -> BiPoly {
    let n = g.vertex_count();
    let edges = g.edges();
    let m = edges.len();
    let rank_full = n - component_count(n, edges);
    // Polynomials in (x-1, y-1) collected first, then converted.
    let mut shifted: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    for mask in 0u64..(1 << m) {
        let subset: Vec<(usize, usize)> = (0..m)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| edges[i])
            .collect();
        let rank_a = n - component_count(n, &subset);
        let i = rank_full - rank_a;
        let j = subset.len() - rank_a;
        *shifted.entry((i, j)).or_insert_with(BigInt::zero) += BigInt::one();
    }
    // Expand (x-1)^i (y-1)^j by binomials.
    let mut out: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    for ((i, j), c) in shifted {
        for a in 0..=i {
            for b in 0..=j {
                let sign = if (i - a + j - b) % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                let coeff = sign * binomial(i, a) * binomial(j, b) * &c;
                let e = out.entry((a as u32, b as u32)).or_insert_with(BigInt::zero);
                *e += coeff;
            }
        }
    }
    BiPoly::from_signed(out)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Finds the q-reduced representative of `d` by brute force over integer
/// combinations of Laplacian rows with coefficients in `[-bound, bound]`
/// (the row for `q` is normalized to coefficient zero). Returns `None` when
/// the box is too small, which a test should treat as failure.
pub fn q_reduce_lattice_search(
    g: &Multigraph,
    d: &Divisor,
    q: usize,
    bound: i64,
) -> Option<Divisor> {
    let n = g.vertex_count();
    let lap = g.laplacian();
    let rows: Vec<&Vec<i64>> = (0..n).filter(|&v| v != q).map(|v| &lap[v]).collect();
    let k = rows.len();
    let mut coeffs = vec![-bound; k];
    loop {
        let mut candidate = d.coeffs().to_vec();
        for (c, row) in coeffs.iter().zip(&rows) {
            for (x, r) in candidate.iter_mut().zip(row.iter()) {
                *x += c * r;
            }
        }
        let cand = Divisor::new(candidate);
        let nonneg_off_q = (0..n).all(|v| v == q || cand.get(v) >= 0);
        if nonneg_off_q && is_superstable(g, &cand, q) {
            return Some(cand);
        }
        // advance the coefficient vector
        let mut i = 0;
        loop {
            if i == k {
                return None;
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_tree_counts_agree_with_matrix_tree() {
        use num_bigint::BigInt;
        let graphs = [
            Multigraph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap(),
            Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap(),
            Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 2)]).unwrap(),
        ];
        for g in graphs {
            assert_eq!(
                BigInt::from(spanning_trees_by_enumeration(&g)),
                g.spanning_tree_count()
            );
        }
    }
}
