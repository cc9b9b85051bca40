//! Exact Tutte polynomials by memoized deletion-contraction.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::graph::Multigraph;

/// A bivariate polynomial with nonnegative big-integer coefficients and no
/// stored zeros, keyed by `(x-degree, y-degree)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigUint>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::monomial(0, 0)
    }

    pub fn monomial(i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((i, j), BigUint::one());
        BiPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigUint)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigUint {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let e = terms.entry(*k).or_default();
            *e += c;
        }
        terms.retain(|_, c| !c.is_zero());
        BiPoly { terms }
    }

    /// Multiplies by the monomial `x^i y^j`.
    pub fn shift(&self, i: u32, j: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + i, b + j), c.clone()))
                .collect(),
        }
    }

    /// Builds from signed coefficients, rejecting negatives and dropping
    /// zeros. Used by the corank-nullity oracle.
    pub fn from_signed(map: BTreeMap<(u32, u32), BigInt>) -> BiPoly {
        let mut terms = BTreeMap::new();
        for (k, c) in map {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = c.into_parts();
            assert!(
                sign != num_bigint::Sign::Minus,
                "negative coefficient in a Tutte polynomial"
            );
            terms.insert(k, mag);
        }
        BiPoly { terms }
    }

    /// Evaluation at `x = 1`: the coefficients of the polynomial in `t = y`,
    /// ascending, with trailing zeros trimmed.
    pub fn eval_x1(&self) -> Vec<BigUint> {
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let mut out = vec![BigUint::zero(); max_j as usize + 1];
        for (&(_, j), c) in &self.terms {
            out[j as usize] += c;
        }
        while out.len() > 1 && out.last().unwrap().is_zero() {
            out.pop();
        }
        out
    }

    pub fn eval(&self, x: i64, y: i64) -> BigInt {
        let mut total = BigInt::zero();
        for (&(i, j), c) in &self.terms {
            total += BigInt::from(c.clone()) * BigInt::from(x).pow(i) * BigInt::from(y).pow(j);
        }
        total
    }

    /// Sorted `[i, j, coefficient-string]` triples.
    pub fn serialize_triples(&self) -> Vec<(u32, u32, String)> {
        self.terms
            .iter()
            .map(|(&(i, j), c)| (i, j, c.to_string()))
            .collect()
    }
}

#[derive(Serialize)]
struct BiPolyTriples(Vec<(u32, u32, String)>);

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BiPolyTriples(self.serialize_triples()).serialize(s)
    }
}

/// Memo key: vertex count plus the sorted edge multiset.
type MemoKey = (usize, Vec<(usize, usize)>);

/// Memoized deletion-contraction. Loops factor out as `y`, bridges as `x`,
/// and otherwise `T(G) = T(G - e) + T(G / e)` on the first non-loop,
/// non-bridge edge in sorted order. The memo table is keyed by the sorted
/// edge multiset and confined to one computation.
pub fn tutte_polynomial(g: &Multigraph) -> BiPoly {
    let mut memo: HashMap<MemoKey, BiPoly> = HashMap::new();
    tutte_rec(g, &mut memo)
}

fn tutte_rec(g: &Multigraph, memo: &mut HashMap<MemoKey, BiPoly>) -> BiPoly {
    if g.edge_count() == 0 {
        return BiPoly::one();
    }
    let key = (g.vertex_count(), g.edges().to_vec());
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let recursion_edge = g
        .pairs()
        .iter()
        .map(|&(u, v, _)| (u, v))
        .find(|&(u, v)| !g.is_bridge(u, v).expect("adjacent pair"));
    let result = match recursion_edge {
        Some((u, v)) => {
            let deleted = g
                .delete_edge(u, v)
                .expect("non-bridge deletion stays connected");
            let (contracted, _) = g.contract_edge(u, v).expect("adjacent pair");
            tutte_rec(&deleted, memo).add(&tutte_rec(&contracted, memo))
        }
        // Everything left is a bridge or a loop.
        None => BiPoly::monomial(g.nonloop_edge_count() as u32, g.loop_count() as u32),
    };
    memo.insert(key, result.clone());
    result
}

/// `T(1, t)` as an ascending integer coefficient vector.
pub fn tutte_eval_1_t(g: &Multigraph) -> Vec<BigUint> {
    tutte_polynomial(g).eval_x1()
}

pub fn tutte_eval(g: &Multigraph, x: i64, y: i64) -> BigInt {
    tutte_polynomial(g).eval(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::tutte_corank_nullity;
    use crate::orientation::enumerate_unique_sink;
    use std::sync::Arc;

    fn triangle() -> Multigraph {
        Multigraph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn check_against_oracle(g: &Multigraph) {
        assert_eq!(tutte_polynomial(g), tutte_corank_nullity(g), "{:?}", g);
    }

    #[test]
    fn triangle_polynomial() {
        // x^2 + x + y
        let t = tutte_polynomial(&triangle());
        assert_eq!(t.coeff(2, 0), 1u32.into());
        assert_eq!(t.coeff(1, 0), 1u32.into());
        assert_eq!(t.coeff(0, 1), 1u32.into());
        assert_eq!(t.terms().count(), 3);
        check_against_oracle(&triangle());
    }

    #[test]
    fn four_cycle_polynomial() {
        let c4 = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let t = tutte_polynomial(&c4);
        for (i, j) in [(3, 0), (2, 0), (1, 0), (0, 1)] {
            assert_eq!(t.coeff(i, j), 1u32.into());
        }
        assert_eq!(t.terms().count(), 4);
        check_against_oracle(&c4);
    }

    #[test]
    fn trees_with_loops() {
        // A tree with k edges and l loops has Tutte polynomial x^k y^l.
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 0), (2, 2)]).unwrap();
        let t = tutte_polynomial(&g);
        assert_eq!(t, BiPoly::monomial(2, 2));
        check_against_oracle(&g);
    }

    #[test]
    fn banana_evaluation() {
        // Two vertices, m parallel edges, l loops: T(1,t) = t^l (1 + ... + t^(m-1)).
        let g = Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1), (1, 1)]).unwrap();
        let p = tutte_eval_1_t(&g);
        let coeffs: Vec<u64> = vec![0, 1, 1, 1];
        assert_eq!(p, coeffs.into_iter().map(BigUint::from).collect::<Vec<_>>());
        check_against_oracle(&g);
    }

    #[test]
    fn evaluations_count_orientations_and_trees() {
        let graphs = [
            triangle(),
            Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap(),
            Multigraph::new(3, vec![(0, 1), (0, 1), (0, 2), (1, 2)]).unwrap(),
        ];
        for g in graphs {
            assert_eq!(tutte_eval(&g, 1, 1), g.spanning_tree_count());
            let arc = Arc::new(g.clone());
            let unique_sink = enumerate_unique_sink(&arc, 0).len();
            assert_eq!(tutte_eval(&g, 1, 0), BigInt::from(unique_sink));
        }
    }

    #[test]
    fn deletion_contraction_recomposes() {
        let g = Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let (u, v) = (0, 1);
        assert!(!g.is_bridge(u, v).unwrap());
        let lhs = tutte_polynomial(&g);
        let rhs = tutte_polynomial(&g.delete_edge(u, v).unwrap())
            .add(&tutte_polynomial(&g.contract_edge(u, v).unwrap().0));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn triangle_merino_evaluation() {
        let p = tutte_eval_1_t(&triangle());
        assert_eq!(p, vec![BigUint::from(2u32), BigUint::from(1u32)]);
    }
}
