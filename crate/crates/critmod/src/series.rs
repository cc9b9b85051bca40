//! Hilbert-coefficient calculators: the parking quotient via monomial
//! counting, the toppling quotient via divisor classes of nonnegative rank,
//! the degree-(g-1+k) class counts behind the lattice-module description of
//! the toppling critical module, and K-polynomial extraction.

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::divisor::{picard_classes, rank, superstables as superstable_divisors};
use crate::error::{Error, Result};
use crate::graph::Multigraph;

/// Hilbert coefficients `h_0 .. h_D` of a Krull-dimension-one module.
///
/// Serializes as `{"h": [...], "k_polynomial": [...]}` with the K-polynomial
/// null when the coefficients have not stabilized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub h: Vec<u64>,
}

impl Serialize for HilbertData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut out = s.serialize_struct("HilbertData", 2)?;
        out.serialize_field("h", &self.h)?;
        out.serialize_field("k_polynomial", &self.k_polynomial().ok())?;
        out.end()
    }
}

impl HilbertData {
    pub fn truncation_degree(&self) -> usize {
        self.h.len() - 1
    }

    /// Extracts `K` with `K(t)/(1-t)` matching all supplied coefficients.
    /// Fails unless the trailing difference vanishes.
    pub fn k_polynomial(&self) -> Result<Vec<i64>> {
        k_polynomial_from(self)
    }
}

/// One exponent vector per nonempty subset `S` of the non-sink vertices:
/// coordinate `v` is the number of edges from `v` to the complement of `S`
/// for `v` in `S`, zero otherwise. Subsets in ascending bitmask order.
pub fn parking_monomial_generators(g: &Multigraph, q: usize) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
    let mut out = Vec::new();
    for mask in 1u64..(1 << others.len()) {
        let mut inside = vec![false; n];
        for (i, &v) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                inside[v] = true;
            }
        }
        let mut exps = vec![0u32; n];
        for v in 0..n {
            if inside[v] {
                exps[v] = g.edges_leaving(v, &inside) as u32;
            }
        }
        out.push(exps);
    }
    out
}

/// Exponent vectors escaping every parking generator; exactly as many as
/// spanning trees. The sink coordinate is zero.
pub fn superstables(g: &Multigraph, q: usize) -> Vec<Vec<u32>> {
    superstable_divisors(g, q)
        .into_iter()
        .map(|d| d.coeffs().iter().map(|&c| c as u32).collect())
        .collect()
}

fn dominates(c: &[u32], gen: &[u32]) -> bool {
    c.iter().zip(gen).all(|(a, b)| a >= b)
}

/// Hilbert function of the parking quotient: `h_d` counts degree-`d`
/// monomials outside the parking ideal. Computed by direct enumeration with
/// domination tests against the generator list (the sink variable absorbs
/// any remaining degree).
pub fn hilb_parking(g: &Multigraph, q: usize, truncation: usize) -> HilbertData {
    let n = g.vertex_count();
    let gens = parking_monomial_generators(g, q);
    let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
    // Off-sink degrees of the surviving monomials; a coordinate at degree(v)
    // or more is already divisible by the singleton generator.
    let mut survivor_degrees: Vec<u64> = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(
        g: &Multigraph,
        others: &[usize],
        gens: &[Vec<u32>],
        pos: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<u64>,
    ) {
        if pos == others.len() {
            if !gens.iter().any(|gen| dominates(current, gen)) {
                out.push(current.iter().map(|&c| c as u64).sum());
            }
            return;
        }
        let v = others[pos];
        for val in 0..g.degree(v) as u32 {
            current[v] = val;
            rec(g, others, gens, pos + 1, current, out);
        }
        current[v] = 0;
    }
    rec(g, &others, &gens, 0, &mut current, &mut survivor_degrees);
    let h = (0..=truncation as u64)
        .map(|d| survivor_degrees.iter().filter(|&&s| s <= d).count() as u64)
        .collect();
    HilbertData { h }
}

/// Hilbert coefficient of the toppling quotient at degree `d`: the number of
/// divisor classes of degree `d` and nonnegative rank.
pub fn hilb_toppling(g: &Multigraph, d: i64) -> u64 {
    picard_classes(g, d, 0)
        .iter()
        .filter(|c| rank(g, &c.reduced, 0) >= 0)
        .count() as u64
}

/// The toppling quotient's Hilbert function up to `truncation`.
pub fn hilb_toppling_data(g: &Multigraph, truncation: usize) -> HilbertData {
    HilbertData {
        h: (0..=truncation as i64)
            .map(|d| hilb_toppling(g, d))
            .collect(),
    }
}

/// Coefficient `h_k` counts divisor classes of degree `g - 1 + k` whose rank
/// is exactly `k - 1` — the graded dimensions of the lattice-module
/// realization of the toppling critical module (loopless host).
pub fn bsc_coefficients(g: &Multigraph, q: usize, truncation: usize) -> HilbertData {
    let genus = g.genus() as i64;
    let h = (0..=truncation as i64)
        .map(|k| {
            picard_classes(g, genus - 1 + k, q)
                .iter()
                .filter(|c| rank(g, &c.reduced, q) == k - 1)
                .count() as u64
        })
        .collect();
    HilbertData { h }
}

/// Difference extraction `k_t = h_t - h_{t-1}`, valid once the coefficients
/// have stabilized; errors when the trailing difference is nonzero.
pub fn k_polynomial_from(data: &HilbertData) -> Result<Vec<i64>> {
    let h = &data.h;
    if h.len() < 2 || h[h.len() - 1] != h[h.len() - 2] {
        return Err(Error::NotStabilized);
    }
    let mut k: Vec<i64> = Vec::with_capacity(h.len());
    let mut prev = 0i64;
    for &coeff in h {
        k.push(coeff as i64 - prev);
        prev = coeff as i64;
    }
    while k.len() > 1 && *k.last().unwrap() == 0 {
        k.pop();
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Multigraph {
        Multigraph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn parking_generators_triangle() {
        // Sink at vertex 1: x0^2, x2^2, x0 x2.
        let gens = parking_monomial_generators(&triangle(), 1);
        assert_eq!(gens.len(), 3);
        assert!(gens.contains(&vec![2, 0, 0]));
        assert!(gens.contains(&vec![0, 0, 2]));
        assert!(gens.contains(&vec![1, 0, 1]));
    }

    #[test]
    fn parking_generators_small_graphs() {
        let edge = Multigraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(parking_monomial_generators(&edge, 1), vec![vec![1, 0]]);

        let path = Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let gens = parking_monomial_generators(&path, 1);
        assert_eq!(gens.len(), 3);
        assert!(gens.contains(&vec![1, 0, 0]));
        assert!(gens.contains(&vec![0, 0, 1]));
        assert!(gens.contains(&vec![1, 0, 1]));
    }

    #[test]
    fn superstables_triangle() {
        let s = superstables(&triangle(), 1);
        assert_eq!(s, vec![vec![0, 0, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        // A tree has only the zero vector.
        let path = Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(superstables(&path, 1), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn parking_hilbert_function() {
        let h = hilb_parking(&triangle(), 1, 4);
        assert_eq!(h.h, vec![1, 3, 3, 3, 3]);
    }

    #[test]
    fn toppling_hilbert_function() {
        let g = triangle();
        assert_eq!(hilb_toppling(&g, 0), 1);
        assert_eq!(hilb_toppling(&g, 1), 3);
        for d in 1..=4 {
            assert_eq!(hilb_toppling(&g, d), 3); // N_G for d >= g
        }
        assert_eq!(hilb_toppling(&g, -1), 0);
    }

    #[test]
    fn parking_and_toppling_agree_degreewise() {
        let graphs = [
            triangle(),
            Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap(),
            Multigraph::new(3, vec![(0, 1), (0, 1), (0, 2), (1, 2)]).unwrap(),
        ];
        for g in graphs {
            let d_max = g.genus() + 3;
            let park = hilb_parking(&g, 1, d_max);
            let top = hilb_toppling_data(&g, d_max);
            assert_eq!(park, top, "{:?}", g);
        }
    }

    #[test]
    fn bsc_coefficients_triangle() {
        let b = bsc_coefficients(&triangle(), 1, 4);
        assert_eq!(b.h, vec![2, 3, 3, 3, 3]);
        assert_eq!(b.k_polynomial().unwrap(), vec![2, 1]);
    }

    #[test]
    fn bsc_degree_is_genus() {
        for g in [
            triangle(),
            Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap(),
        ] {
            let b = bsc_coefficients(&g, 1, g.genus() + 3);
            let k = b.k_polynomial().unwrap();
            assert_eq!(k.len() - 1, g.genus());
        }
    }

    #[test]
    fn k_polynomial_extraction() {
        assert_eq!(
            k_polynomial_from(&HilbertData { h: vec![1, 1, 1] }).unwrap(),
            vec![1]
        );
        assert_eq!(
            k_polynomial_from(&HilbertData { h: vec![2, 3, 3] }).unwrap(),
            vec![2, 1]
        );
        assert_eq!(
            k_polynomial_from(&HilbertData { h: vec![1, 2, 2] }).unwrap(),
            vec![1, 1]
        );
        assert_eq!(
            k_polynomial_from(&HilbertData { h: vec![1, 2, 3] }),
            Err(Error::NotStabilized)
        );
    }
}
