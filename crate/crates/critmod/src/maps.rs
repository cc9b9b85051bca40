//! Generator-level graded module maps between specialized presentations:
//! the contraction maps (psi) and deletion maps (phi) for both critical
//! module families, plus the syzygy-preservation check that makes
//! well-definedness machine-checkable.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::orientation::{
    enumerate_unique_sink, is_contractible, lift, restrict_delete, Orientation, SinkClassTable,
};
use crate::presentation::{
    gpark_presentation, quotient_by_generator_multiples, relation_eliminator, specialize_to_re,
    toppling_presentation, DegreePiece, ModulePresentation, Term,
};

/// A graded map given by the images of the source generators; terms are
/// (monomial, target generator) pairs over GF(2).
#[derive(Clone, Debug, Serialize)]
pub struct MapSpec {
    pub source: ModulePresentation,
    pub target: ModulePresentation,
    pub images: Vec<Vec<Term>>,
}

impl MapSpec {
    /// Every image term must be homogeneous of its source generator's
    /// degree.
    pub fn is_degree_preserving(&self) -> bool {
        self.images.iter().enumerate().all(|(k, terms)| {
            let want = self.source.generators[k].degree;
            terms.iter().all(|t| {
                t.mono.iter().map(|&e| e as usize).sum::<usize>()
                    + self.target.generators[t.gen].degree
                    == want
            })
        })
    }

    /// Image of a GF(2) combination of source (monomial, generator) terms,
    /// expanded through the generator images and combined mod 2.
    pub fn image_of_terms(&self, terms: &[(Vec<u32>, usize)]) -> Vec<(Vec<u32>, usize)> {
        let mut out: Vec<(Vec<u32>, usize)> = Vec::new();
        for (mono, gen) in terms {
            for t in &self.images[*gen] {
                let combined: Vec<u32> = mono.iter().zip(&t.mono).map(|(a, b)| a + b).collect();
                out.push((combined, t.gen));
            }
        }
        out.sort();
        let mut reduced: Vec<(Vec<u32>, usize)> = Vec::new();
        for t in out {
            if reduced.last() == Some(&t) {
                reduced.pop();
            } else {
                reduced.push(t);
            }
        }
        reduced
    }

    /// The same map with the source replaced by its quotient by all
    /// multiples of `var` (used when the sequence's left term is that
    /// quotient).
    pub fn with_quotient_source(&self, var: usize) -> MapSpec {
        MapSpec {
            source: quotient_by_generator_multiples(&self.source, var),
            target: self.target.clone(),
            images: self.images.clone(),
        }
    }
}

/// A candidate map is well-defined exactly when it preserves a generating
/// set of the source's first syzygies: the image of every source relation of
/// degree at most `d_max` must lie in the target's relation subspace at that
/// degree. Degree preservation is checked first.
pub fn verify_map_spec(ms: &MapSpec, d_max: usize) -> bool {
    if !ms.is_degree_preserving() {
        return false;
    }
    let mut piece_cache: HashMap<usize, (DegreePiece, crate::gf2::Eliminator)> = HashMap::new();
    for rel in &ms.source.relations {
        let degree = ms.source.relation_degree(rel);
        if degree > d_max {
            continue;
        }
        let (piece, elim) = piece_cache.entry(degree).or_insert_with(|| {
            let piece = DegreePiece::new(&ms.target, degree);
            let elim = relation_eliminator(&ms.target, &piece);
            (piece, elim)
        });
        let image = ms.image_of_terms(
            &rel.iter()
                .map(|t| (t.mono.clone(), t.gen))
                .collect::<Vec<_>>(),
        );
        if !elim.contains(&piece.element(image)) {
            return false;
        }
    }
    true
}

struct EdgeContext {
    other: usize,
    merged: usize,
    mult: usize,
}

fn edge_context(g: &Multigraph, u: usize, v: usize, sink: usize) -> Result<EdgeContext> {
    if sink != u && sink != v {
        return Err(Error::SinkMismatch);
    }
    if g.is_bridge(u, v)? {
        return Err(Error::BridgeEdge(u, v));
    }
    Ok(EdgeContext {
        other: if sink == u { v } else { u },
        merged: u.min(v),
        mult: g.multiplicity(u, v),
    })
}

fn sorted_unique_sink(g: &Arc<Multigraph>, sink: usize) -> Vec<Orientation> {
    let mut oris = enumerate_unique_sink(g, sink);
    oris.sort_by_key(|o| o.label());
    oris
}

fn label_index(p: &ModulePresentation) -> HashMap<String, usize> {
    p.generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.label.clone(), i))
        .collect()
}

fn unit_mono(vars: usize, var: usize, power: u32) -> Vec<u32> {
    let mut m = vec![0u32; vars];
    m[var] = power;
    m
}

/// The contraction map for the G-parking family: the generator of the
/// contracted module lifts to `x_merged^(m-1)` times the lift that points
/// the non-sink endpoint at the sink. The source is the raw contracted
/// presentation; sequence verification quotients it by the merged variable.
pub fn build_psi0(g: &Arc<Multigraph>, u: usize, v: usize, sink: usize) -> Result<MapSpec> {
    let ctx = edge_context(g, u, v, sink)?;
    let (contracted, relab) = g.contract_edge(u, v)?;
    let contracted = Arc::new(contracted);
    let source = gpark_presentation(&contracted, relab[sink]);
    let target = specialize_to_re(&gpark_presentation(g, sink), u, v);
    let target_index = label_index(&target);
    let images = sorted_unique_sink(&contracted, relab[sink])
        .iter()
        .map(|a| {
            let plus = lift(a, g, ctx.other, sink, true)?;
            debug_assert!(plus.has_unique_sink_at(sink));
            Ok(vec![Term::new(
                unit_mono(target.var_count, ctx.merged, ctx.mult as u32 - 1),
                target_index[&plus.label()],
            )])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MapSpec {
        source,
        target,
        images,
    })
}

/// The deletion map for the G-parking family. With a single edge copy, a
/// generator maps to its deletion when the edge is not contractible on it
/// and to zero otherwise; with parallel copies every generator maps to its
/// deletion.
pub fn build_phi0(g: &Arc<Multigraph>, u: usize, v: usize, sink: usize) -> Result<MapSpec> {
    let ctx = edge_context(g, u, v, sink)?;
    let deleted = Arc::new(g.delete_edge(u, v)?);
    let source = specialize_to_re(&gpark_presentation(g, sink), u, v);
    let target = specialize_to_re(&gpark_presentation(&deleted, sink), u, v);
    let target_index = label_index(&target);
    let images = sorted_unique_sink(g, sink)
        .iter()
        .map(|a| {
            if ctx.mult == 1 && is_contractible(a, u, v) {
                return Ok(Vec::new());
            }
            let image = restrict_delete(a, u, v)?;
            debug_assert!(image.has_unique_sink_at(sink));
            Ok(vec![Term::new(
                vec![0; target.var_count],
                target_index[&image.label()],
            )])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MapSpec {
        source,
        target,
        images,
    })
}

/// The contraction map for the toppling family: a class generator maps to
/// `x_merged^(m-1)` times the sum of the classes of its two lifts. The two
/// classes can coincide, in which case the image is zero.
pub fn build_psi1(g: &Arc<Multigraph>, u: usize, v: usize, sink: usize) -> Result<MapSpec> {
    let ctx = edge_context(g, u, v, sink)?;
    let (contracted, relab) = g.contract_edge(u, v)?;
    let contracted = Arc::new(contracted);
    let source = toppling_presentation(&contracted, relab[sink]);
    let target = specialize_to_re(&toppling_presentation(g, sink), u, v);
    let target_index = label_index(&target);
    let table = SinkClassTable::new(g, sink);
    let images = sorted_unique_sink(&contracted, relab[sink])
        .iter()
        .map(|a| {
            let plus = lift(a, g, ctx.other, sink, true)?;
            let minus = lift(a, g, ctx.other, sink, false)?;
            let plus_idx = target_index[&table.canonical_rep(&plus).label()];
            let minus_idx = target_index[&table.canonical_rep(&minus).label()];
            if plus_idx == minus_idx {
                return Ok(Vec::new()); // x^k [A] + x^k [A] = 0 over GF(2)
            }
            let mono = unit_mono(target.var_count, ctx.merged, ctx.mult as u32 - 1);
            let mut terms = vec![
                Term::new(mono.clone(), plus_idx),
                Term::new(mono, minus_idx),
            ];
            terms.sort();
            Ok(terms)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MapSpec {
        source,
        target,
        images,
    })
}

/// The deletion map for the toppling family: a class generator maps to the
/// class of its deletion.
pub fn build_phi1(g: &Arc<Multigraph>, u: usize, v: usize, sink: usize) -> Result<MapSpec> {
    let _ctx = edge_context(g, u, v, sink)?;
    let deleted = Arc::new(g.delete_edge(u, v)?);
    let source = specialize_to_re(&toppling_presentation(g, sink), u, v);
    let target = specialize_to_re(&toppling_presentation(&deleted, sink), u, v);
    let target_index = label_index(&target);
    let table = SinkClassTable::new(&deleted, sink);
    let images = sorted_unique_sink(g, sink)
        .iter()
        .map(|a| {
            let image = restrict_delete(a, u, v)?;
            Ok(vec![Term::new(
                vec![0; target.var_count],
                target_index[&table.canonical_rep(&image).label()],
            )])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MapSpec {
        source,
        target,
        images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Arc<Multigraph> {
        Arc::new(Multigraph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap())
    }

    fn c4() -> Arc<Multigraph> {
        Arc::new(Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap())
    }

    fn banana_path() -> Arc<Multigraph> {
        Arc::new(Multigraph::new(3, vec![(0, 1), (0, 1), (0, 1), (1, 2)]).unwrap())
    }

    #[test]
    fn triangle_psi0_sends_generator_to_plus_lift() {
        let g = triangle();
        let psi = build_psi0(&g, 0, 1, 1).unwrap();
        assert_eq!(psi.source.generators.len(), 1);
        assert_eq!(psi.images.len(), 1);
        // Image is the m_e - 1 = 0 power times the lift with source 0:
        // the generator labeled 0>1 2>0 2>1, which sorts second.
        assert_eq!(psi.images[0], vec![Term::new(vec![0, 0], 1)]);
        assert!(psi.is_degree_preserving());
        assert!(verify_map_spec(&psi, 6));
        // Also well-defined from the quotient source.
        assert!(verify_map_spec(&psi.with_quotient_source(0), 6));
    }

    #[test]
    fn triangle_phi0_case_split() {
        let g = triangle();
        let phi = build_phi0(&g, 0, 1, 1).unwrap();
        // Generator 0 (0>1 0>2 2>1) keeps the edge non-contractible
        // (0 -> 2 -> 1 survives), so it maps to the deletion; generator 1
        // (0>1 2>0 2>1) is contractible on the edge, so it maps to zero.
        assert_eq!(phi.images[0], vec![Term::new(vec![0, 0], 0)]);
        assert_eq!(phi.images[1], Vec::new());
        assert!(verify_map_spec(&phi, 6));
    }

    #[test]
    fn triangle_toppling_maps() {
        let g = triangle();
        let psi = build_psi1(&g, 0, 1, 1).unwrap();
        assert_eq!(
            psi.images[0],
            vec![Term::new(vec![0, 0], 0), Term::new(vec![0, 0], 1)]
        );
        assert!(verify_map_spec(&psi, 6));
        let phi = build_phi1(&g, 0, 1, 1).unwrap();
        assert_eq!(phi.images[0], vec![Term::new(vec![0, 0], 0)]);
        assert_eq!(phi.images[1], vec![Term::new(vec![0, 0], 0)]);
        assert!(verify_map_spec(&phi, 6));
    }

    #[test]
    fn four_cycle_class_maps() {
        // On the four cycle with sink at the far vertex: three classes
        // upstairs, two in the contraction, one in the deletion.
        let g = c4();
        let psi = build_psi1(&g, 0, 3, 3).unwrap();
        assert_eq!(psi.source.generators.len(), 2);
        assert_eq!(psi.target.generators.len(), 3);
        // Each contracted class maps to a sum of two distinct classes, the
        // two sums share exactly one class, and every class is hit.
        let mut hit = [false; 3];
        let mut sums = Vec::new();
        for img in &psi.images {
            assert_eq!(img.len(), 2);
            let pair: Vec<usize> = img.iter().map(|t| t.gen).collect();
            for &i in &pair {
                hit[i] = true;
            }
            sums.push(pair);
        }
        assert!(hit.iter().all(|&h| h));
        let shared: Vec<_> = sums[0].iter().filter(|i| sums[1].contains(i)).collect();
        assert_eq!(shared.len(), 1);
        assert!(verify_map_spec(&psi, 6));

        let phi = build_phi1(&g, 0, 3, 3).unwrap();
        assert_eq!(phi.target.generators.len(), 1);
        for img in &phi.images {
            assert_eq!(img, &vec![Term::new(vec![0, 0, 0], 0)]);
        }
        assert!(verify_map_spec(&phi, 6));
    }

    #[test]
    fn multi_edge_psi0_carries_the_power() {
        let g = banana_path();
        let psi = build_psi0(&g, 0, 1, 1).unwrap();
        assert_eq!(psi.images[0], vec![Term::new(vec![2, 0], 0)]);
        assert!(verify_map_spec(&psi, 8));
        assert!(verify_map_spec(&psi.with_quotient_source(0), 8));
        let phi = build_phi0(&g, 0, 1, 1).unwrap();
        assert!(verify_map_spec(&phi, 8));
    }

    #[test]
    fn corrupted_psi0_fails_verification() {
        // Dropping the x_merged^(m-1) factor must fail: on the pure
        // multi-edge graph the quotient relation x_merged * [A] maps to
        // x_merged * [lift], which is not a relation downstairs.
        let g = Arc::new(Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap());
        let psi = build_psi0(&g, 0, 1, 1).unwrap();
        assert!(verify_map_spec(&psi.with_quotient_source(0), 8));
        let mut corrupted = psi.clone();
        for img in corrupted.images.iter_mut() {
            for t in img.iter_mut() {
                t.mono = vec![0; corrupted.target.var_count];
            }
        }
        assert!(!verify_map_spec(&corrupted.with_quotient_source(0), 8));
        // The same corruption on the banana-with-path graph also fails.
        let g = banana_path();
        let psi = build_psi0(&g, 0, 1, 1).unwrap();
        let mut corrupted = psi.clone();
        for img in corrupted.images.iter_mut() {
            for t in img.iter_mut() {
                t.mono = vec![0; corrupted.target.var_count];
            }
        }
        assert!(!verify_map_spec(&corrupted.with_quotient_source(0), 8));
    }

    #[test]
    fn bridge_and_sink_preconditions() {
        let path = Arc::new(Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap());
        assert_eq!(
            build_psi0(&path, 0, 1, 1).unwrap_err(),
            Error::BridgeEdge(0, 1)
        );
        let g = triangle();
        assert_eq!(build_phi0(&g, 0, 1, 2).unwrap_err(), Error::SinkMismatch);
        assert_eq!(build_psi1(&g, 0, 0, 0).unwrap_err(), Error::SameVertex(0));
    }
}
