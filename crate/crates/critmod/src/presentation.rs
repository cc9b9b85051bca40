//! Graded module presentations over GF(2) and their degree-wise linear
//! algebra.
//!
//! A presentation lists generators (labeled by orientations or orientation
//! classes, all in degree equal to the host's loop count) and homogeneous
//! relation vectors whose terms are (monomial, generator) pairs with
//! implicit GF(2) coefficients. Graded pieces are realized as finite bitset
//! matrices: the dimension at degree `t` is the ambient count minus the rank
//! of all monomial multiples of relations landing in degree `t`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::gf2::{Eliminator, Gf2Vec};
use crate::graph::{merge_relabel, Multigraph};
use crate::orientation::{enumerate_unique_sink, lift, Orientation, SinkClassTable};
use crate::series::HilbertData;

/// One GF(2) term: a monomial exponent vector times a generator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Term {
    pub mono: Vec<u32>,
    pub gen: usize,
}

impl Term {
    pub fn new(mono: Vec<u32>, gen: usize) -> Self {
        Term { mono, gen }
    }

    fn mono_degree(&self) -> usize {
        self.mono.iter().map(|&e| e as usize).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub label: String,
    pub degree: usize,
}

/// A graded presentation: free module on `generators` modulo the GF(2) span
/// of the monomial multiples of `relations`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulePresentation {
    pub var_count: usize,
    pub generators: Vec<Generator>,
    pub relations: Vec<Vec<Term>>,
}

impl ModulePresentation {
    /// Homogeneous degree of a relation (monomial degree plus generator
    /// degree, constant across its terms).
    pub fn relation_degree(&self, rel: &[Term]) -> usize {
        let d = rel[0].mono_degree() + self.generators[rel[0].gen].degree;
        debug_assert!(rel
            .iter()
            .all(|t| t.mono_degree() + self.generators[t.gen].degree == d));
        d
    }

    /// Per-degree relation counts, for cross-checking against Betti data.
    pub fn relation_degree_census(&self) -> HashMap<usize, usize> {
        let mut census = HashMap::new();
        for rel in &self.relations {
            *census.entry(self.relation_degree(rel)).or_insert(0) += 1;
        }
        census
    }
}

/// Monomials of the given total degree in `vars` variables, lexicographic.
pub fn monomials(vars: usize, degree: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; vars.max(1)];
    fn rec(vars: usize, pos: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == vars {
            current[pos] = left;
            out.push(current.clone());
            return;
        }
        for val in (0..=left).rev() {
            current[pos] = val;
            rec(vars, pos + 1, left - val, current, out);
        }
        current[pos] = 0;
    }
    if vars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(vars, 0, degree as u32, &mut current, &mut out);
    out
}

fn mono_add(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// The ambient basis of a graded piece: all (monomial, generator) pairs of
/// total degree `t`, with an index for building bit rows.
pub struct DegreePiece {
    pub degree: usize,
    pub basis: Vec<(Vec<u32>, usize)>,
    index: HashMap<(Vec<u32>, usize), usize>,
}

impl DegreePiece {
    pub fn new(p: &ModulePresentation, t: usize) -> Self {
        let mut basis = Vec::new();
        for (g, generator) in p.generators.iter().enumerate() {
            if generator.degree > t {
                continue;
            }
            for mono in monomials(p.var_count, t - generator.degree) {
                basis.push((mono, g));
            }
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        DegreePiece {
            degree: t,
            basis,
            index,
        }
    }

    pub fn dim_ambient(&self) -> usize {
        self.basis.len()
    }

    /// Bit vector of a GF(2) combination of (monomial, generator) terms;
    /// repeated terms cancel.
    pub fn element(&self, terms: impl IntoIterator<Item = (Vec<u32>, usize)>) -> Gf2Vec {
        let mut v = Gf2Vec::zeros(self.basis.len());
        for key in terms {
            let i = *self
                .index
                .get(&key)
                .expect("term lies in the expected graded piece");
            v.flip(i);
        }
        v
    }
}

/// All monomial multiples of the relations that land in degree `t`.
pub fn relation_rows(p: &ModulePresentation, piece: &DegreePiece) -> Vec<Gf2Vec> {
    let t = piece.degree;
    let mut rows = Vec::new();
    for rel in &p.relations {
        let d = p.relation_degree(rel);
        if d > t {
            continue;
        }
        for mult in monomials(p.var_count, t - d) {
            rows.push(
                piece.element(
                    rel.iter()
                        .map(|term| (mono_add(&term.mono, &mult), term.gen)),
                ),
            );
        }
    }
    rows
}

/// Eliminator loaded with the relation subspace at the piece's degree.
pub fn relation_eliminator(p: &ModulePresentation, piece: &DegreePiece) -> Eliminator {
    let mut elim = Eliminator::new(piece.dim_ambient());
    for row in relation_rows(p, piece) {
        elim.add(row);
    }
    elim
}

/// Dimension of the graded piece of the quotient at degree `t`.
pub fn graded_dim(p: &ModulePresentation, t: usize) -> usize {
    let piece = DegreePiece::new(p, t);
    let elim = relation_eliminator(p, &piece);
    piece.dim_ambient() - elim.rank()
}

/// Hilbert coefficients of the quotient for `t = 0..=truncation`.
pub fn hilbert_function(p: &ModulePresentation, truncation: usize) -> HilbertData {
    HilbertData {
        h: (0..=truncation).map(|t| graded_dim(p, t) as u64).collect(),
    }
}

/// Standard presentation of the G-parking critical module: generators are
/// the unique-sink acyclic orientations, relations come from acyclic
/// orientations on single-merge partition graphs via the three-case lift
/// split.
pub fn gpark_presentation(g: &Arc<Multigraph>, sink: usize) -> ModulePresentation {
    let twist = g.loop_count();
    let (generators, index) = generator_list(g, sink, twist);
    let mut relations = Vec::new();
    for &(i, j, mult) in g.pairs() {
        let (pg, relab) = g.contract_pair(i, j).expect("adjacent pair");
        let pg = Arc::new(pg);
        let sink_block = relab[sink];
        for a in enumerate_unique_sink(&pg, sink_block) {
            let plus = lift(&a, g, i, j, true).expect("lift of contraction orientation");
            let minus = lift(&a, g, i, j, false).expect("lift of contraction orientation");
            let plus_ok = plus.has_unique_sink_at(sink);
            let minus_ok = minus.has_unique_sink_at(sink);
            let mut mono_i = vec![0u32; g.vertex_count()];
            mono_i[i] = mult as u32;
            let mut mono_j = vec![0u32; g.vertex_count()];
            mono_j[j] = mult as u32;
            let rel = match (plus_ok, minus_ok) {
                (true, false) => vec![Term::new(mono_i, index[&plus.label()])],
                (false, true) => vec![Term::new(mono_j, index[&minus.label()])],
                (true, true) => vec![
                    Term::new(mono_i, index[&plus.label()]),
                    Term::new(mono_j, index[&minus.label()]),
                ],
                (false, false) => {
                    unreachable!("one lift of a unique-sink orientation keeps the sink")
                }
            };
            relations.push(rel);
        }
    }
    ModulePresentation {
        var_count: g.vertex_count(),
        generators,
        relations,
    }
}

/// Standard presentation of the toppling critical module: generators are
/// orientation classes (canonical unique-sink representatives), one relation
/// per adjacent pair and class of orientations on the merged graph:
/// `x_i^m [A+] + x_j^m [A-]`.
pub fn toppling_presentation(g: &Arc<Multigraph>, sink: usize) -> ModulePresentation {
    let twist = g.loop_count();
    let table = SinkClassTable::new(g, sink);
    let (generators, index) = generator_list(g, sink, twist);
    let mut relations = Vec::new();
    for &(i, j, mult) in g.pairs() {
        let (pg, relab) = g.contract_pair(i, j).expect("adjacent pair");
        let pg = Arc::new(pg);
        let sink_block = relab[sink];
        // Unique-sink representatives enumerate the classes of the merged
        // graph; the class of each lift does not depend on this choice.
        for a in enumerate_unique_sink(&pg, sink_block) {
            let plus = lift(&a, g, i, j, true).expect("lift of contraction orientation");
            let minus = lift(&a, g, i, j, false).expect("lift of contraction orientation");
            let plus_rep = table.canonical_rep(&plus);
            let minus_rep = table.canonical_rep(&minus);
            let mut mono_i = vec![0u32; g.vertex_count()];
            mono_i[i] = mult as u32;
            let mut mono_j = vec![0u32; g.vertex_count()];
            mono_j[j] = mult as u32;
            relations.push(vec![
                Term::new(mono_i, index[&plus_rep.label()]),
                Term::new(mono_j, index[&minus_rep.label()]),
            ]);
        }
    }
    ModulePresentation {
        var_count: g.vertex_count(),
        generators,
        relations,
    }
}

/// Generators sorted by orientation label, plus the label-to-index map.
fn generator_list(
    g: &Arc<Multigraph>,
    sink: usize,
    twist: usize,
) -> (Vec<Generator>, HashMap<String, usize>) {
    let mut oris: Vec<Orientation> = enumerate_unique_sink(g, sink);
    oris.sort_by_key(|o| o.label());
    let generators: Vec<Generator> = oris
        .iter()
        .map(|o| Generator {
            label: o.label(),
            degree: twist,
        })
        .collect();
    let index = generators
        .iter()
        .enumerate()
        .map(|(i, gen)| (gen.label.clone(), i))
        .collect();
    (generators, index)
}

/// Folds a monomial's coordinates `i1, i2` into one (merged at the smaller
/// index, higher indices compacted down).
pub fn fold_mono(mono: &[u32], i1: usize, i2: usize) -> Vec<u32> {
    let relab = merge_relabel(mono.len(), i1, i2);
    let mut out = vec![0u32; mono.len() - 1];
    for (v, &e) in mono.iter().enumerate() {
        out[relab[v]] += e;
    }
    out
}

/// Tensors the presentation with the quotient by the linear form
/// `x_{i1} - x_{i2}`: every monomial folds the two coordinates into one.
/// Terms that become equal cancel in pairs; relations that vanish entirely
/// are dropped.
pub fn specialize_to_re(p: &ModulePresentation, i1: usize, i2: usize) -> ModulePresentation {
    let relations = p
        .relations
        .iter()
        .filter_map(|rel| {
            let mut terms: Vec<Term> = rel
                .iter()
                .map(|t| Term::new(fold_mono(&t.mono, i1, i2), t.gen))
                .collect();
            terms.sort();
            let mut reduced: Vec<Term> = Vec::new();
            for t in terms {
                if reduced.last() == Some(&t) {
                    reduced.pop();
                } else {
                    reduced.push(t);
                }
            }
            if reduced.is_empty() {
                None
            } else {
                Some(reduced)
            }
        })
        .collect();
    ModulePresentation {
        var_count: p.var_count - 1,
        generators: p.generators.clone(),
        relations,
    }
}

/// Adds the relations `x_var * generator` for every generator, presenting
/// the quotient by all multiples of that variable.
pub fn quotient_by_generator_multiples(p: &ModulePresentation, var: usize) -> ModulePresentation {
    let mut q = p.clone();
    for g in 0..p.generators.len() {
        let mut mono = vec![0u32; p.var_count];
        mono[var] = 1;
        q.relations.push(vec![Term::new(mono, g)]);
    }
    q
}

/// Is multiplication by the sum of the named variables injective on every
/// graded piece up to `d_max`? Over GF(2) the form `x_a - x_b` is `x_a + x_b`.
pub fn nzd_check(p: &ModulePresentation, form_vars: &[usize], d_max: usize) -> bool {
    for t in 0..=d_max {
        let piece_t = DegreePiece::new(p, t);
        let elim_t = relation_eliminator(p, &piece_t);
        let dim_t = piece_t.dim_ambient() - elim_t.rank();
        let piece_up = DegreePiece::new(p, t + 1);
        let mut elim_up = relation_eliminator(p, &piece_up);
        let base_rank = elim_up.rank();
        let mut image_rank = 0;
        for (mono, gen) in &piece_t.basis {
            let terms = form_vars.iter().map(|&v| {
                let mut m = mono.clone();
                m[v] += 1;
                (m, *gen)
            });
            if elim_up.add(piece_up.element(terms)) {
                image_rank += 1;
            }
        }
        let _ = base_rank;
        if image_rank != dim_t {
            return false;
        }
    }
    true
}
