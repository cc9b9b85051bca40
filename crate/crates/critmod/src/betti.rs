//! Graded Betti numbers of the critical modules, counted combinatorially:
//! `beta[i, j + l]` is the number of acyclic orientations on connected
//! partition graphs of size `i` (i merges), with `m - j` edges and a unique
//! sink at the block containing the chosen sink vertex. `m` is the non-loop
//! edge count and `l` the loop count.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::orientation::enumerate_unique_sink;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub n: usize,
    pub nonloop_edges: usize,
    pub loops: usize,
    pub sink: usize,
    entries: BTreeMap<(usize, usize), u64>,
}

/// Serializes the table as sorted `[i, k, value]` triples plus metadata.
impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut out = s.serialize_struct("BettiTable", 5)?;
        out.serialize_field("n", &self.n)?;
        out.serialize_field("nonloop_edges", &self.nonloop_edges)?;
        out.serialize_field("loops", &self.loops)?;
        out.serialize_field("sink", &self.sink)?;
        out.serialize_field("betti", &self.triples())?;
        out.end()
    }
}

impl BettiTable {
    /// `beta[i, k]`; indices outside the stored support read as zero.
    pub fn get(&self, i: i64, k: i64) -> u64 {
        if i < 0 || k < 0 {
            return 0;
        }
        self.entries
            .get(&(i as usize, k as usize))
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero entries as sorted `[i, k, value]` triples.
    pub fn triples(&self) -> Vec<(usize, usize, u64)> {
        self.entries
            .iter()
            .filter(|(_, &v)| v > 0)
            .map(|(&(i, k), &v)| (i, k, v))
            .collect()
    }

    /// Largest `k` with a nonzero entry.
    pub fn max_degree(&self) -> usize {
        self.triples().iter().map(|&(_, k, _)| k).max().unwrap_or(0)
    }

    /// Alternating numbers: signed column sums of the table.
    pub fn alternating_numbers(&self, k_max: usize) -> Vec<i64> {
        (0..=k_max)
            .map(|k| {
                (0..self.n)
                    .map(|i| {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        sign * self.get(i as i64, k as i64) as i64
                    })
                    .sum()
            })
            .collect()
    }
}

pub fn betti_table(g: &Multigraph, sink: usize) -> BettiTable {
    let n = g.vertex_count();
    let m = g.nonloop_edge_count();
    let loops = g.loop_count();
    let mut entries: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for i in 0..n {
        for p in g.connected_partitions(i) {
            let pg = g
                .partition_graph(&p)
                .expect("connected partitions quotient to connected graphs");
            let j = m - pg.edge_count();
            let sink_block = p.block_of(sink);
            let count = enumerate_unique_sink(&Arc::new(pg), sink_block).len() as u64;
            if count > 0 {
                *entries.entry((i, j + loops)).or_insert(0) += count;
            }
        }
    }
    BettiTable {
        n,
        nonloop_edges: m,
        loops,
        sink,
        entries,
    }
}

pub fn alternating_numbers(g: &Multigraph, sink: usize, k_max: usize) -> Vec<i64> {
    betti_table(g, sink).alternating_numbers(k_max)
}

#[derive(Clone, Debug, Serialize)]
pub struct AltDcEntry {
    pub k: usize,
    pub lhs: i64,
    pub rhs: i64,
    pub ok: bool,
}

/// Deletion-contraction report for alternating numbers:
/// `A_k(G) + A_{k-1}(G/e) = A_k(G/e) + A_k(G - e)` at every degree.
#[derive(Clone, Debug, Serialize)]
pub struct AltDcReport {
    pub edge: (usize, usize),
    pub sink: usize,
    pub entries: Vec<AltDcEntry>,
    pub pass: bool,
}

/// Builds the three Betti tables for `g`, its contraction and its deletion
/// along `{u, v}`. The contraction's sink is the merged vertex.
fn surgery_tables(
    g: &Multigraph,
    u: usize,
    v: usize,
    sink: usize,
) -> Result<(BettiTable, BettiTable, BettiTable)> {
    if g.is_bridge(u, v)? {
        return Err(Error::BridgeEdge(u, v));
    }
    let (contracted, relab) = g.contract_edge(u, v)?;
    let deleted = g.delete_edge(u, v)?;
    Ok((
        betti_table(g, sink),
        betti_table(&contracted, relab[sink]),
        betti_table(&deleted, sink),
    ))
}

pub fn check_alt_deletion_contraction(g: &Multigraph, u: usize, v: usize) -> Result<AltDcReport> {
    let sink = v;
    let (tg, tc, td) = surgery_tables(g, u, v, sink)?;
    let k_max = tg.max_degree().max(tc.max_degree()).max(td.max_degree()) + 1;
    let ag = tg.alternating_numbers(k_max);
    let ac = tc.alternating_numbers(k_max);
    let ad = td.alternating_numbers(k_max);
    let mut pass = true;
    let entries = (0..=k_max)
        .map(|k| {
            let prev_c = if k == 0 { 0 } else { ac[k - 1] };
            let lhs = ag[k] + prev_c;
            let rhs = ac[k] + ad[k];
            let ok = lhs == rhs;
            pass &= ok;
            AltDcEntry { k, lhs, rhs, ok }
        })
        .collect();
    Ok(AltDcReport {
        edge: (u, v),
        sink,
        entries,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingEntry {
    pub i: usize,
    pub j: usize,
    pub beta_g: u64,
    pub beta_deleted: u64,
    pub ok: bool,
}

/// Scan report: wherever the four contraction entries
/// `beta[i,j], beta[i-1,j-1], beta[i-1,j], beta[i-2,j-1]` all vanish, the
/// table of `g` must agree with the table of the deletion at `(i, j)`.
#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub edge: (usize, usize),
    pub scanned: usize,
    pub hypothesis_cases: Vec<VanishingEntry>,
    pub pass: bool,
}

pub fn check_vanishing_implies_equality(
    g: &Multigraph,
    u: usize,
    v: usize,
) -> Result<VanishingReport> {
    let sink = v;
    let (tg, tc, td) = surgery_tables(g, u, v, sink)?;
    let i_hi = g.vertex_count() + 2;
    let k_hi = g.edge_count() + 2;
    let mut cases = Vec::new();
    let mut scanned = 0;
    let mut pass = true;
    for i in 0..=i_hi {
        for j in 0..=k_hi {
            scanned += 1;
            let (ii, jj) = (i as i64, j as i64);
            let hypothesis = tc.get(ii, jj) == 0
                && tc.get(ii - 1, jj - 1) == 0
                && tc.get(ii - 1, jj) == 0
                && tc.get(ii - 2, jj - 1) == 0;
            if !hypothesis {
                continue;
            }
            let beta_g = tg.get(ii, jj);
            let beta_deleted = td.get(ii, jj);
            let ok = beta_g == beta_deleted;
            pass &= ok;
            // Record the informative window of the scan; far outside the
            // support everything is zero on both sides.
            if beta_g > 0 || beta_deleted > 0 || (i <= g.vertex_count() && j <= g.edge_count() + 1)
            {
                cases.push(VanishingEntry {
                    i,
                    j,
                    beta_g,
                    beta_deleted,
                    ok,
                });
            }
        }
    }
    Ok(VanishingReport {
        edge: (u, v),
        scanned,
        hypothesis_cases: cases,
        pass,
    })
}
