//! Dense GF(2) vectors and incremental Gaussian elimination.
//!
//! Rows are bitsets packed into `u64` words. The eliminator keeps its pivot
//! rows fully reduced, so membership tests and rank queries are a single
//! reduction pass.

/// A GF(2) row vector of fixed width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Vec {
    words: Vec<u64>,
    len: usize,
}

impl Gf2Vec {
    pub fn zeros(len: usize) -> Self {
        Gf2Vec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Toggles bit `i` (addition of the `i`-th unit vector).
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Gf2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Index of the lowest set bit, if any.
    pub fn leading_bit(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

/// Incremental row eliminator over GF(2).
///
/// Pivot rows are indexed by their leading bit; every inserted row is reduced
/// against the current pivots before being adopted.
#[derive(Clone, Debug)]
pub struct Eliminator {
    width: usize,
    pivots: Vec<(usize, Gf2Vec)>,
}

impl Eliminator {
    pub fn new(width: usize) -> Self {
        Eliminator {
            width,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut v: Gf2Vec) -> Gf2Vec {
        for (lead, row) in &self.pivots {
            if v.get(*lead) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Inserts `v`; returns true when it enlarged the row space.
    pub fn add(&mut self, v: Gf2Vec) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let v = self.reduce(v);
        match v.leading_bit() {
            None => false,
            Some(lead) => {
                // Keep pivots sorted by leading bit so reduction is one pass.
                let pos = self.pivots.partition_point(|(l, _)| *l < lead);
                self.pivots.insert(pos, (lead, v));
                true
            }
        }
    }

    /// Does `v` lie in the current row space?
    pub fn contains(&self, v: &Gf2Vec) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}

/// Rank of an arbitrary set of rows.
pub fn rank(width: usize, rows: impl IntoIterator<Item = Gf2Vec>) -> usize {
    let mut elim = Eliminator::new(width);
    for row in rows {
        elim.add(row);
    }
    elim.rank()
}
