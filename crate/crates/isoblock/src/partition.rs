//! Set partitions of `{1..n}` in canonical form, with the lattice
//! operations (refinement, meet, join) and the block-index coarsening maps
//! that let a partition of blocks stand in for a partition of indices.
//!
//! Orientation: `meet` is the finest common *coarsening* (connected
//! components of the shared-block graph) and `join` is the coarsest common
//! *refinement* (non-empty pairwise intersections). The all-singletons
//! partition is neutral for `meet`, the single-block partition for `join`.
//!
//! Indices are 1-based at the serialization boundary (JSON, `Display`) and
//! 0-based in the in-memory API, matching how the rest of the crate indexes
//! matrices.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// A set partition of `{1..n}` in canonical form: each block sorted
/// ascending, blocks ordered by smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>, // 0-based
    block_of: Vec<usize>,
}

impl Partition {
    /// Validate 1-based index sets as a partition of `{1..n}` and put them
    /// in canonical form.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("partition size must be at least 1".into()));
        }
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::EmptyBlock);
            }
            for &idx in block {
                if idx == 0 || idx > n {
                    return Err(Error::Range { index: idx, n });
                }
                if block_of[idx - 1] != usize::MAX {
                    return Err(Error::Overlap { index: idx });
                }
                block_of[idx - 1] = b;
            }
        }
        if let Some(missing) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::Coverage { index: missing + 1 });
        }
        Ok(Self::from_labels(&block_of))
    }

    /// Canonicalize an arbitrary labelling `index -> class id`.
    pub(crate) fn from_labels(labels: &[usize]) -> Self {
        let n = labels.len();
        assert!(n > 0, "partition size must be at least 1");
        let mut first_seen: Vec<(usize, usize)> = Vec::new(); // (label, block slot)
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = vec![0usize; n];
        for (i, &lab) in labels.iter().enumerate() {
            let slot = match first_seen.iter().find(|(l, _)| *l == lab) {
                Some(&(_, s)) => s,
                None => {
                    first_seen.push((lab, blocks.len()));
                    blocks.push(Vec::new());
                    blocks.len() - 1
                }
            };
            blocks[slot].push(i);
            block_of[i] = slot;
        }
        // indices were visited in order, so blocks are sorted and ordered by
        // their minimum already
        Partition { n, blocks, block_of }
    }

    /// The maximum element `π_∨`: every index its own block.
    pub fn singletons(n: usize) -> Self {
        assert!(n > 0, "partition size must be at least 1");
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    /// The minimum element `π_∧`: one block holding everything.
    pub fn single_block(n: usize) -> Self {
        assert!(n > 0, "partition size must be at least 1");
        Self::from_labels(&vec![0; n])
    }

    /// Size of the underlying index set.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Number of blocks `m`.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks as sorted 0-based index sets, ordered by smallest element.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block id containing 0-based index `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    /// Block cardinalities `|I_1|, …, |I_m|`.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Blocks as 1-based index sets, the external form.
    pub fn blocks_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|i| i + 1).collect())
            .collect()
    }

    fn check_same_size(&self, other: &Partition, what: &str) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{what}: partitions of {} and {} elements",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Does every block of `self` lie inside a block of `coarser`?
    pub fn refines(&self, coarser: &Partition) -> Result<bool> {
        self.check_same_size(coarser, "refines")?;
        Ok(self.blocks.iter().all(|block| {
            let target = coarser.block_of[block[0]];
            block.iter().all(|&i| coarser.block_of[i] == target)
        }))
    }

    /// Finest common coarsening: connected components of the graph joining
    /// indices that share a block in either partition.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_same_size(other, "meet")?;
        let mut uf = UnionFind::new(self.n);
        for part in [self, other] {
            for block in &part.blocks {
                for w in block.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
        Ok(Self::from_labels(&uf.labels()))
    }

    /// Coarsest common refinement: non-empty pairwise block intersections.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_same_size(other, "join")?;
        let mut pair_label = std::collections::HashMap::new();
        let mut labels = vec![0usize; self.n];
        for i in 0..self.n {
            let key = (self.block_of[i], other.block_of[i]);
            let next = pair_label.len();
            labels[i] = *pair_label.entry(key).or_insert(next);
        }
        Ok(Self::from_labels(&labels))
    }

    /// Push a coarsening of `self` down to a partition of `self`'s block
    /// indices `{1..m}`: blocks of the result group those blocks of `self`
    /// that `coarser` merges.
    pub fn coarsen_down(&self, coarser: &Partition) -> Result<Partition> {
        self.check_same_size(coarser, "coarsen_down")?;
        if !self.refines(coarser)? {
            return Err(Error::NotACoarsening);
        }
        let labels: Vec<usize> = self
            .blocks
            .iter()
            .map(|block| coarser.block_of[block[0]])
            .collect();
        Ok(Self::from_labels(&labels))
    }

    /// Inverse of [`coarsen_down`](Self::coarsen_down): merge the blocks of
    /// `self` according to a partition of `{1..m}`.
    pub fn lift_up(&self, small: &Partition) -> Result<Partition> {
        if small.n != self.num_blocks() {
            return Err(Error::DimensionMismatch(format!(
                "lift_up: partition of {} elements applied to {} blocks",
                small.n,
                self.num_blocks()
            )));
        }
        let mut labels = vec![0usize; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                labels[i] = small.block_of[b];
            }
        }
        Ok(Self::from_labels(&labels))
    }

    /// The weight matrix `W` (n×m incidence), `D = WᵀW` (diagonal block
    /// sizes) and `J = WWᵀ` (1 exactly where two indices share a block).
    pub fn weight_matrices(&self) -> (CMatrix, CMatrix, CMatrix) {
        let (n, m) = (self.n, self.num_blocks());
        let one = Complex64::new(1.0, 0.0);
        let mut w = CMatrix::zeros(n, m);
        for i in 0..n {
            w[(i, self.block_of[i])] = one;
        }
        let mut d = CMatrix::zeros(m, m);
        for (j, block) in self.blocks.iter().enumerate() {
            d[(j, j)] = Complex64::new(block.len() as f64, 0.0);
        }
        let mut jmat = CMatrix::zeros(n, n);
        for p in 0..n {
            for q in 0..n {
                if self.block_of[p] == self.block_of[q] {
                    jmat[(p, q)] = one;
                }
            }
        }
        (w, d, jmat)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, block) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (l, i) in block.iter().enumerate() {
                if l > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionRepr {
            n: self.n,
            blocks: self.blocks_one_based(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PartitionRepr::deserialize(deserializer)?;
        Partition::from_blocks(repr.n, &repr.blocks).map_err(serde::de::Error::custom)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, x: usize, y: usize) {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }

    pub(crate) fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|i| self.find(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, blocks: &[&[usize]]) -> Partition {
        let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        Partition::from_blocks(n, &blocks).unwrap()
    }

    #[test]
    fn validate_canonicalizes() {
        // scrambled input, canonical output
        let part = Partition::from_blocks(6, &[vec![5, 3], vec![4], vec![6, 2, 1]]).unwrap();
        assert_eq!(part.num_blocks(), 3);
        assert_eq!(part.blocks_one_based(), vec![vec![1, 2, 6], vec![3, 5], vec![4]]);
        assert_eq!(part.to_string(), "{{1,2,6},{3,5},{4}}");
    }

    #[test]
    fn validate_rejects_bad_input() {
        assert_eq!(
            Partition::from_blocks(3, &[vec![1, 2], vec![2, 3]]),
            Err(Error::Overlap { index: 2 })
        );
        assert_eq!(
            Partition::from_blocks(3, &[vec![1], vec![3]]),
            Err(Error::Coverage { index: 2 })
        );
        assert_eq!(
            Partition::from_blocks(2, &[vec![1, 2, 3]]),
            Err(Error::Range { index: 3, n: 2 })
        );
        assert_eq!(
            Partition::from_blocks(2, &[vec![1, 2], vec![]]),
            Err(Error::EmptyBlock)
        );
        assert_eq!(
            Partition::from_blocks(1, &[vec![0]]),
            Err(Error::Range { index: 0, n: 1 })
        );
    }

    #[test]
    fn refines_examples() {
        let fine = p(5, &[&[1], &[2], &[3, 4], &[5]]);
        let coarse = p(5, &[&[1, 2], &[3, 4], &[5]]);
        assert!(fine.refines(&coarse).unwrap());
        assert!(!coarse.refines(&fine).unwrap());
        assert!(Partition::singletons(5).refines(&coarse).unwrap());

        let a = p(3, &[&[1, 2], &[3]]);
        let b = p(3, &[&[1, 3], &[2]]);
        assert!(!a.refines(&b).unwrap());
        assert!(a.refines(&Partition::singletons(4)).is_err());
    }

    #[test]
    fn meet_join_worked_example() {
        let a = p(5, &[&[1, 2], &[3, 4], &[5]]);
        let b = p(5, &[&[1, 3, 4], &[2], &[5]]);
        assert_eq!(a.meet(&b).unwrap(), p(5, &[&[1, 2, 3, 4], &[5]]));
        assert_eq!(a.join(&b).unwrap(), p(5, &[&[1], &[2], &[3, 4], &[5]]));
        // neutral elements
        assert_eq!(a.meet(&Partition::singletons(5)).unwrap(), a);
        assert_eq!(a.join(&Partition::single_block(5)).unwrap(), a);
        assert_eq!(a.meet(&a).unwrap(), a);
        assert_eq!(a.join(&a).unwrap(), a);
    }

    #[test]
    fn coarsen_and_lift_worked_example() {
        let pi = p(8, &[&[1, 2], &[3, 4], &[5], &[6, 7, 8]]);
        let coarser = p(8, &[&[1, 2], &[3, 4, 5], &[6, 7, 8]]);
        let down = pi.coarsen_down(&coarser).unwrap();
        assert_eq!(down, p(4, &[&[1], &[2, 3], &[4]]));
        assert_eq!(pi.lift_up(&down).unwrap(), coarser);

        assert_eq!(pi.coarsen_down(&pi).unwrap(), Partition::singletons(4));
        assert_eq!(
            pi.coarsen_down(&Partition::single_block(8)).unwrap(),
            Partition::single_block(4)
        );
        assert_eq!(pi.lift_up(&Partition::singletons(4)).unwrap(), pi);
        assert_eq!(
            pi.lift_up(&Partition::single_block(4)).unwrap(),
            Partition::single_block(8)
        );

        let not_coarser = p(8, &[&[1, 3], &[2, 4], &[5], &[6, 7, 8]]);
        assert_eq!(pi.coarsen_down(&not_coarser), Err(Error::NotACoarsening));
    }

    #[test]
    fn weight_matrices_identities() {
        let pi = p(6, &[&[1, 2, 6], &[3, 5], &[4]]);
        let (w, d, j) = pi.weight_matrices();
        assert_eq!(d[(0, 0)].re, 3.0);
        assert_eq!(d[(1, 1)].re, 2.0);
        assert_eq!(d[(2, 2)].re, 1.0);
        // exact integer arithmetic
        assert_eq!(w.adjoint() * &w, d);
        assert_eq!(&w * w.adjoint(), j);
        // non-contiguous block {1,2,6}: J has ones off the band
        assert_eq!(j[(0, 5)].re, 1.0);
        assert_eq!(j[(0, 3)].re, 0.0);

        let top = Partition::singletons(3);
        let (w, d, j) = top.weight_matrices();
        let id = CMatrix::identity(3, 3);
        assert_eq!(w, id);
        assert_eq!(d, id);
        assert_eq!(j, id);

        let bottom = Partition::single_block(2);
        let (w, d, j) = bottom.weight_matrices();
        assert_eq!(w, CMatrix::from_element(2, 1, Complex64::new(1.0, 0.0)));
        assert_eq!(d, CMatrix::from_element(1, 1, Complex64::new(2.0, 0.0)));
        assert_eq!(j, CMatrix::from_element(2, 2, Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn json_round_trip() {
        let pi = p(6, &[&[1, 2, 6], &[3, 5], &[4]]);
        let json = serde_json::to_string(&pi).unwrap();
        assert_eq!(json, r#"{"n":6,"blocks":[[1,2,6],[3,5],[4]]}"#);
        let back: Partition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, pi);
        // any valid order is accepted on input
        let scrambled: Partition =
            serde_json::from_str(r#"{"n":6,"blocks":[[4],[5,3],[6,1,2]]}"#).unwrap();
        assert_eq!(scrambled, pi);
        let bad: std::result::Result<Partition, _> =
            serde_json::from_str(r#"{"n":3,"blocks":[[1,2],[2,3]]}"#);
        assert!(bad.is_err());
    }
}
