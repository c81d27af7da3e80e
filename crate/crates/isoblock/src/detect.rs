//! Detection of the coarsest partition whose blocks each lie in a single
//! orbit of a multiplicative group `G ⊂ ℂˣ`.
//!
//! For `G = {1}` a block in a single orbit is a constant block; the larger
//! groups `{±1}`, `S¹` and `ℂˣ` relax constancy to sign flips, equal moduli
//! and joint (non-)vanishing. Two rows belong to the same block of the
//! coarsest partition exactly when they are entrywise orbit-equal both as
//! rows and as columns, so detection is an equivalence-class computation:
//! hashing of canonical orbit representatives when `tol == 0`, a pairwise
//! union-find (single linkage) otherwise.
//!
//! With `tol > 0` orbit equality is not exactly transitive; single linkage
//! can chain entries up to one tolerance step per link. [`membership`] uses
//! a per-block anchor entry, so for well-separated data (gaps well above
//! `tol`) detection followed by membership is consistent; adversarial
//! chains may need a larger membership tolerance (at most the block
//! diameter, `(|I| - 1)·tol`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{max_abs, CMatrix};
use crate::partition::{Partition, UnionFind};

/// The multiplicative subgroup of `ℂˣ` whose orbits define block equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    /// `{1}`: blocks are constant.
    Trivial,
    /// `{±1}`: blocks are constant up to sign.
    Sign,
    /// The unit circle `S¹`: blocks have constant modulus.
    Circle,
    /// `ℂˣ`: blocks are constant up to any non-zero factor; the orbit of
    /// zero is `{0}` for every group.
    Nonzero,
}

impl Group {
    /// Stable lowercase name, the serialized form.
    pub fn name(self) -> &'static str {
        match self {
            Group::Trivial => "trivial",
            Group::Sign => "sign",
            Group::Circle => "circle",
            Group::Nonzero => "nonzero",
        }
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(Group::Trivial),
            "sign" => Ok(Group::Sign),
            "circle" => Ok(Group::Circle),
            "nonzero" => Ok(Group::Nonzero),
            other => Err(Error::Domain(format!(
                "unknown group '{other}' (expected trivial|sign|circle|nonzero)"
            ))),
        }
    }
}

/// A group together with the numeric tolerance defining orbit equality.
///
/// `tol` is relative to `scale`, a reference magnitude. When `scale` is
/// unset, matrix-level operations resolve it to the largest entry magnitude
/// of their input (1 for a zero matrix); the scalar [`orbit_equal`] then
/// compares at `tol · scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub group: Group,
    pub tol: f64,
    #[serde(skip)]
    scale: Option<f64>,
}

impl GroupSpec {
    /// Tolerance-zero spec: exact orbit equality.
    pub fn exact(group: Group) -> Self {
        Self::new(group, 0.0)
    }

    /// Spec with a relative tolerance (`tol ≥ 0`).
    pub fn new(group: Group, tol: f64) -> Self {
        assert!(tol >= 0.0, "tolerance must be non-negative");
        GroupSpec {
            group,
            tol,
            scale: None,
        }
    }

    /// Fix the reference magnitude explicitly (`scale > 0`).
    pub fn with_scale(mut self, scale: f64) -> Self {
        assert!(scale > 0.0, "scale must be positive");
        self.scale = Some(scale);
        self
    }

    /// Resolve the reference magnitude against a matrix: the largest entry
    /// magnitude, or 1 for a zero matrix. A scale fixed by
    /// [`with_scale`](Self::with_scale) wins.
    pub fn resolved_for(&self, a: &CMatrix) -> GroupSpec {
        match self.scale {
            Some(_) => *self,
            None => {
                let s = max_abs(a);
                self.with_scale(if s > 0.0 { s } else { 1.0 })
            }
        }
    }

    /// The absolute comparison threshold `tol · scale`.
    pub fn eps(&self) -> f64 {
        self.tol * self.scale.unwrap_or(1.0)
    }
}

/// Are `x` and `y` in the same `G`-orbit within tolerance?
///
/// The orbit of zero is `{0}` for every group: under `circle` and
/// `nonzero`, an entry of magnitude at most `tol · scale` is treated as
/// exactly zero.
pub fn orbit_equal(x: Complex64, y: Complex64, g: &GroupSpec) -> bool {
    let eps = g.eps();
    match g.group {
        Group::Trivial => (x - y).norm() <= eps,
        Group::Sign => (x - y).norm().min((x + y).norm()) <= eps,
        Group::Circle => {
            let (zx, zy) = (x.norm() <= eps, y.norm() <= eps);
            if zx || zy {
                zx == zy
            } else {
                (x.norm() - y.norm()).abs() <= eps
            }
        }
        Group::Nonzero => (x.norm() <= eps) == (y.norm() <= eps),
    }
}

// Canonical orbit representative as hashable bits, for the tol = 0 fast
// path. Representatives are equal iff the scalars are orbit-equal.
fn rep_bits(z: Complex64, group: Group) -> (u64, u64) {
    // collapse -0.0 to +0.0 so bit equality matches numeric equality
    let norm0 = |x: f64| if x == 0.0 { 0.0f64 } else { x };
    match group {
        Group::Trivial => (norm0(z.re).to_bits(), norm0(z.im).to_bits()),
        Group::Sign => {
            let (re, im) = (norm0(z.re), norm0(z.im));
            let flip = re < 0.0 || (re == 0.0 && im < 0.0);
            let (re, im) = if flip { (norm0(-re), norm0(-im)) } else { (re, im) };
            (re.to_bits(), im.to_bits())
        }
        Group::Circle => (z.norm().to_bits(), 0),
        Group::Nonzero => (u64::from(z != Complex64::new(0.0, 0.0)), 0),
    }
}

fn detect_classes(
    n_rows: usize,
    g: &GroupSpec,
    entry: impl Fn(usize, usize) -> Complex64, // (class index, position)
    positions: usize,
) -> Vec<usize> {
    if g.tol == 0.0 {
        let mut seen: std::collections::HashMap<Vec<(u64, u64)>, usize> =
            std::collections::HashMap::new();
        let mut labels = vec![0usize; n_rows];
        for i in 0..n_rows {
            let sig: Vec<(u64, u64)> =
                (0..positions).map(|p| rep_bits(entry(i, p), g.group)).collect();
            let next = seen.len();
            labels[i] = *seen.entry(sig).or_insert(next);
        }
        labels
    } else {
        let mut uf = UnionFind::new(n_rows);
        for i in 0..n_rows {
            for i2 in (i + 1)..n_rows {
                if uf.find(i) == uf.find(i2) {
                    continue;
                }
                if (0..positions).all(|p| orbit_equal(entry(i, p), entry(i2, p), g)) {
                    uf.union(i, i2);
                }
            }
        }
        uf.labels()
    }
}

/// The coarsest partition `π` such that every block `A_{I_i × I_j}` of the
/// square matrix lies in a single `G`-orbit.
pub fn detect_square(a: &CMatrix, g: &GroupSpec) -> Partition {
    assert!(a.is_square(), "detect_square needs a square matrix");
    let n = a.nrows();
    assert!(n > 0, "detect_square needs n >= 1");
    let g = g.resolved_for(a);
    // signature of row i: its row entries followed by its column entries
    let labels = detect_classes(
        n,
        &g,
        |i, p| if p < n { a[(i, p)] } else { a[(p - n, i)] },
        2 * n,
    );
    Partition::from_labels(&labels)
}

/// The coarsest pair (row partition, column partition) such that every
/// block `A_{I_i × J_j}` of the rectangular matrix lies in one `G`-orbit.
///
/// For a symmetric matrix (or a Hermitian one with `G ⊂ S¹`) the two
/// partitions coincide.
pub fn detect_rect(a: &CMatrix, g: &GroupSpec) -> (Partition, Partition) {
    let (rows, cols) = a.shape();
    assert!(rows > 0 && cols > 0, "detect_rect needs M, N >= 1");
    let g = g.resolved_for(a);
    let row_labels = detect_classes(rows, &g, |i, j| a[(i, j)], cols);
    let col_labels = detect_classes(cols, &g, |j, i| a[(i, j)], rows);
    (
        Partition::from_labels(&row_labels),
        Partition::from_labels(&col_labels),
    )
}

// Validity of a candidate partition for the symmetric statistical model:
// off-diagonal blocks in one orbit; within each diagonal block, the
// diagonal entries in one orbit and the off-diagonal entries in one orbit.
fn symmetric_model_valid(a: &CMatrix, pi: &Partition, g: &GroupSpec) -> bool {
    let blocks = pi.blocks();
    for (bi, block_i) in blocks.iter().enumerate() {
        // diagonal entries of the diagonal block
        let d0 = a[(block_i[0], block_i[0])];
        if !block_i.iter().all(|&k| orbit_equal(a[(k, k)], d0, g)) {
            return false;
        }
        // off-diagonal entries of the diagonal block (both triangles)
        let mut anchor: Option<Complex64> = None;
        for &p in block_i {
            for &q in block_i {
                if p == q {
                    continue;
                }
                let anchor = *anchor.get_or_insert(a[(p, q)]);
                if !orbit_equal(a[(p, q)], anchor, g) {
                    return false;
                }
            }
        }
        // off-diagonal blocks
        for block_j in blocks.iter().skip(bi + 1) {
            let anchor_ij = a[(block_i[0], block_j[0])];
            let anchor_ji = a[(block_j[0], block_i[0])];
            for &p in block_i {
                for &q in block_j {
                    if !orbit_equal(a[(p, q)], anchor_ij, g)
                        || !orbit_equal(a[(q, p)], anchor_ji, g)
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The coarsest partition for the symmetric statistical model: off-diagonal
/// blocks each in one `G`-orbit, and within each diagonal block the
/// diagonal entries in one orbit and the off-diagonal entries in one
/// (possibly different) orbit.
///
/// Computed by merging blocks to a fixpoint starting from singletons; the
/// valid partitions are closed under common coarsening, so the fixpoint is
/// unique regardless of merge order.
pub fn detect_symmetric_model(a: &CMatrix, g: &GroupSpec) -> Partition {
    assert!(a.is_square(), "detect_symmetric_model needs a square matrix");
    let n = a.nrows();
    assert!(n > 0, "detect_symmetric_model needs n >= 1");
    let g = g.resolved_for(a);
    let mut pi = Partition::singletons(n);
    'merge: loop {
        let m = pi.num_blocks();
        for bi in 0..m {
            for bj in (bi + 1)..m {
                let mut labels: Vec<usize> = (0..n).map(|i| pi.block_of(i)).collect();
                for l in labels.iter_mut() {
                    if *l == bj {
                        *l = bi;
                    }
                }
                let candidate = Partition::from_labels(&labels);
                if symmetric_model_valid(a, &candidate, &g) {
                    pi = candidate;
                    continue 'merge;
                }
            }
        }
        return pi;
    }
}

/// Is `A` in the closed stratum of `pi`, i.e. does every block
/// `A_{I_i × I_j}` lie in a single `G`-orbit within tolerance?
///
/// Each block pair is compared against its anchor entry (smallest row, then
/// smallest column). Equivalent to `detect_square(A, g).refines(pi)` when
/// `tol == 0`.
pub fn membership(a: &CMatrix, pi: &Partition, g: &GroupSpec) -> Result<bool> {
    if !a.is_square() || a.nrows() != pi.size() {
        return Err(Error::DimensionMismatch(format!(
            "membership: {}x{} matrix against a partition of {}",
            a.nrows(),
            a.ncols(),
            pi.size()
        )));
    }
    let g = g.resolved_for(a);
    for block_i in pi.blocks() {
        for block_j in pi.blocks() {
            let anchor = a[(block_i[0], block_j[0])];
            for &p in block_i {
                for &q in block_j {
                    if !orbit_equal(a[(p, q)], anchor, &g) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// A square matrix certified to lie in the closed stratum of a partition:
/// every block is a single `G`-orbit within the spec's tolerance.
#[derive(Clone, Debug)]
pub struct StratifiedMatrix {
    matrix: CMatrix,
    partition: Partition,
    group: GroupSpec,
}

impl StratifiedMatrix {
    /// Certify membership; fails with `NotInStratum` when some block is not
    /// a single orbit.
    pub fn new(matrix: CMatrix, partition: Partition, group: GroupSpec) -> Result<Self> {
        if !membership(&matrix, &partition, &group)? {
            return Err(Error::NotInStratum {
                group: group.group.name(),
                tol: group.tol,
            });
        }
        Ok(StratifiedMatrix {
            group: group.resolved_for(&matrix),
            matrix,
            partition,
        })
    }

    /// Detect the partition, which certifies membership by construction.
    pub fn detect(matrix: CMatrix, group: GroupSpec) -> Self {
        let partition = detect_square(&matrix, &group);
        StratifiedMatrix {
            group: group.resolved_for(&matrix),
            matrix,
            partition,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.partition.size()
    }

    pub fn into_parts(self) -> (CMatrix, Partition, GroupSpec) {
        (self.matrix, self.partition, self.group)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_matrix(n: usize, rows: &[f64]) -> CMatrix {
        CMatrix::from_row_slice(n, n, &rows.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    /// The 6x6 block-constant worked example used throughout the crate.
    pub(crate) fn worked_example() -> CMatrix {
        real_matrix(
            6,
            &[
                1.0, 1.0, 2.0, -3.0, 2.0, 1.0, //
                1.0, 1.0, 2.0, -3.0, 2.0, 1.0, //
                2.0, 2.0, 6.0, -5.0, 6.0, 2.0, //
                -3.0, -3.0, -5.0, 10.0, -5.0, -3.0, //
                2.0, 2.0, 6.0, -5.0, 6.0, 2.0, //
                1.0, 1.0, 2.0, -3.0, 2.0, 1.0,
            ],
        )
    }

    fn worked_partition() -> Partition {
        Partition::from_blocks(6, &[vec![1, 2, 6], vec![3, 5], vec![4]]).unwrap()
    }

    #[test]
    fn orbit_equal_per_group() {
        let exact = |g| GroupSpec::exact(g);
        assert!(orbit_equal(c(1.0, 0.0), c(-1.0, 0.0), &exact(Group::Sign)));
        assert!(!orbit_equal(c(1.0, 0.0), c(-1.0, 0.0), &exact(Group::Trivial)));
        // |3+4i| = 5
        assert!(orbit_equal(c(3.0, 4.0), c(5.0, 0.0), &exact(Group::Circle)));
        assert!(!orbit_equal(c(3.0, 4.0), c(5.0, 0.0), &exact(Group::Sign)));
        assert!(orbit_equal(c(3.0, 4.0), c(-2.0, 0.1), &exact(Group::Nonzero)));
        // the orbit of zero is {0} for every group
        for g in [Group::Trivial, Group::Sign, Group::Circle, Group::Nonzero] {
            assert!(!orbit_equal(c(0.0, 0.0), c(1.0, 0.0), &exact(g)));
            assert!(orbit_equal(c(0.0, 0.0), c(0.0, 0.0), &exact(g)));
        }
        // tolerance is relative to scale
        let fuzzy = GroupSpec::new(Group::Trivial, 1e-3).with_scale(10.0);
        assert!(orbit_equal(c(1.0, 0.0), c(1.005, 0.0), &fuzzy));
        assert!(!orbit_equal(c(1.0, 0.0), c(1.05, 0.0), &fuzzy));
    }

    #[test]
    fn detect_square_worked_example() {
        let a = worked_example();
        let pi = detect_square(&a, &GroupSpec::exact(Group::Trivial));
        assert_eq!(pi, worked_partition());
    }

    #[test]
    fn detect_square_edge_cases() {
        let id = CMatrix::identity(3, 3);
        assert_eq!(
            detect_square(&id, &GroupSpec::exact(Group::Trivial)),
            Partition::singletons(3)
        );
        let ones = CMatrix::from_element(4, 4, c(1.0, 0.0));
        assert_eq!(
            detect_square(&ones, &GroupSpec::exact(Group::Trivial)),
            Partition::single_block(4)
        );
        // [[1,-1],[1,1]] is a single sign-orbit block
        let a = real_matrix(2, &[1.0, -1.0, 1.0, 1.0]);
        assert_eq!(
            detect_square(&a, &GroupSpec::exact(Group::Sign)),
            Partition::single_block(2)
        );
        assert_eq!(
            detect_square(&a, &GroupSpec::exact(Group::Trivial)),
            Partition::singletons(2)
        );
    }

    #[test]
    fn fast_path_matches_union_find() {
        // tiny tolerance forces the pairwise path; results must agree at
        // exact data
        let a = worked_example();
        for g in [Group::Trivial, Group::Sign, Group::Circle, Group::Nonzero] {
            let fast = detect_square(&a, &GroupSpec::exact(g));
            let slow = detect_square(&a, &GroupSpec::new(g, 1e-14));
            assert_eq!(fast, slow, "group {g}");
        }
    }

    #[test]
    fn detect_rect_row_compression() {
        let a = CMatrix::from_row_slice(1, 4, &[c(2.0, 0.0), c(2.0, 0.0), c(7.0, 0.0), c(2.0, 0.0)]);
        let (rows, cols) = detect_rect(&a, &GroupSpec::exact(Group::Trivial));
        assert_eq!(rows, Partition::single_block(1));
        assert_eq!(
            cols,
            Partition::from_blocks(4, &[vec![1, 2, 4], vec![3]]).unwrap()
        );

        let (rp, cp) = detect_rect(&worked_example(), &GroupSpec::exact(Group::Trivial));
        assert_eq!(rp, worked_partition());
        assert_eq!(cp, worked_partition());
    }

    #[test]
    fn symmetric_model_relaxes_diagonal() {
        // compound symmetry d·I + c·(J - I) has the single-block model
        // partition even though d != c
        let n = 4;
        let mut a = CMatrix::from_element(n, n, c(0.3, 0.0));
        for i in 0..n {
            a[(i, i)] = c(1.0, 0.0);
        }
        assert_eq!(
            detect_symmetric_model(&a, &GroupSpec::exact(Group::Trivial)),
            Partition::single_block(n)
        );
        // identity: diagonal entries equal, no off-diagonal constraint
        let id = CMatrix::identity(2, 2);
        assert_eq!(
            detect_symmetric_model(&id, &GroupSpec::exact(Group::Trivial)),
            Partition::single_block(2)
        );
        // the worked example's model partition coarsens the plain partition
        let a = worked_example();
        let model = detect_symmetric_model(&a, &GroupSpec::exact(Group::Trivial));
        assert!(worked_partition().refines(&model).unwrap());
    }

    #[test]
    fn membership_examples() {
        let a = worked_example();
        let g = GroupSpec::exact(Group::Trivial);
        assert!(membership(&a, &worked_partition(), &g).unwrap());
        assert!(membership(&a, &Partition::singletons(6), &g).unwrap());
        assert!(!membership(&a, &Partition::single_block(6), &g).unwrap());
        assert!(membership(&a, &Partition::singletons(5), &g).is_err());
    }

    #[test]
    fn stratified_matrix_certifies() {
        let a = worked_example();
        let g = GroupSpec::exact(Group::Trivial);
        assert!(StratifiedMatrix::new(a.clone(), worked_partition(), g).is_ok());
        let err = StratifiedMatrix::new(a.clone(), Partition::single_block(6), g);
        assert!(matches!(err, Err(Error::NotInStratum { .. })));
        let s = StratifiedMatrix::detect(a, g);
        assert_eq!(s.partition(), &worked_partition());
    }
}
