use crate::complexes::{ChainComplex, ComplexError};
use crate::groupoid::nerve::{face_string, nerve_strings, nondegenerate_strings};
use crate::groupoid::{ArrId, FiniteGroupoid, ObjId};
use crate::linalg::sparse::{SparseComplex, SparseMat};
use crate::linalg::IntMatrix;
use crate::sheaf::{GSheaf, SheafMap};
use num_bigint::BigInt;

/// Basis bookkeeping for one level of the bar complex: the chain group is
/// the direct sum over composable strings of the coefficient stalk at the
/// first object, ordered by (string, stalk basis vector).
pub struct BarLevel {
    pub strings: Vec<Vec<ArrId>>,
    pub first_object: Vec<ObjId>,
    /// basis offset of each string
    pub offsets: Vec<usize>,
    pub total_rank: usize,
}

impl BarLevel {
    pub fn new(g: &FiniteGroupoid, a: &GSheaf, n: usize, normalized: bool) -> Self {
        let strings = if normalized {
            nondegenerate_strings(g, n)
        } else {
            nerve_strings(g, n)
        };
        let first_object: Vec<ObjId> = if n == 0 {
            (0..g.n_objects()).collect()
        } else {
            strings.iter().map(|s| g.target(s[0])).collect()
        };
        let mut offsets = Vec::with_capacity(strings.len());
        let mut total = 0usize;
        for &x in &first_object {
            offsets.push(total);
            total += a.stalk_rank(x);
        }
        BarLevel {
            strings,
            first_object,
            offsets,
            total_rank: total,
        }
    }

    pub fn index_of(&self, s: &[ArrId]) -> Option<usize> {
        self.strings
            .binary_search_by(|probe| probe.as_slice().cmp(s))
            .ok()
    }

    /// Index of a level-0 "string" (an object).
    pub fn index_of_object(&self, x: ObjId) -> usize {
        x
    }
}

/// Boundary matrix `delta_n: B_n -> B_{n-1}`, the alternating sum of the
/// face maps; the 0-th face moves the coefficient along the first arrow.
pub fn bar_boundary(
    g: &FiniteGroupoid,
    a: &GSheaf,
    upper: &BarLevel,
    lower: &BarLevel,
    n: usize,
) -> IntMatrix {
    assert!(n >= 1);
    let mut m = IntMatrix::zero(lower.total_rank, upper.total_rank);
    for (si, s) in upper.strings.iter().enumerate() {
        let x0 = upper.first_object[si];
        let r = a.stalk_rank(x0);
        for face in 0..=n {
            let sign = if face % 2 == 0 { 1i64 } else { -1i64 };
            let (tgt_idx, block) = if n == 1 {
                let obj = if face == 0 { g.source(s[0]) } else { g.target(s[0]) };
                (Some(lower.index_of_object(obj)), face_block(g, a, s, face))
            } else {
                let f = face_string(g, s, face);
                (lower.index_of(&f), face_block(g, a, s, face))
            };
            let Some(ti) = tgt_idx else { continue };
            let (ro, co) = (lower.offsets[ti], upper.offsets[si]);
            for i in 0..block.rows() {
                for j in 0..r {
                    if !num_traits::Zero::is_zero(&block[(i, j)]) {
                        let add = &block[(i, j)] * BigInt::from(sign);
                        let cur = &m[(ro + i, co + j)] + add;
                        m[(ro + i, co + j)] = cur;
                    }
                }
            }
        }
    }
    m
}

/// Coefficient block of one face: the action of the first arrow for the
/// 0-th face, the identity otherwise.
fn face_block(g: &FiniteGroupoid, a: &GSheaf, s: &[ArrId], face: usize) -> IntMatrix {
    if face == 0 {
        a.action(s[0]).clone()
    } else {
        IntMatrix::identity(a.stalk_rank(g.target(s[0])))
    }
}

/// The bar complex `B_(G; A)` as a dense chain complex on `[0, n_max]`.
pub fn bar_complex(
    g: &FiniteGroupoid,
    a: &GSheaf,
    n_max: usize,
) -> Result<ChainComplex, ComplexError> {
    bar_complex_inner(g, a, n_max, false)
}

/// The normalized bar complex: the quotient by degenerate strings, which
/// has the same homology and shrinks group levels from `|G|^n` to
/// `(|G|-1)^n`.
pub fn bar_complex_normalized(
    g: &FiniteGroupoid,
    a: &GSheaf,
    n_max: usize,
) -> Result<ChainComplex, ComplexError> {
    bar_complex_inner(g, a, n_max, true)
}

fn bar_complex_inner(
    g: &FiniteGroupoid,
    a: &GSheaf,
    n_max: usize,
    normalized: bool,
) -> Result<ChainComplex, ComplexError> {
    let levels: Vec<BarLevel> = (0..=n_max).map(|n| BarLevel::new(g, a, n, normalized)).collect();
    let ranks: Vec<usize> = levels.iter().map(|l| l.total_rank).collect();
    let boundaries: Vec<IntMatrix> = (1..=n_max)
        .map(|n| bar_boundary(g, a, &levels[n], &levels[n - 1], n))
        .collect();
    ChainComplex::new(a.coefficients(), 0, ranks, boundaries)
}

/// Sparse bar complex for the reduction engine; `None` when an action entry
/// does not fit a machine integer (the dense path handles those).
pub fn bar_complex_sparse(
    g: &FiniteGroupoid,
    a: &GSheaf,
    n_max: usize,
    normalized: bool,
) -> Option<SparseComplex> {
    let levels: Vec<BarLevel> = (0..=n_max).map(|n| BarLevel::new(g, a, n, normalized)).collect();
    let ranks: Vec<usize> = levels.iter().map(|l| l.total_rank).collect();
    let mut boundaries = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (upper, lower) = (&levels[n], &levels[n - 1]);
        let mut mat = SparseMat::new(lower.total_rank, upper.total_rank);
        for (si, s) in upper.strings.iter().enumerate() {
            let x0 = upper.first_object[si];
            let r = a.stalk_rank(x0);
            for face in 0..=n {
                let sign = if face % 2 == 0 { 1i64 } else { -1i64 };
                let tgt_idx = if n == 1 {
                    let obj = if face == 0 { g.source(s[0]) } else { g.target(s[0]) };
                    Some(lower.index_of_object(obj))
                } else {
                    lower.index_of(&face_string(g, s, face))
                };
                let Some(ti) = tgt_idx else { continue };
                let (ro, co) = (lower.offsets[ti], upper.offsets[si]);
                if face == 0 {
                    let act = a.action(s[0]);
                    for i in 0..act.rows() {
                        for j in 0..r {
                            let e = &act[(i, j)];
                            if !num_traits::Zero::is_zero(e) {
                                let v = i64::try_from(e).ok()?.checked_mul(sign)?;
                                mat.add_entry(ro + i, co + j, v);
                            }
                        }
                    }
                } else {
                    for j in 0..r {
                        mat.add_entry(ro + j, co + j, sign);
                    }
                }
            }
        }
        boundaries.push(mat);
    }
    Some(SparseComplex {
        lo: 0,
        ranks,
        boundaries,
    })
}

/// The chain-level matrix of a sheaf map on one bar level: a block of the
/// per-object matrix at the first object of every string.
pub fn bar_map_level(f: &SheafMap, level_src: &BarLevel, level_tgt: &BarLevel) -> IntMatrix {
    assert_eq!(level_src.strings.len(), level_tgt.strings.len());
    let mut m = IntMatrix::zero(level_tgt.total_rank, level_src.total_rank);
    for (si, _) in level_src.strings.iter().enumerate() {
        let x0 = level_src.first_object[si];
        let block = f.at(x0);
        let (ro, co) = (level_tgt.offsets[si], level_src.offsets[si]);
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                m[(ro + i, co + j)] = block[(i, j)].clone();
            }
        }
    }
    m
}

/// Cochain (cobar) boundary `delta^p: C^p -> C^{p+1}` of the invariant
/// cochain complex: sections over strings valued in the stalk at the last
/// object; the final face transports along the last arrow.
pub fn cobar_coboundary(g: &FiniteGroupoid, a: &GSheaf, p: usize, normalized: bool) -> IntMatrix {
    let lower = CobarLevel::new(g, a, p, normalized);
    let upper = CobarLevel::new(g, a, p + 1, normalized);
    let mut m = IntMatrix::zero(upper.total_rank, lower.total_rank);
    for (si, s) in upper.strings.iter().enumerate() {
        let xi_last = upper.last_object[si];
        for face in 0..=p + 1 {
            let sign = if face % 2 == 0 { 1i64 } else { -1i64 };
            let (tgt_idx, block) = if p == 0 {
                let obj = if face == 0 { g.source(s[0]) } else { g.target(s[0]) };
                (Some(obj), cobar_block(g, a, s, face, p))
            } else {
                let f = face_string(g, s, face);
                (lower.index_of(&f), cobar_block(g, a, s, face, p))
            };
            let Some(ti) = tgt_idx else { continue };
            let (ro, co) = (upper.offsets[si], lower.offsets[ti]);
            let r_rows = a.stalk_rank(xi_last);
            for i in 0..r_rows {
                for j in 0..block.cols() {
                    if !num_traits::Zero::is_zero(&block[(i, j)]) {
                        let add = &block[(i, j)] * BigInt::from(sign);
                        let cur = &m[(ro + i, co + j)] + add;
                        m[(ro + i, co + j)] = cur;
                    }
                }
            }
        }
    }
    m
}

/// Cobar level: sections anchored at the last object of each string.
pub struct CobarLevel {
    pub strings: Vec<Vec<ArrId>>,
    pub last_object: Vec<ObjId>,
    pub offsets: Vec<usize>,
    pub total_rank: usize,
}

impl CobarLevel {
    pub fn new(g: &FiniteGroupoid, a: &GSheaf, n: usize, normalized: bool) -> Self {
        let strings = if normalized {
            nondegenerate_strings(g, n)
        } else {
            nerve_strings(g, n)
        };
        let last_object: Vec<ObjId> = if n == 0 {
            (0..g.n_objects()).collect()
        } else {
            strings.iter().map(|s| g.source(s[n - 1])).collect()
        };
        let mut offsets = Vec::with_capacity(strings.len());
        let mut total = 0usize;
        for &x in &last_object {
            offsets.push(total);
            total += a.stalk_rank(x);
        }
        CobarLevel {
            strings,
            last_object,
            offsets,
            total_rank: total,
        }
    }

    pub fn index_of(&self, s: &[ArrId]) -> Option<usize> {
        self.strings
            .binary_search_by(|probe| probe.as_slice().cmp(s))
            .ok()
    }
}

/// Block of the cochain face: identity except for the last face, which acts
/// by the final arrow of the string.
fn cobar_block(g: &FiniteGroupoid, a: &GSheaf, s: &[ArrId], face: usize, p: usize) -> IntMatrix {
    if face == p + 1 {
        a.action(s[p]).clone()
    } else {
        IntMatrix::identity(a.stalk_rank(g.source(s[s.len() - 1])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::cyclic;
    use crate::linalg::{AbGroupClass, Coefficients};

    #[test]
    fn bar_ranks_for_z2() {
        let g = cyclic(2);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 1);
        let c = bar_complex(&g, &a, 4).unwrap();
        assert_eq!(
            (0..=4).map(|n| c.rank(n)).collect::<Vec<_>>(),
            vec![1, 2, 4, 8, 16]
        );
    }

    #[test]
    fn z2_integral_homology_matches_periodic_resolution() {
        // H_0 = Z, H_1 = Z/2, H_2 = 0, H_3 = Z/2
        let g = cyclic(2);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 1);
        let c = bar_complex(&g, &a, 4).unwrap();
        assert_eq!(c.homology(0).unwrap(), AbGroupClass::free(1));
        assert_eq!(
            c.homology(1).unwrap(),
            AbGroupClass::from_parts(0, vec![BigInt::from(2)])
        );
        assert!(c.homology(2).unwrap().is_zero());
        assert_eq!(
            c.homology(3).unwrap(),
            AbGroupClass::from_parts(0, vec![BigInt::from(2)])
        );
    }

    #[test]
    fn normalized_agrees_with_unnormalized() {
        for m in [2usize, 3] {
            let g = cyclic(m);
            let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 1);
            let full = bar_complex(&g, &a, 4).unwrap();
            let norm = bar_complex_normalized(&g, &a, 4).unwrap();
            for n in 0..=3 {
                assert_eq!(
                    full.homology(n).unwrap(),
                    norm.homology(n).unwrap(),
                    "degree {n}, order {m}"
                );
            }
        }
    }

    #[test]
    fn empty_groupoid_gives_zero_complex() {
        let g = crate::groupoid::FiniteGroupoid::empty();
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 1);
        let c = bar_complex(&g, &a, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(c.rank(n), 0);
        }
    }

    #[test]
    fn discrete_groupoid_concentrates_in_degree_zero() {
        let g = crate::groupoid::FiniteGroupoid::discrete(3);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 2);
        let c = bar_complex(&g, &a, 3).unwrap();
        assert_eq!(c.homology(0).unwrap(), AbGroupClass::free(6));
        for n in 1..=2 {
            assert!(c.homology(n).unwrap().is_zero(), "H_{n}");
        }
    }

    #[test]
    fn sparse_and_dense_boundaries_agree() {
        let g = cyclic(3);
        let a = GSheaf::free(g.clone().into_arc(), Coefficients::Integers, &[1]).unwrap();
        let dense = bar_complex(&g, &a, 3).unwrap();
        let sparse = bar_complex_sparse(&g, &a, 3, false).unwrap();
        for n in 1..=3 {
            assert_eq!(sparse.boundaries[n - 1].to_dense(), dense.boundary(n as i64));
        }
        assert!(sparse.check_square_zero());
    }
}
