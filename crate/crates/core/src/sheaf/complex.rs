use super::gsheaf::{GSheaf, SheafError};
use super::map::SheafMap;
use crate::complexes::{ChainComplex, ComplexError};
use crate::groupoid::{nerve, FiniteGroupoid, ObjId};
use crate::linalg::{Coefficients, IntMatrix};
use num_bigint::BigInt;
use num_traits::One;
use std::sync::Arc;

/// A bounded-below complex of sheaves over one base:
/// `boundaries[i]: sheaves[i+1] -> sheaves[i]` with square zero stalkwise.
#[derive(Debug, Clone)]
pub struct SheafComplex {
    pub lo: i64,
    pub sheaves: Vec<GSheaf>,
    pub boundaries: Vec<SheafMap>,
}

impl SheafComplex {
    pub fn new(lo: i64, sheaves: Vec<GSheaf>, boundaries: Vec<SheafMap>) -> Result<Self, SheafError> {
        assert_eq!(boundaries.len(), sheaves.len().saturating_sub(1));
        for i in 0..boundaries.len() {
            if !boundaries[i].source.equal_sheaf(&sheaves[i + 1])
                || !boundaries[i].target.equal_sheaf(&sheaves[i])
            {
                return Err(SheafError::BaseMismatch);
            }
        }
        for i in 0..boundaries.len().saturating_sub(1) {
            let comp = boundaries[i].compose(&boundaries[i + 1])?;
            if !comp.is_zero() {
                return Err(SheafError::NotExactAtObject {
                    object: usize::MAX,
                    reason: format!("sheaf boundary square nonzero at degree {}", i as i64 + lo + 2),
                });
            }
        }
        Ok(SheafComplex {
            lo,
            sheaves,
            boundaries,
        })
    }

    /// A single sheaf in degree `lo`.
    pub fn concentrated(s: GSheaf, lo: i64) -> Self {
        SheafComplex {
            lo,
            sheaves: vec![s],
            boundaries: vec![],
        }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.sheaves.len() as i64 - 1
    }

    pub fn coefficients(&self) -> Coefficients {
        self.sheaves[0].coefficients()
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        self.sheaves[0].base()
    }

    pub fn sheaf(&self, degree: i64) -> Option<&GSheaf> {
        let i = degree - self.lo;
        if i < 0 {
            None
        } else {
            self.sheaves.get(i as usize)
        }
    }

    /// Restriction to one stalk: an ordinary chain complex.
    pub fn stalk_complex(&self, x: ObjId) -> Result<ChainComplex, ComplexError> {
        let ranks: Vec<usize> = self.sheaves.iter().map(|s| s.stalk_rank(x)).collect();
        let bnds: Vec<IntMatrix> = self.boundaries.iter().map(|b| b.at(x).clone()).collect();
        ChainComplex::new(self.coefficients(), self.lo, ranks, bnds)
    }

    /// Degree shift: `(C[k])_n = C_{n-k}`.
    pub fn shift(&self, k: i64) -> SheafComplex {
        SheafComplex {
            lo: self.lo + k,
            sheaves: self.sheaves.clone(),
            boundaries: self.boundaries.clone(),
        }
    }
}

/// The free-sheaf resolution of the constant sheaf coming from the nerve:
/// degree `n` holds the free abelian sheaf on strings of length `n+1`
/// anchored at their last object, with boundary the alternating sum of the
/// faces that keep the anchor fixed. Stalkwise this is the bar resolution of
/// a contractible simplicial set, so the complex augments quasi-isomorphically
/// onto the constant sheaf.
pub fn nerve_resolution(
    base: Arc<FiniteGroupoid>,
    coeff: Coefficients,
    length: usize,
) -> Result<(SheafComplex, SheafMap), SheafError> {
    let mut sheaves = Vec::with_capacity(length + 1);
    let mut level_strings = Vec::with_capacity(length + 1);
    for n in 0..=length {
        let lvl = nerve(&base, n + 1);
        // stalk at x: strings whose last object is x, in lexicographic order
        let mut per_object: Vec<Vec<usize>> = vec![Vec::new(); base.n_objects()];
        for (i, _) in lvl.strings.iter().enumerate() {
            per_object[lvl.last_object[i]].push(i);
        }
        let stalk_ranks: Vec<usize> = per_object.iter().map(|v| v.len()).collect();
        // position of a global string index inside its stalk
        let mut pos = vec![usize::MAX; lvl.len()];
        for v in &per_object {
            for (k, &i) in v.iter().enumerate() {
                pos[i] = k;
            }
        }
        // action of h: x' -> x appends h to the string
        let mut act = Vec::with_capacity(base.n_arrows());
        for h in 0..base.n_arrows() {
            let (xp, x) = (base.source(h), base.target(h));
            let mut m = IntMatrix::zero(stalk_ranks[xp], stalk_ranks[x]);
            for &i in &per_object[x] {
                let mut s = lvl.strings[i].clone();
                let last = *s.last().unwrap();
                *s.last_mut().unwrap() = base.compose_arrows(last, h);
                let j = lvl
                    .strings
                    .binary_search(&s)
                    .expect("appended string is composable");
                m[(pos[j], pos[i])] = BigInt::one();
            }
            act.push(m);
        }
        sheaves.push(GSheaf::new(base.clone(), coeff, stalk_ranks, act)?);
        level_strings.push((lvl, per_object, pos));
    }

    let mut boundaries = Vec::with_capacity(length);
    for n in 1..=length {
        let (upper, upper_per_obj, upper_pos) = &level_strings[n];
        let (lower, _, lower_pos) = &level_strings[n - 1];
        let mut mats = Vec::with_capacity(base.n_objects());
        for x in 0..base.n_objects() {
            let mut m = IntMatrix::zero(
                sheaves[n - 1].stalk_rank(x),
                sheaves[n].stalk_rank(x),
            );
            for &i in &upper_per_obj[x] {
                let s = &upper.strings[i];
                // faces d_0 .. d_n keep the last object fixed
                for face in 0..=n {
                    let f = crate::groupoid::nerve::face_string(&base, s, face);
                    let j = lower
                        .strings
                        .binary_search(&f)
                        .expect("face is composable");
                    let sign = if face % 2 == 0 { 1 } else { -1 };
                    let entry = &m[(lower_pos[j], upper_pos[i])] + BigInt::from(sign);
                    m[(lower_pos[j], upper_pos[i])] = entry;
                }
            }
            mats.push(m);
        }
        boundaries.push(SheafMap::new(
            sheaves[n].clone(),
            sheaves[n - 1].clone(),
            mats,
        )?);
    }

    let complex = SheafComplex::new(0, sheaves.clone(), boundaries)?;

    // augmentation onto the constant sheaf: every string maps to 1
    let constant = GSheaf::constant(base.clone(), coeff, 1);
    let aug_mats: Vec<IntMatrix> = (0..base.n_objects())
        .map(|x| IntMatrix::from_fn(1, sheaves[0].stalk_rank(x), |_, _| BigInt::one()))
        .collect();
    let augmentation = SheafMap::new(sheaves[0].clone(), constant, aug_mats)?;

    Ok((complex, augmentation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::cyclic;

    #[test]
    fn resolution_ranks_for_z2() {
        let g = cyclic(2).into_arc();
        let (res, aug) = nerve_resolution(g, Coefficients::Integers, 3).unwrap();
        let ranks: Vec<usize> = res.sheaves.iter().map(|s| s.stalk_rank(0)).collect();
        assert_eq!(ranks, vec![2, 4, 8, 16]);
        assert_eq!(aug.at(0).rows(), 1);
    }

    #[test]
    fn resolution_is_stalkwise_exact_below_top() {
        let g = FiniteGroupoid::pair(2).into_arc();
        let (res, aug) = nerve_resolution(g.clone(), Coefficients::Integers, 3).unwrap();
        for x in 0..2 {
            let c = res.stalk_complex(x).unwrap();
            // exactness at degrees 1 .. length-1 and the augmented degree 0
            for n in 1..=2 {
                assert!(c.homology(n).unwrap().is_zero(), "H_{n} of stalk {x}");
            }
            // H_0 of the augmented complex: ker(aug)/im(d_1) = 0 and aug onto
            let h0 = c.homology(0).unwrap();
            assert_eq!(h0.betti, 1);
            assert!(h0.torsion.is_empty());
            assert_eq!(aug.at(x).cols(), c.rank(0));
        }
    }

    use crate::groupoid::FiniteGroupoid;

    #[test]
    fn discrete_base_collapses() {
        let g = FiniteGroupoid::discrete(2).into_arc();
        let (res, _) = nerve_resolution(g, Coefficients::Integers, 2).unwrap();
        // strings over a discrete groupoid are unit powers: one per object
        for s in &res.sheaves {
            assert_eq!(s.stalk_ranks(), &[1, 1]);
        }
        for x in 0..2 {
            let c = res.stalk_complex(x).unwrap();
            for n in 1..=1 {
                assert!(c.homology(n).unwrap().is_zero());
            }
        }
    }
}
