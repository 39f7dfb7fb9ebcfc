use crate::groupoid::{ArrId, FiniteGroupoid, ObjId};
use crate::linalg::{Coefficients, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum SheafError {
    #[error("action matrix of arrow {arrow} has the wrong shape")]
    ActionShape { arrow: ArrId },
    #[error("action of the unit at object {object} is not the identity")]
    UnitNotIdentity { object: ObjId },
    #[error("action is not functorial on the pair ({g}, {h})")]
    NotFunctorial { g: ArrId, h: ArrId },
    #[error("action matrix of arrow {arrow} is not invertible over {coeff}")]
    NotInvertible { arrow: ArrId, coeff: Coefficients },
    #[error("sheaves live over different base groupoids")]
    BaseMismatch,
    #[error("sheaves have different coefficients")]
    CoeffMismatch,
    #[error("map does not commute with the action on arrow {arrow}")]
    NotEquivariant { arrow: ArrId },
    #[error("map matrix at object {object} has the wrong shape")]
    MapShape { object: ObjId },
    #[error("sequence is not exact at object {object}: {reason}")]
    NotExactAtObject { object: ObjId, reason: String },
    #[error("pushforward with compact supports needs the unique-lift condition; it fails at arrow {arrow} over object {object}")]
    NotAShriekableHom { arrow: ArrId, object: ObjId },
    #[error("tensor products of sheaves are supported over fields only")]
    IntegerTensorUnsupported,
    #[error("extension segments do not splice: endpoint sheaves differ at position {position}")]
    MalformedExtension { position: usize },
}

/// An equivariant sheaf on a finite groupoid: one free stalk per object and
/// one invertible matrix per arrow, acting contravariantly
/// (`act(g): stalk at t(g) -> stalk at s(g)`). Functoriality, unit laws and
/// invertibility over the coefficient ring are enforced at construction.
#[derive(Debug, Clone)]
pub struct GSheaf {
    base: Arc<FiniteGroupoid>,
    coeff: Coefficients,
    stalk_ranks: Vec<usize>,
    act: Vec<IntMatrix>,
}

impl GSheaf {
    pub fn new(
        base: Arc<FiniteGroupoid>,
        coeff: Coefficients,
        stalk_ranks: Vec<usize>,
        act: Vec<IntMatrix>,
    ) -> Result<Self, SheafError> {
        assert_eq!(stalk_ranks.len(), base.n_objects());
        assert_eq!(act.len(), base.n_arrows());
        let s = GSheaf {
            base,
            coeff,
            stalk_ranks,
            act,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), SheafError> {
        let g = &self.base;
        for a in 0..g.n_arrows() {
            let m = &self.act[a];
            if m.rows() != self.stalk_ranks[g.source(a)] || m.cols() != self.stalk_ranks[g.target(a)]
            {
                return Err(SheafError::ActionShape { arrow: a });
            }
        }
        for x in 0..g.n_objects() {
            if !self.is_identity(&self.act[g.unit_of(x)]) {
                return Err(SheafError::UnitNotIdentity { object: x });
            }
        }
        for a in 0..g.n_arrows() {
            for &h in g.arrows_into(g.source(a)) {
                let composite = g.compose_arrows(a, h);
                let lhs = &self.act[h] * &self.act[a];
                if !self.mats_equal(&lhs, &self.act[composite]) {
                    return Err(SheafError::NotFunctorial { g: a, h });
                }
            }
        }
        for a in 0..g.n_arrows() {
            let m = &self.act[a];
            if m.rows() != m.cols() {
                // between stalks of different rank no invertible map exists
                return Err(SheafError::NotInvertible {
                    arrow: a,
                    coeff: self.coeff,
                });
            }
            let det = m.det();
            let ok = match self.coeff {
                Coefficients::Integers => det.abs().is_one(),
                Coefficients::Rationals => !det.is_zero(),
                Coefficients::PrimeField(p) => !(det % BigInt::from(p)).is_zero(),
            };
            if !ok {
                return Err(SheafError::NotInvertible {
                    arrow: a,
                    coeff: self.coeff,
                });
            }
        }
        Ok(())
    }

    fn is_identity(&self, m: &IntMatrix) -> bool {
        if m.rows() != m.cols() {
            return false;
        }
        self.mats_equal(m, &IntMatrix::identity(m.rows()))
    }

    pub(crate) fn mats_equal(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return false;
        }
        match self.coeff {
            Coefficients::PrimeField(p) => (&(a - b)).mod_p(p).is_zero(),
            _ => a == b,
        }
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coeff
    }

    pub fn stalk_rank(&self, x: ObjId) -> usize {
        self.stalk_ranks[x]
    }

    pub fn stalk_ranks(&self) -> &[usize] {
        &self.stalk_ranks
    }

    pub fn action(&self, g: ArrId) -> &IntMatrix {
        &self.act[g]
    }

    pub fn total_rank(&self) -> usize {
        self.stalk_ranks.iter().sum()
    }

    /// Structural equality over the same base (ranks and action matrices).
    pub fn same_data(&self, other: &GSheaf) -> bool {
        Arc::ptr_eq(&self.base, &other.base) || self.base.as_ref() == other.base.as_ref()
    }

    pub fn equal_sheaf(&self, other: &GSheaf) -> bool {
        self.same_data(other)
            && self.coeff == other.coeff
            && self.stalk_ranks == other.stalk_ranks
            && self
                .act
                .iter()
                .zip(&other.act)
                .all(|(a, b)| self.mats_equal(a, b))
    }

    /// Constant sheaf: all stalks of rank `r`, all actions the identity.
    pub fn constant(base: Arc<FiniteGroupoid>, coeff: Coefficients, rank: usize) -> Self {
        let stalk_ranks = vec![rank; base.n_objects()];
        let act = (0..base.n_arrows())
            .map(|_| IntMatrix::identity(rank))
            .collect();
        GSheaf {
            base,
            coeff,
            stalk_ranks,
            act,
        }
    }

    /// Free sheaf `E[G]` on a family of ranks over the objects: the stalk at
    /// `x` is the sum of `E_{t(g)}` over arrows `g` out of `x`, and arrows
    /// act by composition, permuting the blocks.
    pub fn free(
        base: Arc<FiniteGroupoid>,
        coeff: Coefficients,
        ranks: &[usize],
    ) -> Result<Self, SheafError> {
        assert_eq!(ranks.len(), base.n_objects());
        let block_rank = |g: ArrId| ranks[base.target(g)];
        let stalk_ranks: Vec<usize> = (0..base.n_objects())
            .map(|x| base.arrows_out_of(x).iter().map(|&g| block_rank(g)).sum())
            .collect();
        // offset of the block of arrow g inside the stalk at s(g)
        let block_offset = |g: ArrId| -> usize {
            base.arrows_out_of(base.source(g))
                .iter()
                .take_while(|&&h| h != g)
                .map(|&h| block_rank(h))
                .sum()
        };
        let mut act = Vec::with_capacity(base.n_arrows());
        for k in 0..base.n_arrows() {
            // act(k): stalk at t(k) -> stalk at s(k), block (g -> g o k)
            let (x_from, x_to) = (base.target(k), base.source(k));
            let mut m = IntMatrix::zero(stalk_ranks[x_to], stalk_ranks[x_from]);
            for &g in base.arrows_out_of(x_from) {
                let gk = base.compose_arrows(g, k);
                let r = block_rank(g);
                let (ro, co) = (block_offset(gk), block_offset(g));
                for i in 0..r {
                    m[(ro + i, co + i)] = BigInt::one();
                }
            }
            act.push(m);
        }
        GSheaf::new(base, coeff, stalk_ranks, act)
    }

    /// The zero sheaf.
    pub fn zero(base: Arc<FiniteGroupoid>, coeff: Coefficients) -> Self {
        GSheaf::constant(base, coeff, 0)
    }

    /// Stalkwise dual with transposed inverse actions (over a field).
    pub fn dual(&self) -> Result<GSheaf, SheafError> {
        if !self.coeff.is_field() {
            return Err(SheafError::IntegerTensorUnsupported);
        }
        let act = (0..self.base.n_arrows())
            .map(|g| invert_over(&self.act[g], self.coeff).transpose())
            .collect();
        GSheaf::new(
            self.base.clone(),
            self.coeff,
            self.stalk_ranks.clone(),
            act,
        )
    }
}

/// Inverse of a matrix known to be invertible over the coefficients,
/// returned with integer entries (residues over `F_p`; over `Q` the matrix
/// must be integrally invertible or come from a permutation-like action).
pub(crate) fn invert_over(m: &IntMatrix, coeff: Coefficients) -> IntMatrix {
    use crate::linalg::field::{FieldMatrix, FpCtx, RatCtx};
    let n = m.rows();
    match coeff {
        Coefficients::PrimeField(p) => {
            let ctx = FpCtx::new(p);
            let fm = FieldMatrix::from_int(&ctx, m);
            let inv = fm
                .solve_matrix(&FieldMatrix::identity(&ctx, n))
                .expect("invertible by validation");
            IntMatrix::from_fn(n, n, |i, j| BigInt::from(*inv.get(i, j)))
        }
        _ => {
            let ctx = RatCtx;
            let fm = FieldMatrix::from_int(&ctx, m);
            let inv = fm
                .solve_matrix(&FieldMatrix::identity(&ctx, n))
                .expect("invertible by validation");
            IntMatrix::from_fn(n, n, |i, j| {
                let v = inv.get(i, j);
                assert!(
                    v.denom().is_one(),
                    "inverse is not integral; dualize over a field instead"
                );
                v.numer().clone()
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::cyclic;
    use crate::groupoid::FiniteGroupoid;

    #[test]
    fn constant_sheaf_is_valid() {
        let g = cyclic(3).into_arc();
        let s = GSheaf::constant(g, Coefficients::Integers, 2);
        assert_eq!(s.total_rank(), 2);
    }

    #[test]
    fn free_sheaf_on_a_group_is_the_regular_representation() {
        let g = cyclic(3).into_arc();
        let s = GSheaf::free(g.clone(), Coefficients::Integers, &[1]).unwrap();
        assert_eq!(s.stalk_rank(0), 3);
        // actions are permutation matrices
        for a in 0..3 {
            let m = s.action(a);
            assert_eq!(m.det().abs(), BigInt::one());
        }
    }

    #[test]
    fn free_sheaf_on_discrete_base_is_the_family() {
        let g = FiniteGroupoid::discrete(3).into_arc();
        let s = GSheaf::free(g, Coefficients::Integers, &[2, 0, 1]).unwrap();
        assert_eq!(s.stalk_ranks(), &[2, 0, 1]);
    }

    #[test]
    fn zero_sheaf_on_empty_groupoid() {
        let g = FiniteGroupoid::empty().into_arc();
        let s = GSheaf::constant(g, Coefficients::Integers, 1);
        assert_eq!(s.total_rank(), 0);
    }

    #[test]
    fn non_functorial_action_rejected() {
        let g = cyclic(2).into_arc();
        // act(1) = -1 but act(1 o 1) = act(0) must be I; (-1)*(-1) = 1: fine.
        let ok = GSheaf::new(
            g.clone(),
            Coefficients::Integers,
            vec![1],
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        );
        assert!(ok.is_ok());
        // act(1) = 2 fails invertibility over Z and functoriality
        let bad = GSheaf::new(
            g,
            Coefficients::Integers,
            vec![1],
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![2]])],
        );
        assert!(bad.is_err());
    }
}
