use super::chain::{ChainComplex, ComplexError};
use crate::linalg::{Coefficients, IntMatrix};
use num_bigint::BigInt;


/// First-quadrant double complex with commuting differentials
/// `horiz: (p,q) -> (p-1,q)` and `vert: (p,q) -> (p,q-1)`.
///
/// The sign lives in totalization: the total boundary is
/// `horiz + (-1)^p vert`, which squares to zero exactly when the input
/// differentials commute.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    coeff: Coefficients,
    ranks: Vec<Vec<usize>>,           // [p][q]
    horiz: Vec<Vec<IntMatrix>>,       // horiz[p][q]: (p,q) -> (p-1,q), defined for p >= 1
    vert: Vec<Vec<IntMatrix>>,        // vert[p][q]: (p,q) -> (p,q-1), defined for q >= 1
}

impl DoubleComplex {
    /// `ranks[p][q]`, `horiz[p-1][q]` maps `(p,q) -> (p-1,q)` for `p >= 1`,
    /// `vert[p][q-1]` maps `(p,q) -> (p,q-1)` for `q >= 1`. Differentials
    /// must square to zero; commutation is verified at totalization.
    pub fn new(
        coeff: Coefficients,
        ranks: Vec<Vec<usize>>,
        horiz: Vec<Vec<IntMatrix>>,
        vert: Vec<Vec<IntMatrix>>,
    ) -> Result<Self, ComplexError> {
        let pmax = ranks.len();
        assert!(pmax > 0, "empty window");
        let qmax = ranks[0].len();
        assert!(ranks.iter().all(|r| r.len() == qmax), "ragged q ranks");
        assert_eq!(horiz.len(), pmax.saturating_sub(1));
        assert!(horiz.iter().all(|h| h.len() == qmax));
        assert_eq!(vert.len(), pmax);
        assert!(vert.iter().all(|v| v.len() == qmax.saturating_sub(1)));

        let dc = DoubleComplex {
            coeff,
            ranks,
            horiz,
            vert,
        };
        for p in 0..pmax {
            for q in 0..qmax {
                if p >= 1 {
                    let h = dc.horiz_at(p, q);
                    if h.rows() != dc.rank(p - 1, q) || h.cols() != dc.rank(p, q) {
                        return Err(ComplexError::ShapeMismatch { degree: p as i64 });
                    }
                }
                if q >= 1 {
                    let v = dc.vert_at(p, q);
                    if v.rows() != dc.rank(p, q - 1) || v.cols() != dc.rank(p, q) {
                        return Err(ComplexError::ShapeMismatch { degree: q as i64 });
                    }
                }
                if p >= 2 {
                    let sq = &dc.horiz_at(p - 1, q) * &dc.horiz_at(p, q);
                    if !dc.is_zero_mat(&sq) {
                        return Err(ComplexError::BoundaryCompositionNonzero { degree: p as i64 });
                    }
                }
                if q >= 2 {
                    let sq = &dc.vert_at(p, q - 1) * &dc.vert_at(p, q);
                    if !dc.is_zero_mat(&sq) {
                        return Err(ComplexError::BoundaryCompositionNonzero { degree: q as i64 });
                    }
                }
            }
        }
        Ok(dc)
    }

    fn is_zero_mat(&self, m: &IntMatrix) -> bool {
        match self.coeff {
            Coefficients::PrimeField(p) => m.mod_p(p).is_zero(),
            _ => m.is_zero(),
        }
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coeff
    }

    pub fn p_max(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn q_max(&self) -> usize {
        self.ranks[0].len() - 1
    }

    pub fn rank(&self, p: usize, q: usize) -> usize {
        if p < self.ranks.len() && q < self.ranks[0].len() {
            self.ranks[p][q]
        } else {
            0
        }
    }

    pub fn horiz_at(&self, p: usize, q: usize) -> IntMatrix {
        if p >= 1 && p <= self.p_max() && q <= self.q_max() {
            self.horiz[p - 1][q].clone()
        } else {
            IntMatrix::zero(self.rank(p.wrapping_sub(1), q), self.rank(p, q))
        }
    }

    pub fn vert_at(&self, p: usize, q: usize) -> IntMatrix {
        if q >= 1 && q <= self.q_max() && p <= self.p_max() {
            self.vert[p][q - 1].clone()
        } else {
            IntMatrix::zero(self.rank(p, q.wrapping_sub(1)), self.rank(p, q))
        }
    }

    /// Antidiagonal blocks `(p, q)` with `p+q = n`, ordered by increasing `p`.
    pub fn blocks(&self, n: usize) -> Vec<(usize, usize)> {
        (0..=n.min(self.p_max()))
            .filter(|&p| n - p <= self.q_max())
            .map(|p| (p, n - p))
            .collect()
    }

    /// Offset of block `(p, q)` within the total degree `p+q`, and the total
    /// rank of that degree.
    pub fn block_offset(&self, p: usize, q: usize) -> (usize, usize) {
        let n = p + q;
        let mut off = 0;
        let mut total = 0;
        for (bp, bq) in self.blocks(n) {
            if bp < p {
                off += self.rank(bp, bq);
            }
            total += self.rank(bp, bq);
        }
        (off, total)
    }

    /// Total boundary `Tot_n -> Tot_{n-1}` with the `(-1)^p` twist on the
    /// vertical differential.
    pub fn total_boundary(&self, n: usize) -> IntMatrix {
        if n == 0 {
            let (_, t0) = self.block_offset(0, 0);
            return IntMatrix::zero(0, t0);
        }
        let src = self.blocks(n);
        let tgt = self.blocks(n - 1);
        let rows: usize = tgt.iter().map(|&(p, q)| self.rank(p, q)).sum();
        let cols: usize = src.iter().map(|&(p, q)| self.rank(p, q)).sum();
        let mut m = IntMatrix::zero(rows, cols);
        for &(p, q) in &src {
            let (coff, _) = self.block_offset(p, q);
            // horizontal part into (p-1, q)
            if p >= 1 && tgt.contains(&(p - 1, q)) {
                let (roff, _) = self.block_offset(p - 1, q);
                let h = self.horiz_at(p, q);
                for i in 0..h.rows() {
                    for j in 0..h.cols() {
                        m[(roff + i, coff + j)] = h[(i, j)].clone();
                    }
                }
            }
            // twisted vertical part into (p, q-1)
            if q >= 1 && tgt.contains(&(p, q - 1)) {
                let (roff, _) = self.block_offset(p, q - 1);
                let v = self.vert_at(p, q);
                let sign = if p % 2 == 0 { 1 } else { -1 };
                for i in 0..v.rows() {
                    for j in 0..v.cols() {
                        m[(roff + i, coff + j)] = if sign == 1 {
                            v[(i, j)].clone()
                        } else {
                            -&v[(i, j)]
                        };
                    }
                }
            }
        }
        m
    }

    /// Totalization `Tot_n = direct sum over p+q = n`, with the boundary
    /// square verified; a failure means the input differentials do not
    /// commute.
    pub fn total_complex(&self) -> Result<ChainComplex, ComplexError> {
        let nmax = self.p_max() + self.q_max();
        let ranks: Vec<usize> = (0..=nmax)
            .map(|n| self.blocks(n).iter().map(|&(p, q)| self.rank(p, q)).sum())
            .collect();
        let boundaries: Vec<IntMatrix> = (1..=nmax).map(|n| self.total_boundary(n)).collect();
        for i in 0..boundaries.len().saturating_sub(1) {
            let prod = &boundaries[i] * &boundaries[i + 1];
            if !self.is_zero_mat(&prod) {
                return Err(ComplexError::SignConventionViolation);
            }
        }
        ChainComplex::new(self.coeff, 0, ranks, boundaries).map_err(|e| match e {
            ComplexError::BoundaryCompositionNonzero { .. } => {
                ComplexError::SignConventionViolation
            }
            other => other,
        })
    }

    /// A double complex concentrated in column `p = 0` built from a chain
    /// complex supported in nonnegative degrees.
    pub fn from_column(c: &ChainComplex) -> Self {
        assert!(c.lo() >= 0);
        let qmax = c.hi().max(0) as usize;
        let mut ranks = vec![vec![0usize; qmax + 1]];
        for q in 0..=qmax {
            ranks[0][q] = c.rank(q as i64);
        }
        let vert = vec![(1..=qmax).map(|q| c.boundary(q as i64)).collect()];
        DoubleComplex {
            coeff: c.coefficients(),
            ranks,
            horiz: vec![],
            vert,
        }
    }

    /// Entry of the total complex at `(p,q)` extracted from a total-degree
    /// vector.
    pub fn block_of_vec(&self, v: &[BigInt], p: usize, q: usize) -> Vec<BigInt> {
        let (off, total) = self.block_offset(p, q);
        assert_eq!(v.len(), total);
        v[off..off + self.rank(p, q)].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbGroupClass;

    #[test]
    fn one_column_total_is_the_column() {
        let c = ChainComplex::new(
            Coefficients::Integers,
            0,
            vec![1, 1],
            vec![IntMatrix::from_rows(&[vec![2]])],
        )
        .unwrap();
        let dc = DoubleComplex::from_column(&c);
        let tot = dc.total_complex().unwrap();
        assert_eq!(tot.rank(0), 1);
        assert_eq!(tot.rank(1), 1);
        assert_eq!(
            tot.homology(0).unwrap(),
            AbGroupClass::from_parts(0, vec![BigInt::from(2)])
        );
    }

    #[test]
    fn unit_square_over_f2_is_acyclic() {
        // ranks 1 at (0,0),(0,1),(1,0),(1,1); all differentials identity.
        // Over F2 the twist is invisible and Tot is the acyclic square.
        let ranks = vec![vec![1, 1], vec![1, 1]];
        let horiz = vec![vec![IntMatrix::identity(1), IntMatrix::identity(1)]];
        let vert = vec![vec![IntMatrix::identity(1)], vec![IntMatrix::identity(1)]];
        let dc = DoubleComplex::new(Coefficients::PrimeField(2), ranks, horiz, vert).unwrap();
        let tot = dc.total_complex().unwrap();
        assert_eq!((tot.rank(0), tot.rank(1), tot.rank(2)), (1, 2, 1));
        for n in 0..=2 {
            assert!(
                tot.homology_full_support(n).unwrap().is_zero(),
                "H_{n} of the unit square should vanish"
            );
        }
    }

    #[test]
    fn zero_double_complex() {
        let dc = DoubleComplex::new(
            Coefficients::Integers,
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![IntMatrix::zero(0, 0), IntMatrix::zero(0, 0)]],
            vec![vec![IntMatrix::zero(0, 0)], vec![IntMatrix::zero(0, 0)]],
        )
        .unwrap();
        let tot = dc.total_complex().unwrap();
        assert_eq!(tot.rank(0) + tot.rank(1) + tot.rank(2), 0);
    }

    #[test]
    fn anticommuting_input_is_rejected() {
        // identity square over Z without the sign convention: horiz and vert
        // commute, so this passes; flipping one vertical map to -1 makes the
        // pair anticommute and the twisted total square nonzero.
        let ranks = vec![vec![1, 1], vec![1, 1]];
        let horiz = vec![vec![IntMatrix::identity(1), IntMatrix::identity(1)]];
        let vert = vec![
            vec![IntMatrix::identity(1)],
            vec![IntMatrix::from_rows(&[vec![-1]])],
        ];
        let dc = DoubleComplex::new(Coefficients::Integers, ranks, horiz, vert).unwrap();
        assert!(matches!(
            dc.total_complex(),
            Err(ComplexError::SignConventionViolation)
        ));
    }
}
