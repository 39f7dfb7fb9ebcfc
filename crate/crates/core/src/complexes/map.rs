use super::chain::{ChainComplex, ComplexError};
use crate::linalg::{Coefficients, IntMatrix};

/// A degreewise map of chain complexes on a common window, validated to
/// commute with the boundaries.
#[derive(Clone, Debug)]
pub struct ComplexMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    maps: Vec<IntMatrix>, // maps[i]: source degree lo+i -> target degree lo+i
}

impl ComplexMap {
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        maps: Vec<IntMatrix>,
    ) -> Result<Self, ComplexError> {
        if source.lo() != target.lo() || source.hi() != target.hi() {
            return Err(ComplexError::WindowMismatch);
        }
        let lo = source.lo();
        let len = (source.hi() - lo + 1) as usize;
        assert_eq!(maps.len(), len, "one matrix per window degree");
        for (i, f) in maps.iter().enumerate() {
            let n = lo + i as i64;
            if f.rows() != target.rank(n) || f.cols() != source.rank(n) {
                return Err(ComplexError::ShapeMismatch { degree: n });
            }
        }
        let coeff = source.coefficients();
        for i in 1..len {
            let n = lo + i as i64;
            // target boundary o f_n = f_{n-1} o source boundary
            let lhs = &target.boundary(n) * &maps[i];
            let rhs = &maps[i - 1] * &source.boundary(n);
            let diff = &lhs - &rhs;
            let ok = match coeff {
                Coefficients::PrimeField(p) => diff.mod_p(p).is_zero(),
                _ => diff.is_zero(),
            };
            if !ok {
                return Err(ComplexError::NotAChainMap { degree: n });
            }
        }
        Ok(ComplexMap {
            source,
            target,
            maps,
        })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let lo = c.lo();
        let maps = (0..=(c.hi() - lo))
            .map(|i| IntMatrix::identity(c.rank(lo + i)))
            .collect();
        ComplexMap {
            source: c.clone(),
            target: c.clone(),
            maps,
        }
    }

    pub fn matrix(&self, n: i64) -> IntMatrix {
        let i = n - self.source.lo();
        if i < 0 || i as usize >= self.maps.len() {
            IntMatrix::zero(self.target.rank(n), self.source.rank(n))
        } else {
            self.maps[i as usize].clone()
        }
    }

    /// Mapping cone: `cone(f)_n = A_{n-1} + B_n` with boundary
    /// `(a, b) -> (-dA a, dB b - f a)`.
    pub fn cone(&self) -> ChainComplex {
        let lo = self.source.lo();
        let hi = self.source.hi() + 1;
        let ranks: Vec<usize> = (lo..=hi)
            .map(|n| self.source.rank(n - 1) + self.target.rank(n))
            .collect();
        let mut boundaries = Vec::new();
        for n in lo + 1..=hi {
            let a_rows = self.source.rank(n - 2);
            let b_rows = self.target.rank(n - 1);
            let a_cols = self.source.rank(n - 1);
            let b_cols = self.target.rank(n);
            let da = self.source.boundary(n - 1);
            let db = self.target.boundary(n);
            let f = self.matrix(n - 1);
            let m = IntMatrix::from_fn(a_rows + b_rows, a_cols + b_cols, |i, j| {
                if i < a_rows && j < a_cols {
                    -&da[(i, j)]
                } else if i >= a_rows && j < a_cols {
                    -&f[(i - a_rows, j)]
                } else if i >= a_rows && j >= a_cols {
                    db[(i - a_rows, j - a_cols)].clone()
                } else {
                    num_bigint::BigInt::from(0)
                }
            });
            boundaries.push(m);
        }
        ChainComplex::new(self.source.coefficients(), lo, ranks, boundaries)
            .expect("cone of a chain map is a complex")
    }

    /// True iff the mapping cone is acyclic in every degree of its support,
    /// i.e. the map induces isomorphisms on homology throughout the window.
    pub fn is_quasi_isomorphism(&self) -> Result<bool, ComplexError> {
        let cone = self.cone();
        for n in cone.lo()..=cone.hi() {
            if !cone.homology_full_support(n)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbGroupClass;

    fn mod2_complex() -> ChainComplex {
        ChainComplex::new(
            Coefficients::Integers,
            0,
            vec![1, 1],
            vec![IntMatrix::from_rows(&[vec![2]])],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_quasi_iso() {
        let c = mod2_complex();
        assert!(ComplexMap::identity(&c).is_quasi_isomorphism().unwrap());
    }

    #[test]
    fn zero_map_on_nontrivial_homology_is_not() {
        let c = mod2_complex();
        let z = ComplexMap::new(
            c.clone(),
            c.clone(),
            vec![IntMatrix::zero(1, 1), IntMatrix::zero(1, 1)],
        )
        .unwrap();
        assert!(!z.is_quasi_isomorphism().unwrap());
        assert_eq!(
            c.homology(0).unwrap(),
            AbGroupClass::from_parts(0, vec![num_bigint::BigInt::from(2)])
        );
    }

    #[test]
    fn chain_map_condition_is_checked() {
        let c = mod2_complex();
        let bad = ComplexMap::new(
            c.clone(),
            c,
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![3]])],
        );
        assert!(matches!(bad, Err(ComplexError::NotAChainMap { .. })));
    }
}
