use crate::groupoid::FiniteGroupoid;
use crate::linalg::Coefficients;
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CyclicError {
    #[error("algebras require field coefficients, got {0}")]
    NotAField(Coefficients),
    #[error("multiplication is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("the proposed unit is not a two-sided identity")]
    BadUnit,
    #[error("cyclic relation violated: {0}")]
    RelationViolation(String),
    #[error("window of length {window} is too small for degree {degree}")]
    WindowTooSmall { window: usize, degree: usize },
    #[error("the S-tower has not stabilized inside the window")]
    StabilizationNotReached,
    #[error("Hochschild and cyclic comparison theorems need characteristic zero")]
    CharacteristicNotZero,
}

/// A finite-dimensional unital algebra over a field, given by structure
/// constants on a basis. Associativity and the unit laws are validated on
/// every basis triple at construction.
#[derive(Debug, Clone)]
pub struct FinDimAlgebra {
    coeff: Coefficients,
    dim: usize,
    /// `product[i][j]` = expansion of `e_i * e_j`
    product: Vec<Vec<Vec<(usize, BigInt)>>>,
    unit: Vec<BigInt>,
}

impl FinDimAlgebra {
    pub fn new(
        coeff: Coefficients,
        dim: usize,
        product: Vec<Vec<Vec<(usize, BigInt)>>>,
        unit: Vec<BigInt>,
    ) -> Result<Self, CyclicError> {
        if !coeff.is_field() {
            return Err(CyclicError::NotAField(coeff));
        }
        assert_eq!(product.len(), dim);
        assert!(product.iter().all(|row| row.len() == dim));
        assert_eq!(unit.len(), dim);
        let a = FinDimAlgebra {
            coeff,
            dim,
            product,
            unit,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<(), CyclicError> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let left = self.mul_vec(&self.mul_basis(i, j), &basis_vec(self.dim, k));
                    let right = self.mul_vec(&basis_vec(self.dim, i), &self.mul_basis(j, k));
                    if !self.vec_eq(&left, &right) {
                        return Err(CyclicError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        for i in 0..self.dim {
            let e = basis_vec(self.dim, i);
            if !self.vec_eq(&self.mul_vec(&self.unit, &e), &e)
                || !self.vec_eq(&self.mul_vec(&e, &self.unit), &e)
            {
                return Err(CyclicError::BadUnit);
            }
        }
        Ok(())
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coeff
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[BigInt] {
        &self.unit
    }

    /// Expansion of `e_i * e_j` in the basis.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, BigInt)] {
        &self.product[i][j]
    }

    fn mul_basis(&self, i: usize, j: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim];
        for (k, c) in &self.product[i][j] {
            v[*k] += c;
        }
        v
    }

    pub fn mul_vec(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim];
        for i in 0..self.dim {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if b[j].is_zero() {
                    continue;
                }
                for (k, c) in &self.product[i][j] {
                    out[*k] += &a[i] * &b[j] * c;
                }
            }
        }
        out
    }

    fn vec_eq(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        match self.coeff {
            Coefficients::PrimeField(p) => a
                .iter()
                .zip(b)
                .all(|(x, y)| ((x - y) % BigInt::from(p)).is_zero()),
            _ => a == b,
        }
    }

    /// Dimension of `A/[A,A]`: the independent oracle for `HH_0`.
    pub fn commutator_quotient_dim(&self) -> usize {
        use crate::complexes::coeff_rank;
        use crate::linalg::IntMatrix;
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul_basis(i, j);
                let ji = self.mul_basis(j, i);
                cols.push(ij.iter().zip(&ji).map(|(a, b)| a - b).collect());
            }
        }
        let m = IntMatrix::from_fn(self.dim, cols.len(), |r, c| cols[c][r].clone());
        self.dim - coeff_rank(&m, self.coeff)
    }
}

fn basis_vec(dim: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); dim];
    v[i] = BigInt::one();
    v
}

/// The convolution algebra of a finite groupoid: arrows form the basis, the
/// product of two arrows is their composition when defined and zero
/// otherwise, and the unit is the sum of the object units.
pub fn convolution_algebra(
    g: &FiniteGroupoid,
    coeff: Coefficients,
) -> Result<FinDimAlgebra, CyclicError> {
    let dim = g.n_arrows();
    let mut product = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if let Some(k) = g.try_compose(i, j) {
                product[i][j].push((k, BigInt::one()));
            }
        }
    }
    let mut unit = vec![BigInt::zero(); dim];
    for x in 0..g.n_objects() {
        unit[g.unit_of(x)] = BigInt::one();
    }
    FinDimAlgebra::new(coeff, dim, product, unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::cyclic;

    #[test]
    fn group_algebra() {
        let a = convolution_algebra(&cyclic(3), Coefficients::Rationals).unwrap();
        assert_eq!(a.dim(), 3);
        // commutative: HH_0 oracle gives the full dimension
        assert_eq!(a.commutator_quotient_dim(), 3);
    }

    #[test]
    fn pair_groupoid_gives_matrix_units() {
        let a = convolution_algebra(&FiniteGroupoid::pair(2), Coefficients::Rationals).unwrap();
        assert_eq!(a.dim(), 4);
        // M_2(Q): trace is the only commutator-invariant functional
        assert_eq!(a.commutator_quotient_dim(), 1);
        // arrow (x <- y) is e_{xy}: e_{01} * e_{11}: compose((0<-1),(1<-1))
        let p = a.basis_product(1, 3);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].0, 1);
    }

    #[test]
    fn discrete_groupoid_gives_a_product_of_fields() {
        let a = convolution_algebra(&FiniteGroupoid::discrete(3), Coefficients::Rationals).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.commutator_quotient_dim(), 3);
    }

    use crate::groupoid::FiniteGroupoid;
}
