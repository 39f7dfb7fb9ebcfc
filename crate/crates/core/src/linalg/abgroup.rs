use super::coeff::Coefficients;
use super::field::{FieldCtx, FieldMatrix, FpCtx, RatCtx};
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::solve;
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;

/// Isomorphism class of a finitely generated abelian group:
/// `Z^betti + Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ...`, every `d_i >= 2`.
///
/// Over a field the torsion list is empty and `betti` is the dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbGroupClass {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl AbGroupClass {
    pub fn free(betti: usize) -> Self {
        AbGroupClass {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Build from invariant factors, dropping units.
    pub fn from_parts(betti: usize, divisors: Vec<BigInt>) -> Self {
        let torsion: Vec<BigInt> = divisors.into_iter().filter(|d| d > &BigInt::one()).collect();
        AbGroupClass { betti, torsion }
    }
}

impl fmt::Display for AbGroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("boundary composition is nonzero over {0}: the complex is malformed")]
    CompositionNotZero(Coefficients),
    #[error("shape mismatch: out is {out_rows}x{out_cols}, in is {in_rows}x{in_cols}")]
    ShapeMismatch {
        out_rows: usize,
        out_cols: usize,
        in_rows: usize,
        in_cols: usize,
    },
}

fn composes_to_zero(out: &IntMatrix, inn: &IntMatrix, coeff: Coefficients) -> bool {
    let prod = out * inn;
    match coeff {
        Coefficients::PrimeField(p) => prod.mod_p(p).is_zero(),
        _ => prod.is_zero(),
    }
}

/// Homology `ker(out) / im(in)` of one degree of a complex
/// `C_{n+1} --in--> C_n --out--> C_{n-1}` over the chosen coefficients.
pub fn homology_at(
    boundary_in: &IntMatrix,
    boundary_out: &IntMatrix,
    coeff: Coefficients,
) -> Result<AbGroupClass, LinalgError> {
    if boundary_out.cols() != boundary_in.rows() {
        return Err(LinalgError::ShapeMismatch {
            out_rows: boundary_out.rows(),
            out_cols: boundary_out.cols(),
            in_rows: boundary_in.rows(),
            in_cols: boundary_in.cols(),
        });
    }
    if !composes_to_zero(boundary_out, boundary_in, coeff) {
        return Err(LinalgError::CompositionNotZero(coeff));
    }
    match coeff {
        Coefficients::Integers => {
            // Kernel basis spans a direct summand, so the coordinates of the
            // incoming boundaries have integer solutions; their SNF presents
            // the quotient.
            let k = solve::kernel(boundary_out);
            let x = solve::solve_matrix(&k, boundary_in)
                .expect("boundaries lie in the kernel lattice");
            let s = smith_normal_form(&x);
            let rank_x = s.rank();
            Ok(AbGroupClass::from_parts(
                k.cols() - rank_x,
                s.invariant_factors(),
            ))
        }
        Coefficients::Rationals => {
            let ctx = RatCtx;
            Ok(AbGroupClass::free(field_betti(
                &ctx,
                boundary_in,
                boundary_out,
            )))
        }
        Coefficients::PrimeField(p) => {
            let ctx = FpCtx::new(p);
            Ok(AbGroupClass::free(field_betti(
                &ctx,
                boundary_in,
                boundary_out,
            )))
        }
    }
}

fn field_betti<C: FieldCtx>(ctx: &C, boundary_in: &IntMatrix, boundary_out: &IntMatrix) -> usize {
    let out = FieldMatrix::from_int(ctx, boundary_out);
    let inn = FieldMatrix::from_int(ctx, boundary_in);
    let nullity = out.cols() - out.rank();
    nullity - inn.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_boundaries_give_free_group() {
        let z = IntMatrix::zero(2, 0);
        let out = IntMatrix::zero(0, 2);
        let h = homology_at(&z, &out, Coefficients::Integers).unwrap();
        assert_eq!(h, AbGroupClass::free(2));
    }

    #[test]
    fn z_mod_two_presentation() {
        // in = [2]: Z --2--> Z, out: Z -> 0
        let inn = IntMatrix::from_rows(&[vec![2]]);
        let out = IntMatrix::zero(0, 1);
        let h = homology_at(&inn, &out, Coefficients::Integers).unwrap();
        assert_eq!(h, AbGroupClass::from_parts(0, vec![BigInt::from(2)]));
        // over Q the 2 is invertible
        let hq = homology_at(&inn, &out, Coefficients::Rationals).unwrap();
        assert_eq!(hq, AbGroupClass::zero());
        // over F2 it is zero
        let h2 = homology_at(&inn, &out, Coefficients::PrimeField(2)).unwrap();
        assert_eq!(h2, AbGroupClass::free(1));
    }

    #[test]
    fn composition_checked() {
        let inn = IntMatrix::from_rows(&[vec![1], vec![0]]);
        let out = IntMatrix::from_rows(&[vec![1, 0]]);
        assert!(matches!(
            homology_at(&inn, &out, Coefficients::Integers),
            Err(LinalgError::CompositionNotZero(_))
        ));
        // but out*in = [3] is zero mod 3
        let inn3 = IntMatrix::from_rows(&[vec![3], vec![0]]);
        assert!(homology_at(&inn3, &out, Coefficients::PrimeField(3)).is_ok());
    }
}
