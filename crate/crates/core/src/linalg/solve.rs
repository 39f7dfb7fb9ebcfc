use super::matrix::IntMatrix;
use super::snf::{smith_normal_form, SnfDecomposition};
use num_bigint::BigInt;
use num_traits::Zero;

/// Basis of the integer kernel of `m`, returned as matrix columns.
///
/// The columns are part of a unimodular matrix, so they are a basis of the
/// kernel as a direct summand of the ambient lattice.
pub fn kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let r = s.rank();
    let free: Vec<usize> = (r..m.cols()).collect();
    s.v.select_cols(&free)
}

/// Cached SNF-backed solver for repeated solves against one matrix.
pub struct IntSolver {
    snf: SnfDecomposition,
    rows: usize,
    cols: usize,
}

impl IntSolver {
    pub fn new(m: &IntMatrix) -> Self {
        IntSolver {
            snf: smith_normal_form(m),
            rows: m.rows(),
            cols: m.cols(),
        }
    }

    /// One integer solution of `m x = b`, if any.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows);
        let c = self.snf.u.mul_vec(b);
        let n = self.rows.min(self.cols);
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, ci) in c.iter().enumerate() {
            let d = if i < n {
                self.snf.d[(i, i)].clone()
            } else {
                BigInt::zero()
            };
            if d.is_zero() {
                if !ci.is_zero() {
                    return None;
                }
            } else {
                let (q, r) = num_integer::Integer::div_rem(ci, &d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
        }
        Some(self.snf.v.mul_vec(&y))
    }

    pub fn solvable(&self, b: &[BigInt]) -> bool {
        self.solve(b).is_some()
    }
}

/// Solve `m x = b` over the integers.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    IntSolver::new(m).solve(b)
}

/// Solve `m X = B` columnwise; `None` if any column has no integer solution.
pub fn solve_matrix(m: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(m.rows(), b.rows());
    let solver = IntSolver::new(m);
    let mut out = IntMatrix::zero(m.cols(), b.cols());
    for j in 0..b.cols() {
        let x = solver.solve(&b.col(j))?;
        out.set_col(j, &x);
    }
    Some(out)
}

/// Is the subgroup generated by the columns of `a` contained in the one
/// generated by the columns of `b`? Both live in the same ambient lattice.
pub fn subgroup_contained(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.rows(), b.rows());
    let solver = IntSolver::new(b);
    (0..a.cols()).all(|j| solver.solvable(&a.col(j)))
}

/// Subgroup equality by mutual containment.
pub fn subgroup_eq(a: &IntMatrix, b: &IntMatrix) -> bool {
    subgroup_contained(a, b) && subgroup_contained(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_projection() {
        let m = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 1, 0]]);
        let k = kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn solve_with_divisibility() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert!(solve(&m, &[BigInt::from(4), BigInt::from(9)]).is_some());
        assert!(solve(&m, &[BigInt::from(1), BigInt::from(3)]).is_none());
    }

    #[test]
    fn subgroup_comparison() {
        // <(2,0),(0,2)> vs <(2,0),(0,4)>
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let b = IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]);
        assert!(subgroup_contained(&b, &a));
        assert!(!subgroup_contained(&a, &b));
        assert!(subgroup_eq(&a, &a));
    }
}
