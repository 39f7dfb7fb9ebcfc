use super::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Smith normal form `u * m * v = d` with `u`, `v` unimodular and `d`
/// diagonal, nonnegative, satisfying the divisibility chain `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d[(i, i)].is_zero()).count()
    }

    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Locate the nonzero entry of minimal absolute value in the trailing block
/// starting at `(k, k)`; minimal pivots keep intermediate entries small.
fn min_pivot(d: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..d.rows() {
        for j in k..d.cols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some(b) => {
                    if d[(i, j)].abs() < d[b].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Smith normal form. Total on every integer matrix, including empty and
/// zero matrices.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let swap_rows = |d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..d.cols() {
            let t = d[(a, j)].clone();
            d[(a, j)] = d[(b, j)].clone();
            d[(b, j)] = t;
        }
        for j in 0..u.cols() {
            let t = u[(a, j)].clone();
            u[(a, j)] = u[(b, j)].clone();
            u[(b, j)] = t;
        }
    };
    let swap_cols = |d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for i in 0..d.rows() {
            let t = d[(i, a)].clone();
            d[(i, a)] = d[(i, b)].clone();
            d[(i, b)] = t;
        }
        for i in 0..v.rows() {
            let t = v[(i, a)].clone();
            v[(i, a)] = v[(i, b)].clone();
            v[(i, b)] = t;
        }
    };
    // row_i -= q * row_k, tracked in u
    let row_op = |d: &mut IntMatrix, u: &mut IntMatrix, i: usize, k: usize, q: &BigInt| {
        for j in 0..d.cols() {
            let t = &d[(i, j)] - &(q * &d[(k, j)]);
            d[(i, j)] = t;
        }
        for j in 0..u.cols() {
            let t = &u[(i, j)] - &(q * &u[(k, j)]);
            u[(i, j)] = t;
        }
    };
    let col_op = |d: &mut IntMatrix, v: &mut IntMatrix, j: usize, k: usize, q: &BigInt| {
        for i in 0..d.rows() {
            let t = &d[(i, j)] - &(q * &d[(i, k)]);
            d[(i, j)] = t;
        }
        for i in 0..v.rows() {
            let t = &v[(i, j)] - &(q * &v[(i, k)]);
            v[(i, j)] = t;
        }
    };

    let n = rows.min(cols);
    for k in 0..n {
        let Some((pi, pj)) = min_pivot(&d, k) else {
            break;
        };
        swap_rows(&mut d, &mut u, k, pi);
        swap_cols(&mut d, &mut v, k, pj);

        loop {
            // clear column k below the pivot
            let mut dirty = false;
            for i in k + 1..rows {
                if !d[(i, k)].is_zero() {
                    let q = div_round(&d[(i, k)], &d[(k, k)]);
                    row_op(&mut d, &mut u, i, k, &q);
                    if !d[(i, k)].is_zero() {
                        // remainder smaller than pivot: promote it
                        swap_rows(&mut d, &mut u, k, i);
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !d[(k, j)].is_zero() {
                    let q = div_round(&d[(k, j)], &d[(k, k)]);
                    col_op(&mut d, &mut v, j, k, &q);
                    if !d[(k, j)].is_zero() {
                        swap_cols(&mut d, &mut v, k, j);
                        dirty = true;
                    }
                }
            }
            let col_clear = (k + 1..rows).all(|i| d[(i, k)].is_zero());
            let row_clear = (k + 1..cols).all(|j| d[(k, j)].is_zero());
            if !dirty && col_clear && row_clear {
                break;
            }
        }

        // enforce divisibility: pivot must divide the trailing block
        loop {
            let mut fixed = true;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if (&d[(i, j)] % &d[(k, k)]).is_zero() {
                        continue;
                    }
                    // mix row i into row k, then restart elimination at k
                    for jj in 0..cols {
                        let t = &d[(k, jj)] + &d[(i, jj)];
                        d[(k, jj)] = t;
                    }
                    for jj in 0..u.cols() {
                        let t = &u[(k, jj)] + &u[(i, jj)];
                        u[(k, jj)] = t;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
            if fixed {
                break;
            }
            loop {
                let mut dirty = false;
                for i in k + 1..rows {
                    if !d[(i, k)].is_zero() {
                        let q = div_round(&d[(i, k)], &d[(k, k)]);
                        row_op(&mut d, &mut u, i, k, &q);
                        if !d[(i, k)].is_zero() {
                            swap_rows(&mut d, &mut u, k, i);
                            dirty = true;
                        }
                    }
                }
                for j in k + 1..cols {
                    if !d[(k, j)].is_zero() {
                        let q = div_round(&d[(k, j)], &d[(k, k)]);
                        col_op(&mut d, &mut v, j, k, &q);
                        if !d[(k, j)].is_zero() {
                            swap_cols(&mut d, &mut v, k, j);
                            dirty = true;
                        }
                    }
                }
                let col_clear = (k + 1..rows).all(|i| d[(i, k)].is_zero());
                let row_clear = (k + 1..cols).all(|j| d[(k, j)].is_zero());
                if !dirty && col_clear && row_clear {
                    break;
                }
            }
        }

        if d[(k, k)].is_negative() {
            for j in 0..cols {
                let t = -&d[(k, j)];
                d[(k, j)] = t;
            }
            for j in 0..u.cols() {
                let t = -&u[(k, j)];
                u[(k, j)] = t;
            }
        }
    }

    SnfDecomposition { u, d, v }
}

/// Quotient rounded to nearest, which bounds remainders by |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    let two_r = &r * 2i32;
    if two_r.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Rank over the rationals via the Smith normal form.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d, "u*m*v != d");
        assert_eq!(s.u.det().abs(), BigInt::one());
        assert_eq!(s.v.det().abs(), BigInt::one());
        let n = s.d.rows().min(s.d.cols());
        for i in 0..n {
            assert!(!s.d[(i, i)].is_negative());
            for j in 0..s.d.cols() {
                if j != i {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            if !s.d[(i + 1, i + 1)].is_zero() || !s.d[(i, i)].is_zero() {
                if !s.d[(i, i)].is_zero() && !s.d[(i + 1, i + 1)].is_zero() {
                    assert!((&s.d[(i + 1, i + 1)] % &s.d[(i, i)]).is_zero());
                } else {
                    // zero may only follow nonzero
                    assert!(!(s.d[(i, i)].is_zero() && !s.d[(i + 1, i + 1)].is_zero()));
                }
            }
        }
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntMatrix::identity(3);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntMatrix::identity(3));
        check(&m);
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zero(2, 3);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntMatrix::zero(2, 3));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two_divisor_chain() {
        // d_1 = gcd of entries = 2, d_1*d_2 = gcd of 2x2 minors = |det| = 8
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d[(0, 0)], BigInt::from(2));
        assert_eq!(s.d[(1, 1)], BigInt::from(4));
        check(&m);
    }

    #[test]
    fn known_four_by_four() {
        let m = IntMatrix::from_rows(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let s = smith_normal_form(&m);
        let diag: Vec<BigInt> = (0..4).map(|i| s.d[(i, i)].clone()).collect();
        assert_eq!(
            diag,
            vec![
                BigInt::from(1),
                BigInt::from(3),
                BigInt::from(21),
                BigInt::from(0)
            ]
        );
        check(&m);
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::zero(0, 0));
        check(&IntMatrix::zero(0, 4));
        check(&IntMatrix::zero(4, 0));
    }
}
