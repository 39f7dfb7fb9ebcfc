use super::matrix::IntMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Runtime field context. `p` must be prime for [`FpCtx`]; callers validate
/// through [`super::Coefficients`].
pub trait FieldCtx: Clone + Send + Sync {
    type El: Clone + PartialEq + std::fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    /// None exactly on zero.
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
    fn from_bigint(&self, a: &BigInt) -> Self::El;
}

#[derive(Clone)]
pub struct RatCtx;

impl FieldCtx for RatCtx {
    type El = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_bigint(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
}

#[derive(Clone)]
pub struct FpCtx {
    pub p: u64,
}

impl FpCtx {
    pub fn new(p: u64) -> Self {
        FpCtx { p }
    }
    fn norm(&self, a: u128) -> u64 {
        (a % self.p as u128) as u64
    }
}

impl FieldCtx for FpCtx {
    type El = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.norm(*a as u128 + *b as u128)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.norm(*a as u128 + (self.p - *b % self.p) as u128)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.norm(*a as u128 * *b as u128)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a % self.p == 0 {
            return None;
        }
        // extended Euclid
        let (mut r0, mut r1) = (self.p as i128, (*a % self.p) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let t = t0.rem_euclid(self.p as i128);
        Some(t as u64)
    }
    fn from_bigint(&self, a: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = a % &p;
        if r.is_negative() {
            r += &p;
        }
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
}

/// Dense matrix over a runtime field.
#[derive(Clone)]
pub struct FieldMatrix<C: FieldCtx> {
    pub ctx: C,
    rows: usize,
    cols: usize,
    data: Vec<C::El>,
}

impl<C: FieldCtx> FieldMatrix<C> {
    pub fn zero(ctx: &C, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: &C, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_int(ctx: &C, m: &IntMatrix) -> Self {
        let mut out = Self::zero(ctx, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, ctx.from_bigint(&m[(i, j)]));
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &C::El {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: C::El) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.ctx.is_zero(e))
    }

    pub fn col(&self, j: usize) -> Vec<C::El> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C::El]) {
        for i in 0..self.rows {
            self.set(i, j, v[i].clone());
        }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::zero(&self.ctx, self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zero(&self.ctx, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let ctx = &self.ctx;
        let mut out = Self::zero(ctx, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ctx.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !ctx.is_zero(b) {
                        let t = ctx.add(out.get(i, j), &ctx.mul(a, b));
                        out.set(i, j, t);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C::El]) -> Vec<C::El> {
        assert_eq!(v.len(), self.cols);
        let ctx = &self.ctx;
        (0..self.rows)
            .map(|i| {
                let mut acc = ctx.zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !ctx.is_zero(a) && !ctx.is_zero(&v[j]) {
                        acc = ctx.add(&acc, &ctx.mul(a, &v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = Self::zero(&self.ctx, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.ctx.sub(self.get(i, j), rhs.get(i, j)));
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let ctx = self.ctx.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&i| !ctx.is_zero(self.get(i, col))) else {
                continue;
            };
            if pr != row {
                for j in 0..self.cols {
                    self.data.swap(row * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = ctx.inv(self.get(row, col)).expect("nonzero pivot");
            for j in col..self.cols {
                let t = ctx.mul(self.get(row, j), &inv);
                self.set(row, j, t);
            }
            for i in 0..self.rows {
                if i == row || ctx.is_zero(self.get(i, col)) {
                    continue;
                }
                let f = self.get(i, col).clone();
                for j in col..self.cols {
                    let t = ctx.sub(self.get(i, j), &ctx.mul(&f, self.get(row, j)));
                    self.set(i, j, t);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Kernel basis as matrix columns.
    pub fn kernel(&self) -> Self {
        let ctx = self.ctx.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zero(&ctx, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, ctx.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, ctx.neg(m.get(pr, fc)));
            }
        }
        out
    }

    /// One solution of `self * x = b`, if consistent.
    pub fn solve(&self, b: &[C::El]) -> Option<Vec<C::El>> {
        assert_eq!(b.len(), self.rows);
        let ctx = self.ctx.clone();
        let mut aug = Self::zero(&ctx, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![ctx.zero(); self.cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(pr, self.cols).clone();
        }
        Some(x)
    }

    pub fn solve_matrix(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows);
        let mut out = Self::zero(&self.ctx, self.cols, b.cols);
        for j in 0..b.cols {
            let x = self.solve(&b.col(j))?;
            out.set_col(j, &x);
        }
        Some(out)
    }
}

/// Incremental column-space tracker: feeds columns one at a time and reports
/// whether each enlarged the span. Used to extend bases deterministically.
pub struct SpanTracker<C: FieldCtx> {
    ctx: C,
    dim: usize,
    /// rows in echelon form, each with its pivot position
    rows: Vec<(usize, Vec<C::El>)>,
}

impl<C: FieldCtx> SpanTracker<C> {
    pub fn new(ctx: &C, dim: usize) -> Self {
        SpanTracker {
            ctx: ctx.clone(),
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current span; returns the residual.
    pub fn reduce(&self, v: &[C::El]) -> Vec<C::El> {
        let ctx = &self.ctx;
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            if !ctx.is_zero(&v[*piv]) {
                let f = v[*piv].clone();
                for j in 0..self.dim {
                    v[j] = ctx.sub(&v[j], &ctx.mul(&f, &row[j]));
                }
            }
        }
        v
    }

    /// Insert a vector; true if it enlarged the span.
    pub fn insert(&mut self, v: &[C::El]) -> bool {
        assert_eq!(v.len(), self.dim);
        let ctx = self.ctx.clone();
        let mut v = self.reduce(v);
        let Some(piv) = (0..self.dim).find(|&j| !ctx.is_zero(&v[j])) else {
            return false;
        };
        let inv = ctx.inv(&v[piv]).unwrap();
        for x in v.iter_mut() {
            *x = ctx.mul(x, &inv);
        }
        self.rows.push((piv, v));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }

    pub fn contains(&self, v: &[C::El]) -> bool {
        let r = self.reduce(v);
        r.iter().all(|x| self.ctx.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse() {
        let f = FpCtx::new(7);
        for a in 1..7u64 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert!(f.inv(&0).is_none());
    }

    #[test]
    fn kernel_and_solve_fp() {
        let f = FpCtx::new(5);
        let m = FieldMatrix::from_int(&f, &IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]));
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
        let b = vec![3u64, 1u64]; // (3, 6) reduced mod 5
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn rational_rank_matches_bareiss() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 1], vec![6, 8, 0], vec![8, 12, 1]]);
        let fm = FieldMatrix::from_int(&RatCtx, &m);
        assert_eq!(fm.rank(), m.rank_bareiss());
    }

    #[test]
    fn span_tracker_extends() {
        let f = FpCtx::new(3);
        let mut t = SpanTracker::new(&f, 3);
        assert!(t.insert(&[1, 0, 1]));
        assert!(!t.insert(&[2, 0, 2]));
        assert!(t.insert(&[0, 1, 0]));
        assert_eq!(t.rank(), 2);
        assert!(t.contains(&[1, 1, 1]));
        assert!(!t.contains(&[0, 0, 1]));
    }
}
