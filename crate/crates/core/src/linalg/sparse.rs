use super::abgroup::{homology_at, AbGroupClass, LinalgError};
use super::coeff::Coefficients;
use super::matrix::IntMatrix;
use num_bigint::BigInt;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

/// Sparse integer matrix in triplet-with-index form, rows and columns
/// addressable both ways. Entries are machine integers; the reducer only
/// performs checked arithmetic and leaves anything that would overflow to
/// the dense arbitrary-precision backend.
#[derive(Clone, Debug, Default)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    row_data: Vec<HashMap<u32, i64>>,
    col_rows: Vec<HashSet<u32>>,
}

impl SparseMat {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            row_data: vec![HashMap::new(); rows],
            col_rows: vec![HashSet::new(); cols],
        }
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            return;
        }
        let e = self.row_data[r].entry(c as u32).or_insert(0);
        *e += v;
        if *e == 0 {
            self.row_data[r].remove(&(c as u32));
            self.col_rows[c].remove(&(r as u32));
        } else {
            self.col_rows[c].insert(r as u32);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.row_data[r].get(&(c as u32)).copied().unwrap_or(0)
    }

    fn set(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            self.row_data[r].remove(&(c as u32));
            self.col_rows[c].remove(&(r as u32));
        } else {
            self.row_data[r].insert(c as u32, v);
            self.col_rows[c].insert(r as u32);
        }
    }

    pub fn row_nnz(&self, r: usize) -> usize {
        self.row_data[r].len()
    }

    /// Entries of one row; iteration order is unspecified, so callers must
    /// only accumulate.
    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.row_data[r].iter().map(|(&c, &v)| (c as usize, v))
    }

    /// Entries of one column, sorted by row.
    pub fn col_entries(&self, c: usize) -> Vec<(usize, i64)> {
        let mut v: Vec<(usize, i64)> = self.col_rows[c]
            .iter()
            .map(|&r| (r as usize, self.get(r as usize, c)))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn col_nnz(&self, c: usize) -> usize {
        self.col_rows[c].len()
    }

    pub fn nnz(&self) -> usize {
        self.row_data.iter().map(|r| r.len()).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.rows, self.cols);
        for (r, row) in self.row_data.iter().enumerate() {
            for (&c, &v) in row {
                m[(r, c as usize)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMat::new(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// `self * rhs` with i128 accumulation; panics on i64 overflow of a
    /// final entry (callers work with small incidence-type values).
    pub fn mul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = SparseMat::new(self.rows, rhs.cols);
        for c in 0..rhs.cols {
            let mut acc: HashMap<u32, i128> = HashMap::new();
            for &mid in &rhs.col_rows[c] {
                let v = rhs.get(mid as usize, c) as i128;
                for &r in &self.col_rows[mid as usize] {
                    let w = self.get(r as usize, mid as usize) as i128;
                    *acc.entry(r).or_insert(0) += v * w;
                }
            }
            for (r, v) in acc {
                if v != 0 {
                    out.set(r as usize, c, i64::try_from(v).expect("entry fits i64"));
                }
            }
        }
        out
    }

    pub fn add_scaled(&self, rhs: &SparseMat, k: i64) -> SparseMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (r, row) in rhs.row_data.iter().enumerate() {
            for (&c, &v) in row {
                out.add_entry(r, c as usize, v.checked_mul(k).expect("entry fits i64"));
            }
        }
        out
    }

    /// Equality as maps over the coefficient ring.
    pub fn eq_mod(&self, rhs: &SparseMat, modulus: u64) -> bool {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return false;
        }
        let diff = self.add_scaled(rhs, -1);
        if modulus == 0 {
            diff.nnz() == 0
        } else {
            diff.row_data
                .iter()
                .all(|row| row.values().all(|&v| v.rem_euclid(modulus as i64) == 0))
        }
    }

    pub fn is_zero_mod(&self, modulus: u64) -> bool {
        if modulus == 0 {
            self.nnz() == 0
        } else {
            self.row_data
                .iter()
                .all(|row| row.values().all(|&v| v.rem_euclid(modulus as i64) == 0))
        }
    }

    pub fn from_dense(m: &IntMatrix) -> Option<Self> {
        let mut s = SparseMat::new(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let e = &m[(r, c)];
                if !num_traits::Zero::is_zero(e) {
                    s.set(r, c, i64::try_from(e).ok()?);
                }
            }
        }
        Some(s)
    }
}

/// Bounded chain complex with sparse boundaries: `boundaries[k]` maps degree
/// `lo + k + 1` to degree `lo + k` and has shape `ranks[k] x ranks[k+1]`.
#[derive(Clone, Debug)]
pub struct SparseComplex {
    pub lo: i64,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<SparseMat>,
}

impl SparseComplex {
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn rank(&self, degree: i64) -> usize {
        let i = degree - self.lo;
        if i < 0 || i as usize >= self.ranks.len() {
            0
        } else {
            self.ranks[i as usize]
        }
    }

    /// `d o d = 0` over the integers (sufficient for every coefficient ring
    /// used here, since all boundaries are integral).
    pub fn check_square_zero(&self) -> bool {
        for k in 0..self.boundaries.len().saturating_sub(1) {
            let lower = &self.boundaries[k];
            let upper = &self.boundaries[k + 1];
            for c in 0..upper.cols {
                let mut acc: HashMap<u32, i128> = HashMap::new();
                for &mid in &upper.col_rows[c] {
                    let v = upper.get(mid as usize, c) as i128;
                    for &r in &lower.col_rows[mid as usize] {
                        let w = lower.get(r as usize, mid as usize) as i128;
                        *acc.entry(r).or_insert(0) += v * w;
                    }
                }
                if acc.values().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        true
    }
}

enum Mode {
    Int,
    Fp(u64),
}

/// Homotopy-equivalence reduction of a sparse complex by unit pivots.
///
/// Each step picks an entry of a boundary matrix that is invertible in the
/// coefficient ring (a unit +-1 over Z and Q, any nonzero residue over F_p),
/// performs the Gaussian update on that matrix, and deletes the paired
/// generators, removing the corresponding row of the boundary above and
/// column of the boundary below. This is the standard reduction move of
/// algebraic Morse theory; it preserves the homology of the complex in every
/// degree, including torsion over Z. Pivots are chosen by minimal Markowitz
/// fill with deterministic tie-breaking, so results are reproducible.
struct Reducer {
    mode: Mode,
    mats: Vec<SparseMat>,
    row_alive: Vec<Vec<bool>>, // per degree index
    // heap of Reverse((cost, mat, col, row))
    heap: BinaryHeap<Reverse<(u64, u32, u32, u32)>>,
}

impl Reducer {
    fn new(cx: &SparseComplex, mode: Mode) -> Self {
        let mut mats = cx.boundaries.clone();
        if let Mode::Fp(p) = mode {
            for m in &mut mats {
                let mut updates = Vec::new();
                for (r, row) in m.row_data.iter().enumerate() {
                    for (&c, &v) in row {
                        let red = (v as i128).rem_euclid(p as i128) as i64;
                        if red != v {
                            updates.push((r, c as usize, red));
                        }
                    }
                }
                for (r, c, v) in updates {
                    m.set(r, c, v);
                }
            }
        }
        let row_alive = cx.ranks.iter().map(|&r| vec![true; r]).collect();
        let mut red = Reducer {
            mode,
            mats,
            row_alive,
            heap: BinaryHeap::new(),
        };
        for mi in 0..red.mats.len() {
            for r in 0..red.mats[mi].rows {
                let cols: Vec<u32> = red.mats[mi].row_data[r].keys().copied().collect();
                for c in cols {
                    red.push_candidate(mi, r, c as usize);
                }
            }
        }
        red
    }

    fn is_unit(&self, v: i64) -> bool {
        match self.mode {
            Mode::Int => v == 1 || v == -1,
            Mode::Fp(p) => v.rem_euclid(p as i64) != 0,
        }
    }

    fn cost(&self, mi: usize, r: usize, c: usize) -> u64 {
        let m = &self.mats[mi];
        ((m.row_nnz(r) - 1) as u64) * ((m.col_nnz(c) - 1) as u64)
    }

    fn push_candidate(&mut self, mi: usize, r: usize, c: usize) {
        let v = self.mats[mi].get(r, c);
        if v != 0 && self.is_unit(v) {
            let cost = self.cost(mi, r, c);
            self.heap
                .push(Reverse((cost, mi as u32, c as u32, r as u32)));
        }
    }

    /// Inverse of a unit in the coefficient ring, as an i64 representative.
    fn unit_inv(&self, v: i64) -> i64 {
        match self.mode {
            Mode::Int => v, // +-1 is its own inverse
            Mode::Fp(p) => {
                let (mut r0, mut r1) = (p as i128, (v as i128).rem_euclid(p as i128));
                let (mut t0, mut t1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                t0.rem_euclid(p as i128) as i64
            }
        }
    }

    fn norm(&self, v: i128) -> Option<i64> {
        match self.mode {
            Mode::Int => i64::try_from(v).ok(),
            Mode::Fp(p) => Some(v.rem_euclid(p as i128) as i64),
        }
    }

    fn run(&mut self) {
        while let Some(Reverse((cost, mi, c, r))) = self.heap.pop() {
            let (mi, r, c) = (mi as usize, r as usize, c as usize);
            let v = self.mats[mi].get(r, c);
            if v == 0 || !self.is_unit(v) {
                continue;
            }
            // accept only candidates whose recorded cost is still accurate;
            // anything stale goes back so the heap minimum stays a true
            // minimal-fill pivot
            let cur = self.cost(mi, r, c);
            if cur != cost {
                self.heap
                    .push(Reverse((cur, mi as u32, c as u32, r as u32)));
                continue;
            }
            if !self.apply_pivot(mi, r, c) {
                // would overflow: leave it to the dense backend
                continue;
            }
        }
    }

    /// Eliminate with pivot at `(r, c)` of matrix `mi`; false if any update
    /// would overflow i64 (the pivot is then skipped entirely).
    fn apply_pivot(&mut self, mi: usize, r: usize, c: usize) -> bool {
        let piv = self.mats[mi].get(r, c);
        let piv_inv = self.unit_inv(piv);
        // two-phase: compute every fill-in value first with checked arithmetic
        let col_entries: Vec<(usize, i64)> = {
            let m = &self.mats[mi];
            let mut v: Vec<(usize, i64)> = m.col_rows[c]
                .iter()
                .filter(|&&i| i as usize != r)
                .map(|&i| (i as usize, m.get(i as usize, c)))
                .collect();
            v.sort_unstable();
            v
        };
        let row_entries: Vec<(usize, i64)> = {
            let m = &self.mats[mi];
            let mut v: Vec<(usize, i64)> = m.row_data[r]
                .iter()
                .filter(|&(&j, _)| j as usize != c)
                .map(|(&j, &w)| (j as usize, w))
                .collect();
            v.sort_unstable();
            v
        };
        let mut updates: Vec<(usize, usize, i64)> = Vec::new();
        for &(i, a) in &col_entries {
            for &(j, b) in &row_entries {
                // new = old - a * piv_inv * b
                let prod = (a as i128) * (piv_inv as i128) * (b as i128);
                let old = self.mats[mi].get(i, j) as i128;
                let Some(new) = self.norm(old - prod) else {
                    return false;
                };
                updates.push((i, j, new));
            }
        }
        for (i, j, v) in updates {
            self.mats[mi].set(i, j, v);
            if v != 0 && self.is_unit(v) {
                self.push_candidate(mi, i, j);
            }
        }
        // remove the pivot row and column from this matrix
        let row_cols: Vec<u32> = self.mats[mi].row_data[r].keys().copied().collect();
        for j in row_cols {
            self.mats[mi].set(r, j as usize, 0);
        }
        let col_rows: Vec<u32> = self.mats[mi].col_rows[c].iter().copied().collect();
        for i in col_rows {
            self.mats[mi].set(i as usize, c, 0);
        }
        // kill generator c in degree mi+1: drop its row in the boundary above
        self.row_alive[mi + 1][c] = false;
        if mi + 1 < self.mats.len() {
            let cols: Vec<u32> = self.mats[mi + 1].row_data[c].keys().copied().collect();
            for j in cols {
                self.mats[mi + 1].set(c, j as usize, 0);
            }
        }
        // kill generator r in degree mi: drop its column in the boundary below
        self.row_alive[mi][r] = false;
        if mi > 0 {
            let rows: Vec<u32> = self.mats[mi - 1].col_rows[r].iter().copied().collect();
            for i in rows {
                self.mats[mi - 1].set(i as usize, r, 0);
            }
        }
        true
    }

    /// Compact the surviving generators into a dense remainder complex.
    fn remainder(&self, lo: i64) -> (Vec<usize>, Vec<IntMatrix>, i64) {
        let maps: Vec<Vec<usize>> = self
            .row_alive
            .iter()
            .map(|alive| {
                alive
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let ranks: Vec<usize> = maps.iter().map(|m| m.len()).collect();
        let mut bnds = Vec::new();
        for (k, m) in self.mats.iter().enumerate() {
            let rmap = &maps[k];
            let cmap = &maps[k + 1];
            let mut dense = IntMatrix::zero(rmap.len(), cmap.len());
            for (new_r, &old_r) in rmap.iter().enumerate() {
                for (new_c, &old_c) in cmap.iter().enumerate() {
                    let v = m.get(old_r, old_c);
                    if v != 0 {
                        dense[(new_r, new_c)] = BigInt::from(v);
                    }
                }
            }
            bnds.push(dense);
        }
        (ranks, bnds, lo)
    }
}

/// Homology of a sparse complex in every degree of its window, computed by
/// unit-pivot reduction followed by Smith normal form on the small remainder.
///
/// The complex is taken to be zero outside its window; truncation semantics
/// are the caller's responsibility.
pub fn sparse_homology(
    cx: &SparseComplex,
    coeff: Coefficients,
) -> Result<Vec<AbGroupClass>, LinalgError> {
    let mode = match coeff {
        Coefficients::PrimeField(p) => Mode::Fp(p),
        _ => Mode::Int,
    };
    let mut red = Reducer::new(cx, mode);
    red.run();
    let (ranks, bnds, _) = red.remainder(cx.lo);
    let n = ranks.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d_out = if i == 0 {
            IntMatrix::zero(0, ranks[0])
        } else {
            bnds[i - 1].clone()
        };
        let d_in = if i + 1 < n {
            bnds[i].clone()
        } else {
            IntMatrix::zero(ranks[i], 0)
        };
        out.push(homology_at(&d_in, &d_out, coeff)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex_from_dense(lo: i64, ranks: Vec<usize>, mats: Vec<IntMatrix>) -> SparseComplex {
        let boundaries = mats.iter().map(|m| SparseMat::from_dense(m).unwrap()).collect();
        SparseComplex {
            lo,
            ranks,
            boundaries,
        }
    }

    #[test]
    fn reduces_acyclic_pair() {
        // 0 -> Z --1--> Z -> 0 collapses completely
        let cx = complex_from_dense(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![1]])]);
        let h = sparse_homology(&cx, Coefficients::Integers).unwrap();
        assert!(h.iter().all(|g| g.is_zero()));
    }

    #[test]
    fn preserves_torsion() {
        // Z --2--> Z in degrees 1 -> 0
        let cx = complex_from_dense(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]);
        let h = sparse_homology(&cx, Coefficients::Integers).unwrap();
        assert_eq!(h[0], AbGroupClass::from_parts(0, vec![BigInt::from(2)]));
        assert!(h[1].is_zero());
        let h2 = sparse_homology(&cx, Coefficients::PrimeField(2)).unwrap();
        assert_eq!(h2[0], AbGroupClass::free(1));
        assert_eq!(h2[1], AbGroupClass::free(1));
    }

    #[test]
    fn matches_dense_on_block_sums() {
        // direct sum of known pieces conjugated by unimodular moves
        let d1 = IntMatrix::from_rows(&[
            vec![1, 0, 0],
            vec![0, 2, 0],
            vec![0, 0, 0],
            vec![0, 0, 6],
        ]);
        let d2 = IntMatrix::zero(3, 2);
        let cx = complex_from_dense(0, vec![4, 3, 2], vec![d1, d2]);
        assert!(cx.check_square_zero());
        let h = sparse_homology(&cx, Coefficients::Integers).unwrap();
        // H0 = Z^4 / im(diag-ish) = Z/2 + Z/6 + Z
        assert_eq!(
            h[0],
            AbGroupClass::from_parts(1, vec![BigInt::from(2), BigInt::from(6)])
        );
        // H1 = ker(d1) / im(0) = 0
        assert!(h[1].is_zero());
        assert_eq!(h[2], AbGroupClass::free(2));
    }
}
