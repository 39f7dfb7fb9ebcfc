use super::chain::ComplexError;
use super::double::DoubleComplex;
use crate::linalg::field::{FieldCtx, FieldMatrix, FpCtx, RatCtx, SpanTracker};
use crate::linalg::Coefficients;
use std::collections::BTreeMap;

/// One page of a first-quadrant homological spectral sequence: dimensions of
/// `E^r_{p,q}` and the page differentials of bidegree `(-r, r-1)` in the
/// chosen representative bases.
pub struct SpectralPage<C: FieldCtx> {
    pub r: usize,
    pub dims: BTreeMap<(usize, usize), usize>,
    pub differentials: BTreeMap<(usize, usize), FieldMatrix<C>>,
}

impl<C: FieldCtx> SpectralPage<C> {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn differentials_all_zero(&self) -> bool {
        self.differentials.values().all(|m| m.is_zero())
    }
}

/// Pages `E^1 ... E^infinity` of the column-filtration spectral sequence of a
/// double complex, together with the abutment dimensions of the total
/// complex. Stabilization is detected when every differential that could
/// still act inside the window has left it.
pub struct SpectralSequence<C: FieldCtx> {
    pub pages: Vec<SpectralPage<C>>,
    /// dim `H_n(Tot)` for `n = 0 ..= p_max + q_max`.
    pub abutment: Vec<usize>,
}

impl<C: FieldCtx> SpectralSequence<C> {
    pub fn infinity(&self) -> &SpectralPage<C> {
        self.pages.last().expect("at least one page")
    }

    /// Checked on construction; exposed for reporting.
    pub fn abutment_consistent(&self) -> bool {
        let inf = self.infinity();
        (0..self.abutment.len()).all(|n| {
            let total: usize = inf
                .dims
                .iter()
                .filter(|(&(p, q), _)| p + q == n)
                .map(|(_, &d)| d)
                .sum();
            total == self.abutment[n]
        })
    }
}

/// Type-erased spectral sequence for the two supported fields.
pub enum SpectralPages {
    Rat(SpectralSequence<RatCtx>),
    Fp(SpectralSequence<FpCtx>),
}

impl SpectralPages {
    pub fn page_count(&self) -> usize {
        match self {
            SpectralPages::Rat(s) => s.pages.len(),
            SpectralPages::Fp(s) => s.pages.len(),
        }
    }

    pub fn dims(&self, page_index: usize) -> &BTreeMap<(usize, usize), usize> {
        match self {
            SpectralPages::Rat(s) => &s.pages[page_index].dims,
            SpectralPages::Fp(s) => &s.pages[page_index].dims,
        }
    }

    pub fn page_r(&self, page_index: usize) -> usize {
        match self {
            SpectralPages::Rat(s) => s.pages[page_index].r,
            SpectralPages::Fp(s) => s.pages[page_index].r,
        }
    }

    /// Index of the first page whose differentials vanish and from which the
    /// sequence no longer moves.
    pub fn stabilization_page(&self) -> usize {
        let n = self.page_count();
        let zero_from = |i: usize| -> bool {
            (i..n).all(|k| match self {
                SpectralPages::Rat(s) => s.pages[k].differentials_all_zero(),
                SpectralPages::Fp(s) => s.pages[k].differentials_all_zero(),
            })
        };
        for i in 0..n {
            if zero_from(i) {
                return self.page_r(i);
            }
        }
        self.page_r(n - 1)
    }

    pub fn infinity_dims(&self) -> &BTreeMap<(usize, usize), usize> {
        self.dims(self.page_count() - 1)
    }

    pub fn abutment(&self) -> &[usize] {
        match self {
            SpectralPages::Rat(s) => &s.abutment,
            SpectralPages::Fp(s) => &s.abutment,
        }
    }

    pub fn abutment_consistent(&self) -> bool {
        match self {
            SpectralPages::Rat(s) => s.abutment_consistent(),
            SpectralPages::Fp(s) => s.abutment_consistent(),
        }
    }
}

/// First-quadrant spectral sequence of a double complex with field
/// coefficients, filtered by columns: `E^1_{p,q}` is the vertical homology
/// and `d^1` the induced horizontal map.
pub fn spectral_sequence(dc: &DoubleComplex) -> Result<SpectralPages, ComplexError> {
    match dc.coefficients() {
        Coefficients::Integers => Err(ComplexError::IntegerCoefficientsUnsupported),
        Coefficients::Rationals => Ok(SpectralPages::Rat(compute(&RatCtx, dc)?)),
        Coefficients::PrimeField(p) => Ok(SpectralPages::Fp(compute(&FpCtx::new(p), dc)?)),
    }
}

struct Workspace<C: FieldCtx> {
    ctx: C,
    pmax: usize,
    qmax: usize,
    /// total boundary Tot_n -> Tot_{n-1}, index n-1
    totals: Vec<FieldMatrix<C>>,
    tot_ranks: Vec<usize>,
    /// block layout per n: (p, offset, rank)
    layout: Vec<Vec<(usize, usize, usize)>>,
}

impl<C: FieldCtx> Workspace<C> {
    fn new(ctx: &C, dc: &DoubleComplex) -> Self {
        let pmax = dc.p_max();
        let qmax = dc.q_max();
        let nmax = pmax + qmax;
        let mut layout = Vec::new();
        let mut tot_ranks = Vec::new();
        for n in 0..=nmax {
            let mut l = Vec::new();
            let mut off = 0;
            for (p, q) in dc.blocks(n) {
                let r = dc.rank(p, q);
                l.push((p, off, r));
                off += r;
            }
            layout.push(l);
            tot_ranks.push(off);
        }
        let totals = (1..=nmax)
            .map(|n| FieldMatrix::from_int(ctx, &dc.total_boundary(n)))
            .collect();
        Workspace {
            ctx: ctx.clone(),
            pmax,
            qmax,
            totals,
            tot_ranks,
            layout,
        }
    }

    fn nmax(&self) -> usize {
        self.pmax + self.qmax
    }

    fn tot_rank(&self, n: usize) -> usize {
        if n <= self.nmax() {
            self.tot_ranks[n]
        } else {
            0
        }
    }

    /// Embedding matrix of the filtration step `F_p` at total degree `n`.
    fn filtration(&self, p: i64, n: usize) -> FieldMatrix<C> {
        let amb = self.tot_rank(n);
        if n > self.nmax() || p < 0 {
            return FieldMatrix::zero(&self.ctx, amb, 0);
        }
        let cols: Vec<(usize, usize)> = self.layout[n]
            .iter()
            .filter(|&&(bp, _, _)| (bp as i64) <= p)
            .flat_map(|&(_, off, r)| (off..off + r).map(move |c| (c, 0)))
            .collect();
        let mut m = FieldMatrix::zero(&self.ctx, amb, cols.len());
        for (j, &(row, _)) in cols.iter().enumerate() {
            m.set(row, j, self.ctx.one());
        }
        m
    }

    fn boundary(&self, n: usize) -> FieldMatrix<C> {
        if n >= 1 && n <= self.nmax() {
            self.totals[n - 1].clone()
        } else {
            FieldMatrix::zero(&self.ctx, self.tot_rank(n.wrapping_sub(1)), self.tot_rank(n))
        }
    }

    /// Generators of `Z^r_p = F_p Tot_n  with  D x in F_{p-r} Tot_{n-1}`.
    fn cycles(&self, r: usize, p: i64, n: usize) -> FieldMatrix<C> {
        let emb = self.filtration(p, n);
        if r == 0 || emb.cols() == 0 {
            return emb;
        }
        let d = self.boundary(n);
        let image = d.mul(&emb);
        // rows of Tot_{n-1} outside F_{p-r}
        if n == 0 || n > self.nmax() {
            return emb;
        }
        let cutoff = p - r as i64;
        let bad_rows: Vec<usize> = if n >= 1 && n - 1 <= self.nmax() {
            self.layout[n - 1]
                .iter()
                .filter(|&&(bp, _, _)| (bp as i64) > cutoff)
                .flat_map(|&(_, off, rk)| off..off + rk)
                .collect()
        } else {
            Vec::new()
        };
        let mut constraint = FieldMatrix::zero(&self.ctx, bad_rows.len(), image.cols());
        for (i, &row) in bad_rows.iter().enumerate() {
            for j in 0..image.cols() {
                constraint.set(i, j, image.get(row, j).clone());
            }
        }
        let k = constraint.kernel();
        emb.mul(&k)
    }
}

fn compute<C: FieldCtx>(ctx: &C, dc: &DoubleComplex) -> Result<SpectralSequence<C>, ComplexError> {
    let ws = Workspace::new(ctx, dc);
    let pmax = ws.pmax;
    let qmax = ws.qmax;
    // beyond this page no differential can act inside a first-quadrant window
    let r_stop = pmax.min(qmax + 1) + 1;

    let mut pages: Vec<SpectralPage<C>> = Vec::new();
    for r in 1..=r_stop.max(1) {
        let mut dims = BTreeMap::new();
        let mut reps: BTreeMap<(usize, usize), FieldMatrix<C>> = BTreeMap::new();
        let mut denoms: BTreeMap<(usize, usize), FieldMatrix<C>> = BTreeMap::new();
        for p in 0..=pmax {
            for q in 0..=qmax {
                let n = p + q;
                let numer = ws.cycles(r, p as i64, n);
                let prev_lower = ws.cycles(r - 1, p as i64 - 1, n);
                let up = ws.cycles(r - 1, p as i64 + r as i64 - 1, n + 1);
                let d_up = ws.boundary(n + 1).mul(&up);
                let denom = prev_lower.hstack(&d_up);
                let mut tracker = SpanTracker::new(ctx, ws.tot_rank(n));
                for j in 0..denom.cols() {
                    tracker.insert(&denom.col(j));
                }
                let mut kept = Vec::new();
                for j in 0..numer.cols() {
                    if tracker.insert(&numer.col(j)) {
                        kept.push(j);
                    }
                }
                dims.insert((p, q), kept.len());
                reps.insert((p, q), numer.select_cols(&kept));
                denoms.insert((p, q), denom);
            }
        }

        // differentials d_r: (p,q) -> (p-r, q+r-1)
        let mut differentials = BTreeMap::new();
        for p in 0..=pmax {
            for q in 0..=qmax {
                let (tp, tq) = (p as i64 - r as i64, q + r - 1);
                if tp < 0 || tq > qmax {
                    continue;
                }
                let tp = tp as usize;
                let src_dim = dims[&(p, q)];
                let tgt_dim = dims[&(tp, tq)];
                if src_dim == 0 || tgt_dim == 0 {
                    differentials.insert((p, q), FieldMatrix::zero(ctx, tgt_dim, src_dim));
                    continue;
                }
                let n = p + q;
                let src_reps = &reps[&(p, q)];
                let img = ws.boundary(n).mul(src_reps);
                let tgt_reps = &reps[&(tp, tq)];
                let tgt_den = &denoms[&(tp, tq)];
                let sys = tgt_reps.hstack(tgt_den);
                let mut mat = FieldMatrix::zero(ctx, tgt_dim, src_dim);
                for j in 0..src_dim {
                    let sol = sys
                        .solve(&img.col(j))
                        .expect("page differential image must lie in the target cell");
                    for i in 0..tgt_dim {
                        mat.set(i, j, sol[i].clone());
                    }
                }
                differentials.insert((p, q), mat);
            }
        }

        pages.push(SpectralPage {
            r,
            dims,
            differentials,
        });
    }

    // page coherence: dims of page r+1 equal homology dims of (E^r, d^r)
    for w in pages.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        for (&(p, q), &dim_next) in &next.dims {
            let out_rank = cur
                .differentials
                .get(&(p, q))
                .map(|m| m.rank())
                .unwrap_or(0);
            let in_rank = if q + 1 >= cur.r {
                cur.differentials
                    .get(&(p + cur.r, q + 1 - cur.r))
                    .map(|m| m.rank())
                    .unwrap_or(0)
            } else {
                0
            };
            let expected = cur.dim(p, q) - out_rank - in_rank;
            if expected != dim_next {
                return Err(ComplexError::NotExact(format!(
                    "page {} cell ({p},{q}): homology of d_{} gives {expected}, page {} has {dim_next}",
                    cur.r, cur.r, next.r
                )));
            }
        }
    }

    // abutment dimensions of the total complex
    let nmax = ws.nmax();
    let mut abutment = Vec::new();
    for n in 0..=nmax {
        let d_n = ws.boundary(n);
        let d_up = ws.boundary(n + 1);
        let nullity = ws.tot_rank(n) - d_n.rank();
        abutment.push(nullity - d_up.rank());
    }

    let ss = SpectralSequence { pages, abutment };
    if !ss.abutment_consistent() {
        return Err(ComplexError::NotExact(
            "spectral sequence does not abut to the total homology".into(),
        ));
    }
    Ok(ss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    #[test]
    fn integer_coefficients_rejected() {
        let dc = DoubleComplex::new(
            Coefficients::Integers,
            vec![vec![1]],
            vec![],
            vec![vec![]],
        )
        .unwrap();
        assert!(matches!(
            spectral_sequence(&dc),
            Err(ComplexError::IntegerCoefficientsUnsupported)
        ));
    }

    #[test]
    fn one_row_stabilizes_at_two() {
        // row: F2 <-1- F2 <-0- F2 at q = 0
        let ranks = vec![vec![1], vec![1], vec![1]];
        let horiz = vec![
            vec![IntMatrix::identity(1)],
            vec![IntMatrix::zero(1, 1)],
        ];
        let vert = vec![vec![], vec![], vec![]];
        let dc = DoubleComplex::new(Coefficients::PrimeField(2), ranks, horiz, vert).unwrap();
        let ss = spectral_sequence(&dc).unwrap();
        // E^2 = homology of the row: (0, 0, 1)
        let inf = ss.infinity_dims();
        assert_eq!(inf.get(&(0, 0)).copied().unwrap_or(0), 0);
        assert_eq!(inf.get(&(1, 0)).copied().unwrap_or(0), 0);
        assert_eq!(inf.get(&(2, 0)).copied().unwrap_or(0), 1);
        assert!(ss.abutment_consistent());
        assert_eq!(ss.abutment(), &[0, 0, 1]);
    }

    #[test]
    fn exact_rows_concentrate_in_column_zero() {
        // two exact rows of ranks 1,1 with identity horizontals, zero verticals
        let ranks = vec![vec![1, 1], vec![1, 1]];
        let horiz = vec![vec![IntMatrix::identity(1), IntMatrix::identity(1)]];
        let vert = vec![vec![IntMatrix::zero(1, 1)], vec![IntMatrix::zero(1, 1)]];
        let dc = DoubleComplex::new(Coefficients::Rationals, ranks, horiz, vert).unwrap();
        let ss = spectral_sequence(&dc).unwrap();
        // E^2 of the row filtration: rows are exact from p=1 onward, so all
        // cells with p = 1 die and homology concentrates at p = 0... here the
        // rows are [1 <- 1] which is exact everywhere, so everything dies.
        for (_, &d) in ss.infinity_dims() {
            assert_eq!(d, 0);
        }
        assert!(ss.abutment().iter().all(|&d| d == 0));
    }

    #[test]
    fn unit_square_pages_cancel() {
        let ranks = vec![vec![1, 1], vec![1, 1]];
        let horiz = vec![vec![IntMatrix::identity(1), IntMatrix::identity(1)]];
        let vert = vec![vec![IntMatrix::identity(1)], vec![IntMatrix::identity(1)]];
        let dc = DoubleComplex::new(Coefficients::PrimeField(2), ranks, horiz, vert).unwrap();
        let ss = spectral_sequence(&dc).unwrap();
        // vertical homology is zero everywhere
        assert!(ss.dims(0).values().all(|&d| d == 0));
        assert!(ss.abutment().iter().all(|&d| d == 0));
    }
}
