use super::bar::{
    bar_complex, bar_complex_normalized, bar_complex_sparse, bar_map_level, cobar_coboundary,
    BarLevel, CobarLevel,
};
use crate::complexes::{ChainComplex, ComplexError, DoubleComplex, HomologyPresentation};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::sparse::{sparse_homology, SparseComplex, SparseMat};
use crate::linalg::{homology_at, AbGroupClass, Coefficients, IntMatrix};
use crate::sheaf::{GSheaf, PresentedGSheaf, SheafComplex, SheafError};

#[derive(thiserror::Error, Debug)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error("spectral machinery needs field coefficients")]
    IntegerCoefficientsUnsupported,
    #[error("the transformation is not natural at arrow {arrow}")]
    NotNatural { arrow: usize },
    #[error("the given chain is not a cycle")]
    NotACycle,
    #[error("presented sheaf relations must be stalkwise injective at object {object}")]
    RelationsNotInjective { object: usize },
}

/// `H_n(G; A)` for a free coefficient sheaf. Negative degrees vanish on a
/// discrete base. Computed from the normalized bar complex through degree
/// `n + 1` by sparse unit-pivot reduction, with a dense fallback.
pub fn groupoid_homology(
    g: &FiniteGroupoid,
    a: &GSheaf,
    n: i64,
    coeff: Coefficients,
) -> Result<AbGroupClass, HomologyError> {
    if n < 0 {
        return Ok(AbGroupClass::zero());
    }
    Ok(groupoid_homology_range(g, a, n as usize, coeff)?.remove(n as usize))
}

/// All of `H_0 .. H_n` in one reduction.
pub fn groupoid_homology_range(
    g: &FiniteGroupoid,
    a: &GSheaf,
    n: usize,
    coeff: Coefficients,
) -> Result<Vec<AbGroupClass>, HomologyError> {
    debug_assert_eq!(a.coefficients(), coeff);
    match bar_complex_sparse(g, a, n + 1, true) {
        Some(cx) => {
            let mut h = sparse_homology(&cx, coeff)?;
            h.truncate(n + 1);
            Ok(h)
        }
        None => {
            let c = bar_complex_normalized(g, a, n + 1)?;
            (0..=n as i64).map(|k| Ok(c.homology(k)?)).collect()
        }
    }
}

/// Unnormalized route, kept as the oracle the normalized path is compared
/// against.
pub fn groupoid_homology_unnormalized(
    g: &FiniteGroupoid,
    a: &GSheaf,
    n: usize,
    coeff: Coefficients,
) -> Result<Vec<AbGroupClass>, HomologyError> {
    match bar_complex_sparse(g, a, n + 1, false) {
        Some(cx) => {
            let mut h = sparse_homology(&cx, coeff)?;
            h.truncate(n + 1);
            Ok(h)
        }
        None => {
            let c = bar_complex(g, a, n + 1)?;
            (0..=n as i64).map(|k| Ok(c.homology(k)?)).collect()
        }
    }
}

/// `H^n(G; A)` computed from the invariant cochain complex on the nerve.
/// Over a field this is a dimension; over the integers the cochain complex
/// is still emitted and its cohomology reported (the sheaves on a discrete
/// base are acyclic, which is what makes the cochain model valid).
pub fn cohomology(
    g: &FiniteGroupoid,
    a: &GSheaf,
    n: usize,
    coeff: Coefficients,
) -> Result<AbGroupClass, HomologyError> {
    let d_in = if n == 0 {
        let level0 = CobarLevel::new(g, a, 0, true);
        IntMatrix::zero(level0.total_rank, 0)
    } else {
        cobar_coboundary(g, a, n - 1, true)
    };
    let d_out = cobar_coboundary(g, a, n, true);
    Ok(homology_at(&d_in, &d_out, coeff)?)
}

/// Double complex `C_{p,q} = B_p(G; S_q)` of a bounded complex of sheaves:
/// horizontal is the bar boundary of each sheaf, vertical applies the sheaf
/// maps stalkwise. The differentials commute; totalization adds the sign.
pub fn sheaf_double_complex(
    g: &FiniteGroupoid,
    s: &SheafComplex,
    p_max: usize,
    normalized: bool,
) -> Result<DoubleComplex, HomologyError> {
    assert_eq!(s.lo, 0, "first-quadrant window expected");
    let q_max = (s.hi()).max(0) as usize;
    let levels: Vec<Vec<BarLevel>> = s
        .sheaves
        .iter()
        .map(|sh| (0..=p_max).map(|p| BarLevel::new(g, sh, p, normalized)).collect())
        .collect();
    let mut ranks = vec![vec![0usize; q_max + 1]; p_max + 1];
    for (q, lv) in levels.iter().enumerate() {
        for (p, l) in lv.iter().enumerate() {
            ranks[p][q] = l.total_rank;
        }
    }
    let mut horiz = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let mut row = Vec::with_capacity(q_max + 1);
        for (q, _) in levels.iter().enumerate() {
            row.push(super::bar::bar_boundary(
                g,
                &s.sheaves[q],
                &levels[q][p],
                &levels[q][p - 1],
                p,
            ));
        }
        horiz.push(row);
    }
    let mut vert = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let mut col = Vec::with_capacity(q_max);
        for q in 1..=q_max {
            col.push(bar_map_level(
                &s.boundaries[q - 1],
                &levels[q][p],
                &levels[q - 1][p],
            ));
        }
        vert.push(col);
    }
    Ok(DoubleComplex::new(s.coefficients(), ranks, horiz, vert)?)
}

/// Sparse total complex of `B_p(G; S_q)` with the `(-1)^p` twist, for
/// hyperhomology at scale.
pub fn sheaf_total_complex_sparse(
    g: &FiniteGroupoid,
    s: &SheafComplex,
    p_max: usize,
    normalized: bool,
) -> Option<SparseComplex> {
    assert_eq!(s.lo, 0);
    let q_max = (s.hi()).max(0) as usize;
    let levels: Vec<Vec<BarLevel>> = s
        .sheaves
        .iter()
        .map(|sh| (0..=p_max).map(|p| BarLevel::new(g, sh, p, normalized)).collect())
        .collect();
    let nmax = p_max + q_max;
    let blocks = |n: usize| -> Vec<(usize, usize)> {
        (0..=n.min(p_max)).filter(|&p| n - p <= q_max).map(|p| (p, n - p)).collect()
    };
    let offset = |n: usize, p: usize| -> usize {
        blocks(n)
            .iter()
            .take_while(|&&(bp, _)| bp < p)
            .map(|&(bp, bq)| levels[bq][bp].total_rank)
            .sum()
    };
    let tot_rank = |n: usize| -> usize {
        blocks(n).iter().map(|&(p, q)| levels[q][p].total_rank).sum()
    };

    let ranks: Vec<usize> = (0..=nmax).map(tot_rank).collect();
    let mut boundaries = Vec::with_capacity(nmax);
    for n in 1..=nmax {
        let mut m = SparseMat::new(tot_rank(n - 1), tot_rank(n));
        for (p, q) in blocks(n) {
            let co = offset(n, p);
            // horizontal into (p-1, q)
            if p >= 1 && blocks(n - 1).contains(&(p - 1, q)) {
                let h = super::bar::bar_boundary(g, &s.sheaves[q], &levels[q][p], &levels[q][p - 1], p);
                let ro = offset(n - 1, p - 1);
                add_dense_block(&mut m, &h, ro, co)?;
            }
            // twisted vertical into (p, q-1)
            if q >= 1 && blocks(n - 1).contains(&(p, q - 1)) {
                let v = bar_map_level(&s.boundaries[q - 1], &levels[q][p], &levels[q - 1][p]);
                let ro = offset(n - 1, p);
                let sign = if p % 2 == 0 { 1 } else { -1 };
                add_dense_block_signed(&mut m, &v, ro, co, sign)?;
            }
        }
        boundaries.push(m);
    }
    Some(SparseComplex {
        lo: 0,
        ranks,
        boundaries,
    })
}

fn add_dense_block(m: &mut SparseMat, b: &IntMatrix, ro: usize, co: usize) -> Option<()> {
    add_dense_block_signed(m, b, ro, co, 1)
}

fn add_dense_block_signed(
    m: &mut SparseMat,
    b: &IntMatrix,
    ro: usize,
    co: usize,
    sign: i64,
) -> Option<()> {
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let e = &b[(i, j)];
            if !num_traits::Zero::is_zero(e) {
                let v = i64::try_from(e).ok()?.checked_mul(sign)?;
                m.add_entry(ro + i, co + j, v);
            }
        }
    }
    Some(())
}

/// Hyperhomology of a bounded complex of sheaves: the homology of the total
/// complex of `B_p(G; S_q)`, reported for total degrees `0 ..= n_max`.
pub fn hyperhomology(
    g: &FiniteGroupoid,
    s: &SheafComplex,
    n_max: usize,
    coeff: Coefficients,
) -> Result<Vec<AbGroupClass>, HomologyError> {
    let p_max = n_max + 1;
    match sheaf_total_complex_sparse(g, s, p_max, true) {
        Some(cx) => {
            let mut h = sparse_homology(&cx, coeff)?;
            h.truncate(n_max + 1);
            Ok(h)
        }
        None => {
            let dc = sheaf_double_complex(g, s, p_max, true)?;
            let tot = dc.total_complex()?;
            (0..=n_max as i64).map(|k| Ok(tot.homology(k)?)).collect()
        }
    }
}

/// The homology sheaves of a complex of sheaves over a field: the stalk at
/// `x` is `H_q` of the stalk complex, with the action matrices induced on
/// the canonical homology bases.
pub fn homology_sheaf(s: &SheafComplex, q: i64) -> Result<GSheaf, HomologyError> {
    let coeff = s.coefficients();
    if !coeff.is_field() {
        return Err(HomologyError::IntegerCoefficientsUnsupported);
    }
    let base = s.base().clone();
    let mut presentations = Vec::with_capacity(base.n_objects());
    for x in 0..base.n_objects() {
        let c = s.stalk_complex(x)?;
        presentations.push(HomologyPresentation::new(
            &c.boundary(q + 1),
            &c.boundary(q),
            coeff,
        )?);
    }
    let stalk_ranks: Vec<usize> = presentations.iter().map(|p| p.coords()).collect();
    let q_idx = (q - s.lo) as usize;
    let mut act = Vec::with_capacity(base.n_arrows());
    for arr in 0..base.n_arrows() {
        let (x, y) = (base.source(arr), base.target(arr));
        let f = s.sheaves.get(q_idx).map(|sh| sh.action(arr).clone()).unwrap_or_else(|| {
            IntMatrix::zero(0, 0)
        });
        let m = HomologyPresentation::induced_map(&presentations[y], &presentations[x], &f)
            .ok_or(HomologyError::NotACycle)?;
        act.push(m);
    }
    Ok(GSheaf::new(base, coeff, stalk_ranks, act)?)
}

/// Homology with presented coefficients `B = coker(relations)`: the cone of
/// the bar image of the relations computes it, provided the relations are
/// stalkwise injective (so the two-term complex resolves `B`).
pub fn groupoid_homology_presented(
    g: &FiniteGroupoid,
    b: &PresentedGSheaf,
    n_max: usize,
    coeff: Coefficients,
) -> Result<Vec<AbGroupClass>, HomologyError> {
    let rel = &b.relations;
    for x in 0..g.n_objects() {
        if crate::complexes::coeff_kernel(rel.at(x), coeff).cols() != 0 {
            return Err(HomologyError::RelationsNotInjective { object: x });
        }
    }
    let cx = presented_cone_complex(g, b, n_max + 1)?;
    match cx.to_sparse() {
        Some(sp) => {
            let mut h = sparse_homology(&sp, coeff)?;
            h.truncate(n_max + 1);
            Ok(h)
        }
        None => (0..=n_max as i64).map(|k| Ok(cx.homology(k)?)).collect(),
    }
}

/// Cone of `B(relations): B(P) -> B(F)` on `[0, n_max]`:
/// `W_n = B_{n-1}(P) + B_n(F)`, `d(a, b) = (-d a, d b - rho a)`.
pub fn presented_cone_complex(
    g: &FiniteGroupoid,
    b: &PresentedGSheaf,
    n_max: usize,
) -> Result<ChainComplex, HomologyError> {
    let rel = &b.relations;
    let p_sheaf = &rel.source;
    let f_sheaf = &rel.target;
    let p_complex = bar_complex_normalized(g, p_sheaf, n_max)?;
    let f_complex = bar_complex_normalized(g, f_sheaf, n_max)?;
    let p_levels: Vec<BarLevel> = (0..=n_max).map(|n| BarLevel::new(g, p_sheaf, n, true)).collect();
    let f_levels: Vec<BarLevel> = (0..=n_max).map(|n| BarLevel::new(g, f_sheaf, n, true)).collect();
    let rho: Vec<IntMatrix> = (0..=n_max)
        .map(|n| bar_map_level(rel, &p_levels[n], &f_levels[n]))
        .collect();

    let ranks: Vec<usize> = (0..=n_max as i64)
        .map(|n| {
            let pr = if n >= 1 { p_complex.rank(n - 1) } else { 0 };
            pr + f_complex.rank(n)
        })
        .collect();
    let mut boundaries = Vec::with_capacity(n_max);
    for n in 1..=n_max as i64 {
        let a_rows = if n >= 2 { p_complex.rank(n - 2) } else { 0 };
        let b_rows = f_complex.rank(n - 1);
        let a_cols = p_complex.rank(n - 1);
        let b_cols = f_complex.rank(n);
        let da = p_complex.boundary(n - 1);
        let db = f_complex.boundary(n);
        let r = &rho[(n - 1) as usize];
        let m = IntMatrix::from_fn(a_rows + b_rows, a_cols + b_cols, |i, j| {
            if i < a_rows && j < a_cols {
                -&da[(i, j)]
            } else if i >= a_rows && j < a_cols {
                -&r[(i - a_rows, j)]
            } else if i >= a_rows && j >= a_cols {
                db[(i - a_rows, j - a_cols)].clone()
            } else {
                num_bigint::BigInt::from(0)
            }
        });
        boundaries.push(m);
    }
    Ok(ChainComplex::new(coeff_of(b), 0, ranks, boundaries)?)
}

fn coeff_of(b: &PresentedGSheaf) -> Coefficients {
    b.carrier().coefficients()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::{cyclic, symmetric3};
    use num_bigint::BigInt;

    #[test]
    fn rational_homology_of_a_finite_group_vanishes() {
        let g = cyclic(3);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Rationals, 1);
        let h = groupoid_homology_range(&g, &a, 3, Coefficients::Rationals).unwrap();
        assert_eq!(h[0], AbGroupClass::free(1));
        for n in 1..=3 {
            assert!(h[n].is_zero(), "H_{n}(Z/3; Q)");
        }
    }

    #[test]
    fn mod_two_homology_of_z2_is_one_dimensional_everywhere() {
        let g = cyclic(2);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::PrimeField(2), 1);
        let h = groupoid_homology_range(&g, &a, 5, Coefficients::PrimeField(2)).unwrap();
        for n in 0..=5 {
            assert_eq!(h[n], AbGroupClass::free(1), "H_{n}(Z/2; F2)");
        }
    }

    #[test]
    fn pair_groupoid_has_point_homology_over_z() {
        let g = FiniteGroupoid::pair(3);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 1);
        let h = groupoid_homology_range(&g, &a, 2, Coefficients::Integers).unwrap();
        assert_eq!(h[0], AbGroupClass::free(1));
        assert!(h[1].is_zero());
        assert!(h[2].is_zero());
    }

    #[test]
    fn cohomology_dual_to_homology_over_f2() {
        let g = cyclic(2);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::PrimeField(2), 1);
        for n in 0..=5 {
            let h = cohomology(&g, &a, n, Coefficients::PrimeField(2)).unwrap();
            assert_eq!(h.betti, 1, "H^{n}(Z/2; F2)");
        }
    }

    #[test]
    fn rational_cohomology_vanishes_above_zero() {
        let g = symmetric3();
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Rationals, 1);
        assert_eq!(
            cohomology(&g, &a, 0, Coefficients::Rationals).unwrap().betti,
            1
        );
        for n in 1..=3 {
            assert!(cohomology(&g, &a, n, Coefficients::Rationals).unwrap().is_zero());
        }
    }

    #[test]
    fn invariant_sections_of_discrete_base() {
        let g = FiniteGroupoid::discrete(3);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Rationals, 2);
        assert_eq!(
            cohomology(&g, &a, 0, Coefficients::Rationals).unwrap().betti,
            6
        );
    }

    #[test]
    fn negative_degree_vanishes() {
        let g = cyclic(2);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 1);
        assert!(groupoid_homology(&g, &a, -1, Coefficients::Integers)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn presented_mod_two_coefficients() {
        // H_*(Z/2; Z/2) via the presented sheaf: dims 1, 1, 1, ...
        let g = cyclic(2);
        let b = PresentedGSheaf::constant_mod(g.clone().into_arc(), 2);
        let h = groupoid_homology_presented(&g, &b, 4, Coefficients::Integers).unwrap();
        for n in 0..=4 {
            assert_eq!(
                h[n],
                AbGroupClass::from_parts(0, vec![BigInt::from(2)]),
                "H_{n}(Z/2; Z/2)"
            );
        }
    }

    #[test]
    fn hyperhomology_of_concentrated_complex_is_homology() {
        let g = cyclic(2);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 1);
        let s = SheafComplex::concentrated(a.clone(), 0);
        let hh = hyperhomology(&g, &s, 3, Coefficients::Integers).unwrap();
        let h = groupoid_homology_range(&g, &a, 3, Coefficients::Integers).unwrap();
        assert_eq!(hh, h);
    }

    #[test]
    fn hyperhomology_of_acyclic_complex_vanishes() {
        use crate::sheaf::SheafMap;
        let g = cyclic(3);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 1);
        let id = SheafMap::identity(&a);
        let s = SheafComplex::new(0, vec![a.clone(), a.clone()], vec![id]).unwrap();
        let hh = hyperhomology(&g, &s, 3, Coefficients::Integers).unwrap();
        assert!(hh.iter().all(|x| x.is_zero()));
    }

    use crate::groupoid::FiniteGroupoid;
}
