use super::bar::{bar_boundary, bar_complex_sparse, BarLevel};
use super::compute::{
    groupoid_homology_range, homology_sheaf, sheaf_double_complex, HomologyError,
};
use crate::complexes::spectral_sequence;
use crate::groupoid::{
    comma_action, comma_groupoid, CommaGroupoid, GroupoidHom, ObjId,
};
use crate::linalg::sparse::sparse_homology;
use crate::linalg::{AbGroupClass, Coefficients, IntMatrix};
use crate::sheaf::{pullback, GSheaf, SheafComplex, SheafMap};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

/// The simplicial sheaf of fiberwise bar complexes of a homomorphism: the
/// stalk at `x` is the (normalized) bar complex of the comma groupoid `x/φ`
/// with coefficients pulled back along the forgetful projection, and arrows
/// of the codomain act by precomposition, permuting comma strings.
pub struct LeraySheafComplex {
    pub complex: SheafComplex,
    pub commas: Vec<CommaGroupoid>,
}

pub fn leray_sheaf_complex(
    phi: &GroupoidHom,
    a: &GSheaf,
    q_max: usize,
    normalized: bool,
) -> Result<LeraySheafComplex, HomologyError> {
    let g = &phi.cod;
    let commas: Vec<CommaGroupoid> = (0..g.n_objects()).map(|x| comma_groupoid(phi, x)).collect();
    let stalk_sheaves: Vec<GSheaf> = commas
        .iter()
        .map(|c| pullback(&c.projection, a))
        .collect::<Result<_, _>>()?;
    let levels: Vec<Vec<BarLevel>> = commas
        .iter()
        .zip(&stalk_sheaves)
        .map(|(c, s)| {
            (0..=q_max)
                .map(|q| BarLevel::new(&c.groupoid, s, q, normalized))
                .collect()
        })
        .collect();

    let coeff = a.coefficients();
    let mut sheaves = Vec::with_capacity(q_max + 1);
    for q in 0..=q_max {
        let stalk_ranks: Vec<usize> = (0..g.n_objects()).map(|x| levels[x][q].total_rank).collect();
        let mut act = Vec::with_capacity(g.n_arrows());
        for arr in 0..g.n_arrows() {
            let (x, x2) = (g.source(arr), g.target(arr));
            act.push(transport_matrix(
                phi,
                arr,
                &commas[x2],
                &commas[x],
                &stalk_sheaves[x2],
                &levels[x2][q],
                &levels[x][q],
                q,
            )?);
        }
        sheaves.push(GSheaf::new(g.clone(), coeff, stalk_ranks, act)?);
    }

    let mut boundaries = Vec::with_capacity(q_max);
    for q in 1..=q_max {
        let mats: Vec<IntMatrix> = (0..g.n_objects())
            .map(|x| {
                bar_boundary(
                    &commas[x].groupoid,
                    &stalk_sheaves[x],
                    &levels[x][q],
                    &levels[x][q - 1],
                    q,
                )
            })
            .collect();
        boundaries.push(SheafMap::new(sheaves[q].clone(), sheaves[q - 1].clone(), mats)?);
    }

    Ok(LeraySheafComplex {
        complex: SheafComplex::new(0, sheaves, boundaries)?,
        commas,
    })
}

/// Chain matrix of the comma-precomposition homomorphism on one bar level:
/// strings map to strings (a permutation) and coefficients are untouched
/// because the forgetful projections commute with precomposition.
#[allow(clippy::too_many_arguments)]
fn transport_matrix(
    phi: &GroupoidHom,
    arr: usize,
    from: &CommaGroupoid,
    to: &CommaGroupoid,
    from_sheaf: &GSheaf,
    from_level: &BarLevel,
    to_level: &BarLevel,
    q: usize,
) -> Result<IntMatrix, HomologyError> {
    let hom = comma_action(phi, arr, from, to).map_err(|e| {
        HomologyError::Sheaf(crate::sheaf::SheafError::NotExactAtObject {
            object: usize::MAX,
            reason: format!("comma action failed: {e}"),
        })
    })?;
    let mut m = IntMatrix::zero(to_level.total_rank, from_level.total_rank);
    for (si, s) in from_level.strings.iter().enumerate() {
        let image: Vec<usize> = s.iter().map(|&k| hom.on_arrow(k)).collect();
        let ti = if q == 0 {
            hom.on_object(si)
        } else {
            to_level
                .index_of(&image)
                .expect("precomposition preserves composability and units")
        };
        let r = from_sheaf.stalk_rank(from_level.first_object[si]);
        let (ro, co) = (to_level.offsets[ti], from_level.offsets[si]);
        for j in 0..r {
            m[(ro + j, co + j)] = BigInt::one();
        }
    }
    Ok(m)
}

/// The derived pushforward sheaf `L_q φ_! A` over a field: the stalk at `x`
/// is `H_q(x/φ; π* A)` in its canonical basis, with the action induced by
/// precomposition.
pub fn leray_derived_sheaf(
    phi: &GroupoidHom,
    a: &GSheaf,
    q: usize,
) -> Result<GSheaf, HomologyError> {
    if !a.coefficients().is_field() {
        return Err(HomologyError::IntegerCoefficientsUnsupported);
    }
    let l = leray_sheaf_complex(phi, a, q + 1, true)?;
    homology_sheaf(&l.complex, q as i64)
}

/// Stalkwise homology groups of the fibers over any coefficients (the
/// integral route reports groups without a sheaf carrier).
pub fn comma_fiber_homology(
    phi: &GroupoidHom,
    a: &GSheaf,
    x: ObjId,
    n_max: usize,
) -> Result<Vec<AbGroupClass>, HomologyError> {
    let comma = comma_groupoid(phi, x);
    let s = pullback(&comma.projection, a)?;
    groupoid_homology_range(&comma.groupoid, &s, n_max, a.coefficients())
}

/// Full Leray run: pages of the spectral sequence of the double complex
/// `B_p(G; B_q(φ; A))`, the identification of the second page with
/// `H_p(G; L_q φ_! A)`, and the abutment comparison against `H_n(K; A)`.
pub struct LerayReport {
    /// `(r, dims)` for each computed page
    pub pages: Vec<(usize, BTreeMap<(usize, usize), usize>)>,
    pub stabilization_page: usize,
    pub e2: BTreeMap<(usize, usize), usize>,
    /// `H_p(G; L_q φ_! A)` for `p, q <= n_max`
    pub e2_expected: BTreeMap<(usize, usize), usize>,
    pub e2_matches_derived_sheaf: bool,
    /// `dim H_n(K; A)` for `n <= n_max`
    pub abutment: Vec<usize>,
    pub abutment_consistent: bool,
    pub n_max: usize,
}

pub fn leray_spectral_sequence(
    phi: &GroupoidHom,
    a: &GSheaf,
    n_max: usize,
) -> Result<LerayReport, HomologyError> {
    let coeff = a.coefficients();
    if !coeff.is_field() {
        return Err(HomologyError::IntegerCoefficientsUnsupported);
    }
    let window = n_max + 1;
    let l = leray_sheaf_complex(phi, a, window, true)?;

    // abutment: H_n(K; A) computed independently
    let pulled_a = a;
    let abutment: Vec<usize> = {
        let h = groupoid_homology_range(&phi.dom, pulled_a, n_max, coeff)?;
        h.iter().map(|g| g.betti).collect()
    };

    // expected second page from the derived sheaves
    let mut e2_expected = BTreeMap::new();
    for q in 0..=n_max {
        let lq = homology_sheaf(&l.complex, q as i64)?;
        let h = groupoid_homology_range(&phi.cod, &lq, n_max, coeff)?;
        for (p, hp) in h.iter().enumerate() {
            e2_expected.insert((p, q), hp.betti);
        }
    }

    // pages: a double complex concentrated in one row or one column
    // degenerates, and its second page is a row/column homology we can take
    // sparsely; otherwise run the generic subspace machinery
    let one_row = (1..=window).all(|q| l.complex.sheaves[q].total_rank() == 0);
    let (pages, stabilization_page) = if one_row {
        degenerate_one_row_pages(phi, &l, window, coeff)?
    } else {
        let dc = sheaf_double_complex(&phi.cod, &l.complex, window, true)?;
        let ss = spectral_sequence(&dc)?;
        let pages: Vec<(usize, BTreeMap<(usize, usize), usize>)> = (0..ss.page_count())
            .map(|i| (ss.page_r(i), ss.dims(i).clone()))
            .collect();
        let stab = ss.stabilization_page();
        (pages, stab)
    };

    let e2 = pages
        .iter()
        .find(|(r, _)| *r == 2)
        .map(|(_, d)| d.clone())
        .unwrap_or_else(|| pages.last().expect("at least one page").1.clone());

    let e2_matches_derived_sheaf = e2_expected
        .iter()
        .all(|(&(p, q), &d)| e2.get(&(p, q)).copied().unwrap_or(0) == d);

    let einf = &pages.last().unwrap().1;
    let abutment_consistent = (0..=n_max).all(|n| {
        let total: usize = einf
            .iter()
            .filter(|(&(p, q), _)| p + q == n)
            .map(|(_, &d)| d)
            .sum();
        total == abutment[n]
    });

    Ok(LerayReport {
        pages,
        stabilization_page,
        e2,
        e2_expected,
        e2_matches_derived_sheaf,
        abutment,
        abutment_consistent,
        n_max,
    })
}

/// Pages of a one-row double complex: the first page is the row itself and
/// the second page, equal to everything after it, is the row homology
/// (computed by the sparse engine so large free coefficient sheaves stay
/// cheap).
fn degenerate_one_row_pages(
    phi: &GroupoidHom,
    l: &LeraySheafComplex,
    window: usize,
    coeff: Coefficients,
) -> Result<(Vec<(usize, BTreeMap<(usize, usize), usize>)>, usize), HomologyError> {
    let g = &phi.cod;
    let b0 = &l.complex.sheaves[0];
    let mut p1 = BTreeMap::new();
    let levels: Vec<BarLevel> = (0..=window).map(|p| BarLevel::new(g, b0, p, true)).collect();
    for (p, lvl) in levels.iter().enumerate() {
        for q in 0..=window {
            p1.insert((p, q), if q == 0 { lvl.total_rank } else { 0 });
        }
    }
    let h = match bar_complex_sparse(g, b0, window, true) {
        Some(cx) => sparse_homology(&cx, coeff)?,
        None => {
            let c = super::bar::bar_complex_normalized(g, b0, window)?;
            (0..=window as i64)
                .map(|k| c.homology_full_support(k))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let mut p2 = BTreeMap::new();
    for p in 0..=window {
        for q in 0..=window {
            p2.insert((p, q), if q == 0 { h[p].betti } else { 0 });
        }
    }
    Ok((vec![(1, p1), (2, p2)], 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::{cyclic, trivial_group};
    use crate::groupoid::is_morita_equivalence;

    #[test]
    fn identity_leray_stalks_are_contractible() {
        let g = cyclic(2).into_arc();
        let id = GroupoidHom::identity(&g);
        let a = GSheaf::constant(g.clone(), Coefficients::PrimeField(2), 1);
        let h = comma_fiber_homology(&id, &a, 0, 2).unwrap();
        assert_eq!(h[0], AbGroupClass::free(1));
        assert!(h[1].is_zero());
        assert!(h[2].is_zero());
    }

    #[test]
    fn derived_sheaf_of_identity_in_degree_zero_is_the_sheaf() {
        let g = cyclic(3).into_arc();
        let id = GroupoidHom::identity(&g);
        let a = GSheaf::free(g.clone(), Coefficients::PrimeField(3), &[1]).unwrap();
        let l0 = leray_derived_sheaf(&id, &a, 0).unwrap();
        assert_eq!(l0.stalk_ranks(), a.stalk_ranks());
        // and L_q vanishes above 0 for a Morita equivalence
        let l1 = leray_derived_sheaf(&id, &a, 1).unwrap();
        assert_eq!(l1.total_rank(), 0);
    }

    #[test]
    fn point_into_group_gives_regular_representation() {
        let one = trivial_group().into_arc();
        let g = cyclic(3).into_arc();
        let incl = GroupoidHom::new(one.clone(), g.clone(), vec![0], vec![0]).unwrap();
        let a = GSheaf::constant(one.clone(), Coefficients::PrimeField(3), 1);
        let l0 = leray_derived_sheaf(&incl, &a, 0).unwrap();
        assert_eq!(l0.stalk_rank(0), 3);
        let l1 = leray_derived_sheaf(&incl, &a, 1).unwrap();
        assert_eq!(l1.total_rank(), 0);
    }

    #[test]
    fn leray_for_z4_onto_z2_over_f2() {
        let z4 = cyclic(4).into_arc();
        let z2 = cyclic(2).into_arc();
        let quot = GroupoidHom::new(z4.clone(), z2.clone(), vec![0], vec![0, 1, 0, 1]).unwrap();
        let a = GSheaf::constant(z4.clone(), Coefficients::PrimeField(2), 1);
        let report = leray_spectral_sequence(&quot, &a, 3).unwrap();
        assert!(report.e2_matches_derived_sheaf);
        assert!(report.abutment_consistent);
        // E2 is one-dimensional in every cell of the window
        for p in 0..=3 {
            for q in 0..=3 {
                assert_eq!(
                    report.e2.get(&(p, q)).copied().unwrap_or(0),
                    1,
                    "E2[{p},{q}]"
                );
            }
        }
        // the abutment is H_*(Z/4; F2): one dimension per degree
        assert_eq!(report.abutment, vec![1, 1, 1, 1]);
    }

    #[test]
    fn morita_equivalence_concentrates_in_row_zero() {
        let one = FiniteGroupoid::discrete(1).into_arc();
        let p3 = FiniteGroupoid::pair(3).into_arc();
        let incl =
            GroupoidHom::new(one.clone(), p3.clone(), vec![0], vec![p3.unit_of(0)]).unwrap();
        assert!(is_morita_equivalence(&incl));
        let a = GSheaf::constant(one.clone(), Coefficients::PrimeField(2), 1);
        let report = leray_spectral_sequence(&incl, &a, 2).unwrap();
        for (&(_, q), &d) in &report.e2 {
            if q > 0 {
                assert_eq!(d, 0);
            }
        }
        assert!(report.abutment_consistent);
    }

    use crate::groupoid::FiniteGroupoid;
}
