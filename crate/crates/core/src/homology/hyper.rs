use super::compute::{
    homology_sheaf, hyperhomology, sheaf_double_complex, HomologyError,
};
use crate::complexes::spectral_sequence;
use crate::groupoid::FiniteGroupoid;
use crate::sheaf::SheafComplex;
use std::collections::BTreeMap;

/// Pages and checks for the hyperhomology spectral sequence
/// `H_p(G; H_q(S)) => HH_{p+q}(G; S)` of a bounded complex of sheaves over
/// a field.
pub struct HyperhomologyReport {
    pub pages: Vec<(usize, BTreeMap<(usize, usize), usize>)>,
    pub e2: BTreeMap<(usize, usize), usize>,
    /// `H_p(G; H_q(S))` for `p, q <= n_max`
    pub e2_expected: BTreeMap<(usize, usize), usize>,
    pub e2_matches_homology_sheaves: bool,
    pub abutment: Vec<usize>,
    pub abutment_consistent: bool,
}

pub fn hyperhomology_spectral_sequence(
    g: &FiniteGroupoid,
    s: &SheafComplex,
    n_max: usize,
) -> Result<HyperhomologyReport, HomologyError> {
    let coeff = s.coefficients();
    if !coeff.is_field() {
        return Err(HomologyError::IntegerCoefficientsUnsupported);
    }
    let window = n_max + 1;
    let dc = sheaf_double_complex(g, s, window, true)?;
    let ss = spectral_sequence(&dc)?;
    let pages: Vec<(usize, BTreeMap<(usize, usize), usize>)> = (0..ss.page_count())
        .map(|i| (ss.page_r(i), ss.dims(i).clone()))
        .collect();
    let e2 = pages
        .iter()
        .find(|(r, _)| *r == 2)
        .map(|(_, d)| d.clone())
        .unwrap_or_else(|| pages.last().unwrap().1.clone());

    let q_hi = s.hi();
    let mut e2_expected = BTreeMap::new();
    for q in 0..=n_max as i64 {
        if q > q_hi {
            for p in 0..=n_max {
                e2_expected.insert((p, q as usize), 0);
            }
            continue;
        }
        let hq = homology_sheaf(s, q)?;
        let h = super::compute::groupoid_homology_range(g, &hq, n_max, coeff)?;
        for (p, hp) in h.iter().enumerate() {
            e2_expected.insert((p, q as usize), hp.betti);
        }
    }
    let e2_matches_homology_sheaves = e2_expected
        .iter()
        .all(|(&(p, q), &d)| e2.get(&(p, q)).copied().unwrap_or(0) == d);

    let abutment: Vec<usize> = hyperhomology(g, s, n_max, coeff)?
        .iter()
        .map(|h| h.betti)
        .collect();
    let einf = &pages.last().unwrap().1;
    let abutment_consistent = (0..=n_max).all(|n| {
        let total: usize = einf
            .iter()
            .filter(|(&(p, q), _)| p + q == n)
            .map(|(_, &d)| d)
            .sum();
        total == abutment[n]
    });

    Ok(HyperhomologyReport {
        pages,
        e2,
        e2_expected,
        e2_matches_homology_sheaves,
        abutment,
        abutment_consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::cyclic;
    use crate::linalg::Coefficients;
    use crate::sheaf::{GSheaf, SheafMap};

    #[test]
    fn zero_differential_complex_degenerates() {
        let g = cyclic(2);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::PrimeField(2), 1);
        let s = SheafComplex::new(
            0,
            vec![a.clone(), a.clone()],
            vec![SheafMap::zero(&a, &a)],
        )
        .unwrap();
        let rep = hyperhomology_spectral_sequence(&g, &s, 2).unwrap();
        assert!(rep.e2_matches_homology_sheaves);
        assert!(rep.abutment_consistent);
        // E2_{p,q} = H_p(Z/2; F2) for q = 0, 1: all one-dimensional
        for p in 0..=2 {
            for q in 0..=1 {
                assert_eq!(rep.e2.get(&(p, q)).copied().unwrap_or(0), 1);
            }
        }
        // abutment dims: 1, 2, 2, ...
        assert_eq!(rep.abutment, vec![1, 2, 2]);
    }

    #[test]
    fn exact_complex_gives_zero_everywhere() {
        let g = cyclic(3);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::PrimeField(3), 1);
        let s = SheafComplex::new(
            0,
            vec![a.clone(), a.clone()],
            vec![SheafMap::identity(&a)],
        )
        .unwrap();
        let rep = hyperhomology_spectral_sequence(&g, &s, 2).unwrap();
        assert!(rep.abutment.iter().all(|&d| d == 0));
        assert!(rep.e2.values().all(|&d| d == 0));
        assert!(rep.e2_matches_homology_sheaves);
    }

    #[test]
    fn shifted_complex_shifts_hyperhomology() {
        let g = cyclic(2);
        let a = GSheaf::constant(g.clone().into_arc(), Coefficients::Integers, 1);
        let s0 = SheafComplex::concentrated(a.clone(), 0);
        let s1 = s0.shift(1);
        // recompute with the shifted window starting at 0 by padding a zero
        let zero = GSheaf::zero(g.clone().into_arc(), Coefficients::Integers);
        let padded = SheafComplex::new(
            0,
            vec![zero.clone(), a.clone()],
            vec![SheafMap::zero(&a, &zero)],
        )
        .unwrap();
        assert_eq!(s1.lo, 1);
        let h0 = hyperhomology(&g, &s0, 2, Coefficients::Integers).unwrap();
        let h1 = hyperhomology(&g, &padded, 3, Coefficients::Integers).unwrap();
        for n in 0..=2 {
            assert_eq!(h0[n], h1[n + 1], "shift by one at degree {n}");
        }
    }
}
