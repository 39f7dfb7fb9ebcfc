use super::algebra::CyclicError;
use super::localize::{localize_by_loop_orbit, LoopLocalization};
use crate::groupoid::{loop_groupoid, FiniteGroupoid};
use crate::homology::groupoid_homology_range;
use crate::linalg::Coefficients;
use crate::sheaf::GSheaf;

/// Comparison of the Hochschild homology of the convolution algebra with
/// the homology of the loop groupoid, plus the periodic homology of the
/// unit-localized summand against the two-periodic sum of groupoid
/// homology.
pub struct LoopComparisonReport {
    /// `HH_n(k[G])` for `n <= n_max`
    pub hochschild_dims: Vec<usize>,
    /// `H_n(Omega(G); k)` for `n <= n_max`
    pub loop_homology_dims: Vec<usize>,
    pub hochschild_matches_loops: bool,
    /// `HP_i(k[G])_{[1]}` when the tower stabilized in the window
    pub hp_units: [Option<usize>; 2],
    /// window-truncated `sum_k dim H_{i+2k}(G; k)`
    pub hp_expected: [usize; 2],
    pub hp_matches: Option<bool>,
}

pub fn loop_comparison(
    g: &FiniteGroupoid,
    coeff: Coefficients,
    n_max: usize,
) -> Result<LoopComparisonReport, CyclicError> {
    if coeff.characteristic() != 0 || !coeff.is_field() {
        return Err(CyclicError::CharacteristicNotZero);
    }
    let loc = localize_by_loop_orbit(g, coeff, n_max + 1)?;
    let hochschild_dims = {
        let mut h = loc.hochschild_total()?;
        h.truncate(n_max + 1);
        h
    };

    let (omega, _) = loop_groupoid(g);
    let constant = GSheaf::constant(omega.clone().into_arc(), coeff, 1);
    let loop_homology_dims: Vec<usize> = groupoid_homology_range(&omega, &constant, n_max, coeff)
        .map_err(|e| CyclicError::RelationViolation(e.to_string()))?
        .iter()
        .map(|h| h.betti)
        .collect();

    let hochschild_matches_loops = hochschild_dims == loop_homology_dims;

    let (hp_units, hp_expected, hp_matches) = hp_comparison(g, &loc, coeff, n_max)?;

    Ok(LoopComparisonReport {
        hochschild_dims,
        loop_homology_dims,
        hochschild_matches_loops,
        hp_units,
        hp_expected,
        hp_matches,
    })
}

fn hp_comparison(
    g: &FiniteGroupoid,
    loc: &LoopLocalization,
    coeff: Coefficients,
    n_max: usize,
) -> Result<([Option<usize>; 2], [usize; 2], Option<bool>), CyclicError> {
    let units = loc.unit_orbits();
    let units_mixed = loc.restrict(&units);
    let hp0 = units_mixed.periodic(0).ok();
    let hp1 = units_mixed.periodic(1).ok();

    let constant = GSheaf::constant(
        std::sync::Arc::new(g.clone()),
        coeff,
        1,
    );
    let h = groupoid_homology_range(g, &constant, n_max, coeff)
        .map_err(|e| CyclicError::RelationViolation(e.to_string()))?;
    let expected = |i: usize| -> usize {
        (0..)
            .map(|k| i + 2 * k)
            .take_while(|&d| d <= n_max)
            .map(|d| h[d].betti)
            .sum()
    };
    let hp_expected = [expected(0), expected(1)];
    let hp_matches = match (hp0, hp1) {
        (Some(a), Some(b)) => Some(a == hp_expected[0] && b == hp_expected[1]),
        _ => None,
    };
    Ok(([hp0, hp1], hp_expected, hp_matches))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::{cyclic, symmetric3};

    #[test]
    fn z3_comparison() {
        let rep = loop_comparison(&cyclic(3), Coefficients::Rationals, 3).unwrap();
        assert_eq!(rep.hochschild_dims, vec![3, 0, 0, 0]);
        assert_eq!(rep.loop_homology_dims, vec![3, 0, 0, 0]);
        assert!(rep.hochschild_matches_loops);
        assert_eq!(rep.hp_units, [Some(1), Some(0)]);
        assert_eq!(rep.hp_matches, Some(true));
    }

    #[test]
    fn pair_groupoid_comparison() {
        let rep = loop_comparison(&FiniteGroupoid::pair(2), Coefficients::Rationals, 3).unwrap();
        assert_eq!(rep.hochschild_dims, vec![1, 0, 0, 0]);
        assert!(rep.hochschild_matches_loops);
    }

    #[test]
    fn s3_has_three_conjugacy_classes() {
        let rep = loop_comparison(&symmetric3(), Coefficients::Rationals, 2).unwrap();
        assert_eq!(rep.hochschild_dims, vec![3, 0, 0]);
        assert!(rep.hochschild_matches_loops);
    }

    #[test]
    fn prime_field_rejected() {
        assert!(matches!(
            loop_comparison(&cyclic(2), Coefficients::PrimeField(3), 2),
            Err(CyclicError::CharacteristicNotZero)
        ));
    }

    use crate::groupoid::FiniteGroupoid;
}
