use super::algebra::CyclicError;
use super::mixed::MixedComplex;
use super::module::{gen_closing, loop_orbits};
use crate::groupoid::{ArrId, FiniteGroupoid};
use crate::linalg::sparse::SparseMat;
use crate::linalg::Coefficients;
use rayon::prelude::*;
use std::collections::HashMap;

/// The cyclic machinery of a convolution algebra on the normalized basis of
/// cyclically composable tuples, graded by the conjugation orbit of the
/// composite loop. Tuples whose cyclic composite is undefined span a
/// complement that every operator preserves, so they are discarded; the
/// grading itself is machine-verified to be respected by `b` and `B`.
pub struct LoopLocalization {
    pub coeff: Coefficients,
    pub n_max: usize,
    /// normalized closing tuples per level, lexicographic
    pub bases: Vec<Vec<Vec<ArrId>>>,
    pub orbit_of: Vec<Vec<usize>>,
    pub orbit_reps: Vec<ArrId>,
    pub orbit_is_units: Vec<bool>,
    pub mixed: MixedComplex,
}

impl LoopLocalization {
    pub fn orbit_count(&self) -> usize {
        self.orbit_reps.len()
    }

    /// Restriction of the mixed complex to one orbit summand (or, via
    /// `orbits`, to a union of summands such as all unit orbits).
    pub fn restrict(&self, orbits: &[usize]) -> MixedComplex {
        let keep: Vec<Vec<usize>> = (0..=self.n_max)
            .map(|n| {
                self.orbit_of[n]
                    .iter()
                    .enumerate()
                    .filter(|(_, o)| orbits.contains(o))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = keep.iter().map(|k| k.len()).collect();
        let b = (1..=self.n_max)
            .map(|n| restrict_mat(&self.mixed.b[n - 1], &keep[n - 1], &keep[n]))
            .collect();
        let bb = (0..self.n_max)
            .map(|n| restrict_mat(&self.mixed.bb[n], &keep[n + 1], &keep[n]))
            .collect();
        MixedComplex {
            coeff: self.coeff,
            dims,
            b,
            bb,
        }
    }

    pub fn unit_orbits(&self) -> Vec<usize> {
        (0..self.orbit_count())
            .filter(|&o| self.orbit_is_units[o])
            .collect()
    }

    /// Hochschild dimensions of each orbit summand, in orbit order.
    pub fn hochschild_by_orbit(&self) -> Result<Vec<Vec<usize>>, CyclicError> {
        (0..self.orbit_count())
            .into_par_iter()
            .map(|o| {
                let mx = self.restrict(&[o]);
                Ok(mx.hochschild()?.iter().map(|g| g.betti).collect())
            })
            .collect()
    }

    /// Hochschild dimensions of the whole closing complex, computed in one
    /// piece (the completeness check compares this against the orbit sums).
    pub fn hochschild_total(&self) -> Result<Vec<usize>, CyclicError> {
        Ok(self.mixed.hochschild()?.iter().map(|g| g.betti).collect())
    }

    /// Does the sum of the per-orbit Hochschild dimensions reproduce the
    /// total in every degree of the window?
    pub fn completeness_verified(&self) -> Result<bool, CyclicError> {
        let by_orbit = self.hochschild_by_orbit()?;
        let total = self.hochschild_total()?;
        Ok((0..total.len()).all(|n| {
            let sum: usize = by_orbit.iter().map(|h| h[n]).sum();
            sum == total[n]
        }))
    }
}

fn restrict_mat(m: &SparseMat, rows: &[usize], cols: &[usize]) -> SparseMat {
    let rpos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut out = SparseMat::new(rows.len(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        for (r, v) in m.col_entries(c) {
            if let Some(&ri) = rpos.get(&r) {
                out.add_entry(ri, j, v);
            }
        }
    }
    out
}

/// Build the localization: enumerate normalized closing tuples, grade them
/// by the orbit of their composite, build `b` and `B` tuple-wise on the
/// normalized complex, check the mixed-complex identities and the
/// b/B-stability of the grading.
pub fn localize_by_loop_orbit(
    g: &FiniteGroupoid,
    coeff: Coefficients,
    n_max: usize,
) -> Result<LoopLocalization, CyclicError> {
    let (loops, orbit_id_of_loop, orbit_reps) = loop_orbits(g);
    let loop_pos: HashMap<ArrId, usize> = loops.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let orbit_is_units: Vec<bool> = orbit_reps.iter().map(|&l| g.is_unit(l)).collect();

    let mut bases: Vec<Vec<Vec<ArrId>>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        gen_closing(g, n + 1, true, &mut cur, &mut out);
        out.sort_unstable();
        bases.push(out);
    }
    let composite = |tup: &[ArrId]| -> ArrId {
        let mut acc = tup[0];
        for &x in &tup[1..] {
            acc = g.compose_arrows(acc, x);
        }
        acc
    };
    let orbit_of: Vec<Vec<usize>> = bases
        .iter()
        .map(|lvl| {
            lvl.iter()
                .map(|t| orbit_id_of_loop[loop_pos[&composite(t)]])
                .collect()
        })
        .collect();

    let index = |lvl: &Vec<Vec<ArrId>>, t: &[ArrId]| -> Option<usize> {
        lvl.binary_search_by(|probe| probe.as_slice().cmp(t)).ok()
    };
    let is_normalized = |t: &[ArrId]| -> bool { t[1..].iter().all(|&a| !g.is_unit(a)) };

    // b: alternating sum of the merge faces, projected to the normalized basis
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut b_mats = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (upper, lower) = (&bases[n], &bases[n - 1]);
        let mut m = SparseMat::new(lower.len(), upper.len());
        for (ci, tup) in upper.iter().enumerate() {
            for face in 0..=n {
                let sign = if face % 2 == 0 { 1i64 } else { -1 };
                let target: Vec<ArrId> = if face < n {
                    let prod = g.compose_arrows(tup[face], tup[face + 1]);
                    let mut t = Vec::with_capacity(n);
                    t.extend_from_slice(&tup[..face]);
                    t.push(prod);
                    t.extend_from_slice(&tup[face + 2..]);
                    t
                } else {
                    let prod = g.compose_arrows(tup[n], tup[0]);
                    let mut t = Vec::with_capacity(n);
                    t.push(prod);
                    t.extend_from_slice(&tup[1..n]);
                    t
                };
                if !is_normalized(&target) {
                    continue;
                }
                let ti = index(lower, &target).expect("normalized closing face stays in basis");
                m.add_entry(ti, ci, sign);
            }
        }
        b_mats.push(m);
    }

    // B: the surviving part of (1 - lambda) s N is the extra degeneracy of
    // each unit-free rotation
    let mut bb_mats = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let (lower, upper) = (&bases[n], &bases[n + 1]);
        let mut m = SparseMat::new(upper.len(), lower.len());
        for (ci, tup) in lower.iter().enumerate() {
            for i in 0..=n {
                // w = t^i(tup): rotate right by i
                let w: Vec<ArrId> = (0..=n).map(|k| tup[(k + n + 1 - i) % (n + 1)]).collect();
                if w.iter().any(|&a| g.is_unit(a)) {
                    continue;
                }
                let sign = if (n * i) % 2 == 0 { 1i64 } else { -1 };
                let mut target = Vec::with_capacity(n + 2);
                target.push(g.unit_of(g.target(w[0])));
                target.extend_from_slice(&w);
                let ti = index(upper, &target).expect("extra degeneracy stays in basis");
                m.add_entry(ti, ci, sign);
            }
        }
        bb_mats.push(m);
    }

    let mixed = MixedComplex {
        coeff,
        dims,
        b: b_mats,
        bb: bb_mats,
    };
    mixed.validate()?;

    // machine-check that both differentials respect the orbit grading
    for n in 1..=n_max {
        for c in 0..bases[n].len() {
            for (r, _) in mixed.b[n - 1].col_entries(c) {
                if orbit_of[n - 1][r] != orbit_of[n][c] {
                    return Err(CyclicError::RelationViolation(format!(
                        "b does not respect the orbit grading at level {n}"
                    )));
                }
            }
        }
    }
    for n in 0..n_max {
        for c in 0..bases[n].len() {
            for (r, _) in mixed.bb[n].col_entries(c) {
                if orbit_of[n + 1][r] != orbit_of[n][c] {
                    return Err(CyclicError::RelationViolation(format!(
                        "B does not respect the orbit grading at level {n}"
                    )));
                }
            }
        }
    }

    Ok(LoopLocalization {
        coeff,
        n_max,
        bases,
        orbit_of,
        orbit_reps,
        orbit_is_units,
        mixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::algebra::convolution_algebra;
    use crate::cyclic::mixed::mixed_complex;
    use crate::cyclic::module::cyclic_module_of_algebra;
    use crate::groupoid::groups::{cyclic, symmetric3};

    #[test]
    fn normalized_closing_path_matches_the_full_module() {
        // the oracle route: full unnormalized cyclic module of the algebra
        for g in [cyclic(2), cyclic(3)] {
            let a = convolution_algebra(&g, Coefficients::Rationals).unwrap();
            let full = mixed_complex(&cyclic_module_of_algebra(&a, 4)).unwrap();
            let loc = localize_by_loop_orbit(&g, Coefficients::Rationals, 4).unwrap();
            let hh_full: Vec<usize> = full.hochschild().unwrap().iter().map(|x| x.betti).collect();
            let hh_loc = loc.hochschild_total().unwrap();
            assert_eq!(hh_full, hh_loc);
            let hc_full: Vec<usize> = full.cyclic().unwrap().iter().map(|x| x.betti).collect();
            let hc_loc: Vec<usize> = loc.mixed.cyclic().unwrap().iter().map(|x| x.betti).collect();
            assert_eq!(hc_full, hc_loc);
        }
    }

    #[test]
    fn group_orbits_are_conjugacy_classes_with_unit_summand() {
        let loc = localize_by_loop_orbit(&symmetric3(), Coefficients::Rationals, 3).unwrap();
        assert_eq!(loc.orbit_count(), 3);
        assert_eq!(loc.unit_orbits().len(), 1);
        assert!(loc.completeness_verified().unwrap());
        // each class contributes one dimension to HH_0 of a group algebra
        let by_orbit = loc.hochschild_by_orbit().unwrap();
        for h in &by_orbit {
            assert_eq!(h[0], 1);
        }
    }

    #[test]
    fn pair_groupoid_has_a_single_orbit() {
        let g = FiniteGroupoid::pair(2);
        let loc = localize_by_loop_orbit(&g, Coefficients::Rationals, 4).unwrap();
        assert_eq!(loc.orbit_count(), 1);
        let hh = loc.hochschild_total().unwrap();
        assert_eq!(hh, vec![1, 0, 0, 0]);
    }

    use crate::groupoid::FiniteGroupoid;
}
