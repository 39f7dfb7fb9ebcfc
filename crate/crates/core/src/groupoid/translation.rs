use super::core::{ArrId, FiniteGroupoid, GroupoidError, ObjId};
use std::collections::HashMap;

/// Translation groupoid of a right `G`-set for a one-object groupoid `G`:
/// objects are the set elements, arrows are pairs `(x, γ)` with
/// `(x, γ): x·γ -> x`, composing by `(x, γ)(x·γ, δ) = (x, γδ)`.
///
/// `action[x][γ]` is `x·γ`; it must satisfy `x·e = x` and
/// `(x·γ)·δ = x·(γδ)`.
pub fn translation_groupoid(
    set_size: usize,
    group: &FiniteGroupoid,
    action: &[Vec<usize>],
) -> Result<FiniteGroupoid, GroupoidError> {
    if !group.is_group() {
        return Err(GroupoidError::NotAnAction(
            "acting groupoid must have one object".into(),
        ));
    }
    let m = group.n_arrows();
    if action.len() != set_size || action.iter().any(|r| r.len() != m) {
        return Err(GroupoidError::NotAnAction("table shape mismatch".into()));
    }
    let e = group.unit_of(0);
    for x in 0..set_size {
        if action[x].iter().any(|&y| y >= set_size) {
            return Err(GroupoidError::NotAnAction(format!(
                "image out of range at {x}"
            )));
        }
        if action[x][e] != x {
            return Err(GroupoidError::NotAnAction(format!(
                "unit does not fix {x}"
            )));
        }
        for g in 0..m {
            for h in 0..m {
                if action[action[x][g]][h] != action[x][group.compose_arrows(g, h)] {
                    return Err(GroupoidError::NotAnAction(format!(
                        "not compatible with multiplication at ({x}, {g}, {h})"
                    )));
                }
            }
        }
    }
    // anchor is trivial: every set element sits over the unique object
    let anchor = vec![0usize; set_size];
    let act = |x: usize, g: ArrId| action[x][g];
    translation_over(group, set_size, &anchor, act)
}

/// Translation groupoid of a right `G`-space with anchor `p: X -> G^(0)`:
/// the action `x·g` is defined for arrows `g` with `t(g) = p(x)` and lands
/// over `s(g)`; the arrow `(x, g)` runs `x·g -> x`.
pub fn translation_over(
    g: &FiniteGroupoid,
    x_count: usize,
    anchor: &[ObjId],
    action: impl Fn(usize, ArrId) -> usize,
) -> Result<FiniteGroupoid, GroupoidError> {
    // arrows (x, gamma) with t(gamma) = anchor(x), lexicographic
    let mut arrows: Vec<(usize, ArrId)> = Vec::new();
    for x in 0..x_count {
        for &gamma in g.arrows_into(anchor[x]) {
            arrows.push((x, gamma));
        }
    }
    let mut arrows_sorted = arrows.clone();
    arrows_sorted.sort_unstable();
    let index: HashMap<(usize, ArrId), usize> = arrows_sorted
        .iter()
        .enumerate()
        .map(|(i, &a)| (a, i))
        .collect();
    let mut src = Vec::with_capacity(arrows_sorted.len());
    let mut tgt = Vec::with_capacity(arrows_sorted.len());
    for &(x, gamma) in &arrows_sorted {
        src.push(action(x, gamma));
        tgt.push(x);
    }
    let mut compose = HashMap::new();
    for (i, &(x, gamma)) in arrows_sorted.iter().enumerate() {
        let xg = action(x, gamma);
        // (x, gamma) o (xg, delta) = (x, gamma delta)
        for &delta in g.arrows_into(anchor[xg]) {
            let j = index[&(xg, delta)];
            let k = index[&(x, g.compose_arrows(gamma, delta))];
            compose.insert((i as u32, j as u32), k as u32);
        }
    }
    let unit: Vec<ArrId> = (0..x_count)
        .map(|x| index[&(x, g.unit_of(anchor[x]))])
        .collect();
    let inverse: Vec<ArrId> = arrows_sorted
        .iter()
        .map(|&(x, gamma)| index[&(action(x, gamma), g.inverse_of(gamma))])
        .collect();
    FiniteGroupoid::new(x_count, src, tgt, compose, unit, inverse)
}

/// The loop groupoid: `G` acting on its own loops by conjugation,
/// `γ·g = g^{-1} γ g`. Returns the groupoid together with the loop list
/// (object `i` of the result is `loops[i]`).
pub fn loop_groupoid(g: &FiniteGroupoid) -> (FiniteGroupoid, Vec<ArrId>) {
    let loops = g.loops();
    let loop_index: HashMap<ArrId, usize> = loops.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let anchor: Vec<ObjId> = loops.iter().map(|&l| g.target(l)).collect();
    let action = |x: usize, gamma: ArrId| -> usize {
        let l = loops[x];
        let conj = g.compose_arrows(g.compose_arrows(g.inverse_of(gamma), l), gamma);
        loop_index[&conj]
    };
    let omega = translation_over(g, loops.len(), &anchor, action)
        .expect("conjugation is a right action on loops");
    (omega, loops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::{conjugacy_class_count, cyclic, symmetric3};

    #[test]
    fn trivial_action_gives_discrete_bundle() {
        let g = cyclic(1);
        let t = translation_groupoid(3, &g, &vec![vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(t.n_objects(), 3);
        assert_eq!(t.n_arrows(), 3);
        assert_eq!(t.orbits().len(), 3);
    }

    #[test]
    fn z2_translating_itself() {
        let z2 = cyclic(2);
        let action = vec![vec![0, 1], vec![1, 0]];
        let t = translation_groupoid(2, &z2, &action).unwrap();
        assert_eq!(t.n_objects(), 2);
        assert_eq!(t.n_arrows(), 4);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(t.hom_set(x, y).len(), 1);
            }
        }
    }

    #[test]
    fn z2_on_a_point_is_z2() {
        let z2 = cyclic(2);
        let t = translation_groupoid(1, &z2, &vec![vec![0, 0]]).unwrap();
        assert_eq!(t.n_objects(), 1);
        assert_eq!(t.n_arrows(), 2);
    }

    #[test]
    fn invalid_action_rejected() {
        let z2 = cyclic(2);
        // "action" where the unit moves a point
        let bad = translation_groupoid(2, &z2, &vec![vec![1, 0], vec![0, 1]]);
        assert!(matches!(bad, Err(GroupoidError::NotAnAction(_))));
    }

    #[test]
    fn loop_orbits_are_conjugacy_classes() {
        let s3 = symmetric3();
        let (omega, loops) = loop_groupoid(&s3);
        assert_eq!(loops.len(), 6);
        assert_eq!(omega.orbits().len(), conjugacy_class_count(&s3));
        assert_eq!(omega.orbits().len(), 3);
    }

    #[test]
    fn pair_groupoid_loops_are_one_orbit() {
        let p2 = FiniteGroupoid::pair(2);
        let (omega, loops) = loop_groupoid(&p2);
        assert_eq!(loops.len(), 2);
        assert_eq!(omega.orbits().len(), 1);
    }

    #[test]
    fn trivial_group_loops_are_a_point() {
        let (omega, _) = loop_groupoid(&cyclic(1));
        assert_eq!(omega.n_objects(), 1);
        assert_eq!(omega.n_arrows(), 1);
    }
}
