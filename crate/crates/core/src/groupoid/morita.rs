use super::core::ObjId;
use super::hom::GroupoidHom;

/// Outcome of the Morita-equivalence test, with a witness when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoritaReport {
    /// every object of the codomain receives an arrow from the image
    pub essentially_surjective: bool,
    pub unreachable_object: Option<ObjId>,
    /// the arrow map restricts to a bijection on every hom-set
    pub fully_faithful: bool,
    pub failing_pair: Option<(ObjId, ObjId)>,
}

impl MoritaReport {
    pub fn is_equivalence(&self) -> bool {
        self.essentially_surjective && self.fully_faithful
    }
}

/// Decide whether `φ` is a Morita equivalence: (1) the map
/// `(y, g: t(g) = φ(y)) -> s(g)` is onto the objects of the codomain, and
/// (2) `φ` restricts to a bijection `K(y, y') -> G(φy, φy')` for every pair
/// of objects.
pub fn morita_check(phi: &GroupoidHom) -> MoritaReport {
    let k = &phi.dom;
    let g = &phi.cod;

    let mut reached = vec![false; g.n_objects()];
    for y in 0..k.n_objects() {
        for &arr in g.arrows_into(phi.on_object(y)) {
            reached[g.source(arr)] = true;
        }
    }
    let unreachable_object = reached.iter().position(|&r| !r);

    let mut failing_pair = None;
    'outer: for y in 0..k.n_objects() {
        for y2 in 0..k.n_objects() {
            let dom_hom = k.hom_set(y, y2);
            let cod_hom = g.hom_set(phi.on_object(y), phi.on_object(y2));
            if dom_hom.len() != cod_hom.len() {
                failing_pair = Some((y, y2));
                break 'outer;
            }
            let mut images: Vec<usize> = dom_hom.iter().map(|&a| phi.on_arrow(a)).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != cod_hom.len() || images != cod_hom {
                failing_pair = Some((y, y2));
                break 'outer;
            }
        }
    }

    MoritaReport {
        essentially_surjective: unreachable_object.is_none(),
        unreachable_object,
        fully_faithful: failing_pair.is_none(),
        failing_pair,
    }
}

pub fn is_morita_equivalence(phi: &GroupoidHom) -> bool {
    morita_check(phi).is_equivalence()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::core::FiniteGroupoid;
    use crate::groupoid::groups::{cyclic, trivial_group};
    use crate::groupoid::translation::translation_groupoid;

    #[test]
    fn point_into_pair_groupoid() {
        let one = FiniteGroupoid::discrete(1).into_arc();
        for n in 1..=4 {
            let p = FiniteGroupoid::pair(n).into_arc();
            let incl = GroupoidHom::new(one.clone(), p.clone(), vec![0], vec![p.unit_of(0)])
                .unwrap();
            assert!(is_morita_equivalence(&incl), "point into pair({n})");
        }
    }

    #[test]
    fn z2_to_trivial_is_not() {
        let z2 = cyclic(2).into_arc();
        let one = trivial_group().into_arc();
        let collapse = GroupoidHom::new(z2, one, vec![0], vec![0, 0]).unwrap();
        let report = morita_check(&collapse);
        assert!(!report.is_equivalence());
        assert_eq!(report.failing_pair, Some((0, 0)));
        assert!(report.essentially_surjective);
    }

    #[test]
    fn free_transitive_translation_collapse() {
        // G acting on itself: G x G -> point is a Morita equivalence
        let z3 = cyclic(3);
        let action: Vec<Vec<usize>> = (0..3)
            .map(|x| (0..3).map(|g| z3.compose_arrows(x, g)).collect())
            .collect();
        let t = translation_groupoid(3, &z3, &action).unwrap().into_arc();
        let one = trivial_group().into_arc();
        let collapse = GroupoidHom::new(
            t.clone(),
            one,
            vec![0; 3],
            vec![0; t.n_arrows()],
        )
        .unwrap();
        assert!(is_morita_equivalence(&collapse));
    }

    #[test]
    fn identity_is_always_an_equivalence() {
        for g in [
            FiniteGroupoid::pair(3).into_arc(),
            cyclic(4).into_arc(),
            FiniteGroupoid::empty().into_arc(),
        ] {
            assert!(is_morita_equivalence(&GroupoidHom::identity(&g)));
        }
    }
}
