use super::core::{ArrId, FiniteGroupoid, ObjId};
use super::hom::{GroupoidHom, HomError};
use std::collections::HashMap;
use std::sync::Arc;

/// The comma groupoid `x/φ` of a homomorphism `φ: K -> G` at an object `x`
/// of `G`. Objects are pairs `(y, g: x -> φ(y))`; an arrow
/// `(y, g) -> (y', g')` is an arrow `k: y -> y'` of `K` with `φ(k) o g = g'`.
/// It is the fiber of `φ` over `x`, and its homology gives the stalks of the
/// derived pushforward.
#[derive(Debug, Clone)]
pub struct CommaGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    /// forgets the `G`-arrow: `x/φ -> K`
    pub projection: GroupoidHom,
    /// object labels `(y, g)`, lexicographic
    pub objects: Vec<(ObjId, ArrId)>,
    /// arrow labels `(k, g)` where `g: x -> φ(s(k))`, lexicographic
    pub arrows: Vec<(ArrId, ArrId)>,
}

pub fn comma_groupoid(phi: &GroupoidHom, x: ObjId) -> CommaGroupoid {
    let k_gpd = &phi.dom;
    let g_gpd = &phi.cod;
    assert!(x < g_gpd.n_objects());

    let mut objects: Vec<(ObjId, ArrId)> = Vec::new();
    for y in 0..k_gpd.n_objects() {
        for &g in g_gpd.arrows_into(phi.on_object(y)) {
            if g_gpd.source(g) == x {
                objects.push((y, g));
            }
        }
    }
    objects.sort_unstable();
    let obj_index: HashMap<(ObjId, ArrId), usize> =
        objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();

    // (k, g) with g: x -> φ(s(k))
    let mut arrows: Vec<(ArrId, ArrId)> = Vec::new();
    for k in 0..k_gpd.n_arrows() {
        let y = k_gpd.source(k);
        for &g in g_gpd.arrows_into(phi.on_object(y)) {
            if g_gpd.source(g) == x {
                arrows.push((k, g));
            }
        }
    }
    arrows.sort_unstable();
    let arr_index: HashMap<(ArrId, ArrId), usize> =
        arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();

    let mut src = Vec::with_capacity(arrows.len());
    let mut tgt = Vec::with_capacity(arrows.len());
    for &(k, g) in &arrows {
        src.push(obj_index[&(k_gpd.source(k), g)]);
        let g_target = g_gpd.compose_arrows(phi.on_arrow(k), g);
        tgt.push(obj_index[&(k_gpd.target(k), g_target)]);
    }
    let mut compose = HashMap::new();
    for (i, &(k2, g2)) in arrows.iter().enumerate() {
        // (k2, g2): (s k2, g2) -> (t k2, φ(k2) g2)
        for (j, &(k1, g1)) in arrows.iter().enumerate() {
            // compose (k1, g1) o (k2, g2): need s(k1) = t(k2), g1 = φ(k2) g2
            if k_gpd.source(k1) == k_gpd.target(k2)
                && g1 == g_gpd.compose_arrows(phi.on_arrow(k2), g2)
            {
                let k12 = k_gpd.compose_arrows(k1, k2);
                let idx = arr_index[&(k12, g2)];
                compose.insert((j as u32, i as u32), idx as u32);
            }
        }
    }
    let unit: Vec<ArrId> = objects
        .iter()
        .map(|&(y, g)| arr_index[&(k_gpd.unit_of(y), g)])
        .collect();
    let inverse: Vec<ArrId> = arrows
        .iter()
        .map(|&(k, g)| {
            let g_target = g_gpd.compose_arrows(phi.on_arrow(k), g);
            arr_index[&(k_gpd.inverse_of(k), g_target)]
        })
        .collect();
    let groupoid = FiniteGroupoid::new(objects.len(), src, tgt, compose, unit, inverse)
        .expect("comma groupoid is valid")
        .into_arc();

    let projection = GroupoidHom::new(
        groupoid.clone(),
        phi.dom.clone(),
        objects.iter().map(|&(y, _)| y).collect(),
        arrows.iter().map(|&(k, _)| k).collect(),
    )
    .expect("comma projection is a homomorphism");

    CommaGroupoid {
        groupoid,
        projection,
        objects,
        arrows,
    }
}

/// The homomorphism `x'/φ -> x/φ` induced by an arrow `g: x -> x'` of `G`
/// by precomposition: `(y, h) -> (y, h o g)`.
pub fn comma_action(
    phi: &GroupoidHom,
    g: ArrId,
    from: &CommaGroupoid, // at t(g)
    to: &CommaGroupoid,   // at s(g)
) -> Result<GroupoidHom, HomError> {
    let g_gpd = &phi.cod;
    let to_obj: HashMap<(ObjId, ArrId), usize> = to
        .objects
        .iter()
        .enumerate()
        .map(|(i, &o)| (o, i))
        .collect();
    let to_arr: HashMap<(ArrId, ArrId), usize> = to
        .arrows
        .iter()
        .enumerate()
        .map(|(i, &a)| (a, i))
        .collect();
    let object_map = from
        .objects
        .iter()
        .map(|&(y, h)| to_obj[&(y, g_gpd.compose_arrows(h, g))])
        .collect();
    let arrow_map = from
        .arrows
        .iter()
        .map(|&(k, h)| to_arr[&(k, g_gpd.compose_arrows(h, g))])
        .collect();
    GroupoidHom::new(
        from.groupoid.clone(),
        to.groupoid.clone(),
        object_map,
        arrow_map,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::{cyclic, symmetric3, trivial_group};

    #[test]
    fn comma_of_identity_on_a_group_is_codiscrete() {
        let g = symmetric3().into_arc();
        let id = GroupoidHom::identity(&g);
        let c = comma_groupoid(&id, 0);
        assert_eq!(c.groupoid.n_objects(), 6);
        // every hom-set is a single arrow: connected with trivial isotropy
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(c.groupoid.hom_set(a, b).len(), 1);
            }
        }
    }

    #[test]
    fn comma_of_point_inclusion_is_discrete() {
        let one = trivial_group().into_arc();
        let g = symmetric3().into_arc();
        let incl = GroupoidHom::new(one, g, vec![0], vec![0]).unwrap();
        let c = comma_groupoid(&incl, 0);
        assert_eq!(c.groupoid.n_objects(), 6);
        assert_eq!(c.groupoid.n_arrows(), 6); // units only
    }

    #[test]
    fn comma_can_be_empty() {
        let k = trivial_group().into_arc();
        let g = FiniteGroupoid::discrete(2).into_arc();
        let incl = GroupoidHom::new(k, g, vec![0], vec![0]).unwrap();
        let c = comma_groupoid(&incl, 1);
        assert_eq!(c.groupoid.n_objects(), 0);
    }

    #[test]
    fn action_functoriality() {
        // composite of two comma actions equals the action of the composite
        let g = cyclic(3).into_arc();
        let id = GroupoidHom::identity(&g);
        let c = comma_groupoid(&id, 0);
        let a1 = comma_action(&id, 1, &c, &c).unwrap();
        let a2 = comma_action(&id, 2, &c, &c).unwrap();
        // act(b) o act(a) sends (y, h) to (y, (h o a) o b) = act(a o b)(y, h)
        let a12 = comma_action(&id, g.compose_arrows(1, 2), &c, &c).unwrap();
        let comp = a2.compose(&a1).unwrap();
        assert_eq!(comp.arrow_map(), a12.arrow_map());

        // the unit acts as the identity
        let au = comma_action(&id, g.unit_of(0), &c, &c).unwrap();
        assert_eq!(au.arrow_map(), GroupoidHom::identity(&c.groupoid).arrow_map());
    }
}
