use super::core::{ArrId, FiniteGroupoid, ObjId};
use super::hom::GroupoidHom;
use std::collections::HashMap;

/// Fibered product `H x_G K` of `φ: H -> G` and `ψ: K -> G`.
/// Objects are triples `(y, g, z)` with `g: φ(y) -> ψ(z)`; an arrow
/// `(y, g, z) -> (y', g', z')` is a pair `(h, k)` with
/// `g' o φ(h) = ψ(k) o g`.
#[derive(Debug, Clone)]
pub struct FiberedProduct {
    pub groupoid: std::sync::Arc<FiniteGroupoid>,
    pub to_left: GroupoidHom,
    pub to_right: GroupoidHom,
    pub objects: Vec<(ObjId, ArrId, ObjId)>,
    /// arrow labels `(h, g, k)` where `g: φ(s h) -> ψ(s k)`
    pub arrows: Vec<(ArrId, ArrId, ArrId)>,
}

pub fn fibered_product(phi: &GroupoidHom, psi: &GroupoidHom) -> FiberedProduct {
    assert!(
        phi.cod.as_ref() == psi.cod.as_ref(),
        "fibered product needs a common codomain"
    );
    let h_gpd = &phi.dom;
    let k_gpd = &psi.dom;
    let g_gpd = &phi.cod;

    let mut objects: Vec<(ObjId, ArrId, ObjId)> = Vec::new();
    for y in 0..h_gpd.n_objects() {
        for z in 0..k_gpd.n_objects() {
            for g in h_g_homset(g_gpd, phi.on_object(y), psi.on_object(z)) {
                objects.push((y, g, z));
            }
        }
    }
    objects.sort_unstable();
    let obj_index: HashMap<(ObjId, ArrId, ObjId), usize> =
        objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();

    let mut arrows: Vec<(ArrId, ArrId, ArrId)> = Vec::new();
    for h in 0..h_gpd.n_arrows() {
        for k in 0..k_gpd.n_arrows() {
            for g in h_g_homset(
                g_gpd,
                phi.on_object(h_gpd.source(h)),
                psi.on_object(k_gpd.source(k)),
            ) {
                arrows.push((h, g, k));
            }
        }
    }
    arrows.sort_unstable();
    let arr_index: HashMap<(ArrId, ArrId, ArrId), usize> =
        arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();

    // target coordinate of an arrow label
    let target_g = |&(h, g, k): &(ArrId, ArrId, ArrId)| -> ArrId {
        // g' = ψ(k) o g o φ(h)^{-1}
        let inv = g_gpd.inverse_of(phi.on_arrow(h));
        g_gpd.compose_arrows(g_gpd.compose_arrows(psi.on_arrow(k), g), inv)
    };

    let mut src = Vec::with_capacity(arrows.len());
    let mut tgt = Vec::with_capacity(arrows.len());
    for a in &arrows {
        let &(h, g, k) = a;
        src.push(obj_index[&(h_gpd.source(h), g, k_gpd.source(k))]);
        tgt.push(obj_index[&(h_gpd.target(h), target_g(a), k_gpd.target(k))]);
    }

    let mut compose = HashMap::new();
    for (i, a2) in arrows.iter().enumerate() {
        let &(h2, g2, k2) = a2;
        let mid_g = target_g(a2);
        for &h1 in h_gpd.arrows_out_of(h_gpd.target(h2)) {
            for &k1 in k_gpd.arrows_out_of(k_gpd.target(k2)) {
                let lbl = (h1, mid_g, k1);
                if let Some(&j) = arr_index.get(&lbl) {
                    let comp = (
                        h_gpd.compose_arrows(h1, h2),
                        g2,
                        k_gpd.compose_arrows(k1, k2),
                    );
                    compose.insert((j as u32, i as u32), arr_index[&comp] as u32);
                }
            }
        }
    }

    let unit: Vec<ArrId> = objects
        .iter()
        .map(|&(y, g, z)| arr_index[&(h_gpd.unit_of(y), g, k_gpd.unit_of(z))])
        .collect();
    let inverse: Vec<ArrId> = arrows
        .iter()
        .map(|a| {
            let &(h, _, k) = a;
            arr_index[&(h_gpd.inverse_of(h), target_g(a), k_gpd.inverse_of(k))]
        })
        .collect();

    let groupoid = FiniteGroupoid::new(objects.len(), src, tgt, compose, unit, inverse)
        .expect("fibered product is a valid groupoid")
        .into_arc();
    let to_left = GroupoidHom::new(
        groupoid.clone(),
        phi.dom.clone(),
        objects.iter().map(|&(y, _, _)| y).collect(),
        arrows.iter().map(|&(h, _, _)| h).collect(),
    )
    .expect("left projection is a homomorphism");
    let to_right = GroupoidHom::new(
        groupoid.clone(),
        psi.dom.clone(),
        objects.iter().map(|&(_, _, z)| z).collect(),
        arrows.iter().map(|&(_, _, k)| k).collect(),
    )
    .expect("right projection is a homomorphism");

    FiberedProduct {
        groupoid,
        to_left,
        to_right,
        objects,
        arrows,
    }
}

fn h_g_homset(g: &FiniteGroupoid, from: ObjId, to: ObjId) -> Vec<ArrId> {
    g.hom_set(from, to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::{cyclic, trivial_group};

    #[test]
    fn two_points_into_a_group_give_the_group_as_a_set() {
        // both maps 1 -> G: objects are triples (*, g, *), arrows are pairs
        // (e, k) with g' e = k g, so hom((.,g,.),(.,g',.)) is a singleton
        // exactly when g' = g modulo nothing: arrows (e, g, e) require
        // ψ(e) g φ(e)^{-1} = g: the groupoid is discrete on |G| objects
        let one = trivial_group().into_arc();
        let g = cyclic(3).into_arc();
        let phi = GroupoidHom::new(one.clone(), g.clone(), vec![0], vec![0]).unwrap();
        let fp = fibered_product(&phi, &phi);
        assert_eq!(fp.groupoid.n_objects(), 3);
        assert_eq!(fp.groupoid.n_arrows(), 3);
        assert_eq!(fp.groupoid.orbits().len(), 3);
    }

    #[test]
    fn empty_factor_gives_empty_product() {
        let e = FiniteGroupoid::empty().into_arc();
        let g = cyclic(2).into_arc();
        let from_empty = GroupoidHom::new(e, g.clone(), vec![], vec![]).unwrap();
        let id = GroupoidHom::identity(&g);
        let fp = fibered_product(&from_empty, &id);
        assert_eq!(fp.groupoid.n_objects(), 0);
    }

    #[test]
    fn pullback_of_identity_contains_the_domain() {
        let k = FiniteGroupoid::pair(2).into_arc();
        let g = cyclic(1).into_arc();
        let phi = GroupoidHom::new(k.clone(), g.clone(), vec![0, 0], vec![0, 0, 0, 0]).unwrap();
        let id = GroupoidHom::identity(&g);
        let fp = fibered_product(&phi, &id);
        // objects (y, unit, *) for each y of K
        assert_eq!(fp.groupoid.n_objects(), 2);
        assert_eq!(fp.groupoid.n_arrows(), 4);
    }
}
