use super::core::{ArrId, FiniteGroupoid, GroupoidError, ObjId};
use std::sync::Arc;

/// A homomorphism of finite groupoids: an object map and an arrow map that
/// commute with source, target, composition and units (inverses follow).
#[derive(Debug, Clone)]
pub struct GroupoidHom {
    pub dom: Arc<FiniteGroupoid>,
    pub cod: Arc<FiniteGroupoid>,
    object_map: Vec<ObjId>,
    arrow_map: Vec<ArrId>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("object map image {image} out of range for object {object}")]
    ObjectOutOfRange { object: ObjId, image: ObjId },
    #[error("arrow map image {image} out of range for arrow {arrow}")]
    ArrowOutOfRange { arrow: ArrId, image: ArrId },
    #[error("map does not commute with source/target on arrow {arrow}")]
    EndpointMismatch { arrow: ArrId },
    #[error("map does not commute with composition on ({g}, {h})")]
    CompositionMismatch { g: ArrId, h: ArrId },
    #[error("map does not preserve the unit of object {object}")]
    UnitMismatch { object: ObjId },
    #[error("domain and codomain do not match for composition")]
    ComposeMismatch,
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

impl GroupoidHom {
    pub fn new(
        dom: Arc<FiniteGroupoid>,
        cod: Arc<FiniteGroupoid>,
        object_map: Vec<ObjId>,
        arrow_map: Vec<ArrId>,
    ) -> Result<Self, HomError> {
        assert_eq!(object_map.len(), dom.n_objects());
        assert_eq!(arrow_map.len(), dom.n_arrows());
        for (x, &fx) in object_map.iter().enumerate() {
            if fx >= cod.n_objects() {
                return Err(HomError::ObjectOutOfRange {
                    object: x,
                    image: fx,
                });
            }
        }
        for (g, &fg) in arrow_map.iter().enumerate() {
            if fg >= cod.n_arrows() {
                return Err(HomError::ArrowOutOfRange {
                    arrow: g,
                    image: fg,
                });
            }
            if cod.source(fg) != object_map[dom.source(g)]
                || cod.target(fg) != object_map[dom.target(g)]
            {
                return Err(HomError::EndpointMismatch { arrow: g });
            }
        }
        for x in 0..dom.n_objects() {
            if arrow_map[dom.unit_of(x)] != cod.unit_of(object_map[x]) {
                return Err(HomError::UnitMismatch { object: x });
            }
        }
        for g in 0..dom.n_arrows() {
            for &h in dom.arrows_into(dom.source(g)) {
                let lhs = arrow_map[dom.compose_arrows(g, h)];
                let rhs = cod.compose_arrows(arrow_map[g], arrow_map[h]);
                if lhs != rhs {
                    return Err(HomError::CompositionMismatch { g, h });
                }
            }
        }
        Ok(GroupoidHom {
            dom,
            cod,
            object_map,
            arrow_map,
        })
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        GroupoidHom {
            dom: g.clone(),
            cod: g.clone(),
            object_map: (0..g.n_objects()).collect(),
            arrow_map: (0..g.n_arrows()).collect(),
        }
    }

    pub fn on_object(&self, x: ObjId) -> ObjId {
        self.object_map[x]
    }

    pub fn on_arrow(&self, g: ArrId) -> ArrId {
        self.arrow_map[g]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.object_map
    }

    pub fn arrow_map(&self) -> &[ArrId] {
        &self.arrow_map
    }

    /// `self o earlier`, defined when the windows line up.
    pub fn compose(&self, earlier: &GroupoidHom) -> Result<GroupoidHom, HomError> {
        if earlier.cod.as_ref() != self.dom.as_ref() {
            return Err(HomError::ComposeMismatch);
        }
        Ok(GroupoidHom {
            dom: earlier.dom.clone(),
            cod: self.cod.clone(),
            object_map: earlier
                .object_map
                .iter()
                .map(|&x| self.object_map[x])
                .collect(),
            arrow_map: earlier.arrow_map.iter().map(|&g| self.arrow_map[g]).collect(),
        })
    }

    /// The unique homomorphism into the one-object trivial groupoid.
    pub fn to_point(dom: Arc<FiniteGroupoid>, point: Arc<FiniteGroupoid>) -> Result<Self, HomError> {
        assert_eq!(point.n_objects(), 1);
        assert_eq!(point.n_arrows(), 1);
        let object_map = vec![0; dom.n_objects()];
        let arrow_map = vec![0; dom.n_arrows()];
        GroupoidHom::new(dom, point, object_map, arrow_map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::cyclic;

    #[test]
    fn identity_and_composition() {
        let g = cyclic(4).into_arc();
        let id = GroupoidHom::identity(&g);
        let c = id.compose(&id).unwrap();
        assert_eq!(c.arrow_map(), id.arrow_map());
    }

    #[test]
    fn quotient_z4_to_z2() {
        let z4 = cyclic(4).into_arc();
        let z2 = cyclic(2).into_arc();
        let q = GroupoidHom::new(z4, z2, vec![0], vec![0, 1, 0, 1]).unwrap();
        assert_eq!(q.on_arrow(3), 1);
    }

    #[test]
    fn non_homomorphism_rejected() {
        let z4 = cyclic(4).into_arc();
        let z2 = cyclic(2).into_arc();
        let bad = GroupoidHom::new(z4, z2, vec![0], vec![0, 1, 1, 0]);
        assert!(matches!(bad, Err(HomError::CompositionMismatch { .. })));
    }
}
