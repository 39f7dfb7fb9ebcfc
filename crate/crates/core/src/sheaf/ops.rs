use super::gsheaf::{GSheaf, SheafError};
use super::map::SheafMap;
use crate::groupoid::{ArrId, GroupoidHom, ObjId};
use crate::linalg::IntMatrix;
use num_bigint::BigInt;
use num_traits::One;

/// Pullback `φ* a` along `φ: K -> G`: the stalk at `y` is the stalk at
/// `φ(y)` and an arrow acts through its image.
pub fn pullback(phi: &GroupoidHom, a: &GSheaf) -> Result<GSheaf, SheafError> {
    if a.base().as_ref() != phi.cod.as_ref() {
        return Err(SheafError::BaseMismatch);
    }
    let k = &phi.dom;
    let stalk_ranks = (0..k.n_objects())
        .map(|y| a.stalk_rank(phi.on_object(y)))
        .collect();
    let act = (0..k.n_arrows())
        .map(|g| a.action(phi.on_arrow(g)).clone())
        .collect();
    GSheaf::new(k.clone(), a.coefficients(), stalk_ranks, act)
}

/// Does `φ` satisfy the unique-lift condition that makes the simple-minded
/// pushforward with compact supports exact: for every arrow `g` of the
/// codomain and every object `y` over `t(g)` there is exactly one arrow of
/// the domain over `g` with target `y`?
pub fn shriek_condition(phi: &GroupoidHom) -> Result<(), SheafError> {
    let k = &phi.dom;
    let g_gpd = &phi.cod;
    for g in 0..g_gpd.n_arrows() {
        for y in 0..k.n_objects() {
            if phi.on_object(y) != g_gpd.target(g) {
                continue;
            }
            let lifts: Vec<ArrId> = k
                .arrows_into(y)
                .iter()
                .copied()
                .filter(|&kk| phi.on_arrow(kk) == g)
                .collect();
            if lifts.len() != 1 {
                return Err(SheafError::NotAShriekableHom {
                    arrow: g,
                    object: y,
                });
            }
        }
    }
    Ok(())
}

/// Unique lift of `g` with target `y` (requires `shriek_condition`).
fn unique_lift(phi: &GroupoidHom, g: ArrId, y: ObjId) -> ArrId {
    phi.dom
        .arrows_into(y)
        .iter()
        .copied()
        .find(|&kk| phi.on_arrow(kk) == g)
        .expect("unique-lift condition was checked")
}

/// Pushforward with compact supports `φ_! b`: the stalk at `x` is the sum of
/// the stalks over the fiber `φ^{-1}(x)`, and arrows act by block
/// permutation through their unique lifts.
pub fn shriek(phi: &GroupoidHom, b: &GSheaf) -> Result<GSheaf, SheafError> {
    if b.base().as_ref() != phi.dom.as_ref() {
        return Err(SheafError::BaseMismatch);
    }
    shriek_condition(phi)?;
    let k = &phi.dom;
    let g_gpd = &phi.cod;

    // fibers, ascending object order
    let fibers: Vec<Vec<ObjId>> = (0..g_gpd.n_objects())
        .map(|x| (0..k.n_objects()).filter(|&y| phi.on_object(y) == x).collect())
        .collect();
    let stalk_ranks: Vec<usize> = fibers
        .iter()
        .map(|f| f.iter().map(|&y| b.stalk_rank(y)).sum())
        .collect();
    let offset = |x: ObjId, y: ObjId| -> usize {
        fibers[x]
            .iter()
            .take_while(|&&z| z != y)
            .map(|&z| b.stalk_rank(z))
            .sum()
    };
    let mut act = Vec::with_capacity(g_gpd.n_arrows());
    for g in 0..g_gpd.n_arrows() {
        let (x, x2) = (g_gpd.source(g), g_gpd.target(g));
        // act(g): stalk at x2 -> stalk at x
        let mut m = IntMatrix::zero(stalk_ranks[x], stalk_ranks[x2]);
        for &y2 in &fibers[x2] {
            let lift = unique_lift(phi, g, y2);
            let y = k.source(lift);
            let block = b.action(lift); // stalk_{y2} -> stalk_y
            let (ro, co) = (offset(x, y), offset(x2, y2));
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    m[(ro + i, co + j)] = block[(i, j)].clone();
                }
            }
        }
        act.push(m);
    }
    GSheaf::new(g_gpd.clone(), b.coefficients(), stalk_ranks, act)
}

/// Stalkwise tensor product with Kronecker actions; field coefficients only.
pub fn tensor(a: &GSheaf, b: &GSheaf) -> Result<GSheaf, SheafError> {
    if !a.same_data(b) {
        return Err(SheafError::BaseMismatch);
    }
    if a.coefficients() != b.coefficients() {
        return Err(SheafError::CoeffMismatch);
    }
    if !a.coefficients().is_field() {
        return Err(SheafError::IntegerTensorUnsupported);
    }
    let base = a.base().clone();
    let stalk_ranks = (0..base.n_objects())
        .map(|x| a.stalk_rank(x) * b.stalk_rank(x))
        .collect();
    let act = (0..base.n_arrows())
        .map(|g| a.action(g).kronecker(b.action(g)))
        .collect();
    GSheaf::new(base, a.coefficients(), stalk_ranks, act)
}

/// Summation along the fiber: the counit `φ_! φ* a -> a`, which at `x` sums
/// the copies of the stalk indexed by the fiber.
pub fn summation_counit(phi: &GroupoidHom, a: &GSheaf) -> Result<SheafMap, SheafError> {
    let pulled = pullback(phi, a)?;
    let pushed = shriek(phi, &pulled)?;
    let g_gpd = &phi.cod;
    let mats: Vec<IntMatrix> = (0..g_gpd.n_objects())
        .map(|x| {
            let copies = pushed.stalk_rank(x) / a.stalk_rank(x).max(1);
            let r = a.stalk_rank(x);
            if r == 0 {
                return IntMatrix::zero(0, pushed.stalk_rank(x));
            }
            IntMatrix::from_fn(r, copies * r, |i, j| {
                if j % r == i {
                    BigInt::one()
                } else {
                    BigInt::from(0)
                }
            })
        })
        .collect();
    SheafMap::new(pushed, a.clone(), mats)
}

/// The unit `b -> φ* φ_! b`, including each stalk as its own block of the
/// fiber sum.
pub fn shriek_unit(phi: &GroupoidHom, b: &GSheaf) -> Result<SheafMap, SheafError> {
    let pushed = shriek(phi, b)?;
    let back = pullback(phi, &pushed)?;
    let k = &phi.dom;
    let fibers: Vec<Vec<ObjId>> = (0..phi.cod.n_objects())
        .map(|x| (0..k.n_objects()).filter(|&y| phi.on_object(y) == x).collect())
        .collect();
    let mats: Vec<IntMatrix> = (0..k.n_objects())
        .map(|y| {
            let x = phi.on_object(y);
            let mut off = 0usize;
            for &z in &fibers[x] {
                if z == y {
                    break;
                }
                off += b.stalk_rank(z);
            }
            let r = b.stalk_rank(y);
            IntMatrix::from_fn(back.stalk_rank(y), r, |i, j| {
                if i == off + j {
                    BigInt::one()
                } else {
                    BigInt::from(0)
                }
            })
        })
        .collect();
    SheafMap::new(b.clone(), back, mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::{cyclic, trivial_group};
    use crate::groupoid::{translation_groupoid, FiniteGroupoid, GroupoidHom};
    use crate::linalg::Coefficients;

    fn xg_projection() -> (GroupoidHom, std::sync::Arc<FiniteGroupoid>) {
        // X x Z/2 -> Z/2 for the translation action of Z/2 on itself
        let z2 = cyclic(2);
        let action = vec![vec![0, 1], vec![1, 0]];
        let t = translation_groupoid(2, &z2, &action).unwrap().into_arc();
        let z2a = z2.into_arc();
        // arrows of t are (x, gamma) lex: (0,0),(0,1),(1,0),(1,1)
        let arrow_map = vec![0, 1, 0, 1];
        let hom = GroupoidHom::new(t, z2a.clone(), vec![0, 0], arrow_map).unwrap();
        (hom, z2a)
    }

    #[test]
    fn pullback_along_identity() {
        let g = cyclic(3).into_arc();
        let a = GSheaf::free(g.clone(), Coefficients::Integers, &[1]).unwrap();
        let id = GroupoidHom::identity(&g);
        let p = pullback(&id, &a).unwrap();
        assert!(p.equal_sheaf(&a));
    }

    #[test]
    fn regular_representation_pulls_back_to_trivial_action() {
        let one = trivial_group().into_arc();
        let g = cyclic(3).into_arc();
        let incl = GroupoidHom::new(one, g.clone(), vec![0], vec![0]).unwrap();
        let reg = GSheaf::free(g, Coefficients::Integers, &[1]).unwrap();
        let p = pullback(&incl, &reg).unwrap();
        assert_eq!(p.stalk_rank(0), 3);
        assert_eq!(p.action(0), &IntMatrix::identity(3));
    }

    #[test]
    fn projection_is_shriekable_and_sends_constants_to_free() {
        let (hom, _) = xg_projection();
        assert!(shriek_condition(&hom).is_ok());
        let c = GSheaf::constant(hom.dom.clone(), Coefficients::Integers, 1);
        let pushed = shriek(&hom, &c).unwrap();
        // fiber over the object has 2 points: rank 2, permutation actions
        assert_eq!(pushed.stalk_rank(0), 2);
        let free = GSheaf::free(hom.cod.clone(), Coefficients::Integers, &[1]).unwrap();
        assert_eq!(pushed.stalk_ranks(), free.stalk_ranks());
    }

    #[test]
    fn identity_shriek_is_identity() {
        let g = cyclic(4).into_arc();
        let id = GroupoidHom::identity(&g);
        let a = GSheaf::free(g, Coefficients::Integers, &[1]).unwrap();
        let s = shriek(&id, &a).unwrap();
        assert!(s.equal_sheaf(&a));
    }

    #[test]
    fn collapse_is_not_shriekable() {
        // Z/2 -> 1 has two lifts of the unique arrow
        let z2 = cyclic(2).into_arc();
        let one = trivial_group().into_arc();
        let collapse = GroupoidHom::new(z2, one, vec![0], vec![0, 0]).unwrap();
        assert!(matches!(
            shriek_condition(&collapse),
            Err(SheafError::NotAShriekableHom { .. })
        ));
    }

    #[test]
    fn tensor_dimensions_and_unit() {
        let g = cyclic(2).into_arc();
        let a = GSheaf::free(g.clone(), Coefficients::PrimeField(2), &[1]).unwrap();
        let one = GSheaf::constant(g.clone(), Coefficients::PrimeField(2), 1);
        let t = tensor(&a, &one).unwrap();
        assert_eq!(t.stalk_rank(0), a.stalk_rank(0));
        let over_z = tensor(
            &GSheaf::constant(g.clone(), Coefficients::Integers, 1),
            &GSheaf::constant(g, Coefficients::Integers, 1),
        );
        assert!(matches!(over_z, Err(SheafError::IntegerTensorUnsupported)));
    }

    #[test]
    fn triangle_identity_for_the_fiber_summation() {
        let (hom, _) = xg_projection();
        let b = GSheaf::constant(hom.dom.clone(), Coefficients::Integers, 1);
        let unit = shriek_unit(&hom, &b).unwrap();
        // φ_!(unit) then counit at φ_!b is the identity on φ_!b
        let pushed_unit = shriek_map(&hom, &unit).unwrap();
        let counit = summation_counit(&hom, &shriek(&hom, &b).unwrap()).unwrap();
        let comp = counit.compose(&pushed_unit).unwrap();
        for x in 0..hom.cod.n_objects() {
            assert_eq!(comp.at(x), &IntMatrix::identity(comp.source.stalk_rank(x)));
        }
    }

    use super::super::shriek_map;
}
