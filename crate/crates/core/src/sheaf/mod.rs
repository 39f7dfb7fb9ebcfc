//! Equivariant sheaves on finite discrete object spaces: free stalks with
//! invertible action matrices, pullback and compactly-supported pushforward,
//! tensor products, short exact sequences, presentations with torsion, and
//! the nerve resolution of the constant sheaf.

mod complex;
mod gsheaf;
mod map;
mod ops;

pub use complex::{nerve_resolution, SheafComplex};
pub use gsheaf::{GSheaf, SheafError};
pub use map::{
    preimage_of_span, ExtensionClass, PresentedGSheaf, PresentedSES, SheafMap, SheafSES,
};
pub use ops::{pullback, shriek, shriek_condition, shriek_unit, summation_counit, tensor};

use crate::groupoid::GroupoidHom;
use crate::linalg::IntMatrix;

/// Apply the pushforward with compact supports to a map of sheaves,
/// blockwise over the fibers. Exactness of the pushforward is a consequence
/// of this block structure and is property-tested.
pub fn shriek_map(phi: &GroupoidHom, f: &SheafMap) -> Result<SheafMap, SheafError> {
    let src = shriek(phi, &f.source)?;
    let tgt = shriek(phi, &f.target)?;
    let k = &phi.dom;
    let g_gpd = &phi.cod;
    let fibers: Vec<Vec<usize>> = (0..g_gpd.n_objects())
        .map(|x| (0..k.n_objects()).filter(|&y| phi.on_object(y) == x).collect())
        .collect();
    let mats: Vec<IntMatrix> = (0..g_gpd.n_objects())
        .map(|x| {
            let mut m = IntMatrix::zero(tgt.stalk_rank(x), src.stalk_rank(x));
            let (mut ro, mut co) = (0usize, 0usize);
            for &y in &fibers[x] {
                let block = f.at(y);
                for i in 0..block.rows() {
                    for j in 0..block.cols() {
                        m[(ro + i, co + j)] = block[(i, j)].clone();
                    }
                }
                ro += block.rows();
                co += block.cols();
            }
            m
        })
        .collect();
    SheafMap::new(src, tgt, mats)
}
