//! Bar complexes and the homology of finite groupoids: `H_n(G; A)`,
//! cohomology, hyperhomology, functoriality along homomorphisms, chain
//! homotopies from natural transformations, cap products with Yoneda
//! extensions, and the Leray spectral sequence of a homomorphism.

pub mod bar;
mod cap;
mod compute;
mod functorial;
mod hyper;
mod leray;

pub use bar::{bar_complex, bar_complex_normalized, bar_complex_sparse};
pub use cap::{bar_ses, cap_with_extension, sheaf_les, CapResult};
pub use compute::{
    cohomology, groupoid_homology, groupoid_homology_presented, groupoid_homology_range,
    groupoid_homology_unnormalized, homology_sheaf, hyperhomology, presented_cone_complex,
    sheaf_double_complex, HomologyError,
};
pub use functorial::{
    pullback_chain, pullback_map, pushforward_chain, pushforward_map, theta_transport_chain,
    transformation_homotopy, verify_homotopy_identity, Transformation, TransformationHomotopy,
};
pub use hyper::{hyperhomology_spectral_sequence, HyperhomologyReport};
pub use leray::{
    comma_fiber_homology, leray_derived_sheaf, leray_sheaf_complex, leray_spectral_sequence,
    LerayReport, LeraySheafComplex,
};
