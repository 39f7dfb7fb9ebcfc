//! Exact-arithmetic homology of finite groupoids.
//!
//! The crate computes sheaf homology and cohomology of finite groupoids via
//! bar complexes, the Leray spectral sequence of a homomorphism, and the
//! Hochschild/cyclic homology of convolution algebras, all over `Z`, `Q` or a
//! prime field. Every result is produced by exact integer or modular
//! arithmetic; nothing is ever rounded.
//!
//! Module map:
//! * [`linalg`] — integer matrices, Smith normal form, field elimination and
//!   the sparse chain-complex reducer that keeps desk-scale inputs fast.
//! * [`complexes`] — chain complexes, double complexes, long exact sequences
//!   and first-quadrant spectral sequences over a field.
//! * [`groupoid`] — finite groupoids, homomorphisms, nerves, comma, loop and
//!   fibered-product constructions, Morita equivalence.
//! * [`sheaf`] — equivariant sheaves on the object set: constant, free,
//!   pullback, shriek, tensor, short exact sequences and extensions.
//! * [`homology`] — bar complexes, groupoid (co)homology, hyperhomology,
//!   functoriality, chain homotopies, cap products and the Leray machinery.
//! * [`cyclic`] — convolution algebras, cyclic modules, mixed complexes,
//!   Hochschild/cyclic/periodic homology, localization and loop comparison.

pub mod complexes;
pub mod cyclic;
pub mod groupoid;
pub mod homology;
pub mod linalg;
pub mod sheaf;

pub use linalg::{AbGroupClass, Coefficients, IntMatrix};
