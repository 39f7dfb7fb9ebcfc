//! Finite groupoids with full composition tables, homomorphisms, nerves,
//! and the constructions homology is built from: translation, pair, comma,
//! loop and fibered-product groupoids, plus the Morita-equivalence test.
//!
//! Objects and arrows carry dense integer ids and every enumeration is
//! lexicographic by id, so all downstream matrices are deterministic.

mod comma;
mod core;
mod fibered;
pub mod groups;
mod hom;
pub mod nerve;
mod morita;
mod translation;

pub use comma::{comma_action, comma_groupoid, CommaGroupoid};
pub use core::{ArrId, FiniteGroupoid, GroupoidError, ObjId};
pub use fibered::{fibered_product, FiberedProduct};
pub use hom::{GroupoidHom, HomError};
pub use morita::{is_morita_equivalence, morita_check, MoritaReport};
pub use nerve::{nerve, NerveLevel};
pub use translation::{loop_groupoid, translation_groupoid, translation_over};
