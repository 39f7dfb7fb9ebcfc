//! Cyclic homology of convolution algebras at desk scale: finite-dimensional
//! algebras with structure constants, cyclic modules, mixed complexes with
//! their `(b, B)` operators, Hochschild/cyclic/periodic homology, the SBI
//! sequence, conjugation-orbit localization and the loop-groupoid
//! comparison.

mod algebra;
mod localize;
mod loops;
mod mixed;
mod module;

pub use algebra::{convolution_algebra, CyclicError, FinDimAlgebra};
pub use localize::{localize_by_loop_orbit, LoopLocalization};
pub use loops::{loop_comparison, LoopComparisonReport};
pub use mixed::{mixed_complex, MixedComplex};
pub use module::{
    convolution_tuple_module, cyclic_module_of_algebra, loop_orbits, CyclicLevel, CyclicModule,
    TupleBasis,
};

use crate::complexes::LongExactSequence;
use crate::linalg::Coefficients;

/// `HH_n(A)` over the algebra's field; any characteristic.
pub fn hochschild_homology(a: &FinDimAlgebra, n: usize) -> Result<usize, CyclicError> {
    let m = mixed_complex(&cyclic_module_of_algebra(a, n + 1))?;
    Ok(m.hochschild()?[n].betti)
}

/// `HC_n(A)`; the comparison theorems quoted for cyclic homology live in
/// characteristic zero, so prime fields are rejected.
pub fn cyclic_homology(a: &FinDimAlgebra, n: usize) -> Result<usize, CyclicError> {
    require_char_zero(a)?;
    let m = mixed_complex(&cyclic_module_of_algebra(a, n + 1))?;
    Ok(m.cyclic()?[n].betti)
}

/// `HP_i(A)` for `i` in `{0, 1}`, through a window of the given length.
pub fn periodic_homology(a: &FinDimAlgebra, i: usize, window: usize) -> Result<usize, CyclicError> {
    require_char_zero(a)?;
    let m = mixed_complex(&cyclic_module_of_algebra(a, window))?;
    m.periodic(i)
}

/// Build the SBI sequence of `A` through the window and machine-verify its
/// exactness at every node; the returned long exact sequence carries the
/// `I`, `S` and connecting (`B`) maps.
pub fn sbi_check(a: &FinDimAlgebra, window: usize) -> Result<LongExactSequence, CyclicError> {
    require_char_zero(a)?;
    let m = mixed_complex(&cyclic_module_of_algebra(a, window))?;
    m.sbi()
}

fn require_char_zero(a: &FinDimAlgebra) -> Result<(), CyclicError> {
    if a.coefficients() != Coefficients::Rationals {
        return Err(CyclicError::CharacteristicNotZero);
    }
    Ok(())
}
