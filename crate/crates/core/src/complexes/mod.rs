//! Chain complexes, double complexes, long exact sequences and
//! first-quadrant spectral sequences over a field.

mod chain;
mod double;
mod map;
mod ses;
mod spectral;

pub use chain::{
    coeff_kernel, coeff_rank, coeff_solvable, coeff_solve, span_eq, ChainComplex, ComplexError,
    HomologyPresentation,
};
pub use double::DoubleComplex;
pub use map::ComplexMap;
pub use ses::{
    long_exact_sequence, LesDegree, LongExactSequence, ShortExactSequenceOfComplexes,
};
pub use spectral::{spectral_sequence, SpectralPage, SpectralPages, SpectralSequence};
