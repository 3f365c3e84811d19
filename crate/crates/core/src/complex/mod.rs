//! Short sequences of operators and their Hodge decompositions.
//!
//! Finite-dimensional readings of the abstract statements:
//!
//! * every sequence is closed (all ranges are closed), so closedness of a
//!   sequence and of its dual carry no information;
//! * `(A1*, A0*)` is again a sequence ([`dual_sequence`]);
//! * compactness reduces to finite harmonic dimension, which always holds;
//!   for grid families the meaningful proxy is refinement stability
//!   ([`refinement_diagnostics`]).

mod hodge;
mod refinement;
mod sequence;

pub use hodge::{
    harmonic_dimension, harmonic_dimension_with, hodge_decompose, hodge_decompose_with, split_field, FieldSplit,
    HodgeDecomposition,
};
pub use refinement::{refinement_diagnostics, RefinementLevel, RefinementReport};
pub use sequence::{dual_sequence, validate_sequence, validate_sequence_with, ShortSequence};
