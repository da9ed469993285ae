//! The shift operator σ, its iterates, the generalized shift σ_m and
//! finite compositions of them.

mod normalize;
mod ops;
mod program;

pub use normalize::normalize_program;
pub use ops::{
    apply_program, gen_shift_closed_form, reconstruct_identity, representation, shift_closed_form,
    Point, Reconstruction, Representation, Shiftable,
};
pub use program::{Atom, Generator, ShiftProgram};
