// Negated float comparisons such as `!(x > 0.0)` are deliberate: they also
// reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod gas;
pub mod interp;
pub mod numerics;
pub mod boundary;
pub mod hodograph;
pub mod inversion;
pub mod pipeline;
pub mod verify;
pub mod cli;
