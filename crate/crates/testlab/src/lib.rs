//! File formats, the experiment CLI and the verification battery for
//! [`testlab_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod csvio;
pub mod verify;
