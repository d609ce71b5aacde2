//! Discrete maximal operators on finitely supported sequences over ℤ.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod cli;
pub mod corpus;
pub mod czdecomp;
pub mod dyadic;
pub mod error;
pub mod maxops;
pub mod seq;
pub mod verify;

pub use error::{Error, Result};
