//! Reservoir-induced entanglement of two double quantum dots coupled to
//! black-body radiation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod effint;
pub mod entanglement;
pub mod kernels;
pub mod linalg;
pub mod model;
pub mod quadrature;
pub mod scan;
pub mod specialfn;
pub mod twoqubit;
