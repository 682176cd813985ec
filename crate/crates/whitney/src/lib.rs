//! Exact computation of total Stiefel-Whitney classes for orthogonal
//! representations of SL(2,q), SL(3,q), Sp(4,q), Sp(6,q) and cyclic groups.
//!
//! The pipeline: enumerate the group ([`group`]), compute its exact character
//! table ([`chartab`]), evaluate the closed-form total class of an orthogonal
//! character in the appropriate mod-2 cohomology ring ([`swc`], [`cohomology`]),
//! and independently certify the answer by restriction to an
//! elementary-abelian 2-subgroup ([`verify`]).

pub mod chartab;
pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod group;
pub mod swc;
pub mod verify;

pub use error::{Error, Result};
