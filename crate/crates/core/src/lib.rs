//! Matrix models of the generic Hecke algebras of the rank-2 exceptional
//! complex reflection groups G4–G15, and verification that their canonical
//! linear form is a symmetrising trace.

pub mod laurent;
pub mod group;
pub mod catalog;
pub mod hecke;
pub mod gram;
pub mod verify;
