//! Unit-distance witnesses.

pub mod curve;
pub mod forbidden;
pub mod pentagon;
pub mod rational;
pub mod slab;
pub mod strip;
