//! Exact computation of the 2-nilpotent section obstruction for combinatorial
//! models of real algebraic curves.
//!
//! The library computes, over Z with exact arithmetic throughout:
//! - Z/2 group cohomology of involutive lattices ([`zcoh`]),
//! - normal-form arithmetic in free nilpotent class-2 quotients ([`nil2`]),
//! - assembly of curve models from smooth pieces and node gluings ([`curve`]),
//! - the obstruction map δ₂ and the kernel identity Ker δ₂ = Im κ^ab
//!   ([`obstruction`]),
//! - the semi-abelian fixed-point and lifting picture that mirrors the
//!   obstruction geometrically ([`alb`]).

pub mod mat;
pub mod zcoh;
pub mod nil2;
pub mod curve;
pub mod obstruction;
pub mod alb;
pub mod corpus;
