//! Big Witt vectors relative to the truncation sets `N_m`.

mod ds;
mod mackey;
mod ring;
mod universal;
mod vector;

pub use ds::{
    dress_siebeneicher, ds_matrix, ds_morphism, ds_uniqueness_search, DsFamily, DsSearch,
};
pub use mackey::{
    carrier_coordinates, extension_matrix, frobenius_matrix, from_carrier, ghost_to_carrier,
    restriction_matrix, verschiebung_matrix, witt_mackey, WittRule,
};
pub use ring::{
    parse_int, DivError, ExactRing, Integers, IntegersMod, Poly, Polynomials, Rationals, RingTag,
};
pub use universal::{universal_polys, UniversalPolys, WittOp};
pub use vector::{
    apply_universal, frobenius, ghost, ghost_solve, restriction, route, verschiebung, witt_add,
    witt_mul, witt_neg, witt_scale, witt_sub, GhostVector, Route, WittVector,
};
