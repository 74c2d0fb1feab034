//! Prime-field arithmetic and dense exact linear algebra.

mod echelon;
mod matrix;
mod rng;
mod scalar;
pub(crate) mod text;

pub use echelon::streamed_rank;
pub use matrix::{FieldMatrix, Rref};
pub use rng::{derive_seed, rng_next, SeededRng};
pub use scalar::{
    add_mod, check_modulus, inv_mod, is_prime, mul_mod, neg_mod, pow_mod, reduce_i64, sub_mod, FieldScalar,
    DEFAULT_PRIME, MAX_MODULUS,
};
