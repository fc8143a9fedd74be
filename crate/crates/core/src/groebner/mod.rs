//! Groebner bases over a field, elimination, and truncated local ideals.

mod buchberger;
mod local;
mod order;

pub use buchberger::{
    buchberger, buchberger_with, contains_all, eliminate, ideals_equal, is_groebner, krull_dimension, leading,
    normal_form, s_polynomial, Limits,
};
pub use local::{is_s2_t2, is_square_fat_point, jet_membership, local_quotient_dim, quotient_dim_truncated, LocalIdeal, QuotientDim};
pub use order::{MonomialOrder, OrderKind};
