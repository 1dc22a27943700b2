//! Stable class functions on G wr S_n and their expectations under
//! word measures, as exact rational functions of n.

mod icl;
mod parse;
mod stable;
mod theorem;

pub use icl::{
    expect_multiword, expect_sind, expect_stable, stable_inner, stable_inner_chi, stable_inner_indphi, stable_inner_one,
    EngineCaps, ExpectationResult, InnerCache,
};
pub use parse::parse_multipartition;
pub use stable::{a_to_ind_basis, ind_power_to_a, Basis, Monomial, MultiPartition, StableDisplay, StableFunction};
pub use theorem::{
    coefficient_bound_check, predicted_expansion, verify_main_theorem, BoundRow, CoeffRow, Prediction, VerifyReport,
    DEFAULT_EXTRA_TERMS,
};
