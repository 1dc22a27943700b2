//! Exact word measures on wreath products G wr S_n.
//!
//! For a word `w` in a free group and a stable class function `f` on the
//! wreath product, the expectation of `f(w(g_1, ..., g_r))` over uniform
//! random `g_i` is a rational function of `n` for large `n`. This crate
//! computes it exactly by summing over quotients of the w-graph, extracts the
//! Laurent expansion at infinity, compares the leading terms with primitivity
//! data of `w`, and checks everything against brute-force finite oracles.
//!
//! Modules, bottom up: [`exactnum`], [`groups`], [`freegrp`], [`whitehead`],
//! [`measure`], [`oracle`], [`schreier`].

pub mod error;
pub mod exactnum;
pub mod freegrp;
pub mod groups;
pub mod measure;
pub mod oracle;
pub mod par;
pub mod schreier;
pub mod whitehead;

pub use error::{Error, Result};
