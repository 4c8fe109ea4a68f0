//! Fourier analysis on finite abelian groups with dual Haar measures, Lebesgue
//! and grand Lebesgue norms, and numerical checks of sharp Hausdorff-Young
//! type inequalities.

pub mod error;
pub mod fourier;
pub mod gls;
pub mod group;
pub mod hy;
pub mod norms;
pub mod record;
pub mod sup;
pub mod theorems;

pub use error::{Error, Result};
pub use fourier::{fourier_fast, fourier_forward, fourier_inverse, GroupFunction};
pub use gls::{
    fundamental_function, gls_norm, natural_function, tail_bound, tail_check,
    truncated_fundamental, PsiFunction, Support, TailModel,
};
pub use group::{
    make_group, make_measure_pair, FiniteAbelianGroup, GroupElement, MeasuredDualPair, Side,
};
pub use hy::{
    in_domain_q, in_domain_q_hat, k_const, k_hat_const, opnorm_search, unboundedness_scan,
    verify_hy, verify_hy_conjugate, verify_hy_dual, ExponentPair, OpnormConfig, OpnormResult,
    Witness,
};
pub use norms::{conjugate_exponent, lp_norm, s_of_p, t_of_q, Exponent};
pub use record::{CheckRecord, Param};
pub use theorems::{
    factorize_trivial, factorize_trivial_on, theorem21_bound, theorem22_bound, verify_theorem21,
    verify_theorem22, Case, Chain, ChainMode, ChainOptions, Factorization,
};
