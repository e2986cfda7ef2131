//! Monogamy and polygamy bounds with tunable dominance factor `k`.
//!
//! For `x = α/γ ∈ [0, 1]` and `k ≥ 1`, the coefficient
//! `l(k, x) = ((1+k)^x − 1)/k^x` is at least `2^x − 1`, so bounds built from
//! it dominate the `k = 1` ones whenever the dominance condition
//! `Q^γ_AC ≥ k·Q^γ_AB` holds.

pub mod bounds;
pub mod chain;
pub mod lemma;
pub mod prior;
pub mod verify;

pub use bounds::{
    max_admissible_k, monogamy_bound_tripartite, polygamy_bound_tripartite, AdmissibleK, BoundParams, BoundReport,
    Branch, ConditionCheck, KStatus, LabeledValue, Mode,
};
pub use chain::{
    chain_conditions, max_admissible_k_chain, monogamy_bound_chain, polygamy_bound_chain, select_split, ChainSpec,
};
pub use lemma::{
    coeff_l, coeff_prior, lemma1_check, lemma2_check, lemma_grid, run_lemma, Lemma, LemmaCheck, LemmaSummary,
};
pub use prior::{prior_bound_jll_chain, prior_bound_polygamy_chain, prior_bound_zhu};
pub use verify::{check_mode_kind, collect_values, evaluate_bounds, verify_state, StateValues};

/// Slack for dominance conditions on measured values.
pub const CONDITION_SLACK: f64 = 1e-10;
/// Slack for calling a negative margin a violation.
pub const MARGIN_SLACK: f64 = 1e-9;
