//! Mask constructions: degree-one lemma, rank-one and full-rank families,
//! the D6 family and Blaschke products.

pub mod blaschke;
pub mod d6;
pub mod families;
pub mod lemma;
pub mod projection;
pub mod solve;
pub mod unitary;

pub use blaschke::{
    blaschke_d6_polyphase, blaschke_d6_reference, blaschke_product, d6_potapov, solve_blaschke_d6,
    solve_blaschke_d6_from, BlaschkeFactor,
};
pub use d6::{d6, d6_family, d6_reference_t, solve_d6, D6Family, DAUBECHIES6};
pub use families::{
    chui_lian, d4, fullrank_a3, fullrank_a4, haar, lebrun_vetterli, rank1_family, s_matrix, scalar, Family,
};
pub use lemma::{degree1_polyphase, degree1_synthesize, verify_lemma_equivalence, LemmaReport};
pub use projection::{
    embedded_projection, full_rank_projection_a3, full_rank_projection_a4, scalar_projection, Projection, Sign,
};
pub use solve::{solve_scalar_order2, solve_scalar_order2_from};
pub use unitary::{
    chui_lian_ell, lebrun_vetterli_ell, lebrun_vetterli_unitary, rank1_sum_rule_residual, rank1_unitary,
    FullRankUnitary, LeftSign, RankOneUnitarySpec, RightSign,
};
