//! Lace graphs on integer intervals and the coefficients `π_m` built from them.

pub mod graph;
pub mod pi;

pub use graph::{
    all_laces, compatible_edges, compatible_edges_stepwise, enumerate_laces, is_connected_graph, lace_prescription,
    EdgeST, IntervalGraph, Lace,
};
pub use pi::{
    pi_alternating, pi_as_n_polynomial, pi_by_lace_size, pi_direct_oracle, pi_k_delta, pi_m_M, universal_table,
    verify_recursion, PiProfile, RecursionReport, UniversalTable,
};
