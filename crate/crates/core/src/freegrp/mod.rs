//! Free groups: words, folded labelled graphs, cycle graphs of words and
//! their quotients.

mod graph;
mod quotient;
mod word;

pub use graph::{Edge, MultiCoreGraph, SpanningBasis, Step};
pub use quotient::{
    build_w_graph, canonical_labels, enumerate_partitions, enumerate_quotients, fold_closure, quotient_by, CycleGraph,
    QuotientCaps, QuotientClass, DEFAULT_QUOTIENT_CAP, DEFAULT_VERTEX_CAP,
};
pub use word::{letter_char, Word};
