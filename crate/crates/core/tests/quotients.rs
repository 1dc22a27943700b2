mod common;

use std::collections::BTreeSet;

use wreath_core::freegrp::{build_w_graph, enumerate_partitions, QuotientCaps};

#[test]
fn enumeration_matches_bell_brute_force() {
    let mut graphs = 0;
    for w in common::canonical_words(4) {
        for parts in [vec![1u32], vec![2], vec![1, 1]] {
            let size: u32 = parts.iter().sum::<u32>() * w.len() as u32;
            if size > 8 {
                continue;
            }
            let src = build_w_graph(&w, &parts).unwrap();
            let fast: BTreeSet<Vec<u32>> = enumerate_partitions(&src.graph, QuotientCaps::default()).unwrap().into_iter().collect();
            assert_eq!(fast, common::brute_force_partitions(&src.graph), "{w} {parts:?}");
            graphs += 1;
        }
    }
    assert!(graphs > 20);
}

#[test]
fn word_list_shape() {
    let words: Vec<String> = common::canonical_words(2).iter().map(|w| w.to_string()).collect();
    // a, b, ab, aB up to rotation and inversion
    assert_eq!(words.len(), 4, "{words:?}");
}
