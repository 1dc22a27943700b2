mod common;

use wreath_core::groups::FiniteGroup;
use wreath_core::oracle::{perm_rank, perm_unrank, Wreath};

#[test]
fn power_route_matches_hom_formula() {
    for (g, n) in [(FiniteGroup::cyclic(2), 3usize), (FiniteGroup::cyclic(3), 2), (FiniteGroup::sym3(), 2)] {
        let wr = Wreath::new(&g, n);
        let basis = common::sind_basis(&g, 3);
        for i in 0..wr.order().unwrap() {
            let x = wr.element(i);
            assert_eq!(wr.index(&x), i);
            for lam in &basis {
                assert_eq!(wr.eval_sind(&x, lam).unwrap(), wr.eval_sind_hom_formula(&x, lam).unwrap(), "{} {i} {lam:?}", g.name());
            }
        }
    }
}

#[test]
fn permutation_ranks() {
    for r in 0..120u64 {
        assert_eq!(perm_rank(&perm_unrank(r, 5)), r);
    }
}
