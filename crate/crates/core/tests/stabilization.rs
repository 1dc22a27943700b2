mod common;

use wreath_core::exactnum::Cyclo;
use wreath_core::groups::FiniteGroup;
use wreath_core::measure::{stable_inner_one, EngineCaps, StableFunction};
use wreath_core::oracle::finite_inner;

#[test]
fn finite_inner_products_stabilize() {
    let one = StableFunction::constant(Cyclo::one());
    let mut below_differs = false;
    for (g, nmax) in [(FiniteGroup::trivial(), 6usize), (FiniteGroup::cyclic(2), 5)] {
        for lam in common::sind_basis(&g, 3) {
            let stable = stable_inner_one(&lam, &g, &EngineCaps::default()).unwrap();
            let f = StableFunction::sind(lam.clone());
            for n in 1..=nmax {
                let v = finite_inner(&f, &one, &g, n, 1 << 22).unwrap();
                if n >= lam.degree() as usize {
                    assert_eq!(v, stable, "{} {lam:?} n={n}", g.name());
                } else if v != stable {
                    below_differs = true;
                }
            }
        }
    }
    assert!(below_differs);
}
