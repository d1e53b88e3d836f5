use proptest::prelude::*;

use duofreyd::finset::{product, Elem, FinSet};
use duofreyd::mcat::TypeObj;
use duofreyd::resources::*;
use duofreyd::sepmonoid::pf_sep_monoid;

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn subset(mask: u8) -> Elem {
    Elem::list((0..4).filter(|i| mask >> i & 1 == 1).map(|i| Elem::atom(NAMES[i])).collect())
}

/// An `e → e` map on three bit resources: a label and a state table over it.
fn arb_map() -> impl Strategy<Value = StateMap> {
    (0u8..8).prop_flat_map(|mask| {
        let label: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
        let n = 1usize << label.len();
        proptest::collection::vec(0..n, n).prop_map(move |table| StateMap {
            label: label.clone(),
            a: TypeObj::unit(),
            b: TypeObj::unit(),
            table,
        })
    })
}

proptest! {
    #[test]
    fn pf_union_matches_bitmasks(x in 0u8..16, y in 0u8..16, z in 0u8..16) {
        let m = pf_sep_monoid(&FinSet::from_strs(&NAMES).unwrap());
        let (a, b, c) = (subset(x), subset(y), subset(z));
        prop_assert_eq!(m.mul(&a, &b), subset(x | y));
        prop_assert_eq!(m.mul(&m.mul(&a, &b), &c), m.mul(&a, &m.mul(&b, &c)));
        prop_assert_eq!(m.mul(&a, &m.unit), a.clone());
        prop_assert_eq!(m.separated(&a, &b), x & y == 0);
        if m.separated(&a, &b) && m.separated(&m.mul(&a, &b), &c) {
            prop_assert!(m.separated(&b, &c) && m.separated(&a, &m.mul(&b, &c)));
        }
    }

    #[test]
    fn product_sizes(n in 0usize..6, k in 0usize..6) {
        prop_assert_eq!(product(&FinSet::range(n), &FinSet::range(k)).len(), n * k);
    }

    #[test]
    fn seq_is_associative(f in arb_map(), g in arb_map(), h in arb_map()) {
        let ctx = ResourceCtx::bits(3);
        let l = seq_res(&ctx, &seq_res(&ctx, &f, &g).unwrap(), &h).unwrap();
        let r = seq_res(&ctx, &f, &seq_res(&ctx, &g, &h).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn seq_unit_and_labels(f in arb_map(), g in arb_map()) {
        let ctx = ResourceCtx::bits(3);
        let id = idt_res(&ctx, &TypeObj::unit()).unwrap();
        prop_assert_eq!(&seq_res(&ctx, &id, &f).unwrap(), &f);
        prop_assert_eq!(&seq_res(&ctx, &f, &id).unwrap(), &f);
        let mut u: Vec<usize> = f.label.iter().chain(&g.label).copied().collect();
        u.sort_unstable();
        u.dedup();
        prop_assert_eq!(seq_res(&ctx, &f, &g).unwrap().label, u);
        prop_assert_eq!(lift(&ctx, &f, &f.label).unwrap(), f);
    }

    #[test]
    fn par_needs_disjoint_labels(f in arb_map(), g in arb_map()) {
        let ctx = ResourceCtx::bits(3);
        let disjoint = f.label.iter().all(|r| !g.label.contains(r));
        match par_res(&ctx, &f, &g) {
            Err(ResError::Separation { .. }) => prop_assert!(!disjoint),
            Err(e) => prop_assert!(false, "{}", e),
            Ok(p) => {
                prop_assert!(disjoint);
                // on unit types, parallel composition is either interleaving
                prop_assert_eq!(&p, &seq_res(&ctx, &f, &g).unwrap());
                prop_assert_eq!(&p, &seq_res(&ctx, &g, &f).unwrap());
                prop_assert_eq!(p, par_res(&ctx, &g, &f).unwrap());
            }
        }
    }
}
