use proptest::prelude::*;
use relpurity::closure::{fsc_closure, generic_status, is_definable, ClassDescriptor};
use relpurity::kronecker::IndecompDescriptor;
use relpurity::purity::{implies_classes, ind_of_shape, ShapeFamily};
use relpurity::Fp;

const TOKENS: [&str; 14] = [
    "P0", "P2", "I0", "I3", "R[1,1]", "R[inf,2]", "P*>=3", "I*>=1", "I*>=4", "tube[0]>=1", "tube[3]>=2", "prufer[2]",
    "adic[1]", "generic",
];

fn class() -> impl Strategy<Value = ClassDescriptor> {
    prop::sample::subsequence(TOKENS.to_vec(), 0..5).prop_map(|ts| {
        let text = if ts.is_empty() { "empty".to_string() } else { ts.join(" ") };
        text.parse().unwrap()
    })
}

proptest! {
    #[test]
    fn closure_is_extensive_and_idempotent(c in class()) {
        let once = fsc_closure(&c);
        prop_assert!(c.is_subset(&once));
        prop_assert_eq!(fsc_closure(&once), once);
    }

    #[test]
    fn closure_commutes_with_union(a in class(), b in class()) {
        prop_assert_eq!(fsc_closure(&a.union(&b)), fsc_closure(&a).union(&fsc_closure(&b)));
    }

    #[test]
    fn definability_is_decided_by_the_closure(c in class()) {
        prop_assert_eq!(is_definable(&c), is_definable(&fsc_closure(&c)));
        prop_assert_eq!(generic_status(&c).is_ok(), is_definable(&c));
    }

    #[test]
    fn descriptors_print_and_parse(c in class()) {
        let back: ClassDescriptor = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }
}

#[test]
fn infinitely_many_preinjectives_bring_in_the_generic_module() {
    let c: ClassDescriptor = "I*>=2".parse().unwrap();
    assert!(fsc_closure(&c).contains(&IndecompDescriptor::Generic));
    assert_eq!(generic_status(&c).unwrap(), true);
}

#[test]
fn one_by_one_shapes_miss_the_simple_injective() {
    let s4 = ind_of_shape(ShapeFamily { rows: Some(1), cols: Some(1) }).unwrap();
    let a1 = ind_of_shape(ShapeFamily { rows: None, cols: Some(1) }).unwrap();
    let f = Fp::new(5);
    assert_eq!(implies_classes(&s4, &a1, &f), Some(IndecompDescriptor::Preinjective(0)));
    assert_eq!(implies_classes(&a1, &s4, &f), None);
}

#[test]
fn large_row_counts_match_aleph0() {
    for n in 1..=3 {
        let a = ind_of_shape(ShapeFamily { rows: None, cols: Some(n) }).unwrap();
        let b = ind_of_shape(ShapeFamily { rows: Some(2 * n + 1), cols: Some(n) }).unwrap();
        assert_eq!(a, b);
    }
    assert!(ind_of_shape(ShapeFamily { rows: Some(2), cols: None }).is_err());
}
