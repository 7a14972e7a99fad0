use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relpurity::construct::{ar_translate, construct_d, construct_l, minimal_presentation, transpose};
use relpurity::decomp::{decompose, is_isomorphic};
use relpurity::kronecker::{classify, make, points, IndecompDescriptor};
use relpurity::rep::tensor;
use relpurity::{hom_dim, AlgebraMatrix, Fp, Quiver, Representation, Side};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn left(f: &Fp, d0: usize, d1: usize, rng: &mut ChaCha8Rng) -> Representation<Fp> {
    Representation::random(f, &Quiver::kronecker(), Side::Left, vec![d0, d1], rng)
}

fn multiset(m: &Representation<Fp>) -> BTreeMap<IndecompDescriptor, usize> {
    let mut out = BTreeMap::new();
    for p in decompose(m, 3).pieces {
        *out.entry(classify(&p.module).unwrap()).or_insert(0) += p.multiplicity;
    }
    out
}

fn pool(f: &Fp, projectives: bool) -> Vec<IndecompDescriptor> {
    let lo = if projectives { 0 } else { 2 };
    let mut v: Vec<IndecompDescriptor> = (lo..=4).map(IndecompDescriptor::Preprojective).collect();
    v.extend((0..=3).map(IndecompDescriptor::Preinjective));
    for p in points(f, 1) {
        v.push(IndecompDescriptor::Regular(p.clone(), 1));
        v.push(IndecompDescriptor::Regular(p, 2));
    }
    v
}

fn conjugated_sum(f: &Fp, ds: &[IndecompDescriptor], rng: &mut ChaCha8Rng) -> Representation<Fp> {
    let parts: Vec<Representation<Fp>> = ds.iter().map(|d| make(d, f).unwrap()).collect();
    let refs: Vec<&Representation<Fp>> = parts.iter().collect();
    let sum = Representation::direct_sum(f, &Quiver::kronecker(), Side::Left, &refs).unwrap().sum;
    let g = sum.random_change_of_basis(rng);
    sum.conjugate(&g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hom_tensor_adjunction(p in prime(), dims in prop::array::uniform4(0usize..4), seed: u64) {
        let f = Fp::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = left(&f, dims[0], dims[1], &mut rng);
        let w = Representation::random(&f, &Quiver::kronecker().opposite(), Side::Right, vec![dims[2], dims[3]], &mut rng);
        prop_assert_eq!(hom_dim(&a, &w.dual()).unwrap(), tensor(&w, &a).unwrap().dim());
    }

    #[test]
    fn dual_is_an_involution(p in prime(), d0 in 0usize..5, d1 in 0usize..5, seed: u64) {
        let f = Fp::new(p);
        let m = left(&f, d0, d1, &mut ChaCha8Rng::seed_from_u64(seed));
        let dd = m.dual().dual();
        prop_assert_eq!(dd.side(), Side::Left);
        prop_assert!(is_isomorphic(&dd, &m).unwrap());
    }

    #[test]
    fn hom_is_additive(p in prime(), dims in prop::array::uniform6(0usize..4), seed: u64) {
        let f = Fp::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n, x) = (left(&f, dims[0], dims[1], &mut rng), left(&f, dims[2], dims[3], &mut rng), left(&f, dims[4], dims[5], &mut rng));
        let sum = m.oplus(&n).unwrap();
        prop_assert_eq!(hom_dim(&sum, &x).unwrap(), hom_dim(&m, &x).unwrap() + hom_dim(&n, &x).unwrap());
        prop_assert_eq!(hom_dim(&x, &sum).unwrap(), hom_dim(&x, &m).unwrap() + hom_dim(&x, &n).unwrap());
    }

    #[test]
    fn decomposition_recovers_summands(p in prime(), seed: u64) {
        let f = Fp::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let choices = pool(&f, true);
        let ds: Vec<IndecompDescriptor> = (0..rng.gen_range(1..=3)).map(|_| choices.choose(&mut rng).unwrap().clone()).collect();
        let m = conjugated_sum(&f, &ds, &mut rng);
        let mut want = BTreeMap::new();
        for d in ds {
            *want.entry(d).or_insert(0) += 1;
        }
        prop_assert!(decompose(&m, seed).witness.is_isomorphism());
        prop_assert_eq!(multiset(&m), want);
    }

    #[test]
    fn decomposition_preserves_dimension(p in prime(), d0 in 0usize..7, d1 in 0usize..7, seed: u64) {
        let f = Fp::new(p);
        let m = left(&f, d0, d1, &mut ChaCha8Rng::seed_from_u64(seed));
        let d = decompose(&m, seed);
        let total: Vec<usize> = (0..2).map(|v| d.pieces.iter().map(|pc| pc.module.dim(v) * pc.multiplicity).sum()).collect();
        prop_assert_eq!(total, vec![d0, d1]);
    }

    #[test]
    fn transpose_twice_is_identity_without_projectives(p in prime(), seed: u64) {
        let f = Fp::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let choices = pool(&f, false);
        let ds: Vec<IndecompDescriptor> = (0..rng.gen_range(1..=2)).map(|_| choices.choose(&mut rng).unwrap().clone()).collect();
        let m = conjugated_sum(&f, &ds, &mut rng);
        let t = transpose(&m);
        prop_assert_eq!(t.side(), Side::Right);
        prop_assert!(is_isomorphic(&transpose(&t), &m).unwrap());
    }

    #[test]
    fn presentations_bound_generators_and_relations(p in prime(), rows in 1usize..4, cols in 1usize..4, seed: u64) {
        let f = Fp::new(p);
        let h = AlgebraMatrix::random(&Quiver::kronecker(), &f, rows, cols, &mut ChaCha8Rng::seed_from_u64(seed), 0.5);
        let l = construct_l(&h);
        let g = l.gen_rel();
        prop_assert!(g.gen <= cols && g.rel <= rows);
        let pres = minimal_presentation(&l);
        prop_assert!(is_isomorphic(&pres.cokernel(), &l).unwrap());
        prop_assert_eq!(construct_d(&h).side(), Side::Right);
    }
}

#[test]
fn translate_follows_the_coxeter_transformation() {
    let f = Fp::new(5);
    for d in pool(&f, false) {
        let m = make(&d, &f).unwrap();
        let t = ar_translate(&m);
        let (x0, x1) = (m.dim(0) as i64, m.dim(1) as i64);
        assert_eq!((t.dim(0) as i64, t.dim(1) as i64), (-x0 + 2 * x1, -2 * x0 + 3 * x1), "tau {d}");
    }
}

#[test]
fn translate_kills_projectives() {
    let f = Fp::new(3);
    for n in 0..2 {
        assert!(ar_translate(&make(&IndecompDescriptor::Preprojective(n), &f).unwrap()).is_zero());
    }
}
