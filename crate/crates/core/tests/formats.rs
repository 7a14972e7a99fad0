use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relpurity::format::{
    parse_matrix_set, parse_modules, parse_representation, parse_sequence, write_matrix_set, write_modules,
    write_representation, write_sequence,
};
use relpurity::purity::MatrixSet;
use relpurity::verify::{random_kronecker, random_sequence};
use relpurity::{AlgebraMatrix, Error, Fp, Quiver, Rationals, Representation, Side};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representations_round_trip(p in prime(), right: bool, seed: u64) {
        let f = Fp::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = if right {
            let dims = vec![rng.gen_range(0..4), rng.gen_range(0..4)];
            Representation::random(&f, &Quiver::kronecker().opposite(), Side::Right, dims, &mut rng)
        } else {
            random_kronecker(&f, 4, &mut rng)
        };
        let text = write_representation(&m);
        prop_assert!(parse_representation(&text, &f).unwrap() == m);
    }

    #[test]
    fn module_lists_round_trip(p in prime(), seed: u64) {
        let f = Fp::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ms: Vec<Representation<Fp>> = (0..3).map(|_| random_kronecker(&f, 3, &mut rng)).collect();
        prop_assert!(parse_modules(&write_modules(&ms), &f).unwrap() == ms);
    }

    #[test]
    fn sequences_round_trip(p in prime(), seed: u64) {
        let f = Fp::new(p);
        let s = random_sequence(&f, 4, &mut ChaCha8Rng::seed_from_u64(seed));
        let text = write_sequence(&s);
        let back = parse_sequence(&text, &f).unwrap();
        prop_assert_eq!(write_sequence(&back), text);
    }

    #[test]
    fn matrix_sets_round_trip(p in prime(), seed: u64) {
        let f = Fp::new(p);
        let q = Quiver::kronecker();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ms = (0..rng.gen_range(1..4))
            .map(|_| {
                let (r, c) = (rng.gen_range(1..4), rng.gen_range(1..4));
                AlgebraMatrix::random(&q, &f, r, c, &mut rng, 0.5)
            })
            .collect();
        let hs = MatrixSet::new(&q, &f, ms).unwrap();
        let text = write_matrix_set(&hs);
        prop_assert_eq!(write_matrix_set(&parse_matrix_set(&text, &f).unwrap()), text);
    }
}

#[test]
fn rational_entries_parse() {
    let text = "field q\nquiver kronecker\nside left\ndims 1 1\narrow a\n1/2\narrow b\n-3\n";
    let m = parse_representation(text, &Rationals).unwrap();
    assert_eq!(m.dims(), [1, 1]);
    assert_eq!(write_representation(&m), text);
}

#[test]
fn field_mismatch_names_the_line() {
    let text = "# a comment\nfield gf 7\nquiver kronecker\n";
    match parse_matrix_set(text, &Fp::new(5)) {
        Err(Error::Parse(e)) => assert_eq!(e.line, Some(2)),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn short_arrow_block_is_rejected() {
    let text = "field gf 5\nquiver kronecker\nside left\ndims 2 1\narrow a\n1\narrow b\n0\n1\n";
    assert!(matches!(parse_representation(text, &Fp::new(5)), Err(Error::Parse(_))));
}

#[test]
fn inexact_sequences_are_rejected() {
    let text = "field gf 5\nquiver kronecker\nside left\nmodule A\ndims 1 0\nmodule B\ndims 1 0\nmodule C\ndims 1 0\nmap f\nvertex 1\n1\nmap g\nvertex 1\n1\n";
    assert!(matches!(parse_sequence(text, &Fp::new(5)), Err(Error::NotExact(_))));
}
