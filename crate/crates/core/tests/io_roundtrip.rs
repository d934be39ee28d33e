use proptest::prelude::*;
use qhamming::corpus::{random_mixture, random_rep, seeded_rng};
use qhamming::io::{
    magic_unitary_to_json, mixture_to_json, parse_document, parse_magic_unitary, parse_mixture, validate_document,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reps_survive_a_round_trip(seed in any::<u64>(), n in 2usize..=5) {
        let rep = random_rep(n, 4, &mut seeded_rng(seed));
        let text = magic_unitary_to_json(&rep);
        prop_assert_eq!(parse_magic_unitary(&text).unwrap(), rep);
        prop_assert!(validate_document(&parse_document(&text).unwrap()).passed);
    }

    #[test]
    fn mixtures_survive_a_round_trip(seed in any::<u64>(), n in 2usize..=5) {
        let phi = random_mixture(n, 3, 4, &mut seeded_rng(seed));
        let text = mixture_to_json(&phi);
        prop_assert_eq!(&parse_mixture(&text).unwrap(), &phi);
        // writing is deterministic, so a second trip is byte-identical
        prop_assert_eq!(mixture_to_json(&parse_mixture(&text).unwrap()), text);
    }
}

#[test]
fn nested_rows_and_flat_cells_agree() {
    let flat = r#"{"n": 2, "d": 2, "grid": [
        [[[1,0],[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0],[1,0]]],
        [[[0,0],[0,0],[0,0],[1,0]], [[1,0],[0,0],[0,0],[0,0]]]]}"#;
    let nested = r#"{"n": 2, "d": 2, "grid": [
        [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]],
        [[[[0,0],[0,0]],[[0,0],[1,0]]], [[[1,0],[0,0]],[[0,0],[0,0]]]]]}"#;
    assert_eq!(parse_magic_unitary(flat).unwrap(), parse_magic_unitary(nested).unwrap());
}
