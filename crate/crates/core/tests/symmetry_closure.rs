use proptest::prelude::*;
use ybx_core::families::{build_rd, build_rx};
use ybx_core::sampling::{invertible_matrix, nonzero_complex, rng, unitary_matrix};
use ybx_core::symmetry::{orbit_sample, SymmetryOp};
use ybx_core::tensor::swap_operator;
use ybx_core::verify::GybeSignature;

fn ops(seed: u64, d: usize, m: usize, len: usize) -> Vec<SymmetryOp> {
    let mut r = rng(seed);
    (0..len)
        .map(|k| match (seed as usize + k) % 6 {
            0 => SymmetryOp::Scale(nonzero_complex(&mut r)),
            1 => SymmetryOp::Inverse,
            2 => SymmetryOp::Conjugate,
            3 => SymmetryOp::Transpose,
            4 => SymmetryOp::Adjoint,
            _ => SymmetryOp::LocalConjugate { q: unitary_matrix(&mut r, d), m },
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn braided_orbits_stay_solutions(seed in any::<u64>(), d in 2usize..4, len in 1usize..5) {
        let rp = &build_rd(d).unwrap() * &swap_operator(d);
        let sig = GybeSignature::braided(d).unwrap();
        let orbit = orbit_sample(&rp, sig, &ops(seed, d, 2, len), 1e-9);
        prop_assert!(orbit.is_ok(), "{:?}", orbit.err());
    }

    #[test]
    fn rx_orbits_stay_solutions(seed in any::<u64>(), len in 1usize..4) {
        let sig = GybeSignature::new(2, 3, 2).unwrap();
        let orbit = orbit_sample(&build_rx(), sig, &ops(seed, 2, 3, len), 1e-9);
        prop_assert!(orbit.is_ok(), "{:?}", orbit.err());
    }

    #[test]
    fn non_unitary_local_conjugation(seed in any::<u64>()) {
        let q = invertible_matrix(&mut rng(seed), 2);
        prop_assume!(q.condition_1().unwrap() < 50.0);
        let rp = &build_rd(2).unwrap() * &swap_operator(2);
        let orbit = orbit_sample(&rp, GybeSignature::braided(2).unwrap(), &[SymmetryOp::LocalConjugate { q, m: 2 }], 1e-9);
        prop_assert!(orbit.is_ok());
    }
}
