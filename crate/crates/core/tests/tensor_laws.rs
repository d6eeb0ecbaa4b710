use num_complex::Complex64;
use proptest::prelude::*;
use ybx_core::sampling::{gaussian_matrix, invertible_matrix, normalized_vector, rng};
use ybx_core::tensor::{kron, kron_vec, swap_operator, CMat};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), rows * cols).prop_map(move |v| {
        CMat::from_vec(rows, cols, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
    })
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..4, 1usize..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative((a, b, c) in (dims(), dims(), dims()).prop_flat_map(|(x, y, z)| {
        (matrix(x.0, x.1), matrix(y.0, y.1), matrix(z.0, z.1))
    })) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn mixed_product_law(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut r = rng(seed);
        let (a, c) = (gaussian_matrix(&mut r, n), gaussian_matrix(&mut r, n));
        let (b, d) = (gaussian_matrix(&mut r, m), gaussian_matrix(&mut r, m));
        let left = &kron(&a, &b) * &kron(&c, &d);
        let right = kron(&(&a * &c), &(&b * &d));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12 * left.max_abs().max(1.0));
    }

    #[test]
    fn adjoint_distributes_over_kron(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut r = rng(seed);
        let (a, b) = (gaussian_matrix(&mut r, n), gaussian_matrix(&mut r, m));
        prop_assert_eq!(kron(&a, &b).adjoint(), kron(&a.adjoint(), &b.adjoint()));
    }

    #[test]
    fn swap_exchanges_factors(seed in any::<u64>(), d in 1usize..5) {
        let mut r = rng(seed);
        let (x, y) = (normalized_vector(&mut r, d), normalized_vector(&mut r, d));
        prop_assert_eq!(swap_operator(d).apply(&kron_vec(&x, &y)), kron_vec(&y, &x));
    }

    #[test]
    fn inverse_round_trip(seed in any::<u64>(), n in 1usize..7) {
        let m = invertible_matrix(&mut rng(seed), n);
        let back = &m * &m.inverse().unwrap();
        prop_assert!(back.max_abs_diff(&CMat::identity(n)) <= 1e-9);
    }

    #[test]
    fn json_round_trip_is_exact(m in dims().prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(CMat::from_json(&m.to_json()).unwrap(), m);
    }
}
