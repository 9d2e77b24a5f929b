use proptest::prelude::*;
use trpca_core::prox::shrink;
use trpca_core::{
    basis_unit, dft3, idft3, identity_tensor, soft_threshold, spectral_norm, tnn, tprod, tprod_oracle, tsvt, ttranspose,
    tubal_rank, Tensor3, TensorDims, DEFAULT_RANK_TOL,
};

fn tensor_with(dims: TensorDims) -> impl Strategy<Value = Tensor3> {
    prop::collection::vec(-1.0f64..1.0, dims.len()).prop_map(move |v| Tensor3::from_vec(dims, v).unwrap())
}

fn dims_up_to(max: usize) -> impl Strategy<Value = TensorDims> {
    (1..=max, 1..=max, 1..=max).prop_map(|(a, b, c)| TensorDims::new(a, b, c).unwrap())
}

fn tensor(max: usize) -> impl Strategy<Value = Tensor3> {
    dims_up_to(max).prop_flat_map(tensor_with)
}

/// Two tensors of equal shape.
fn pair(max: usize) -> impl Strategy<Value = (Tensor3, Tensor3)> {
    dims_up_to(max).prop_flat_map(|d| (tensor_with(d), tensor_with(d)))
}

/// `A: n1 x n2 x n3`, `B: n2 x p x n3`, `C: p x q x n3`.
fn chain(max: usize) -> impl Strategy<Value = (Tensor3, Tensor3, Tensor3)> {
    (1..=max, 1..=max, 1..=max, 1..=max, 1..=max).prop_flat_map(|(n1, n2, p, q, n3)| {
        let d = |a, b| TensorDims::new(a, b, n3).unwrap();
        (tensor_with(d(n1, n2)), tensor_with(d(n2, p)), tensor_with(d(p, q)))
    })
}

fn rel(a: &Tensor3, b: &Tensor3) -> f64 {
    a.relative_error(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inner_product_matches_norm(a in tensor(5)) {
        let ip = a.inner_product(&a).unwrap();
        prop_assert!((ip - a.norm_fro().powi(2)).abs() <= 1e-12 * ip.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn norm_ordering(a in tensor(5)) {
        prop_assert!(a.norm_l1() >= a.norm_fro() * (1.0 - 1e-15));
        prop_assert!(a.norm_fro() >= a.norm_inf() * (1.0 - 1e-15));
    }

    #[test]
    fn basis_reconstruction(a in tensor(4)) {
        let d = a.dims();
        let mut sum = Tensor3::zeros(d);
        for k in 0..d.n3 {
            for j in 0..d.n2 {
                for i in 0..d.n1 {
                    sum = sum.add_scaled(a[(i, j, k)], &basis_unit(i, j, k, d).unwrap()).unwrap();
                }
            }
        }
        prop_assert!((&a - &sum).norm_fro() <= 1e-12 * a.norm_fro());
    }

    #[test]
    fn dft_round_trip_and_parseval(a in tensor(6)) {
        let spec = dft3(&a);
        let energy: f64 = spec.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / a.dims().n3 as f64;
        let fro2 = a.norm_fro().powi(2);
        prop_assert!((energy - fro2).abs() <= 1e-10 * fro2);
        prop_assert!(spec.symmetry_residue() <= 1e-12);
        prop_assert!(a.max_abs_diff(&idft3(&spec).unwrap()).unwrap() <= 1e-14);
    }

    #[test]
    fn tprod_matches_block_circulant(a in tensor(5), p in 1usize..=5, seed in any::<u64>()) {
        let d = a.dims();
        let bd = TensorDims::new(d.n2, p, d.n3).unwrap();
        let mut state = seed | 1;
        let b = Tensor3::from_fn(bd, |_, _, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        }).unwrap();
        let c = tprod(&a, &b).unwrap();
        prop_assert!(rel(&c, &tprod_oracle(&a, &b).unwrap()) <= 1e-10);
    }

    #[test]
    fn tprod_associative((a, b, c) in chain(4)) {
        let left = tprod(&tprod(&a, &b).unwrap(), &c).unwrap();
        let right = tprod(&a, &tprod(&b, &c).unwrap()).unwrap();
        prop_assert!(rel(&left, &right) <= 1e-9);
    }

    #[test]
    fn tprod_bilinear((a, b, _c) in chain(4), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        // left argument
        let a2 = a.map(|v| v * v - 0.3);
        let lhs = tprod(&a.scale(s).add_scaled(t, &a2).unwrap(), &b).unwrap();
        let rhs = tprod(&a, &b).unwrap().scale(s).add_scaled(t, &tprod(&a2, &b).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * (1.0 + rhs.norm_inf()));
        // right argument
        let b2 = b.map(|v| 0.5 - v);
        let lhs = tprod(&a, &b.scale(s).add_scaled(t, &b2).unwrap()).unwrap();
        let rhs = tprod(&a, &b).unwrap().scale(s).add_scaled(t, &tprod(&a, &b2).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * (1.0 + rhs.norm_inf()));
    }

    #[test]
    fn transpose_reverses_products((a, b, _c) in chain(4)) {
        let lhs = ttranspose(&tprod(&a, &b).unwrap());
        let rhs = tprod(&ttranspose(&b), &ttranspose(&a)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * (1.0 + rhs.norm_inf()));
        prop_assert_eq!(ttranspose(&ttranspose(&a)), a);
    }

    #[test]
    fn identity_is_neutral(a in tensor(5)) {
        let d = a.dims();
        let left = tprod(&identity_tensor(d.n1, d.n3).unwrap(), &a).unwrap();
        let right = tprod(&a, &identity_tensor(d.n2, d.n3).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&a).unwrap() <= 1e-14);
        prop_assert!(right.max_abs_diff(&a).unwrap() <= 1e-14);
    }

    #[test]
    fn tnn_is_a_norm((a, b) in pair(4), c in -4.0f64..4.0) {
        let (na, nb) = (tnn(&a).unwrap(), tnn(&b).unwrap());
        prop_assert!(tnn(&(&a + &b)).unwrap() <= (na + nb) * (1.0 + 1e-12));
        prop_assert!((tnn(&a.scale(c)).unwrap() - c.abs() * na).abs() <= 1e-12 * (1.0 + na));
        prop_assert!(na >= spectral_norm(&a).unwrap() * (1.0 - 1e-12) / a.dims().n3 as f64);
    }

    #[test]
    fn nuclear_spectral_duality((a, b) in pair(4)) {
        let ip = a.inner_product(&b).unwrap().abs();
        prop_assert!(ip <= tnn(&a).unwrap() * spectral_norm(&b).unwrap() * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn prox_non_expansive((y1, y2) in pair(4), tau in 0.01f64..2.0) {
        let d = (&y1 - &y2).norm_fro();
        let dl = (&tsvt(&y1, tau).unwrap() - &tsvt(&y2, tau).unwrap()).norm_fro();
        let de = (&soft_threshold(&y1, tau).unwrap() - &soft_threshold(&y2, tau).unwrap()).norm_fro();
        prop_assert!(dl <= d * (1.0 + 1e-10) + 1e-14);
        prop_assert!(de <= d * (1.0 + 1e-14));
    }

    #[test]
    fn tsvt_reduces_norm_and_rank(y in tensor(5), tau in 0.01f64..2.0) {
        let l = tsvt(&y, tau).unwrap();
        prop_assert!(tnn(&l).unwrap() <= tnn(&y).unwrap() * (1.0 + 1e-12));
        prop_assert!(tubal_rank(&l, DEFAULT_RANK_TOL).unwrap() <= tubal_rank(&y, DEFAULT_RANK_TOL).unwrap());
        let zero = Tensor3::zeros(y.dims());
        prop_assert_eq!(tsvt(&zero, tau).unwrap(), zero.clone());
        prop_assert_eq!(soft_threshold(&zero, tau).unwrap(), zero);
    }

    #[test]
    fn shrink_is_odd_and_bounded(y in -10.0f64..10.0, tau in 0.0f64..5.0) {
        prop_assert_eq!(shrink(-y, tau), -shrink(y, tau));
        prop_assert!(shrink(y, tau).abs() <= (y.abs() - tau).max(0.0));
    }
}
