use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use holevo_core::information::ensemble_commutator;
use holevo_core::interactions::{random_von_neumann_family, FamilyMethod};
use holevo_core::random::{
    haar_unitary, random_density_matrix, random_distribution, random_ensemble, random_povm,
    random_pure_state, seeded,
};
use holevo_core::{
    certify_bound, commutator_norm, evolve, hermitian_eigendecomposition, holevo_chi,
    mutual_information, partial_trace_system, shift_gate, tensor_product, validate_povm,
    von_neumann_entropy, ComplexMatrix, DensityMatrix, Ensemble, InteractionUnitary, Povm,
    PureState, C64,
};

fn int_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec((-4i32..=4, -4i32..=4), r * c).prop_map(move |v| {
            let rows = v
                .chunks(c)
                .map(|row| {
                    row.iter()
                        .map(|&(a, b)| C64::new(a as f64, b as f64))
                        .collect()
                })
                .collect();
            ComplexMatrix::from_rows(rows).unwrap()
        })
    })
}

fn random_matrix(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = seeded(seed);
    let u = haar_unitary(d, &mut rng);
    let w = haar_unitary(d, &mut rng);
    let diag = random_distribution(d, &mut rng);
    &(&u * &ComplexMatrix::from_diagonal(&diag)) * &w
}

fn hermitian(d: usize, seed: u64) -> ComplexMatrix {
    let a = random_matrix(d, seed);
    &a + &a.adjoint()
}

/// Entropy of a classical distribution, written out independently.
fn h(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_product_is_associative(a in int_matrix(3), b in int_matrix(2), c in int_matrix(2)) {
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn partial_trace_of_product(da in 1usize..=4, db in 1usize..=4, seed in any::<u64>()) {
        let a = random_matrix(da, seed);
        let b = random_matrix(db, seed ^ 0x5555);
        let reduced = partial_trace_system(&tensor_product(&a, &b), da, db).unwrap();
        let expected = b.scale(a.trace());
        prop_assert!((&reduced - &expected).max_norm() <= 1e-12);
    }

    #[test]
    fn eigendecomposition_reconstructs(d in 1usize..=6, seed in any::<u64>()) {
        let m = hermitian(d, seed);
        let eig = hermitian_eigendecomposition(&m).unwrap();
        let sum: f64 = eig.eigenvalues.iter().sum();
        assert_abs_diff_eq!(sum, m.trace().re, epsilon = 1e-10);
        prop_assert!((&eig.reconstruct() - &m).max_norm() <= 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(eig.eigenvectors.unitarity_defect() <= 1e-10);
    }

    #[test]
    fn commutator_norm_is_symmetric(d in 1usize..=5, seed in any::<u64>()) {
        let a = random_matrix(d, seed);
        let b = random_matrix(d, seed.wrapping_add(1));
        prop_assert_eq!(commutator_norm(&a, &b).unwrap(), commutator_norm(&b, &a).unwrap());
    }

    #[test]
    fn eigensystem_roundtrip(d in 1usize..=6, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let spectrum = random_distribution(d, &mut rng);
        let basis = haar_unitary(d, &mut rng);
        let rho = DensityMatrix::from_eigensystem(&spectrum, &basis).unwrap();
        let mut sorted = spectrum.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        for (got, want) in rho.eigenvalues().iter().zip(&sorted) {
            assert_abs_diff_eq!(*got, *want, epsilon = 1e-9);
        }
        prop_assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn random_povms_validate(d in 1usize..=5, outcomes in 1usize..=8, seed in any::<u64>()) {
        let povm = random_povm(d, outcomes, &mut seeded(seed));
        prop_assert!(validate_povm(povm.elements()).is_valid(1e-10));
    }

    #[test]
    fn entropy_bounds(d in 1usize..=6, rank in 1usize..=6, seed in any::<u64>()) {
        let rho = random_density_matrix(d, rank.min(d), &mut seeded(seed));
        let s = von_neumann_entropy(&rho);
        prop_assert!(s >= -1e-12);
        prop_assert!(s <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn holevo_inequality(d in 2usize..=4, n in 1usize..=5, outcomes in 1usize..=8, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let e = random_ensemble(d, n, &mut rng);
        let m = random_povm(d, outcomes, &mut rng);
        let cert = certify_bound(&e, &m, 1e-6).unwrap();
        prop_assert!(cert.mutual_information_bits <= cert.chi_bits + 1e-9);
        prop_assert!(cert.mutual_information_bits >= 0.0);
        let entropy = h(&e.probabilities());
        prop_assert!(cert.chi_bits <= entropy + 1e-9);
    }

    #[test]
    fn coarse_graining_never_helps(d in 2usize..=4, outcomes in 2usize..=6, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let e = random_ensemble(d, 3, &mut rng);
        let m = random_povm(d, outcomes, &mut rng);
        let fine = mutual_information(&e, &m).unwrap();
        let coarse = mutual_information(&e, &m.coarse_grain(0, outcomes - 1).unwrap()).unwrap();
        prop_assert!(coarse <= fine + 1e-12);
    }

    #[test]
    fn shift_states_commute_and_match_convolution(d in 2usize..=6, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let basis = haar_unitary(d, &mut rng);
        let spectrum = random_distribution(d, &mut rng);
        let prior = random_distribution(d, &mut rng);
        let system = PureState::from_probabilities(&prior, &vec![0.0; d]).unwrap();
        let apparatus = DensityMatrix::from_eigensystem(&spectrum, &basis).unwrap();
        let model = evolve(&system, &apparatus, &shift_gate(d, &basis).unwrap()).unwrap();
        prop_assert!(model.max_pairwise_commutator() <= 1e-10);
        let conv: Vec<f64> = (0..d)
            .map(|m| (0..d).map(|i| prior[i] * spectrum[(m + d - i) % d]).sum())
            .collect();
        let chi = holevo_chi(&model.ensemble());
        assert_abs_diff_eq!(chi, h(&conv) - h(&spectrum), epsilon = 1e-9);
    }

    #[test]
    fn evolution_conserves_trace(d_sys in 1usize..=3, d_app in 1usize..=3, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let system = random_pure_state(d_sys, &mut rng);
        let apparatus = random_density_matrix(d_app, d_app, &mut rng);
        let blocks = (0..d_sys).map(|_| haar_unitary(d_app, &mut rng)).collect();
        let model = evolve(&system, &apparatus, &InteractionUnitary::new(blocks).unwrap()).unwrap();
        assert_abs_diff_eq!(model.post_state.matrix().trace().re, 1.0, epsilon = 1e-12);
        prop_assert!(model.post_state.eigenvalues().iter().all(|&x| x >= -1e-10));
        prop_assert!(model.mixture_defect() <= 1e-10);
    }

    #[test]
    fn qubit_families_commute(seed in 0u64..10_000, phase in any::<bool>()) {
        let method = if phase { FamilyMethod::PhaseShift } else { FamilyMethod::ProjectionSearch };
        let fam = random_von_neumann_family(2, seed, method).unwrap();
        let mut rng = seeded(seed);
        let spectrum = random_distribution(2, &mut rng);
        let apparatus = DensityMatrix::from_eigensystem(&spectrum, &fam.apparatus_basis).unwrap();
        let system = random_pure_state(2, &mut rng);
        let model = evolve(&system, &apparatus, &fam.interaction).unwrap();
        prop_assert!(ensemble_commutator(&model.ensemble()) <= 1e-6);
    }
}

#[test]
fn diagonal_states_saturate_in_computational_basis() {
    let mut rng = seeded(12);
    for d in 2..=5 {
        let states: Vec<(f64, DensityMatrix)> = random_distribution(3, &mut rng)
            .into_iter()
            .map(|p| {
                let diag = random_distribution(d, &mut rng);
                (
                    p,
                    DensityMatrix::new(ComplexMatrix::from_diagonal(&diag)).unwrap(),
                )
            })
            .collect();
        let e = Ensemble::new(states).unwrap();
        let chi = holevo_chi(&e);
        let info = mutual_information(&e, &Povm::computational(d)).unwrap();
        assert_abs_diff_eq!(chi, info, epsilon = 1e-10);
    }
}
