//! Joint system-apparatus evolution and the reduced apparatus ensemble.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::information::max_pairwise_commutator;
use crate::interactions::InteractionUnitary;
use crate::linalg::{partial_trace_system, tensor_product, ComplexMatrix};
use crate::states::{DensityMatrix, Ensemble, PureState, STATE_TOL};

/// Blocks may deviate from unitarity by at most this much.
pub const EVOLVE_UNITARY_TOL: f64 = 1e-8;
/// Allowed entrywise gap between the partial trace and `Σ_i p_i ρ_i`.
pub const MIXTURE_TOL: f64 = 1e-10;

/// Outcome of one system-apparatus interaction.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementOutcomeModel {
    /// `|c_i|²`
    pub prior: Vec<f64>,
    /// `ρ_i = V_i ρ V_i†`
    pub conditional_states: Vec<DensityMatrix>,
    /// `ρ′ = tr_sys[U (|ψ⟩⟨ψ| ⊗ ρ) U†]`
    pub post_state: DensityMatrix,
}

impl MeasurementOutcomeModel {
    /// `{|c_i|², ρ_i}` as an ensemble.
    pub fn ensemble(&self) -> Ensemble {
        Ensemble::new(
            self.prior
                .iter()
                .copied()
                .zip(self.conditional_states.iter().cloned())
                .collect(),
        )
        .expect("prior and conditional states were validated by evolve")
    }

    /// Largest commutator norm over all pairs of conditional states.
    pub fn max_pairwise_commutator(&self) -> f64 {
        let states: Vec<&ComplexMatrix> = self
            .conditional_states
            .iter()
            .map(DensityMatrix::matrix)
            .collect();
        max_pairwise_commutator(&states)
    }

    /// Entrywise gap between `ρ′` and `Σ_i p_i ρ_i`.
    pub fn mixture_defect(&self) -> f64 {
        let n = self.post_state.dim();
        let mix = self
            .prior
            .iter()
            .zip(&self.conditional_states)
            .fold(ComplexMatrix::zeros(n, n), |acc, (&p, rho)| {
                &acc + &rho.matrix().scale_real(p)
            });
        (&mix - self.post_state.matrix()).max_norm()
    }
}

/// Evolve `|ψ⟩⟨ψ| ⊗ ρ` under `u` and reduce to the apparatus.
pub fn evolve(
    system: &PureState,
    apparatus: &DensityMatrix,
    u: &InteractionUnitary,
) -> Result<MeasurementOutcomeModel> {
    if system.dim() != u.d_sys() || apparatus.dim() != u.d_app() {
        return Err(Error::DimensionMismatch(format!(
            "system {} / apparatus {} against interaction {} / {}",
            system.dim(),
            apparatus.dim(),
            u.d_sys(),
            u.d_app()
        )));
    }
    let defect = u.unitarity_defect();
    if defect > EVOLVE_UNITARY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    let tol = STATE_TOL.max(10.0 * defect);

    let joint =
        tensor_product(&system.projector(), apparatus.matrix()).conjugate_by(&u.full_matrix());
    let post = partial_trace_system(&joint, u.d_sys(), u.d_app())?;
    let post_state = DensityMatrix::with_tolerance(post, tol)?;

    let rho = apparatus.matrix();
    let conditional_states = u
        .blocks()
        .iter()
        .map(|v| DensityMatrix::with_tolerance(rho.conjugate_by(v), tol))
        .collect::<Result<Vec<_>>>()?;

    let model = MeasurementOutcomeModel {
        prior: system.probabilities(),
        conditional_states,
        post_state,
    };
    let gap = model.mixture_defect();
    if gap > MIXTURE_TOL {
        return Err(Error::Numerical(format!(
            "partial trace differs from the conditional mixture by {gap:.3e}"
        )));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interactions::{cnot, shift_gate};
    use crate::random::{haar_unitary, random_density_matrix, random_pure_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cnot_copies_computational_basis() {
        let psi = PureState::from_probabilities(&[0.3, 0.7], &[0.0, 0.0]).unwrap();
        let app = DensityMatrix::pure(&PureState::basis(2, 0).unwrap());
        let m = evolve(&psi, &app, &cnot()).unwrap();
        // By hand: CNOT(√0.3|00⟩ + √0.7|10⟩) = √0.3|00⟩ + √0.7|11⟩.
        let zero = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let one = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        assert!((m.conditional_states[0].matrix() - &zero).max_norm() < 1e-15);
        assert!((m.conditional_states[1].matrix() - &one).max_norm() < 1e-15);
        let expected = ComplexMatrix::from_diagonal(&[0.3, 0.7]);
        assert!((m.post_state.matrix() - &expected).max_norm() < 1e-15);
        assert!((m.prior[0] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn identity_interaction_leaves_apparatus() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi = random_pure_state(3, &mut rng);
        let app = random_density_matrix(2, 2, &mut rng);
        let m = evolve(&psi, &app, &InteractionUnitary::identity(3, 2)).unwrap();
        assert!((m.post_state.matrix() - app.matrix()).max_norm() < 1e-14);
    }

    #[test]
    fn shift_fixes_maximally_mixed_apparatus() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for d in 2..=5 {
            let psi = random_pure_state(d, &mut rng);
            let u = shift_gate(d, &haar_unitary(d, &mut rng)).unwrap();
            let m = evolve(&psi, &DensityMatrix::maximally_mixed(d), &u).unwrap();
            let mixed = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
            for rho in &m.conditional_states {
                assert!((rho.matrix() - &mixed).max_norm() < 1e-14);
            }
        }
    }

    #[test]
    fn evolve_checks_dimensions_and_unitarity() {
        let psi = PureState::basis(3, 0).unwrap();
        let app = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            evolve(&psi, &app, &cnot()),
            Err(Error::DimensionMismatch(_))
        ));

        let mut v = ComplexMatrix::identity(2);
        v[(0, 0)] = crate::linalg::C64::new(1.0 + 1e-9, 0.0);
        let slightly_off =
            InteractionUnitary::with_tolerance(vec![ComplexMatrix::identity(2), v.clone()], 1e-6)
                .unwrap();
        let psi = PureState::basis(2, 1).unwrap();
        assert!(evolve(&psi, &app, &slightly_off).is_ok());

        v[(0, 0)] = crate::linalg::C64::new(1.0 + 1e-5, 0.0);
        let off =
            InteractionUnitary::with_tolerance(vec![ComplexMatrix::identity(2), v], 1e-3).unwrap();
        assert!(matches!(
            evolve(&psi, &app, &off),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn conservation_on_random_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for d in 2..=4 {
            for _ in 0..10 {
                let psi = random_pure_state(d, &mut rng);
                let app = random_density_matrix(d, d, &mut rng);
                let blocks = (0..d).map(|_| haar_unitary(d, &mut rng)).collect();
                let u = InteractionUnitary::new(blocks).unwrap();
                let m = evolve(&psi, &app, &u).unwrap();
                assert!((m.post_state.matrix().trace().re - 1.0).abs() < 1e-12);
                assert!(*m.post_state.eigenvalues().last().unwrap() >= -1e-10);
                assert!(m.mixture_defect() <= 1e-10);
            }
        }
    }
}
