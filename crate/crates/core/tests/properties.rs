mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn symmetric_projector_is_an_orthogonal_projector(p in sym_params()) {
        symmetric_projector(p)?;
    }

    #[test]
    fn density_operators_are_valid(p in density_params()) {
        density_operator_validity(p)?;
    }

    #[test]
    fn overlap_partial_trace_and_payoff_identities(p in density_params()) {
        overlap_and_partial_trace(p)?;
    }

    #[test]
    fn channels_preserve_trace_on_symmetric_inputs(p in channel_params()) {
        channel_trace_preservation(p)?;
    }

    #[test]
    fn summed_clone_fidelity_respects_bound(p in channel_params()) {
        asym_bound_holds(p)?;
    }

    #[test]
    fn optimal_cloner_is_universal(p in channel_params()) {
        cloner_universality(p)?;
    }

    #[test]
    fn povm_effects_are_positive_and_complete(p in povm_params()) {
        povm_effect_positivity(p)?;
    }

    #[test]
    fn optimal_estimator_is_universal(p in povm_params()) {
        estimator_universality(p)?;
    }

    #[test]
    fn solver_respects_duality_and_antisymmetry(p in game_params()) {
        solver_duality(p)?;
    }

    #[test]
    fn symmetrized_reply_is_flat_on_circulant_games(p in game_params()) {
        symmetrize_circulant(p)?;
    }

    #[test]
    fn haar_states_are_normalized(p in density_params()) {
        haar_state_normalized(p)?;
    }
}
