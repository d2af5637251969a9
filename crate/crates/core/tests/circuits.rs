use qvpde_core::circuits::*;
use qvpde_core::presets;

#[test]
fn kpz_two_steps_match_circuits() {
    let plan = presets::resized(presets::kpz(), 4).unwrap();
    for variant in [AdderVariant::QftPhase, AdderVariant::ToffoliAncilla] {
        let r = verify_shortcut(&plan, 2, variant).unwrap();
        assert_eq!(r.models, 4);
        assert!(r.expectations > 0);
        assert!(r.max_deviation < 1e-10, "{r:?}");
    }
}

#[test]
fn buckmaster_one_step_matches_circuits() {
    let plan = presets::resized(presets::buckmaster(), 3).unwrap();
    let r = verify_shortcut(&plan, 1, AdderVariant::ToffoliAncilla).unwrap();
    assert_eq!(r.models, 1);
    assert!(r.max_deviation < 1e-10, "{r:?}");
}

#[test]
fn zero_steps_is_exact() {
    let plan = presets::resized(presets::kpz(), 4).unwrap();
    let r = verify_shortcut(&plan, 0, AdderVariant::QftPhase).unwrap();
    assert_eq!(r, ShortcutReport::default());
    assert_eq!(r.max_deviation, 0.0);
}

#[test]
fn nonlinear_black_scholes_step_matches_circuits() {
    let mut plan = presets::resized(presets::bse1d_nonlinear(), 3).unwrap();
    plan.u_stage.budget = 500;
    plan.chi_stage.budget = 500;
    plan.chi_ansatz = Some(qvpde_core::ansatz::AnsatzKind::Ula { d: 2 });
    let r = verify_shortcut(&plan, 1, AdderVariant::QftPhase).unwrap();
    assert_eq!(r.models, 2);
    assert!(r.max_deviation < 1e-10, "{r:?}");
}
