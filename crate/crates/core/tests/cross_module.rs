use lossyphase::analytic::{advantage_ratio, quantum_bound_opt_discrete, Mode, QuantumNorm};
use lossyphase::gaussian::scheme_fpl_limit;
use lossyphase::imperfect::{advantage, ImperfectionBudget};
use lossyphase::network::{network_fpl, single_pass_qsm, NetworkConfig};
use lossyphase::Transmissivity;

fn eta(x: f64) -> Transmissivity {
    Transmissivity::new(x).unwrap()
}

#[test]
fn single_pass_bound_agrees_across_modules() {
    for i in 1..20 {
        let e = eta(i as f64 / 20.0);
        let analytic = quantum_bound_opt_discrete(e, Mode::Sm).fisher_per_lost;
        assert!((single_pass_qsm(e) / analytic - 1.0).abs() < 1e-14);
        assert!(scheme_fpl_limit(1e12, e) / analytic - 1.0 < 1e-12);
    }
}

#[test]
fn ideal_imperfect_advantage_is_discrete_advantage() {
    for i in 1..50 {
        let e = eta(i as f64 / 50.0);
        let a = advantage(e, &ImperfectionBudget::ideal()).unwrap();
        let ratio = advantage_ratio(e, true, QuantumNorm::DiscreteOptimum);
        assert!(
            (1.0 - a.rmse_reduction - ratio).abs() < 1e-12,
            "eta={}",
            e.get()
        );
    }
}

#[test]
fn one_module_network_is_lossy_single_pass() {
    for i in 1..10 {
        let e = eta(i as f64 / 10.0);
        let f = network_fpl(&NetworkConfig::new(e, 1, 1.0, 0.7, 0.0).unwrap()).unwrap();
        assert!((f / single_pass_qsm(e) - (1.0 - e.get())).abs() < 1e-12);
    }
}
