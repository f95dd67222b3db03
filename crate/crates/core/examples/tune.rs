// scratch hyperparameter scan; not part of the deliverable
use qteach::linalg::expm_hamiltonian;
use qteach::network::{CouplingModel, PauliAxis, QubitNetwork};
use qteach::trainer::{multi_restart, TrainConfig, WeightInit};
use qteach::{AncillaPrep, SeededRng, WeightVector};

fn planted_gens() -> qteach::NetworkGenerators {
    QubitNetwork {
        num_qubits: 2,
        register: vec![0, 1],
        edges: vec![(0, 1)],
        field_sites: vec![(0, PauliAxis::Z), (1, PauliAxis::Z)],
        model: CouplingModel::heisenberg(),
    }
    .generators()
    .unwrap()
}

fn main() {
    let gens = planted_gens();
    println!("== planted Heisenberg+Z: grid over kappa0/decay/amp/L ==");
    for seed_instance in [211u64, 212, 213, 214, 215] {
        let mut rng = SeededRng::new(seed_instance);
        let w_star =
            WeightVector::new((0..3).map(|_| rng.uniform(-1.0, 1.0)).collect()).unwrap();
        let target = expm_hamiltonian(&gens.hamiltonian(&w_star).unwrap(), 1.0);
        for (kappa0, decay, amp, l) in [
            (1.0, 0.5, std::f64::consts::PI, 1u32),
            (2.0, 0.5, std::f64::consts::PI, 1),
            (4.0, 0.5, std::f64::consts::PI, 1),
            (1.0, 0.3, std::f64::consts::PI, 1),
            (2.0, 0.3, std::f64::consts::PI, 1),
            (1.0, 0.5, 1.5, 1),
            (2.0, 0.5, 1.5, 1),
            (1.0, 0.3, 1.5, 1),
            (0.5, 0.3, 1.5, 1),
            (1.0, 0.5, std::f64::consts::PI, 5),
            (0.5, 0.5, std::f64::consts::PI, 5),
        ] {
            let config = TrainConfig {
                kappa0,
                decay_exponent: decay,
                inner_steps: l,
                max_outer_steps: 100_000,
                restarts: 20,
                seed: 23,
                weight_init: WeightInit::Uniform { amplitude: amp },
                ..TrainConfig::default()
            };
            let t0 = std::time::Instant::now();
            let out = multi_restart(&gens, &target, &AncillaPrep::zeros(0), &config).unwrap();
            let n_conv = out.restarts.iter().filter(|r| r.converged).count();
            println!(
                "inst {seed_instance} k0 {kappa0:3} dec {decay} amp {amp:.2} L {l}: {n_conv:2}/20, best err {:.2e}, wall {:.1?}",
                out.best.error,
                t0.elapsed()
            );
        }
        println!();
    }
}
