// scratch: prints the TOML matrix block for the planted example config
use qteach::linalg::expm_hamiltonian;
use qteach::network::{CouplingModel, PauliAxis, QubitNetwork};
use qteach::WeightVector;

fn main() {
    let gens = QubitNetwork {
        num_qubits: 2,
        register: vec![0, 1],
        edges: vec![(0, 1)],
        field_sites: vec![(0, PauliAxis::Z), (1, PauliAxis::Z)],
        model: CouplingModel::heisenberg(),
    }
    .generators()
    .unwrap();
    let w_star = WeightVector::new(vec![0.7, -0.4, 0.9]).unwrap();
    let u = expm_hamiltonian(&gens.hamiltonian(&w_star).unwrap(), 1.0);
    println!("# planted weights: {:?}", w_star.as_slice());
    println!("matrix = [");
    for i in 0..4 {
        let mut row = String::from("  [");
        for j in 0..4 {
            let e = u.matrix()[(i, j)];
            row.push_str(&format!("[{:?}, {:?}]", e.re, e.im));
            if j < 3 {
                row.push_str(", ");
            }
        }
        row.push(']');
        if i < 3 {
            row.push(',');
        }
        println!("{row}");
    }
    println!("]");
}
