//! The qubit network: register and ancilla qubits, weighted pairwise
//! couplings and local fields, and the Hamiltonian `H(w) = sum_k w_k h_k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, C64, CMatrix, HermitianOperator};

/// Dense eigensolves stay sub-second up to this many qubits; larger networks
/// would need sparse methods.
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn matrix(self) -> CMatrix {
        let c = C64::new;
        match self {
            PauliAxis::X => CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
            PauliAxis::Y => CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
            PauliAxis::Z => CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PauliAxis::X => write!(f, "X"),
            PauliAxis::Y => write!(f, "Y"),
            PauliAxis::Z => write!(f, "Z"),
        }
    }
}

/// Two-site coupling family attached to every edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeCoupling {
    /// `Z_i Z_j`, one generator per edge.
    IsingZZ,
    /// `X_i X_j + Y_i Y_j`, one generator per edge.
    ExchangeXY,
    /// `X_i X_j + Y_i Y_j + Z_i Z_j`, one generator per edge.
    Heisenberg,
    /// One generator per listed Pauli pair per edge; the first Pauli acts on
    /// the edge's first endpoint as declared.
    CustomPauli(Vec<(PauliAxis, PauliAxis)>),
}

impl EdgeCoupling {
    pub fn terms_per_edge(&self) -> usize {
        match self {
            EdgeCoupling::IsingZZ | EdgeCoupling::ExchangeXY | EdgeCoupling::Heisenberg => 1,
            EdgeCoupling::CustomPauli(pairs) => pairs.len(),
        }
    }

    /// Pauli pairs summed inside each generator (outer list), one generator
    /// per entry.
    fn generator_pauli_sums(&self) -> Vec<Vec<(PauliAxis, PauliAxis)>> {
        use PauliAxis::*;
        match self {
            EdgeCoupling::IsingZZ => vec![vec![(Z, Z)]],
            EdgeCoupling::ExchangeXY => vec![vec![(X, X), (Y, Y)]],
            EdgeCoupling::Heisenberg => vec![vec![(X, X), (Y, Y), (Z, Z)]],
            EdgeCoupling::CustomPauli(pairs) => pairs.iter().map(|&p| vec![p]).collect(),
        }
    }
}

/// Coupling family plus the set of local-field axes sites may use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingModel {
    pub edge_coupling: EdgeCoupling,
    /// Axes allowed for local-field terms; defaults to all three.
    pub local_field_axes: Vec<PauliAxis>,
}

impl CouplingModel {
    pub fn new(edge_coupling: EdgeCoupling) -> Self {
        Self {
            edge_coupling,
            local_field_axes: vec![PauliAxis::X, PauliAxis::Y, PauliAxis::Z],
        }
    }

    pub fn ising_zz() -> Self {
        Self::new(EdgeCoupling::IsingZZ)
    }

    pub fn exchange_xy() -> Self {
        Self::new(EdgeCoupling::ExchangeXY)
    }

    pub fn heisenberg() -> Self {
        Self::new(EdgeCoupling::Heisenberg)
    }

    pub fn with_field_axes(mut self, axes: Vec<PauliAxis>) -> Self {
        self.local_field_axes = axes;
        self
    }
}

/// Network of `num_qubits` qubits with a designated register subset.
///
/// The register list is ordered: register qubit `k` of any input state maps
/// to network qubit `register[k]`. Edges are unordered pairs; for asymmetric
/// `CustomPauli` couplings the declared endpoint order picks which Pauli
/// lands where.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitNetwork {
    pub num_qubits: usize,
    pub register: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub field_sites: Vec<(usize, PauliAxis)>,
    pub model: CouplingModel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyRegister,
    TooManyQubits { num_qubits: usize },
    NoQubits,
    RegisterOutOfRange { index: usize },
    DuplicateRegisterIndex { index: usize },
    SelfLoop { qubit: usize },
    DuplicateEdge { a: usize, b: usize },
    EdgeOutOfRange { a: usize, b: usize },
    DuplicateFieldTerm { qubit: usize, axis: PauliAxis },
    FieldOutOfRange { qubit: usize },
    FieldAxisNotAllowed { qubit: usize, axis: PauliAxis },
    EmptyCustomPauli,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyRegister => write!(f, "register is empty"),
            Violation::TooManyQubits { num_qubits } => {
                write!(f, "{num_qubits} qubits exceeds the cap of {MAX_QUBITS}")
            }
            Violation::NoQubits => write!(f, "network has zero qubits"),
            Violation::RegisterOutOfRange { index } => {
                write!(f, "register index {index} out of range")
            }
            Violation::DuplicateRegisterIndex { index } => {
                write!(f, "register index {index} repeated")
            }
            Violation::SelfLoop { qubit } => write!(f, "edge ({qubit}, {qubit}) is a self-loop"),
            Violation::DuplicateEdge { a, b } => write!(f, "edge ({a}, {b}) declared twice"),
            Violation::EdgeOutOfRange { a, b } => write!(f, "edge ({a}, {b}) out of range"),
            Violation::DuplicateFieldTerm { qubit, axis } => {
                write!(f, "field term ({qubit}, {axis}) declared twice")
            }
            Violation::FieldOutOfRange { qubit } => write!(f, "field site {qubit} out of range"),
            Violation::FieldAxisNotAllowed { qubit, axis } => {
                write!(f, "field axis {axis} on qubit {qubit} not allowed by the coupling model")
            }
            Violation::EmptyCustomPauli => write!(f, "custom coupling has an empty Pauli list"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkWarning {
    /// A register qubit with no incident edge cannot interact with the rest
    /// of the network.
    DisconnectedRegisterQubit { qubit: usize },
}

impl fmt::Display for NetworkWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkWarning::DisconnectedRegisterQubit { qubit } => {
                write!(f, "register qubit {qubit} has no incident edge")
            }
        }
    }
}

/// Outcome of [`QubitNetwork::validate`]: hard violations plus advisory
/// warnings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<NetworkWarning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

impl QubitNetwork {
    pub fn register_size(&self) -> usize {
        self.register.len()
    }

    pub fn num_ancillas(&self) -> usize {
        self.num_qubits - self.register.len()
    }

    /// Non-register qubits, ascending; ancilla qubit `p` of the preparation
    /// state maps to network qubit `ancillas()[p]`.
    pub fn ancillas(&self) -> Vec<usize> {
        (0..self.num_qubits)
            .filter(|q| !self.register.contains(q))
            .collect()
    }

    /// Trainable term count `K = edges * terms-per-edge + field sites`.
    pub fn generator_count(&self) -> usize {
        self.edges.len() * self.model.edge_coupling.terms_per_edge() + self.field_sites.len()
    }

    /// Collects every invariant violation instead of stopping at the first;
    /// disconnected register qubits are only warnings.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.num_qubits == 0 {
            report.violations.push(Violation::NoQubits);
        }
        if self.num_qubits > MAX_QUBITS {
            report.violations.push(Violation::TooManyQubits {
                num_qubits: self.num_qubits,
            });
        }
        if self.register.is_empty() {
            report.violations.push(Violation::EmptyRegister);
        }
        let mut seen = vec![false; self.num_qubits];
        for &q in &self.register {
            if q >= self.num_qubits {
                report.violations.push(Violation::RegisterOutOfRange { index: q });
            } else if seen[q] {
                report
                    .violations
                    .push(Violation::DuplicateRegisterIndex { index: q });
            } else {
                seen[q] = true;
            }
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                report.violations.push(Violation::SelfLoop { qubit: a });
                continue;
            }
            if a >= self.num_qubits || b >= self.num_qubits {
                report.violations.push(Violation::EdgeOutOfRange { a, b });
                continue;
            }
            let duplicate = self.edges[..i]
                .iter()
                .any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
            if duplicate {
                report.violations.push(Violation::DuplicateEdge { a, b });
            }
        }
        for (i, &(q, axis)) in self.field_sites.iter().enumerate() {
            if q >= self.num_qubits {
                report.violations.push(Violation::FieldOutOfRange { qubit: q });
                continue;
            }
            if !self.model.local_field_axes.contains(&axis) {
                report
                    .violations
                    .push(Violation::FieldAxisNotAllowed { qubit: q, axis });
            }
            if self.field_sites[..i].contains(&(q, axis)) {
                report
                    .violations
                    .push(Violation::DuplicateFieldTerm { qubit: q, axis });
            }
        }
        if let EdgeCoupling::CustomPauli(pairs) = &self.model.edge_coupling {
            if pairs.is_empty() {
                report.violations.push(Violation::EmptyCustomPauli);
            }
        }
        for &q in &self.register {
            if q < self.num_qubits && !self.edges.iter().any(|&(a, b)| a == q || b == q) {
                report
                    .warnings
                    .push(NetworkWarning::DisconnectedRegisterQubit { qubit: q });
            }
        }
        report
    }

    /// Validates and precomputes the generator terms.
    pub fn generators(&self) -> Result<NetworkGenerators> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(Error::InvalidNetwork(report.to_string()));
        }
        let mut terms = Vec::with_capacity(self.generator_count());
        for &(a, b) in &self.edges {
            for pauli_sum in self.model.edge_coupling.generator_pauli_sums() {
                let dim = 1usize << self.num_qubits;
                let mut matrix = CMatrix::zeros(dim, dim);
                for (pa, pb) in pauli_sum {
                    matrix += embed_two_site(self.num_qubits, a, b, &pa.matrix(), &pb.matrix());
                }
                terms.push(HermitianOperator::new(matrix)?);
            }
        }
        for &(q, axis) in &self.field_sites {
            terms.push(HermitianOperator::new(embed_single_site(
                self.num_qubits,
                q,
                &axis.matrix(),
            ))?);
        }
        Ok(NetworkGenerators {
            network: self.clone(),
            terms,
        })
    }
}

/// Real weight per generator term; dimensionless because the evolution time
/// is fixed to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteWeight { index });
            }
        }
        Ok(Self(values))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Generator terms `(h_1, ..., h_K)` of a validated network, precomputed
/// once because the trainer evaluates `H(w)` thousands of times.
#[derive(Debug, Clone)]
pub struct NetworkGenerators {
    network: QubitNetwork,
    terms: Vec<HermitianOperator>,
}

impl NetworkGenerators {
    /// Pairs a validated network with an explicit generator list; the usual
    /// construction is [`QubitNetwork::generators`], this one admits custom
    /// generator families.
    pub fn with_terms(network: QubitNetwork, terms: Vec<HermitianOperator>) -> Result<Self> {
        let report = network.validate();
        if !report.is_valid() {
            return Err(Error::InvalidNetwork(report.to_string()));
        }
        let dim = 1usize << network.num_qubits;
        for term in &terms {
            if term.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "generator term",
                    expected: dim,
                    got: term.dim(),
                });
            }
        }
        Ok(Self { network, terms })
    }

    pub fn network(&self) -> &QubitNetwork {
        &self.network
    }

    pub fn terms(&self) -> &[HermitianOperator] {
        &self.terms
    }

    pub fn count(&self) -> usize {
        self.terms.len()
    }

    pub fn dim(&self) -> usize {
        1usize << self.network.num_qubits
    }

    /// `H(w) = sum_k w_k h_k`.
    pub fn hamiltonian(&self, weights: &WeightVector) -> Result<HermitianOperator> {
        if weights.len() != self.count() {
            return Err(Error::WeightCountMismatch {
                expected: self.count(),
                got: weights.len(),
            });
        }
        let dim = self.dim();
        let mut matrix = CMatrix::zeros(dim, dim);
        for (w, term) in weights.as_slice().iter().zip(&self.terms) {
            matrix += term.matrix() * C64::new(*w, 0.0);
        }
        HermitianOperator::new(matrix)
    }
}

/// Embeds a single-site operator at qubit `site` (identity elsewhere).
fn embed_single_site(num_qubits: usize, site: usize, op: &CMatrix) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for q in 0..num_qubits {
        let factor = if q == site {
            op.clone()
        } else {
            CMatrix::identity(2, 2)
        };
        out = kron(&out, &factor);
    }
    out
}

/// Embeds a two-site operator pair at qubits `(a, b)`.
fn embed_two_site(num_qubits: usize, a: usize, b: usize, op_a: &CMatrix, op_b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for q in 0..num_qubits {
        let factor = if q == a {
            op_a.clone()
        } else if q == b {
            op_b.clone()
        } else {
            CMatrix::identity(2, 2)
        };
        out = kron(&out, &factor);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;
    use crate::sampling::SeededRng;
    use approx::assert_abs_diff_eq;

    fn chain(num_qubits: usize, model: CouplingModel) -> QubitNetwork {
        QubitNetwork {
            num_qubits,
            register: (0..num_qubits).collect(),
            edges: (0..num_qubits - 1).map(|i| (i, i + 1)).collect(),
            field_sites: vec![],
            model,
        }
    }

    #[test]
    fn ising_edge_generator_is_zz() {
        let net = chain(2, CouplingModel::ising_zz());
        let gens = net.generators().unwrap();
        assert_eq!(gens.count(), 1);
        let zz = kron(&PauliAxis::Z.matrix(), &PauliAxis::Z.matrix());
        assert_eq!(gens.terms()[0].matrix(), &zz);
    }

    #[test]
    fn exchange_edge_generator_has_expected_spectrum() {
        let net = chain(2, CouplingModel::exchange_xy());
        let gens = net.generators().unwrap();
        let eig = hermitian_eig(&gens.terms()[0]);
        let expected = [-2.0, 0.0, 0.0, 2.0];
        for (got, want) in eig.eigenvalues().iter().zip(expected) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-12);
        }
    }

    #[test]
    fn heisenberg_chain_with_fields_counts_generators() {
        let mut net = chain(3, CouplingModel::heisenberg());
        net.field_sites = (0..3).map(|q| (q, PauliAxis::Z)).collect();
        assert_eq!(net.generator_count(), 5);
        let gens = net.generators().unwrap();
        assert_eq!(gens.count(), 5);
        // Hermiticity is enforced by construction; re-check explicitly.
        for term in gens.terms() {
            assert!(HermitianOperator::new(term.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn exchange_edge_shares_one_weight_for_xx_and_yy() {
        let net = chain(2, CouplingModel::exchange_xy());
        let gens = net.generators().unwrap();
        let h = gens.hamiltonian(&WeightVector::new(vec![1.0]).unwrap()).unwrap();
        let expected = kron(&PauliAxis::X.matrix(), &PauliAxis::X.matrix())
            + kron(&PauliAxis::Y.matrix(), &PauliAxis::Y.matrix());
        assert_eq!(h.matrix(), &expected);
    }

    #[test]
    fn zero_weights_build_the_zero_operator() {
        let net = chain(3, CouplingModel::heisenberg());
        let gens = net.generators().unwrap();
        let h = gens.hamiltonian(&WeightVector::zeros(2)).unwrap();
        assert_eq!(h.matrix().norm(), 0.0);
    }

    #[test]
    fn single_zz_edge_spectrum_scales_with_weight() {
        let net = chain(2, CouplingModel::ising_zz());
        let gens = net.generators().unwrap();
        let j = 0.83;
        let h = gens.hamiltonian(&WeightVector::new(vec![j]).unwrap()).unwrap();
        let eig = hermitian_eig(&h);
        let expected = [-j, -j, j, j];
        for (got, want) in eig.eigenvalues().iter().zip(expected) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-12);
        }
    }

    #[test]
    fn hamiltonian_is_linear_in_weights() {
        let mut rng = SeededRng::new(61);
        let mut net = chain(3, CouplingModel::heisenberg());
        net.field_sites = vec![(0, PauliAxis::X), (2, PauliAxis::Z)];
        let gens = net.generators().unwrap();
        let k = gens.count();
        let w1: Vec<f64> = (0..k).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let w2: Vec<f64> = (0..k).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let sum: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| a + b).collect();
        let h1 = gens.hamiltonian(&WeightVector::new(w1).unwrap()).unwrap();
        let h2 = gens.hamiltonian(&WeightVector::new(w2).unwrap()).unwrap();
        let hsum = gens.hamiltonian(&WeightVector::new(sum).unwrap()).unwrap();
        assert!(crate::linalg::max_abs_entry(&(h1.matrix() + h2.matrix() - hsum.matrix())) < 1e-14);
    }

    #[test]
    fn hamiltonian_rejects_wrong_weight_count() {
        let net = chain(2, CouplingModel::ising_zz());
        let gens = net.generators().unwrap();
        assert!(matches!(
            gens.hamiltonian(&WeightVector::zeros(3)),
            Err(Error::WeightCountMismatch { expected: 1, got: 3 })
        ));
    }

    #[test]
    fn embedded_edge_spectrum_is_padded_two_site_spectrum() {
        // spectrum of an embedded two-site Pauli equals the 4x4 spectrum
        // with multiplicity 2^(N'-2)
        let mut rng = SeededRng::new(67);
        for _ in 0..5 {
            let n = 3 + (rng.uniform(0.0, 2.0) as usize); // 3 or 4 qubits
            let a = rng.uniform(0.0, n as f64) as usize;
            let mut b = rng.uniform(0.0, n as f64) as usize;
            while b == a {
                b = rng.uniform(0.0, n as f64) as usize;
            }
            let net = QubitNetwork {
                num_qubits: n,
                register: vec![0],
                edges: vec![(a.min(b), a.max(b))],
                field_sites: vec![],
                model: CouplingModel::heisenberg(),
            };
            let gens = net.generators().unwrap();
            let big = hermitian_eig(&gens.terms()[0]);

            let small_net = chain(2, CouplingModel::heisenberg());
            let small = hermitian_eig(&small_net.generators().unwrap().terms()[0]);
            let pad = 1usize << (n - 2);
            let mut expected: Vec<f64> = small
                .eigenvalues()
                .iter()
                .flat_map(|&v| std::iter::repeat(v).take(pad))
                .collect();
            expected.sort_by(f64::total_cmp);
            for (got, want) in big.eigenvalues().iter().zip(expected) {
                assert_abs_diff_eq!(got, &want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn validate_passes_a_clean_chain() {
        let mut net = chain(3, CouplingModel::heisenberg());
        net.field_sites = vec![(1, PauliAxis::Z)];
        let report = net.validate();
        assert!(report.is_valid());
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn validate_flags_self_loop() {
        let mut net = chain(2, CouplingModel::ising_zz());
        net.edges.push((0, 0));
        let report = net.validate();
        assert!(report.violations.contains(&Violation::SelfLoop { qubit: 0 }));
    }

    #[test]
    fn validate_flags_size_cap() {
        let net = chain(11, CouplingModel::ising_zz());
        let report = net.validate();
        assert!(report
            .violations
            .contains(&Violation::TooManyQubits { num_qubits: 11 }));
    }

    #[test]
    fn validate_flags_duplicate_edge_regardless_of_order() {
        let mut net = chain(3, CouplingModel::ising_zz());
        net.edges.push((1, 0));
        let report = net.validate();
        assert!(report.violations.contains(&Violation::DuplicateEdge { a: 1, b: 0 }));
    }

    #[test]
    fn validate_warns_on_disconnected_register_qubit() {
        let net = QubitNetwork {
            num_qubits: 1,
            register: vec![0],
            edges: vec![],
            field_sites: vec![(0, PauliAxis::X)],
            model: CouplingModel::ising_zz(),
        };
        let report = net.validate();
        assert!(report.is_valid());
        assert_eq!(
            report.warnings,
            vec![NetworkWarning::DisconnectedRegisterQubit { qubit: 0 }]
        );
    }

    #[test]
    fn generators_reject_invalid_networks() {
        let mut net = chain(2, CouplingModel::ising_zz());
        net.register = vec![0, 0];
        assert!(matches!(net.generators(), Err(Error::InvalidNetwork(_))));
    }

    #[test]
    fn weight_vector_rejects_non_finite_entries() {
        assert!(matches!(
            WeightVector::new(vec![0.0, f64::NAN]),
            Err(Error::NonFiniteWeight { index: 1 })
        ));
    }

    #[test]
    fn custom_pauli_orientation_follows_edge_declaration() {
        let model = CouplingModel::new(EdgeCoupling::CustomPauli(vec![(
            PauliAxis::X,
            PauliAxis::Z,
        )]));
        let net = QubitNetwork {
            num_qubits: 2,
            register: vec![0, 1],
            edges: vec![(1, 0)],
            field_sites: vec![],
            model,
        };
        let gens = net.generators().unwrap();
        // X on qubit 1, Z on qubit 0
        let expected = kron(&PauliAxis::Z.matrix(), &PauliAxis::X.matrix());
        assert_eq!(gens.terms()[0].matrix(), &expected);
    }
}
