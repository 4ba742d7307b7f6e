//! Pattern transfer graph: the labeled multigraph over weight patterns whose
//! edges carry log Pauli fidelities, together with its chain algebra,
//! cycle/cut decomposition and learnability queries.

pub mod chain;
mod rates;
mod spaces;
mod syndrome;
mod walsh;

pub use chain::{IntOneChain, IntZeroChain, OneChain, ZeroChain};
pub use rates::{error_rate_chain, error_rate_chain_exact, proposition_chains, PropositionKind};
pub use spaces::{cycle_basis, directed_cycle_basis, is_learnable, CycleCutParts,
    DirectedCycle, DirectedCycleSearch, SpaceDecomposition, LEARNABLE_TOL};
pub use syndrome::{build_syndrome_circuit, build_syndrome_tableau};
pub use walsh::walsh_cycle_invariance_check;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::clifford::CliffordTableau;
use crate::error::{CoreError, Result};
use crate::pauli::{pattern, PauliOp};

/// Edge label e_{x,y}^Q. The flat edge index shares the fidelity-table layout
/// ((x << n | y) << 2m) | Q.index(), so chains evaluate against log-fidelity
/// vectors directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub x: Bits,
    pub y: Bits,
    pub q: PauliOp,
}

impl std::fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}|{}|{}", self.x, self.y, self.q)
    }
}

impl std::str::FromStr for EdgeLabel {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != 3 {
            return Err(CoreError::Parse(format!("edge key {s:?} is not x|y|Q")));
        }
        Ok(EdgeLabel {
            x: parts[0].parse()?,
            y: parts[1].parse()?,
            q: parts[2].parse()?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct EdgeInfo {
    pub label: EdgeLabel,
    /// Source pattern value, pt(G^dag(Q (x) Z^x)).
    pub src: usize,
    /// Destination pattern value, pt(Q (x) Z^y).
    pub dst: usize,
}

/// The pattern transfer graph of a gate G on n ancillas and m system qubits:
/// 2^{n+m} vertices (weight patterns) and exactly 4^n 4^m edges, one per
/// (x, y, Q).
#[derive(Clone, Debug)]
pub struct PatternTransferGraph {
    n: usize,
    m: usize,
    tableau: CliffordTableau,
    edges: Vec<EdgeInfo>,
}

/// Builds the graph by enumerating all (x, y, Q) and locating endpoints via
/// the Pauli algebra.
pub fn build_ptg(g: &CliffordTableau, n: usize, m: usize) -> Result<PatternTransferGraph> {
    if g.n_qubits() != n + m {
        return Err(CoreError::SizeMismatch(format!(
            "tableau on {} qubits, expected {}",
            g.n_qubits(),
            n + m
        )));
    }
    let g_inv = g.inverse();
    let mut edges = Vec::with_capacity(1 << (2 * n + 2 * m));
    for x in Bits::all(n) {
        for y in Bits::all(n) {
            for q in PauliOp::all(m) {
                let bra = PauliOp::q_otimes_zx(&q, &x);
                let ket = PauliOp::q_otimes_zx(&q, &y);
                let (src_op, _) = g_inv.conjugate(&bra)?;
                edges.push(EdgeInfo {
                    label: EdgeLabel { x, y, q },
                    src: pattern(&src_op).value(),
                    dst: pattern(&ket).value(),
                });
            }
        }
    }
    // The enumeration above runs x outermost and Q innermost, matching the
    // flat index layout; keep that as the edge order.
    Ok(PatternTransferGraph {
        n,
        m,
        tableau: g.clone(),
        edges,
    })
}

impl PatternTransferGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tableau(&self) -> &CliffordTableau {
        &self.tableau
    }

    pub fn n_vertices(&self) -> usize {
        1 << (self.n + self.m)
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeInfo] {
        &self.edges
    }

    pub fn edge_index(&self, label: &EdgeLabel) -> Result<usize> {
        if label.x.len() != self.n || label.y.len() != self.n || label.q.n_qubits() != self.m {
            return Err(CoreError::ForeignEdge(label.to_string()));
        }
        Ok((((label.x.value() << self.n) | label.y.value()) << (2 * self.m)) | label.q.index())
    }

    pub fn edge(&self, index: usize) -> &EdgeInfo {
        &self.edges[index]
    }

    pub fn vertex_name(&self, v: usize) -> String {
        Bits::new(self.n + self.m, v).to_string()
    }

    /// Boundary of a 1-chain: dst - src per edge, extended linearly.
    /// Self-loops contribute nothing.
    pub fn boundary(&self, mu: &OneChain) -> Result<ZeroChain> {
        let mut out = ZeroChain::new();
        for (e, c) in mu.iter() {
            if e >= self.edges.len() {
                return Err(CoreError::ForeignEdge(format!("edge index {e}")));
            }
            let info = &self.edges[e];
            out.add(info.dst, c);
            out.add(info.src, -c);
        }
        Ok(out)
    }

    pub fn boundary_exact(&self, mu: &IntOneChain) -> Result<IntZeroChain> {
        let mut out = IntZeroChain::new();
        for (e, c) in mu.iter() {
            if e >= self.edges.len() {
                return Err(CoreError::ForeignEdge(format!("edge index {e}")));
            }
            let info = &self.edges[e];
            out.add(info.dst, c);
            out.add(info.src, -c);
        }
        Ok(out)
    }

    /// Coboundary of a 0-chain: +1 on edges into a vertex, -1 on edges out,
    /// 0 on self-loops.
    pub fn coboundary(&self, nu: &ZeroChain) -> OneChain {
        let mut out = OneChain::new();
        for (e, info) in self.edges.iter().enumerate() {
            if info.src == info.dst {
                continue;
            }
            let c = nu.coefficient(info.dst) - nu.coefficient(info.src);
            if c != 0.0 {
                out.add(e, c);
            }
        }
        out
    }

    /// DOT rendering for external visualization.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ptg {\n");
        for v in 0..self.n_vertices() {
            out.push_str(&format!("  v{v} [label=\"{}\"];\n", self.vertex_name(v)));
        }
        for info in &self.edges {
            out.push_str(&format!(
                "  v{} -> v{} [label=\"{}\"];\n",
                info.src, info.dst, info.label
            ));
        }
        out.push_str("}\n");
        out
    }

    /// JSON edge list: [{"edge": "x|y|Q", "src": "...", "dst": "..."}].
    pub fn to_json_edges(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.edges
                .iter()
                .map(|info| {
                    serde_json::json!({
                        "edge": info.label.to_string(),
                        "src": self.vertex_name(info.src),
                        "dst": self.vertex_name(info.dst),
                    })
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordGen;

    fn cnot_graph() -> PatternTransferGraph {
        let g = CliffordTableau::from_gen(2, &CliffordGen::Cnot(0, 1)).unwrap();
        build_ptg(&g, 1, 1).unwrap()
    }

    fn edge(g: &PatternTransferGraph, key: &str) -> (usize, usize) {
        let label: EdgeLabel = key.parse().unwrap();
        let info = g.edge(g.edge_index(&label).unwrap());
        (info.src, info.dst)
    }

    #[test]
    fn cnot_graph_matches_figure_left() {
        let g = cnot_graph();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.n_edges(), 16);
        // Published endpoints: e^I_{0,1} runs 00 -> 01, e^Z_{1,0} runs 01 -> 10.
        assert_eq!(edge(&g, "0|1|I"), (0b00, 0b10));
        assert_eq!(edge(&g, "1|0|Z"), (0b10, 0b01));
        // NOTE: vertex values store bit 0 (the system qubit) as the low bit,
        // so the displayed name "01" is value 0b10.
        assert_eq!(g.vertex_name(0b10), "01");
        assert_eq!(edge(&g, "0|0|I"), (0, 0));
        assert_eq!(edge(&g, "1|1|I"), (0b11, 0b10));
        assert_eq!(edge(&g, "0|0|X"), (0b11, 0b01));
        assert_eq!(edge(&g, "1|1|X"), (0b11, 0b11));
    }

    #[test]
    fn boundary_of_published_example() {
        // d(e^Z_{1,1} + 2 e^X_{0,0}) = -(01) + 2 (10) - (11).
        let g = cnot_graph();
        let mut mu = OneChain::new();
        mu.add(g.edge_index(&"1|1|Z".parse().unwrap()).unwrap(), 1.0);
        mu.add(g.edge_index(&"0|0|X".parse().unwrap()).unwrap(), 2.0);
        let b = g.boundary(&mu).unwrap();
        // Patterns as displayed: 01 = value 0b10, 10 = value 0b01, 11 = 0b11.
        assert_eq!(b.coefficient(0b10), -1.0);
        assert_eq!(b.coefficient(0b01), 2.0);
        assert_eq!(b.coefficient(0b11), -1.0);
        assert_eq!(b.coefficient(0b00), 0.0);
    }

    #[test]
    fn coboundary_of_zero_vertex() {
        // delta(00) = e^I_{1,0} - e^I_{0,1}: the self-loop e^I_{0,0} is excluded.
        let g = cnot_graph();
        let delta = g.coboundary(&ZeroChain::vertex(0));
        assert_eq!(delta.support_len(), 2);
        let into = g.edge_index(&"1|0|I".parse().unwrap()).unwrap();
        let out_of = g.edge_index(&"0|1|I".parse().unwrap()).unwrap();
        assert_eq!(delta.coefficient(into), 1.0);
        assert_eq!(delta.coefficient(out_of), -1.0);
    }

    #[test]
    fn cycle_example_from_text() {
        // e^I_{1,1} + e^Z_{1,1} is a 2-cycle between 11 and 01.
        let g = cnot_graph();
        let mut mu = OneChain::new();
        mu.add(g.edge_index(&"1|1|I".parse().unwrap()).unwrap(), 1.0);
        mu.add(g.edge_index(&"1|1|Z".parse().unwrap()).unwrap(), 1.0);
        assert!(g.boundary(&mu).unwrap().is_zero(0.0));
    }

    #[test]
    fn identity_gate_single_qubit_graph_is_all_loops() {
        let g = build_ptg(&CliffordTableau::identity(1), 0, 1).unwrap();
        assert_eq!(g.n_edges(), 4);
        assert!(g.edges().iter().all(|e| e.src == e.dst));
    }

    #[test]
    fn cnot_graph_n0_matches_figure_right() {
        let t = CliffordTableau::from_gen(2, &CliffordGen::Cnot(0, 1)).unwrap();
        let g = build_ptg(&t, 0, 2).unwrap();
        assert_eq!(g.n_edges(), 16);
        let e = |q: &str| {
            let label = EdgeLabel {
                x: Bits::zero(0),
                y: Bits::zero(0),
                q: q.parse().unwrap(),
            };
            let info = g.edge(g.edge_index(&label).unwrap());
            (g.vertex_name(info.src), g.vertex_name(info.dst))
        };
        // Loops at the four vertices.
        assert_eq!(e("II"), ("00".to_string(), "00".to_string()));
        assert_eq!(e("IX"), ("01".to_string(), "01".to_string()));
        assert_eq!(e("ZI"), ("10".to_string(), "10".to_string()));
        for q in ["XZ", "ZX", "YY", "XY", "YZ"] {
            assert_eq!(e(q), ("11".to_string(), "11".to_string()), "loop {q}");
        }
        // Transfers.
        for q in ["IZ", "IY"] {
            assert_eq!(e(q), ("11".to_string(), "01".to_string()), "{q}");
        }
        for q in ["ZY", "ZZ"] {
            assert_eq!(e(q), ("01".to_string(), "11".to_string()), "{q}");
        }
        for q in ["XI", "YI"] {
            assert_eq!(e(q), ("11".to_string(), "10".to_string()), "{q}");
        }
        for q in ["YX", "XX"] {
            assert_eq!(e(q), ("10".to_string(), "11".to_string()), "{q}");
        }
    }
}
