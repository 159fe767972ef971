// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Circuit, GateKind, Instruction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// The two instructions share a qubit.
    Quantum,
    /// Ordering through a classical bit (write→read, read→write or write→write).
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DagEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

/// Dependency graph of a circuit. Node `i` is instruction `i` of the source.
#[derive(Debug, Clone)]
pub struct CircuitDag {
    num_qubits: usize,
    num_clbits: usize,
    nodes: Vec<Instruction>,
    edges: Vec<DagEdge>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
}

impl CircuitDag {
    pub fn from_circuit(c: &Circuit) -> Self {
        let n = c.len();
        let mut dag = CircuitDag {
            num_qubits: c.num_qubits(),
            num_clbits: c.num_clbits(),
            nodes: c.instructions().to_vec(),
            edges: Vec::new(),
            preds: vec![Vec::new(); n],
            succs: vec![Vec::new(); n],
        };
        let mut last_on_qubit: Vec<Option<usize>> = vec![None; c.num_qubits()];
        let mut last_writer: Vec<Option<usize>> = vec![None; c.num_clbits()];
        let mut readers_since_write: Vec<Vec<usize>> = vec![Vec::new(); c.num_clbits()];

        for (i, instr) in c.instructions().iter().enumerate() {
            for &q in &instr.qubits {
                if let Some(p) = last_on_qubit[q] {
                    dag.add_edge(p, i, EdgeKind::Quantum);
                }
                last_on_qubit[q] = Some(i);
            }
            if let Some(cond) = instr.condition {
                if let Some(w) = last_writer[cond.clbit] {
                    dag.add_edge(w, i, EdgeKind::Classical);
                }
                readers_since_write[cond.clbit].push(i);
            }
            if matches!(instr.kind, GateKind::Measure) {
                let b = instr.clbits[0];
                if let Some(w) = last_writer[b] {
                    dag.add_edge(w, i, EdgeKind::Classical);
                }
                for r in std::mem::take(&mut readers_since_write[b]) {
                    if r != i {
                        dag.add_edge(r, i, EdgeKind::Classical);
                    }
                }
                last_writer[b] = Some(i);
            }
        }
        dag
    }

    fn add_edge(&mut self, from: usize, to: usize, kind: EdgeKind) {
        if self.preds[to].contains(&from) {
            return;
        }
        self.preds[to].push(from);
        self.succs[from].push(to);
        self.edges.push(DagEdge { from, to, kind });
    }

    pub fn nodes(&self) -> &[Instruction] {
        &self.nodes
    }

    pub fn edges(&self) -> &[DagEdge] {
        &self.edges
    }

    pub fn predecessors(&self, node: usize) -> &[usize] {
        &self.preds[node]
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.succs[node]
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Longest weighted path; barriers weigh zero, everything else one.
    pub fn depth(&self) -> usize {
        let mut longest = vec![0usize; self.nodes.len()];
        let mut best = 0;
        // node indices are already a topological order
        for i in 0..self.nodes.len() {
            let w = usize::from(!self.nodes[i].is_barrier());
            let incoming = self.preds[i].iter().map(|&p| longest[p]).max().unwrap_or(0);
            longest[i] = incoming + w;
            best = best.max(longest[i]);
        }
        best
    }

    /// Topological linearization, lowest node index first among ready nodes.
    pub fn to_circuit(&self) -> Circuit {
        let n = self.nodes.len();
        let mut indegree: Vec<usize> = self.preds.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
        let mut out = Circuit::new(self.num_qubits, self.num_clbits);
        while let Some(Reverse(i)) = ready.pop() {
            out.push(self.nodes[i].clone());
            for &s in &self.succs[i] {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    ready.push(Reverse(s));
                }
            }
        }
        out
    }
}

impl From<&CircuitDag> for Circuit {
    fn from(dag: &CircuitDag) -> Self {
        dag.to_circuit()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_gives_empty_dag() {
        let dag = Circuit::new(2, 0).to_dag();
        assert!(dag.is_empty());
        assert_eq!(dag.to_circuit(), Circuit::new(2, 0));
    }

    #[test]
    fn shared_qubit_edge() {
        let mut c = Circuit::new(2, 0);
        c.h(0).cx(0, 1);
        let dag = c.to_dag();
        assert_eq!(
            dag.edges(),
            &[DagEdge {
                from: 0,
                to: 1,
                kind: EdgeKind::Quantum
            }]
        );
    }

    #[test]
    fn conditioned_gate_gets_classical_edge() {
        let mut c = Circuit::new(2, 1);
        c.measure(0, 0);
        c.push(Instruction::new(GateKind::X, [1]).with_condition(0, true));
        let dag = c.to_dag();
        assert_eq!(
            dag.edges(),
            &[DagEdge {
                from: 0,
                to: 1,
                kind: EdgeKind::Classical
            }]
        );
        // the classical edge counts toward depth
        assert_eq!(dag.depth(), 2);
        assert_eq!(dag.to_circuit(), c);
    }

    #[test]
    fn write_after_read_is_ordered() {
        let mut c = Circuit::new(3, 1);
        c.measure(0, 0);
        c.push(Instruction::new(GateKind::X, [1]).with_condition(0, true));
        c.measure(2, 0);
        let dag = c.to_dag();
        assert!(dag.predecessors(2).contains(&1));
        assert!(dag.predecessors(2).contains(&0));
    }

    #[test]
    fn linearization_keeps_per_qubit_order() {
        let mut c = Circuit::new(3, 0);
        c.h(2).h(0).cx(0, 1).x(2).cx(1, 2);
        let back = c.to_dag().to_circuit();
        assert_eq!(back, c);
    }
}
