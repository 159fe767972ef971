// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, VecDeque};

use super::{PlaceholderPosition, TranspileError};
use crate::backend::BackendSpec;
use crate::circuit::{Circuit, GateKind, Instruction};

/// Logical-to-physical assignment, kept bijective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitMap {
    l2p: Vec<usize>,
    p2l: Vec<usize>,
}

impl QubitMap {
    pub fn identity(n: usize) -> Self {
        Self {
            l2p: (0..n).collect(),
            p2l: (0..n).collect(),
        }
    }

    /// Map from an explicit logical-to-physical permutation.
    pub fn from_permutation(l2p: Vec<usize>) -> Option<Self> {
        let mut p2l = vec![usize::MAX; l2p.len()];
        for (l, &p) in l2p.iter().enumerate() {
            if p >= l2p.len() || p2l[p] != usize::MAX {
                return None;
            }
            p2l[p] = l;
        }
        Some(Self { l2p, p2l })
    }

    pub fn len(&self) -> usize {
        self.l2p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l2p.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.l2p[logical]
    }

    pub fn logical(&self, physical: usize) -> usize {
        self.p2l[physical]
    }

    pub fn logical_to_physical(&self) -> &[usize] {
        &self.l2p
    }

    /// Exchanges the logical qubits held by two physical slots.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.p2l[a], self.p2l[b]);
        self.p2l.swap(a, b);
        self.l2p[la] = b;
        self.l2p[lb] = a;
    }
}

/// Output of [`route`].
#[derive(Debug, Clone, PartialEq)]
pub struct Routed {
    /// Circuit over physical slots.
    pub circuit: Circuit,
    pub final_map: QubitMap,
    pub swaps: usize,
}

/// Shortest path from `from` to `to`; intermediate slots must satisfy
/// `usable`. Neighbours are visited in ascending order, so ties resolve
/// toward lower physical indices.
fn bfs_path(spec: &BackendSpec, from: usize, to: usize, usable: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; spec.num_qubits()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut v = to;
            while v != from {
                v = parent[v];
                path.push(v);
            }
            path.reverse();
            return Some(path);
        }
        for &v in spec.neighbors(u) {
            if parent[v] == usize::MAX && (v == to || usable(v)) {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Greedy in-order router.
///
/// Logical qubits `exempt_from..` (communication qubits) are never routed
/// and only appear in placeholders; paths avoid the slots holding them when
/// possible. For every other two-qubit gate on non-adjacent slots, SWAPs move
/// the first operand along a shortest path until it neighbours the second.
pub fn route(
    sub: &Circuit,
    spec: &BackendSpec,
    initial: &QubitMap,
    exempt_from: usize,
) -> Result<Routed, TranspileError> {
    let width = initial.len();
    if sub.num_qubits() > width {
        return Err(TranspileError::MapTooSmall {
            qubits: sub.num_qubits(),
            slots: width,
        });
    }
    let exempt_end = sub.num_qubits();
    let mut map = initial.clone();
    let mut out = Circuit::new(width, sub.num_clbits());
    let mut swaps = 0;
    for instr in sub.instructions() {
        let routable = instr.kind.is_unitary() && instr.qubits.len() >= 2;
        if routable && instr.qubits.len() > 2 {
            return Err(TranspileError::TooManyQubits { gate: instr.kind.name() });
        }
        if routable && instr.qubits.iter().all(|&q| q < exempt_from) {
            let (a, b) = (instr.qubits[0], instr.qubits[1]);
            let (pa, pb) = (map.physical(a), map.physical(b));
            if pa >= spec.num_qubits() || pb >= spec.num_qubits() {
                return Err(TranspileError::OffDevice {
                    qubit: if pa >= spec.num_qubits() { a } else { b },
                });
            }
            if !spec.is_coupled(pa, pb) {
                let pinned = |p: usize| {
                    let l = map.logical(p);
                    l >= exempt_from && l < exempt_end
                };
                let path = bfs_path(spec, pa, pb, |p| !pinned(p))
                    .or_else(|| bfs_path(spec, pa, pb, |_| true))
                    .ok_or(TranspileError::Unroutable { a: pa, b: pb })?;
                for w in path.windows(2).take(path.len() - 2) {
                    out.try_push(Instruction::new(GateKind::Swap, [w[0], w[1]]))?;
                    map.swap_physical(w[0], w[1]);
                    swaps += 1;
                }
            }
        }
        out.try_push(instr.remapped(|q| map.physical(q)))?;
    }
    Ok(Routed {
        circuit: out,
        final_map: map,
        swaps,
    })
}

/// Position of each placeholder in a physical circuit.
pub(crate) fn placeholder_positions(c: &Circuit) -> BTreeMap<crate::circuit::RemoteId, PlaceholderPosition> {
    c.instructions()
        .iter()
        .enumerate()
        .filter_map(|(index, i)| {
            i.placeholder_id().map(|id| {
                (
                    id,
                    PlaceholderPosition {
                        index,
                        data_physical: i.qubits[0],
                        comm_physical: i.qubits.get(1).copied(),
                    },
                )
            })
        })
        .collect()
}
