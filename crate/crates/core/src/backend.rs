// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! QPU descriptions and the backend registry.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::circuit::GateName;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("backend config: at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("backend `{backend}`: coupling pair ({a},{b}) out of range for {num_qubits} qubits")]
    CouplingOutOfRange {
        backend: String,
        a: usize,
        b: usize,
        num_qubits: usize,
    },
    #[error("backend `{backend}`: coupling pair ({q},{q}) is a self-loop")]
    SelfLoop { backend: String, q: usize },
    #[error("backend `{backend}`: coupling graph is disconnected")]
    Disconnected { backend: String },
    #[error("backend `{backend}`: unknown basis gate `{gate}`")]
    UnknownBasisGate { backend: String, gate: String },
    #[error("backend `{backend}`: basis must contain cx and a continuous single-qubit rotation")]
    IncompleteBasis { backend: String },
    #[error("duplicate backend `{0}` in config")]
    DuplicateName(String),
    #[error("unknown backend `{0}`")]
    UnknownBackend(String),
    #[error("backend `{backend}` has {available} qubits, {needed} needed")]
    Capacity {
        backend: String,
        needed: usize,
        available: usize,
    },
}

/// A QPU: qubit count, undirected coupling graph and native gate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackendSpec {
    name: String,
    num_qubits: usize,
    coupling: BTreeSet<(usize, usize)>,
    basis_gates: BTreeSet<GateName>,
    adjacency: Vec<Vec<usize>>,
}

impl BackendSpec {
    /// Validates and normalizes a backend. Coupling pairs are stored as
    /// `(min, max)`; `measure`, `reset` and `barrier` are always allowed and
    /// need not be listed.
    pub fn new(
        name: impl Into<String>,
        num_qubits: usize,
        coupling: impl IntoIterator<Item = (usize, usize)>,
        basis_gates: impl IntoIterator<Item = GateName>,
    ) -> Result<Self, BackendError> {
        let name = name.into();
        let mut edges = BTreeSet::new();
        for (a, b) in coupling {
            if a >= num_qubits || b >= num_qubits {
                return Err(BackendError::CouplingOutOfRange {
                    backend: name,
                    a,
                    b,
                    num_qubits,
                });
            }
            if a == b {
                return Err(BackendError::SelfLoop { backend: name, q: a });
            }
            edges.insert((a.min(b), a.max(b)));
        }
        let basis: BTreeSet<GateName> = basis_gates
            .into_iter()
            .filter(|g| !matches!(g, GateName::Measure | GateName::Reset | GateName::Barrier))
            .collect();
        let has_rotation = [GateName::Rz, GateName::Rx, GateName::Ry]
            .iter()
            .any(|g| basis.contains(g));
        if !basis.contains(&GateName::Cx) || !has_rotation {
            return Err(BackendError::IncompleteBasis { backend: name });
        }
        if basis.contains(&GateName::RemotePlaceholder) {
            return Err(BackendError::UnknownBasisGate {
                backend: name,
                gate: GateName::RemotePlaceholder.to_string(),
            });
        }
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for n in &mut adjacency {
            n.sort_unstable();
        }
        let spec = Self {
            name,
            num_qubits,
            coupling: edges,
            basis_gates: basis,
            adjacency,
        };
        if num_qubits > 1 && spec.distances_from(0).iter().any(Option::is_none) {
            return Err(BackendError::Disconnected { backend: spec.name });
        }
        Ok(spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Coupling edges as `(min, max)` pairs.
    pub fn coupling(&self) -> &BTreeSet<(usize, usize)> {
        &self.coupling
    }

    pub fn basis_gates(&self) -> &BTreeSet<GateName> {
        &self.basis_gates
    }

    /// Whether `gate` may appear in a circuit compiled for this backend.
    pub fn allows(&self, gate: GateName) -> bool {
        matches!(gate, GateName::Measure | GateName::Reset | GateName::Barrier)
            || self.basis_gates.contains(&gate)
    }

    pub fn is_coupled(&self, a: usize, b: usize) -> bool {
        self.coupling.contains(&(a.min(b), a.max(b)))
    }

    /// Neighbours of `q` in ascending order.
    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    /// BFS hop counts from `q`.
    pub fn distances_from(&self, q: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_qubits];
        let mut queue = VecDeque::from([q]);
        dist[q] = Some(0);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or_default();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Checks that `needed` qubits fit on `spec`.
pub fn validate_fit(spec: &BackendSpec, needed: usize) -> Result<(), BackendError> {
    if needed > spec.num_qubits() {
        return Err(BackendError::Capacity {
            backend: spec.name().to_string(),
            needed,
            available: spec.num_qubits(),
        });
    }
    Ok(())
}

const IBM_BASIS: [GateName; 4] = [GateName::Rz, GateName::Sx, GateName::X, GateName::Cx];

fn builtin(name: &str, n: usize, coupling: &[(usize, usize)]) -> BackendSpec {
    BackendSpec::new(name, n, coupling.iter().copied(), IBM_BASIS)
        .unwrap_or_else(|e| unreachable!("built-in backend is valid: {e}"))
}

/// 5-qubit T-shaped device.
pub fn fake_vigo() -> BackendSpec {
    builtin("FakeVigoV2", 5, &[(0, 1), (1, 2), (1, 3), (3, 4)])
}

/// 5-qubit line.
pub fn fake_athens() -> BackendSpec {
    builtin("FakeAthensV2", 5, &[(0, 1), (1, 2), (2, 3), (3, 4)])
}

/// 7-qubit H-shaped device.
pub fn fake_lagos() -> BackendSpec {
    builtin("FakeLagosV2", 7, &[(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BackendEntry {
    name: String,
    num_qubits: usize,
    coupling: Vec<[usize; 2]>,
    basis_gates: Vec<String>,
}

/// Backends by name (case-sensitive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackendRegistry {
    backends: BTreeMap<String, BackendSpec>,
}

impl Default for BackendRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl BackendRegistry {
    /// `FakeVigoV2`, `FakeAthensV2` and `FakeLagosV2`.
    pub fn builtin() -> Self {
        let mut r = Self {
            backends: BTreeMap::new(),
        };
        for b in [fake_vigo(), fake_athens(), fake_lagos()] {
            r.insert(b);
        }
        r
    }

    /// Adds or replaces a backend.
    pub fn insert(&mut self, spec: BackendSpec) {
        self.backends.insert(spec.name().to_string(), spec);
    }

    pub fn get(&self, name: &str) -> Result<&BackendSpec, BackendError> {
        self.backends
            .get(name)
            .ok_or_else(|| BackendError::UnknownBackend(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.backends.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.backends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.backends.is_empty()
    }

    /// Built-ins plus the entries of a JSON list
    /// `[{name, num_qubits, coupling: [[a,b],…], basis_gates: [...]}, …]`.
    /// Blank input yields the built-ins alone.
    pub fn from_json_str(text: &str) -> Result<Self, BackendError> {
        let mut registry = Self::builtin();
        if text.trim().is_empty() {
            return Ok(registry);
        }
        let de = &mut serde_json::Deserializer::from_str(text);
        let entries: Vec<BackendEntry> =
            serde_path_to_error::deserialize(de).map_err(|e| BackendError::Schema {
                path: e.path().to_string(),
                message: e.inner().to_string(),
            })?;
        let mut seen = BTreeSet::new();
        for (i, e) in entries.into_iter().enumerate() {
            if !seen.insert(e.name.clone()) {
                return Err(BackendError::DuplicateName(e.name));
            }
            let basis = e
                .basis_gates
                .iter()
                .enumerate()
                .map(|(j, g)| {
                    g.parse::<GateName>().map_err(|_| BackendError::Schema {
                        path: format!("[{i}].basis_gates[{j}]"),
                        message: format!("unknown gate `{g}`"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let spec = BackendSpec::new(
                e.name,
                e.num_qubits,
                e.coupling.iter().map(|p| (p[0], p[1])),
                basis,
            )?;
            registry.insert(spec);
        }
        Ok(registry)
    }
}

/// Reads a backend config file; see [`BackendRegistry::from_json_str`].
pub fn load_registry(path: impl AsRef<Path>) -> Result<BackendRegistry, BackendError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| BackendError::Io {
        path: path.display().to_string(),
        source,
    })?;
    BackendRegistry::from_json_str(&text)
}
