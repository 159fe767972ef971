// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Benchmark circuit generators and the standard benchmark suite.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::Circuit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchFamily {
    Ghz,
    BitCode,
    Tfim,
    Qaoa,
}

impl BenchFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchFamily::Ghz => "ghz",
            BenchFamily::BitCode => "bitcode",
            BenchFamily::Tfim => "tfim",
            BenchFamily::Qaoa => "qaoa",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("unknown benchmark family `{0}` (expected ghz, bitcode, tfim or qaoa)")]
    UnknownFamily(String),
    #[error("bad benchmark size `{0}`")]
    BadSize(String),
    #[error("{family} needs at least {min} qubits, got {size}")]
    TooSmall {
        family: &'static str,
        min: usize,
        size: usize,
    },
    #[error("bad benchmark parameter `{0}`")]
    BadParam(String),
    #[error("{given} initial bits for {size} data qubits")]
    InitialBits { given: usize, size: usize },
}

/// Family-specific parameters. Fields a family does not use are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchParams {
    /// BitCode syndrome rounds.
    pub rounds: usize,
    /// BitCode initial data bits; `None` sets only the middle bit.
    pub initial_bits: Option<Vec<bool>>,
    /// TFIM Trotter steps.
    pub steps: usize,
    pub j: f64,
    pub h: f64,
    pub dt: f64,
    pub gamma: f64,
    pub beta: f64,
}

impl Default for BenchParams {
    fn default() -> Self {
        Self {
            rounds: 2,
            initial_bits: None,
            steps: 3,
            j: 1.0,
            h: 1.0,
            dt: 0.2,
            gamma: 0.35,
            beta: 0.45,
        }
    }
}

/// A benchmark instance, written `family:size[:key=value,...]`, e.g.
/// `ghz:6`, `bitcode:3:rounds=2,bits=010` or `qaoa:4:gamma=0.3`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub family: BenchFamily,
    /// Qubit count; for BitCode the number of data qubits.
    pub size: usize,
    pub params: BenchParams,
}

impl BenchmarkSpec {
    pub fn new(family: BenchFamily, size: usize) -> Result<Self, BenchError> {
        // every family has two-qubit gates
        let min = 2;
        if size < min {
            return Err(BenchError::TooSmall {
                family: family.as_str(),
                min,
                size,
            });
        }
        Ok(Self {
            family,
            size,
            params: BenchParams::default(),
        })
    }

    /// Display name such as `GHZ-6` or `Qaoa-4`.
    pub fn name(&self) -> String {
        match self.family {
            BenchFamily::Ghz => format!("GHZ-{}", self.size),
            BenchFamily::BitCode => format!("BitCode-{}", self.size),
            BenchFamily::Tfim => format!("TFIM-{}", self.size),
            BenchFamily::Qaoa => format!("Qaoa-{}", self.size),
        }
    }

    pub fn circuit(&self) -> Result<Circuit, BenchError> {
        let p = &self.params;
        Ok(match self.family {
            BenchFamily::Ghz => gen_ghz(self.size),
            BenchFamily::BitCode => {
                let bits = match &p.initial_bits {
                    Some(b) if b.len() != self.size => {
                        return Err(BenchError::InitialBits {
                            given: b.len(),
                            size: self.size,
                        })
                    }
                    Some(b) => b.clone(),
                    None => (0..self.size).map(|i| i == self.size / 2).collect(),
                };
                gen_bitcode(self.size, p.rounds, &bits)
            }
            BenchFamily::Tfim => gen_tfim(self.size, p.steps, p.j, p.h, p.dt),
            BenchFamily::Qaoa => gen_qaoa(self.size, p.gamma, p.beta),
        })
    }
}

impl fmt::Display for BenchmarkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family.as_str(), self.size)
    }
}

fn parse_param<T: FromStr>(key: &str, value: &str) -> Result<T, BenchError> {
    value
        .parse()
        .map_err(|_| BenchError::BadParam(format!("{key}={value}")))
}

impl FromStr for BenchmarkSpec {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.splitn(3, ':');
        let family = match parts.next().unwrap_or_default().to_ascii_lowercase().as_str() {
            "ghz" => BenchFamily::Ghz,
            "bitcode" => BenchFamily::BitCode,
            "tfim" => BenchFamily::Tfim,
            "qaoa" => BenchFamily::Qaoa,
            other => return Err(BenchError::UnknownFamily(other.to_string())),
        };
        let size_text = parts.next().unwrap_or_default();
        let size = size_text
            .parse()
            .map_err(|_| BenchError::BadSize(size_text.to_string()))?;
        let mut spec = BenchmarkSpec::new(family, size)?;
        for kv in parts.next().unwrap_or_default().split(',').filter(|kv| !kv.is_empty()) {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| BenchError::BadParam(kv.to_string()))?;
            let p = &mut spec.params;
            match key {
                "rounds" => p.rounds = parse_param(key, value)?,
                "steps" => p.steps = parse_param(key, value)?,
                "j" | "J" => p.j = parse_param(key, value)?,
                "h" => p.h = parse_param(key, value)?,
                "dt" => p.dt = parse_param(key, value)?,
                "gamma" => p.gamma = parse_param(key, value)?,
                "beta" => p.beta = parse_param(key, value)?,
                "bits" => {
                    p.initial_bits = Some(
                        value
                            .chars()
                            .map(|ch| match ch {
                                '0' => Ok(false),
                                '1' => Ok(true),
                                _ => Err(BenchError::BadParam(kv.to_string())),
                            })
                            .collect::<Result<_, _>>()?,
                    )
                }
                _ => return Err(BenchError::BadParam(kv.to_string())),
            }
        }
        Ok(spec)
    }
}

/// H on qubit 0, a CX chain, then measure every qubit.
pub fn gen_ghz(n: usize) -> Circuit {
    let mut c = Circuit::new(n, n);
    if n == 0 {
        return c;
    }
    c.h(0);
    for i in 0..n - 1 {
        c.cx(i, i + 1);
    }
    for i in 0..n {
        c.measure(i, i);
    }
    c
}

/// Bit-flip repetition code. Qubits interleave data and ancilla
/// (`d0, a0, d1, a1, …, d{n-1}`); each round copies the parity of
/// neighbouring data qubits into the ancilla, measures it into a syndrome
/// bit and resets it. Clbits `0..2n-1` hold the final readout, syndrome
/// bits follow.
pub fn gen_bitcode(n_data: usize, rounds: usize, initial_bits: &[bool]) -> Circuit {
    let width = (2 * n_data).saturating_sub(1);
    let n_anc = n_data.saturating_sub(1);
    let mut c = Circuit::new(width, width + rounds * n_anc);
    for (i, &b) in initial_bits.iter().enumerate().take(n_data) {
        if b {
            c.x(2 * i);
        }
    }
    for r in 0..rounds {
        for i in 0..n_anc {
            let a = 2 * i + 1;
            c.cx(2 * i, a).cx(2 * i + 2, a);
        }
        for i in 0..n_anc {
            let a = 2 * i + 1;
            c.measure(a, width + r * n_anc + i);
        }
        for i in 0..n_anc {
            c.reset(2 * i + 1);
        }
    }
    for q in 0..width {
        c.measure(q, q);
    }
    c
}

/// Trotterized transverse-field Ising chain from |1…1⟩.
pub fn gen_tfim(n: usize, steps: usize, j: f64, h: f64, dt: f64) -> Circuit {
    let mut c = Circuit::new(n, n);
    for q in 0..n {
        c.x(q);
    }
    for _ in 0..steps {
        for i in 0..n.saturating_sub(1) {
            c.cx(i, i + 1).rz(2.0 * j * dt, i + 1).cx(i, i + 1);
        }
        for q in 0..n {
            c.rx(2.0 * h * dt, q);
        }
    }
    for q in 0..n {
        c.measure(q, q);
    }
    c
}

/// One QAOA layer on the complete graph.
pub fn gen_qaoa(n: usize, gamma: f64, beta: f64) -> Circuit {
    let mut c = Circuit::new(n, n);
    for q in 0..n {
        c.h(q);
    }
    for i in 0..n {
        for j in i + 1..n {
            c.cx(i, j).rz(2.0 * gamma, j).cx(i, j);
        }
    }
    for q in 0..n {
        c.rx(2.0 * beta, q);
    }
    for q in 0..n {
        c.measure(q, q);
    }
    c
}

/// One configuration of the standard suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub name: &'static str,
    pub bench: &'static str,
    pub partition: &'static [&'static str],
    pub assignment: &'static [&'static str],
}

impl SuiteEntry {
    pub fn spec(&self) -> BenchmarkSpec {
        self.bench
            .parse()
            .unwrap_or_else(|e| unreachable!("suite entry {} is well formed: {e}", self.bench))
    }

    /// Partition as range lists, one group per QPU.
    pub fn ranges(&self) -> Vec<Vec<&'static str>> {
        self.partition.iter().map(|p| vec![*p]).collect()
    }
}

/// The twelve standard configurations on the `Q0`, `Q1`, `Q2` fakes.
pub fn standard_suite() -> Vec<SuiteEntry> {
    const E3: [&str; 3] = ["Q0", "Q1", "Q2"];
    const E3_SWAPPED: [&str; 3] = ["Q0", "Q2", "Q1"];
    const E2: [&str; 2] = ["Q0", "Q1"];
    let entry = |name, bench, partition, assignment| SuiteEntry {
        name,
        bench,
        partition,
        assignment,
    };
    vec![
        entry("GHZ-6", "ghz:6", &["q0-q1", "q2-q3", "q4-q5"][..], &E3[..]),
        entry("GHZ-6", "ghz:6", &["q0-q1", "q2-q3", "q4-q5"], &E3_SWAPPED),
        entry("GHZ-6", "ghz:6", &["q0", "q1-q2", "q3-q5"], &E3_SWAPPED),
        entry("GHZ-12", "ghz:12", &["q0-q3", "q4-q7", "q8-q11"], &E3),
        entry("BitCode-3", "bitcode:3", &["q0-q2", "q3-q4"], &E2),
        entry("BitCode-3", "bitcode:3", &["q0", "q1-q4"], &E2),
        entry("TFIM", "tfim:3", &["q0", "q1-q2"], &E2),
        entry("TFIM", "tfim:3", &["q0-q1", "q2"], &E2),
        entry("Qaoa-4", "qaoa:4", &["q0-q1", "q2-q3"], &E2),
        entry("Qaoa-6", "qaoa:6", &["q0-q1", "q2-q3", "q4-q5"], &E3),
        entry("Qaoa-8", "qaoa:8", &["q0-q2", "q3-q5", "q6-q7"], &E3),
        entry("Qaoa-10", "qaoa:10", &["q0-q3", "q4-q6", "q7-q9"], &E3),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::sim::{ideal_distribution, SimConfig};

    #[test]
    fn ghz2_is_bell() {
        let c = gen_ghz(2);
        assert_eq!(c.len(), 4);
        let d = ideal_distribution(&c, &SimConfig::default()).unwrap();
        assert_eq!(d.get("00"), 0.5);
        assert_eq!(d.get("11"), 0.5);
    }

    #[test]
    fn ghz6_has_twelve_instructions() {
        assert_eq!(gen_ghz(6).len(), 12);
    }

    #[test]
    fn bitcode_is_deterministic() {
        let c = gen_bitcode(3, 2, &[false, true, false]);
        assert_eq!(c.num_qubits(), 5);
        let d = ideal_distribution(&c, &SimConfig::default()).unwrap();
        assert_eq!(d.get("00100"), 1.0);
    }

    #[test]
    fn bitcode_without_rounds() {
        let c = gen_bitcode(3, 0, &[false; 3]);
        assert!(c.instructions().iter().all(|i| i.kind == GateKind::Measure));
        let d = ideal_distribution(&c, &SimConfig::default()).unwrap();
        assert_eq!(d.get("00000"), 1.0);
    }

    #[test]
    fn tfim_without_field_stays_put() {
        let c = gen_tfim(3, 3, 0.0, 0.0, 0.2);
        let d = ideal_distribution(&c, &SimConfig::default()).unwrap();
        assert!((d.get("111") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qaoa_at_zero_is_uniform() {
        let c = gen_qaoa(4, 0.0, 0.0);
        let d = ideal_distribution(&c, &SimConfig::default()).unwrap();
        assert_eq!(d.len(), 16);
        for (_, p) in d.iter() {
            assert!((p - 1.0 / 16.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parses_specs() {
        let s: BenchmarkSpec = "qaoa:4:gamma=0.1,beta=0.2".parse().unwrap();
        assert_eq!(s.family, BenchFamily::Qaoa);
        assert_eq!(s.params.gamma, 0.1);
        assert_eq!(s.name(), "Qaoa-4");
        let b: BenchmarkSpec = "bitcode:3:bits=110".parse().unwrap();
        assert_eq!(b.params.initial_bits, Some(vec![true, true, false]));
        assert!("ghz:1".parse::<BenchmarkSpec>().is_err());
        assert!("foo:3".parse::<BenchmarkSpec>().is_err());
        assert!("ghz:x".parse::<BenchmarkSpec>().is_err());
        assert!("ghz:3:zz=1".parse::<BenchmarkSpec>().is_err());
    }

    #[test]
    fn suite_has_twelve_entries() {
        let suite = standard_suite();
        assert_eq!(suite.len(), 12);
        for e in &suite {
            assert_eq!(e.partition.len(), e.assignment.len());
            e.spec().circuit().unwrap();
        }
    }
}
