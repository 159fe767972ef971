// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::SimError;

/// Probability distribution over output bitstrings.
///
/// Bitstrings are printed most-significant first: the last output bit
/// (highest data qubit) is the leftmost character.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Distribution {
    probs: BTreeMap<String, f64>,
}

/// Shot histogram.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Counts {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl Counts {
    pub fn to_distribution(&self) -> Distribution {
        if self.shots == 0 {
            return Distribution::default();
        }
        let total = self.shots as f64;
        Distribution {
            probs: self
                .counts
                .iter()
                .map(|(k, &n)| (k.clone(), n as f64 / total))
                .collect(),
        }
    }
}

impl Distribution {
    /// Validates non-negativity and unit total (within 1e-9).
    pub fn new(probs: BTreeMap<String, f64>) -> Result<Self, SimError> {
        if let Some((k, &p)) = probs.iter().find(|(_, &p)| p.is_nan() || p < 0.0) {
            return Err(SimError::InvalidDistribution(format!(
                "probability of {k} is {p}"
            )));
        }
        let total: f64 = probs.values().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(SimError::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { probs })
    }

    pub(crate) fn from_map_unchecked(probs: BTreeMap<String, f64>) -> Self {
        Self { probs }
    }

    /// Probability of `key`, zero when absent.
    pub fn get(&self, key: &str) -> f64 {
        self.probs.get(key).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.probs.iter().map(|(k, &p)| (k.as_str(), p))
    }

    /// Entries sorted by descending probability, ties by ascending bitstring.
    pub fn sorted(&self) -> Vec<(String, f64)> {
        let mut v: Vec<(String, f64)> = self.probs.iter().map(|(k, &p)| (k.clone(), p)).collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v
    }

    pub fn top(&self, k: usize) -> Vec<(String, f64)> {
        let mut v = self.sorted();
        v.truncate(k);
        v
    }

    /// Most probable bitstring (smallest on ties).
    pub fn mode(&self) -> Option<(String, f64)> {
        self.sorted().into_iter().next()
    }

    /// `{bitstring: probability}` sorted by descending probability.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }
}

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let sorted = self.sorted();
        let mut map = serializer.serialize_map(Some(sorted.len()))?;
        for (k, p) in &sorted {
            map.serialize_entry(k, p)?;
        }
        map.end()
    }
}

/// `(Σᵢ √(pᵢ·qᵢ))²`; keys missing on one side count as zero.
pub fn hellinger_fidelity(p: &Distribution, q: &Distribution) -> f64 {
    let overlap: f64 = p
        .probs
        .iter()
        .filter_map(|(k, &a)| q.probs.get(k).map(|&b| (a * b).sqrt()))
        .sum();
    (overlap * overlap).clamp(0.0, 1.0)
}

/// `½ Σᵢ |pᵢ − qᵢ|`.
pub fn total_variation(p: &Distribution, q: &Distribution) -> f64 {
    let mut keys: Vec<&String> = p.probs.keys().chain(q.probs.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| (p.get(k) - q.get(k)).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(pairs: &[(&str, f64)]) -> Distribution {
        Distribution::new(pairs.iter().map(|(k, p)| (k.to_string(), *p)).collect()).unwrap()
    }

    #[test]
    fn identical_distributions_have_unit_fidelity() {
        let p = dist(&[("00", 0.25), ("11", 0.75)]);
        assert!((hellinger_fidelity(&p, &p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn point_mass_against_uniform_pair() {
        let p = dist(&[("0", 1.0)]);
        let q = dist(&[("0", 0.5), ("1", 0.5)]);
        // (√0.5)²
        assert!((hellinger_fidelity(&p, &q) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn disjoint_supports_have_zero_fidelity() {
        let p = dist(&[("0", 1.0)]);
        let q = dist(&[("1", 1.0)]);
        assert_eq!(hellinger_fidelity(&p, &q), 0.0);
        assert_eq!(total_variation(&p, &q), 1.0);
    }

    #[test]
    fn rejects_bad_totals() {
        let m: BTreeMap<String, f64> = [("0".to_string(), 0.7)].into_iter().collect();
        assert!(Distribution::new(m).is_err());
        let m: BTreeMap<String, f64> =
            [("0".to_string(), 1.5), ("1".to_string(), -0.5)].into_iter().collect();
        assert!(Distribution::new(m).is_err());
    }

    #[test]
    fn json_is_sorted_descending() {
        let p = dist(&[("00", 0.2), ("01", 0.5), ("10", 0.3)]);
        let text = p.to_json();
        let a = text.find("\"01\"").unwrap();
        let b = text.find("\"10\"").unwrap();
        let c = text.find("\"00\"").unwrap();
        assert!(a < b && b < c);
        assert_eq!(p.mode().unwrap().0, "01");
    }
}
