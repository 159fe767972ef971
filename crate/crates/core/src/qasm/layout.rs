// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use serde_json::{json, Map, Value};

use crate::assembler::{DistributedLayout, MetricsReport, QubitRole};

/// Layout document: QPU blocks, the flat instruction list with physical
/// qubits and tags, EPR events, classical messages and (optionally) the
/// metrics. Output is pretty-printed JSON with a fixed key order.
pub fn emit_layout(layout: &DistributedLayout, metrics: Option<&MetricsReport>) -> String {
    let epr_of = |q: usize| {
        layout
            .epr_events
            .iter()
            .find(|e| e.e1 == q || e.e2 == q)
            .map(|e| e.event.id)
    };
    let qpus: Vec<Value> = layout
        .qpus
        .iter()
        .enumerate()
        .map(|(g, qpu)| {
            let owned = |role| {
                layout
                    .ownership
                    .iter()
                    .enumerate()
                    .filter(move |(_, o)| o.qpu == g && o.role == role)
            };
            let data: Vec<Value> = owned(QubitRole::Data)
                .map(|(q, o)| json!({"global_index": q, "physical_index": o.physical}))
                .collect();
            let comm: Vec<Value> = owned(QubitRole::Comm)
                .map(|(q, o)| json!({"global_index": q, "physical_index": o.physical, "epr_event_id": epr_of(q)}))
                .collect();
            let ancilla: Vec<Value> = owned(QubitRole::Ancilla)
                .map(|(q, o)| json!({"global_index": q, "physical_index": o.physical}))
                .collect();
            let mut block = Map::new();
            block.insert("name".into(), json!(qpu.label));
            block.insert("backend".into(), json!(qpu.backend));
            block.insert("data_qubits".into(), Value::Array(data));
            block.insert("comm_qubits".into(), Value::Array(comm));
            if !ancilla.is_empty() {
                block.insert("ancilla_qubits".into(), Value::Array(ancilla));
            }
            Value::Object(block)
        })
        .collect();

    let instructions: Vec<Value> = layout
        .global_circuit
        .instructions()
        .iter()
        .zip(&layout.tags)
        .map(|(instr, tag)| {
            let owners: Vec<_> = instr.qubits.iter().map(|&q| layout.ownership[q]).collect();
            let mut obj = Map::new();
            obj.insert("op".into(), json!(instr.kind.name().as_str()));
            obj.insert("qpu".into(), json!(owners.first().map(|o| o.qpu)));
            obj.insert("qubits".into(), json!(owners.iter().map(|o| o.physical).collect::<Vec<_>>()));
            if owners.iter().any(|o| o.qpu != owners[0].qpu) {
                obj.insert("qubit_qpus".into(), json!(owners.iter().map(|o| o.qpu).collect::<Vec<_>>()));
            }
            obj.insert("global_qubits".into(), json!(instr.qubits));
            obj.insert("clbits".into(), json!(instr.clbits));
            if let Some(c) = instr.condition {
                obj.insert("condition".into(), json!({"clbit": c.clbit, "value": u8::from(c.value)}));
            }
            if let Some(theta) = instr.kind.angle() {
                obj.insert("params".into(), json!([theta]));
            }
            obj.insert("tag".into(), json!(tag));
            Value::Object(obj)
        })
        .collect();

    let mut doc = Map::new();
    doc.insert("partition".into(), json!(layout.partition));
    doc.insert("mode".into(), json!(layout.mode));
    doc.insert("num_qubits".into(), json!(layout.global_circuit.num_qubits()));
    doc.insert("num_clbits".into(), json!(layout.global_circuit.num_clbits()));
    doc.insert("qpus".into(), Value::Array(qpus));
    doc.insert("epr_events".into(), json!(layout.epr_events));
    doc.insert("messages".into(), json!(layout.messages));
    doc.insert("instructions".into(), Value::Array(instructions));
    if let Some(m) = metrics {
        doc.insert("metrics".into(), json!(m));
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).unwrap_or_default();
    text.push('\n');
    text
}
