// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! Tabular and JSON summaries of metrics reports.

use crate::assembler::MetricsReport;

const HEADER: [&str; 16] = [
    "Benchmark",
    "Partition",
    "Assignment",
    "#QData",
    "#QComm",
    "#QTotal",
    "DepthMin",
    "DepthMax",
    "DepthAvg",
    "LayoutDepth",
    "GateCount",
    "State",
    "IProb",
    "EProb",
    "ErrorRate",
    "Note",
];

fn row(r: &MetricsReport) -> Vec<String> {
    let assignment: Vec<&str> = r
        .qpus
        .iter()
        .map(|q| q.split_once(':').map_or(q.as_str(), |(label, _)| label))
        .collect();
    let (state, iprob, eprob, err) = match &r.fidelity {
        Some(f) => (
            format!("|{}>", f.state),
            format!("{:.6}", f.iprob),
            format!("{:.6}", f.eprob),
            format!("{:.3e}", f.error_rate),
        ),
        None => ("-".into(), "-".into(), "-".into(), "-".into()),
    };
    vec![
        r.name.clone(),
        r.partition.clone(),
        assignment.join(","),
        r.n_data.to_string(),
        r.n_comm.to_string(),
        r.n_total.to_string(),
        r.subcirc_depth_min.to_string(),
        r.subcirc_depth_max.to_string(),
        format!("{:.2}", r.subcirc_depth_avg),
        r.layout_depth.to_string(),
        r.gate_count.to_string(),
        state,
        iprob,
        eprob,
        err,
        r.simulation.clone().unwrap_or_default(),
    ]
}

/// Fixed-width table, one header line plus one line per report.
pub fn emit_report(reports: &[MetricsReport]) -> String {
    let rows: Vec<Vec<String>> = reports.iter().map(row).collect();
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.len()).collect();
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        let mut s = padded.join("  ").trim_end().to_string();
        s.push('\n');
        s
    };
    let mut out = line(HEADER.to_vec());
    for r in &rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// The reports as a pretty-printed JSON array.
pub fn emit_report_json(reports: &[MetricsReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).unwrap_or_default();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduler::Mode;

    fn report(name: &str) -> MetricsReport {
        MetricsReport {
            name: name.into(),
            partition: "q0-q1|q2-q3".into(),
            qpus: vec!["Q0:FakeVigoV2".into(), "Q1:FakeAthensV2".into()],
            mode: Mode::Expanded,
            n_data: 4,
            n_comm: 2,
            n_total: 6,
            n_ancilla: 0,
            remote_gates: 1,
            subcirc_depth_min: 3,
            subcirc_depth_max: 4,
            subcirc_depth_avg: 3.5,
            subcirc_gate_count: 10,
            swaps: 0,
            layout_depth: 12,
            gate_count: 21,
            fidelity: None,
            simulation: Some("not simulated (disabled)".into()),
        }
    }

    #[test]
    fn empty_is_header_only() {
        let text = emit_report(&[]);
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("Benchmark"));
    }

    #[test]
    fn one_row_per_report() {
        let text = emit_report(&[report("a"), report("bb")]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("a "));
        assert!(lines[1].contains("Q0,Q1"));
        // columns line up
        assert_eq!(lines[1].find("q0-q1"), lines[0].find("Partition"));
    }

    #[test]
    fn json_round_trips() {
        let reports = vec![report("a")];
        let back: Vec<MetricsReport> = serde_json::from_str(&emit_report_json(&reports)).unwrap();
        assert_eq!(back, reports);
    }
}
