//! Deterministic file outputs: `spikes.csv` and `summary.json`.
//!
//! The CSV has one row per (replica, event, neuron) with times printed
//! at fixed 16-digit precision, so identical runs produce identical
//! bytes. Simultaneous discharges (possible in discrete mode) share the
//! (replica, event_index, time) prefix across rows.

use std::io::Write;
use std::path::Path;

use crate::runner::{ReplicaTrace, RunOutput};
use crate::CliError;

const SPIKES_HEADER: &str = "replica,event_index,time,neuron\n";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `spikes.csv` and `summary.json` under `out_dir`, creating the
/// directory if needed.
pub fn write_outputs(output: &RunOutput, out_dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let spikes_path = out_dir.join("spikes.csv");
    let mut csv = Vec::with_capacity(64 * 1024);
    csv.extend_from_slice(SPIKES_HEADER.as_bytes());
    for (replica, trace) in output.traces.iter().enumerate() {
        append_trace(&mut csv, replica as u64, trace);
    }
    std::fs::write(&spikes_path, csv).map_err(io_err(&spikes_path))?;

    let summary_path = out_dir.join("summary.json");
    let mut doc = serde_json::to_string_pretty(&output.summary)
        .expect("summary serialization is infallible");
    doc.push('\n');
    std::fs::write(&summary_path, doc).map_err(io_err(&summary_path))?;
    Ok(())
}

fn append_trace(csv: &mut Vec<u8>, replica: u64, trace: &ReplicaTrace) {
    match trace {
        ReplicaTrace::Continuous(t) => {
            for (index, event) in t.events.iter().enumerate() {
                for id in &event.fired {
                    write_row(csv, replica, index as u64, event.time, id.0);
                }
            }
        }
        ReplicaTrace::Discrete(t) => {
            for (index, record) in t.records.iter().enumerate() {
                for id in &record.fired {
                    write_row(csv, replica, index as u64, record.step as f64, id.0);
                }
            }
        }
    }
}

fn write_row(csv: &mut Vec<u8>, replica: u64, event_index: u64, time: f64, neuron: usize) {
    writeln!(csv, "{replica},{event_index},{time:.16},{neuron}")
        .expect("writing to a Vec cannot fail");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::RunSummary;
    use glsim_core::continuous::{Event, EventTrace, Termination};
    use glsim_core::model::NeuronId;

    fn summary_for(traces: &[ReplicaTrace]) -> RunSummary {
        RunSummary {
            replicas: traces.len() as u64,
            death_fraction: 0.0,
            mean_events: 0.0,
            mean_death_time: None,
            terminations: traces.iter().map(|t| t.termination_label().into()).collect(),
        }
    }

    fn continuous(events: Vec<Event>) -> ReplicaTrace {
        ReplicaTrace::Continuous(EventTrace {
            events,
            death_index: None,
            termination: Termination::EventCap,
            covered_time: 10.0,
        })
    }

    #[test]
    fn empty_trace_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let traces = vec![continuous(vec![])];
        let output = RunOutput {
            summary: summary_for(&traces),
            traces,
        };
        write_outputs(&output, dir.path()).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("spikes.csv")).unwrap();
        assert_eq!(csv, SPIKES_HEADER);
    }

    #[test]
    fn single_event_row_format_is_fixed() {
        let dir = tempfile::tempdir().unwrap();
        let traces = vec![continuous(vec![Event {
            time: 0.5,
            fired: vec![NeuronId(2)],
        }])];
        let output = RunOutput {
            summary: summary_for(&traces),
            traces,
        };
        write_outputs(&output, dir.path()).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("spikes.csv")).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("replica,event_index,time,neuron"));
        assert_eq!(lines.next(), Some("0,0,0.5000000000000000,2"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn simultaneous_discharges_share_the_prefix() {
        use glsim_core::discrete::{DiscreteTermination, DiscreteTrace, StepRecord};
        let dir = tempfile::tempdir().unwrap();
        let traces = vec![ReplicaTrace::Discrete(DiscreteTrace {
            records: vec![StepRecord {
                step: 3,
                fired: vec![NeuronId(0), NeuronId(1)],
            }],
            termination: DiscreteTermination::Horizon,
            final_step: 5,
        })];
        let output = RunOutput {
            summary: summary_for(&traces),
            traces,
        };
        write_outputs(&output, dir.path()).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("spikes.csv")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "0,0,3.0000000000000000,0");
        assert_eq!(lines[2], "0,0,3.0000000000000000,1");
    }

    #[test]
    fn summary_json_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let traces = vec![continuous(vec![])];
        let output = RunOutput {
            summary: summary_for(&traces),
            traces,
        };
        write_outputs(&output, dir.path()).unwrap();
        let a = std::fs::read(dir.path().join("summary.json")).unwrap();
        write_outputs(&output, dir.path()).unwrap();
        let b = std::fs::read(dir.path().join("summary.json")).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.contains("\"replicas\": 1"));
    }
}
