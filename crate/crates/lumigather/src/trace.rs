//! JSONL trace format: a header line embedding the full run config, one
//! object per round, and a terminal status record.
//!
//! Floats serialize as shortest round-trip decimals (serde_json's default),
//! so re-running a config and re-serializing reproduces the file byte for
//! byte. That equality is the replay check.

use std::io::{BufRead, Write};

use lumigather_core::engine::{RoundRecord, RunConfig, TerminalStatus, Trace};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum TraceIoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed trace line {line}: {source}")]
    Malformed {
        line: usize,
        source: serde_json::Error,
    },
    #[error("trace is empty")]
    Empty,
    #[error("trace has no terminal status record")]
    NoTerminal,
}

#[derive(Serialize, Deserialize)]
struct Header<'a> {
    config: std::borrow::Cow<'a, RunConfig>,
}

/// Serializes header + rounds + terminal as JSON Lines.
pub fn to_jsonl(config: &RunConfig, trace: &Trace) -> String {
    let mut out = String::new();
    out.push_str(
        &serde_json::to_string(&Header {
            config: std::borrow::Cow::Borrowed(config),
        })
        .expect("config serializes"),
    );
    out.push('\n');
    for round in &trace.rounds {
        out.push_str(&serde_json::to_string(round).expect("round serializes"));
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(&trace.status).expect("status serializes"));
    out.push('\n');
    out
}

pub fn write_jsonl(
    path: &std::path::Path,
    config: &RunConfig,
    trace: &Trace,
) -> Result<(), TraceIoError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    file.write_all(to_jsonl(config, trace).as_bytes())?;
    Ok(())
}

/// Parses a JSONL trace back into its embedded config and rounds.
pub fn from_jsonl(text: &str) -> Result<(RunConfig, Trace), TraceIoError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (n, header_line) = lines.next().ok_or(TraceIoError::Empty)?;
    let header: Header = serde_json::from_str(header_line)
        .map_err(|source| TraceIoError::Malformed { line: n + 1, source })?;
    let mut rounds: Vec<RoundRecord> = Vec::new();
    let mut status: Option<TerminalStatus> = None;
    for (n, line) in lines {
        if let Ok(s) = serde_json::from_str::<TerminalStatus>(line) {
            status = Some(s);
            continue;
        }
        let record: RoundRecord = serde_json::from_str(line)
            .map_err(|source| TraceIoError::Malformed { line: n + 1, source })?;
        rounds.push(record);
    }
    let status = status.ok_or(TraceIoError::NoTerminal)?;
    Ok((
        header.config.into_owned(),
        Trace { rounds, status },
    ))
}

pub fn read_jsonl(path: &std::path::Path) -> Result<(RunConfig, Trace), TraceIoError> {
    let file = std::fs::File::open(path)?;
    let mut text = String::new();
    for line in std::io::BufReader::new(file).lines() {
        text.push_str(&line?);
        text.push('\n');
    }
    from_jsonl(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lumigather_core::engine::{run, setup};
    use lumigather_core::geometry::Point;
    use lumigather_core::scheduling::{MovementPolicy, SchedulePolicy};

    fn sample_config() -> RunConfig {
        setup::gathering_run(
            &[Point::new(0.0, 0.0), Point::new(1.8, 0.0)],
            setup::paper_params(),
            SchedulePolicy::Fsynch,
            MovementPolicy::NonRigidMin { delta: 4.1 },
            3,
        )
    }

    #[test]
    fn round_trip_preserves_everything() {
        let config = sample_config();
        let trace = run(&config).unwrap();
        let text = to_jsonl(&config, &trace);
        let (config2, trace2) = from_jsonl(&text).unwrap();
        assert_eq!(config, config2);
        assert_eq!(trace, trace2);
    }

    #[test]
    fn rerun_of_embedded_config_is_byte_identical() {
        let config = sample_config();
        let trace = run(&config).unwrap();
        let text = to_jsonl(&config, &trace);
        let (config2, _) = from_jsonl(&text).unwrap();
        let trace2 = run(&config2).unwrap();
        assert_eq!(text, to_jsonl(&config2, &trace2));
    }

    #[test]
    fn wire_format_field_shapes() {
        let config = sample_config();
        let trace = run(&config).unwrap();
        let text = to_jsonl(&config, &trace);
        let first_round: serde_json::Value =
            serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
        assert!(first_round["round"].is_number());
        assert!(first_round["activated"].is_array());
        assert!(first_round["robots"][0]["pos"].is_array());
        assert!(first_round["robots"][0]["light"].is_string());
        assert!(first_round["phase"].is_string());
        assert!(first_round["monitors"].is_object());
        let last: serde_json::Value =
            serde_json::from_str(text.lines().last().unwrap()).unwrap();
        assert_eq!(last["status"], "Gathered");
        assert_eq!(last["round"], 1);
    }

    #[test]
    fn empty_text_is_an_error() {
        assert!(matches!(from_jsonl(""), Err(TraceIoError::Empty)));
    }
}
