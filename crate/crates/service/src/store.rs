//! Append-only event log backing the service.
//!
//! Every state change is one JSON line. Opening a store replays the log;
//! a torn final line (a crash mid-write) is dropped, any other unreadable
//! line is an error.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{Project, Submission};
use crate::ServiceError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    ProjectCreated {
        project: Project,
        /// Annotator id → bearer token.
        tokens: Vec<(String, String)>,
    },
    TaskIssued {
        project: String,
        item_id: String,
        annotator: String,
    },
    Submitted {
        project: String,
        submission: Submission,
    },
    ProjectDeleted {
        project: String,
    },
}

pub struct Log {
    path: Option<PathBuf>,
    file: Option<File>,
}

impl Log {
    /// A log that lives only in memory.
    pub fn memory() -> Self {
        Log { path: None, file: None }
    }

    /// Opens (or creates) the log at `path` and returns its events.
    pub fn open(path: &Path) -> Result<(Self, Vec<Event>), ServiceError> {
        let io_err = |source: io::Error| ServiceError::Storage {
            path: path.to_owned(),
            source,
        };
        let existing = match fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(io_err(e)),
        };
        let mut events = Vec::new();
        let lines: Vec<&str> = existing.split_inclusive('\n').collect();
        let mut valid_len = 0;
        for (i, line) in lines.iter().enumerate() {
            let complete = line.ends_with('\n');
            match serde_json::from_str::<Event>(line.trim_end()) {
                Ok(e) if complete => {
                    events.push(e);
                    valid_len += line.len();
                }
                _ if i + 1 == lines.len() && !complete => break,
                Ok(_) => unreachable!("only the final line can lack a newline"),
                Err(e) => {
                    return Err(ServiceError::CorruptLog {
                        path: path.to_owned(),
                        line: i + 1,
                        message: e.to_string(),
                    })
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
        if valid_len < existing.len() {
            file.set_len(valid_len as u64).map_err(io_err)?;
        }
        Ok((
            Log {
                path: Some(path.to_owned()),
                file: Some(file),
            },
            events,
        ))
    }

    pub fn append(&mut self, event: &Event) -> Result<(), ServiceError> {
        let (Some(file), Some(path)) = (&mut self.file, &self.path) else {
            return Ok(());
        };
        let mut line = serde_json::to_string(event).expect("event serializes");
        line.push('\n');
        file.write_all(line.as_bytes()).map_err(|source| ServiceError::Storage {
            path: path.clone(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn issued(i: usize) -> Event {
        Event::TaskIssued {
            project: "p".into(),
            item_id: format!("i{i}"),
            annotator: "a".into(),
        }
    }

    #[test]
    fn events_survive_reopening() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        let (mut log, events) = Log::open(&path).unwrap();
        assert!(events.is_empty());
        log.append(&issued(1)).unwrap();
        log.append(&issued(2)).unwrap();
        drop(log);
        let (_, events) = Log::open(&path).unwrap();
        assert_eq!(events, vec![issued(1), issued(2)]);
    }

    #[test]
    fn torn_tail_is_dropped_and_truncated() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        let mut good = serde_json::to_string(&issued(1)).unwrap();
        good.push('\n');
        fs::write(&path, format!("{good}{{\"event\":\"task_is")).unwrap();
        let (mut log, events) = Log::open(&path).unwrap();
        assert_eq!(events, vec![issued(1)]);
        log.append(&issued(2)).unwrap();
        drop(log);
        let (_, events) = Log::open(&path).unwrap();
        assert_eq!(events, vec![issued(1), issued(2)]);
    }

    #[test]
    fn corrupt_middle_line_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        let good = serde_json::to_string(&issued(1)).unwrap();
        fs::write(&path, format!("not json\n{good}\n")).unwrap();
        assert!(matches!(Log::open(&path), Err(ServiceError::CorruptLog { line: 1, .. })));
    }
}
