//! Sessions and their on-disk journals.
//!
//! Every session owns `<data_dir>/<id>.jsonl`, one JSON event per line. The
//! first event creates the proof (`create` or `import`); later ones are
//! `apply` and `undo`. At startup each journal is replayed to rebuild the
//! session. A torn final line is ignored.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use chrono::{DateTime, Utc};
use nadea_core::engine::{ProofState, RuleRequest, Verdictmap};
use nadea_core::kernel::Derivation;
use nadea_core::syntax::Formula;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tokio::sync::Mutex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Create { goal: Formula, at: DateTime<Utc> },
    Import { proof: Derivation, at: DateTime<Utc> },
    Apply { request: RuleRequest, at: DateTime<Utc> },
    Undo { at: DateTime<Utc> },
}

impl Event {
    fn at(&self) -> DateTime<Utc> {
        match self {
            Event::Create { at, .. } | Event::Import { at, .. } | Event::Apply { at, .. } | Event::Undo { at } => *at,
        }
    }
}

pub struct Session {
    pub id: String,
    pub state: ProofState,
    pub created: DateTime<Utc>,
    pub updated: DateTime<Utc>,
    /// Prover verdicts for the current state; cleared by every edit.
    pub feasibility: Option<Verdictmap>,
    journal: Option<PathBuf>,
}

impl Session {
    /// Appends `event` to the journal and marks the cached verdicts stale.
    pub fn record(&mut self, event: &Event) -> io::Result<()> {
        if let Some(path) = &self.journal {
            append(path, event)?;
        }
        self.updated = event.at();
        self.feasibility = None;
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum JournalError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}, line {line}: {message}")]
    Replay { path: PathBuf, line: usize, message: String },
}

fn append(path: &Path, event: &Event) -> io::Result<()> {
    let mut line = serde_json::to_string(event).map_err(io::Error::other)?;
    line.push('\n');
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(line.as_bytes())?;
    file.sync_data()
}

/// Rebuilds a session from its journal.
pub fn replay_journal(path: &Path) -> Result<Session, JournalError> {
    let io_err = |source| JournalError::Io { path: path.to_owned(), source };
    let replay_err = |line, message: String| JournalError::Replay { path: path.to_owned(), line, message };
    let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
    let file = fs::File::open(path).map_err(io_err)?;
    let lines: Vec<String> = io::BufReader::new(file).lines().collect::<Result<_, _>>().map_err(io_err)?;
    let count = lines.len();
    let mut session: Option<Session> = None;
    for (i, text) in lines.iter().enumerate() {
        if text.trim().is_empty() {
            continue;
        }
        let event: Event = match serde_json::from_str(text) {
            Ok(e) => e,
            Err(_) if i + 1 == count => break,
            Err(e) => return Err(replay_err(i + 1, e.to_string())),
        };
        let at = event.at();
        match (&mut session, event) {
            (None, Event::Create { goal, .. }) => {
                let state = ProofState::new(goal).map_err(|e| replay_err(i + 1, e.to_string()))?;
                session =
                    Some(Session { id: id.clone(), state, created: at, updated: at, feasibility: None, journal: None });
            }
            (None, Event::Import { proof, .. }) => {
                let state = ProofState::replay(&proof).map_err(|e| replay_err(i + 1, e.to_string()))?;
                session =
                    Some(Session { id: id.clone(), state, created: at, updated: at, feasibility: None, journal: None });
            }
            (None, _) => return Err(replay_err(i + 1, "journal does not start with a create event".into())),
            (Some(s), Event::Apply { request, .. }) => {
                s.state.apply_rule(&request).map_err(|e| replay_err(i + 1, e.to_string()))?;
                s.updated = at;
            }
            (Some(s), Event::Undo { .. }) => {
                s.state.undo().map_err(|e| replay_err(i + 1, e.to_string()))?;
                s.updated = at;
            }
            (Some(_), _) => return Err(replay_err(i + 1, "second create event".into())),
        }
    }
    let mut session = session.ok_or_else(|| replay_err(1, "empty journal".into()))?;
    session.journal = Some(path.to_owned());
    Ok(session)
}

pub type SessionRef = Arc<Mutex<Session>>;

#[derive(Default)]
pub struct Store {
    sessions: RwLock<HashMap<String, SessionRef>>,
    dir: Option<PathBuf>,
}

impl Store {
    pub fn in_memory() -> Store {
        Store::default()
    }

    /// Opens (creating if needed) a data directory and replays every journal
    /// in it. Journals that fail to replay are reported and left alone.
    pub fn open(dir: &Path) -> io::Result<(Store, Vec<JournalError>)> {
        fs::create_dir_all(dir)?;
        let mut sessions = HashMap::new();
        let mut problems = Vec::new();
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "jsonl") {
                match replay_journal(&path) {
                    Ok(s) => {
                        sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
                    }
                    Err(e) => problems.push(e),
                }
            }
        }
        Ok((Store { sessions: RwLock::new(sessions), dir: Some(dir.to_owned()) }, problems))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Registers a new session whose state was produced by `first`.
    pub fn insert(&self, state: ProofState, first: Event) -> io::Result<String> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let journal = self.dir.as_ref().map(|d| d.join(format!("{id}.jsonl")));
        if let Some(path) = &journal {
            append(path, &first)?;
        }
        let at = first.at();
        let session = Session { id: id.clone(), state, created: at, updated: at, feasibility: None, journal };
        self.sessions.write().expect("lock").insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(id)
    }

    pub fn get(&self, id: &str) -> Option<SessionRef> {
        self.sessions.read().expect("lock").get(id).cloned()
    }
}

/// Deletes journals in `dir` whose last event is older than `cutoff`.
/// Returns the removed session ids.
pub fn prune(dir: &Path, cutoff: DateTime<Utc>, dry_run: bool) -> Result<Vec<String>, JournalError> {
    let io_err = |source| JournalError::Io { path: dir.to_owned(), source };
    let mut removed = Vec::new();
    let mut entries: Vec<PathBuf> =
        fs::read_dir(dir).map_err(io_err)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>().map_err(io_err)?;
    entries.sort();
    for path in entries {
        if path.extension().is_none_or(|e| e != "jsonl") {
            continue;
        }
        let session = replay_journal(&path)?;
        if session.updated < cutoff {
            if !dry_run {
                fs::remove_file(&path).map_err(|source| JournalError::Io { path: path.clone(), source })?;
            }
            removed.push(session.id);
        }
    }
    Ok(removed)
}
