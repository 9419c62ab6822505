//! Durable crowdsourced vote tallies keyed by canonical URL.
//!
//! Every mutation is appended to `votes.log` (JSON Lines) and synced before
//! it is acknowledged. Every `snapshot_every` operations the committed state
//! is written to `votes.snapshot.json` and the log is truncated. On open the
//! snapshot is loaded and the log replayed on top of it; records carry a
//! sequence number so a log that survived a crash between the snapshot
//! rename and the truncate is not applied twice.
//!
//! Per-URL state lives behind its own mutex, so votes on different URLs only
//! contend on the log append.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex, MutexGuard};

use chrono::{SecondsFormat, Utc};
use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::headline::CanonicalUrl;

pub const LOG_FILE: &str = "votes.log";
pub const SNAPSHOT_FILE: &str = "votes.snapshot.json";
pub const DEFAULT_SNAPSHOT_EVERY: usize = 1_000;

#[derive(Debug, Error)]
pub enum VoteError {
    #[error("installation already has an active vote for this URL")]
    AlreadyVoted,
    #[error("installation has no active vote for this URL")]
    NotVoted,
    #[error("the tally is only visible after voting")]
    NotVotedYet,
    #[error("invalid installation id {0:?}: expected 32 hex characters")]
    InvalidInstallation(String),
    #[error("invalid vote value {0:?}: expected fake, mixed or true")]
    InvalidValue(String),
    #[error("corrupt vote log at line {line}: {reason}")]
    CorruptLog { line: usize, reason: String },
    #[error("corrupt vote snapshot: {0}")]
    CorruptSnapshot(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> VoteError + '_ {
    move |source| VoteError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VoteValue {
    Fake,
    Mixed,
    True,
}

impl VoteValue {
    pub const ALL: [VoteValue; 3] = [VoteValue::Fake, VoteValue::Mixed, VoteValue::True];

    pub fn as_str(self) -> &'static str {
        match self {
            VoteValue::Fake => "fake",
            VoteValue::Mixed => "mixed",
            VoteValue::True => "true",
        }
    }
}

impl fmt::Display for VoteValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VoteValue {
    type Err = VoteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VoteValue::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| VoteError::InvalidValue(s.to_string()))
    }
}

/// 128-bit client token, stored as 32 lowercase hex characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct InstallationId(String);

impl InstallationId {
    pub fn random() -> Self {
        let mut bytes = [0u8; 16];
        rand::rng().fill_bytes(&mut bytes);
        Self(hex::encode(bytes))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for InstallationId {
    type Err = VoteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() == 32 && s.bytes().all(|b| b.is_ascii_hexdigit()) {
            Ok(Self(s.to_ascii_lowercase()))
        } else {
            Err(VoteError::InvalidInstallation(s.to_string()))
        }
    }
}

impl TryFrom<String> for InstallationId {
    type Error = VoteError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<InstallationId> for String {
    fn from(id: InstallationId) -> String {
        id.0
    }
}

impl fmt::Display for InstallationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteTally {
    pub fake: u64,
    pub mixed: u64,
    #[serde(rename = "true")]
    pub true_: u64,
}

impl VoteTally {
    fn slot(&mut self, value: VoteValue) -> &mut u64 {
        match value {
            VoteValue::Fake => &mut self.fake,
            VoteValue::Mixed => &mut self.mixed,
            VoteValue::True => &mut self.true_,
        }
    }

    pub fn count(&self, value: VoteValue) -> u64 {
        match value {
            VoteValue::Fake => self.fake,
            VoteValue::Mixed => self.mixed,
            VoteValue::True => self.true_,
        }
    }

    pub fn total(&self) -> u64 {
        self.fake + self.mixed + self.true_
    }

    fn add(&mut self, value: VoteValue) {
        *self.slot(value) += 1;
    }

    fn remove(&mut self, value: VoteValue) {
        let slot = self.slot(value);
        *slot = slot.checked_sub(1).expect("tally never goes negative");
    }

    /// Tally recomputed from a set of active votes.
    pub fn recount<'a>(values: impl IntoIterator<Item = &'a VoteValue>) -> Self {
        let mut tally = Self::default();
        for v in values {
            tally.add(*v);
        }
        tally
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteRecord {
    pub url: CanonicalUrl,
    pub installation: InstallationId,
    pub value: VoteValue,
    pub cast_at: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ActiveVote {
    value: VoteValue,
    cast_at: String,
}

#[derive(Debug, Default)]
struct UrlVotes {
    active: BTreeMap<InstallationId, ActiveVote>,
    tally: VoteTally,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum LogOp {
    Cast,
    Revoke,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct LogRecord {
    seq: u64,
    op: LogOp,
    url: CanonicalUrl,
    installation: InstallationId,
    value: Option<VoteValue>,
    timestamp: String,
}

type VoteMap = BTreeMap<CanonicalUrl, BTreeMap<InstallationId, ActiveVote>>;

#[derive(Debug, Serialize, Deserialize)]
struct SnapshotVote {
    url: CanonicalUrl,
    installation: InstallationId,
    value: VoteValue,
    cast_at: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Snapshot {
    last_seq: u64,
    tallies: BTreeMap<CanonicalUrl, VoteTally>,
    votes: Vec<SnapshotVote>,
}

impl Snapshot {
    fn from_map(last_seq: u64, map: &VoteMap) -> Self {
        let mut tallies = BTreeMap::new();
        let mut votes = Vec::new();
        for (url, active) in map {
            if active.is_empty() {
                continue;
            }
            tallies.insert(url.clone(), VoteTally::recount(active.values().map(|a| &a.value)));
            for (installation, vote) in active {
                votes.push(SnapshotVote {
                    url: url.clone(),
                    installation: installation.clone(),
                    value: vote.value,
                    cast_at: vote.cast_at.clone(),
                });
            }
        }
        Snapshot {
            last_seq,
            tallies,
            votes,
        }
    }

    fn into_map(self) -> Result<VoteMap, VoteError> {
        let mut map = VoteMap::new();
        for v in self.votes {
            let previous = map.entry(v.url.clone()).or_default().insert(
                v.installation,
                ActiveVote {
                    value: v.value,
                    cast_at: v.cast_at,
                },
            );
            if previous.is_some() {
                return Err(VoteError::CorruptSnapshot(format!("duplicate active vote at {}", v.url)));
            }
        }
        let recounted: BTreeMap<CanonicalUrl, VoteTally> = map
            .iter()
            .map(|(u, a)| (u.clone(), VoteTally::recount(a.values().map(|v| &v.value))))
            .collect();
        if recounted != self.tallies {
            return Err(VoteError::CorruptSnapshot("tallies disagree with active votes".into()));
        }
        Ok(map)
    }
}

// Applies a log record to the committed map; the caller validated it.
fn apply(map: &mut VoteMap, record: &LogRecord) -> Result<(), String> {
    let active = map.entry(record.url.clone()).or_default();
    match record.op {
        LogOp::Cast => {
            let value = record.value.ok_or("cast without a value")?;
            if active.contains_key(&record.installation) {
                return Err("cast over an active vote".into());
            }
            active.insert(
                record.installation.clone(),
                ActiveVote {
                    value,
                    cast_at: record.timestamp.clone(),
                },
            );
        }
        LogOp::Revoke => {
            if active.remove(&record.installation).is_none() {
                return Err("revoke without an active vote".into());
            }
        }
    }
    if active.is_empty() {
        map.remove(&record.url);
    }
    Ok(())
}

struct Journal {
    file: File,
    path: PathBuf,
    snapshot_path: PathBuf,
    next_seq: u64,
    since_snapshot: usize,
    snapshot_every: usize,
    committed: VoteMap,
}

impl Journal {
    fn append(&mut self, op: LogOp, url: &CanonicalUrl, installation: &InstallationId, value: Option<VoteValue>) -> Result<LogRecord, VoteError> {
        let record = LogRecord {
            seq: self.next_seq,
            op,
            url: url.clone(),
            installation: installation.clone(),
            value,
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
        };
        let mut line = serde_json::to_vec(&record).expect("log record serializes");
        line.push(b'\n');
        self.file.write_all(&line).map_err(io_err(&self.path))?;
        self.file.sync_data().map_err(io_err(&self.path))?;
        self.next_seq += 1;
        apply(&mut self.committed, &record).expect("validated under the url lock");
        self.since_snapshot += 1;
        if self.snapshot_every > 0 && self.since_snapshot >= self.snapshot_every {
            self.snapshot()?;
        }
        Ok(record)
    }

    fn snapshot(&mut self) -> Result<(), VoteError> {
        let snap = Snapshot::from_map(self.next_seq.saturating_sub(1), &self.committed);
        let tmp = self.snapshot_path.with_extension("json.tmp");
        {
            let mut f = File::create(&tmp).map_err(io_err(&tmp))?;
            serde_json::to_writer(&mut f, &snap).expect("snapshot serializes");
            f.write_all(b"\n").map_err(io_err(&tmp))?;
            f.sync_all().map_err(io_err(&tmp))?;
        }
        fs::rename(&tmp, &self.snapshot_path).map_err(io_err(&self.snapshot_path))?;
        self.file.set_len(0).map_err(io_err(&self.path))?;
        self.file.seek(SeekFrom::Start(0)).map_err(io_err(&self.path))?;
        self.file.sync_all().map_err(io_err(&self.path))?;
        self.since_snapshot = 0;
        Ok(())
    }
}

/// Vote store over a data directory. Share it behind an `Arc`.
pub struct VoteStore {
    dir: PathBuf,
    urls: Mutex<HashMap<CanonicalUrl, Arc<Mutex<UrlVotes>>>>,
    journal: Mutex<Journal>,
}

impl fmt::Debug for VoteStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VoteStore").field("dir", &self.dir).finish()
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

impl VoteStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, VoteError> {
        Self::open_with(dir, DEFAULT_SNAPSHOT_EVERY)
    }

    /// Opens (or creates) a store. `snapshot_every == 0` disables automatic
    /// snapshots.
    pub fn open_with(dir: impl AsRef<Path>, snapshot_every: usize) -> Result<Self, VoteError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let snapshot_path = dir.join(SNAPSHOT_FILE);
        let log_path = dir.join(LOG_FILE);

        let (mut committed, last_seq) = match fs::read_to_string(&snapshot_path) {
            Ok(raw) => {
                let snap: Snapshot = serde_json::from_str(&raw)
                    .map_err(|e| VoteError::CorruptSnapshot(e.to_string()))?;
                let last_seq = snap.last_seq;
                (snap.into_map()?, Some(last_seq))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => (VoteMap::new(), None),
            Err(e) => return Err(io_err(&snapshot_path)(e)),
        };

        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&log_path)
            .map_err(io_err(&log_path))?;
        let (good_len, max_seq) = replay(&file, &log_path, last_seq, &mut committed)?;
        if good_len < file.metadata().map_err(io_err(&log_path))?.len() {
            tracing::warn!(path = %log_path.display(), "dropping torn trailing log record");
            file.set_len(good_len).map_err(io_err(&log_path))?;
        }
        file.seek(SeekFrom::End(0)).map_err(io_err(&log_path))?;

        let next_seq = max_seq.or(last_seq).map_or(1, |s| s + 1);
        let urls = committed
            .iter()
            .map(|(url, active)| {
                let votes = UrlVotes {
                    tally: VoteTally::recount(active.values().map(|a| &a.value)),
                    active: active.clone(),
                };
                (url.clone(), Arc::new(Mutex::new(votes)))
            })
            .collect();
        Ok(Self {
            dir,
            urls: Mutex::new(urls),
            journal: Mutex::new(Journal {
                file,
                path: log_path,
                snapshot_path,
                next_seq,
                since_snapshot: 0,
                snapshot_every,
                committed,
            }),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry(&self, url: &CanonicalUrl) -> Arc<Mutex<UrlVotes>> {
        lock(&self.urls).entry(url.clone()).or_default().clone()
    }

    fn existing(&self, url: &CanonicalUrl) -> Option<Arc<Mutex<UrlVotes>>> {
        lock(&self.urls).get(url).cloned()
    }

    /// Records a vote; it is on disk before this returns.
    pub fn cast_vote(
        &self,
        installation: &InstallationId,
        url: &CanonicalUrl,
        value: VoteValue,
    ) -> Result<VoteRecord, VoteError> {
        let entry = self.entry(url);
        let mut votes = lock(&entry);
        if votes.active.contains_key(installation) {
            return Err(VoteError::AlreadyVoted);
        }
        let record = lock(&self.journal).append(LogOp::Cast, url, installation, Some(value))?;
        votes.active.insert(
            installation.clone(),
            ActiveVote {
                value,
                cast_at: record.timestamp.clone(),
            },
        );
        votes.tally.add(value);
        Ok(VoteRecord {
            url: url.clone(),
            installation: installation.clone(),
            value,
            cast_at: record.timestamp,
        })
    }

    /// Removes the installation's active vote; it may vote again afterwards.
    pub fn revoke_vote(&self, installation: &InstallationId, url: &CanonicalUrl) -> Result<VoteValue, VoteError> {
        let entry = self.existing(url).ok_or(VoteError::NotVoted)?;
        let mut votes = lock(&entry);
        let value = votes.active.get(installation).ok_or(VoteError::NotVoted)?.value;
        lock(&self.journal).append(LogOp::Revoke, url, installation, None)?;
        votes.active.remove(installation);
        votes.tally.remove(value);
        Ok(value)
    }

    /// The tally, visible only to installations with an active vote here.
    pub fn get_tally(&self, installation: &InstallationId, url: &CanonicalUrl) -> Result<VoteTally, VoteError> {
        let entry = self.existing(url).ok_or(VoteError::NotVotedYet)?;
        let votes = lock(&entry);
        if !votes.active.contains_key(installation) {
            return Err(VoteError::NotVotedYet);
        }
        Ok(votes.tally)
    }

    pub fn has_voted(&self, installation: &InstallationId, url: &CanonicalUrl) -> Option<VoteValue> {
        let entry = self.existing(url)?;
        let votes = lock(&entry);
        votes.active.get(installation).map(|a| a.value)
    }

    /// Maintained tallies for every URL with at least one active vote.
    pub fn tallies(&self) -> BTreeMap<CanonicalUrl, VoteTally> {
        let entries: Vec<_> = lock(&self.urls).iter().map(|(u, e)| (u.clone(), e.clone())).collect();
        entries
            .into_iter()
            .filter_map(|(url, e)| {
                let t = lock(&e).tally;
                (t.total() > 0).then_some((url, t))
            })
            .collect()
    }

    /// All active votes, ordered by URL then installation.
    pub fn active_votes(&self) -> Vec<VoteRecord> {
        let entries: Vec<_> = lock(&self.urls).iter().map(|(u, e)| (u.clone(), e.clone())).collect();
        let mut out: Vec<VoteRecord> = entries
            .into_iter()
            .flat_map(|(url, e)| {
                lock(&e)
                    .active
                    .iter()
                    .map(|(i, a)| VoteRecord {
                        url: url.clone(),
                        installation: i.clone(),
                        value: a.value,
                        cast_at: a.cast_at.clone(),
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        out.sort_by(|a, b| (&a.url, &a.installation).cmp(&(&b.url, &b.installation)));
        out
    }

    /// Tallies recomputed from the active vote records.
    pub fn recount(&self) -> BTreeMap<CanonicalUrl, VoteTally> {
        let mut out: BTreeMap<CanonicalUrl, VoteTally> = BTreeMap::new();
        for record in self.active_votes() {
            out.entry(record.url).or_default().add(record.value);
        }
        out
    }

    /// Writes a snapshot now and truncates the log.
    pub fn snapshot(&self) -> Result<(), VoteError> {
        lock(&self.journal).snapshot()
    }
}

// Replays log records newer than `after_seq`. Returns the byte length of the
// well-formed prefix and the highest sequence number seen.
fn replay(
    file: &File,
    path: &Path,
    after_seq: Option<u64>,
    map: &mut VoteMap,
) -> Result<(u64, Option<u64>), VoteError> {
    let mut reader = BufReader::new(file);
    let mut good_len = 0u64;
    let mut max_seq = None;
    let mut line_no = 0;
    let mut buf = String::new();
    loop {
        buf.clear();
        let n = reader.read_line(&mut buf).map_err(io_err(path))?;
        if n == 0 {
            break;
        }
        line_no += 1;
        // an unterminated last line is a write torn by a crash
        if !buf.ends_with('\n') {
            break;
        }
        let record: LogRecord =
            serde_json::from_str(buf.trim_end()).map_err(|e| VoteError::CorruptLog {
                line: line_no,
                reason: e.to_string(),
            })?;
        good_len += n as u64;
        if max_seq.is_some_and(|m| record.seq <= m) {
            return Err(VoteError::CorruptLog {
                line: line_no,
                reason: format!("sequence {} out of order", record.seq),
            });
        }
        max_seq = Some(record.seq);
        if after_seq.is_some_and(|s| record.seq <= s) {
            continue;
        }
        apply(map, &record).map_err(|reason| VoteError::CorruptLog { line: line_no, reason })?;
    }
    Ok((good_len, max_seq))
}
