//! JSON checkpoint files for resumable searches.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use polybase::search::SearchCheckpoint;
use polybase::Natural;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// On-disk form of [`SearchCheckpoint`]; `largest_found` is a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointFile {
    pub spec_digest: String,
    pub prefix_stack: Vec<(u32, u32)>,
    pub members_found: u64,
    pub largest_found: Option<String>,
    pub elapsed_nodes: u64,
}

impl From<&SearchCheckpoint> for CheckpointFile {
    fn from(ck: &SearchCheckpoint) -> Self {
        CheckpointFile {
            spec_digest: ck.spec_digest.clone(),
            prefix_stack: ck.prefix_stack.clone(),
            members_found: ck.members_found,
            largest_found: ck.largest_found.as_ref().map(|n| n.to_string()),
            elapsed_nodes: ck.elapsed_nodes,
        }
    }
}

impl CheckpointFile {
    pub fn to_checkpoint(&self) -> CliResult<SearchCheckpoint> {
        let largest_found = match &self.largest_found {
            None => None,
            Some(s) => Some(
                s.parse::<Natural>()
                    .map_err(|_| CliError::invalid(format!("checkpoint largest-found {s:?} is not a natural")))?,
            ),
        };
        Ok(SearchCheckpoint {
            spec_digest: self.spec_digest.clone(),
            prefix_stack: self.prefix_stack.clone(),
            members_found: self.members_found,
            largest_found,
            elapsed_nodes: self.elapsed_nodes,
        })
    }

    pub fn is_exhausted(&self) -> bool {
        self.prefix_stack.is_empty() && self.elapsed_nodes > 0
    }
}

pub fn read(path: &Path) -> CliResult<CheckpointFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read checkpoint {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("malformed checkpoint {}: {e}", path.display())))
}

/// Writes through a sibling temporary file and a rename, so a reader never
/// sees a partial document.
pub fn write(path: &Path, ck: &SearchCheckpoint) -> CliResult<()> {
    let body = serde_json::to_string_pretty(&CheckpointFile::from(ck)).map_err(|e| CliError::runtime(e.to_string()))?;
    let tmp = tmp_path(path);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}
