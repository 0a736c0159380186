//! Run manifest: every subcommand leaves a `manifest.json` in its output
//! directory recording the tool version, the exact flags, and content
//! hashes of the inputs, so a run can be matched to what produced it.
//!
//! Manifests contain no timestamps and no absolute paths: two runs of the
//! same command on the same inputs serialize byte-identically.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use cogspeech_core::harness::HarnessError;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL_NAME: &str = "cogspeech";

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Flag name → rendered value, including defaulted flags.
    pub flags: BTreeMap<String, String>,
    /// Input label → sha256 of its content (files hashed directly,
    /// directories as a sorted tree hash).
    pub inputs: BTreeMap<String, String>,
    /// Files written into the run directory, relative paths.
    pub outputs: Vec<String>,
    /// Relative path → sha256 for generated corpora.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub files: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_lambda_path_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_folds: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_selection: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Manifest {
    pub fn new(command: &str) -> Manifest {
        Manifest {
            tool: TOOL_NAME,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            flags: BTreeMap::new(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            files: None,
            alpha_count: None,
            max_lambda_path_len: None,
            inner_folds: None,
            lambda_selection: None,
            seed: None,
        }
    }

    pub fn flag(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.flags.insert(name.to_string(), value.to_string());
        self
    }

    /// Record an input under `label`, hashing the file or directory at
    /// `path`.
    pub fn input(&mut self, label: &str, path: &Path) -> Result<&mut Self, HarnessError> {
        self.inputs.insert(label.to_string(), sha256_path(path)?);
        Ok(self)
    }

    pub fn output(&mut self, name: &str) -> &mut Self {
        self.outputs.push(name.to_string());
        self
    }

    pub fn write(&mut self, dir: &Path) -> Result<(), HarnessError> {
        self.outputs.sort_unstable();
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| HarnessError::Invalid(format!("cannot serialize manifest: {e}")))?;
        let path = dir.join("manifest.json");
        let mut file = fs::File::create(&path)
            .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
        file.write_all(json.as_bytes())?;
        file.write_all(b"\n")?;
        Ok(())
    }
}

/// Content hash of a file, or of a directory as the hash of its sorted
/// `relative-path NUL file-hash NL` listing.
pub fn sha256_path(path: &Path) -> Result<String, HarnessError> {
    let meta = fs::metadata(path)
        .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
    if meta.is_dir() {
        let mut entries = Vec::new();
        collect_files(path, path, &mut entries)?;
        entries.sort_unstable();
        let mut hasher = Sha256::new();
        for rel in entries {
            let file_hash = sha256_file(&path.join(&rel))?;
            hasher.update(rel.as_bytes());
            hasher.update([0]);
            hasher.update(file_hash.as_bytes());
            hasher.update([b'\n']);
        }
        Ok(hex(&hasher.finalize()))
    } else {
        sha256_file(path)
    }
}

pub fn sha256_file(path: &Path) -> Result<String, HarnessError> {
    let mut file = fs::File::open(path)
        .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex(&hasher.finalize()))
}

/// Relative paths (with `/` separators) of every file under `dir`.
pub fn collect_files(root: &Path, dir: &Path, out: &mut Vec<String>) -> Result<(), HarnessError> {
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        if entry.file_type()?.is_dir() {
            collect_files(root, &path, out)?;
        } else {
            let rel = path
                .strip_prefix(root)
                .expect("walk stays under root")
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            out.push(rel);
        }
    }
    Ok(())
}

fn hex(digest: &[u8]) -> String {
    let mut s = String::with_capacity(digest.len() * 2);
    for byte in digest {
        s.push_str(&format!("{byte:02x}"));
    }
    s
}
