//! Run manifests: what went in, what came out, with which seed.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &str, content: &[u8]) -> Self {
        FileDigest { path: path.to_string(), bytes: content.len() as u64, sha256: hex::encode(Sha256::digest(content)) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub format_version: String,
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

/// Collects inputs and outputs of one subcommand and writes everything under
/// a single output directory.
#[derive(Debug)]
pub struct Run {
    out_dir: PathBuf,
    manifest: Manifest,
}

impl Run {
    pub fn new(out_dir: &Path, subcommand: &str, args: Vec<String>, seed: u64) -> Self {
        Run {
            out_dir: out_dir.to_path_buf(),
            manifest: Manifest {
                tool: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                format_version: crate::taxonomy_io::FORMAT_VERSION.to_string(),
                subcommand: subcommand.to_string(),
                args,
                seed,
                inputs: Vec::new(),
                outputs: Vec::new(),
            },
        }
    }

    pub fn read(&mut self, path: &Path) -> io::Result<String> {
        let bytes = fs::read(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        self.manifest.inputs.push(FileDigest::of(&path.display().to_string(), &bytes));
        String::from_utf8(bytes)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{}: {e}", path.display())))
    }

    pub fn write(&mut self, name: &str, content: &str) -> io::Result<()> {
        fs::create_dir_all(&self.out_dir)?;
        fs::write(self.out_dir.join(name), content)?;
        self.manifest.outputs.push(FileDigest::of(name, content.as_bytes()));
        Ok(())
    }

    /// Writes `manifest_<subcommand>.json` and returns the manifest.
    pub fn finish(self) -> io::Result<Manifest> {
        fs::create_dir_all(&self.out_dir)?;
        let mut text = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        text.push('\n');
        fs::write(self.out_dir.join(format!("manifest_{}.json", self.manifest.subcommand)), text)?;
        Ok(self.manifest)
    }
}
