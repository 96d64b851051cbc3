//! `<out>.manifest.json`: what ran, with which flags, over which bytes.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

pub fn digest(path: &Path) -> std::io::Result<FileDigest> {
    let bytes = std::fs::read(path)?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes the manifest next to the first output.
pub fn write_manifest(
    subcommand: &str,
    args: &[String],
    seed: Option<u64>,
    inputs: &[&Path],
    outputs: &[&Path],
) -> std::io::Result<()> {
    let Some(first) = outputs.first() else {
        return Ok(());
    };
    let m = RunManifest {
        tool: "designforge",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: subcommand.to_string(),
        args: args.to_vec(),
        seed,
        inputs: inputs.iter().map(|p| digest(p)).collect::<Result<_, _>>()?,
        outputs: outputs
            .iter()
            .map(|p| digest(p))
            .collect::<Result<_, _>>()?,
    };
    let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    text.push('\n');
    std::fs::write(manifest_path(first), text)
}
