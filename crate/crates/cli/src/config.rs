//! Optional TOML configuration. Every value here has a matching
//! command-line flag; an explicitly given flag wins over the file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub inputs: Option<Vec<PathBuf>>,
    pub candidates: Option<PathBuf>,
    pub fixtures: Option<PathBuf>,
    pub records: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub metadata: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub case_sensitive: Option<bool>,
    pub match_across_lines: Option<bool>,
    pub first_commit_only: Option<bool>,
    pub extended_extensions: Option<bool>,
    pub count_logical_operators: Option<bool>,
    pub console_methods: Option<Vec<String>>,
    pub parallelism: Option<usize>,
    pub query_date: Option<String>,
    pub csv: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::input(format!("config {}: {e}", path.display())))
    }
}

/// Flag value if given, else the config value, else the default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn require_path(
    flag: Option<PathBuf>,
    file: Option<PathBuf>,
    what: &str,
) -> Result<PathBuf, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::input(format!("{what} must be given as a flag or in the config")))
}

/// The output directory may not coincide with any input path.
pub fn validate_output_dir(output: &Path, inputs: &[&Path]) -> Result<(), CliError> {
    for input in inputs {
        if same_path(output, input) {
            return Err(CliError::input(format!(
                "output directory {} equals input path {}",
                output.display(),
                input.display()
            )));
        }
    }
    Ok(())
}

fn same_path(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(a), Ok(b)) => a == b,
        _ => a == b,
    }
}

pub fn validate_parallelism(parallelism: usize) -> Result<usize, CliError> {
    if parallelism == 0 {
        return Err(CliError::input("parallelism must be at least 1"));
    }
    Ok(parallelism)
}
