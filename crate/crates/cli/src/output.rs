//! Output plumbing: stdout or file, deterministic serialization.

use gausspf::{Error, Result};
use std::io::Write;

pub fn emit(text: &str, out: Option<&str>) -> Result<()> {
    match out {
        None => {
            // tolerate downstream consumers closing the pipe early
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(Error::Validation {
                    reason: format!("cannot write to stdout: {e}"),
                }),
                Ok(()) => Ok(()),
            }
        }
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| Error::Validation {
            reason: format!("cannot write {path}: {e}"),
        }),
    }
}

pub fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Validation {
        reason: format!("cannot read {path}: {e}"),
    })
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Validation {
        reason: format!("serialization failed: {e}"),
    })
}
