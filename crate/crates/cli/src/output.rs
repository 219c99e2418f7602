//! Writing results: everything goes to temporary files in the target
//! directory first and is renamed into place only once all of it is ready.

use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::CliError;

pub fn write_atomic(files: &[(PathBuf, String)]) -> Result<(), CliError> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, content) in files {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = NamedTempFile::new_in(dir)
            .map_err(|e| CliError::input(format!("creating temporary file in {}: {e}", dir.display())))?;
        tmp.write_all(content.as_bytes())
            .map_err(|e| CliError::input(format!("writing {}: {e}", path.display())))?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path)
            .map_err(|e| CliError::input(format!("renaming into {}: {e}", path.display())))?;
    }
    Ok(())
}
