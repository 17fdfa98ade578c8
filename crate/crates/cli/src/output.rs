use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::error::CliError;

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let context = || format!("writing {}", path.display());
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(context(), e))?;
    tmp.write_all(contents)
        .map_err(|e| CliError::io(context(), e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(context(), e))?;
    tmp.persist(path)
        .map_err(|e| CliError::io(context(), e.error))?;
    Ok(())
}
