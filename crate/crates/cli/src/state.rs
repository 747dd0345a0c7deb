use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::Path;

use eudoxus_core::FilterState;

use crate::Failure;

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::usage(format!("state file {}: {e}", path.display()))
}

fn read_state(file: &mut File, path: &Path) -> Result<FilterState, Failure> {
    let mut text = String::new();
    file.read_to_string(&mut text).map_err(|e| io_failure(path, e))?;
    FilterState::import(&text)
        .map_err(|e| Failure::domain(format!("state file {}: {e}", path.display())))
}

/// Loads the state under a shared lock; a missing file is a fresh state.
pub fn load(path: &Path) -> Result<FilterState, Failure> {
    let mut file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(FilterState::new()),
        Err(e) => return Err(io_failure(path, e)),
    };
    file.lock_shared().map_err(|e| io_failure(path, e))?;
    read_state(&mut file, path)
}

/// Runs `f` on the state while holding an exclusive lock, then writes the
/// updated trace back.
pub fn update<T>(path: &Path, f: impl FnOnce(&mut FilterState) -> T) -> Result<T, Failure> {
    let mut file = OpenOptions::new()
        .read(true)
        .write(true)
        .create(true)
        .truncate(false)
        .open(path)
        .map_err(|e| io_failure(path, e))?;
    file.lock().map_err(|e| io_failure(path, e))?;
    let mut state = read_state(&mut file, path)?;
    let out = f(&mut state);
    let text = state.export();
    file.set_len(0).map_err(|e| io_failure(path, e))?;
    file.seek(SeekFrom::Start(0)).map_err(|e| io_failure(path, e))?;
    file.write_all(text.as_bytes()).map_err(|e| io_failure(path, e))?;
    file.sync_all().map_err(|e| io_failure(path, e))?;
    Ok(out)
}
