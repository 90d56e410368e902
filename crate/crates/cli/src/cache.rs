use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tofsynth::genset::generate_gen_set;
use tofsynth::{GenMode, GenSet};

use crate::CliError;

const FORMAT: &str = "tofsynth-genset";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    n: usize,
    mode: GenMode,
    set: GenSet,
}

pub fn path_for(dir: &Path, n: usize, mode: GenMode) -> PathBuf {
    dir.join(format!("genset-n{n}-{mode}.json"))
}

fn load(path: &Path, n: usize, mode: GenMode) -> Option<GenSet> {
    let text = std::fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    let ok = file.format == FORMAT
        && file.version == VERSION
        && file.n == n
        && file.mode == mode
        && file.set.n == n
        && file.set.mode == mode;
    if !ok {
        log::info!("cache {} is stale, regenerating", path.display());
        return None;
    }
    Some(file.set)
}

/// Generating set for `(n, mode)`, read from the cache or generated and
/// stored. A cache that cannot be written is only a warning.
pub fn gen_set(dir: &Path, n: usize, mode: GenMode) -> Result<(GenSet, PathBuf), CliError> {
    if n < 3 {
        return Err(CliError::Usage("no generators for n<3".into()));
    }
    let path = path_for(dir, n, mode);
    if let Some(set) = load(&path, n, mode) {
        log::info!("loaded {} generators from {}", set.len(), path.display());
        return Ok((set, path));
    }
    let set = generate_gen_set(n, mode).map_err(CliError::from)?;
    let file = CacheFile {
        format: FORMAT.into(),
        version: VERSION,
        n,
        mode,
        set,
    };
    let stored = std::fs::create_dir_all(dir)
        .and_then(|_| std::fs::write(&path, serde_json::to_string(&file).expect("serializable")));
    if let Err(e) = stored {
        log::warn!("cannot write cache {}: {e}", path.display());
    }
    Ok((file.set, path))
}
