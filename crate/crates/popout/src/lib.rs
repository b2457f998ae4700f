//! File-level tooling around `popout-core`: dataset generation, simulated
//! observers, gaze evaluation, reports and consistency checks.
//!
//! Output tree for one run:
//!
//! ```text
//! out/
//!   config.txt           effective configuration
//!   manifest.json        one entry per stimulus
//!   images/{id}.png      RGB stimulus
//!   masks/{id}_mask.png  AOI mask, 0 or 255
//!   layouts/{id}.json    scene layout
//!   fixations.csv        simulated or supplied fixations
//!   results.csv          per-scanpath metrics
//!   summary.json         medians and correlation tables
//!   temporal.csv         metrics by fixation number
//!   rejects.csv          scanpaths on unknown stimuli
//!   report/              human-readable tables and plot CSVs
//! ```

pub mod config;
pub mod eval;
pub mod gen;
pub mod io;
pub mod manifest;
pub mod report;
pub mod simulate;
pub mod verify;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error(transparent)]
    Core(#[from] popout_core::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, msg: impl ToString) -> Self {
        Error::Format { path: path.into(), msg: msg.to_string() }
    }
}

/// Run `f` on a rayon pool with `jobs` threads, 0 meaning one per core.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
