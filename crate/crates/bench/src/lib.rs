//! Shared inputs for the criterion benchmarks.

use std::path::{Path, PathBuf};

/// A bundled corpus fixture (`mini` or `release`).
pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}
