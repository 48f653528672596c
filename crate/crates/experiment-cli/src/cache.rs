use crate::report::write_atomic;
use geometry_core::TeichPoint;
use std::path::PathBuf;
use torus_quantization::{build_frame, Level, QuantError, QuantumFrame};

/// Environment variable naming the frame cache directory.
pub const CACHE_ENV: &str = "HITCHIN_LAB_CACHE";

fn cache_file(k: usize, tau: TeichPoint, tol: f64) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    let name = format!(
        "frame-k{k}-re{:016x}-im{:016x}-tol{:016x}.json",
        tau.re().to_bits(),
        tau.im().to_bits(),
        tol.to_bits()
    );
    Some(PathBuf::from(dir).join(name))
}

/// A frame at `(k, τ, tol)`. With [`CACHE_ENV`] set, descriptors are read
/// from and written to that directory. A cached descriptor is rebuilt and
/// checked against its stored Gram matrix; an unreadable or stale entry is
/// replaced.
pub fn frame(k: Level, tau: TeichPoint, tol: f64) -> Result<QuantumFrame, QuantError> {
    let Some(path) = cache_file(k.get(), tau, tol) else {
        return build_frame(k, tau, tol);
    };
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(f) = QuantumFrame::from_json(&text) {
            return Ok(f);
        }
    }
    let f = build_frame(k, tau, tol)?;
    if let Some(dir) = path.parent() {
        // A cache that cannot be written is not an error for the run.
        let _ =
            std::fs::create_dir_all(dir).and_then(|_| write_atomic(&path, f.to_json().as_bytes()));
    }
    Ok(f)
}
