//! Shared plumbing for the acceptance gate: verdict lines and building the
//! `sacs` binary for the command-line checks.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;

/// Outcome of one acceptance criterion, made of named sub-checks.
#[derive(Debug, Default)]
pub struct Verdict {
    checks: Vec<(String, bool)>,
}

impl Verdict {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a sub-check and returns whether it held.
    pub fn check(&mut self, pass: bool, what: impl Into<String>) -> bool {
        self.checks.push((what.into(), pass));
        pass
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|(_, ok)| *ok)
    }

    /// One `PASS`/`FAIL` line followed by the failing sub-checks, or a
    /// summary of the passing ones.
    pub fn render(&self, id: &str, title: &str) -> String {
        let mut out = String::new();
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} criterion {id}: {title}");
        for (what, ok) in &self.checks {
            let mark = if *ok { "ok  " } else { "MISS" };
            let _ = writeln!(out, "    {mark} {what}");
        }
        out
    }
}

/// Binomial standard error `sqrt(p (1-p) / n)`.
pub fn binomial_se(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Builds the `sacs` binary and returns its path in the shared target
/// directory. Test executables live in `target/<profile>/deps`, the binary
/// one level up.
pub fn sacs_binary() -> Result<PathBuf, String> {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/Cargo.toml");
    let status = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "sacs", "--bin", "sacs", "--manifest-path"])
        .arg(&manifest)
        .status()
        .map_err(|e| format!("cannot run cargo: {e}"))?;
    if !status.success() {
        return Err(format!("cargo build of sacs failed: {status}"));
    }
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let profile_dir = exe
        .parent()
        .and_then(Path::parent)
        .ok_or("test executable has no profile directory")?;
    let bin = profile_dir.join(format!("sacs{}", std::env::consts::EXE_SUFFIX));
    if bin.is_file() {
        Ok(bin)
    } else {
        Err(format!("{} not found", bin.display()))
    }
}
