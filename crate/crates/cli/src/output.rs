//! CSV assembly and output-path handling.
//!
//! Every CSV starts with a header row naming the columns, followed by a `#`
//! comment line recording the nonlinearity coefficients, sigma and the tool
//! version, so files are self-describing regression fixtures. Numbers carry
//! 17 significant digits.

use std::env;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use solwave_core::CubicParams;

use crate::CliError;

pub const OUT_DIR_ENV: &str = "SOLWAVE_OUT_DIR";

/// 17 significant digits, '.' decimal separator.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// RFC-4180 quoting: only fields containing separators or quotes get wrapped.
pub fn field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str], params: &CubicParams, extras: &[(&str, String)]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        buf.push_str(&format!(
            "# a={} b={} c={} sigma={} version={}",
            num(params.a()),
            num(params.b()),
            num(params.c()),
            num(params.sigma()),
            env!("CARGO_PKG_VERSION"),
        ));
        for (key, value) in extras {
            buf.push_str(&format!(" {key}={value}"));
        }
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, fields: &[String]) {
        let quoted: Vec<String> = fields.iter().map(|f| field(f)).collect();
        self.buf.push_str(&quoted.join(","));
        self.buf.push('\n');
    }

    pub fn contents(&self) -> &str {
        &self.buf
    }
}

/// Resolves a user-supplied path against `SOLWAVE_OUT_DIR` when relative.
pub fn resolve(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes to the resolved path, or to stdout when no path is given.
pub fn write_out(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let target = resolve(p);
            if let Some(parent) = target.parent() {
                if !parent.as_os_str().is_empty() && !parent.exists() {
                    fs::create_dir_all(parent)
                        .map_err(|e| CliError::Io(format!("creating {}: {e}", parent.display())))?;
                }
            }
            fs::write(&target, contents)
                .map_err(|e| CliError::Io(format!("writing {}: {e}", target.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|e| CliError::Io(format!("writing stdout: {e}")))
        }
    }
}
