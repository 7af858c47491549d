use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Shortest decimal that round-trips to the same `f64`; the same digits
/// serde_json emits, so CSV and JSON agree token for token.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        x.to_string()
    }
}

/// Stdout, or a file that is reported by path on failure.
pub struct Sink {
    path: Option<PathBuf>,
    out: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> CliResult<Sink> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::io(p, e))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink {
            path: path.map(Path::to_path_buf),
            out,
        })
    }

    fn fail(&self, e: io::Error) -> CliError {
        CliError::io(self.path.clone().unwrap_or_else(|| "<stdout>".into()), e)
    }

    pub fn line(&mut self, text: &str) -> CliResult<()> {
        writeln!(self.out, "{text}").map_err(|e| self.fail(e))
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) -> CliResult<()> {
        let joined = cells
            .iter()
            .map(AsRef::as_ref)
            .collect::<Vec<_>>()
            .join(",");
        self.line(&joined)
    }

    pub fn json<V: Serialize>(&mut self, value: &V) -> CliResult<()> {
        let text = serde_json::to_string_pretty(value).expect("reports serialize");
        self.line(&text)
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.out.flush().map_err(|e| self.fail(e))
    }
}
