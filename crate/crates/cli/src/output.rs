use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub parameters: Value,
    pub tool_version: &'static str,
    pub seeds: Vec<u64>,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    manifest: &'a Manifest,
    payload: &'a T,
}

/// Where a command's result goes and in which form.
pub struct Sink {
    pub json: bool,
    pub out: Option<PathBuf>,
    pub started: Instant,
}

impl Sink {
    pub fn emit<T: Serialize>(
        &self,
        command: &'static str,
        parameters: &impl Serialize,
        seeds: Vec<u64>,
        payload: &T,
        text: impl FnOnce() -> String,
    ) -> io::Result<()> {
        let rendered = if self.json {
            let manifest = Manifest {
                command,
                parameters: serde_json::to_value(parameters)?,
                tool_version: env!("CARGO_PKG_VERSION"),
                seeds,
                wall_time_seconds: self.started.elapsed().as_secs_f64(),
                outputs: self.out.iter().map(|p| p.display().to_string()).collect(),
            };
            let mut s = serde_json::to_string_pretty(&Envelope { schema_version: SCHEMA_VERSION, manifest: &manifest, payload })?;
            s.push('\n');
            s
        } else {
            text()
        };
        match &self.out {
            Some(path) => fs::write(path, rendered),
            None => io::stdout().lock().write_all(rendered.as_bytes()),
        }
    }
}
