//! Files written by the commands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use kummer_core::grid::ScalarField;
use serde::Serialize;

use crate::Failure;

pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(root).map_err(|e| Failure::io(root, e))?;
        Ok(OutDir { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn bytes(&mut self, name: &str, data: &[u8]) -> Result<(), Failure> {
        let p = self.path(name);
        fs::write(&p, data).map_err(|e| Failure::io(&p, e))?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Pretty JSON with a trailing newline; identical inputs give identical bytes.
    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Config(e.to_string()))?;
        text.push('\n');
        self.bytes(name, text.as_bytes())
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut push = |r: &[String]| w.write_record(r).map_err(|e| Failure::Config(e.to_string()));
        push(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
        for r in rows {
            push(r)?;
        }
        let data = w.into_inner().map_err(|e| Failure::Config(e.to_string()))?;
        self.bytes(name, &data)
    }

    /// One JSON header line followed by the values as little-endian `f64`,
    /// last axis fastest.
    pub fn field(&mut self, name: &str, field: &ScalarField) -> Result<(), Failure> {
        let d = &field.domain;
        let header = FieldHeader {
            dims: d.dims,
            spacing: d.spacing,
            lattice: Lattice {
                lower: d.lower,
                periods: std::array::from_fn(|a| d.periodic[a].then(|| d.period(a))),
            },
            symmetry: d.symmetry.clone(),
            dtype: "f64-le",
            order: "row-major",
        };
        let mut data = serde_json::to_vec(&header).map_err(|e| Failure::Config(e.to_string()))?;
        data.push(b'\n');
        data.reserve(8 * field.values.len());
        for v in &field.values {
            data.write_all(&v.to_le_bytes()).expect("writing to a Vec cannot fail");
        }
        self.bytes(name, &data)
    }

    /// Timestamps and invocation details, kept apart so the outputs stay reproducible.
    pub fn sidecar(&mut self, args: &[String], seed: u64, threads: Option<usize>, started: SystemTime) -> Result<(), Failure> {
        let ms = |t: SystemTime| t.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis());
        let meta = RunMeta {
            args: args.to_vec(),
            seed,
            threads,
            version: env!("CARGO_PKG_VERSION"),
            started_unix_ms: ms(started),
            finished_unix_ms: ms(SystemTime::now()),
            outputs: self.written.clone(),
        };
        let mut text = serde_json::to_string_pretty(&meta).map_err(|e| Failure::Config(e.to_string()))?;
        text.push('\n');
        let p = self.path("run.meta.json");
        fs::write(&p, text).map_err(|e| Failure::io(&p, e))
    }
}

#[derive(Serialize)]
struct FieldHeader {
    dims: [usize; 4],
    spacing: [f64; 4],
    lattice: Lattice,
    symmetry: Vec<String>,
    dtype: &'static str,
    order: &'static str,
}

/// Node `i` sits at `lower + (i + ½)·spacing`; periodic axes carry their period.
#[derive(Serialize)]
struct Lattice {
    lower: [f64; 4],
    periods: [Option<f64>; 4],
}

#[derive(Serialize)]
struct RunMeta {
    args: Vec<String>,
    seed: u64,
    threads: Option<usize>,
    version: &'static str,
    started_unix_ms: u128,
    finished_unix_ms: u128,
    outputs: Vec<String>,
}
