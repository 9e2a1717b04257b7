use crate::failure::Usage;
use anyhow::{Context, Result};
use serde::Serialize;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// A write-once output directory. Each file may be created exactly once and
/// `manifest.json` is written last.
pub struct RunDir {
    root: PathBuf,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    status: &'a str,
    error: Option<&'a str>,
    threads: usize,
    config: &'a C,
    outputs: &'a [String],
}

impl RunDir {
    pub fn create(root: &Path) -> Result<Self> {
        if root.exists() {
            let occupied = fs::read_dir(root).with_context(|| format!("reading {}", root.display()))?.next().is_some();
            if occupied {
                return Err(Usage(format!("run directory {} is not empty", root.display())).into());
            }
        }
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(Self { root: root.to_path_buf(), outputs: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&mut self, name: &str, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
        let path = self.path(name);
        let file = File::options()
            .write(true)
            .create_new(true)
            .open(&path)
            .with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        body(&mut w).and_then(|()| w.flush()).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(name.to_owned());
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)
        })
    }

    /// Records the resolved configuration and the list of outputs.
    pub fn finish<C: Serialize>(mut self, command: &str, config: &C, error: Option<&str>) -> Result<()> {
        let outputs = std::mem::take(&mut self.outputs);
        let manifest = Manifest {
            tool: "cylnlw",
            version: env!("CARGO_PKG_VERSION"),
            command,
            status: if error.is_some() { "partial" } else { "complete" },
            error,
            threads: rayon::current_num_threads(),
            config,
            outputs: &outputs,
        };
        self.write_json("manifest.json", &manifest)
    }
}
