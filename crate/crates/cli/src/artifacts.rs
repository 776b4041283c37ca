//! Output files. Every CSV and plot file opens with a `#` line carrying the
//! software version and config hash; JSON files wrap their payload in an
//! object with the same two fields.

use anyhow::{Context, Result};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

use crate::Failure;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    software: String,
    config_hash: &'a str,
    result: &'a T,
}

struct PlotEntry {
    file: String,
    title: String,
    xlabel: String,
    ylabel: String,
    log_axes: bool,
}

pub struct Artifacts {
    dir: PathBuf,
    hash: String,
    written: Vec<PathBuf>,
    plots: Vec<PlotEntry>,
}

impl Artifacts {
    pub fn new(dir: &Path, hash: String) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            hash,
            written: Vec::new(),
            plots: Vec::new(),
        })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    fn header(&self) -> String {
        format!("# dilab {VERSION} config={}\n", self.hash)
    }

    fn put(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    /// Writes a CSV whose body comes from one of the core `write_csv` methods.
    pub fn csv<F>(&mut self, name: &str, body: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> dilab_core::Result<()>,
    {
        let mut buf = self.header().into_bytes();
        body(&mut buf)?;
        self.put(name, &buf)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let env = Envelope {
            software: format!("dilab {VERSION}"),
            config_hash: &self.hash,
            result: value,
        };
        let mut s = serde_json::to_string_pretty(&env)?;
        s.push('\n');
        self.put(name, s.as_bytes())
    }

    /// Two-column `x y` file for plotting; refuses empty data.
    pub fn plot(
        &mut self,
        stem: &str,
        title: &str,
        (xlabel, ylabel): (&str, &str),
        rows: &[(f64, f64)],
        log_axes: bool,
    ) -> Result<()> {
        if rows.is_empty() {
            return Err(Failure::Numerical(format!("no data to plot for {stem}")).into());
        }
        let mut s = self.header();
        s.push_str(&format!("# {title}\n# {xlabel} {ylabel}\n"));
        for (x, y) in rows {
            s.push_str(&format!("{x:.17e} {y:.17e}\n"));
        }
        let file = format!("{stem}.dat");
        self.put(&file, s.as_bytes())?;
        self.plots.push(PlotEntry {
            file,
            title: title.to_string(),
            xlabel: xlabel.to_string(),
            ylabel: ylabel.to_string(),
            log_axes,
        });
        Ok(())
    }

    /// Writes the gnuplot stub for the plot files and returns every path written.
    pub fn finish(mut self) -> Result<Vec<PathBuf>> {
        if !self.plots.is_empty() {
            let mut s = self.header();
            for p in &self.plots {
                s.push_str(&format!(
                    "\nset title \"{}\"\nset xlabel \"{}\"\nset ylabel \"{}\"\n{}plot \"{}\" using 1:2 with linespoints notitle\npause -1\n",
                    p.title,
                    p.xlabel,
                    p.ylabel,
                    if p.log_axes { "set logscale xy\n" } else { "unset logscale\n" },
                    p.file,
                ));
            }
            self.put("plot.gp", s.as_bytes())?;
        }
        Ok(self.written)
    }
}
