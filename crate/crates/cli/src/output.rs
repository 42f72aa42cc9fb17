//! Output directory bookkeeping. Every file written by a run is tracked so
//! that a failed run can remove what it produced.

use crate::svg::Plot;
use serde::Serialize;
use slowsound::table::Table;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl std::str::FromStr for Formats {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let mut f = Formats { csv: false, json: false, svg: false };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => return Err(format!("unknown format '{other}' (csv|json|svg)")),
            }
        }
        Ok(f)
    }
}

pub struct Output {
    dir: PathBuf,
    formats: Formats,
    written: Vec<PathBuf>,
    created_dir: bool,
}

impl Output {
    pub fn new(dir: &Path, formats: Formats) -> std::io::Result<Self> {
        let created_dir = !dir.exists();
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), formats, written: Vec::new(), created_dir })
    }

    fn write(&mut self, name: &str, contents: &str) -> std::io::Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)?;
        self.written.push(path);
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: &Table) -> std::io::Result<()> {
        if self.formats.csv {
            self.write(&format!("{name}.csv"), &table.to_csv())?;
        }
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> std::io::Result<()> {
        if self.formats.json {
            self.write_json(name, value)?;
        }
        Ok(())
    }

    /// Written regardless of the selected formats.
    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
        text.push('\n');
        self.write(&format!("{name}.json"), &text)
    }

    pub fn text(&mut self, name: &str, contents: &str) -> std::io::Result<()> {
        self.write(name, contents)
    }

    pub fn svg(&mut self, name: &str, plot: &Plot) -> std::io::Result<()> {
        if self.formats.svg {
            self.write(&format!("{name}.svg"), &plot.render())?;
        }
        Ok(())
    }

    /// File names written so far, in order.
    pub fn files(&self) -> Vec<String> {
        self.written.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).collect()
    }

    /// Removes everything this run wrote.
    pub fn discard(self) {
        for p in &self.written {
            let _ = std::fs::remove_file(p);
        }
        if self.created_dir {
            let _ = std::fs::remove_dir(&self.dir);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_format_lists() {
        let f: Formats = "csv, svg".parse().unwrap();
        assert!(f.csv && f.svg && !f.json);
        assert!("csv,pdf".parse::<Formats>().is_err());
    }
}
