//! Reading graphs and colorings from files or inline specs.

use std::path::Path;

use anyhow::{Context, Result};
use starprod::{build_family, Coloring, Family, Graph, Pattern};

use crate::manifest::RunManifest;

/// A spec such as `C3xC4`, or a path to a DIMACS or JSON graph file.
pub fn load_graph(arg: &str, manifest: &mut RunManifest) -> Result<Graph> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        manifest.add_input(path, text.as_bytes());
        let g = if text.trim_start().starts_with('{') {
            Graph::from_json(&text)?
        } else {
            Graph::from_dimacs(&text)?
        };
        return Ok(g);
    }
    let family: Family = arg.parse()?;
    Ok(build_family(&family)?)
}

pub enum ColoringFile {
    Json(Coloring),
    Pattern(Pattern),
}

impl ColoringFile {
    pub fn coloring(&self) -> Coloring {
        match self {
            ColoringFile::Json(c) => c.clone(),
            ColoringFile::Pattern(p) => p.to_coloring(),
        }
    }
}

/// JSON `{"k":..,"colors":[..]}` or a pattern CSV with a `# rows=` header.
pub fn load_coloring(path: &Path, manifest: &mut RunManifest) -> Result<ColoringFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    manifest.add_input(path, text.as_bytes());
    parse_coloring(&text)
}

pub fn parse_coloring(text: &str) -> Result<ColoringFile> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        Ok(ColoringFile::Json(Coloring::from_json(text)?))
    } else {
        Ok(ColoringFile::Pattern(Pattern::from_csv(text)?.0))
    }
}

/// `1,2,1,2` on the command line.
pub fn parse_inline_colors(list: &str) -> Result<Coloring> {
    let colors = list
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| starprod::Error::Parse(format!("bad color {t:?}")))
        })
        .collect::<std::result::Result<Vec<u32>, _>>()?;
    Ok(Coloring::new(colors).map_err(|e| starprod::Error::Parse(e.to_string()))?)
}

/// Accepts plain integers and scientific notation such as `1e8`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => {
            Ok(x as u64)
        }
        _ => Err(format!("{s:?} is not a nonnegative integer")),
    }
}
