//! The pattern bank: transcribed figure matrices keyed by product id
//! (`C3xC4`, `C5xP3`, ...), each star-verified when loaded.

use std::collections::BTreeMap;
use std::path::Path;

use crate::coloring::Violation;
use crate::error::{Error, Result};
use crate::pattern::Pattern;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternBankEntry {
    pub id: String,
    pub pattern: Pattern,
    /// Provenance tag from the file header, e.g. `figure:C3xCn`.
    pub source: String,
    pub verified: bool,
}

/// One cell correction applied on top of a transcribed matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Erratum<'a> {
    pub id: &'a str,
    /// 1-based.
    pub row: usize,
    /// 1-based.
    pub col: usize,
    pub printed: u32,
    pub corrected: u32,
}

#[derive(Debug, Clone, Default)]
pub struct PatternBank {
    entries: BTreeMap<String, PatternBankEntry>,
}

macro_rules! bank_files {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../data/bank/", $id, ".csv")))),*]
    };
}

const BUILTIN: &[(&str, &str)] = bank_files![
    "C3xC4", "C3xC6", "C3xC7", "C3xC9", "C3xC10", "C4xC4", "C4xC5", "C4xC6", "C4xC7", "C4xC11",
    "C5xC4", "C5xC5", "C5xC6", "C5xC7", "C5xC11", "C7xC4", "C7xC5", "C7xC7", "C7xC11", "C11xC11",
    "C3xP3", "C4xP3", "C5xP3", "C7xP3", "C11xP3", "C3xP4", "C3xP5",
];

const BUILTIN_ERRATA: &str = include_str!("../data/bank/errata.csv");

/// The builtin bank with errata applied; panics only if the shipped data is
/// broken, which the test suite rules out.
pub fn builtin_bank() -> PatternBank {
    let files = BUILTIN
        .iter()
        .map(|&(id, text)| (id.to_string(), text.to_string()))
        .collect::<Vec<_>>();
    PatternBank::from_sources(&files, Some(BUILTIN_ERRATA)).expect("builtin bank verifies")
}

/// Builtin matrices exactly as transcribed, before errata.
pub fn builtin_verbatim(id: &str) -> Result<Pattern> {
    let (_, text) = BUILTIN
        .iter()
        .find(|(k, _)| *k == id)
        .ok_or_else(|| Error::UnknownEntry(id.into()))?;
    Ok(Pattern::from_csv(text)?.0)
}

pub fn builtin_errata() -> Vec<Erratum<'static>> {
    parse_errata(BUILTIN_ERRATA).expect("builtin errata parse")
}

/// Loads every `*.csv` in `dir` (id = file stem), applying `errata.csv` if
/// present.
pub fn load_bank(dir: &Path) -> Result<PatternBank> {
    let mut files = Vec::new();
    let mut errata = None;
    let mut paths: Vec<_> = std::fs::read_dir(dir)?.collect::<std::io::Result<Vec<_>>>()?;
    paths.sort_by_key(|e| e.file_name());
    for entry in paths {
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let text = std::fs::read_to_string(&path)?;
        if stem == "errata" {
            errata = Some(text);
        } else {
            files.push((stem, text));
        }
    }
    PatternBank::from_sources(&files, errata.as_deref())
}

pub fn parse_errata(text: &str) -> Result<Vec<Erratum<'_>>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("errata line {}: {line:?}", lineno + 1));
        if fields.len() != 5 {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        out.push(Erratum {
            id: fields[0],
            row: num(fields[1])?,
            col: num(fields[2])?,
            printed: num(fields[3])? as u32,
            corrected: num(fields[4])? as u32,
        });
    }
    Ok(out)
}

/// Applies the errata for `id` to `p`, checking each printed value.
pub fn apply_errata(id: &str, p: &Pattern, errata: &[Erratum<'_>]) -> Result<Pattern> {
    let mut cells = p.cells().to_vec();
    for e in errata.iter().filter(|e| e.id == id) {
        if e.row == 0 || e.col == 0 || e.row > p.rows() || e.col > p.cols() {
            return Err(Error::Parse(format!(
                "erratum for {id} at ({},{}) is out of range",
                e.row, e.col
            )));
        }
        let cell = &mut cells[(e.row - 1) * p.cols() + (e.col - 1)];
        if *cell != e.printed {
            return Err(Error::Parse(format!(
                "erratum for {id} at ({},{}) expects {} but the matrix has {}",
                e.row, e.col, e.printed, cell
            )));
        }
        *cell = e.corrected;
    }
    Pattern::from_cells(p.rows(), p.cols(), cells, p.wrap_rows, p.wrap_cols)
}

impl PatternBank {
    fn from_sources(files: &[(String, String)], errata: Option<&str>) -> Result<Self> {
        let errata = match errata {
            Some(text) => parse_errata(text)?,
            None => Vec::new(),
        };
        let mut bank = PatternBank::default();
        for (id, text) in files {
            let (raw, source) =
                Pattern::from_csv(text).map_err(|e| Error::Parse(format!("{id}: {e}")))?;
            let pattern = apply_errata(id, &raw, &errata)?;
            check_id(id, &pattern)?;
            let source = source.unwrap_or_else(|| "unknown".into());
            bank.insert(PatternBankEntry {
                id: id.clone(),
                pattern,
                source,
                verified: false,
            })?;
        }
        if let Some(e) = errata.iter().find(|e| !bank.entries.contains_key(e.id)) {
            return Err(Error::UnknownEntry(e.id.to_string()));
        }
        Ok(bank)
    }

    /// Adds an entry after star-verifying it.
    pub fn insert(&mut self, mut entry: PatternBankEntry) -> Result<()> {
        let report = entry.pattern.verify();
        if let Some(violation) = report.first_violation() {
            return Err(Error::VerificationFailed {
                what: format!("bank entry {}", entry.id),
                violation,
            });
        }
        entry.verified = true;
        self.entries.insert(entry.id.clone(), entry);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&PatternBankEntry> {
        self.entries
            .get(id)
            .ok_or_else(|| Error::UnknownEntry(id.to_string()))
    }

    pub fn pattern(&self, id: &str) -> Result<&Pattern> {
        Ok(&self.get(id)?.pattern)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PatternBankEntry> {
        self.entries.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

impl std::ops::Index<&str> for PatternBank {
    type Output = PatternBankEntry;

    fn index(&self, id: &str) -> &PatternBankEntry {
        &self.entries[id]
    }
}

/// The id must name the product the pattern colors.
fn check_id(id: &str, p: &Pattern) -> Result<()> {
    let expected = p.family().to_string();
    if expected != id {
        return Err(Error::Parse(format!(
            "bank file {id} holds a pattern for {expected}"
        )));
    }
    Ok(())
}

/// First violation of a pattern, if any.
pub fn pattern_violation(p: &Pattern) -> Option<Violation> {
    p.verify().first_violation()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_required_entries() {
        let bank = builtin_bank();
        assert_eq!(bank.len(), 27);
        for id in [
            "C3xC4", "C3xC6", "C3xC7", "C3xC9", "C3xC10", "C4xC4", "C4xC5", "C4xC6", "C4xC7",
            "C4xC11", "C5xC4", "C5xC5", "C5xC6", "C5xC7", "C5xC11", "C7xC4", "C7xC5", "C7xC7",
            "C7xC11", "C11xC11", "C3xP3", "C4xP3", "C5xP3", "C7xP3", "C11xP3", "C3xP4", "C3xP5",
        ] {
            assert!(bank[id].verified, "{id}");
        }
        assert!(bank.iter().all(|e| e.pattern.verify().is_star));
    }

    #[test]
    fn figure_examples() {
        let bank = builtin_bank();
        assert_eq!(
            bank["C11xC11"].pattern.row(0),
            &[1, 1, 1, 1, 2, 1, 1, 1, 1, 2, 2]
        );
        assert_eq!(bank["C5xP3"].pattern.column(0), vec![1, 2, 1, 1, 3]);
        assert_eq!(
            bank["C3xC4"].pattern.cells(),
            &[1, 1, 1, 1, 3, 2, 2, 3, 5, 4, 4, 5]
        );
        assert_eq!(bank["C3xC4"].source, "figure:C3xCn");
    }

    #[test]
    fn errata_fix_exactly_the_broken_figures() {
        let errata = builtin_errata();
        let mut ids: Vec<&str> = errata.iter().map(|e| e.id).collect();
        ids.dedup();
        assert_eq!(ids, ["C3xC6", "C7xC7", "C7xC11", "C11xC11"]);
        for (id, _) in BUILTIN {
            let verbatim = builtin_verbatim(id).unwrap();
            let broken = ids.contains(id);
            assert_eq!(verbatim.verify().is_star, !broken, "{id}");
        }
    }

    #[test]
    fn printed_c3xc6_witness() {
        let p = builtin_verbatim("C3xC6").unwrap();
        // (2,4)-(0,5)-(2,0)-(1,1): colors 5,2,5,2
        assert_eq!(
            pattern_violation(&p),
            Some(Violation::BicoloredP4([16, 5, 12, 7]))
        );
    }

    #[test]
    fn insert_rejects_invalid() {
        let mut bank = PatternBank::default();
        let p = Pattern::new(
            vec![vec![1, 2, 1, 2], vec![2, 1, 2, 1], vec![1, 1, 1, 1]],
            true,
            true,
        )
        .unwrap();
        let r = bank.insert(PatternBankEntry {
            id: "bad".into(),
            pattern: p,
            source: "test".into(),
            verified: false,
        });
        assert!(matches!(r, Err(Error::VerificationFailed { .. })));
        assert!(bank.is_empty());
    }

    #[test]
    fn errata_errors() {
        let p = builtin_verbatim("C3xC4").unwrap();
        let bad_value = parse_errata("C3xC4,1,1,9,2\n").unwrap();
        assert!(apply_errata("C3xC4", &p, &bad_value).is_err());
        let out_of_range = parse_errata("C3xC4,4,1,1,2\n").unwrap();
        assert!(apply_errata("C3xC4", &p, &out_of_range).is_err());
        assert!(parse_errata("C3xC4,1,1\n").is_err());
    }

    #[test]
    fn load_from_directory() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/bank");
        let loaded = load_bank(&dir).unwrap();
        let builtin = builtin_bank();
        assert_eq!(loaded.len(), builtin.len());
        for e in builtin.iter() {
            assert_eq!(loaded[e.id.as_str()], *e);
        }
    }
}
