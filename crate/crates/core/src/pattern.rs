//! Coloring patterns: `r x s` color matrices standing for colorings of
//! `(P|C)r x (P|C)s`, where vertex `(i, j)` gets entry `[i][j]`.

use std::fmt;

use crate::coloring::{verify, Coloring, VerificationReport};
use crate::error::{Error, Result};
use crate::graph::{build_family, Family, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    /// Row-major entries, all >= 1.
    cells: Vec<u32>,
    /// First factor is a cycle.
    pub wrap_rows: bool,
    /// Second factor is a cycle.
    pub wrap_cols: bool,
}

impl Pattern {
    pub fn new(rows: Vec<Vec<u32>>, wrap_rows: bool, wrap_cols: bool) -> Result<Self> {
        let r = rows.len();
        let s = rows.first().map_or(0, Vec::len);
        if r == 0 || s == 0 {
            return Err(Error::SizeTooSmall(
                "pattern needs at least one row and one column".into(),
            ));
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != s) {
            return Err(Error::Parse(format!(
                "pattern row {} has {} entries, expected {s}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Self::from_cells(r, s, rows.concat(), wrap_rows, wrap_cols)
    }

    pub fn from_cells(
        rows: usize,
        cols: usize,
        cells: Vec<u32>,
        wrap_rows: bool,
        wrap_cols: bool,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 || cells.len() != rows * cols {
            return Err(Error::SizeTooSmall(format!(
                "{rows}x{cols} pattern with {} cells",
                cells.len()
            )));
        }
        if wrap_rows && rows < 3 {
            return Err(Error::WrapTooSmall(rows));
        }
        if wrap_cols && cols < 3 {
            return Err(Error::WrapTooSmall(cols));
        }
        if cells.contains(&0) {
            return Err(Error::InvalidInputColoring(
                "pattern colors are 1-based".into(),
            ));
        }
        Ok(Pattern {
            rows,
            cols,
            cells,
            wrap_rows,
            wrap_cols,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.cells[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn num_colors(&self) -> usize {
        let mut seen: Vec<u32> = self.cells.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// The family pair this pattern colors.
    pub fn family(&self) -> Family {
        let side = |n, wrap| {
            if wrap {
                Family::Cycle(n)
            } else {
                Family::Path(n)
            }
        };
        Family::tensor(
            side(self.rows, self.wrap_rows),
            side(self.cols, self.wrap_cols),
        )
    }

    pub fn product_graph(&self) -> Graph {
        build_family(&self.family()).expect("pattern dimensions satisfy family minimums")
    }

    pub fn to_coloring(&self) -> Coloring {
        Coloring::new(self.cells.clone()).expect("pattern cells are positive")
    }

    /// Reads a row-major coloring of the product back into a pattern.
    pub fn from_coloring(
        rows: usize,
        cols: usize,
        c: &Coloring,
        wrap_rows: bool,
        wrap_cols: bool,
    ) -> Result<Self> {
        if c.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: c.len(),
            });
        }
        Self::from_cells(rows, cols, c.colors().to_vec(), wrap_rows, wrap_cols)
    }

    pub fn verify(&self) -> VerificationReport {
        verify(&self.product_graph(), &self.to_coloring()).expect("sizes agree")
    }

    pub fn transpose(&self) -> Pattern {
        let cells = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Pattern {
            rows: self.cols,
            cols: self.rows,
            cells,
            wrap_rows: self.wrap_cols,
            wrap_cols: self.wrap_rows,
        }
    }

    /// Top-left `rows x cols` window, read periodically when larger than the
    /// pattern. Wrap flags of the window are given explicitly.
    pub fn window(
        &self,
        rows: usize,
        cols: usize,
        wrap_rows: bool,
        wrap_cols: bool,
    ) -> Result<Pattern> {
        let cells = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i % self.rows, j % self.cols))
            .collect();
        Pattern::from_cells(rows, cols, cells, wrap_rows, wrap_cols)
    }

    /// Relabels colors by first occurrence in row-major order.
    pub fn canonical(&self) -> Pattern {
        let c = crate::coloring::canonical_form(&self.to_coloring());
        Pattern {
            cells: c.colors().to_vec(),
            ..self.clone()
        }
    }
}

/// Pattern to (product graph, coloring) with row-major vertex order.
pub fn pattern_to_coloring(p: &Pattern) -> (Graph, Coloring) {
    (p.product_graph(), p.to_coloring())
}

/// Repeats `p` `vert_copies` times downwards and `horiz_copies` times to the
/// right. Wrap flags are kept.
pub fn tile(p: &Pattern, vert_copies: usize, horiz_copies: usize) -> Pattern {
    assert!(
        vert_copies >= 1 && horiz_copies >= 1,
        "tile copies must be positive"
    );
    p.window(
        p.rows * vert_copies,
        p.cols * horiz_copies,
        p.wrap_rows,
        p.wrap_cols,
    )
    .expect("tiling preserves pattern invariants")
}

impl Pattern {
    /// CSV with a `# rows=.. cols=.. wrap_rows=.. wrap_cols=..` header and
    /// an optional `source=<tag>`; LF line endings.
    pub fn to_csv(&self, source: Option<&str>) -> String {
        let mut out = format!(
            "# rows={} cols={} wrap_rows={} wrap_cols={}",
            self.rows, self.cols, self.wrap_rows as u8, self.wrap_cols as u8
        );
        if let Some(tag) = source {
            out.push_str(&format!(" source={tag}"));
        }
        out.push('\n');
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses [`Pattern::to_csv`] output; returns the pattern and its source tag.
    pub fn from_csv(text: &str) -> Result<(Pattern, Option<String>)> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("pattern CSV is empty".into()))?;
        let header = header.strip_prefix('#').ok_or_else(|| {
            Error::Parse("pattern CSV must start with a '# rows=...' header".into())
        })?;
        let (mut rows, mut cols, mut wrap_rows, mut wrap_cols, mut source) =
            (None, None, None, None, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field {field:?}")))?;
            let num = || {
                value
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad value in {field:?}")))
            };
            let flag = || match value {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(Error::Parse(format!("{key} must be 0 or 1"))),
            };
            match key {
                "rows" => rows = Some(num()?),
                "cols" => cols = Some(num()?),
                "wrap_rows" => wrap_rows = Some(flag()?),
                "wrap_cols" => wrap_cols = Some(flag()?),
                "source" => source = Some(value.to_string()),
                _ => return Err(Error::Parse(format!("unknown header field {key:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("header is missing {k}"));
        let (rows, cols) = (
            rows.ok_or_else(|| missing("rows"))?,
            cols.ok_or_else(|| missing("cols"))?,
        );
        let (wrap_rows, wrap_cols) = (
            wrap_rows.ok_or_else(|| missing("wrap_rows"))?,
            wrap_cols.ok_or_else(|| missing("wrap_cols"))?,
        );
        let mut matrix = Vec::with_capacity(rows);
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("row {}: bad entry {t:?}", i + 1)))
                })
                .collect::<Result<Vec<u32>>>()?;
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, header says {cols}",
                    i + 1,
                    row.len()
                )));
            }
            matrix.push(row);
        }
        if matrix.len() != rows {
            return Err(Error::Parse(format!(
                "found {} rows, header says {rows}",
                matrix.len()
            )));
        }
        let p = Pattern::new(matrix, wrap_rows, wrap_cols).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(m),
            other => Error::Parse(other.to_string()),
        })?;
        Ok((p, source))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_star_coloring;

    fn c3xc4() -> Pattern {
        Pattern::new(
            vec![vec![1, 1, 1, 1], vec![3, 2, 2, 3], vec![5, 4, 4, 5]],
            true,
            true,
        )
        .unwrap()
    }

    #[test]
    fn c3xc4_to_coloring() {
        let (g, c) = pattern_to_coloring(&c3xc4());
        assert_eq!(g.n(), 12);
        assert_eq!(g.label().to_string(), "C3xC4");
        assert!(is_star_coloring(&g, &c));
        assert_eq!(c.num_colors(), 5);
    }

    #[test]
    fn single_cell() {
        let p = Pattern::new(vec![vec![1]], false, false).unwrap();
        let (g, c) = pattern_to_coloring(&p);
        assert_eq!((g.n(), g.edge_count()), (1, 0));
        assert_eq!(c.colors(), &[1]);
    }

    #[test]
    fn c3xp3_constant_rows() {
        let p = Pattern::new(vec![vec![1; 3], vec![2; 3], vec![3; 3]], true, false).unwrap();
        assert!(p.verify().is_star);
    }

    #[test]
    fn wrap_too_small() {
        assert!(matches!(
            Pattern::new(vec![vec![1, 2], vec![2, 1]], true, false),
            Err(Error::WrapTooSmall(2))
        ));
        assert!(matches!(
            Pattern::new(vec![vec![1, 2]], false, true),
            Err(Error::WrapTooSmall(2))
        ));
    }

    #[test]
    fn tiling_laws() {
        let p = c3xc4();
        let big = tile(&p, 2, 2);
        assert_eq!((big.rows(), big.cols()), (6, 8));
        assert!(big.verify().is_star);
        assert_eq!(big.num_colors(), 5);
        assert_eq!(tile(&p, 1, 1), p);
        assert_eq!(tile(&tile(&p, 2, 1), 1, 3), tile(&p, 2, 3));
    }

    #[test]
    fn round_trip_through_coloring() {
        let p = tile(&c3xc4(), 1, 2);
        let (_, c) = pattern_to_coloring(&p);
        assert_eq!(Pattern::from_coloring(3, 8, &c, true, true).unwrap(), p);
    }

    #[test]
    fn transpose_is_involution_and_keeps_validity() {
        let p = c3xc4();
        let t = p.transpose();
        assert_eq!((t.rows(), t.cols()), (4, 3));
        assert_eq!(t.transpose(), p);
        assert!(t.verify().is_star);
    }

    #[test]
    fn csv_round_trip() {
        let p = c3xc4();
        let text = p.to_csv(Some("demo"));
        assert_eq!(
            text,
            "# rows=3 cols=4 wrap_rows=1 wrap_cols=1 source=demo\n1,1,1,1\n3,2,2,3\n5,4,4,5\n"
        );
        assert_eq!(
            Pattern::from_csv(&text).unwrap(),
            (p.clone(), Some("demo".into()))
        );
        assert_eq!(Pattern::from_csv(&p.to_csv(None)).unwrap().1, None);
    }

    #[test]
    fn csv_errors() {
        assert!(Pattern::from_csv("").is_err());
        assert!(Pattern::from_csv("1,2\n").is_err());
        assert!(Pattern::from_csv("# rows=1 cols=3 wrap_rows=0 wrap_cols=0\n1,2\n").is_err());
        assert!(Pattern::from_csv("# rows=2 cols=2 wrap_rows=0 wrap_cols=0\n1,2\n").is_err());
        assert!(Pattern::from_csv("# rows=1 cols=2 wrap_rows=0 wrap_cols=0\n1,x\n").is_err());
        assert!(Pattern::from_csv("# rows=1 cols=2 wrap_rows=2 wrap_cols=0\n1,2\n").is_err());
    }
}
