//! Growing bank patterns along one axis by concatenating pieces that share
//! a common prefix, and the 2D block layout for large tori.

use serde::{Deserialize, Serialize};

use crate::bank::PatternBank;
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Nonnegative `(alpha, beta)` with `alpha*a + beta*b = k`, taking the
/// smallest `alpha`.
pub fn sylvester_represent(k: usize, a: usize, b: usize) -> Result<(usize, usize)> {
    if a == 0 || b == 0 {
        return Err(Error::Unsupported(
            "sylvester_represent needs a, b >= 1".into(),
        ));
    }
    if gcd(a, b) != 1 {
        return Err(Error::Unsupported(format!("{a} and {b} are not coprime")));
    }
    (0..=k / a)
        .find(|alpha| (k - alpha * a).is_multiple_of(b))
        .map(|alpha| (alpha, (k - alpha * a) / b))
        .ok_or(Error::NotRepresentable { k, a, b })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchPlan {
    pub axis: Axis,
    /// Bank ids with multiplicities, concatenated in this order.
    pub pieces: Vec<(String, usize)>,
    pub overlap_width: usize,
}

impl StitchPlan {
    pub fn new(axis: Axis, pieces: &[(&str, usize)]) -> Self {
        StitchPlan {
            axis,
            pieces: pieces.iter().map(|&(id, k)| (id.to_string(), k)).collect(),
            overlap_width: 3,
        }
    }

    pub fn horizontal(pieces: &[(&str, usize)]) -> Self {
        Self::new(Axis::Horizontal, pieces)
    }

    pub fn vertical(pieces: &[(&str, usize)]) -> Self {
        Self::new(Axis::Vertical, pieces)
    }

    /// Two-piece plan for `k = alpha*len(a) + beta*len(b)`.
    pub fn sylvester(axis: Axis, k: usize, a: (&str, usize), b: (&str, usize)) -> Result<Self> {
        let (alpha, beta) = sylvester_represent(k, a.1, b.1)?;
        Ok(Self::new(axis, &[(a.0, alpha), (b.0, beta)]))
    }
}

/// `C3 x C13` from one `C3xC4` and one `C3xC9`.
pub fn plan_c3xc13() -> StitchPlan {
    StitchPlan::horizontal(&[("C3xC4", 1), ("C3xC9", 1)])
}

/// `C3 x C17` from two `C3xC4` and one `C3xC9`.
pub fn plan_c3xc17() -> StitchPlan {
    StitchPlan::horizontal(&[("C3xC4", 2), ("C3xC9", 1)])
}

/// Executes a plan; the result wraps along the stitch axis and is
/// star-verified before it is returned.
pub fn stitch(plan: &StitchPlan, bank: &PatternBank) -> Result<Pattern> {
    match plan.axis {
        Axis::Horizontal => hstitch(plan, bank),
        Axis::Vertical => vstitch(plan, bank),
    }
}

pub fn hstitch(plan: &StitchPlan, bank: &PatternBank) -> Result<Pattern> {
    if plan.axis != Axis::Horizontal {
        return Err(Error::IncompatiblePieces(
            "hstitch needs a horizontal plan".into(),
        ));
    }
    let pieces = resolve(plan, bank, |p| p.clone())?;
    let out = concat_columns(&pieces, plan.overlap_width)?;
    checked(out, plan)
}

pub fn vstitch(plan: &StitchPlan, bank: &PatternBank) -> Result<Pattern> {
    if plan.axis != Axis::Vertical {
        return Err(Error::IncompatiblePieces(
            "vstitch needs a vertical plan".into(),
        ));
    }
    let pieces = resolve(plan, bank, Pattern::transpose)?;
    let out = concat_columns(&pieces, plan.overlap_width)
        .map_err(|e| match e {
            Error::PrefixMismatch { piece, row, col } => Error::PrefixMismatch {
                piece,
                row: col,
                col: row,
            },
            other => other,
        })?
        .transpose();
    checked(out, plan)
}

fn resolve(
    plan: &StitchPlan,
    bank: &PatternBank,
    orient: impl Fn(&Pattern) -> Pattern,
) -> Result<Vec<(String, Pattern)>> {
    if plan.pieces.iter().all(|&(_, k)| k == 0) {
        return Err(Error::IncompatiblePieces("plan has no pieces".into()));
    }
    let mut out = Vec::new();
    for (id, k) in &plan.pieces {
        let p = orient(bank.pattern(id)?);
        out.extend(std::iter::repeat_n((id.clone(), p), *k));
    }
    Ok(out)
}

/// Side-by-side concatenation after checking that every piece repeats the
/// first piece's leading `overlap` columns.
fn concat_columns(pieces: &[(String, Pattern)], overlap: usize) -> Result<Pattern> {
    let (first_id, first) = &pieces[0];
    for (id, p) in pieces {
        if p.rows() != first.rows() || p.wrap_rows != first.wrap_rows {
            return Err(Error::IncompatiblePieces(format!(
                "{id} has {} rows (wrap {}), {first_id} has {} (wrap {})",
                p.rows(),
                p.wrap_rows,
                first.rows(),
                first.wrap_rows
            )));
        }
        let width = overlap.min(p.cols()).min(first.cols());
        for i in 0..p.rows() {
            if let Some(j) = (0..width).find(|&j| p.get(i, j) != first.get(i, j)) {
                return Err(Error::PrefixMismatch {
                    piece: id.clone(),
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
    }
    let cols: usize = pieces.iter().map(|(_, p)| p.cols()).sum();
    let mut cells = Vec::with_capacity(first.rows() * cols);
    for i in 0..first.rows() {
        for (_, p) in pieces {
            cells.extend_from_slice(p.row(i));
        }
    }
    Pattern::from_cells(first.rows(), cols, cells, first.wrap_rows, true)
}

fn checked(p: Pattern, plan: &StitchPlan) -> Result<Pattern> {
    match p.verify().first_violation() {
        None => Ok(p),
        Some(violation) => Err(Error::VerificationFailed {
            what: format!("stitch plan {:?}", plan.pieces),
            violation,
        }),
    }
}

/// A star 5-coloring of `Cm x Cn` for `m, n >= 12` laid out as a grid of
/// `C{4|5} x C{4|5}` bank blocks; band heights and widths come from
/// [`sylvester_represent`] with parts 4 and 5.
pub fn block_compose(m: usize, n: usize, bank: &PatternBank) -> Result<Pattern> {
    if m < 12 || n < 12 {
        return Err(Error::SizeTooSmall(format!(
            "block composition needs m, n >= 12, got {m}x{n}"
        )));
    }
    let bands = |k| -> Result<Vec<usize>> {
        let (alpha, beta) = sylvester_represent(k, 4, 5)?;
        Ok([vec![4; alpha], vec![5; beta]].concat())
    };
    let (row_bands, col_bands) = (bands(m)?, bands(n)?);
    let mut cells = Vec::with_capacity(m * n);
    for &h in &row_bands {
        let blocks = col_bands
            .iter()
            .map(|&w| bank.pattern(&format!("C{h}xC{w}")))
            .collect::<Result<Vec<&Pattern>>>()?;
        for i in 0..h {
            for b in &blocks {
                cells.extend_from_slice(b.row(i));
            }
        }
    }
    let p = Pattern::from_cells(m, n, cells, true, true)?;
    match p.verify().first_violation() {
        None => Ok(p),
        Some(violation) => Err(Error::VerificationFailed {
            what: format!("block composition C{m}xC{n}"),
            violation,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bank::builtin_bank;

    #[test]
    fn sylvester_examples() {
        assert_eq!(sylvester_represent(18, 4, 7).unwrap(), (1, 2));
        assert_eq!(sylvester_represent(12, 4, 5).unwrap(), (3, 0));
        assert!(matches!(
            sylvester_represent(11, 4, 5),
            Err(Error::NotRepresentable { k: 11, a: 4, b: 5 })
        ));
        assert!(matches!(
            sylvester_represent(6, 4, 5),
            Err(Error::NotRepresentable { .. })
        ));
        assert_eq!(sylvester_represent(0, 4, 5).unwrap(), (0, 0));
        assert!(matches!(
            sylvester_represent(12, 4, 6),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn hstitch_examples() {
        let bank = builtin_bank();
        let p = hstitch(
            &StitchPlan::horizontal(&[("C4xC4", 1), ("C4xC5", 1)]),
            &bank,
        )
        .unwrap();
        assert_eq!((p.rows(), p.cols(), p.num_colors()), (4, 9, 5));
        assert_eq!(p.family().to_string(), "C4xC9");

        let single = hstitch(&StitchPlan::horizontal(&[("C3xC4", 1)]), &bank).unwrap();
        assert_eq!(&single, bank.pattern("C3xC4").unwrap());

        let p = hstitch(
            &StitchPlan::horizontal(&[("C3xC4", 1), ("C3xC7", 2)]),
            &bank,
        )
        .unwrap();
        assert_eq!((p.rows(), p.cols()), (3, 18));
        assert!(p.verify().is_star);
    }

    #[test]
    fn vstitch_examples() {
        let bank = builtin_bank();
        let p = vstitch(
            &StitchPlan::vertical(&[("C4xC11", 1), ("C5xC11", 1)]),
            &bank,
        )
        .unwrap();
        assert_eq!((p.rows(), p.cols()), (9, 11));
        assert!(p.wrap_rows && p.verify().is_star);
        let single = vstitch(&StitchPlan::vertical(&[("C5xC11", 1)]), &bank).unwrap();
        assert_eq!(&single, bank.pattern("C5xC11").unwrap());
        let p = vstitch(&StitchPlan::vertical(&[("C4xC11", 3)]), &bank).unwrap();
        assert_eq!((p.rows(), p.cols()), (12, 11));
    }

    #[test]
    fn named_c3_plans() {
        let bank = builtin_bank();
        assert_eq!(hstitch(&plan_c3xc13(), &bank).unwrap().cols(), 13);
        assert_eq!(hstitch(&plan_c3xc17(), &bank).unwrap().cols(), 17);
    }

    #[test]
    fn stitch_errors() {
        let bank = builtin_bank();
        let mixed = StitchPlan::horizontal(&[("C3xC4", 1), ("C4xC4", 1)]);
        assert!(matches!(
            hstitch(&mixed, &bank),
            Err(Error::IncompatiblePieces(_))
        ));
        let empty = StitchPlan::horizontal(&[("C3xC4", 0)]);
        assert!(matches!(
            hstitch(&empty, &bank),
            Err(Error::IncompatiblePieces(_))
        ));
        let unknown = StitchPlan::horizontal(&[("C3xC99", 1)]);
        assert!(matches!(
            hstitch(&unknown, &bank),
            Err(Error::UnknownEntry(_))
        ));
        let wrong_axis = StitchPlan::vertical(&[("C3xC4", 1)]);
        assert!(hstitch(&wrong_axis, &bank).is_err());
    }

    #[test]
    fn prefix_mismatch_reports_cell() {
        let bank = builtin_bank();
        // C4xC11 starts 4,3,5 on its first row while C4xC4 starts with 1s
        let plan = StitchPlan::horizontal(&[("C4xC4", 1), ("C4xC11", 1)]);
        match hstitch(&plan, &bank) {
            Err(Error::PrefixMismatch { piece, row, col }) => {
                assert_eq!(piece, "C4xC11");
                assert_eq!((row, col), (1, 1));
            }
            other => panic!("expected PrefixMismatch, got {other:?}"),
        }
    }

    #[test]
    fn block_examples() {
        let bank = builtin_bank();
        for (m, n) in [(14, 19), (12, 12), (13, 17)] {
            let p = block_compose(m, n, &bank).unwrap();
            assert_eq!((p.rows(), p.cols(), p.num_colors()), (m, n, 5));
        }
        assert!(matches!(
            block_compose(11, 20, &bank),
            Err(Error::SizeTooSmall(_))
        ));
    }
}
