use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use ndarray::Array2;

use super::Dataset;
use crate::{Error, Result};

/// Field separator for delimited text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    #[default]
    Comma,
    /// Any run of spaces or tabs.
    Whitespace,
    Char(char),
}

impl Delimiter {
    fn split<'a>(&self, line: &'a str) -> Vec<&'a str> {
        match self {
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
            Delimiter::Char(c) => line.split(*c).map(str::trim).collect(),
        }
    }

    fn separator(&self) -> char {
        match self {
            Delimiter::Comma => ',',
            Delimiter::Whitespace => ' ',
            Delimiter::Char(c) => *c,
        }
    }
}

impl FromStr for Delimiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "," | "comma" => Ok(Delimiter::Comma),
            "whitespace" | "space" | "ws" => Ok(Delimiter::Whitespace),
            "tab" | "\t" => Ok(Delimiter::Char('\t')),
            other => {
                let mut chars = other.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(Delimiter::Char(c)),
                    _ => Err(Error::InvalidParams(format!("unknown delimiter {other:?}"))),
                }
            }
        }
    }
}

/// Loads a delimited text file, one point per row.
///
/// If `label_column` is given that field is removed from the features and
/// remapped to `0..c` by order of first appearance. Blank lines are skipped;
/// reported row numbers are 1-based physical line numbers.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: Option<usize>,
    delimiter: Delimiter,
) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path.file_stem().map_or_else(
        || "dataset".to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    parse_delimited(&text, name, label_column, delimiter)
}

/// Parses delimited text already in memory. See [`load_csv`].
pub fn parse_delimited(
    text: &str,
    name: impl Into<String>,
    label_column: Option<usize>,
    delimiter: Delimiter,
) -> Result<Dataset> {
    let mut width: Option<usize> = None;
    let mut values = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut rows = 0usize;

    for (lineno, line) in text.lines().enumerate() {
        let row = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields = delimiter.split(line.trim());
        match width {
            None => width = Some(fields.len()),
            Some(w) if w != fields.len() => {
                return Err(Error::RaggedRow {
                    row,
                    expected: w,
                    found: fields.len(),
                })
            }
            _ => {}
        }
        if let Some(col) = label_column {
            if col >= fields.len() {
                return Err(Error::LabelColumnOutOfRange {
                    row,
                    column: col,
                    fields: fields.len(),
                });
            }
        }
        for (column, field) in fields.iter().enumerate() {
            if Some(column) == label_column {
                labels.push((*field).to_string());
                continue;
            }
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::NonNumeric {
                        row,
                        column,
                        value: (*field).to_string(),
                    })
                }
            }
        }
        rows += 1;
    }

    let width = width.ok_or(Error::Empty)?;
    let n = width - usize::from(label_column.is_some());
    if n == 0 {
        return Err(Error::InvalidDataset("no feature columns".into()));
    }
    let points = Array2::from_shape_vec((rows, n), values)
        .map_err(|e| Error::InvalidDataset(e.to_string()))?;
    let truth = label_column.map(|_| remap_first_appearance(&labels));
    Dataset::new(name, points, truth)
}

/// Labels that already spell out `0..c` as integers are kept; anything else
/// is numbered by order of first appearance.
fn remap_first_appearance(labels: &[String]) -> Vec<usize> {
    let numeric: Option<Vec<usize>> = labels.iter().map(|l| l.parse().ok()).collect();
    if let Some(v) = numeric {
        let c = v.iter().max().map_or(0, |&x| x + 1);
        let mut seen = vec![false; c];
        v.iter().for_each(|&x| seen[x] = true);
        if seen.iter().all(|&s| s) {
            return v;
        }
    }
    let mut seen: Vec<&str> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| *s == l.as_str()) {
            Some(i) => i,
            None => {
                seen.push(l);
                seen.len() - 1
            }
        })
        .collect()
}

/// Writes `ds` as delimited text; truth labels (if any) become the last column.
///
/// Values use Rust's shortest round-trip formatting, so reloading with
/// `label_column = Some(ds.dim())` reproduces the points bit for bit.
pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>, delimiter: Delimiter) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, to_delimited(ds, delimiter)).map_err(|e| Error::io(path, e))
}

pub(crate) fn to_delimited(ds: &Dataset, delimiter: Delimiter) -> String {
    let sep = delimiter.separator();
    let mut out = String::new();
    for (i, row) in ds.points().rows().into_iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(sep);
            }
            write!(out, "{v:?}").unwrap();
        }
        if let Some(t) = ds.truth() {
            write!(out, "{sep}{}", t[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_row_without_labels() {
        let ds = parse_delimited("1.0,2.0\n", "x", None, Delimiter::Comma).unwrap();
        assert_eq!((ds.len(), ds.dim()), (1, 2));
        assert!(ds.truth().is_none());
    }

    #[test]
    fn labels_remap_by_first_appearance() {
        let ds = parse_delimited("1,b\n2,a\n3,b\n", "x", Some(1), Delimiter::Comma).unwrap();
        assert_eq!(ds.truth().unwrap(), &[0, 1, 0]);
        assert_eq!(ds.points().column(0).to_vec(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn contiguous_integer_labels_are_kept() {
        let ds = parse_delimited("1,2\n2,0\n3,1\n", "x", Some(1), Delimiter::Comma).unwrap();
        assert_eq!(ds.truth().unwrap(), &[2, 0, 1]);
        // UCI glass style codes are not contiguous from zero
        let ds = parse_delimited("1,7\n2,1\n3,7\n", "x", Some(1), Delimiter::Comma).unwrap();
        assert_eq!(ds.truth().unwrap(), &[0, 1, 0]);
    }

    #[test]
    fn label_column_in_the_middle_keeps_feature_order() {
        let ds = parse_delimited("1 x 2\n3 y 4\n", "x", Some(1), Delimiter::Whitespace).unwrap();
        assert_eq!(ds.row(1).to_vec(), vec![3.0, 4.0]);
        assert_eq!(ds.truth().unwrap(), &[0, 1]);
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = parse_delimited("1,2\n3,4\n5\n", "x", None, Delimiter::Comma).unwrap_err();
        assert!(matches!(
            err,
            Error::RaggedRow {
                row: 3,
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn non_numeric_reports_row_and_column() {
        let err = parse_delimited("1,2\n3,abc\n", "x", None, Delimiter::Comma).unwrap_err();
        assert!(matches!(
            err,
            Error::NonNumeric {
                row: 2,
                column: 1,
                ..
            }
        ));
    }

    #[test]
    fn missing_value_is_an_error() {
        let err = parse_delimited("1,2\n3,\n", "x", None, Delimiter::Comma).unwrap_err();
        assert!(matches!(err, Error::NonNumeric { row: 2, .. }));
        let err = parse_delimited("1,2\n3,?\n", "x", None, Delimiter::Comma).unwrap_err();
        assert!(matches!(err, Error::NonNumeric { row: 2, .. }));
    }

    #[test]
    fn label_column_out_of_range() {
        let err = parse_delimited("1,2\n", "x", Some(5), Delimiter::Comma).unwrap_err();
        assert!(matches!(
            err,
            Error::LabelColumnOutOfRange {
                row: 1,
                column: 5,
                fields: 2
            }
        ));
    }

    #[test]
    fn missing_file() {
        let err = load_csv("/nonexistent/file.csv", None, Delimiter::Comma).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn delimiter_from_str() {
        assert_eq!("comma".parse::<Delimiter>().unwrap(), Delimiter::Comma);
        assert_eq!(";".parse::<Delimiter>().unwrap(), Delimiter::Char(';'));
        assert_eq!("ws".parse::<Delimiter>().unwrap(), Delimiter::Whitespace);
        assert!("ab".parse::<Delimiter>().is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            rows in proptest::collection::vec(
                (proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::ZERO, 3), 0usize..4),
                1..20,
            ),
            ws in any::<bool>(),
        ) {
            let m = rows.len();
            let mut labels: Vec<usize> = rows.iter().map(|r| r.1).collect();
            // squeeze to a contiguous set, keeping the (arbitrary) order of appearance
            let mut used: Vec<usize> = labels.clone();
            used.sort_unstable();
            used.dedup();
            for l in labels.iter_mut() { *l = used.binary_search(l).unwrap(); }
            let flat: Vec<f64> = rows.iter().flat_map(|r| r.0.clone()).collect();
            let ds = Dataset::new("rt", Array2::from_shape_vec((m, 3), flat).unwrap(), Some(labels)).unwrap();
            let delim = if ws { Delimiter::Whitespace } else { Delimiter::Comma };
            let text = to_delimited(&ds, delim);
            let back = parse_delimited(&text, "rt", Some(3), delim).unwrap();
            prop_assert_eq!(back.truth(), ds.truth());
            for (a, b) in back.points().iter().zip(ds.points().iter()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
