//! Reader and writer for the alist matrix interchange format.
//!
//! Layout, space-separated and 1-indexed:
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! <n column weights>
//! <m row weights>
//! <n lines: row positions per column, zero-padded to max_col_weight>
//! <m lines: column positions per row, zero-padded to max_row_weight>
//! ```

use crate::gf2::ParityCheckMatrix;
use crate::{Error, Result};
use std::fs;
use std::path::Path;

pub fn to_alist(h: &ParityCheckMatrix) -> String {
    let (m, n) = h.dims();
    let max_col = (0..n).map(|j| h.col_weight(j)).max().unwrap_or(0);
    let max_row = (0..m).map(|i| h.row_weight(i)).max().unwrap_or(0);

    let mut out = String::new();
    out.push_str(&format!("{n} {m}\n"));
    out.push_str(&format!("{max_col} {max_row}\n"));
    out.push_str(&join(
        (0..n).map(|j| h.col_weight(j)),
    ));
    out.push('\n');
    out.push_str(&join((0..m).map(|i| h.row_weight(i))));
    out.push('\n');
    for j in 0..n {
        out.push_str(&join_padded(h.col_support(j), max_col));
        out.push('\n');
    }
    for i in 0..m {
        out.push_str(&join_padded(h.row_support(i), max_row));
        out.push('\n');
    }
    out
}

fn join(values: impl Iterator<Item = usize>) -> String {
    values
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_padded(support: &[usize], width: usize) -> String {
    let mut fields: Vec<String> = support.iter().map(|&idx| (idx + 1).to_string()).collect();
    while fields.len() < width {
        fields.push("0".to_string());
    }
    fields.join(" ")
}

pub fn from_alist(text: &str) -> Result<ParityCheckMatrix> {
    let lines: Vec<&str> = text.lines().collect();
    let mut cursor = Cursor { lines, next: 0 };

    let header = cursor.tokens()?;
    if header.len() != 2 {
        return Err(cursor.error_at_last("header must be 'n m'"));
    }
    let n = header[0];
    let m = header[1];
    if n == 0 || m == 0 {
        return Err(cursor.error_at_last("dimensions must be positive"));
    }

    let maxima = cursor.tokens()?;
    if maxima.len() != 2 {
        return Err(cursor.error_at_last("expected 'max_col_weight max_row_weight'"));
    }
    let (max_col, max_row) = (maxima[0], maxima[1]);

    let col_weights = cursor.tokens()?;
    if col_weights.len() != n {
        return Err(cursor.error_at_last(&format!(
            "expected {n} column weights, found {}",
            col_weights.len()
        )));
    }
    if let Some(w) = col_weights.iter().find(|&&w| w > max_col) {
        return Err(cursor.error_at_last(&format!(
            "column weight {w} exceeds declared maximum {max_col}"
        )));
    }

    let row_weights = cursor.tokens()?;
    if row_weights.len() != m {
        return Err(cursor.error_at_last(&format!(
            "expected {m} row weights, found {}",
            row_weights.len()
        )));
    }
    if let Some(w) = row_weights.iter().find(|&&w| w > max_row) {
        return Err(cursor.error_at_last(&format!(
            "row weight {w} exceeds declared maximum {max_row}"
        )));
    }

    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    for j in 0..n {
        let entries = cursor.support(m, col_weights[j])?;
        cols.push(entries);
    }
    let h = ParityCheckMatrix::from_cols(m, n, &cols)?;

    for i in 0..m {
        let line_no = cursor.next + 1;
        let entries = cursor.support(n, row_weights[i])?;
        if entries != h.row_support(i) {
            return Err(Error::AlistParse {
                line: line_no,
                message: format!("row {} entries disagree with the column section", i + 1),
            });
        }
    }

    Ok(h)
}

pub fn write_alist_file(h: &ParityCheckMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_alist(h))?;
    Ok(())
}

pub fn read_alist_file(path: impl AsRef<Path>) -> Result<ParityCheckMatrix> {
    let text = fs::read_to_string(path)?;
    from_alist(&text)
}

struct Cursor<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl Cursor<'_> {
    fn tokens(&mut self) -> Result<Vec<usize>> {
        let line_no = self.next + 1;
        let Some(line) = self.lines.get(self.next) else {
            return Err(Error::AlistParse {
                line: line_no,
                message: "unexpected end of file".into(),
            });
        };
        self.next += 1;
        line.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| Error::AlistParse {
                    line: line_no,
                    message: format!("'{tok}' is not a nonnegative integer"),
                })
            })
            .collect()
    }

    /// Reads one support line: 1-indexed entries, zeros are padding.
    fn support(&mut self, bound: usize, declared_weight: usize) -> Result<Vec<usize>> {
        let line_no = self.next + 1;
        let raw = self.tokens()?;
        let mut entries: Vec<usize> = Vec::with_capacity(declared_weight);
        for v in raw.into_iter().filter(|&v| v != 0) {
            if v > bound {
                return Err(Error::AlistParse {
                    line: line_no,
                    message: format!("index {v} out of range 1..={bound}"),
                });
            }
            entries.push(v - 1);
        }
        entries.sort_unstable();
        entries.dedup();
        if entries.len() != declared_weight {
            return Err(Error::AlistParse {
                line: line_no,
                message: format!(
                    "{} distinct entries listed but weight {declared_weight} declared",
                    entries.len()
                ),
            });
        }
        Ok(entries)
    }

    fn error_at_last(&self, message: &str) -> Error {
        Error::AlistParse {
            line: self.next,
            message: message.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_matrix_round_trips() {
        let h = ParityCheckMatrix::from_dense(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let text = to_alist(&h);
        assert_eq!(from_alist(&text).unwrap(), h);
    }

    #[test]
    fn layout_is_exact() {
        let h = ParityCheckMatrix::from_dense(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let expected = "3 2\n2 2\n1 1 2\n2 2\n1 0\n2 0\n1 2\n1 3\n2 3\n";
        assert_eq!(to_alist(&h), expected);
    }

    #[test]
    fn weight_count_mismatch_is_reported_with_line() {
        let text = "4 2\n2 2\n1 1 1 1 1\n2 2\n";
        match from_alist(text) {
            Err(Error::AlistParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_index_is_reported() {
        // Column 1 claims a 1 in row 3 of a 2-row matrix.
        let text = "2 2\n1 1\n1 1\n1 1\n3\n2\n1\n2\n";
        match from_alist(text) {
            Err(Error::AlistParse { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("out of range"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_row_section_is_rejected() {
        // Column section describes the identity, row section disagrees.
        let text = "2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n";
        match from_alist(text) {
            Err(Error::AlistParse { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn round_trip_is_identity(
            (m, n, bits) in (1usize..9, 1usize..9).prop_flat_map(|(m, n)| {
                let bits = proptest::collection::vec(any::<bool>(), m * n);
                (Just(m), Just(n), bits)
            })
        ) {
            let rows: Vec<Vec<u8>> = (0..m)
                .map(|i| (0..n).map(|j| bits[i * n + j] as u8).collect())
                .collect();
            let h = ParityCheckMatrix::from_dense(&rows).unwrap();
            let text = to_alist(&h);
            prop_assert_eq!(from_alist(&text).unwrap(), h);
        }
    }
}
