//! Text formats: vector and matrix files (one comma-separated row per line,
//! blank lines and `#` comments ignored) and CSV datasets with a header row.
//! Entries are decimal literals or `p/q` rationals.

use crate::applications::Dataset;
use crate::error::{Error, ParseError, Result};
use crate::linalg::{SquareMatrix, Vector};
use crate::scalar::Scalar;

fn parse_entry<S: Scalar>(line: usize, text: &str) -> Result<S> {
    S::parse_literal(text).map_err(|e| ParseError { line, message: e.to_string() }.into())
}

/// Non-empty, non-comment lines with their 1-based numbers, each split into
/// scalars of one common length.
fn parse_rows<S: Scalar>(text: &str) -> Result<Vec<(usize, Vec<S>)>> {
    let mut rows: Vec<(usize, Vec<S>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let row = content.split(',').map(|e| parse_entry(line, e)).collect::<Result<Vec<S>>>()?;
        if let Some((_, first)) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::LineLength { line, expected: first.len(), found: row.len() });
            }
        }
        rows.push((line, row));
    }
    if rows.is_empty() {
        return Err(Error::Empty("no rows in input"));
    }
    Ok(rows)
}

pub fn parse_vectors<S: Scalar>(text: &str) -> Result<Vec<Vector<S>>> {
    Ok(parse_rows(text)?.into_iter().map(|(_, r)| Vector::new(r)).collect())
}

pub fn parse_matrix<S: Scalar>(text: &str) -> Result<SquareMatrix<S>> {
    let rows = parse_rows::<S>(text)?;
    let order = rows.len();
    if let Some((line, r)) = rows.iter().find(|(_, r)| r.len() != order) {
        return Err(Error::LineLength { line: *line, expected: order, found: r.len() });
    }
    SquareMatrix::from_rows(rows.into_iter().map(|(_, r)| r).collect())
}

/// Reads the columns `predictors[0]`, `predictors[1]` and `response` of a
/// headed CSV file into a [`Dataset`].
pub fn parse_dataset<S: Scalar>(text: &str, response: &str, predictors: [&str; 2]) -> Result<Dataset<S>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let csv_error = |e: csv::Error| {
        let line = e.position().map_or(1, |p| p.line() as usize);
        Error::from(ParseError { line, message: e.to_string() })
    };
    let header = reader.headers().map_err(csv_error)?.clone();
    let column = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| {
            Error::from(ParseError {
                line: 1,
                message: format!("no column named {name:?} (have {})", header.iter().collect::<Vec<_>>().join(", ")),
            })
        })
    };
    let idx = [column(predictors[0])?, column(predictors[1])?, column(response)?];
    let mut cols: [Vec<S>; 3] = Default::default();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        for (col, &j) in cols.iter_mut().zip(&idx) {
            col.push(parse_entry(line, &record[j])?);
        }
    }
    let [x, y, z] = cols;
    Dataset::new(x, y, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn vectors_with_comments_and_blank_lines() {
        let vs = parse_vectors::<Exact>("# x, u, v\n1,0,0\n\n1, 1, 1  # u\n2,1/2,-0.25\n").unwrap();
        assert_eq!(vs.len(), 3);
        assert_eq!(vs[2].coords()[1], Exact::from_ratio(1, 2));
        assert_eq!(vs[2].coords()[2], Exact::from_ratio(-1, 4));
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_vectors::<Exact>("1,2\n\n1,x\n").unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 3, .. })), "{err}");
        let err = parse_vectors::<Exact>("1,2\n1,2,3\n").unwrap_err();
        assert_eq!(err, Error::LineLength { line: 2, expected: 2, found: 3 });
        assert_eq!(parse_vectors::<Exact>("# nothing\n"), Err(Error::Empty("no rows in input")));
    }

    #[test]
    fn matrices_must_be_square() {
        let m = parse_matrix::<f64>("5,-1\n-1,2\n").unwrap();
        assert_eq!(m.determinant(), 9.0);
        assert!(matches!(parse_matrix::<f64>("1,2\n3,4\n5,6\n"), Err(Error::LineLength { line: 1, .. })));
    }

    #[test]
    fn dataset_columns_by_name() {
        let text = "z, x, y\n13,1,2\n10,2,1/3\n 5 ,0,0\n";
        let ds = parse_dataset::<Exact>(text, "z", ["x", "y"]).unwrap();
        assert_eq!(ds.x()[1], Exact::from_i64(2));
        assert_eq!(ds.y()[1], Exact::from_ratio(1, 3));
        assert_eq!(ds.z()[2], Exact::from_i64(5));
        let err = parse_dataset::<Exact>(text, "w", ["x", "y"]).unwrap_err();
        assert!(err.to_string().contains("no column named \"w\""));
        let err = parse_dataset::<Exact>("z,x,y\n1,2,3\n1,q,3\n", "z", ["x", "y"]).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 3, .. })), "{err}");
    }
}
