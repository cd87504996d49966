//! Matrix Market reading and writing.
//!
//! Supported: `array real general|symmetric` for dense matrices and
//! `coordinate {pattern|real|integer} {general|symmetric}` for sparse data.
//! Files use 1-based indices; everything in memory is 0-based.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use log::warn;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::pattern::{SparseApprox, SparsityPattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Array,
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

#[derive(Debug)]
struct Header {
    format: Format,
    field: Field,
    symmetry: Symmetry,
}

/// Lines of a Matrix Market body with their 1-based line numbers, comments skipped.
struct Body {
    lines: Vec<(usize, String)>,
    pos: usize,
}

impl Body {
    fn next(&mut self) -> Option<(usize, &str)> {
        let item = self.lines.get(self.pos)?;
        self.pos += 1;
        Some((item.0, item.1.as_str()))
    }
}

fn read_header<R: Read>(reader: R) -> Result<(Header, Body)> {
    let mut lines = BufReader::new(reader).lines();
    let first = match lines.next() {
        Some(l) => l?,
        None => return Err(Error::parse(1, "empty file")),
    };
    let tokens: Vec<String> = first
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::parse(1, format!("malformed header `{first}`")));
    }
    let format = match tokens[2].as_str() {
        "array" => Format::Array,
        "coordinate" => Format::Coordinate,
        other => return Err(Error::parse(1, format!("unsupported format `{other}`"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(Error::parse(1, format!("unsupported field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(Error::parse(1, format!("unsupported symmetry `{other}`"))),
    };
    if format == Format::Array && field == Field::Pattern {
        return Err(Error::parse(1, "array format cannot have pattern field"));
    }
    let mut body = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        body.push((idx + 2, trimmed.to_string()));
    }
    Ok((
        Header {
            format,
            field,
            symmetry,
        },
        Body {
            lines: body,
            pos: 0,
        },
    ))
}

fn parse_usize(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

fn parse_f64(line: usize, tok: Option<&str>) -> Result<f64> {
    let tok = tok.ok_or_else(|| Error::parse(line, "missing value"))?;
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid value `{tok}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value `{tok}`")));
    }
    Ok(v)
}

struct Coordinate {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize, f64, usize)>,
}

fn read_coordinate_body(header: &Header, body: &mut Body) -> Result<Coordinate> {
    let (line, size) = body
        .next()
        .ok_or_else(|| Error::parse(1, "missing size line"))?;
    let mut it = size.split_whitespace();
    let n_rows = parse_usize(line, it.next(), "row count")?;
    let n_cols = parse_usize(line, it.next(), "column count")?;
    let nnz = parse_usize(line, it.next(), "entry count")?;
    let mut entries = Vec::with_capacity(nnz);
    for k in 0..nnz {
        let (line, text) = body
            .next()
            .ok_or_else(|| Error::parse(line, format!("expected {nnz} entries, found {k}")))?;
        let mut it = text.split_whitespace();
        let i = parse_usize(line, it.next(), "row index")?;
        let j = parse_usize(line, it.next(), "column index")?;
        if i == 0 || i > n_rows || j == 0 || j > n_cols {
            return Err(Error::parse(
                line,
                format!("index ({i}, {j}) outside {n_rows}x{n_cols}"),
            ));
        }
        let v = match header.field {
            Field::Pattern => 1.0,
            Field::Real | Field::Integer => parse_f64(line, it.next())?,
        };
        entries.push((i - 1, j - 1, v, line));
        if header.symmetry == Symmetry::Symmetric && i != j {
            entries.push((j - 1, i - 1, v, line));
        }
    }
    if let Some((line, _)) = body.next() {
        return Err(Error::parse(line, "trailing data after declared entries"));
    }
    Ok(Coordinate {
        n_rows,
        n_cols,
        entries,
    })
}

/// Reads a pattern from a coordinate file. Values, if any, are ignored;
/// duplicate positions are collapsed with a warning.
pub fn read_pattern<R: Read>(reader: R) -> Result<SparsityPattern> {
    let (header, mut body) = read_header(reader)?;
    if header.format != Format::Coordinate {
        return Err(Error::parse(1, "pattern files must use coordinate format"));
    }
    let coo = read_coordinate_body(&header, &mut body)?;
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); coo.n_rows];
    for &(i, j, _, _) in &coo.entries {
        rows[i].push(j);
    }
    let mut duplicates = 0;
    for row in &mut rows {
        row.sort_unstable();
        let before = row.len();
        row.dedup();
        duplicates += before - row.len();
    }
    if duplicates > 0 {
        warn!("collapsed {duplicates} duplicate pattern entries");
    }
    SparsityPattern::from_rows(coo.n_cols, rows)
}

pub fn write_pattern<W: Write>(pattern: &SparsityPattern, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "%%MatrixMarket matrix coordinate pattern general")?;
    writeln!(
        w,
        "{} {} {}",
        pattern.n_rows(),
        pattern.n_cols(),
        pattern.nnz()
    )?;
    for (i, j) in pattern.entries() {
        writeln!(w, "{} {}", i + 1, j + 1)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a dense matrix from either array or coordinate format.
/// Duplicate coordinate entries are summed.
pub fn read_dense<R: Read>(reader: R) -> Result<DenseMatrix> {
    let (header, mut body) = read_header(reader)?;
    match header.format {
        Format::Coordinate => {
            let coo = read_coordinate_body(&header, &mut body)?;
            let mut m = DenseMatrix::zeros(coo.n_rows, coo.n_cols);
            for (i, j, v, _) in coo.entries {
                m[(i, j)] += v;
            }
            Ok(m)
        }
        Format::Array => {
            let (line, size) = body
                .next()
                .ok_or_else(|| Error::parse(1, "missing size line"))?;
            let mut it = size.split_whitespace();
            let n_rows = parse_usize(line, it.next(), "row count")?;
            let n_cols = parse_usize(line, it.next(), "column count")?;
            let symmetric = header.symmetry == Symmetry::Symmetric;
            if symmetric && n_rows != n_cols {
                return Err(Error::parse(line, "symmetric array must be square"));
            }
            let mut m = DenseMatrix::zeros(n_rows, n_cols);
            // column-major; symmetric stores the lower triangle only
            for j in 0..n_cols {
                let start = if symmetric { j } else { 0 };
                for i in start..n_rows {
                    let (line, text) = body.next().ok_or_else(|| {
                        Error::parse(
                            line,
                            format!("array ended early at entry ({}, {})", i + 1, j + 1),
                        )
                    })?;
                    let v = parse_f64(line, text.split_whitespace().next())?;
                    m[(i, j)] = v;
                    if symmetric {
                        m[(j, i)] = v;
                    }
                }
            }
            if let Some((line, _)) = body.next() {
                return Err(Error::parse(line, "trailing data after array entries"));
            }
            Ok(m)
        }
    }
}

/// Writes `array real general` (column-major, per the format).
pub fn write_dense<W: Write>(m: &DenseMatrix, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} {}", m.n_rows(), m.n_cols())?;
    for j in 0..m.n_cols() {
        for i in 0..m.n_rows() {
            writeln!(w, "{:e}", m[(i, j)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `coordinate real general` with one line per pattern slot.
pub fn write_sparse<W: Write>(approx: &SparseApprox, writer: W) -> Result<()> {
    let pattern = approx.pattern();
    let mut w = BufWriter::new(writer);
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(
        w,
        "{} {} {}",
        pattern.n_rows(),
        pattern.n_cols(),
        pattern.nnz()
    )?;
    for ((i, j), v) in pattern.entries().zip(approx.values()) {
        writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a coordinate real file into values aligned with its own pattern.
pub fn read_sparse<R: Read>(reader: R) -> Result<SparseApprox> {
    let (header, mut body) = read_header(reader)?;
    if header.format != Format::Coordinate {
        return Err(Error::parse(1, "sparse files must use coordinate format"));
    }
    let coo = read_coordinate_body(&header, &mut body)?;
    let pattern = Arc::new(SparsityPattern::from_entries(
        coo.n_rows,
        coo.n_cols,
        coo.entries.iter().map(|&(i, j, _, _)| (i, j)),
    )?);
    let mut approx = SparseApprox::zeros(Arc::clone(&pattern));
    for (i, j, v, _) in coo.entries {
        let k = pattern
            .slot(i, j)
            .expect("entry belongs to its own pattern");
        approx.values_mut()[k] += v;
    }
    Ok(approx)
}

pub fn read_pattern_file(path: impl AsRef<Path>) -> Result<SparsityPattern> {
    read_pattern(File::open(path)?)
}

pub fn write_pattern_file(pattern: &SparsityPattern, path: impl AsRef<Path>) -> Result<()> {
    write_pattern(pattern, File::create(path)?)
}

pub fn read_dense_file(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    read_dense(File::open(path)?)
}

pub fn write_dense_file(m: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_dense(m, File::create(path)?)
}

pub fn write_sparse_file(approx: &SparseApprox, path: impl AsRef<Path>) -> Result<()> {
    write_sparse(approx, File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{banded_pattern, hadamard_mask, multiband_pattern};
    use proptest::prelude::*;

    fn roundtrip_pattern(p: &SparsityPattern) -> SparsityPattern {
        let mut buf = Vec::new();
        write_pattern(p, &mut buf).unwrap();
        read_pattern(buf.as_slice()).unwrap()
    }

    #[test]
    fn banded_round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("band.mtx");
        let p = banded_pattern(10, 1);
        write_pattern_file(&p, &path).unwrap();
        assert_eq!(read_pattern_file(&path).unwrap(), p);
    }

    #[test]
    fn out_of_range_index_reports_line() {
        let text =
            "%%MatrixMarket matrix coordinate pattern general\n% comment\n10 10 2\n1 1\n11 1\n";
        match read_pattern(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_coordinate_list() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n3 4 0\n";
        let p = read_pattern(text.as_bytes()).unwrap();
        assert_eq!((p.n_rows(), p.n_cols(), p.nnz()), (3, 4, 0));
    }

    #[test]
    fn duplicates_collapse() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n2 2 3\n1 2\n1 2\n2 1\n";
        let p = read_pattern(text.as_bytes()).unwrap();
        assert_eq!(p.nnz(), 2);
    }

    #[test]
    fn malformed_header() {
        for text in [
            "",
            "%%MatrixMarket tensor coordinate pattern general\n1 1 0\n",
            "%%MatrixMarket matrix coordinate complex general\n1 1 0\n",
            "%%MatrixMarket matrix array pattern general\n1 1\n",
        ] {
            assert!(matches!(
                read_pattern(text.as_bytes()),
                Err(Error::Parse { line: 1, .. })
            ));
        }
        let short = "%%MatrixMarket matrix coordinate pattern general\n2 2 3\n1 1\n";
        assert!(matches!(
            read_pattern(short.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn dense_array_round_trip() {
        let m = DenseMatrix::from_rows(&[[1.5, -2.0, 0.1], [3.0, 1e-300, 7.25]]);
        let mut buf = Vec::new();
        write_dense(&m, &mut buf).unwrap();
        assert_eq!(read_dense(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn symmetric_inputs_are_mirrored() {
        let arr = "%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n";
        let m = read_dense(arr.as_bytes()).unwrap();
        assert_eq!(m, DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 3.0]]));
        let coo = "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 4\n2 1 5\n";
        let m = read_dense(coo.as_bytes()).unwrap();
        assert_eq!(m, DenseMatrix::from_rows(&[[4.0, 5.0], [5.0, 0.0]]));
    }

    #[test]
    fn sparse_round_trip() {
        let p = Arc::new(banded_pattern(6, 1));
        let a = DenseMatrix::from_fn(6, 6, |i, j| (i * 6 + j) as f64 * 0.37 - 3.0);
        let approx = hadamard_mask(&a, &p).unwrap();
        let mut buf = Vec::new();
        write_sparse(&approx, &mut buf).unwrap();
        assert_eq!(read_sparse(buf.as_slice()).unwrap(), approx);
    }

    proptest! {
        #[test]
        fn pattern_round_trip(d in 1usize..30, b in 0usize..3, t in 1usize..8) {
            let p = multiband_pattern(d, &[t], b).unwrap();
            prop_assert_eq!(roundtrip_pattern(&p), p);
        }
    }
}
