//! Matrix Market coordinate files (real, general or symmetric).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::la::SparseMatrix;
use crate::scalar::Scalar;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_matrix_market<T: Scalar>(path: impl AsRef<Path>) -> Result<SparseMatrix<T>> {
    let text = fs::read_to_string(path.as_ref())?;
    parse_matrix_market(&text)
}

/// Parses the text of a coordinate file. Symmetric files store the lower
/// triangle and are expanded to full storage.
pub fn parse_matrix_market<T: Scalar>(text: &str) -> Result<SparseMatrix<T>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix coordinate real general|symmetric'"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format '{}'", tokens[2])));
    }
    if tokens[3] != "real" {
        return Err(parse_err(1, format!("unsupported field '{}', only real is accepted", tokens[3])));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = data.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(size_line, "size line must hold three nonnegative integers"))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(parse_err(size_line, "size line must hold three nonnegative integers"));
    };
    if rows != cols {
        return Err(parse_err(size_line, format!("matrix is {rows}x{cols}, only square matrices are supported")));
    }

    let mut triplets = Vec::with_capacity(if symmetric { 2 * nnz } else { nnz });
    let mut seen = 0usize;
    let mut last_line = size_line;
    for (ln, line) in data {
        last_line = ln;
        if seen == nnz {
            return Err(parse_err(ln, format!("more than the declared {nnz} entries")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(ln, format!("expected 'row col value', found {} fields", fields.len())));
        }
        let index = |tok: &str, what: &str| -> Result<usize> {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(ln, format!("invalid {what} index '{tok}'")))?;
            if v == 0 || v > rows {
                return Err(parse_err(ln, format!("{what} index {v} outside 1..={rows}")));
            }
            Ok(v - 1)
        };
        let i = index(fields[0], "row")?;
        let j = index(fields[1], "column")?;
        let v: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(ln, format!("invalid real value '{}'", fields[2])))?;
        if !v.is_finite() {
            return Err(parse_err(ln, "value is not finite"));
        }
        if symmetric && i < j {
            return Err(parse_err(ln, "symmetric files store only the lower triangle"));
        }
        let v = T::from_f64(v).ok_or_else(|| parse_err(ln, "value not representable"))?;
        triplets.push((i, j, v));
        if symmetric && i != j {
            triplets.push((j, i, v));
        }
        seen += 1;
    }
    if seen != nnz {
        return Err(parse_err(last_line + 1, format!("expected {nnz} entries, found {seen}")));
    }
    SparseMatrix::from_triplets(rows, &triplets)
}

/// Formats as a general coordinate file with 17 significant digits.
pub fn format_matrix_market<T: Scalar>(mat: &SparseMatrix<T>) -> String {
    let mut out = String::with_capacity(32 * (mat.nnz() + 2));
    out.push_str("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{} {} {}", mat.dim(), mat.dim(), mat.nnz());
    for (i, j, v) in mat.triplets() {
        let _ = writeln!(out, "{} {} {:.16e}", i + 1, j + 1, v.to_f64_lossy());
    }
    out
}

pub fn write_matrix_market<T: Scalar>(mat: &SparseMatrix<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path.as_ref(), format_matrix_market(mat))?;
    Ok(())
}
