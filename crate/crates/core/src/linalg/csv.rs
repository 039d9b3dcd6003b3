//! Plain-text matrix exchange format.
//!
//! ```text
//! rows,cols
//! 2,2
//! row,col,re,im
//! 0,0,0.7071067811865476,0
//! ...
//! ```
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! matrix survives export and import bit-exactly.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

pub fn matrix_to_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    out.push_str("rows,cols\n");
    let _ = writeln!(out, "{},{}", m.rows(), m.cols());
    out.push_str("row,col,re,im\n");
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let z = m[(r, c)];
            let _ = writeln!(out, "{r},{c},{},{}", z.re, z.im);
        }
    }
    out
}

pub fn matrix_from_csv(text: &str) -> Result<ComplexMatrix, LinalgError> {
    let bad = |line: usize, msg: &str| LinalgError::Parse {
        line,
        message: msg.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());

    match lines.next() {
        Some((_, l)) if l.trim() == "rows,cols" => {}
        Some((i, _)) => return Err(bad(i + 1, "expected header `rows,cols`")),
        None => return Err(bad(1, "empty input")),
    }
    let (dim_line, dims) = lines.next().ok_or_else(|| bad(2, "missing dimensions"))?;
    let dims: Vec<usize> = dims
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad(dim_line + 1, "dimensions must be two non-negative integers"))?;
    let [rows, cols] = dims[..] else {
        return Err(bad(
            dim_line + 1,
            "dimensions must be two non-negative integers",
        ));
    };
    match lines.next() {
        Some((_, l)) if l.trim() == "row,col,re,im" => {}
        Some((i, _)) => return Err(bad(i + 1, "expected header `row,col,re,im`")),
        None if rows * cols == 0 => return Ok(ComplexMatrix::zeros(rows, cols)),
        None => return Err(bad(dim_line + 2, "missing entry header")),
    }

    let mut m = ComplexMatrix::zeros(rows, cols);
    let mut seen = vec![false; rows * cols];
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(bad(i + 1, "expected `row,col,re,im`"));
        }
        let r: usize = fields[0].parse().map_err(|_| bad(i + 1, "bad row index"))?;
        let c: usize = fields[1]
            .parse()
            .map_err(|_| bad(i + 1, "bad column index"))?;
        let re: f64 = fields[2].parse().map_err(|_| bad(i + 1, "bad real part"))?;
        let im: f64 = fields[3]
            .parse()
            .map_err(|_| bad(i + 1, "bad imaginary part"))?;
        if r >= rows || c >= cols {
            return Err(bad(i + 1, "entry index outside the declared shape"));
        }
        if std::mem::replace(&mut seen[r * cols + c], true) {
            return Err(bad(i + 1, "duplicate entry"));
        }
        m[(r, c)] = Complex64::new(re, im);
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(LinalgError::Parse {
            line: 0,
            message: format!("missing entry ({}, {})", missing / cols, missing % cols),
        });
    }
    Ok(m)
}
