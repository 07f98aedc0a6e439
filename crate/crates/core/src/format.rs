//! Text files for matrices and presentations.
//!
//! ```text
//! # comments and blank lines are ignored
//! root i: x^2 + 1
//! matrix 2
//! 0, i
//! -i, 0
//! ```
//!
//! `root NAME: POLY` adjoins a root of a monic quadratic in `x` whose
//! coefficients may use earlier roots. `matrix N` (or `matrix R C`) is followed
//! by the rows; entries are separated by commas, or by whitespace when a row
//! has no comma. Presentation files share the root lines, then
//!
//! ```text
//! name B(E)
//! letters a[1,1] a[1,2] a[2,1] a[2,2]
//! relations
//! a[1,1]*a[2,2] - 1
//! ```

use crate::fpalg::{FpError, Presentation};
use crate::freealg::{parse_poly, parse_scalar, parse_univariate, Alphabet, ParseError, SymbolTable};
use crate::matrix::{FormMatrix, Matrix, MatrixError};
use crate::scalars::{FieldTower, Scalar, ScalarError};
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl FormatError {
    fn at(line: usize, col: usize, msg: impl Into<String>) -> FormatError {
        FormatError { line, col, msg: msg.into() }
    }

    fn parse(line: usize, offset: usize, e: ParseError) -> FormatError {
        FormatError::at(line, offset + e.col, e.msg)
    }
}

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub tower: Arc<FieldTower>,
    pub matrix: Matrix,
}

impl MatrixFile {
    /// The matrix as an invertible form; singular input is an error located
    /// at the `matrix` header.
    pub fn into_form(self) -> Result<FormMatrix, MatrixError> {
        FormMatrix::new(self.matrix)
    }
}

/// Content lines with 1-based numbers, comments stripped.
fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(k, l)| {
        let l = l.split('#').next().unwrap_or("").trim_end();
        (!l.trim().is_empty()).then_some((k + 1, l))
    })
}

fn indent(l: &str) -> usize {
    l.len() - l.trim_start().len()
}

/// Handles a `root` line; `Ok(None)` when the line is something else.
fn root_line(tower: &Arc<FieldTower>, line: usize, l: &str) -> Result<Option<Arc<FieldTower>>, FormatError> {
    let t = l.trim_start();
    let Some(rest) = t.strip_prefix("root ") else { return Ok(None) };
    let base = indent(l) + 6;
    let (name, poly) = rest
        .split_once(':')
        .ok_or_else(|| FormatError::at(line, base, "expected `root NAME: POLY`"))?;
    let name = name.trim();
    if name.is_empty() || name == "x" || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(FormatError::at(line, base, format!("bad root name {name:?}")));
    }
    let poly_col = base + rest.find(':').unwrap_or(0) + 1;
    let c = parse_univariate(poly, "x", tower).map_err(|e| FormatError::parse(line, poly_col, e))?;
    if c.len() != 3 || !c[2].is_one() {
        return Err(FormatError::at(line, poly_col + 1, "root polynomial must be a monic quadratic in x"));
    }
    tower.adjoin(name, &c[1], &c[0]).map(Some).map_err(|e| FormatError::at(line, base, e.to_string()))
}

fn split_entries(l: &str) -> Vec<(usize, &str)> {
    let sep: &[char] = if l.contains(',') { &[','] } else { &[' ', '\t'] };
    let mut out = Vec::new();
    let mut start = 0;
    for (k, ch) in l.char_indices() {
        if sep.contains(&ch) {
            out.push((start, &l[start..k]));
            start = k + ch.len_utf8();
        }
    }
    out.push((start, &l[start..]));
    out.into_iter().filter(|(_, s)| !s.trim().is_empty()).collect()
}

fn parse_dims(line: usize, l: &str) -> Result<(usize, usize), FormatError> {
    let nums: Vec<&str> = l.split_whitespace().skip(1).collect();
    let parse = |s: &str| s.parse::<usize>().ok().filter(|&n| n > 0);
    match nums.as_slice() {
        [n] => parse(n).map(|n| (n, n)),
        [r, c] => parse(r).zip(parse(c)),
        _ => None,
    }
    .ok_or_else(|| FormatError::at(line, indent(l) + 1, "expected `matrix N` or `matrix ROWS COLS`"))
}

/// Parses a matrix file over `base` (usually the rationals with a level cap).
pub fn parse_matrix_file(src: &str, base: &Arc<FieldTower>) -> Result<MatrixFile, FormatError> {
    let mut tower = base.clone();
    let mut lines = content_lines(src);
    let (header_line, rows, cols) = loop {
        let Some((line, l)) = lines.next() else {
            return Err(FormatError::at(src.lines().count().max(1), 1, "missing `matrix` header"));
        };
        if let Some(t) = root_line(&tower, line, l)? {
            tower = t;
        } else if l.trim_start().starts_with("matrix") {
            let (r, c) = parse_dims(line, l)?;
            break (line, r, c);
        } else {
            return Err(FormatError::at(line, indent(l) + 1, "expected `root` or `matrix`"));
        }
    };
    let mut data = Vec::with_capacity(rows);
    for (line, l) in lines {
        if data.len() == rows {
            return Err(FormatError::at(line, indent(l) + 1, format!("more than {rows} rows")));
        }
        let entries = split_entries(l);
        if entries.len() != cols {
            return Err(FormatError::at(line, indent(l) + 1, format!("expected {cols} entries, found {}", entries.len())));
        }
        let row = entries
            .into_iter()
            .map(|(off, s)| parse_scalar(s, &tower).map_err(|e| FormatError::parse(line, off, e)))
            .collect::<Result<Vec<Scalar>, _>>()?;
        data.push(row);
    }
    if data.len() != rows {
        return Err(FormatError::at(header_line, 1, format!("expected {rows} rows, found {}", data.len())));
    }
    let matrix = Matrix::from_rows(data.into_iter().map(|r| r.iter().map(|x| x.lift_to(&tower)).collect()).collect())
        .map_err(|e| FormatError::at(header_line, 1, e.to_string()))?;
    Ok(MatrixFile { tower, matrix })
}

/// Parses a square invertible matrix file.
pub fn parse_form_file(src: &str, base: &Arc<FieldTower>) -> Result<FormMatrix, FormatError> {
    let file = parse_matrix_file(src, base)?;
    let header = content_lines(src).find(|(_, l)| l.trim_start().starts_with("matrix")).map_or(1, |(n, _)| n);
    file.into_form().map_err(|e| FormatError::at(header, 1, e.to_string()))
}

fn tower_header(out: &mut String, tower: &FieldTower) {
    for level in tower.levels() {
        let _ = writeln!(out, "root {}: {}", level.name(), level.min_poly_string());
    }
}

fn tallest(m: &Matrix) -> Arc<FieldTower> {
    m.entries().iter().map(Scalar::tower).max_by_key(|t| t.height()).cloned().unwrap_or_else(FieldTower::rationals)
}

/// The file text for `m`, declaring every level of its tower.
pub fn print_matrix_file(m: &Matrix) -> String {
    let mut out = String::new();
    tower_header(&mut out, &tallest(m));
    if m.is_square() {
        let _ = writeln!(out, "matrix {}", m.rows());
    } else {
        let _ = writeln!(out, "matrix {} {}", m.rows(), m.cols());
    }
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", row.join(", "));
    }
    out
}

/// Merges the towers of several files; one must extend the other.
pub fn merge_towers<'a>(towers: impl IntoIterator<Item = &'a Arc<FieldTower>>) -> Result<Arc<FieldTower>, ScalarError> {
    let mut it = towers.into_iter();
    let first = it.next().cloned().unwrap_or_else(FieldTower::rationals);
    it.try_fold(first, |acc, t| FieldTower::join(&acc, t))
}

/// Moves every entry into `tower`.
pub fn lift_form(f: &FormMatrix, tower: &Arc<FieldTower>) -> FormMatrix {
    FormMatrix::new(f.matrix().map(|x| x.lift_to(tower))).expect("lifting preserves invertibility")
}

/// Parses a presentation file over `base`.
pub fn parse_presentation_file(src: &str, base: &Arc<FieldTower>) -> Result<Presentation, FormatError> {
    let mut tower = base.clone();
    let mut name = String::from("P");
    let mut alphabet: Option<(usize, Alphabet)> = None;
    let mut lines = content_lines(src);
    loop {
        let Some((line, l)) = lines.next() else {
            return Err(FormatError::at(src.lines().count().max(1), 1, "missing `relations` section"));
        };
        let t = l.trim_start();
        if let Some(next) = root_line(&tower, line, l)? {
            tower = next;
        } else if let Some(rest) = t.strip_prefix("name ") {
            name = rest.trim().to_string();
        } else if let Some(rest) = t.strip_prefix("letters ") {
            let a = Alphabet::new(rest.split_whitespace()).map_err(|e| FormatError::at(line, indent(l) + 9, e.to_string()))?;
            alphabet = Some((line, a));
        } else if t == "relations" {
            break;
        } else {
            return Err(FormatError::at(line, indent(l) + 1, "expected `root`, `name`, `letters` or `relations`"));
        }
    }
    let (letters_line, alphabet) = alphabet.ok_or_else(|| FormatError::at(1, 1, "missing `letters` line"))?;
    let syms = SymbolTable::new(&alphabet).with_tower(&tower);
    let mut rels = Vec::new();
    for (line, l) in lines {
        let f = parse_poly(l, &syms).map_err(|e| FormatError::parse(line, 0, e))?;
        if f.is_zero() {
            return Err(FormatError::at(line, indent(l) + 1, "relation is zero"));
        }
        rels.push(f);
    }
    Presentation::new(name, alphabet, rels).map_err(|e: FpError| FormatError::at(letters_line, 1, e.to_string()))
}

pub fn print_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    let tower = p
        .relations()
        .iter()
        .flat_map(|r| r.terms().map(|(_, c)| c.tower().clone()).collect::<Vec<_>>())
        .max_by_key(|t| t.height())
        .unwrap_or_else(FieldTower::rationals);
    tower_header(&mut out, &tower);
    let _ = writeln!(out, "name {}", p.name());
    let _ = writeln!(out, "letters {}", p.alphabet().names().join(" "));
    out.push_str("relations\n");
    for r in p.relation_strings() {
        let _ = writeln!(out, "{r}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bgalois::build_be;

    fn q() -> Arc<FieldTower> {
        FieldTower::rationals()
    }

    #[test]
    fn rational_matrix() {
        let f = parse_form_file("# E_q for q = 2\nmatrix 2\n0 1\n-1/2 0\n", &q()).unwrap();
        assert_eq!(f, FormMatrix::e_q(&Scalar::from_int(2)).unwrap());
    }

    #[test]
    fn tower_round_trip() {
        let src = "root i: x^2 + 1\nroot w: x^2 - x*i - 3\nmatrix 2\n0, i\n-i + 1/2*w, 3\n";
        let file = parse_matrix_file(src, &q()).unwrap();
        assert_eq!(file.tower.height(), 2);
        let printed = print_matrix_file(&file.matrix);
        let again = parse_matrix_file(&printed, &q()).unwrap();
        assert_eq!(again.matrix, file.matrix);
        assert_eq!(print_matrix_file(&again.matrix), printed);
    }

    #[test]
    fn located_errors() {
        let e = parse_matrix_file("matrix 2\n1 2\n3 +\n", &q()).unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_matrix_file("matrix 2\n1 2 3\n3 4\n", &q()).unwrap_err();
        assert_eq!((e.line, e.msg.as_str()), (2, "expected 2 entries, found 3"));
        let e = parse_form_file("matrix 2\n1 2\n2 4\n", &q()).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.msg.contains("singular"), "{}", e.msg);
        let e = parse_matrix_file("root r: x^2 - 4\nmatrix 1\n1\n", &q()).unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_matrix_file("matrix 2\n1 0\n", &q()).unwrap_err();
        assert!(e.msg.contains("expected 2 rows"));
    }

    #[test]
    fn presentation_round_trip() {
        let e = FormMatrix::new(Matrix::from_ints(&[&[1, 2], &[0, 1]])).unwrap();
        let p = build_be(&e).unwrap();
        let text = print_presentation(&p);
        let back = parse_presentation_file(&text, &q()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn towers_merge_by_prefix() {
        let a = parse_matrix_file("root i: x^2 + 1\nmatrix 1\ni\n", &q()).unwrap();
        let b = parse_matrix_file("root i: x^2 + 1\nroot s: x^2 - 3\nmatrix 1\ns\n", &q()).unwrap();
        let c = parse_matrix_file("root s: x^2 - 3\nmatrix 1\ns\n", &q()).unwrap();
        assert_eq!(merge_towers([&a.tower, &b.tower]).unwrap().height(), 2);
        assert!(merge_towers([&a.tower, &c.tower]).is_err());
    }
}
