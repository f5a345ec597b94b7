//! Dense exact matrices and their text/JSON encodings.
//!
//! Text format: a header line `rows cols` followed by `rows` lines of
//! whitespace-separated entries. Rational entries are written `p/q`.
//! JSON mirror: `{"rows":r,"cols":c,"entries":[[...],...]}` where entries
//! are numbers or `"p/q"` strings.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<Rational>;

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Copy with row `i` deleted.
    pub fn without_row(&self, i: usize) -> Self {
        let entries = (0..self.rows)
            .filter(|&r| r != i)
            .flat_map(|r| self.row(r).iter().cloned())
            .collect();
        Matrix {
            rows: self.rows - 1,
            cols: self.cols,
            entries,
        }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + for<'a> std::ops::Mul<&'a T, Output = T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| Rational::from_integer(x.clone()))
    }
}

impl RatMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64(rows).to_rational()
    }

    /// Integer matrix when every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.entries.iter().all(|q| q.is_integer()) {
            Some(self.map(|q| q.to_integer()))
        } else {
            None
        }
    }
}

/// Entry types that round-trip through the text and JSON formats.
pub trait Entry: Sized + Clone {
    fn parse_entry(s: &str) -> Result<Self>;
    fn format_entry(&self) -> String;
    fn json_entry(&self) -> Value;
    fn from_json_entry(v: &Value) -> Result<Self>;
}

impl Entry for BigInt {
    fn parse_entry(s: &str) -> Result<Self> {
        s.parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
    }

    fn format_entry(&self) -> String {
        self.to_string()
    }

    fn json_entry(&self) -> Value {
        match self.to_i64() {
            Some(v) => json!(v),
            None => json!(self.to_string()),
        }
    }

    fn from_json_entry(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) if n.is_i64() || n.is_u64() => Self::parse_entry(&n.to_string()),
            Value::String(s) => Self::parse_entry(s),
            other => Err(Error::Parse(format!("not an integer entry: {other}"))),
        }
    }
}

impl Entry for Rational {
    fn parse_entry(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn format_entry(&self) -> String {
        format_rational(self)
    }

    fn json_entry(&self) -> Value {
        if self.is_integer() {
            self.numer().json_entry()
        } else {
            json!(format_rational(self))
        }
    }

    fn from_json_entry(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            other => BigInt::from_json_entry(other).map(Rational::from_integer),
        }
    }
}

impl<T: Entry> Matrix<T> {
    /// Parses either the text format or the JSON mirror (detected by a leading `{`).
    pub fn parse(input: &str) -> Result<Self> {
        let trimmed = input.trim_start();
        if trimmed.is_empty() {
            return Err(Error::Parse("empty matrix input".into()));
        }
        if trimmed.starts_with('{') {
            let v: Value =
                serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
            return Self::from_json(&v);
        }
        Self::parse_text(trimmed)
    }

    pub fn parse_text(input: &str) -> Result<Self> {
        let mut lines = input
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header {header:?}")))
            })
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!(
                "header must be `rows cols`, got {header:?}"
            )));
        };
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {}", r + 1)))?;
            let row: Vec<T> = line
                .split_whitespace()
                .map(T::parse_entry)
                .collect::<Result<_>>()?;
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {cols}",
                    r + 1,
                    row.len()
                )));
            }
            entries.extend(row);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing data: {extra:?}")));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("missing `{key}`")))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let data = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `entries`".into()))?;
        if data.len() != rows {
            return Err(Error::Parse(format!(
                "expected {rows} rows, got {}",
                data.len()
            )));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for row in data {
            let row = row
                .as_array()
                .filter(|r| r.len() == cols)
                .ok_or_else(|| Error::Parse(format!("each row needs {cols} entries")))?;
            for e in row {
                entries.push(T::from_json_entry(e)?);
            }
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .row_iter()
            .map(|r| Value::Array(r.iter().map(Entry::json_entry).collect()))
            .collect();
        json!({"rows": self.rows, "cols": self.cols, "entries": rows})
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in self.row_iter() {
            let line: Vec<String> = r.iter().map(Entry::format_entry).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl<T: Entry> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn text_format() {
        let m = RatMatrix::parse("2 2\n1 -1/2\n# comment\n0 3\n").unwrap();
        assert_eq!(*m.get(0, 1), frac(-1, 2));
        assert_eq!(RatMatrix::parse(&m.to_text()).unwrap(), m);
        assert!(IntMatrix::parse("").is_err());
        assert!(IntMatrix::parse("2 2\n1 2\n").is_err());
        assert!(IntMatrix::parse("1 2\n1 2 3\n").is_err());
        assert!(IntMatrix::parse("1 1\n1/2\n").is_err());
    }

    #[test]
    fn json_mirror() {
        let m = IntMatrix::parse(r#"{"rows":1,"cols":3,"entries":[[1,"-2",3]]}"#).unwrap();
        assert_eq!(m, IntMatrix::from_i64(&[&[1, -2, 3]]));
        assert_eq!(IntMatrix::from_json(&m.to_json()).unwrap(), m);
        let empty = IntMatrix::parse("0 2\n").unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 2));
    }

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let b = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), IntMatrix::from_i64(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), IntMatrix::from_i64(&[&[1, 3], &[2, 4]]));
        assert!(a.mul(&IntMatrix::zeros(3, 1)).is_err());
    }
}
