//! Lazily sized lower-triangular and lower-Hessenberg tables of scalars.

use std::io::{self, Write};

use serde_json::Value;

use crate::numerics::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableShape {
    LowerTriangular,
    LowerHessenberg,
}

/// Row-major table of scalars with entries above the band structurally
/// absent. Row `n` stores columns `0..=n` (triangular) or `0..=n+1`
/// (Hessenberg).
///
/// Each row carries a scale: the largest magnitude seen among the terms
/// that produced its entries. Float-backend zero tests measure residuals
/// against this scale; the exact backend ignores it.
#[derive(Clone, Debug)]
pub struct TriangularTable<S> {
    shape: TableShape,
    unit_diagonal: bool,
    rows: Vec<Vec<S>>,
    row_scales: Vec<f64>,
}

impl<S: Scalar> TriangularTable<S> {
    pub fn new(shape: TableShape, unit_diagonal: bool) -> Self {
        Self {
            shape,
            unit_diagonal,
            rows: Vec::new(),
            row_scales: Vec::new(),
        }
    }

    /// Number of stored columns for row `n`.
    pub fn band_cols(&self, n: usize) -> usize {
        match self.shape {
            TableShape::LowerTriangular => n + 1,
            TableShape::LowerHessenberg => n + 2,
        }
    }

    /// Append a row; its scale defaults to the largest entry magnitude.
    pub fn push_row(&mut self, row: Vec<S>) {
        let scale = row.iter().map(Scalar::magnitude).fold(0.0f64, f64::max);
        self.push_row_with_scale(row, scale);
    }

    pub fn push_row_with_scale(&mut self, row: Vec<S>, scale: f64) {
        let n = self.rows.len();
        debug_assert_eq!(row.len(), self.band_cols(n), "row width must match band");
        if self.unit_diagonal {
            debug_assert!(row[n] == S::one(), "unit-diagonal table requires 1 at (n,n)");
        }
        let entry_max = row.iter().map(Scalar::magnitude).fold(0.0f64, f64::max);
        self.rows.push(row);
        self.row_scales.push(scale.max(entry_max));
    }

    pub fn shape(&self) -> TableShape {
        self.shape
    }

    pub fn unit_diagonal(&self) -> bool {
        self.unit_diagonal
    }

    /// Number of rows; a table built to depth N has N+1 rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, n: usize) -> &[S] {
        &self.rows[n]
    }

    /// Entry (n, k); structurally absent entries above the band are zero.
    pub fn get(&self, n: usize, k: usize) -> S {
        let row = &self.rows[n];
        row.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn row_scale(&self, n: usize) -> f64 {
        self.row_scales[n]
    }

    pub fn max_scale(&self) -> f64 {
        self.row_scales.iter().copied().fold(0.0, f64::max)
    }

    /// Nested arrays of canonical scalar text.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    Value::Array(row.iter().map(|v| Value::String(v.to_text())).collect())
                })
                .collect(),
        )
    }

    /// One row per line, comma-separated canonical scalar text.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| v.to_text()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Product of two unit lower-triangular tables, rows limited to the
/// shorter factor. Row scales record the largest term magnitude seen, so
/// float cancellation is judged fairly downstream.
pub fn multiply_unit_lower<S: Scalar>(
    a: &TriangularTable<S>,
    b: &TriangularTable<S>,
) -> TriangularTable<S> {
    debug_assert_eq!(a.shape(), TableShape::LowerTriangular);
    debug_assert_eq!(b.shape(), TableShape::LowerTriangular);
    let rows = a.len().min(b.len());
    let mut out = TriangularTable::new(TableShape::LowerTriangular, true);
    for n in 0..rows {
        let mut row = vec![S::zero(); n + 1];
        let mut scale = 0.0f64;
        for (k, entry) in row.iter_mut().enumerate() {
            let mut acc = S::zero();
            for j in k..=n {
                let term = a.get(n, j) * b.get(j, k);
                scale = scale.max(term.magnitude());
                acc = acc + term;
            }
            *entry = acc;
        }
        out.push_row_with_scale(row, scale);
    }
    out
}
