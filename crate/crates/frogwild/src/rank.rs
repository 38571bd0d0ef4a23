//! Probability vectors over vertices.

use std::io::{self, BufRead, Write};

use thiserror::Error;

/// Tolerance on the simplex-sum invariant.
pub const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RankError {
    #[error("empty vector")]
    Empty,
    #[error("negative entry {value} at index {index}")]
    Negative { index: usize, value: f64 },
    #[error("entries sum to {sum}, expected 1 within {SIMPLEX_TOL}")]
    NotNormalized { sum: f64 },
    #[error("malformed score row at line {line}")]
    Malformed { line: usize },
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

/// A point on the probability simplex: nonnegative entries summing to 1
/// within [`SIMPLEX_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    values: Vec<f64>,
}

impl RankVector {
    pub fn new(values: Vec<f64>) -> Result<Self, RankError> {
        if values.is_empty() {
            return Err(RankError::Empty);
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(RankError::Negative { index, value });
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(RankError::NotNormalized { sum });
        }
        Ok(Self { values })
    }

    /// Normalizes a nonnegative vector with positive mass onto the simplex.
    pub fn normalized(mut values: Vec<f64>) -> Result<Self, RankError> {
        let sum: f64 = values.iter().sum();
        if !(sum > 0.0) {
            return Err(RankError::NotNormalized { sum });
        }
        for v in &mut values {
            *v /= sum;
        }
        Self::new(values)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one vertex");
        Self {
            values: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on vertex `i`.
    pub fn indicator(n: usize, i: usize) -> Self {
        assert!(i < n, "indicator index out of range");
        let mut values = vec![0.0; n];
        values[i] = 1.0;
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn l1_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    pub fn linf_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn total_variation(&self, other: &Self) -> f64 {
        0.5 * self.l1_distance(other)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Writes the "vertex,score" CSV form with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W, preamble: Option<&str>) -> io::Result<()> {
        if let Some(line) = preamble {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "vertex,score")?;
        for (vertex, value) in self.values.iter().enumerate() {
            writeln!(w, "{vertex},{value:.16e}")?;
        }
        Ok(())
    }

    /// Reads the "vertex,score" CSV form. Lines starting with '#' are
    /// ignored; vertices must appear densely in ascending order.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, RankError> {
        let mut values = Vec::new();
        let mut saw_header = false;
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if !saw_header {
                if trimmed != "vertex,score" {
                    return Err(RankError::Malformed { line: idx + 1 });
                }
                saw_header = true;
                continue;
            }
            let mut parts = trimmed.split(',');
            let vertex: usize = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or(RankError::Malformed { line: idx + 1 })?;
            let score: f64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or(RankError::Malformed { line: idx + 1 })?;
            if parts.next().is_some() || vertex != values.len() {
                return Err(RankError::Malformed { line: idx + 1 });
            }
            values.push(score);
        }
        Self::new(values)
    }
}
