//! Scree-test breakpoint on a ranked, non-increasing series.
//!
//! Every candidate `k` splits the series into two least-squares lines that
//! share point `k`. The `k` with the smallest total squared error wins;
//! near-ties (relative 1e-9 of the total sum of squares) go to the smaller `k`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::JournalId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BreakpointError {
    #[error("series has {0} points; at least 3 are needed")]
    TooShort(usize),
    #[error("value at rank {rank} rises above the previous one")]
    NotNonIncreasing { rank: usize },
    #[error("value at rank {rank} is negative or not finite")]
    BadValue { rank: usize },
    #[error("rank {rank} carries no journal identity")]
    MissingJournal { rank: usize },
    #[error("fit k={k} does not belong to a series of length {len}")]
    FitMismatch { k: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreePoint {
    pub rank: usize,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub journal_id: Option<JournalId>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScreeSeries {
    pub points: Vec<ScreePoint>,
}

impl ScreeSeries {
    /// Checked constructor; ranks are renumbered 1..=n in the given order.
    pub fn new(values: Vec<(f64, Option<JournalId>)>) -> Result<Self, BreakpointError> {
        let points: Vec<ScreePoint> = values
            .into_iter()
            .enumerate()
            .map(|(i, (value, journal_id))| ScreePoint {
                rank: i + 1,
                value,
                journal_id,
            })
            .collect();
        let s = ScreeSeries { points };
        s.validate()?;
        Ok(s)
    }

    pub fn from_values(values: &[f64]) -> Result<Self, BreakpointError> {
        Self::new(values.iter().map(|&v| (v, None)).collect())
    }

    pub fn validate(&self) -> Result<(), BreakpointError> {
        for (i, p) in self.points.iter().enumerate() {
            if !p.value.is_finite() || p.value < 0.0 {
                return Err(BreakpointError::BadValue { rank: p.rank });
            }
            if i > 0 && p.value > self.points[i - 1].value {
                return Err(BreakpointError::NotNonIncreasing { rank: p.rank });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScreeMode {
    /// Value regressed on rank; residuals measured along the value axis.
    #[default]
    VerticalError,
    /// Rank regressed on value; residuals measured along the rank axis.
    HorizontalError,
}

/// `y = intercept + slope * x`. In horizontal mode `y` is the rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakpointFit {
    pub k: usize,
    pub mode: ScreeMode,
    pub segment1: Line,
    pub segment2: Line,
    pub sse_total: f64,
    pub sse_by_k: BTreeMap<usize, f64>,
    /// All values equal: every split fits exactly and `k` is the tie-break.
    pub degenerate: bool,
}

/// Ordinary least squares of `y` on `x`, summed in index order.
fn ols(x: &[f64], y: &[f64]) -> (Line, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    (Line { slope, intercept }, sse)
}

fn total_ss(y: &[f64]) -> f64 {
    let m = y.iter().sum::<f64>() / y.len() as f64;
    y.iter().map(|v| (v - m) * (v - m)).sum()
}

fn split_fit(ranks: &[f64], values: &[f64], k: usize, mode: ScreeMode) -> (Line, Line, f64) {
    let (x, y) = match mode {
        ScreeMode::VerticalError => (ranks, values),
        ScreeMode::HorizontalError => (values, ranks),
    };
    let (l1, s1) = ols(&x[..k], &y[..k]);
    let (l2, s2) = ols(&x[k - 1..], &y[k - 1..]);
    (l1, l2, s1 + s2)
}

pub fn fit_breakpoint(series: &ScreeSeries, mode: ScreeMode) -> Result<BreakpointFit, BreakpointError> {
    let n = series.len();
    if n < 3 {
        return Err(BreakpointError::TooShort(n));
    }
    series.validate()?;
    let values = series.values();
    let ranks: Vec<f64> = (1..=n).map(|r| r as f64).collect();
    let fits: Vec<(usize, Line, Line, f64)> = (2..n)
        .into_par_iter()
        .map(|k| {
            let (l1, l2, sse) = split_fit(&ranks, &values, k, mode);
            (k, l1, l2, sse)
        })
        .collect();
    let min = fits.iter().map(|f| f.3).fold(f64::INFINITY, f64::min);
    let scale = match mode {
        ScreeMode::VerticalError => total_ss(&values),
        ScreeMode::HorizontalError => total_ss(&ranks),
    };
    let tol = 1e-9 * scale + f64::MIN_POSITIVE;
    let degenerate = values.iter().all(|&v| v == values[0]);
    // A flat series has no elbow; the conservative split is reported.
    let best = if degenerate {
        &fits[0]
    } else {
        fits.iter().find(|f| f.3 <= min + tol).unwrap()
    };
    Ok(BreakpointFit {
        k: best.0,
        mode,
        segment1: best.1,
        segment2: best.2,
        sse_total: best.3,
        sse_by_k: fits.iter().map(|f| (f.0, f.3)).collect(),
        degenerate,
    })
}

/// Journals at ranks 1..=k, in rank order.
pub fn select_core(series: &ScreeSeries, fit: &BreakpointFit) -> Result<Vec<JournalId>, BreakpointError> {
    if fit.k < 1 || fit.k > series.len() {
        return Err(BreakpointError::FitMismatch {
            k: fit.k,
            len: series.len(),
        });
    }
    series.points[..fit.k]
        .iter()
        .map(|p| {
            p.journal_id
                .clone()
                .ok_or(BreakpointError::MissingJournal { rank: p.rank })
        })
        .collect()
}

pub fn select_core_set(series: &ScreeSeries, fit: &BreakpointFit) -> Result<BTreeSet<JournalId>, BreakpointError> {
    select_core(series, fit).map(|v| v.into_iter().collect())
}
