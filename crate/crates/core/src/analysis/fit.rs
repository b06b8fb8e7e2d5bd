//! Log-space least-squares fits of success rate against problem size.
//!
//! Exponential: `ln y = ln A + r n`. Gaussian: `ln y = ln A + c n^2`.
//! Both reduce to ordinary linear regression on transformed coordinates, and
//! `r_squared` is reported in that log space so the two are comparable.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    Gaussian,
    Exponential,
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitModel::Gaussian => "gaussian",
            FitModel::Exponential => "exponential",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: FitModel,
    pub amplitude: f64,
    /// Exponential: the rate `r`. Gaussian: the coefficient `c` of `n^2`.
    pub shape: f64,
    pub r_squared: f64,
    pub points_used: usize,
    /// x values dropped because their y was not positive.
    pub excluded: Vec<f64>,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        match self.model {
            FitModel::Exponential => self.amplitude * (self.shape * x).exp(),
            FitModel::Gaussian => self.amplitude * (self.shape * x * x).exp(),
        }
    }

    /// Standard deviation `sigma` with `c = -1 / (2 sigma^2)`, for decaying Gaussian fits.
    pub fn gaussian_width(&self) -> Option<f64> {
        (self.model == FitModel::Gaussian && self.shape < 0.0)
            .then(|| (-1.0 / (2.0 * self.shape)).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_regression(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::NoFit(format!("{} x values but {} y values", xs.len(), ys.len())));
    }
    let m = xs.len();
    if m < 3 {
        return Err(Error::NoFit(format!("need at least 3 points, have {m}")));
    }
    let mf = m as f64;
    let mx = xs.iter().sum::<f64>() / mf;
    let my = ys.iter().sum::<f64>() / mf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::NoFit("all x values are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

fn fit(model: FitModel, points: &[(f64, f64)]) -> Result<FitResult> {
    let (kept, dropped): (Vec<_>, Vec<_>) = points.iter().partition(|(_, y)| *y > 0.0);
    if kept.is_empty() {
        return Err(Error::NoFit("every success value is zero".into()));
    }
    let xs: Vec<f64> = kept
        .iter()
        .map(|(x, _)| match model {
            FitModel::Exponential => *x,
            FitModel::Gaussian => x * x,
        })
        .collect();
    let ys: Vec<f64> = kept.iter().map(|(_, y)| y.ln()).collect();
    let lin = linear_regression(&xs, &ys)?;
    Ok(FitResult {
        model,
        amplitude: lin.intercept.exp(),
        shape: lin.slope,
        r_squared: lin.r_squared,
        points_used: kept.len(),
        excluded: dropped.iter().map(|(x, _)| *x).collect(),
    })
}

pub fn fit_exponential(points: &[(f64, f64)]) -> Result<FitResult> {
    fit(FitModel::Exponential, points)
}

pub fn fit_gaussian(points: &[(f64, f64)]) -> Result<FitResult> {
    fit(FitModel::Gaussian, points)
}

/// Both fits over the same points; the first element is the exponential one.
pub fn fit_success_curve(points: &[(f64, f64)]) -> Result<(FitResult, FitResult)> {
    Ok((fit_exponential(points)?, fit_gaussian(points)?))
}

/// The fit with the higher `r_squared`.
pub fn better_fit<'a>(a: &'a FitResult, b: &'a FitResult) -> &'a FitResult {
    if b.r_squared > a.r_squared {
        b
    } else {
        a
    }
}
