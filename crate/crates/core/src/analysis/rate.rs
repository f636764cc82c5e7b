use serde::Serialize;

use crate::error::{Error, Result};
use crate::trace::RunTrace;

/// Least-squares fit `log r = slope * log(t + offset) + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Default fraction of the run used by [`fit_rate`].
pub const DEFAULT_FIT_WINDOW: f64 = 0.5;
/// Minimum number of records for a fit.
pub const MIN_FIT_RECORDS: usize = 100;

/// Fits the decay exponent of the certificate residual over the last
/// `window` fraction of the run, against `log(t + gamma)` (`gamma = 0` for
/// constant-step methods).
pub fn fit_rate(trace: &RunTrace, window: f64) -> Result<RateFit> {
    let offset = trace.gamma().unwrap_or(0.0);
    let (ts, rs): (Vec<f64>, Vec<f64>) = trace
        .records
        .iter()
        .map(|r| (r.t as f64, r.certificate_residual.unwrap_or(f64::NAN)))
        .unzip();
    fit_rate_series(&ts, &rs, offset, window)
}

/// [`fit_rate`] over raw `(t, residual)` series.
pub fn fit_rate_series(ts: &[f64], residuals: &[f64], offset: f64, window: f64) -> Result<RateFit> {
    if ts.len() != residuals.len() {
        return Err(Error::InvalidParameter("series lengths differ".into()));
    }
    if ts.len() < MIN_FIT_RECORDS {
        return Err(Error::NotApplicable(format!(
            "rate fit needs at least {MIN_FIT_RECORDS} records, got {}",
            ts.len()
        )));
    }
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "fit window must lie in (0, 1], got {window}"
        )));
    }
    let n = ts.len();
    let first = n - ((n as f64 * window).ceil() as usize).clamp(2, n);
    let mut xs = Vec::with_capacity(n - first);
    let mut ys = Vec::with_capacity(n - first);
    for (t, r) in ts[first..].iter().zip(&residuals[first..]) {
        if !(*r > 0.0 && r.is_finite()) {
            return Err(Error::NotApplicable(format!(
                "nonpositive or missing residual {r} at t = {t}; fit skipped"
            )));
        }
        xs.push((t + offset).ln());
        ys.push(r.ln());
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::NotApplicable("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    Ok(RateFit {
        slope,
        intercept: my - slope * mx,
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(power: f64, gamma: f64) -> (Vec<f64>, Vec<f64>) {
        (0..1000)
            .map(|t| (t as f64, 3.7 / (t as f64 + gamma).powf(power)))
            .unzip()
    }

    #[test]
    fn recovers_synthetic_exponents() {
        let (ts, rs) = synthetic(0.5, 2.0);
        let fit = fit_rate_series(&ts, &rs, 2.0, 0.5).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-6);
        assert!((fit.intercept - 3.7f64.ln()).abs() < 1e-6);
        let (ts, rs) = synthetic(1.0, 2.0);
        assert!((fit_rate_series(&ts, &rs, 2.0, 0.5).unwrap().slope + 1.0).abs() < 1e-6);
    }

    #[test]
    fn nonpositive_residuals_skip_the_fit() {
        let (ts, mut rs) = synthetic(0.5, 2.0);
        rs[900] = 0.0;
        assert!(matches!(
            fit_rate_series(&ts, &rs, 2.0, 0.5),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn short_series_rejected() {
        let (ts, rs) = synthetic(0.5, 2.0);
        assert!(fit_rate_series(&ts[..50], &rs[..50], 2.0, 0.5).is_err());
        assert!(fit_rate_series(&ts, &rs, 2.0, 0.0).is_err());
    }
}
