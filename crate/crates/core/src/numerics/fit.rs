//! Power-law fits of measured quantities against a ladder parameter.

use serde::Serialize;

use super::NumericsError;

/// Relative rise of consecutive ratios that counts as a violation.
pub const RATIO_GROWTH_LIMIT: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub predicted_exponent: f64,
    /// Least-squares slope of `ln value` against `ln parameter`.
    pub slope: f64,
    pub intercept: f64,
    /// `value / parameter^predicted` per sample, in ladder order.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// Some consecutive ratio in the second half of the ladder grew by more
    /// than [`RATIO_GROWTH_LIMIT`].
    pub violation: bool,
}

/// Fit `value ≈ C parameter^s` to samples given in ladder order (the order
/// in which the parameter approaches its limit).
pub fn fit_decay(samples: &[(f64, f64)], predicted_exponent: f64) -> Result<DecayFit, NumericsError> {
    if samples.len() < 4 {
        return Err(NumericsError::TooFewSamples { got: samples.len(), need: 4 });
    }
    if let Some(k) = samples.iter().position(|&(p, v)| !(p > 0.0 && v > 0.0)) {
        return Err(NumericsError::NonPositiveSample { index: k });
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|(p, _)| p.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, v)| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(NumericsError::InvalidParameter("ladder parameters are all equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let ratios: Vec<f64> = samples
        .iter()
        .map(|&(p, v)| v / p.powf(predicted_exponent))
        .collect();
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let start = ratios.len() / 2;
    let violation = ratios[start..]
        .windows(2)
        .any(|w| w[1] > w[0] * (1.0 + RATIO_GROWTH_LIMIT));
    Ok(DecayFit {
        predicted_exponent,
        slope,
        intercept: my - slope * mx,
        ratios,
        max_ratio,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (4..=12).map(|k| 2f64.powi(-k)).map(|e| (e, f(e))).collect()
    }

    #[test]
    fn square_law_slope() {
        let fit = fit_decay(&ladder(|e| e * e), 2.0).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-9);
    }

    #[test]
    fn exact_power_law() {
        let fit = fit_decay(&ladder(|e| 3.0 * e.powf(0.5)), 0.5).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.max_ratio - 3.0).abs() < 1e-12);
        assert!(!fit.violation);
    }

    #[test]
    fn logarithmic_correction_is_not_a_violation() {
        let fit = fit_decay(&ladder(|e| e * (1.0 - e.ln())), 0.5).unwrap();
        assert!(!fit.violation);
        assert!(fit.slope > 0.5);
    }

    #[test]
    fn slower_decay_is_a_violation() {
        let fit = fit_decay(&ladder(|e| e.powf(0.25)), 0.5).unwrap();
        assert!(fit.violation);
        let fit = fit_decay(&ladder(|_| 1.0), 0.5).unwrap();
        assert!(fit.violation);
    }

    #[test]
    fn rejects_short_or_nonpositive_ladders() {
        let s = vec![(0.5, 1.0), (0.25, 0.0), (0.125, 0.5), (0.0625, 0.2)];
        assert!(matches!(fit_decay(&s, 1.0), Err(NumericsError::NonPositiveSample { index: 1 })));
        assert!(matches!(fit_decay(&s[..3], 1.0), Err(NumericsError::TooFewSamples { got: 3, .. })));
    }
}
