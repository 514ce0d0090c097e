use crate::error::Result;
use crate::simkit::{ArimaModel, JonswapParams};

/// The twelve ARIMA models of the stationary/non-stationary experiment, `a` to `l`.
///
/// The first six are stationary. MA polynomials follow `1 + theta_1 z + ...`.
pub fn experiment1_models() -> Result<Vec<ArimaModel>> {
    Ok(vec![
        ArimaModel::arma(&[0.9], &[])?,
        ArimaModel::arma(&[0.95, -0.1], &[])?,
        ArimaModel::arma(&[0.95], &[0.1])?,
        ArimaModel::arma(&[-0.1], &[-0.95])?,
        ArimaModel::arma(&[], &[-0.9])?,
        ArimaModel::arma(&[], &[-0.95, -0.1])?,
        ArimaModel::arima(&[-0.1], 1, &[])?,
        ArimaModel::arima(&[], 1, &[])?,
        ArimaModel::arima(&[], 1, &[0.1])?,
        ArimaModel::arima(&[], 1, &[-0.1])?,
        ArimaModel::arima(&[0.1], 1, &[-0.1])?,
        ArimaModel::arima(&[0.05], 1, &[-0.05])?,
    ])
}

/// The five ARMA models of the group-recovery experiment, `a` to `e`.
pub fn experiment2_models() -> Result<Vec<ArimaModel>> {
    Ok(vec![
        ArimaModel::arma(&[0.5], &[])?,
        ArimaModel::arma(&[], &[0.7])?,
        ArimaModel::arma(&[0.6, 0.2], &[])?,
        ArimaModel::arma(&[], &[0.8, -0.6])?,
        ArimaModel::arma(&[0.8], &[0.2])?,
    ])
}

/// The two close JONSWAP spectra: `Hs = 3`, `Tp = 3.6 sqrt(Hs)` and `4.1 sqrt(Hs)`.
pub fn experiment3_spectra() -> Result<[JonswapParams; 2]> {
    let hs: f64 = 3.0;
    Ok([
        JonswapParams::new(hs, 3.6 * hs.sqrt())?,
        JonswapParams::new(hs, 4.1 * hs.sqrt())?,
    ])
}
