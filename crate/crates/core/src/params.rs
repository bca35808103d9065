//! Parameter points and observed series.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Open support of the long-memory parameter.
pub const D_BOUNDS: (f64, f64) = (-0.5, 0.5);
/// Open support of the AR and MA coefficients.
pub const ARMA_BOUNDS: (f64, f64) = (-1.0, 1.0);

/// The four supported ARFIMA(p, d, q) orders with p, q <= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelOrder {
    #[serde(rename = "0d0")]
    Arfima0d0,
    #[serde(rename = "1d0")]
    Arfima1d0,
    #[serde(rename = "0d1")]
    Arfima0d1,
    #[serde(rename = "1d1")]
    Arfima1d1,
}

impl ModelOrder {
    pub fn has_phi(self) -> bool {
        matches!(self, ModelOrder::Arfima1d0 | ModelOrder::Arfima1d1)
    }

    pub fn has_theta(self) -> bool {
        matches!(self, ModelOrder::Arfima0d1 | ModelOrder::Arfima1d1)
    }

    pub fn from_flags(has_phi: bool, has_theta: bool) -> Self {
        match (has_phi, has_theta) {
            (false, false) => ModelOrder::Arfima0d0,
            (true, false) => ModelOrder::Arfima1d0,
            (false, true) => ModelOrder::Arfima0d1,
            (true, true) => ModelOrder::Arfima1d1,
        }
    }

    /// Number of ARMA coefficients (0, 1 or 2).
    pub fn arma_dim(self) -> usize {
        self.has_phi() as usize + self.has_theta() as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            ModelOrder::Arfima0d0 => "0d0",
            ModelOrder::Arfima1d0 => "1d0",
            ModelOrder::Arfima0d1 => "0d1",
            ModelOrder::Arfima1d1 => "1d1",
        }
    }
}

impl fmt::Display for ModelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ARFIMA({})", self.label().replace('d', ",d,"))
    }
}

impl FromStr for ModelOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let norm = norm.trim_start_matches("arfima");
        match norm {
            "0d0" => Ok(ModelOrder::Arfima0d0),
            "1d0" => Ok(ModelOrder::Arfima1d0),
            "0d1" => Ok(ModelOrder::Arfima0d1),
            "1d1" => Ok(ModelOrder::Arfima1d1),
            _ => Err(Error::Input(format!("unknown model order `{s}`"))),
        }
    }
}

/// A parameter point (d, phi, theta, sigma2). Absent coefficients encode the order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArfimaParams {
    pub d: f64,
    pub phi: Option<f64>,
    pub theta: Option<f64>,
    pub sigma2: f64,
}

fn inside(x: f64, (lo, hi): (f64, f64)) -> bool {
    x > lo && x < hi
}

impl ArfimaParams {
    /// Validating constructor.
    pub fn new(d: f64, phi: Option<f64>, theta: Option<f64>, sigma2: f64) -> Result<Self> {
        let p = ArfimaParams { d, phi, theta, sigma2 };
        p.validate()?;
        Ok(p)
    }

    /// Build from an order and raw coefficients; coefficients the order excludes are dropped.
    pub fn with_order(order: ModelOrder, d: f64, phi: f64, theta: f64, sigma2: f64) -> Result<Self> {
        Self::new(
            d,
            order.has_phi().then_some(phi),
            order.has_theta().then_some(theta),
            sigma2,
        )
    }

    pub fn white_noise(sigma2: f64) -> Self {
        ArfimaParams { d: 0.0, phi: None, theta: None, sigma2 }
    }

    pub fn order(&self) -> ModelOrder {
        ModelOrder::from_flags(self.phi.is_some(), self.theta.is_some())
    }

    pub fn phi_or_zero(&self) -> f64 {
        self.phi.unwrap_or(0.0)
    }

    pub fn theta_or_zero(&self) -> f64 {
        self.theta.unwrap_or(0.0)
    }

    /// Same point with a different innovation variance.
    pub fn with_sigma2(mut self, sigma2: f64) -> Self {
        self.sigma2 = sigma2;
        self
    }

    /// True when (d, phi, theta) lies in the open stationarity/invertibility box.
    pub fn in_support(&self) -> bool {
        inside(self.d, D_BOUNDS)
            && self.phi.is_none_or(|p| inside(p, ARMA_BOUNDS))
            && self.theta.is_none_or(|t| inside(t, ARMA_BOUNDS))
    }

    pub fn validate(&self) -> Result<()> {
        if !inside(self.d, D_BOUNDS) {
            return Err(Error::Domain(format!("d = {} outside (-0.5, 0.5)", self.d)));
        }
        if let Some(p) = self.phi {
            if !inside(p, ARMA_BOUNDS) {
                return Err(Error::Domain(format!("phi = {p} outside (-1, 1)")));
            }
        }
        if let Some(t) = self.theta {
            if !inside(t, ARMA_BOUNDS) {
                return Err(Error::Domain(format!("theta = {t} outside (-1, 1)")));
            }
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::Domain(format!("sigma2 = {} must be positive", self.sigma2)));
        }
        Ok(())
    }

    /// Components as a fixed array (d, phi, theta, sigma2), absent coefficients as NaN.
    pub fn to_array(&self) -> [f64; 4] {
        [
            self.d,
            self.phi.unwrap_or(f64::NAN),
            self.theta.unwrap_or(f64::NAN),
            self.sigma2,
        ]
    }
}

/// Named scalar components of a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    D,
    Phi,
    Theta,
    Sigma2,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::D, Component::Phi, Component::Theta, Component::Sigma2];

    pub fn name(self) -> &'static str {
        match self {
            Component::D => "d",
            Component::Phi => "phi",
            Component::Theta => "theta",
            Component::Sigma2 => "sigma2",
        }
    }

    pub fn get(self, p: &ArfimaParams) -> Option<f64> {
        match self {
            Component::D => Some(p.d),
            Component::Phi => p.phi,
            Component::Theta => p.theta,
            Component::Sigma2 => Some(p.sigma2),
        }
    }

    /// Components present for a given order, in canonical order.
    pub fn for_order(order: ModelOrder) -> Vec<Component> {
        let mut v = vec![Component::D];
        if order.has_phi() {
            v.push(Component::Phi);
        }
        if order.has_theta() {
            v.push(Component::Theta);
        }
        v.push(Component::Sigma2);
        v
    }
}

/// A real-valued time series, optionally with its sample mean removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    values: Vec<f64>,
    demeaned: bool,
}

impl Series {
    /// Wrap raw values without modification.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Input(format!(
                "fewer than 2 observations (got {})",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!("non-finite value at index {i}")));
        }
        Ok(Series { values, demeaned: false })
    }

    /// Wrap values and subtract their sample mean.
    pub fn demeaned(values: Vec<f64>) -> Result<Self> {
        Ok(Self::new(values)?.demean())
    }

    /// Values that are known to be zero-mean by construction (simulation output, filters).
    pub(crate) fn from_zero_mean(values: Vec<f64>) -> Self {
        Series { values, demeaned: true }
    }

    pub fn demean(mut self) -> Self {
        let m = crate::stats::mean(&self.values);
        self.values.iter_mut().for_each(|v| *v -= m);
        self.demeaned = true;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_demeaned(&self) -> bool {
        self.demeaned
    }

    /// Leading `n` observations (not re-demeaned).
    pub fn head(&self, n: usize) -> Result<Series> {
        if n > self.len() {
            return Err(Error::Contract(format!("head({n}) of series of length {}", self.len())));
        }
        Ok(Series { values: self.values[..n].to_vec(), demeaned: self.demeaned })
    }

    pub fn scaled(&self, c: f64) -> Series {
        Series { values: self.values.iter().map(|v| v * c).collect(), demeaned: self.demeaned }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_parsing() {
        assert_eq!("1d1".parse::<ModelOrder>().unwrap(), ModelOrder::Arfima1d1);
        assert_eq!("ARFIMA(0,d,1)".parse::<ModelOrder>().unwrap(), ModelOrder::Arfima0d1);
        assert!("2d1".parse::<ModelOrder>().is_err());
        assert_eq!(ModelOrder::Arfima1d0.to_string(), "ARFIMA(1,d,0)");
    }

    #[test]
    fn params_domain() {
        assert!(ArfimaParams::new(0.5, None, None, 1.0).is_err());
        assert!(ArfimaParams::new(0.2, Some(1.0), None, 1.0).is_err());
        assert!(ArfimaParams::new(0.2, None, Some(-1.0), 1.0).is_err());
        assert!(ArfimaParams::new(0.2, None, None, 0.0).is_err());
        let p = ArfimaParams::with_order(ModelOrder::Arfima1d0, 0.3, 0.2, 0.9, 1.0).unwrap();
        assert_eq!(p.theta, None);
        assert_eq!(p.order(), ModelOrder::Arfima1d0);
    }

    #[test]
    fn series_demeaning() {
        let s = Series::demeaned(vec![1.0, 3.0]).unwrap();
        assert_eq!(s.values(), &[-1.0, 1.0]);
        assert!(s.is_demeaned());
        assert!(Series::new(vec![1.0]).is_err());
    }
}
