//! Maximum-likelihood fits of ARFIMA and ARMA models with Hessian-based covariance.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::frac_diff_values;
use crate::likelihood::unit_innovations;
use crate::optim::NelderMead;
use crate::params::{ArfimaParams, Component, ModelOrder, Series, ARMA_BOUNDS, D_BOUNDS};
use crate::spectral::{gph_estimate, PeriodogramPlan, Whittle, WhittleSpec};
use crate::stats::autocorrelation;

const LN_2PI: f64 = 1.837_877_066_409_345_5;
const HESSIAN_STEP: f64 = 1e-4;

/// Result of a maximum-likelihood fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MleFit {
    pub params: ArfimaParams,
    /// Estimated components, in the order used by `cov` (a subset of d, phi, theta).
    pub components: Vec<Component>,
    /// Asymptotic covariance of the estimated components.
    pub cov: DMatrix<f64>,
    /// Asymptotic variance of the innovation-variance estimate, 2 sigma2^2 / n.
    pub sigma2_var: f64,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl MleFit {
    /// Standard error of one estimated component (sigma2 included).
    pub fn std_error(&self, c: Component) -> Option<f64> {
        if c == Component::Sigma2 {
            return Some(self.sigma2_var.sqrt());
        }
        let i = self.components.iter().position(|x| *x == c)?;
        Some(self.cov[(i, i)].max(0.0).sqrt())
    }

    /// Wald interval `estimate ± z * se`.
    pub fn wald_interval(&self, c: Component, z: f64) -> Option<(f64, f64)> {
        let est = c.get(&self.params)?;
        let se = self.std_error(c)?;
        Some((est - z * se, est + z * se))
    }
}

/// The free coordinates of a fit and their boxes.
#[derive(Debug, Clone)]
struct Layout {
    components: Vec<Component>,
    bounds: Vec<(f64, f64)>,
    order: ModelOrder,
}

impl Layout {
    fn new(order: ModelOrder, with_d: bool) -> Self {
        let mut components = Vec::new();
        let mut bounds = Vec::new();
        if with_d {
            components.push(Component::D);
            bounds.push(D_BOUNDS);
        }
        if order.has_phi() {
            components.push(Component::Phi);
            bounds.push(ARMA_BOUNDS);
        }
        if order.has_theta() {
            components.push(Component::Theta);
            bounds.push(ARMA_BOUNDS);
        }
        Layout { components, bounds, order }
    }

    fn to_x(&self, u: &[f64]) -> Vec<f64> {
        u.iter().zip(&self.bounds).map(|(u, (lo, hi))| lo + (hi - lo) / (1.0 + (-u).exp())).collect()
    }

    fn to_u(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.bounds)
            .map(|(x, (lo, hi))| {
                let p = ((x - lo) / (hi - lo)).clamp(1e-9, 1.0 - 1e-9);
                (p / (1.0 - p)).ln()
            })
            .collect()
    }

    /// dx/du at u.
    fn jacobian(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(&self.bounds)
            .map(|(u, (lo, hi))| {
                let s = 1.0 / (1.0 + (-u).exp());
                (hi - lo) * s * (1.0 - s)
            })
            .collect()
    }

    /// (d, phi, theta) with absent components at zero.
    fn dpt(&self, x: &[f64]) -> (f64, f64, f64) {
        let mut out = (0.0, 0.0, 0.0);
        for (c, v) in self.components.iter().zip(x) {
            match c {
                Component::D => out.0 = *v,
                Component::Phi => out.1 = *v,
                Component::Theta => out.2 = *v,
                Component::Sigma2 => {}
            }
        }
        out
    }
}

/// Profiled negative log-likelihood per observation, shifted by a data-dependent constant so
/// that rescaling the series leaves it unchanged.
struct Profile<'a> {
    y: &'a [f64],
    layout: &'a Layout,
    log_q0: f64,
}

impl Profile<'_> {
    fn innovations_at(&self, x: &[f64]) -> Option<crate::toeplitz::Innovations> {
        let (d, phi, theta) = self.layout.dpt(x);
        unit_innovations(self.y, d, phi, theta).ok()
    }

    fn per_obs(&self, u: &[f64]) -> f64 {
        let x = self.layout.to_x(u);
        let n = self.y.len() as f64;
        match self.innovations_at(&x) {
            Some(inn) if inn.quad_form > 0.0 => 0.5 * ((inn.quad_form.ln() - self.log_q0) + inn.log_det / n),
            _ => f64::INFINITY,
        }
    }
}

/// Profile log-likelihood at a point, with sigma2 replaced by its maximiser Q/n.
fn profile_loglik(y: &[f64], d: f64, phi: f64, theta: f64) -> Result<(f64, f64)> {
    let n = y.len() as f64;
    let inn = unit_innovations(y, d, phi, theta)?;
    let s2 = inn.quad_form / n;
    Ok((-0.5 * (n * LN_2PI + n * s2.ln() + n + inn.log_det), s2))
}

fn method_of_moments_theta(rho1: f64) -> f64 {
    // rho1 = theta / (1 + theta^2)
    if rho1.abs() < 1e-12 {
        0.0
    } else if rho1.abs() >= 0.5 {
        0.9 * rho1.signum()
    } else {
        ((1.0 - (1.0 - 4.0 * rho1 * rho1).sqrt()) / (2.0 * rho1)).clamp(-0.9, 0.9)
    }
}

/// Start point: log-periodogram regression for d, moment estimates for phi and theta on the
/// fractionally differenced series.
fn moment_start(y: &[f64], layout: &Layout, with_d: bool) -> Vec<f64> {
    let n = y.len();
    let d0 = if with_d {
        let ord = PeriodogramPlan::new(n).half(y);
        gph_estimate(&ord, n).clamp(-0.4, 0.4)
    } else {
        0.0
    };
    let u = if d0 != 0.0 { frac_diff_values(y, d0) } else { y.to_vec() };
    let rho1 = autocorrelation(&u, 1).get(1).copied().unwrap_or(0.0);
    let order = layout.order;
    let phi0 = rho1.clamp(-0.9, 0.9);
    let theta0 = if order.has_theta() && !order.has_phi() { method_of_moments_theta(rho1) } else { 0.0 };
    layout
        .components
        .iter()
        .map(|c| match c {
            Component::D => d0,
            Component::Phi => phi0,
            Component::Theta => theta0,
            Component::Sigma2 => unreachable!(),
        })
        .collect()
}

/// Whittle estimate mapped onto the layout, for use as an additional start.
fn whittle_start(y: &[f64], layout: &Layout, with_d: bool) -> Vec<f64> {
    let n = y.len();
    let ord = PeriodogramPlan::new(n).half(y);
    let w = Whittle::new(&ord, n);
    let d0 = if with_d { gph_estimate(&ord, n).clamp(-0.4, 0.4) } else { 0.0 };
    let fit = w.fit(
        WhittleSpec { d: if with_d { None } else { Some(0.0) }, phi: layout.order.has_phi(), theta: layout.order.has_theta() },
        [d0, 0.0, 0.0],
    );
    layout
        .components
        .iter()
        .map(|c| match c {
            Component::D => fit.d.clamp(-0.45, 0.45),
            Component::Phi => fit.phi.clamp(-0.95, 0.95),
            Component::Theta => fit.theta.clamp(-0.95, 0.95),
            Component::Sigma2 => unreachable!(),
        })
        .collect()
}

/// Central-difference Hessian of `f` at `u`.
fn hessian(f: &impl Fn(&[f64]) -> f64, u: &[f64], h: f64) -> DMatrix<f64> {
    let k = u.len();
    let f0 = f(u);
    let at = |shifts: &[(usize, f64)]| {
        let mut v = u.to_vec();
        for &(i, s) in shifts {
            v[i] += s;
        }
        f(&v)
    };
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        m[(i, i)] = (at(&[(i, h)]) - 2.0 * f0 + at(&[(i, -h)])) / (h * h);
        for j in 0..i {
            let v = (at(&[(i, h), (j, h)]) - at(&[(i, h), (j, -h)]) - at(&[(i, -h), (j, h)])
                + at(&[(i, -h), (j, -h)]))
                / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Inverse of a symmetric matrix, falling back to a pseudo-inverse over the positive
/// eigenvalues when it is singular or indefinite. The result is positive semi-definite.
fn psd_inverse(h: &DMatrix<f64>) -> (DMatrix<f64>, bool) {
    if let Some(chol) = h.clone().cholesky() {
        let inv = chol.inverse();
        if inv.iter().all(|v| v.is_finite()) {
            return (inv, true);
        }
    }
    let eig = h.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let k = h.nrows();
    let mut inv = DMatrix::zeros(k, k);
    for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > 1e-10 * max {
            let v = eig.eigenvectors.column(idx);
            inv += (v * v.transpose()) / lam;
        }
    }
    (inv, false)
}

fn fit_with_layout(series: &Series, layout: Layout, with_d: bool) -> Result<MleFit> {
    if !series.is_demeaned() {
        return Err(Error::Input("series must be demeaned".into()));
    }
    let y = series.values();
    let n = y.len();
    if n < 50 {
        log::warn!("maximum-likelihood fit on only {n} observations");
    }
    let q0: f64 = y.iter().map(|v| v * v).sum();
    if !(q0 > 0.0) {
        return Err(Error::Numerical("series is identically zero".into()));
    }
    let profile = Profile { y, layout: &layout, log_q0: q0.ln() };
    let objective = |u: &[f64]| profile.per_obs(u);
    let nm = NelderMead { ftol: 1e-8 / n as f64, ..NelderMead::default() };

    let mut best: Option<crate::optim::Minimum> = None;
    let mut iterations = 0;
    if layout.components.is_empty() {
        best = Some(nm.minimize(objective, &[]));
    } else {
        let mut starts = vec![moment_start(y, &layout, with_d)];
        if layout.components.len() > 1 {
            starts.push(whittle_start(y, &layout, with_d));
        }
        for x0 in starts {
            let mut m = nm.minimize(objective, &layout.to_u(&x0));
            iterations += m.iterations;
            // One restart from a fresh simplex guards against premature collapse.
            let again = nm.minimize(objective, &m.x);
            iterations += again.iterations;
            if again.value <= m.value {
                m = crate::optim::Minimum { converged: m.converged && again.converged, ..again };
            }
            if best.as_ref().is_none_or(|b| m.value < b.value) {
                best = Some(m);
            }
        }
    }
    let best = best.expect("at least one start");
    if !best.value.is_finite() {
        return Err(Error::Numerical("likelihood is not finite anywhere along the search".into()));
    }
    let x = layout.to_x(&best.x);
    let (d, phi, theta) = layout.dpt(&x);
    let (loglik, s2) = profile_loglik(y, d, phi, theta)?;
    let order = layout.order;
    let params = ArfimaParams::with_order(order, d, phi, theta, s2)?;

    let k = layout.components.len();
    let cov = if k == 0 {
        DMatrix::zeros(0, 0)
    } else {
        let total = |u: &[f64]| n as f64 * profile.per_obs(u);
        let h = hessian(&total, &best.x, HESSIAN_STEP);
        let (inv, regular) = psd_inverse(&h);
        if !regular {
            log::warn!("singular Hessian at the optimum; using a pseudo-inverse");
        }
        let jac = layout.jacobian(&best.x);
        DMatrix::from_fn(k, k, |i, j| jac[i] * inv[(i, j)] * jac[j])
    };
    if !best.converged {
        log::warn!("maximum-likelihood search hit the iteration cap");
    }
    Ok(MleFit {
        params,
        components: layout.components,
        cov,
        sigma2_var: 2.0 * s2 * s2 / n as f64,
        loglik,
        converged: best.converged,
        iterations,
    })
}

/// Exact Gaussian maximum-likelihood fit of an ARFIMA model of the given order.
pub fn fit_mle(series: &Series, order: ModelOrder) -> Result<MleFit> {
    fit_with_layout(series, Layout::new(order, true), true)
}

/// Maximum-likelihood fit of the ARMA part only (d held at 0).
pub fn fit_arma_mle(series: &Series, order: ModelOrder) -> Result<MleFit> {
    fit_with_layout(series, Layout::new(order, false), false)
}

/// Frequency-domain (Whittle) estimate; much cheaper than the exact fit.
pub fn fit_whittle(series: &Series, order: ModelOrder) -> Result<ArfimaParams> {
    let y = series.values();
    let n = y.len();
    let ord = PeriodogramPlan::new(n).half(y);
    let w = Whittle::new(&ord, n);
    if w.is_empty() {
        return Err(Error::Input("series too short for a Whittle fit".into()));
    }
    let d0 = gph_estimate(&ord, n).clamp(-0.4, 0.4);
    let fit = w.fit(WhittleSpec { d: None, phi: order.has_phi(), theta: order.has_theta() }, [d0, 0.0, 0.0]);
    ArfimaParams::with_order(order, fit.d, fit.phi, fit.theta, fit.sigma2)
}
