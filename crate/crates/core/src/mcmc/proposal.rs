//! Random-walk normal proposals truncated to a box.

use rand::Rng;

use crate::error::{Error, Result};
use crate::stats::{cholesky_small, mvn_box_probability, normal_interval_mass, standard_normal};

const MAX_TRIES: usize = 1_000_000;

/// N(center, cov) restricted to the open box (lo, hi).
///
/// The normalising mass depends on the centre, so the proposal is not symmetric; `log_mass`
/// supplies the Metropolis-Hastings correction log Z(current) - log Z(proposal).
#[derive(Debug, Clone)]
pub struct TruncatedNormal {
    chol: Vec<Vec<f64>>,
    sd: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl TruncatedNormal {
    pub fn new(cov: &[Vec<f64>], lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let k = cov.len();
        if k == 0 || k > 3 || lo.len() != k || hi.len() != k {
            return Err(Error::Contract(format!("proposal dimension {k} not in 1..=3")));
        }
        let chol = cholesky_small(cov)
            .ok_or_else(|| Error::Numerical("proposal covariance is not positive definite".into()))?;
        let sd = (0..k).map(|i| cov[i][i].sqrt()).collect();
        Ok(TruncatedNormal { chol, sd, lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.lo).zip(&self.hi).all(|((x, lo), hi)| x > lo && x < hi)
    }

    /// Draw by rejection from the untruncated normal.
    pub fn sample<R: Rng + ?Sized>(&self, center: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        let k = self.dim();
        let mut z = [0.0; 3];
        for _ in 0..MAX_TRIES {
            for zi in z.iter_mut().take(k) {
                *zi = standard_normal(rng);
            }
            let x: Vec<f64> =
                (0..k).map(|i| center[i] + (0..=i).map(|j| self.chol[i][j] * z[j]).sum::<f64>()).collect();
            if self.contains(&x) {
                return Ok(x);
            }
        }
        Err(Error::Numerical("truncated proposal: box mass too small to sample".into()))
    }

    /// log of the probability that N(center, cov) falls inside the box.
    pub fn log_mass(&self, center: &[f64]) -> f64 {
        let marginal: Vec<f64> = (0..self.dim())
            .map(|i| normal_interval_mass(center[i], self.sd[i], self.lo[i], self.hi[i]))
            .collect();
        if self.dim() == 1 {
            return marginal[0].ln();
        }
        // Bonferroni: Z is within sum(1 - m_i) of 1; skip the quadrature when negligible.
        let outside: f64 = marginal.iter().map(|m| 1.0 - m).sum();
        if outside < 1e-13 {
            return (-outside).ln_1p();
        }
        mvn_box_probability(center, &self.chol, &self.lo, &self.hi).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn draws_stay_in_box() {
        let t = TruncatedNormal::new(&[vec![0.25, 0.1], vec![0.1, 0.5]], vec![-0.5, -1.0], vec![0.5, 1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = t.sample(&[0.45, -0.9], &mut rng).unwrap();
            assert!(t.contains(&x));
        }
    }

    #[test]
    fn mass_matches_acceptance_frequency() {
        let t = TruncatedNormal::new(&[vec![0.09, 0.05], vec![0.05, 0.36]], vec![-0.5, -1.0], vec![0.5, 1.0]).unwrap();
        let center = [0.4, 0.7];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let l = cholesky_small(&[vec![0.09, 0.05], vec![0.05, 0.36]]).unwrap();
        let trials = 200_000;
        let mut hits = 0;
        for _ in 0..trials {
            let z0 = standard_normal(&mut rng);
            let z1 = standard_normal(&mut rng);
            let x = [center[0] + l[0][0] * z0, center[1] + l[1][0] * z0 + l[1][1] * z1];
            if t.contains(&x) {
                hits += 1;
            }
        }
        let p = hits as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((t.log_mass(&center).exp() - p).abs() < 4.0 * se);
    }

    #[test]
    fn interior_center_has_unit_mass() {
        let t = TruncatedNormal::new(&[vec![1e-4]], vec![-0.5], vec![0.5]).unwrap();
        assert!(t.log_mass(&[0.0]).abs() < 1e-15);
    }
}
