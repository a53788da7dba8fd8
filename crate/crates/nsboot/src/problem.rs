//! Analytic likelihood/prior families with exact radial and prior-volume
//! maps, on-contour parameter sampling, contour means, and truth oracles.
//!
//! All families share a co-centred spherical Gaussian prior with scale
//! `prior_sigma`. Likelihood contours are hyperspherical shells, so the
//! fraction of prior mass above a contour is the prior mass inside its
//! radius, and a point's first component conditional on its contour follows
//! a signed scaled-Beta law. Only the tracked components are ever
//! materialized; the remaining dimensions are handled implicitly.

use rand::Rng;
use rand_distr::{Beta, Distribution, Open01, StandardNormal};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::math::{adaptive_simpson, logsumexp};
use crate::special::{beta_reg, inv_beta_reg, inv_ln_gamma_p, ln_gamma, ln_gamma_p, normal_quantile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Gaussian,
    Cauchy,
    /// Flat likelihood at a fixed log-value. Operationally it keeps an
    /// infinitesimal radial slope: points are ordered by their prior volume
    /// rather than by the (tied) likelihood values.
    Constant { logl: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    #[serde(flatten)]
    pub family: Family,
    pub dim: u32,
    pub prior_sigma: f64,
    /// Number of leading components of theta that are physically sampled.
    pub tracked: u32,
}

/// A posterior quantity computed from weighted dead points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Estimand {
    LogZ,
    /// The evidence itself, in linear space.
    Evidence,
    ParamMean { component: usize },
    ParamSecondMoment { component: usize },
    ParamCredUpper { component: usize, q: f64 },
    RadialMean,
}

impl Estimand {
    pub fn param_mean() -> Self {
        Estimand::ParamMean { component: 0 }
    }
    pub fn param_second_moment() -> Self {
        Estimand::ParamSecondMoment { component: 0 }
    }
    pub fn cred_upper(q: f64) -> Self {
        assert!(q > 0.0 && q < 1.0);
        Estimand::ParamCredUpper { component: 0, q }
    }

    pub fn label(&self) -> String {
        match self {
            Estimand::LogZ => "logz".into(),
            Estimand::Evidence => "evidence".into(),
            Estimand::ParamMean { component } => format!("param_mean[{component}]"),
            Estimand::ParamSecondMoment { component } => {
                format!("param_second_moment[{component}]")
            }
            Estimand::ParamCredUpper { component, q } => {
                format!("param_cred_upper[{component},q={q}]")
            }
            Estimand::RadialMean => "radial_mean".into(),
        }
    }
}

impl std::fmt::Display for Estimand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

impl Problem {
    pub fn new(family: Family, dim: u32, prior_sigma: f64, tracked: u32) -> Self {
        assert!(dim >= 1);
        assert!(prior_sigma > 0.0);
        assert!(tracked >= 1 && tracked <= dim);
        Problem { family, dim, prior_sigma, tracked }
    }

    pub fn gaussian(dim: u32) -> Self {
        Self::new(Family::Gaussian, dim, 10.0, 1)
    }

    pub fn cauchy(dim: u32) -> Self {
        Self::new(Family::Cauchy, dim, 10.0, 1)
    }

    pub fn constant(dim: u32) -> Self {
        Self::new(Family::Constant { logl: 0.0 }, dim, 10.0, 1)
    }

    fn d(&self) -> f64 {
        self.dim as f64
    }

    /// Log-likelihood on the shell of radius `r`.
    pub fn logl_at_radius(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        let d = self.d();
        match self.family {
            Family::Gaussian => -0.5 * d * (2.0 * std::f64::consts::PI).ln() - 0.5 * r * r,
            Family::Cauchy => {
                ln_gamma(0.5 * (1.0 + d))
                    - 0.5 * (d + 1.0) * std::f64::consts::PI.ln()
                    - 0.5 * (d + 1.0) * (r * r).ln_1p()
            }
            Family::Constant { logl } => logl,
        }
    }

    /// Log prior mass enclosed within radius `r` (equivalently, the log
    /// fraction of the prior above the contour at `r`).
    pub fn logx_at_radius(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        if r == f64::INFINITY {
            return 0.0;
        }
        let a = 0.5 * self.d();
        let x = 0.5 * (r / self.prior_sigma) * (r / self.prior_sigma);
        ln_gamma_p(a, x)
    }

    /// Inverse of [`logx_at_radius`]. `logx = 0` maps to infinity; positive
    /// values are a domain error.
    pub fn radius_at_logx(&self, logx: f64) -> Result<f64> {
        if logx > 0.0 {
            return Err(Error::Domain(format!("log volume {logx} > 0")));
        }
        if logx == 0.0 {
            return Ok(f64::INFINITY);
        }
        let a = 0.5 * self.d();
        let x = inv_ln_gamma_p(a, logx);
        Ok(self.prior_sigma * (2.0 * x).sqrt())
    }

    /// L(X): log-likelihood at log prior volume `logx`.
    pub fn logl_at_logx(&self, logx: f64) -> Result<f64> {
        let r = self.radius_at_logx(logx)?;
        if r == f64::INFINITY {
            return Ok(match self.family {
                Family::Constant { logl } => logl,
                _ => f64::NEG_INFINITY,
            });
        }
        Ok(self.logl_at_radius(r))
    }

    /// Radius recovered from a log-likelihood value, where the family's
    /// radial map is invertible.
    pub fn radius_at_logl(&self, logl: f64) -> Option<f64> {
        let d = self.d();
        match self.family {
            Family::Gaussian => {
                let logl0 = -0.5 * d * (2.0 * std::f64::consts::PI).ln();
                Some((2.0 * (logl0 - logl)).max(0.0).sqrt())
            }
            Family::Cauchy => {
                let lnc = ln_gamma(0.5 * (1.0 + d)) - 0.5 * (d + 1.0) * std::f64::consts::PI.ln();
                let t = (2.0 * (lnc - logl) / (d + 1.0)).exp_m1();
                Some(t.max(0.0).sqrt())
            }
            Family::Constant { .. } => None,
        }
    }

    /// k i.i.d. draws of the first component conditional on the contour at
    /// radius `r`: Theta ~ Beta(1/2, (d-1)/2), theta_1 = sign * r * sqrt(Theta).
    /// For d = 1 the shell is the two points +-r.
    pub fn sample_contour_components(&self, r: f64, k: usize, rng: &mut impl Rng) -> Vec<f64> {
        (0..k).map(|_| self.sample_theta1(r, rng)).collect()
    }

    fn sample_theta1(&self, r: f64, rng: &mut impl Rng) -> f64 {
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        if self.dim == 1 {
            return sign * r;
        }
        let beta = Beta::new(0.5, 0.5 * (self.d() - 1.0)).expect("valid beta parameters");
        let theta: f64 = beta.sample(rng);
        sign * r * theta.sqrt()
    }

    /// One point on the contour at radius `r`, materializing only the
    /// tracked components.
    pub fn sample_point_on_contour(&self, r: f64, rng: &mut impl Rng) -> SmallVec<[f64; 2]> {
        if self.tracked == 1 {
            let mut v = SmallVec::new();
            v.push(self.sample_theta1(r, rng));
            return v;
        }
        // several components: project a standard normal vector onto the shell
        let d = self.dim as usize;
        let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        g.iter().take(self.tracked as usize).map(|x| r * x / norm).collect()
    }

    /// Density of the first component on the contour at radius `r` (d >= 2).
    pub fn conditional_pdf(&self, theta1: f64, r: f64) -> f64 {
        assert!(self.dim >= 2, "no conditional density in one dimension");
        assert!(r > 0.0);
        if theta1.abs() >= r {
            return 0.0;
        }
        let d = self.d();
        let ln_norm = ln_gamma(0.5 * d) - ln_gamma(0.5) - ln_gamma(0.5 * (d - 1.0)) - r.ln();
        let u = 1.0 - (theta1 / r) * (theta1 / r);
        (ln_norm + 0.5 * (d - 3.0) * u.ln()).exp()
    }

    /// CDF of the first component on the contour at radius `r` (d >= 2).
    pub fn conditional_cdf(&self, theta1: f64, r: f64) -> f64 {
        assert!(self.dim >= 2);
        if theta1 <= -r {
            return 0.0;
        }
        if theta1 >= r {
            return 1.0;
        }
        let i = beta_reg(0.5, 0.5 * (self.d() - 1.0), (theta1 / r) * (theta1 / r));
        0.5 * (1.0 + i.copysign(theta1))
    }

    /// Quantile of the first component on the contour at radius `r` (d >= 2).
    pub fn conditional_quantile(&self, q: f64, r: f64) -> f64 {
        assert!(self.dim >= 2);
        assert!(q > 0.0 && q < 1.0);
        if q == 0.5 {
            return 0.0;
        }
        let tail = (2.0 * q - 1.0).abs();
        let theta = inv_beta_reg(0.5, 0.5 * (self.d() - 1.0), tail);
        (r * theta.sqrt()).copysign(q - 0.5)
    }

    /// Prior expectation of the estimand's integrand over the contour at
    /// log volume `logx`: 0 for the first moment, r^2/d for the second,
    /// r for the radius.
    pub fn ftilde(&self, estimand: &Estimand, logx: f64) -> Result<f64> {
        match estimand {
            Estimand::ParamMean { .. } => Ok(0.0),
            Estimand::ParamSecondMoment { .. } => {
                let r = self.radius_at_logx(logx)?;
                Ok(r * r / self.d())
            }
            Estimand::RadialMean => self.radius_at_logx(logx),
            other => Err(Error::UnsupportedEstimand {
                estimand: other.label(),
                context: "ftilde".into(),
            }),
        }
    }

    /// Closed-form log-evidence, where one exists.
    pub fn analytic_logz(&self) -> Result<f64> {
        let d = self.d();
        match self.family {
            Family::Gaussian => {
                let s2 = self.prior_sigma * self.prior_sigma;
                Ok(-0.5 * d * (2.0 * std::f64::consts::PI * (1.0 + s2)).ln())
            }
            Family::Constant { logl } => Ok(logl),
            Family::Cauchy => Err(Error::NoClosedForm),
        }
    }

    /// Window of log X containing all posterior mass above `rel_tol` of the
    /// peak of L(X) X.
    pub(crate) fn posterior_mass_window(&self, rel_tol: f64) -> (f64, f64) {
        let ln_mass = |v: f64| self.logl_at_logx(v).unwrap() + v;
        // coarse scan downwards for the peak
        let mut peak_v = -1e-3;
        let mut peak = ln_mass(peak_v);
        let mut v = -0.05;
        loop {
            let m = ln_mass(v);
            if m > peak {
                peak = m;
                peak_v = v;
            }
            if m < peak - 2.0 * rel_tol.ln().abs() && v < peak_v {
                break;
            }
            v *= 1.05;
            if v < -1e6 {
                break;
            }
        }
        let cut = peak + rel_tol.ln();
        let mut lo = peak_v;
        while ln_mass(lo) > cut {
            lo *= 1.02;
            if lo < -1e7 {
                break;
            }
        }
        let mut hi = (peak_v * 0.98).min(-1e-3);
        while ln_mass(hi) > cut && hi > -1e-3 + f64::EPSILON {
            hi = (hi * 0.98).max(-1e-3);
            if hi == -1e-3 {
                break;
            }
        }
        (lo, hi.min(-1e-3))
    }

    /// High-precision quadrature of the evidence integral over X in (0, 1],
    /// performed in log X. Serves as the oracle where no closed form exists.
    pub fn quadrature_logz(&self) -> f64 {
        self.quadrature_posterior_integral(|_| 1.0)
    }

    /// (1/Z) * integral of g(X) L(X) dX computed as a ratio of quadratures.
    pub fn posterior_expectation(&self, g: impl Fn(f64) -> f64) -> f64 {
        let num = self.quadrature_posterior_integral(&g);
        let den = self.quadrature_logz();
        (num - den).exp()
    }

    fn quadrature_posterior_integral(&self, g: impl Fn(f64) -> f64) -> f64 {
        let (lo, hi) = self.posterior_mass_window(1e-15);
        let ln_mass = |v: f64| self.logl_at_logx(v).unwrap() + v;
        // shift by the peak for stable linear-space integration
        let grid_peak = (0..200)
            .map(|i| ln_mass(lo + (hi - lo) * i as f64 / 199.0))
            .fold(f64::NEG_INFINITY, f64::max);
        let f = |v: f64| (ln_mass(v) - grid_peak).exp() * g(v);
        let integral = adaptive_simpson(&f, lo, hi, 1e-13);
        grid_peak + integral.ln()
    }

    /// Exact posterior value of the estimand, analytic where possible and by
    /// quadrature otherwise. Used as the truth for coverage tests.
    pub fn true_estimand(&self, estimand: &Estimand) -> Result<f64> {
        match estimand {
            Estimand::LogZ => match self.analytic_logz() {
                Ok(z) => Ok(z),
                Err(Error::NoClosedForm) => Ok(self.quadrature_logz()),
                Err(e) => Err(e),
            },
            Estimand::Evidence => Ok(self.true_estimand(&Estimand::LogZ)?.exp()),
            Estimand::ParamMean { .. } => Ok(0.0),
            Estimand::ParamSecondMoment { .. } => {
                if let Family::Gaussian = self.family {
                    let s2 = self.prior_sigma * self.prior_sigma;
                    return Ok(s2 / (1.0 + s2));
                }
                let d = self.d();
                Ok(self.posterior_expectation(|v| {
                    let r = self.radius_at_logx(v).unwrap();
                    r * r / d
                }))
            }
            Estimand::RadialMean => {
                Ok(self.posterior_expectation(|v| self.radius_at_logx(v).unwrap()))
            }
            Estimand::ParamCredUpper { q, .. } => {
                if self.dim == 1 {
                    return Err(Error::UnsupportedEstimand {
                        estimand: estimand.label(),
                        context: "true_estimand in one dimension".into(),
                    });
                }
                if let Family::Gaussian = self.family {
                    let s2 = self.prior_sigma * self.prior_sigma;
                    return Ok(normal_quantile(*q) * (s2 / (1.0 + s2)).sqrt());
                }
                // solve P(theta_1 < t) = q with the conditional CDF
                // marginalized over the posterior mass in log X
                let prob_below = |t: f64| {
                    self.posterior_expectation(|v| {
                        let r = self.radius_at_logx(v).unwrap();
                        self.conditional_cdf(t, r)
                    })
                };
                let mut lo = 0.0;
                let mut hi = self.prior_sigma;
                if *q < 0.5 {
                    lo = -self.prior_sigma;
                    hi = 0.0;
                }
                while prob_below(hi) < *q {
                    hi *= 2.0;
                }
                while prob_below(lo) > *q {
                    lo *= 2.0;
                }
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if prob_below(mid) < *q {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }
}

/// Draw u in the open interval (0, 1).
pub(crate) fn open01(rng: &mut impl Rng) -> f64 {
    rng.sample(Open01)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn logl_at_radius_reference() {
        let g3 = Problem::gaussian(3);
        assert_relative_eq!(g3.logl_at_radius(0.0), -2.7568155996140182, epsilon = 1e-13);
        let c3 = Problem::cauchy(3);
        assert_relative_eq!(c3.logl_at_radius(0.0), -2.2894597716988003, epsilon = 1e-13);
        let g5 = Problem::gaussian(5);
        assert_relative_eq!(
            g5.logl_at_radius(2.0),
            g5.logl_at_radius(0.0) - 2.0,
            epsilon = 1e-13
        );
        let k = Problem::new(Family::Constant { logl: -4.0 }, 3, 10.0, 1);
        assert_eq!(k.logl_at_radius(7.0), -4.0);
    }

    #[test]
    fn logx_at_radius_reference() {
        let p1 = Problem::new(Family::Gaussian, 1, 1.0, 1);
        assert_relative_eq!(p1.logx_at_radius(1.0), -0.38171514630212607, epsilon = 1e-12);
        let p2 = Problem::new(Family::Gaussian, 2, 1.0, 1);
        assert_relative_eq!(p2.logx_at_radius(1.0), -0.93275212956718857, epsilon = 1e-12);
        assert_eq!(p2.logx_at_radius(f64::INFINITY), 0.0);
    }

    #[test]
    fn radius_at_logx_inverts() {
        let p1 = Problem::new(Family::Gaussian, 1, 1.0, 1);
        let r = p1.radius_at_logx(0.6826894921370859f64.ln()).unwrap();
        assert!((r - 1.0).abs() < 1e-9);

        let p10 = Problem::gaussian(10);
        for &logx in &[-1e-4, -0.5, -5.0, -30.0, -200.0] {
            let r = p10.radius_at_logx(logx).unwrap();
            assert!((p10.logx_at_radius(r) - logx).abs() < 1e-10 * (1.0 + logx.abs()));
        }
        assert_eq!(p10.radius_at_logx(0.0).unwrap(), f64::INFINITY);
        assert!(p10.radius_at_logx(0.1).is_err());
    }

    #[test]
    fn radial_maps_monotone() {
        for prob in [Problem::gaussian(3), Problem::cauchy(5)] {
            let mut last_logl = f64::INFINITY;
            let mut last_logx = f64::NEG_INFINITY;
            for i in 1..60 {
                let r = 0.25 * i as f64;
                let logl = prob.logl_at_radius(r);
                let logx = prob.logx_at_radius(r);
                assert!(logl < last_logl, "logl not decreasing at r={r}");
                assert!(logx > last_logx, "logx not increasing at r={r}");
                last_logl = logl;
                last_logx = logx;
            }
        }
    }

    #[test]
    fn radius_at_logl_inverts() {
        for prob in [Problem::gaussian(4), Problem::cauchy(2)] {
            for &r in &[0.3, 1.0, 5.0, 40.0] {
                let logl = prob.logl_at_radius(r);
                let back = prob.radius_at_logl(logl).unwrap();
                assert_relative_eq!(back, r, max_relative = 1e-9);
            }
        }
        assert!(Problem::constant(3).radius_at_logl(0.0).is_none());
    }

    #[test]
    fn contour_samples_at_zero_radius() {
        let p = Problem::gaussian(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(p
            .sample_contour_components(0.0, 100, &mut rng)
            .iter()
            .all(|&t| t == 0.0));
    }

    #[test]
    fn contour_d1_is_pm_r() {
        let p = Problem::new(Family::Gaussian, 1, 10.0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let samples = p.sample_contour_components(3.0, 2000, &mut rng);
        assert!(samples.iter().all(|&t| t.abs() == 3.0));
        let frac_pos = samples.iter().filter(|&&t| t > 0.0).count() as f64 / 2000.0;
        assert!((frac_pos - 0.5).abs() < 0.05);
    }

    #[test]
    fn contour_d3_uniform() {
        // Beta(1/2, 1) => sqrt(Theta) uniform => theta_1 uniform on (-r, r)
        let p = Problem::gaussian(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = 2.5;
        let mut samples = p.sample_contour_components(r, 100_000, &mut rng);
        let d = crate::math::ks_statistic(&mut samples, |t| (t + r) / (2.0 * r));
        let pval = crate::math::ks_pvalue(100_000, d);
        assert!(pval > 0.01, "KS p = {pval}");
    }

    #[test]
    fn contour_second_moment_matches_symmetry() {
        // E[theta_1^2] = r^2 / d on the shell
        for dim in [2u32, 5, 20] {
            let p = Problem::gaussian(dim);
            let mut rng = ChaCha8Rng::seed_from_u64(4 + dim as u64);
            let r = 3.0;
            let n = 100_000;
            let samples = p.sample_contour_components(r, n, &mut rng);
            let m2 = samples.iter().map(|t| t * t).sum::<f64>() / n as f64;
            let expect = r * r / dim as f64;
            // Var[theta^2] = r^4 (3/(d(d+2)) - 1/d^2)
            let d = dim as f64;
            let var = r.powi(4) * (3.0 / (d * (d + 2.0)) - 1.0 / (d * d));
            let sigma = (var / n as f64).sqrt();
            assert!((m2 - expect).abs() < 3.0 * sigma, "dim {dim}: {m2} vs {expect}");
        }
    }

    #[test]
    fn multi_component_sampling() {
        let p = Problem::new(Family::Gaussian, 5, 10.0, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pt = p.sample_point_on_contour(2.0, &mut rng);
        assert_eq!(pt.len(), 3);
        assert!(pt.iter().map(|x| x * x).sum::<f64>() <= 4.0 + 1e-12);
    }

    #[test]
    fn conditional_pdf_properties() {
        let p = Problem::gaussian(3);
        let r = 1.7;
        assert_eq!(p.conditional_pdf(r, r), 0.0);
        assert_eq!(p.conditional_pdf(-2.0 * r, r), 0.0);
        assert_relative_eq!(p.conditional_pdf(0.3, r), 1.0 / (2.0 * r), epsilon = 1e-12);
        assert_relative_eq!(p.conditional_pdf(0.42, r), p.conditional_pdf(-0.42, r));
        // integrates to one
        for dim in [2u32, 3, 5, 10] {
            let p = Problem::gaussian(dim);
            let f = |t: f64| p.conditional_pdf(t, r);
            let eps = 1e-9; // d=2 endpoint singularity is integrable
            let total = adaptive_simpson(&f, -r + eps, r - eps, 1e-11);
            assert!((total - 1.0).abs() < 1e-4, "dim {dim}: {total}");
        }
    }

    #[test]
    fn conditional_cdf_quantile_consistency() {
        let p = Problem::gaussian(5);
        let r = 2.0;
        for q in [0.05, 0.3, 0.5, 0.84, 0.99] {
            let t = p.conditional_quantile(q, r);
            assert_relative_eq!(p.conditional_cdf(t, r), q, epsilon = 1e-9);
        }
    }

    #[test]
    fn ftilde_values() {
        let p = Problem::gaussian(3);
        assert_eq!(p.ftilde(&Estimand::param_mean(), -5.0).unwrap(), 0.0);
        let logx = p.logx_at_radius(2.0);
        assert_relative_eq!(p.ftilde(&Estimand::RadialMean, logx).unwrap(), 2.0, epsilon = 1e-9);
        let logx3 = p.logx_at_radius(3.0);
        assert_relative_eq!(
            p.ftilde(&Estimand::param_second_moment(), logx3).unwrap(),
            3.0,
            epsilon = 1e-9
        );
        assert!(p.ftilde(&Estimand::LogZ, -1.0).is_err());
    }

    #[test]
    fn ftilde_matches_contour_monte_carlo() {
        let p = Problem::gaussian(5);
        let r = 2.3;
        let logx = p.logx_at_radius(r);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let samples = p.sample_contour_components(r, n, &mut rng);
        // second moment
        let m2: Vec<f64> = samples.iter().map(|t| t * t).collect();
        let mean2 = crate::math::mean(&m2);
        let sig2 = crate::math::sample_std(&m2) / (n as f64).sqrt();
        let expect2 = p.ftilde(&Estimand::param_second_moment(), logx).unwrap();
        assert!((mean2 - expect2).abs() < 3.0 * sig2);
        // first moment
        let mean1 = crate::math::mean(&samples);
        let sig1 = crate::math::sample_std(&samples) / (n as f64).sqrt();
        assert!(mean1.abs() < 3.0 * sig1);
    }

    #[test]
    fn analytic_logz_values() {
        let g3 = Problem::gaussian(3);
        assert_relative_eq!(g3.analytic_logz().unwrap(), -9.6794963748759074, epsilon = 1e-13);
        let g1 = Problem::gaussian(1);
        assert_relative_eq!(g1.analytic_logz().unwrap(), -3.2264987916253025, epsilon = 1e-13);
        let k = Problem::new(Family::Constant { logl: -1.25 }, 2, 10.0, 1);
        assert_eq!(k.analytic_logz().unwrap(), -1.25);
        assert!(matches!(Problem::cauchy(3).analytic_logz(), Err(Error::NoClosedForm)));
    }

    #[test]
    fn quadrature_matches_analytic_logz() {
        for dim in [1u32, 3, 10] {
            let p = Problem::gaussian(dim);
            let quad = p.quadrature_logz();
            let exact = p.analytic_logz().unwrap();
            assert!((quad - exact).abs() < 1e-8, "dim {dim}: {quad} vs {exact}");
        }
    }

    #[test]
    fn true_estimand_gaussian_values() {
        let p = Problem::gaussian(3);
        assert_eq!(p.true_estimand(&Estimand::param_mean()).unwrap(), 0.0);
        assert_relative_eq!(
            p.true_estimand(&Estimand::param_second_moment()).unwrap(),
            100.0 / 101.0,
            epsilon = 1e-12
        );
        // quadrature route agrees with the closed form for the second moment
        let d = 3.0;
        let by_quad = p.posterior_expectation(|v| {
            let r = p.radius_at_logx(v).unwrap();
            r * r / d
        });
        assert_relative_eq!(by_quad, 100.0 / 101.0, epsilon = 1e-7);
        let cred = p.true_estimand(&Estimand::cred_upper(0.84)).unwrap();
        assert_relative_eq!(
            cred,
            0.99445788320975317 * (100.0f64 / 101.0).sqrt(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn true_cred_upper_cauchy_consistent() {
        // the quadrature+bisection truth matches a quadrature of the marginal
        let p = Problem::cauchy(3);
        let t = p.true_estimand(&Estimand::cred_upper(0.84)).unwrap();
        let below = p.posterior_expectation(|v| {
            let r = p.radius_at_logx(v).unwrap();
            p.conditional_cdf(t, r)
        });
        assert_relative_eq!(below, 0.84, epsilon = 1e-6);
    }
}
