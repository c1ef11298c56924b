//! Limit laws for centered r-clique counts of W-random graphs.
//!
//! For a step graphon `W` and clique order `r`, the centered count scales in
//! one of three ways:
//!
//! * degenerate (the count is almost surely 0 or `C(n, r)`);
//! * not regular in the r-clique profile: Gaussian fluctuations of order
//!   `n^(r - 1/2)` with scale `sigma_hat`;
//! * regular: fluctuations of order `n^(r - 1)` converging to
//!   `sigma * Z + sum_l c_l (Z_l^2 - 1)`, a chi-square mixture whose
//!   coefficients come from the spectrum of the clique-pair graphon with one
//!   copy of the regular degree removed.
//!
//! The module also builds the moment power series of the mixture limit: with
//! `d_l` the scaled excess density of the length-`l` loose-cycle graph, the
//! series `exp(sum d_l x^l)` has the limit's m-th moment as `m!` times its
//! `x^m` coefficient, and it must agree with the closed-form moment
//! generating function of the mixture. Tests exercise that agreement since
//! the two sides go through different computations.

use serde::Serialize;

use crate::density::hom_density;
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::multigraph::LabeledMultigraph;
use crate::sampler::RngStream;
use crate::series;
use crate::spectral::{self, Spectrum, SPEC_MINUS_DEFAULT_TOL};

/// Default tolerance for classification (degeneracy and regularity tests).
pub const CLASSIFY_DEFAULT_TOL: f64 = 1e-10;

/// Largest supported clique order; factorials stay exact in integers and
/// counting larger cliques is infeasible long before this.
pub const MAX_CLIQUE_ORDER: usize = 20;

/// Default truncation order of the moment series.
pub const DEFAULT_TRUNCATION: usize = 12;

/// Negative slack tolerated before a variance-like quantity is declared
/// inconsistent rather than clamped to zero.
const NEGATIVE_SLACK: f64 = 1e-12;

/// Fluctuation regime of the limit, with its defining parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "case")]
pub enum LawKind {
    /// The count is almost surely 0 (clique-free) or `C(n, r)` (complete).
    Degenerate { full: bool },
    /// `(X - C(n,r) t_r) / n^(r - 1/2)` tends to `sigma_hat * Z`.
    Gaussian { sigma_hat: f64 },
    /// `(X - C(n,r) t_r) / n^(r - 1)` tends to
    /// `sigma * Z + sum c_l (Z_l^2 - 1)`.
    ChiSquareMix { sigma: f64, coefficients: Vec<f64> },
}

/// Classified limit law for a `(W, r)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitLaw {
    pub r: usize,
    pub t_r: f64,
    pub kind: LawKind,
}

impl LimitLaw {
    /// Scaling exponent `e` such that `(X - C(n,r) t_r) / n^e` converges;
    /// `None` for degenerate laws.
    pub fn exponent(&self) -> Option<f64> {
        match self.kind {
            LawKind::Degenerate { .. } => None,
            LawKind::Gaussian { .. } => Some(self.r as f64 - 0.5),
            LawKind::ChiSquareMix { .. } => Some(self.r as f64 - 1.0),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.kind, LawKind::Degenerate { .. })
    }
}

/// Exact factorial for `k <= 20`.
pub(crate) fn factorial(k: usize) -> Result<u64> {
    if k > MAX_CLIQUE_ORDER {
        return Err(Error::InvalidInput(format!(
            "factorial of {k} exceeds the supported clique order {MAX_CLIQUE_ORDER}"
        )));
    }
    Ok((1..=k as u64).product())
}

fn check_order(r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidInput(format!(
            "clique order r = {r} must be at least 2"
        )));
    }
    if r > MAX_CLIQUE_ORDER {
        return Err(Error::InvalidInput(format!(
            "clique order r = {r} exceeds the supported maximum {MAX_CLIQUE_ORDER}"
        )));
    }
    Ok(())
}

/// Density of the clique `K_r` in `W`.
pub fn clique_density(w: &StepGraphon, r: usize) -> Result<f64> {
    check_order(r)?;
    hom_density(&LabeledMultigraph::complete(r), w)
}

/// Density `d_j` of two r-cliques glued along `j` shared vertices.
pub fn gluing_density(w: &StepGraphon, r: usize, j: usize) -> Result<f64> {
    check_order(r)?;
    hom_density(&LabeledMultigraph::glued_cliques(r, j, false)?, w)
}

/// Squared scale of the normal term in the mixture limit:
/// `(t(glued_2) - t(glued_2 doubled)) / (2 ((r-2)!)^2)`, clamped at zero.
pub fn sigma_sq(w: &StepGraphon, r: usize) -> Result<f64> {
    check_order(r)?;
    let shared = hom_density(&LabeledMultigraph::glued_cliques(r, 2, false)?, w)?;
    let doubled = hom_density(&LabeledMultigraph::glued_cliques(r, 2, true)?, w)?;
    let diff = shared - doubled;
    if diff < -NEGATIVE_SLACK {
        return Err(Error::Numerical(format!(
            "negative variance component {diff:.3e} for the mixture normal term"
        )));
    }
    let denom = 2.0 * (factorial(r - 2)? as f64).powi(2);
    Ok(diff.max(0.0) / denom)
}

/// Scale of the Gaussian regime: `sqrt(d_1 - t_r^2) / (r-1)!`.
pub fn sigma_hat(w: &StepGraphon, r: usize) -> Result<f64> {
    check_order(r)?;
    let d1 = gluing_density(w, r, 1)?;
    let t_r = clique_density(w, r)?;
    let rad = d1 - t_r * t_r;
    if rad < -NEGATIVE_SLACK {
        return Err(Error::Numerical(format!(
            "negative radicand {rad:.3e} in the Gaussian scale"
        )));
    }
    Ok(rad.max(0.0).sqrt() / factorial(r - 1)? as f64)
}

/// Spectrum of the clique-pair graphon with one copy of the regular degree
/// `t_r` removed. Only meaningful when `W` is regular at order `r`.
pub fn mixture_spectrum(w: &StepGraphon, r: usize) -> Result<Spectrum> {
    let t_r = clique_density(w, r)?;
    let spec = spectral::spectrum(&w.vwr(r)?)?;
    spectral::spec_minus(&spec, t_r, SPEC_MINUS_DEFAULT_TOL)
}

/// Classifies the limit law of the centered r-clique count of `G(n, W)`.
///
/// Order of precedence: degenerate (clique-free or complete), then the
/// Gaussian regime when the r-clique profile is not constant, then the
/// chi-square mixture.
pub fn classify_limit(w: &StepGraphon, r: usize, tol: f64) -> Result<LimitLaw> {
    check_order(r)?;
    if tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "classification tolerance {tol} must be positive"
        )));
    }
    let t_r = clique_density(w, r)?;
    if t_r <= tol {
        return Ok(LimitLaw {
            r,
            t_r,
            kind: LawKind::Degenerate { full: false },
        });
    }
    if w.min_value() >= 1.0 - tol {
        return Ok(LimitLaw {
            r,
            t_r,
            kind: LawKind::Degenerate { full: true },
        });
    }
    if !w.is_kr_regular(r, tol)? {
        let s = sigma_hat(w, r)?;
        if s <= 0.0 {
            return Err(Error::Numerical(
                "non-regular graphon produced a zero Gaussian scale".into(),
            ));
        }
        return Ok(LimitLaw {
            r,
            t_r,
            kind: LawKind::Gaussian { sigma_hat: s },
        });
    }
    let sigma = sigma_sq(w, r)?.sqrt();
    let scale = 1.0 / (2.0 * factorial(r - 2)? as f64);
    let coefficients: Vec<f64> = mixture_spectrum(w, r)?
        .eigenvalues()
        .iter()
        .map(|l| l * scale)
        .collect();
    if sigma == 0.0 && coefficients.is_empty() {
        return Err(Error::Numerical(
            "mixture limit came out degenerate: zero normal term and empty spectrum".into(),
        ));
    }
    Ok(LimitLaw {
        r,
        t_r,
        kind: LawKind::ChiSquareMix {
            sigma,
            coefficients,
        },
    })
}

/// Moment power series of the mixture limit.
///
/// `d[l]` holds the scaled excess density of the length-`l` loose-cycle
/// graph for `l = 2..=truncation`; `f` holds the coefficients of
/// `exp(sum d_l x^l)`, whose `x^m` coefficient times `m!` is the limit's
/// m-th moment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSeries {
    pub r: usize,
    pub t_r: f64,
    d: Vec<f64>,
    f: Vec<f64>,
}

impl MomentSeries {
    pub fn truncation(&self) -> usize {
        self.d.len() - 1
    }

    /// `d_l` for `l = 2..=truncation`; indices 0 and 1 are zero.
    pub fn d_coeffs(&self) -> &[f64] {
        &self.d
    }

    /// Coefficients of the exponentiated series, `f[0] = 1`, `f[1] = 0`.
    pub fn f_coeffs(&self) -> &[f64] {
        &self.f
    }

    /// m-th limit moment `m! * f[m]`.
    pub fn moment(&self, m: usize) -> Result<f64> {
        if m < 1 || m > self.truncation() {
            return Err(Error::InvalidInput(format!(
                "moment order {m} outside 1..={}",
                self.truncation()
            )));
        }
        Ok(factorial(m)? as f64 * self.f[m])
    }
}

/// Builds the moment series for a regular `(W, r)` pair.
///
/// `d_2` comes from the shared-edge clique pair by direct enumeration; for
/// `l >= 3` the loose-cycle density equals the cycle density in the
/// clique-pair graphon and is computed through the transfer matrix.
pub fn moment_series(w: &StepGraphon, r: usize, truncation: usize) -> Result<MomentSeries> {
    check_order(r)?;
    if truncation < 2 || truncation > MAX_CLIQUE_ORDER {
        return Err(Error::InvalidInput(format!(
            "truncation order {truncation} outside 2..={MAX_CLIQUE_ORDER}"
        )));
    }
    if !w.is_kr_regular(r, CLASSIFY_DEFAULT_TOL)? {
        return Err(Error::InvalidInput(
            "moment series requires a graphon with a constant r-clique profile".into(),
        ));
    }
    let t_r = clique_density(w, r)?;
    let fact = factorial(r - 2)? as f64;
    let mut d = vec![0.0; truncation + 1];
    let shared = gluing_density(w, r, 2)?;
    d[2] = (shared - t_r * t_r) / (4.0 * fact * fact);
    let v = w.vwr(r)?;
    for (ell, slot) in d.iter_mut().enumerate().take(truncation + 1).skip(3) {
        let cycle = spectral::cycle_density_transfer(&v, ell)?;
        let denom = 2.0 * ell as f64 * fact.powi(ell as i32);
        if !denom.is_finite() {
            return Err(Error::Numerical(format!(
                "scaling denominator overflowed at cycle length {ell}"
            )));
        }
        *slot = (cycle - t_r.powi(ell as i32)) / denom;
    }
    let f = series::exp_series(&d);
    Ok(MomentSeries { r, t_r, d, f })
}

/// Moment generating function of the limit at `x`.
///
/// Finite only while `1 - 2 c x > 0` for every mixture coefficient `c`;
/// outside that domain an error is returned. Degenerate laws give 1.
pub fn mgf_limit(law: &LimitLaw, x: f64) -> Result<f64> {
    match &law.kind {
        LawKind::Degenerate { .. } => Ok(1.0),
        LawKind::Gaussian { sigma_hat } => Ok((sigma_hat * sigma_hat * x * x / 2.0).exp()),
        LawKind::ChiSquareMix {
            sigma,
            coefficients,
        } => {
            let mut m = (sigma * sigma * x * x / 2.0).exp();
            for &c in coefficients {
                let arg = 1.0 - 2.0 * c * x;
                if arg <= 0.0 {
                    return Err(Error::Numerical(format!(
                        "mgf undefined at x = {x}: 1 - 2cx = {arg} for coefficient {c}"
                    )));
                }
                m *= (-c * x).exp() / arg.sqrt();
            }
            Ok(m)
        }
    }
}

/// Taylor coefficients of the limit's moment generating function around zero,
/// assembled by series multiplication of the closed-form factors. This is an
/// independent route to the moments in [`MomentSeries`].
pub fn mgf_taylor(law: &LimitLaw, order: usize) -> Vec<f64> {
    let len = order + 1;
    let gaussian_part = |s: f64| {
        let mut g = vec![0.0; len];
        if len > 2 {
            g[2] = s * s / 2.0;
        }
        series::exp_series(&g)
    };
    match &law.kind {
        LawKind::Degenerate { .. } => {
            let mut out = vec![0.0; len];
            if len > 0 {
                out[0] = 1.0;
            }
            out
        }
        LawKind::Gaussian { sigma_hat } => gaussian_part(*sigma_hat),
        LawKind::ChiSquareMix {
            sigma,
            coefficients,
        } => {
            let mut acc = gaussian_part(*sigma);
            for &c in coefficients {
                let mut lin = vec![0.0; len];
                if len > 1 {
                    lin[1] = -c;
                }
                let factor =
                    series::mul_series(&series::exp_series(&lin), &series::inv_sqrt_one_minus(2.0 * c, len));
                acc = series::mul_series(&acc, &factor);
            }
            acc
        }
    }
}

/// Variance of the (non-degenerate) limit.
pub fn variance_of_limit(law: &LimitLaw) -> Result<f64> {
    match &law.kind {
        LawKind::Degenerate { .. } => Err(Error::InvalidInput(
            "degenerate law has no fluctuation scale".into(),
        )),
        LawKind::Gaussian { sigma_hat } => Ok(sigma_hat * sigma_hat),
        LawKind::ChiSquareMix {
            sigma,
            coefficients,
        } => Ok(sigma * sigma + 2.0 * coefficients.iter().map(|c| c * c).sum::<f64>()),
    }
}

/// Draws one sample of the (non-degenerate) limit.
///
/// Step graphons have finitely many mixture coefficients, so the sum is
/// exact, with no truncation.
pub fn sample_limit(law: &LimitLaw, stream: &mut RngStream) -> Result<f64> {
    use rand::Rng;
    use rand_distr::StandardNormal;
    match &law.kind {
        LawKind::Degenerate { .. } => Err(Error::InvalidInput(
            "cannot sample a degenerate limit".into(),
        )),
        LawKind::Gaussian { sigma_hat } => {
            let z: f64 = stream.sample(StandardNormal);
            Ok(sigma_hat * z)
        }
        LawKind::ChiSquareMix {
            sigma,
            coefficients,
        } => {
            let z: f64 = stream.sample(StandardNormal);
            let mut y = sigma * z;
            for &c in coefficients {
                let zl: f64 = stream.sample(StandardNormal);
                y += c * (zl * zl - 1.0);
            }
            Ok(y)
        }
    }
}

/// Whether the mixture limit is purely normal: the clique-pair graphon is
/// constant at `t_r` up to `tol` (equivalently, its reduced spectrum is
/// empty).
pub fn is_pure_normal(w: &StepGraphon, r: usize, tol: f64) -> Result<bool> {
    check_order(r)?;
    let t_r = clique_density(w, r)?;
    let v = w.vwr(r)?;
    let b = v.block_count();
    for i in 0..b {
        for j in 0..b {
            if (v.value(i, j) - t_r).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the normal term of the mixture vanishes: wherever the clique-pair
/// density is positive the graphon value is 1 (up to `tol`).
///
/// Cross-checked against [`sigma_sq`]; disagreement is reported as a
/// numerical inconsistency.
pub fn is_normal_free(w: &StepGraphon, r: usize, tol: f64) -> Result<bool> {
    check_order(r)?;
    let v = w.vwr(r)?;
    let b = v.block_count();
    let mut pred = true;
    'outer: for i in 0..b {
        for j in 0..b {
            if v.value(i, j) > tol && w.value(i, j) < 1.0 - tol {
                pred = false;
                break 'outer;
            }
        }
    }
    let s2 = sigma_sq(w, r)?;
    if pred != (s2 <= tol) {
        return Err(Error::Numerical(format!(
            "blockwise saturation test ({pred}) disagrees with sigma^2 = {s2:.3e}"
        )));
    }
    Ok(pred)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::sampler::split_stream;

    #[test]
    fn classify_two_cliques_r2() {
        let law = classify_limit(&corpus::two_cliques(), 2, CLASSIFY_DEFAULT_TOL).unwrap();
        assert_eq!(law.exponent(), Some(1.0));
        match &law.kind {
            LawKind::ChiSquareMix {
                sigma,
                coefficients,
            } => {
                assert_eq!(*sigma, 0.0);
                assert_eq!(coefficients.len(), 1);
                assert!((coefficients[0] - 0.25).abs() < 1e-12);
            }
            other => panic!("expected mixture, got {other:?}"),
        }
    }

    #[test]
    fn classify_two_cliques_r3() {
        let law = classify_limit(&corpus::two_cliques(), 3, CLASSIFY_DEFAULT_TOL).unwrap();
        match &law.kind {
            LawKind::ChiSquareMix {
                sigma,
                coefficients,
            } => {
                assert_eq!(*sigma, 0.0);
                assert_eq!(coefficients.len(), 1);
                assert!((coefficients[0] - 0.125).abs() < 1e-12);
            }
            other => panic!("expected mixture, got {other:?}"),
        }
    }

    #[test]
    fn classify_skewed_two_block_is_gaussian() {
        let law = classify_limit(&corpus::skewed_two_block(), 2, CLASSIFY_DEFAULT_TOL).unwrap();
        assert_eq!(law.exponent(), Some(1.5));
        match &law.kind {
            LawKind::Gaussian { sigma_hat } => assert!((sigma_hat - 0.1).abs() < 1e-12),
            other => panic!("expected Gaussian, got {other:?}"),
        }
    }

    #[test]
    fn classify_degenerate_cases() {
        let law = classify_limit(&corpus::constant(1.0), 4, CLASSIFY_DEFAULT_TOL).unwrap();
        assert_eq!(law.kind, LawKind::Degenerate { full: true });
        // Bipartite-complete graphon has no triangles.
        let w = StepGraphon::new(
            vec![0.5, 0.5],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let law = classify_limit(&w, 3, CLASSIFY_DEFAULT_TOL).unwrap();
        assert_eq!(law.kind, LawKind::Degenerate { full: false });
        assert!(law.is_degenerate());
    }

    #[test]
    fn sigma_sq_examples() {
        let half = corpus::constant(0.5);
        assert!((sigma_sq(&half, 2).unwrap() - 0.125).abs() < 1e-14);
        for r in 2..=4 {
            assert!(sigma_sq(&corpus::two_cliques(), r).unwrap() == 0.0);
        }
        assert_eq!(sigma_sq(&corpus::constant(1.0), 3).unwrap(), 0.0);
    }

    #[test]
    fn sigma_hat_examples() {
        assert!((sigma_hat(&corpus::skewed_two_block(), 2).unwrap() - 0.1).abs() < 1e-12);
        assert!(sigma_hat(&corpus::constant(0.3), 2).unwrap() < 1e-8);
        assert!(sigma_hat(&corpus::two_cliques(), 3).unwrap() < 1e-8);
    }

    #[test]
    fn moment_series_two_cliques_r2() {
        let toy = corpus::two_cliques();
        let series = moment_series(&toy, 2, 12).unwrap();
        assert!((series.d_coeffs()[2] - 1.0 / 16.0).abs() < 1e-15);
        assert!((series.d_coeffs()[3] - 1.0 / 48.0).abs() < 1e-15);
        assert_eq!(series.f_coeffs()[0], 1.0);
        assert_eq!(series.f_coeffs()[1], 0.0);
        assert!((series.moment(2).unwrap() - 0.125).abs() < 1e-12);
        assert!((series.moment(3).unwrap() - 0.125).abs() < 1e-12);
        assert!(series.moment(13).is_err());
    }

    #[test]
    fn moment_series_constant_pure_normal() {
        let w = corpus::constant(0.5);
        let series = moment_series(&w, 2, 8).unwrap();
        // Only the normal term contributes to d_2; higher d_l vanish.
        assert!((series.d_coeffs()[2] - (0.5 - 0.25) / 4.0).abs() < 1e-14);
        for ell in 3..=8 {
            assert!(series.d_coeffs()[ell].abs() < 1e-12, "ell = {ell}");
        }
    }

    #[test]
    fn moment_series_rejects_non_regular() {
        assert!(moment_series(&corpus::skewed_two_block(), 2, 8).is_err());
    }

    #[test]
    fn first_moment_vanishes() {
        let series = moment_series(&corpus::two_cliques(), 2, 6).unwrap();
        assert_eq!(series.moment(1).unwrap(), 0.0);
    }

    #[test]
    fn mgf_examples() {
        let law = classify_limit(&corpus::two_cliques(), 2, CLASSIFY_DEFAULT_TOL).unwrap();
        let expect = (-0.25f64).exp() / 0.5f64.sqrt();
        assert!((mgf_limit(&law, 1.0).unwrap() - expect).abs() < 1e-14);
        assert_eq!(mgf_limit(&law, 0.0).unwrap(), 1.0);
        assert!(mgf_limit(&law, 2.0).is_err());
    }

    #[test]
    fn variance_examples() {
        let mix = LimitLaw {
            r: 2,
            t_r: 0.5,
            kind: LawKind::ChiSquareMix {
                sigma: 0.0,
                coefficients: vec![0.25],
            },
        };
        assert!((variance_of_limit(&mix).unwrap() - 0.125).abs() < 1e-15);

        let gauss = LimitLaw {
            r: 2,
            t_r: 0.4,
            kind: LawKind::Gaussian { sigma_hat: 0.1 },
        };
        assert!((variance_of_limit(&gauss).unwrap() - 0.01).abs() < 1e-15);

        let half = classify_limit(&corpus::constant(0.5), 2, CLASSIFY_DEFAULT_TOL).unwrap();
        assert!((variance_of_limit(&half).unwrap() - 0.125).abs() < 1e-12);

        let degen = classify_limit(&corpus::constant(1.0), 2, CLASSIFY_DEFAULT_TOL).unwrap();
        assert!(variance_of_limit(&degen).is_err());
        assert!(sample_limit(&degen, &mut split_stream(1, 0)).is_err());
    }

    #[test]
    fn sample_limit_statistics() {
        let trials = 1_000_000usize;
        let gauss = LimitLaw {
            r: 2,
            t_r: 0.4,
            kind: LawKind::Gaussian { sigma_hat: 0.1 },
        };
        let mut stream = split_stream(0xA5A5, 0);
        let mut sum = 0.0;
        for _ in 0..trials {
            sum += sample_limit(&gauss, &mut stream).unwrap();
        }
        let mean = sum / trials as f64;
        assert!(mean.abs() < 4e-4, "mean {mean}");

        let mix = classify_limit(&corpus::two_cliques(), 2, CLASSIFY_DEFAULT_TOL).unwrap();
        let mut stream = split_stream(0xA5A5, 1);
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..trials {
            let y = sample_limit(&mix, &mut stream).unwrap();
            sum += y;
            sq += y * y;
        }
        let var = sq / trials as f64 - (sum / trials as f64).powi(2);
        assert!((var - 0.125).abs() < 0.125 * 0.02, "variance {var}");
    }

    #[test]
    fn pure_normal_examples() {
        assert!(is_pure_normal(&corpus::constant(0.4), 3, 1e-10).unwrap());
        assert!(!is_pure_normal(&corpus::two_cliques(), 3, 1e-10).unwrap());
        assert!(is_pure_normal(&corpus::constant(1.0), 3, 1e-10).unwrap());
    }

    #[test]
    fn normal_free_examples() {
        assert!(is_normal_free(&corpus::two_cliques(), 3, 1e-10).unwrap());
        assert!(!is_normal_free(&corpus::constant(0.5), 2, 1e-10).unwrap());
        assert!(is_normal_free(&corpus::paired_tripartite(0.37), 3, 1e-10).unwrap());
    }

    #[test]
    fn mixture_never_fully_degenerate() {
        for (w, r) in corpus::regular_corpus_cases() {
            let law = classify_limit(&w, r, CLASSIFY_DEFAULT_TOL).unwrap();
            if let LawKind::ChiSquareMix {
                sigma,
                coefficients,
            } = &law.kind
            {
                let mass = sigma * sigma + coefficients.iter().map(|c| c * c).sum::<f64>();
                assert!(mass > 0.0, "degenerate mixture for r = {r}");
            }
        }
    }

    #[test]
    fn moment_decompositions_against_spectrum() {
        for (w, r) in corpus::regular_corpus_cases() {
            let series = moment_series(&w, r, 8).unwrap();
            let spec = mixture_spectrum(&w, r).unwrap();
            let fact = factorial(r - 2).unwrap() as f64;
            let s2 = sigma_sq(&w, r).unwrap();
            let d2_expect = s2 / 2.0
                + 0.25
                    * spec
                        .eigenvalues()
                        .iter()
                        .map(|l| (l / fact).powi(2))
                        .sum::<f64>();
            assert!(
                (series.d_coeffs()[2] - d2_expect).abs() < 1e-9,
                "d2 for r = {r}"
            );
            for ell in 3..=8usize {
                let expect = spec
                    .eigenvalues()
                    .iter()
                    .map(|l| (l / fact).powi(ell as i32))
                    .sum::<f64>()
                    / (2.0 * ell as f64);
                assert!(
                    (series.d_coeffs()[ell] - expect).abs() < 1e-9,
                    "d{ell} for r = {r}"
                );
            }
        }
    }

    #[test]
    fn mgf_taylor_matches_series_moments() {
        for (w, r) in corpus::regular_corpus_cases() {
            let law = classify_limit(&w, r, CLASSIFY_DEFAULT_TOL).unwrap();
            if law.is_degenerate() {
                continue;
            }
            let series = moment_series(&w, r, 8).unwrap();
            let taylor = mgf_taylor(&law, 8);
            for m in 1..=6usize {
                let moment_series_val = series.moment(m).unwrap();
                let moment_mgf = factorial(m).unwrap() as f64 * taylor[m];
                assert!(
                    (moment_series_val - moment_mgf).abs() < 1e-6,
                    "moment {m} for r = {r}: {moment_series_val} vs {moment_mgf}"
                );
            }
            let var = variance_of_limit(&law).unwrap();
            assert!((series.moment(2).unwrap() - var).abs() < 1e-9);
        }
    }

    #[test]
    fn monte_carlo_mgf_agreement() {
        let law = classify_limit(&corpus::two_cliques(), 2, CLASSIFY_DEFAULT_TOL).unwrap();
        let trials = 200_000usize;
        let x = 1.0;
        let mut stream = split_stream(0xBEEF, 3);
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..trials {
            let e = (x * sample_limit(&law, &mut stream).unwrap()).exp();
            sum += e;
            sq += e * e;
        }
        let mean = sum / trials as f64;
        let se = ((sq / trials as f64 - mean * mean) / trials as f64).sqrt();
        let theory = mgf_limit(&law, x).unwrap();
        assert!(
            (mean - theory).abs() <= 5.0 * se,
            "mc {mean} vs mgf {theory} (se {se})"
        );
    }
}
