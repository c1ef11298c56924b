//! Spectra of step-graphon kernel operators and cycle densities.
//!
//! For a step graphon the kernel operator has finite rank: its nonzero
//! eigenvalues are the eigenvalues of the `B x B` symmetric matrix
//! `S[i][j] = sqrt(mu_i * mu_j) * value[i][j]` (conjugate the block transfer
//! matrix `value * diag(mu)` by `diag(sqrt(mu))`). Eigenvalues are computed
//! with cyclic Jacobi sweeps; `B` is small, so nothing heavier is needed.
//!
//! Cycle densities have two routes: the power sum over the spectrum, and the
//! trace of a power of the transfer matrix. Tests hold the two against the
//! direct block enumeration.

use crate::error::{Error, Result};
use crate::graphon::StepGraphon;

/// Eigenvalues with `|lambda|` at or below this are treated as zero and
/// dropped from the spectrum.
pub const EIGENVALUE_ZERO_THRESHOLD: f64 = 1e-12;

/// Default matching tolerance when removing the regular degree from a
/// spectrum.
pub const SPEC_MINUS_DEFAULT_TOL: f64 = 1e-8;

/// Slack allowed on the Hilbert-Schmidt identity `sum lambda^2 = int W^2`.
const HILBERT_SCHMIDT_TOL: f64 = 1e-9;

/// Multiset of nonzero eigenvalues, sorted by descending `|lambda|` (ties
/// broken by descending value).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Filters out numerically zero entries and sorts.
    pub fn new(eigenvalues: Vec<f64>) -> Self {
        Self::with_zero_threshold(eigenvalues, EIGENVALUE_ZERO_THRESHOLD)
    }

    pub fn with_zero_threshold(mut eigenvalues: Vec<f64>, zero_threshold: f64) -> Self {
        eigenvalues.retain(|l| l.abs() > zero_threshold);
        eigenvalues.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
        Spectrum { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum_squares(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum()
    }

    /// `sum lambda^ell` over the multiset.
    pub fn sum_powers(&self, ell: usize) -> f64 {
        self.eigenvalues.iter().map(|l| l.powi(ell as i32)).sum()
    }
}

/// Nonzero eigenvalues of the kernel operator of `W`.
pub fn spectrum(w: &StepGraphon) -> Result<Spectrum> {
    spectrum_with_threshold(w, EIGENVALUE_ZERO_THRESHOLD)
}

/// Same as [`spectrum`] with an explicit zero threshold.
pub fn spectrum_with_threshold(w: &StepGraphon, zero_threshold: f64) -> Result<Spectrum> {
    let b = w.block_count();
    let mut s = vec![0.0; b * b];
    for i in 0..b {
        for j in 0..b {
            s[i * b + j] = (w.mu()[i] * w.mu()[j]).sqrt() * w.value(i, j);
        }
    }
    let eig = jacobi_eigenvalues(s, b)?;
    let spec = Spectrum::with_zero_threshold(eig, zero_threshold);
    let gap = (spec.sum_squares() - w.square_integral()).abs();
    if gap > HILBERT_SCHMIDT_TOL {
        return Err(Error::Numerical(format!(
            "eigenvalue square sum misses the square integral by {gap:.3e}"
        )));
    }
    Ok(spec)
}

/// Removes one eigenvalue closest to the regular degree `d`.
///
/// Errors unless the closest eigenvalue is within `tol` of `d`, which would
/// signal a non-regular input or a numerical failure.
pub fn spec_minus(spec: &Spectrum, d: f64, tol: f64) -> Result<Spectrum> {
    if tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "matching tolerance {tol} must be positive"
        )));
    }
    let best = spec
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| (*a - d).abs().total_cmp(&(*b - d).abs()));
    match best {
        Some((idx, &l)) if (l - d).abs() <= tol => {
            let mut rest = spec.eigenvalues.clone();
            rest.remove(idx);
            Ok(Spectrum { eigenvalues: rest })
        }
        _ => Err(Error::Numerical(format!(
            "no eigenvalue within {tol:.1e} of degree {d}"
        ))),
    }
}

/// Cycle density `t(C_ell, W)` as the power sum of the spectrum.
pub fn cycle_density_spectral(spec: &Spectrum, ell: usize) -> Result<f64> {
    if ell < 2 {
        return Err(Error::InvalidInput(format!(
            "cycle length {ell} must be at least 2"
        )));
    }
    Ok(spec.sum_powers(ell))
}

/// Cycle density `t(C_ell, W)` as the trace of the `ell`-th power of the
/// block transfer matrix `value * diag(mu)`, avoiding `B^ell` enumeration.
pub fn cycle_density_transfer(w: &StepGraphon, ell: usize) -> Result<f64> {
    if ell < 2 {
        return Err(Error::InvalidInput(format!(
            "cycle length {ell} must be at least 2"
        )));
    }
    let b = w.block_count();
    let mut t = vec![0.0; b * b];
    for i in 0..b {
        for j in 0..b {
            t[i * b + j] = w.value(i, j) * w.mu()[j];
        }
    }
    let mut pow = t.clone();
    for _ in 1..ell {
        pow = mat_mul(&pow, &t, b);
    }
    Ok((0..b).map(|i| pow[i * b + i]).sum())
}

fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    const MAX_SWEEPS: usize = 64;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    let fro: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let stop = fro * 1e-15;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a[p * n + q].abs();
            }
        }
        if off <= stop {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // Smaller-magnitude root of t^2 + 2*theta*t - 1 = 0.
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
            }
        }
    }
    Err(Error::Numerical(
        "Jacobi sweeps did not converge".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::density::hom_density;
    use crate::multigraph::LabeledMultigraph;

    #[test]
    fn spectrum_two_cliques() {
        let spec = spectrum(&corpus::two_cliques()).unwrap();
        assert_eq!(spec.len(), 2);
        assert!((spec.eigenvalues()[0] - 0.5).abs() < 1e-14);
        assert!((spec.eigenvalues()[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn spectrum_constant() {
        let spec = spectrum(&corpus::constant(0.3)).unwrap();
        assert_eq!(spec.eigenvalues(), &[0.3]);
    }

    #[test]
    fn spectrum_of_zero_graphon_is_empty() {
        let w = corpus::constant(0.0);
        assert!(spectrum(&w).unwrap().is_empty());
    }

    #[test]
    fn spec_minus_examples() {
        let spec = Spectrum::new(vec![0.25, 0.25]);
        let rest = spec_minus(&spec, 0.25, SPEC_MINUS_DEFAULT_TOL).unwrap();
        assert_eq!(rest.eigenvalues(), &[0.25]);

        let spec = Spectrum::new(vec![0.3]);
        let rest = spec_minus(&spec, 0.3, SPEC_MINUS_DEFAULT_TOL).unwrap();
        assert!(rest.is_empty());

        let spec = Spectrum::new(vec![0.9, 0.1]);
        assert!(spec_minus(&spec, 0.5, 1e-8).is_err());
        assert!(spec_minus(&Spectrum::new(vec![]), 0.5, 1e-8).is_err());
    }

    #[test]
    fn cycle_density_examples() {
        let spec = spectrum(&corpus::two_cliques()).unwrap();
        assert!((cycle_density_spectral(&spec, 4).unwrap() - 0.125).abs() < 1e-14);

        let spec = Spectrum::new(vec![0.4]);
        assert!((cycle_density_spectral(&spec, 2).unwrap() - 0.16).abs() < 1e-15);

        assert_eq!(
            cycle_density_spectral(&Spectrum::new(vec![]), 5).unwrap(),
            0.0
        );
        assert!(cycle_density_spectral(&spec, 1).is_err());
    }

    #[test]
    fn transfer_examples() {
        let toy = corpus::two_cliques();
        assert!((cycle_density_transfer(&toy, 3).unwrap() - 0.25).abs() < 1e-14);

        let w = corpus::constant(0.5);
        assert!((cycle_density_transfer(&w, 2).unwrap() - 0.25).abs() < 1e-15);

        let skew = corpus::skewed_two_block();
        assert!((cycle_density_transfer(&skew, 2).unwrap() - 0.22).abs() < 1e-14);
    }

    #[test]
    fn spectral_and_transfer_match_enumeration() {
        let mut rng = crate::sampler::split_stream(0x5EED, 7);
        for blocks in 1..=4 {
            let w = corpus::random_graphon(&mut rng, blocks);
            let spec = spectrum(&w).unwrap();
            for ell in 2..=6 {
                let brute =
                    hom_density(&LabeledMultigraph::cycle(ell).unwrap(), &w).unwrap();
                let via_spec = cycle_density_spectral(&spec, ell).unwrap();
                let via_transfer = cycle_density_transfer(&w, ell).unwrap();
                assert!((via_spec - brute).abs() < 1e-10, "spec ell={ell}");
                assert!((via_transfer - brute).abs() < 1e-12, "transfer ell={ell}");
            }
        }
    }

    #[test]
    fn hilbert_schmidt_bound_holds() {
        let mut rng = crate::sampler::split_stream(0x5EED, 8);
        for blocks in 1..=5 {
            let w = corpus::random_graphon(&mut rng, blocks);
            let spec = spectrum(&w).unwrap();
            assert!(spec.sum_squares() <= 1.0 + 1e-9);
            assert!((spec.sum_squares() - w.square_integral()).abs() <= 1e-9);
        }
    }

    #[test]
    fn regular_graphon_has_degree_eigenvalue() {
        for w in [
            corpus::two_cliques(),
            corpus::constant(0.8),
            corpus::balanced_multipartite(3),
        ] {
            let d = w.degree_function().entries()[0];
            let spec = spectrum(&w).unwrap();
            assert!(
                spec.eigenvalues().iter().any(|l| (l - d).abs() < 1e-9),
                "degree {d} missing from {:?}",
                spec.eigenvalues()
            );
        }
    }
}
