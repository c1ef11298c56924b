//! Minimal truncated power-series arithmetic for the moment machinery.

/// Coefficients of `exp(g)` for a series with `g[0] = 0`, truncated to the
/// input length. Uses the recurrence `n f_n = sum_{k=1..n} k g_k f_{n-k}`.
pub(crate) fn exp_series(g: &[f64]) -> Vec<f64> {
    debug_assert!(g.first().is_none_or(|&c| c == 0.0));
    let len = g.len();
    let mut f = vec![0.0; len];
    if len == 0 {
        return f;
    }
    f[0] = 1.0;
    for n in 1..len {
        let mut acc = 0.0;
        for k in 1..=n {
            acc += (k as f64) * g[k] * f[n - k];
        }
        f[n] = acc / n as f64;
    }
    f
}

/// Product of two series, truncated to the length of `a`.
pub(crate) fn mul_series(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len();
    let mut out = vec![0.0; len];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().take(len - i).enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of `(1 - c x)^(-1/2)` up to degree `len - 1`:
/// `a_k = a_{k-1} * c * (2k - 1) / (2k)`.
pub(crate) fn inv_sqrt_one_minus(c: f64, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    if len == 0 {
        return out;
    }
    out[0] = 1.0;
    for k in 1..len {
        out[k] = out[k - 1] * c * (2 * k - 1) as f64 / (2 * k) as f64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_linear_term_is_exponential() {
        let g = [0.0, 0.5, 0.0, 0.0, 0.0];
        let f = exp_series(&g);
        for (k, coeff) in f.iter().enumerate() {
            let expect = 0.5f64.powi(k as i32)
                / (1..=k).map(|i| i as f64).product::<f64>();
            assert!((coeff - expect).abs() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn multiplication_matches_exponent_addition() {
        let a = exp_series(&[0.0, 0.3, -0.2, 0.05]);
        let b = exp_series(&[0.0, -0.1, 0.4, 0.02]);
        let prod = mul_series(&a, &b);
        let direct = exp_series(&[0.0, 0.2, 0.2, 0.07]);
        for k in 0..4 {
            assert!((prod[k] - direct[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn inv_sqrt_series_squares_back() {
        // f^2 * (1 - c x) should be 1.
        let c = 0.37;
        let f = inv_sqrt_one_minus(c, 9);
        let sq = mul_series(&f, &f);
        let mut back = [0.0; 9];
        for k in 0..9 {
            back[k] = sq[k] - if k > 0 { c * sq[k - 1] } else { 0.0 };
        }
        assert!((back[0] - 1.0).abs() < 1e-14);
        for coeff in &back[1..] {
            assert!(coeff.abs() < 1e-13);
        }
    }
}
