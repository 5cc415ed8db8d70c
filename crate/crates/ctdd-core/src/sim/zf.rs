//! Full-matrix zero-forcing validation.
//!
//! The network simulator samples effective fading gains from their derived
//! distributions (Gamma and exponential marks). This module builds the
//! actual complex-Gaussian channels, pseudo-inverse precoders and receive
//! filters, and returns the empirical gain samples so those distributions
//! can be checked (and their approximation quality measured) directly.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{CoreError, Result};

/// Empirical gain samples from the matrix-level ZF construction.
#[derive(Debug, Clone)]
pub struct ZfValidation {
    /// DL desired gain `||h00^H w00||^2` (per theory Gamma(M-n+1, 1)).
    pub desired: Vec<f64>,
    /// DL out-of-cell aggregate gain `|h^H W|^2` over the n unit-norm
    /// precoder columns (modeled Gamma(n, 1)).
    pub interferer: Vec<f64>,
    /// Single-stream out-of-cell gain `|h^H w_c|^2` (exactly Exp(1)).
    pub interferer_stream: Vec<f64>,
    /// UL desired gain `||v0^H g00||^2` after the ZF receive filter.
    pub ul_desired: Vec<f64>,
    /// UL cross-link gain `|v0^H H^H W|^2` from a DL SAP (modeled
    /// Gamma(n, 1)).
    pub ul_cross: Vec<f64>,
    /// Worst ZF nulling residual `|h_c^H w_c'|^2`, c != c', across all
    /// samples; the construction makes these zero up to roundoff.
    pub max_nulling_residual: f64,
    /// Rank-deficient channel draws that were rejected and resampled.
    pub resampled: u64,
}

fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * std::f64::consts::FRAC_1_SQRT_2, im * std::f64::consts::FRAC_1_SQRT_2)
    })
}

/// Unit-norm ZF precoder columns for a channel with rows `h_c`: the columns
/// of the pseudo-inverse of the normalized-direction matrix, rescaled to
/// unit norm. Returns `(W, row_norms)`; `None` when the sampled channel is
/// rank deficient.
fn zf_precoder(h: &DMatrix<Complex64>) -> Option<(DMatrix<Complex64>, Vec<f64>)> {
    let n = h.nrows();
    let row_norms: Vec<f64> = (0..n).map(|c| h.row(c).norm()).collect();
    if row_norms.iter().any(|&v| v == 0.0) {
        return None;
    }
    // Rows of `directions` are h_c^H / ||h_c||.
    let directions = DMatrix::from_fn(n, h.ncols(), |c, a| h[(c, a)].conj() / row_norms[c]);
    let gram = &directions * directions.adjoint();
    let gram_inv = gram.try_inverse()?;
    let mut pinv = directions.adjoint() * gram_inv;
    for mut col in pinv.column_iter_mut() {
        let norm = col.norm();
        if norm == 0.0 {
            return None;
        }
        col /= Complex64::new(norm, 0.0);
    }
    Some((pinv, row_norms))
}

/// Sample the ZF gain distributions for an `m`-antenna SAP serving `n` MUs.
pub fn zf_validation<R: Rng>(m: usize, n: usize, samples: usize, rng: &mut R) -> Result<ZfValidation> {
    if n < 1 || n > m {
        return Err(CoreError::InvalidConfig(format!(
            "zf validation requires 1 <= n <= m (got n={n}, m={m})"
        )));
    }
    let mut out = ZfValidation {
        desired: Vec::with_capacity(samples),
        interferer: Vec::with_capacity(samples),
        interferer_stream: Vec::with_capacity(samples),
        ul_desired: Vec::with_capacity(samples),
        ul_cross: Vec::with_capacity(samples),
        max_nulling_residual: 0.0,
        resampled: 0,
    };

    for _ in 0..samples {
        // Serving-side construction: channel, precoder, nulling check.
        let (h, w, norms) = loop {
            let h = gaussian_matrix(n, m, rng);
            match zf_precoder(&h) {
                Some((w, norms)) => break (h, w, norms),
                None => out.resampled += 1,
            }
        };
        for c in 0..n {
            for cp in 0..n {
                let gain = (h.row(c).map(|z| z.conj()) * w.column(cp)).norm_squared();
                if c == cp {
                    continue;
                }
                out.max_nulling_residual = out.max_nulling_residual.max(gain);
            }
        }
        out.desired
            .push((h.row(0).map(|z| z.conj()) * w.column(0)).norm_squared());
        let _ = norms;

        // Out-of-cell DL interference: independent channel against the same
        // precoder.
        let g = gaussian_matrix(1, m, rng);
        let gh = g.map(|z| z.conj());
        let agg: f64 = (0..n)
            .map(|c| (&gh * w.column(c)).norm_squared())
            .sum();
        out.interferer.push(agg);
        out.interferer_stream
            .push((&gh * w.column(0)).norm_squared());

        // UL receive side: the filter is the first pseudo-inverse column of
        // the co-served channel matrix, so the same construction applies.
        let (gu, v, _) = loop {
            let gu = gaussian_matrix(n, m, rng);
            match zf_precoder(&gu) {
                Some((vm, norms)) => break (gu, vm.column(0).into_owned(), norms),
                None => out.resampled += 1,
            }
        };
        out.ul_desired
            .push((gu.row(0).map(|z| z.conj()) * &v).norm_squared());
        for p in 1..n {
            let resid = (gu.row(p).map(|z| z.conj()) * &v).norm_squared();
            out.max_nulling_residual = out.max_nulling_residual.max(resid);
        }

        // Cross-link DL-SAP-to-SAP gain through the receive filter: the
        // effective channel row v^H H^H is again isotropic Gaussian.
        let hj = gaussian_matrix(m, m, rng);
        let eff = v.adjoint() * hj.adjoint();
        let cross: f64 = (0..n)
            .map(|c| (&eff * w.column(c)).norm_squared())
            .sum();
        out.ul_cross.push(cross);
    }
    Ok(out)
}
