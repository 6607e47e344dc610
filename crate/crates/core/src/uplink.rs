//! Uplink receive processing over a ray (or codeword) selection.
//!
//! Channels are the effective port channels `h_k` (RAA ports or DFT codeword
//! outputs). Port noise has variance `M sigma^2`, so with the transmit SNR
//! `pt_bar = P_t / sigma^2` the regularizer of the MMSE filter is
//! `M / pt_bar`.

use crate::error::{invalid, Error, Result};
use crate::linalg::{gram_plus_identity, inner, solve_hpd};
use crate::selection::{check_cap, Combinations, RaySelection};
use crate::CVector;

/// Multi-user uplink instance.
#[derive(Debug, Clone)]
pub struct Uplink {
    channels: Vec<CVector>,
    m: usize,
    pt_bar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UplinkResult {
    pub selection: RaySelection,
    pub combiners: Vec<CVector>,
    pub sinr: Vec<f64>,
    pub sum_rate: f64,
    /// Sum rate after each greedy step; a single entry for other searches.
    pub trace: Vec<f64>,
}

impl Uplink {
    pub fn new(channels: Vec<CVector>, m: usize, pt_bar: f64) -> Result<Self> {
        if channels.is_empty() {
            return Err(invalid("need at least one user channel"));
        }
        let n = channels[0].len();
        if channels.iter().any(|h| h.len() != n) {
            return Err(Error::DimensionMismatch(
                "user channels differ in length".to_string(),
            ));
        }
        if m == 0 {
            return Err(invalid("element count must be positive"));
        }
        if !(pt_bar > 0.0 && pt_bar.is_finite()) {
            return Err(invalid(format!("transmit SNR must be positive, got {pt_bar}")));
        }
        Ok(Self { channels, m, pt_bar })
    }

    pub fn users(&self) -> usize {
        self.channels.len()
    }

    pub fn ports(&self) -> usize {
        self.channels[0].len()
    }

    pub fn channels(&self) -> &[CVector] {
        &self.channels
    }

    pub fn pt_bar(&self) -> f64 {
        self.pt_bar
    }

    fn check_selection(&self, sel: &RaySelection) -> Result<()> {
        if sel.n_total() != self.ports() {
            return Err(Error::DimensionMismatch(format!(
                "selection over {} ports, channels have {}",
                sel.n_total(),
                self.ports()
            )));
        }
        Ok(())
    }

    fn selected(&self, sel: &RaySelection) -> Vec<CVector> {
        self.channels.iter().map(|h| sel.apply(h)).collect()
    }

    /// SINR of user `k` for arbitrary combiners `w` (one per user).
    pub fn sinr(&self, k: usize, w: &[CVector], sel: &RaySelection) -> Result<f64> {
        self.check_selection(sel)?;
        if k >= self.users() || w.len() != self.users() {
            return Err(Error::DimensionMismatch(format!(
                "user {k} with {} combiners for {} users",
                w.len(),
                self.users()
            )));
        }
        if w[k].len() != sel.len() {
            return Err(Error::DimensionMismatch(format!(
                "combiner length {} vs {} selected ports",
                w[k].len(),
                sel.len()
            )));
        }
        let p = self.pt_bar / self.m as f64;
        let g = self.selected(sel);
        let signal = p * inner(&w[k], &g[k]).norm_sqr();
        let interference: f64 = (0..self.users())
            .filter(|&i| i != k)
            .map(|i| p * inner(&w[k], &g[i]).norm_sqr())
            .sum();
        let noise = w[k].norm_squared();
        if signal == 0.0 {
            return Ok(0.0);
        }
        Ok(signal / (interference + noise))
    }

    /// `w_k = C_k^{-1} S h_k` for every user.
    pub fn mmse_combiners(&self, sel: &RaySelection) -> Result<Vec<CVector>> {
        self.check_selection(sel)?;
        let g = self.selected(sel);
        let diag = self.m as f64 / self.pt_bar;
        (0..g.len())
            .map(|k| {
                solve_hpd(gram_plus_identity(&g, Some(k), diag), &g[k])
                    .ok_or_else(|| Error::NonConvergence("singular MMSE covariance".to_string()))
            })
            .collect()
    }

    /// MMSE SINRs `g_k^H C_k^{-1} g_k`.
    pub fn mmse_sinrs(&self, sel: &RaySelection) -> Result<Vec<f64>> {
        let g = self.selected(sel);
        let w = self.mmse_combiners(sel)?;
        Ok(g.iter()
            .zip(&w)
            .map(|(gk, wk)| inner(gk, wk).re.max(0.0))
            .collect())
    }

    /// Sum rate of MMSE combining on `sel`.
    ///
    /// One factorization of `A = sum_i g_i g_i^H + (M / pt_bar) I` serves all
    /// users: with `t_k = g_k^H A^{-1} g_k` the SINR is `t_k / (1 - t_k)`.
    pub fn sum_rate(&self, sel: &RaySelection) -> Result<f64> {
        self.check_selection(sel)?;
        if sel.is_empty() {
            return Ok(0.0);
        }
        let g = self.selected(sel);
        let diag = self.m as f64 / self.pt_bar;
        let Some(chol) = gram_plus_identity(&g, None, diag).cholesky() else {
            return Ok(rate(&self.mmse_sinrs(sel)?));
        };
        let mut sinr = Vec::with_capacity(g.len());
        for gk in &g {
            let t = inner(gk, &chol.solve(gk)).re;
            if !(t < 1.0 - 1e-9) {
                return Ok(rate(&self.mmse_sinrs(sel)?));
            }
            sinr.push(t.max(0.0) / (1.0 - t));
        }
        Ok(rate(&sinr))
    }

    /// Sum rate with matched-filter combiners `w_k = S h_k`.
    pub fn mrc_sum_rate(&self, sel: &RaySelection) -> Result<f64> {
        let w = self.selected(sel);
        let sinr = (0..self.users())
            .map(|k| self.sinr(k, &w, sel))
            .collect::<Result<Vec<_>>>()?;
        Ok(rate(&sinr))
    }

    /// MMSE combiners, SINRs and sum rate on a fixed selection.
    pub fn evaluate(&self, sel: RaySelection) -> Result<UplinkResult> {
        let combiners = self.mmse_combiners(&sel)?;
        let g = self.selected(&sel);
        let sinr: Vec<f64> = g
            .iter()
            .zip(&combiners)
            .map(|(gk, wk)| inner(gk, wk).re.max(0.0))
            .collect();
        let sum_rate = rate(&sinr);
        Ok(UplinkResult {
            selection: sel,
            combiners,
            sinr,
            sum_rate,
            trace: vec![sum_rate],
        })
    }

    /// Adds one port per step, each time the one with the largest sum rate.
    pub fn greedy(&self, n_rf: usize) -> Result<UplinkResult> {
        let n = self.ports();
        if n_rf == 0 || n_rf > n {
            return Err(invalid(format!("cannot select {n_rf} of {n} ports")));
        }
        let mut sel = RaySelection::new(Vec::new(), n)?;
        let mut trace = Vec::with_capacity(n_rf);
        for _ in 0..n_rf {
            let mut best: Option<(f64, usize)> = None;
            for pos in (0..n).filter(|&p| !sel.contains(p)) {
                let r = self.sum_rate(&sel.with(pos)?)?;
                if best.is_none_or(|(b, _)| r > b) {
                    best = Some((r, pos));
                }
            }
            let (r, pos) = best.expect("an unselected port remains");
            sel = sel.with(pos)?;
            trace.push(r);
        }
        let mut out = self.evaluate(sel)?;
        out.trace = trace;
        Ok(out)
    }

    /// Best `n_rf`-subset by sum rate; the first subset in lexicographic
    /// order wins ties.
    pub fn exhaustive(&self, n_rf: usize, cap: u128) -> Result<UplinkResult> {
        let n = self.ports();
        if n_rf == 0 || n_rf > n {
            return Err(invalid(format!("cannot select {n_rf} of {n} ports")));
        }
        check_cap(n, n_rf, cap)?;
        let mut best: Option<(f64, Vec<usize>)> = None;
        for subset in Combinations::new(n, n_rf) {
            let r = self.sum_rate(&RaySelection::new(subset.clone(), n)?)?;
            if best.as_ref().is_none_or(|(b, _)| r > *b) {
                best = Some((r, subset));
            }
        }
        let (_, omega) = best.expect("at least one subset");
        self.evaluate(RaySelection::new(omega, n)?)
    }
}

/// `sum_k log2(1 + sinr_k)`.
pub fn rate(sinr: &[f64]) -> f64 {
    sinr.iter().map(|s| (1.0 + s).log2()).sum()
}

/// Single user: keep the `n_rf` strongest ports and combine them with MRC.
/// The SNR is `pt_bar ||S h||^2 / M`.
pub fn single_user_select_and_mrc(
    h: &CVector,
    n_rf: usize,
    pt_bar: f64,
    m: usize,
) -> Result<UplinkResult> {
    if !(pt_bar > 0.0) {
        return Err(invalid(format!("transmit SNR must be positive, got {pt_bar}")));
    }
    let mags: Vec<f64> = h.iter().map(|v| v.norm()).collect();
    let sel = RaySelection::top_by_score(&mags, n_rf)?;
    let w = sel.apply(h);
    let snr = pt_bar * w.norm_squared() / m as f64;
    let sum_rate = (1.0 + snr).log2();
    Ok(UplinkResult {
        selection: sel,
        combiners: vec![w],
        sinr: vec![snr],
        sum_rate,
        trace: vec![sum_rate],
    })
}
