//! Downlink precoding: single-user MRT and max-min SINR with ray selection.
//!
//! The max-min problem is split the usual way. For a fixed selection the
//! largest common SINR target is found by bisection over a feasibility
//! oracle; for fixed precoders the selection is found by enumerating
//! subsets. The oracle solves the virtual uplink power-minimization fixed
//! point and maps its MMSE filters back to downlink beams.

use crate::error::{invalid, Error, Result};
use crate::linalg::{inner, solve_hpd, weighted_gram_plus_identity};
use crate::selection::{check_cap, Combinations, RaySelection, DEFAULT_ENUMERATION_CAP};
use crate::{CVector, Complex64};
use nalgebra::DVector;

/// Relative convergence tolerance of the virtual-uplink fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-9;
/// Iteration cap of the virtual-uplink fixed point.
pub const FIXED_POINT_MAX_ITER: usize = 10_000;
/// Relative slack accepted on the power budget.
pub const POWER_SLACK: f64 = 1e-9;
/// Relative slack accepted on the SINR target.
pub const SINR_SLACK: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct DownlinkProblem {
    channels: Vec<CVector>,
    n_rf: usize,
    p_dl: f64,
    sigma2: f64,
    m: usize,
    cap: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxMinResult {
    pub selection: RaySelection,
    pub precoders: Vec<CVector>,
    pub gamma: f64,
    pub trace: Vec<f64>,
}

/// Settings of the alternating optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingOptions {
    pub max_iterations: usize,
    pub eps: f64,
    pub bisection_tol: f64,
}

impl Default for AlternatingOptions {
    fn default() -> Self {
        Self {
            max_iterations: 20,
            eps: 1e-3,
            bisection_tol: 1e-6,
        }
    }
}

impl DownlinkProblem {
    pub fn new(channels: Vec<CVector>, n_rf: usize, p_dl: f64, sigma2: f64, m: usize) -> Result<Self> {
        if channels.is_empty() {
            return Err(invalid("need at least one user channel"));
        }
        let n = channels[0].len();
        if channels.iter().any(|h| h.len() != n) {
            return Err(Error::DimensionMismatch(
                "user channels differ in length".to_string(),
            ));
        }
        if n_rf == 0 || n_rf > n {
            return Err(invalid(format!("cannot drive {n_rf} RF chains from {n} ports")));
        }
        if !(p_dl > 0.0 && p_dl.is_finite()) {
            return Err(invalid(format!("transmit power must be positive, got {p_dl}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(invalid(format!("noise variance must be positive, got {sigma2}")));
        }
        if m == 0 {
            return Err(invalid("element count must be positive"));
        }
        Ok(Self {
            channels,
            n_rf,
            p_dl,
            sigma2,
            m,
            cap: DEFAULT_ENUMERATION_CAP,
        })
    }

    pub fn with_enumeration_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn users(&self) -> usize {
        self.channels.len()
    }

    pub fn ports(&self) -> usize {
        self.channels[0].len()
    }

    pub fn n_rf(&self) -> usize {
        self.n_rf
    }

    pub fn power(&self) -> f64 {
        self.p_dl
    }

    /// Transmit SNR `P_DL / sigma^2`.
    pub fn p_bar(&self) -> f64 {
        self.p_dl / self.sigma2
    }

    pub fn channels(&self) -> &[CVector] {
        &self.channels
    }

    fn check_selection(&self, sel: &RaySelection) -> Result<()> {
        if sel.n_total() != self.ports() || sel.len() != self.n_rf {
            return Err(Error::DimensionMismatch(format!(
                "selection of {} out of {} ports, problem has {} of {}",
                sel.len(),
                sel.n_total(),
                self.n_rf,
                self.ports()
            )));
        }
        Ok(())
    }

    /// Selected channels scaled so the noise has unit variance:
    /// `S h_k / sqrt(M sigma^2)`.
    fn normalized(&self, sel: &RaySelection) -> Vec<CVector> {
        let scale = 1.0 / (self.m as f64 * self.sigma2).sqrt();
        self.channels.iter().map(|h| sel.apply(h) * Complex64::new(scale, 0.0)).collect()
    }

    fn check_precoders(&self, w: &[CVector]) -> Result<()> {
        if w.len() != self.users() || w.iter().any(|v| v.len() != self.n_rf) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} precoders of length {}",
                self.users(),
                self.n_rf
            )));
        }
        Ok(())
    }

    /// SINR of user `k`.
    pub fn sinr(&self, k: usize, w: &[CVector], sel: &RaySelection) -> Result<f64> {
        self.check_selection(sel)?;
        self.check_precoders(w)?;
        if k >= self.users() {
            return Err(Error::DimensionMismatch(format!("no user {k}")));
        }
        let g = self.normalized(sel);
        Ok(sinr_normalized(&g, w, k))
    }

    pub fn sinrs(&self, w: &[CVector], sel: &RaySelection) -> Result<Vec<f64>> {
        self.check_selection(sel)?;
        self.check_precoders(w)?;
        let g = self.normalized(sel);
        Ok((0..self.users()).map(|k| sinr_normalized(&g, w, k)).collect())
    }

    pub fn min_sinr(&self, w: &[CVector], sel: &RaySelection) -> Result<f64> {
        Ok(self.sinrs(w, sel)?.into_iter().fold(f64::INFINITY, f64::min))
    }

    /// Largest single-user MRT SNR each user could reach alone, minimized
    /// over users. No common target above it is feasible.
    pub fn gamma_upper_bound(&self, sel: &RaySelection) -> f64 {
        self.normalized(sel)
            .iter()
            .map(|g| self.p_dl * g.norm_squared())
            .fold(f64::INFINITY, f64::min)
    }

    /// Precoders meeting SINR `gamma` for every user within the power
    /// budget, or `None` when the target is infeasible.
    pub fn feasibility(&self, gamma: f64, sel: &RaySelection) -> Result<Option<Vec<CVector>>> {
        if !(gamma >= 0.0) {
            return Err(invalid(format!("SINR target must be non-negative, got {gamma}")));
        }
        self.check_selection(sel)?;
        let zero = vec![CVector::zeros(self.n_rf); self.users()];
        if gamma == 0.0 {
            return Ok(Some(zero));
        }
        let g = self.normalized(sel);
        if g.iter().any(|v| v.norm_squared() == 0.0) {
            return Ok(None);
        }
        Ok(solve_feasibility(&g, gamma, self.p_dl))
    }

    /// Bisection for the largest feasible common SINR on `sel`.
    ///
    /// `warm` is a precoder set already known to be valid on `sel`; the
    /// search starts above its minimum SINR and never returns worse.
    /// The returned `gamma` is the minimum SINR the returned precoders
    /// actually achieve.
    pub fn bisection(
        &self,
        sel: &RaySelection,
        tol: f64,
        warm: Option<&[CVector]>,
    ) -> Result<(f64, Vec<CVector>)> {
        if !(tol > 0.0) {
            return Err(invalid(format!("bisection tolerance must be positive, got {tol}")));
        }
        self.check_selection(sel)?;
        let hi0 = self.gamma_upper_bound(sel);
        let mut best = (0.0, vec![CVector::zeros(self.n_rf); self.users()]);
        if let Some(w) = warm {
            self.check_precoders(w)?;
            let power: f64 = w.iter().map(|v| v.norm_squared()).sum();
            if power <= self.p_dl * (1.0 + POWER_SLACK) {
                best = (self.min_sinr(w, sel)?, w.to_vec());
            }
        }
        if let Some(w) = self.feasibility(hi0, sel)? {
            let achieved = self.min_sinr(&w, sel)?;
            return Ok(if achieved >= best.0 { (achieved, w) } else { best });
        }
        let mut lo = best.0.min(hi0);
        let mut hi = hi0;
        let mut found: Option<Vec<CVector>> = None;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            match self.feasibility(mid, sel)? {
                Some(w) => {
                    lo = mid;
                    found = Some(w);
                }
                None => hi = mid,
            }
        }
        if let Some(w) = found {
            let achieved = self.min_sinr(&w, sel)?;
            if achieved >= best.0 {
                best = (achieved, w);
            }
        }
        Ok(best)
    }

    /// Best subset for fixed precoders; row `i` of `w` drives the `i`-th
    /// selected port in ascending order. Lexicographically first subset
    /// wins ties.
    pub fn exhaustive_selection(&self, w: &[CVector]) -> Result<RaySelection> {
        self.check_precoders(w)?;
        let n = self.ports();
        check_cap(n, self.n_rf, self.cap)?;
        let scale = 1.0 / (self.m as f64 * self.sigma2).sqrt();
        let mut best: Option<(f64, Vec<usize>)> = None;
        for subset in Combinations::new(n, self.n_rf) {
            let mut worst = f64::INFINITY;
            for k in 0..self.users() {
                let h = &self.channels[k];
                let gain = |i: usize| -> f64 {
                    let s: Complex64 = subset
                        .iter()
                        .enumerate()
                        .map(|(r, &p)| h[p].conj() * w[i][r])
                        .sum();
                    (s * scale).norm_sqr()
                };
                let signal = gain(k);
                let interference: f64 = (0..self.users()).filter(|&i| i != k).map(gain).sum();
                worst = worst.min(signal / (interference + 1.0));
                if let Some((b, _)) = &best {
                    if worst <= *b {
                        break;
                    }
                }
            }
            if best.as_ref().is_none_or(|(b, _)| worst > *b) {
                best = Some((worst, subset));
            }
        }
        let (_, omega) = best.expect("at least one subset");
        RaySelection::new(omega, n)
    }

    /// Energy-ranked starting selection, ascending.
    pub fn initial_selection(&self) -> RaySelection {
        let energy: Vec<f64> = (0..self.ports())
            .map(|p| self.channels.iter().map(|h| h[p].norm_sqr()).sum())
            .collect();
        RaySelection::top_by_score(&energy, self.n_rf).expect("n_rf checked on construction")
    }

    /// Alternates bisection (selection fixed) and exhaustive selection
    /// (precoders fixed) until the objective settles.
    pub fn alternating(&self, opts: AlternatingOptions) -> Result<MaxMinResult> {
        if opts.max_iterations == 0 {
            return Err(invalid("need at least one outer iteration"));
        }
        if !(opts.eps > 0.0) {
            return Err(invalid("convergence threshold must be positive"));
        }
        let mut sel = self.initial_selection();
        let mut warm: Option<Vec<CVector>> = None;
        let mut trace = Vec::new();
        loop {
            let (_, w) = self.bisection(&sel, opts.bisection_tol, warm.as_deref())?;
            let next = self.exhaustive_selection(&w)?;
            let gamma = self.min_sinr(&w, &next)?;
            let settled = next == sel
                || trace.last().is_some_and(|&prev: &f64| (gamma - prev).abs() <= opts.eps);
            trace.push(gamma);
            if settled || trace.len() >= opts.max_iterations {
                return Ok(MaxMinResult {
                    selection: next,
                    precoders: w,
                    gamma,
                    trace,
                });
            }
            sel = next;
            warm = Some(w);
        }
    }
}

fn sinr_normalized(g: &[CVector], w: &[CVector], k: usize) -> f64 {
    let signal = inner(&g[k], &w[k]).norm_sqr();
    if signal == 0.0 {
        return 0.0;
    }
    let interference: f64 = (0..w.len())
        .filter(|&i| i != k)
        .map(|i| inner(&g[k], &w[i]).norm_sqr())
        .sum();
    signal / (interference + 1.0)
}

/// Monotone fixed point `q_k = gamma / ((1 + gamma) g_k^H Sigma(q)^{-1} g_k)`
/// with `Sigma(q) = I + sum_i q_i g_i g_i^H`, started from zero.
///
/// The iterates increase towards the minimum-power virtual uplink powers,
/// so a running total above `budget` proves infeasibility. Feasibility is
/// proven by a downlink certificate built from the current iterate; one is
/// attempted on convergence and periodically before that, since the
/// approach slows down as `gamma` nears the optimum.
fn solve_feasibility(g: &[CVector], gamma: f64, budget: f64) -> Option<Vec<CVector>> {
    const PROBE_EVERY: usize = 16;
    let ratio = gamma / (1.0 + gamma);
    let mut q = vec![0.0; g.len()];
    for it in 0..FIXED_POINT_MAX_ITER {
        let chol = weighted_gram_plus_identity(g, &q).cholesky()?;
        let next: Vec<f64> = g
            .iter()
            .map(|gk| ratio / inner(gk, &chol.solve(gk)).re)
            .collect();
        if next.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return None;
        }
        let total: f64 = next.iter().sum();
        if total > budget * (1.0 + POWER_SLACK) {
            return None;
        }
        let change: f64 = next.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum();
        q = next;
        let converged = change <= FIXED_POINT_TOL * total;
        if converged || (it + 1) % PROBE_EVERY == 0 {
            if let Some(w) = downlink_from_virtual(g, &q, gamma, budget) {
                return Some(w);
            }
        }
        if converged {
            return None;
        }
    }
    None
}

/// Beams from the virtual MMSE filters, powers from the downlink SINR
/// equalities `A p = 1`.
fn downlink_from_virtual(g: &[CVector], q: &[f64], gamma: f64, budget: f64) -> Option<Vec<CVector>> {
    let k = g.len();
    let sigma = weighted_gram_plus_identity(g, q);
    let beams: Vec<CVector> = g
        .iter()
        .map(|gk| {
            let u = solve_hpd(sigma.clone(), gk)?;
            let n = u.norm();
            (n > 0.0).then(|| u / Complex64::new(n, 0.0))
        })
        .collect::<Option<_>>()?;
    let mut a = nalgebra::DMatrix::<f64>::zeros(k, k);
    for r in 0..k {
        for c in 0..k {
            let v = inner(&g[r], &beams[c]).norm_sqr();
            a[(r, c)] = if r == c { v / gamma } else { -v };
        }
    }
    let p = a.lu().solve(&DVector::from_element(k, 1.0))?;
    if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return None;
    }
    let total: f64 = p.iter().sum();
    if total > budget * (1.0 + POWER_SLACK) {
        return None;
    }
    let shrink = if total > budget { budget / total } else { 1.0 };
    let w: Vec<CVector> = beams
        .iter()
        .zip(p.iter())
        .map(|(u, &pk)| u * Complex64::new((pk * shrink).sqrt(), 0.0))
        .collect();
    let ok = (0..k).all(|i| sinr_normalized(g, &w, i) >= gamma * (1.0 - SINR_SLACK));
    ok.then_some(w)
}

/// Single user: strongest `n_rf` ports with MRT. The SNR is
/// `P_DL ||S h||^2 / (M sigma^2)`.
pub fn dl_single_user(
    h: &CVector,
    n_rf: usize,
    p_dl: f64,
    sigma2: f64,
    m: usize,
) -> Result<MaxMinResult> {
    let problem = DownlinkProblem::new(vec![h.clone()], n_rf, p_dl, sigma2, m)?;
    let mags: Vec<f64> = h.iter().map(|v| v.norm()).collect();
    let sel = RaySelection::top_by_score(&mags, n_rf)?;
    let sh = sel.apply(h);
    let norm = sh.norm();
    let w = if norm > 0.0 {
        sh * Complex64::new(p_dl.sqrt() / norm, 0.0)
    } else {
        CVector::zeros(n_rf)
    };
    let snr = problem.p_bar() * norm * norm / m as f64;
    Ok(MaxMinResult {
        selection: sel,
        precoders: vec![w],
        gamma: snr,
        trace: vec![snr],
    })
}

/// Sum of `|w|^2` over all precoders.
pub fn total_power(w: &[CVector]) -> f64 {
    w.iter().map(|v| v.norm_squared()).sum()
}
