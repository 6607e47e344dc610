//! Ray (or codeword) selection and the binary switch matrix it induces.

use crate::error::{invalid, Result};
use crate::CVector;
use nalgebra::DMatrix;

/// Ordered set of distinct port positions routed to the RF chains.
///
/// Row `i` of the induced selection matrix `S` is one-hot at `omega[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RaySelection {
    omega: Vec<usize>,
    n_total: usize,
}

impl RaySelection {
    pub fn new(omega: Vec<usize>, n_total: usize) -> Result<Self> {
        if let Some(&bad) = omega.iter().find(|&&p| p >= n_total) {
            return Err(invalid(format!("port {bad} out of range 0..{n_total}")));
        }
        let mut seen = vec![false; n_total];
        for &p in &omega {
            if std::mem::replace(&mut seen[p], true) {
                return Err(invalid(format!("port {p} selected twice")));
            }
        }
        Ok(Self { omega, n_total })
    }

    /// Selects ports `0..n_total`.
    pub fn all(n_total: usize) -> Self {
        Self {
            omega: (0..n_total).collect(),
            n_total,
        }
    }

    /// The `count` largest scores, ties broken by lower position, returned
    /// in ascending position order.
    pub fn top_by_score(scores: &[f64], count: usize) -> Result<Self> {
        if count > scores.len() {
            return Err(invalid(format!(
                "cannot select {count} of {} ports",
                scores.len()
            )));
        }
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        let mut omega = order[..count].to_vec();
        omega.sort_unstable();
        Ok(Self {
            omega,
            n_total: scores.len(),
        })
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.omega.contains(&pos)
    }

    /// Same set with one more port appended.
    pub fn with(&self, pos: usize) -> Result<Self> {
        let mut omega = self.omega.clone();
        omega.push(pos);
        Self::new(omega, self.n_total)
    }

    /// Same set in ascending position order.
    pub fn sorted(&self) -> Self {
        let mut omega = self.omega.clone();
        omega.sort_unstable();
        Self {
            omega,
            n_total: self.n_total,
        }
    }

    /// `S` as a dense `N_RF x N` 0/1 matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(self.omega.len(), self.n_total);
        for (row, &col) in self.omega.iter().enumerate() {
            s[(row, col)] = 1.0;
        }
        s
    }

    /// `S h`.
    pub fn apply(&self, h: &CVector) -> CVector {
        assert_eq!(h.len(), self.n_total, "channel length vs selection size");
        CVector::from_iterator(self.omega.len(), self.omega.iter().map(|&p| h[p]))
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Default ceiling on the number of subsets an exhaustive search may visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

pub(crate) fn check_cap(n: usize, k: usize, cap: u128) -> Result<u128> {
    let count = binomial(n, k);
    if count > cap {
        return Err(crate::Error::EnumerationCap { count, cap });
    }
    Ok(count)
}
