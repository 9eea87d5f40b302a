//! Two-way set partitioning of PAM alphabets for trellis-coded user pairs.
//!
//! Each user's alphabet is split into two equal halves. The four sum sets
//! `a_L·A₁ⁱ + a_S·A₂ʲ` label the branches leaving one state of the sum trellis;
//! the partition maximizing the smallest intra-set distance among them wins.

use serde::{Deserialize, Serialize};

use crate::constellation::Constellation;
use crate::demap::{square_levels, Axis};
use crate::error::{invalid, Result};

/// Strictly increasing real amplitudes of even cardinality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PamAlphabet {
    values: Vec<f64>,
}

impl PamAlphabet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || values.len() % 2 != 0 {
            return Err(invalid(format!("PAM alphabet needs an even number of levels, got {}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("PAM levels must be finite and strictly increasing"));
        }
        Ok(Self { values })
    }

    /// One axis of a square QAM constellation, at the QAM's own scaling.
    pub fn from_qam(s: &Constellation, axis: Axis) -> Result<Self> {
        let mut v = square_levels(s, axis)?;
        v.sort_by(f64::total_cmp);
        Self::new(v)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// An equal two-way split; `first` holds the alphabet's smallest value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

impl Split {
    fn halves(&self) -> [&[f64]; 2] {
        [&self.first, &self.second]
    }
}

/// Whether a sum set with coincident points keeps them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumSemantics {
    /// Coincident sums merge into one point.
    #[default]
    Set,
    /// Coincident sums stay separate, so the set's distance is zero.
    Multiset,
}

/// Whether both users must use the same split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCoupling {
    /// One split of the common alphabet, applied to both users.
    #[default]
    Shared,
    /// Each user's split searched separately.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartitionRule {
    pub sums: SumSemantics,
    pub coupling: SplitCoupling,
}

impl PartitionRule {
    /// Independent splits scored on multisets.
    pub fn independent_multiset() -> Self {
        Self {
            sums: SumSemantics::Multiset,
            coupling: SplitCoupling::Independent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub user1_split: Split,
    pub user2_split: Split,
    /// Smallest intra-set distance over the four sum sets.
    pub score: f64,
    /// `(a_L, a_S)`.
    pub scales: (f64, f64),
}

/// All `C(m, m/2)/2` equal splits, lexicographic in the index subset that
/// holds the smallest value.
pub fn enumerate_splits(pam: &PamAlphabet) -> Vec<Split> {
    let m = pam.len();
    let half = m / 2;
    let mut out = Vec::new();
    let mut chosen = vec![0usize];
    fn rec(pam: &[f64], half: usize, chosen: &mut Vec<usize>, out: &mut Vec<Split>) {
        if chosen.len() == half {
            let first = chosen.iter().map(|&i| pam[i]).collect();
            let second = (0..pam.len())
                .filter(|i| !chosen.contains(i))
                .map(|i| pam[i])
                .collect();
            out.push(Split { first, second });
            return;
        }
        let start = chosen.last().map_or(0, |&i| i + 1);
        for i in start..pam.len() {
            chosen.push(i);
            rec(pam, half, chosen, out);
            chosen.pop();
        }
    }
    rec(pam.values(), half, &mut chosen, &mut out);
    out
}

/// Smallest gap in a set of reals; `+∞` for fewer than two distinct points.
fn min_gap(mut xs: Vec<f64>, sums: SumSemantics) -> f64 {
    xs.sort_by(f64::total_cmp);
    if sums == SumSemantics::Set {
        let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let tol = 1e-12 * scale;
        xs.dedup_by(|a, b| (*a - *b).abs() <= tol);
    }
    xs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// `min_{i,j} d_min(a_L·split1ⁱ + a_S·split2ʲ)`.
pub fn partition_score(split1: &Split, split2: &Split, a_l: f64, a_s: f64, sums: SumSemantics) -> f64 {
    let mut score = f64::INFINITY;
    for a in split1.halves() {
        for b in split2.halves() {
            let set: Vec<f64> = a
                .iter()
                .flat_map(|&u| b.iter().map(move |&v| a_l * u + a_s * v))
                .collect();
            score = score.min(min_gap(set, sums));
        }
    }
    score
}

/// Exhaustive search; the first split pair in enumeration order wins ties.
pub fn best_partition(pam1: &PamAlphabet, pam2: &PamAlphabet, a_l: f64, a_s: f64, rule: PartitionRule) -> Result<PartitionResult> {
    if !(a_l >= 0.0 && a_s >= 0.0 && a_l.is_finite() && a_s.is_finite()) {
        return Err(invalid("partition scales must be finite and non-negative"));
    }
    let s1 = enumerate_splits(pam1);
    let s2 = enumerate_splits(pam2);
    let pairs: Vec<(usize, usize)> = match rule.coupling {
        SplitCoupling::Independent => (0..s1.len())
            .flat_map(|i| (0..s2.len()).map(move |j| (i, j)))
            .collect(),
        SplitCoupling::Shared => {
            if pam1 != pam2 {
                return Err(invalid("a shared split needs identical alphabets"));
            }
            (0..s1.len()).map(|i| (i, i)).collect()
        }
    };
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, j) in pairs {
        let sc = partition_score(&s1[i], &s2[j], a_l, a_s, rule.sums);
        if best.is_none_or(|(b, _, _)| sc > b) {
            best = Some((sc, i, j));
        }
    }
    let (score, i, j) = best.expect("at least one split");
    Ok(PartitionResult {
        user1_split: s1[i].clone(),
        user2_split: s2[j].clone(),
        score,
        scales: (a_l, a_s),
    })
}
