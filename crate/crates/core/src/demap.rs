//! Maximum-likelihood demapping over the sum constellation.
//!
//! With square QAM users and real scales, the in-phase and quadrature parts of
//! the sum constellation decouple, so each axis can be searched on its own:
//! `2M` distance evaluations instead of `M²`.

use serde::{Deserialize, Serialize};

use crate::constellation::{ComplexPoint, Constellation, SumConstellation};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    InPhase,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemapResult {
    pub k1: usize,
    pub k2: usize,
    /// `|y − sum_point(k1, k2)|²`.
    pub metric: f64,
    /// Distance evaluations spent on this symbol.
    pub candidates: usize,
}

/// One axis of the sum constellation of two square QAM users:
/// `values[j₁·w₂ + j₂] = a_L·x₁(j₁) + a_S·x₂(j₂)` over per-axis PAM indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PamProjection {
    axis: Axis,
    values: Vec<f64>,
    w1: usize,
    w2: usize,
}

impl PamProjection {
    /// Projects `a_L·S1 + a_S·S2` onto `axis`. Both constellations must be
    /// square QAM grids laid out with the in-phase index varying fastest.
    pub fn new(s1: &Constellation, s2: &Constellation, a_l: f64, a_s: f64, axis: Axis) -> Result<Self> {
        if !(a_l >= 0.0 && a_l.is_finite() && a_s >= 0.0 && a_s.is_finite()) {
            return Err(invalid("separable demapping needs real non-negative scales"));
        }
        let l1 = square_levels(s1, axis)?;
        let l2 = square_levels(s2, axis)?;
        let values = l1
            .iter()
            .flat_map(|&u| l2.iter().map(move |&v| u * a_l + v * a_s))
            .collect();
        Ok(Self {
            axis,
            values,
            w1: l1.len(),
            w2: l2.len(),
        })
    }

    pub fn axis(&self) -> Axis {
        self.axis
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

    /// Closest value to `t`; smallest index wins ties.
    fn nearest(&self, t: f64) -> (usize, usize) {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (j, &v) in self.values.iter().enumerate() {
            let d = (t - v) * (t - v);
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        (best / self.w2, best % self.w2)
    }
}

/// Per-axis PAM levels of a square QAM grid, or an error when `s` is not one.
pub(crate) fn square_levels(s: &Constellation, axis: Axis) -> Result<Vec<f64>> {
    let pts = s.points();
    let w = (pts.len() as f64).sqrt().round() as usize;
    if w < 2 || w * w != pts.len() {
        return Err(invalid(format!("'{}' is not a square QAM constellation", s.label())));
    }
    let re: Vec<f64> = pts[..w].iter().map(|p| p.re).collect();
    let im: Vec<f64> = pts.iter().step_by(w).map(|p| p.im).collect();
    let tol = 1e-12 * pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
    for (k, p) in pts.iter().enumerate() {
        if (p.re - re[k % w]).abs() > tol || (p.im - im[k / w]).abs() > tol {
            return Err(invalid(format!("'{}' is not a square QAM constellation", s.label())));
        }
    }
    Ok(match axis {
        Axis::InPhase => re,
        Axis::Quadrature => im,
    })
}

/// Exhaustive search over all `N₁N₂` sum points; smallest row-major index
/// wins ties.
pub fn joint_ml_demap(y: ComplexPoint, sum: &SumConstellation) -> DemapResult {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, &p) in sum.points().iter().enumerate() {
        let d = (y - p).norm_sqr();
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    let (k1, k2) = sum.indices(best);
    DemapResult {
        k1,
        k2,
        metric: best_d,
        candidates: sum.len(),
    }
}

/// Independent in-phase and quadrature searches recombined into QAM indices.
pub fn separable_ml_demap(y: ComplexPoint, proj_i: &PamProjection, proj_q: &PamProjection) -> Result<DemapResult> {
    if proj_i.axis != Axis::InPhase || proj_q.axis != Axis::Quadrature {
        return Err(invalid("expected an in-phase and a quadrature projection"));
    }
    if proj_i.w1 != proj_q.w1 || proj_i.w2 != proj_q.w2 {
        return Err(invalid("projections come from different constellation sizes"));
    }
    let (i1, i2) = proj_i.nearest(y.re);
    let (q1, q2) = proj_q.nearest(y.im);
    let p = ComplexPoint::new(proj_i.values[i1 * proj_i.w2 + i2], proj_q.values[q1 * proj_q.w2 + q2]);
    Ok(DemapResult {
        k1: q1 * proj_i.w1 + i1,
        k2: q2 * proj_i.w2 + i2,
        metric: (y - p).norm_sqr(),
        candidates: proj_i.len() + proj_q.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::{make_8qam, make_psk, make_qam, sum_constellation};

    fn projections(s: &Constellation, a: f64, b: f64) -> (PamProjection, PamProjection) {
        (
            PamProjection::new(s, s, a, b, Axis::InPhase).unwrap(),
            PamProjection::new(s, s, a, b, Axis::Quadrature).unwrap(),
        )
    }

    #[test]
    fn noiseless_points_recovered() {
        let s = make_qam(4).unwrap();
        let sum = sum_constellation(&s, &s, 2.0, 1.0);
        let (pi, pq) = projections(&s, 2.0, 1.0);
        for k1 in 0..4 {
            for k2 in 0..4 {
                let y = sum.point(k1, k2);
                let j = joint_ml_demap(y, &sum);
                let r = separable_ml_demap(y, &pi, &pq).unwrap();
                assert_eq!((j.k1, j.k2, j.metric), (k1, k2, 0.0));
                assert_eq!((r.k1, r.k2, r.metric), (k1, k2, 0.0));
            }
        }
    }

    #[test]
    fn candidate_counts() {
        let s = make_qam(16).unwrap();
        let sum = sum_constellation(&s, &s, 1.5, 0.8);
        let (pi, pq) = projections(&s, 1.5, 0.8);
        let y = ComplexPoint::new(0.1, -0.2);
        assert_eq!(joint_ml_demap(y, &sum).candidates, 256);
        assert_eq!(separable_ml_demap(y, &pi, &pq).unwrap().candidates, 32);
    }

    #[test]
    fn equidistant_tie_goes_to_first() {
        let b = make_psk(2).unwrap();
        let sum = sum_constellation(&b, &b, 1.0, 0.0);
        // Points: (0,0)=1, (0,1)=1, (1,0)=-1, (1,1)=-1.
        let r = joint_ml_demap(ComplexPoint::new(0.0, 0.0), &sum);
        assert_eq!((r.k1, r.k2), (0, 0));
    }

    #[test]
    fn metric_matches_sum_point() {
        let s = make_qam(16).unwrap();
        let sum = sum_constellation(&s, &s, 3.1, 1.7);
        let (pi, pq) = projections(&s, 3.1, 1.7);
        let y = ComplexPoint::new(0.37, 2.2);
        let r = separable_ml_demap(y, &pi, &pq).unwrap();
        assert_eq!(r.metric, (y - sum.point(r.k1, r.k2)).norm_sqr());
    }

    #[test]
    fn rejects_non_square_inputs() {
        let p = make_psk(8).unwrap();
        assert!(PamProjection::new(&p, &p, 1.0, 1.0, Axis::InPhase).is_err());
        let r = make_8qam();
        assert!(PamProjection::new(&r, &r, 1.0, 1.0, Axis::InPhase).is_err());
        let q = make_qam(16).unwrap();
        assert!(PamProjection::new(&q, &q, -1.0, 1.0, Axis::InPhase).is_err());
        let (pi, pq) = projections(&q, 1.0, 1.0);
        assert!(separable_ml_demap(ComplexPoint::new(0.0, 0.0), &pq, &pi).is_err());
    }

    #[test]
    fn psk_order_is_not_a_grid_layout() {
        // Same points as 4-QAM, but listed around the circle.
        let q = make_psk(4).unwrap();
        assert!(PamProjection::new(&q, &q, 1.0, 1.0, Axis::InPhase).is_err());
    }
}
