//! Independent quadrature oracles for the Monte-Carlo estimators.

#![allow(dead_code)]

use cpa_gmac::ComplexPoint as Complex64;

/// Gauss–Hermite nodes and weights for `∫ f(x) e^{-x²} dx`, by Newton
/// iteration on the orthonormal Hermite recurrence.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2 - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Sum capacity (bits) of `a1·x1 + a2·x2` in CSCG noise of variance
/// `sigma2`, by 2-D Gauss–Hermite quadrature over the noise.
pub fn capacity_gh(x1: &[Complex64], x2: &[Complex64], a1: f64, a2: f64, sigma2: f64, nodes: usize) -> f64 {
    let (gx, gw) = gauss_hermite(nodes);
    let sigma = sigma2.sqrt();
    let pts: Vec<Complex64> = x1
        .iter()
        .flat_map(|&u| x2.iter().map(move |&v| u * a1 + v * a2))
        .collect();
    let n = pts.len() as f64;
    let mut acc = 0.0;
    for &sk in &pts {
        let mut e = 0.0;
        for (jr, &xr) in gx.iter().enumerate() {
            for (ji, &xi) in gx.iter().enumerate() {
                // z = σ(xr + i·xi): each real part has variance σ²/2.
                let z = Complex64::new(xr, xi) * sigma;
                let zz = z.norm_sqr() / sigma2;
                let exps: Vec<f64> = pts
                    .iter()
                    .map(|&si| -(sk - si + z).norm_sqr() / sigma2 + zz)
                    .collect();
                let m = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lse = m + exps.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
                e += gw[jr] * gw[ji] * lse;
            }
        }
        acc += e / std::f64::consts::PI;
    }
    n.log2() - acc / n * std::f64::consts::LOG2_E
}

/// Random-phase sum capacity: user 2 rotated relative to user 1, averaged
/// over a uniform grid of `phases` relative angles.
pub fn capacity_gh_random_phase(x1: &[Complex64], x2: &[Complex64], a1: f64, a2: f64, sigma2: f64, nodes: usize, phases: usize) -> f64 {
    (0..phases)
        .map(|p| {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * p as f64 / phases as f64);
            let r: Vec<Complex64> = x2.iter().map(|&v| v * w).collect();
            capacity_gh(x1, &r, a1, a2, sigma2, nodes)
        })
        .sum::<f64>()
        / phases as f64
}
