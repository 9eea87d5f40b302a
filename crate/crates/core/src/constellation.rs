//! Finite complex constellations, their sums, and unique decodability.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// A complex symbol.
pub type ComplexPoint = Complex64;

/// Relative tolerance used for distinctness and unique decodability.
pub const UD_TOLERANCE: f64 = 1e-9;

const POWER_TOLERANCE: f64 = 1e-9;

/// An ordered set of distinct complex points with unit average power.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    label: String,
    points: Vec<ComplexPoint>,
}

impl Constellation {
    /// Builds a constellation, checking every invariant.
    pub fn new(label: impl Into<String>, points: Vec<ComplexPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(invalid(format!(
                "a constellation needs at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(invalid(format!("non-finite point {p}")));
        }
        let power = average_power(&points);
        if (power - 1.0).abs() > POWER_TOLERANCE {
            return Err(invalid(format!(
                "average power is {power}, expected 1"
            )));
        }
        if let Some((i, j)) = first_collision(&points, UD_TOLERANCE) {
            return Err(invalid(format!(
                "points {i} and {j} coincide ({})",
                points[i]
            )));
        }
        Ok(Self {
            label: label.into(),
            points,
        })
    }

    /// Rescales `points` to unit average power, then validates.
    pub fn normalized(label: impl Into<String>, points: Vec<ComplexPoint>) -> Result<Self> {
        let power = average_power(&points);
        if !(power > 0.0) || !power.is_finite() {
            return Err(invalid("cannot normalize a constellation with zero or non-finite power"));
        }
        let scale = power.sqrt().recip();
        Self::new(label, points.into_iter().map(|p| p * scale).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[ComplexPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn average_power(&self) -> f64 {
        average_power(&self.points)
    }

    /// Every point multiplied by `e^{iθ}`.
    pub fn rotated(&self, theta: f64) -> Self {
        let w = Complex64::from_polar(1.0, theta);
        Self {
            label: self.label.clone(),
            points: self.points.iter().map(|&p| p * w).collect(),
        }
    }

    /// Looks up one of the built-in constellations by name.
    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "bpsk" => make_psk(2),
            "qpsk" => make_psk(4),
            "8psk" => make_psk(8),
            "16psk" => make_psk(16),
            "8qam" => Ok(make_8qam()),
            "4qam" => make_qam(4),
            "16qam" => make_qam(16),
            "64qam" => make_qam(64),
            other => Err(invalid(format!("unknown constellation '{other}'"))),
        }
    }
}

fn average_power(points: &[ComplexPoint]) -> f64 {
    points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64
}

fn max_magnitude(points: &[ComplexPoint]) -> f64 {
    points.iter().map(|p| p.norm()).fold(0.0, f64::max)
}

/// First pair `(i, j)` with `|p_i - p_j| <= tol * max|p|`.
fn first_collision(points: &[ComplexPoint], tol: f64) -> Option<(usize, usize)> {
    let threshold = tol * max_magnitude(points);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if (points[i] - points[j]).norm() <= threshold {
                return Some((i, j));
            }
        }
    }
    None
}

/// `M`-PSK: `e^{i(2πk/M + φ₀)}` with `φ₀ = π/4` for `M = 4` and `0` otherwise.
pub fn make_psk(m: usize) -> Result<Constellation> {
    if m < 2 {
        return Err(invalid(format!("PSK order must be at least 2, got {m}")));
    }
    let offset = if m == 4 { PI / 4.0 } else { 0.0 };
    let points = (0..m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64 + offset))
        .collect();
    let label = match m {
        2 => "bpsk".to_string(),
        4 => "qpsk".to_string(),
        _ => format!("{m}psk"),
    };
    Constellation::new(label, points)
}

/// Odd-integer PAM levels `-(m-1), ..., -1, 1, ..., m-1`.
fn pam_levels(m: usize) -> Vec<f64> {
    (0..m).map(|i| 2.0 * i as f64 - (m as f64 - 1.0)).collect()
}

/// Cartesian grid with in-phase index varying fastest: point `q·w + i` is
/// `re[i] + i·im[q]`.
fn grid(re: &[f64], im: &[f64]) -> Vec<ComplexPoint> {
    im.iter()
        .flat_map(|&b| re.iter().map(move |&a| Complex64::new(a, b)))
        .collect()
}

/// Square `M`-QAM on the odd-integer grid, normalized to unit average power.
pub fn make_qam(m: usize) -> Result<Constellation> {
    let side = (m as f64).sqrt().round() as usize;
    if m < 4 || side * side != m {
        return Err(invalid(format!("QAM order must be a perfect square >= 4, got {m}")));
    }
    let levels = pam_levels(side);
    Constellation::normalized(format!("{m}qam"), grid(&levels, &levels))
}

/// Rectangular 8-QAM: in-phase `{-3,-1,1,3}`, quadrature `{-1,1}`, scaled by `1/√6`.
pub fn make_8qam() -> Constellation {
    Constellation::normalized("8qam", grid(&pam_levels(4), &pam_levels(2)))
        .expect("rectangular 8-QAM is a valid constellation")
}

/// Free-function form of [`Constellation::rotated`].
pub fn rotate(s: &Constellation, theta: f64) -> Constellation {
    s.rotated(theta)
}

/// All `N₁·N₂` points `a₁x₁(k₁) + a₂x₂(k₂)`, row-major in `(k₁, k₂)`.
///
/// Coincident sums are kept as separate entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SumConstellation {
    points: Vec<ComplexPoint>,
    scales: (f64, f64),
    n2: usize,
}

impl SumConstellation {
    pub fn points(&self) -> &[ComplexPoint] {
        &self.points
    }

    pub fn scales(&self) -> (f64, f64) {
        self.scales
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Size of user 2's constellation (the row stride).
    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn n1(&self) -> usize {
        self.points.len().checked_div(self.n2).unwrap_or(0)
    }

    pub fn point(&self, k1: usize, k2: usize) -> ComplexPoint {
        self.points[k1 * self.n2 + k2]
    }

    /// Splits a row-major index back into `(k₁, k₂)`.
    pub fn indices(&self, flat: usize) -> (usize, usize) {
        (flat / self.n2, flat % self.n2)
    }
}

pub fn sum_constellation(s1: &Constellation, s2: &Constellation, a1: f64, a2: f64) -> SumConstellation {
    let points = s1
        .points()
        .iter()
        .flat_map(|&x1| s2.points().iter().map(move |&x2| x1 * a1 + x2 * a2))
        .collect();
    SumConstellation {
        points,
        scales: (a1, a2),
        n2: s2.len(),
    }
}

/// True iff every pair of sum points is separated by more than
/// `tol × max|sum point|`.
pub fn is_uniquely_decodable(s1: &Constellation, s2: &Constellation, a1: f64, a2: f64, tol: f64) -> bool {
    let sum = sum_constellation(s1, s2, a1, a2);
    first_collision(sum.points(), tol).is_none() && max_magnitude(sum.points()) > 0.0
}

/// Parses the text constellation format: one `<re> <im>` pair per line, `#`
/// comments, blank lines ignored.
pub fn parse_constellation(text: &str, label: &str, normalize: bool) -> Result<Constellation> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Format {
                line: line_no,
                message: format!("expected '<re> <im>', got '{}'", raw.trim()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Format {
                line: line_no,
                message: format!("'{s}' is not a number"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Format {
                    line: line_no,
                    message: format!("'{s}' is not finite"),
                })
            }
        };
        points.push(Complex64::new(parse(fields[0])?, parse(fields[1])?));
    }
    if normalize {
        Constellation::normalized(label, points)
    } else {
        Constellation::new(label, points)
    }
}

pub fn load_constellation(path: &Path, normalize: bool) -> Result<Constellation> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "file".to_string());
    parse_constellation(&text, &label, normalize)
}
