//! Plane, Bessel and Mathieu waves: point evaluation and grid sampling.
//!
//! Every family shares the factor `e^{ikz cosθ}` along the propagation axis
//! and carries the `(sin θ)^{1/2}` weight of its label set.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HwmError, Result};
use crate::specfun::{bessel_j, mathieu_eigen, MathieuEigen, Parity};

/// Minimum number of samples along each grid axis.
pub const MIN_GRID_SIDE: usize = 16;

fn check_cone(k: f64, theta: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(HwmError::InvalidParameter(format!(
            "wavenumber k must be > 0, got {k}"
        )));
    }
    if !(theta > 0.0 && theta < PI) {
        return Err(HwmError::InvalidParameter(format!(
            "cone angle theta must lie in (0, π), got {theta}"
        )));
    }
    Ok(())
}

/// Wrap an angle into `[-π, π)`.
pub fn wrap_azimuth(phi: f64) -> f64 {
    let wrapped = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if wrapped >= PI {
        -PI
    } else {
        wrapped
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelSetPlane {
    pub k: f64,
    pub theta: f64,
    pub phi: f64,
}

impl LabelSetPlane {
    pub fn new(k: f64, theta: f64, phi: f64) -> Result<Self> {
        check_cone(k, theta)?;
        if !phi.is_finite() {
            return Err(HwmError::InvalidParameter(
                "azimuth phi must be finite".into(),
            ));
        }
        Ok(LabelSetPlane {
            k,
            theta,
            phi: wrap_azimuth(phi),
        })
    }

    /// Transverse wavevector `k sinθ (cos φ, sin φ)`.
    pub fn transverse(&self) -> (f64, f64) {
        let kt = self.k * self.theta.sin();
        (kt * self.phi.cos(), kt * self.phi.sin())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelSetBessel {
    pub k: f64,
    pub theta: f64,
    /// Topological charge.
    pub n: i32,
}

impl LabelSetBessel {
    pub fn new(k: f64, theta: f64, n: i32) -> Result<Self> {
        check_cone(k, theta)?;
        Ok(LabelSetBessel { k, theta, n })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelSetMathieu {
    pub k: f64,
    pub theta: f64,
    pub n: u32,
    pub parity: Parity,
    /// Semi-focal distance.
    pub f: f64,
}

impl LabelSetMathieu {
    pub fn new(k: f64, theta: f64, n: u32, parity: Parity, f: f64) -> Result<Self> {
        check_cone(k, theta)?;
        if !(f.is_finite() && f > 0.0) {
            return Err(HwmError::InvalidParameter(format!(
                "semi-focal distance f must be > 0, got {f}"
            )));
        }
        if parity == Parity::Odd && n == 0 {
            return Err(HwmError::InvalidParameter(
                "odd Mathieu waves have order n >= 1".into(),
            ));
        }
        Ok(LabelSetMathieu {
            k,
            theta,
            n,
            parity,
            f,
        })
    }

    /// Separation constant `q = (f k sinθ / 2)²`.
    pub fn q(&self) -> f64 {
        let half = 0.5 * self.f * self.k * self.theta.sin();
        half * half
    }
}

/// A wave of one of the three separable families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Wave {
    Plane(LabelSetPlane),
    Bessel(LabelSetBessel),
    Mathieu(LabelSetMathieu),
}

impl Wave {
    pub fn k(&self) -> f64 {
        match self {
            Wave::Plane(l) => l.k,
            Wave::Bessel(l) => l.k,
            Wave::Mathieu(l) => l.k,
        }
    }

    pub fn theta(&self) -> f64 {
        match self {
            Wave::Plane(l) => l.theta,
            Wave::Bessel(l) => l.theta,
            Wave::Mathieu(l) => l.theta,
        }
    }

    /// Transverse wavenumber `k sinθ`.
    pub fn k_transverse(&self) -> f64 {
        self.k() * self.theta().sin()
    }

    /// Prepare an evaluator; Mathieu waves solve their eigen-system once here.
    pub fn evaluator(&self) -> Result<WaveEvaluator> {
        Ok(match *self {
            Wave::Plane(l) => WaveEvaluator::Plane(l),
            Wave::Bessel(l) => WaveEvaluator::Bessel(l),
            Wave::Mathieu(l) => WaveEvaluator::Mathieu(MathieuWave::new(l)?),
        })
    }
}

/// Canonical text form, also stored as the field-file description:
/// `plane k=.. theta=.. phi=..`, `bessel k=.. theta=.. n=..`,
/// `mathieu-even k=.. theta=.. n=.. f=..` (or `mathieu-odd`).
impl fmt::Display for Wave {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wave::Plane(l) => write!(f, "plane k={} theta={} phi={}", l.k, l.theta, l.phi),
            Wave::Bessel(l) => write!(f, "bessel k={} theta={} n={}", l.k, l.theta, l.n),
            Wave::Mathieu(l) => write!(
                f,
                "mathieu-{} k={} theta={} n={} f={}",
                l.parity, l.k, l.theta, l.n, l.f
            ),
        }
    }
}

impl FromStr for Wave {
    type Err = HwmError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| HwmError::InvalidParameter(format!("wave label `{s}`: {msg}"));
        let mut parts = s.split_whitespace();
        let family = parts.next().ok_or_else(|| bad("empty".into()))?;
        let mut fields = std::collections::BTreeMap::new();
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{part}`")))?;
            fields.insert(key, value);
        }
        let real = |key: &str| -> Result<f64> {
            fields
                .get(key)
                .ok_or_else(|| bad(format!("missing `{key}`")))?
                .parse::<f64>()
                .map_err(|e| bad(format!("`{key}`: {e}")))
        };
        let int = |key: &str| -> Result<i64> {
            fields
                .get(key)
                .ok_or_else(|| bad(format!("missing `{key}`")))?
                .parse::<i64>()
                .map_err(|e| bad(format!("`{key}`: {e}")))
        };
        match family {
            "plane" => Ok(Wave::Plane(LabelSetPlane::new(
                real("k")?,
                real("theta")?,
                real("phi")?,
            )?)),
            "bessel" => Ok(Wave::Bessel(LabelSetBessel::new(
                real("k")?,
                real("theta")?,
                int("n")? as i32,
            )?)),
            "mathieu-even" | "mathieu-odd" => {
                let parity = if family == "mathieu-even" {
                    Parity::Even
                } else {
                    Parity::Odd
                };
                let n = int("n")?;
                if n < 0 {
                    return Err(bad("Mathieu order must be >= 0".into()));
                }
                Ok(Wave::Mathieu(LabelSetMathieu::new(
                    real("k")?,
                    real("theta")?,
                    n as u32,
                    parity,
                    real("f")?,
                )?))
            }
            other => Err(bad(format!("unknown family `{other}`"))),
        }
    }
}

pub fn eval_plane_wave(label: &LabelSetPlane, (x, y, z): (f64, f64, f64)) -> Complex64 {
    let (st, ct) = label.theta.sin_cos();
    let (sp, cp) = label.phi.sin_cos();
    let phase = label.k * (x * st * cp + y * st * sp + z * ct);
    Complex64::from_polar(st.sqrt(), phase)
}

/// `i^n`, exact for every integer.
fn i_pow(n: i32) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

pub fn eval_bessel_wave(label: &LabelSetBessel, (x, y, z): (f64, f64, f64)) -> Result<Complex64> {
    let st = label.theta.sin();
    let r = x.hypot(y);
    let radial = bessel_j(label.n, label.k * st * r)?;
    if radial == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let azimuth = wrap_azimuth(y.atan2(x));
    let phase = label.n as f64 * azimuth + label.k * z * label.theta.cos();
    Ok(i_pow(label.n) * (2.0 * PI * st).sqrt() * radial * Complex64::from_polar(1.0, phase))
}

/// Elliptic-cylindrical coordinates `(ξ, η)` of `(x, y)` with foci at `±f`:
/// `x = f coshξ cosη`, `y = f sinhξ sinη`, `ξ ≥ 0`, `η ∈ [-π, π)`.
/// On the inter-foci segment `ξ = 0` and `η ∈ [0, π]` (the origin maps to
/// `η = π/2`); the negative axis beyond the left focus maps to `η = -π`.
pub fn elliptic_coords(x: f64, y: f64, f: f64) -> (f64, f64) {
    // +0.0 turns a signed zero in y into the upper branch.
    let w = Complex64::new(x / f, y / f + 0.0);
    let one = Complex64::new(1.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let mut z = two * (((w + one) / two).sqrt() + ((w - one) / two).sqrt()).ln();
    if z.re < 0.0 {
        z = -z;
    }
    let mut xi = z.re.max(0.0);
    let mut eta = z.im;
    if y == 0.0 {
        if x >= f {
            eta = 0.0;
        } else if x <= -f {
            eta = -PI;
        } else {
            xi = 0.0;
            eta = (x / f).acos();
        }
    } else if eta.signum() != y.signum() {
        eta = -eta;
    }
    if eta >= PI {
        eta = -PI;
    }
    (xi, eta)
}

/// Mathieu wave with its eigen-system and normalization constant resolved.
#[derive(Clone, Debug)]
pub struct MathieuWave {
    pub label: LabelSetMathieu,
    pub eigen: MathieuEigen,
    pub norm_constant: f64,
}

impl MathieuWave {
    pub fn new(label: LabelSetMathieu) -> Result<Self> {
        let eigen = mathieu_eigen(label.parity, label.n, label.q())?;
        let norm_constant = eigen.norm_constant()?;
        Ok(MathieuWave {
            label,
            eigen,
            norm_constant,
        })
    }

    pub fn eval(&self, (x, y, z): (f64, f64, f64)) -> Result<Complex64> {
        let (xi, eta) = elliptic_coords(x, y, self.label.f);
        let radial = self.eigen.radial(xi)?;
        let angular = self.eigen.angular(eta);
        let amplitude = self.label.theta.sin().sqrt() * self.norm_constant * radial * angular;
        let phase = self.label.k * z * self.label.theta.cos();
        Ok(amplitude * Complex64::from_polar(1.0, phase))
    }
}

pub fn eval_mathieu_wave(label: &LabelSetMathieu, point: (f64, f64, f64)) -> Result<Complex64> {
    MathieuWave::new(*label)?.eval(point)
}

/// Prepared evaluator for any wave family.
#[derive(Clone, Debug)]
pub enum WaveEvaluator {
    Plane(LabelSetPlane),
    Bessel(LabelSetBessel),
    Mathieu(MathieuWave),
}

impl WaveEvaluator {
    pub fn eval(&self, point: (f64, f64, f64)) -> Result<Complex64> {
        match self {
            WaveEvaluator::Plane(l) => Ok(eval_plane_wave(l, point)),
            WaveEvaluator::Bessel(l) => eval_bessel_wave(l, point),
            WaveEvaluator::Mathieu(w) => w.eval(point),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub k: f64,
    pub theta: f64,
    pub z_plane: f64,
    pub description: String,
}

/// Complex field sampled at `(x0 + i·dx, y0 + j·dy)`, stored row-major
/// with `y` outermost.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x0: f64,
    pub y0: f64,
    pub values: Vec<Complex64>,
    pub meta: FieldMeta,
}

impl FieldGrid {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        nx: usize,
        ny: usize,
        dx: f64,
        dy: f64,
        x0: f64,
        y0: f64,
        values: Vec<Complex64>,
        meta: FieldMeta,
    ) -> Result<Self> {
        if nx < MIN_GRID_SIDE || ny < MIN_GRID_SIDE {
            return Err(HwmError::InvalidParameter(format!(
                "grid must be at least {MIN_GRID_SIDE}x{MIN_GRID_SIDE}, got {nx}x{ny}"
            )));
        }
        if !(dx.is_finite() && dx > 0.0 && dy.is_finite() && dy > 0.0) {
            return Err(HwmError::InvalidParameter(format!(
                "grid spacings must be > 0, got dx={dx} dy={dy}"
            )));
        }
        if !(x0.is_finite() && y0.is_finite()) {
            return Err(HwmError::InvalidParameter(
                "grid origin must be finite".into(),
            ));
        }
        if values.len() != nx * ny {
            return Err(HwmError::InvalidParameter(format!(
                "expected {} samples, got {}",
                nx * ny,
                values.len()
            )));
        }
        if let Some(i) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(HwmError::NumericalConsistency(format!(
                "sample ({}, {}) is not finite",
                i % nx,
                i / nx
            )));
        }
        Ok(FieldGrid {
            nx,
            ny,
            dx,
            dy,
            x0,
            y0,
            values,
            meta,
        })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.nx + i]
    }

    /// Same geometry and metadata, values mapped element-wise.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> FieldGrid {
        FieldGrid {
            values: self.values.iter().map(|v| f(*v)).collect(),
            ..self.clone()
        }
    }
}

/// Sampling lattice for [`sample_grid`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub x0: f64,
    pub y0: f64,
    pub z: f64,
}

impl GridSpec {
    /// Lattice symmetric about the z axis.
    pub fn centered(nx: usize, ny: usize, dx: f64, dy: f64, z: f64) -> Self {
        GridSpec {
            nx,
            ny,
            dx,
            dy,
            x0: -0.5 * (nx - 1) as f64 * dx,
            y0: -0.5 * (ny - 1) as f64 * dy,
            z,
        }
    }
}

/// Sample `wave` on the lattice. Rows are evaluated in parallel; each sample
/// depends only on its own coordinates, so the result does not depend on the
/// schedule.
pub fn sample_grid(wave: &Wave, spec: &GridSpec) -> Result<FieldGrid> {
    let eval = wave.evaluator()?;
    let rows: Vec<Result<Vec<Complex64>>> = (0..spec.ny)
        .into_par_iter()
        .map(|j| {
            let y = spec.y0 + j as f64 * spec.dy;
            (0..spec.nx)
                .map(|i| {
                    let x = spec.x0 + i as f64 * spec.dx;
                    eval.eval((x, y, spec.z)).map_err(|e| HwmError::Sample {
                        ix: i,
                        iy: j,
                        source: Box::new(e),
                    })
                })
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(spec.nx * spec.ny);
    for row in rows {
        values.extend(row?);
    }
    FieldGrid::new(
        spec.nx,
        spec.ny,
        spec.dx,
        spec.dy,
        spec.x0,
        spec.y0,
        values,
        FieldMeta {
            k: wave.k(),
            theta: wave.theta(),
            z_plane: spec.z,
            description: wave.to_string(),
        },
    )
}
