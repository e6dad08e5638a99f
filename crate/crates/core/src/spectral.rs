//! Angular spectra on the cone of transverse wavevectors and their
//! projection onto topological charges.
//!
//! A [`RingSpectrum`] holds the angular spectrum `φ(k, θ, φ)` at `M`
//! azimuths `φ_m = -π + 2πm/M` on the circle `|k_⊥| = k sinθ`. The charge
//! amplitudes are
//!
//! ```text
//! c_n = (2π)^{-1/2} (sinθ)^{1/2} ∫ dφ φ(k, θ, φ) e^{-inφ}
//! ```
//!
//! with the circle integral taken as the exact M-point sum. Operands of
//! binary operations must share one cone; the distributional `δ(θ - θ')`
//! factors are never evaluated, only required to match.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{HwmError, Result};
use crate::specfun::{MathieuEigen, Parity};
use crate::waves::{FieldGrid, LabelSetBessel, LabelSetMathieu, LabelSetPlane, MathieuWave};

pub const DEFAULT_RING_SAMPLES: usize = 1024;
pub const MIN_RING_SAMPLES: usize = 256;
pub const WEIGHT_CONVENTION: &str = "paper-(sinϑ)^{1/2}";

/// Relative tolerance for treating two cone angles (or wavenumbers) as equal.
const SAME_CONE_TOLERANCE: f64 = 1.0e-12;

/// Spatial apodization applied before ring extraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    None,
    /// Radial raised cosine `½(1 + cos(πr/R))` about the grid centre, with `R`
    /// half the shorter grid side. Rotation invariant, so it does not mix
    /// topological charges.
    Hann,
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Window::None => f.write_str("none"),
            Window::Hann => f.write_str("hann"),
        }
    }
}

impl std::str::FromStr for Window {
    type Err = HwmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Window::None),
            "hann" => Ok(Window::Hann),
            other => Err(HwmError::InvalidParameter(format!(
                "window must be `none` or `hann`, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingSpectrum {
    pub k: f64,
    pub theta: f64,
    /// Values at `φ_m = -π + 2πm/M`, `M = samples.len()`.
    pub samples: Vec<Complex64>,
    pub weight_convention: String,
}

impl RingSpectrum {
    pub fn new(k: f64, theta: f64, samples: Vec<Complex64>) -> Result<Self> {
        check_ring_size(samples.len())?;
        if let Some(m) = samples
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(HwmError::NumericalConsistency(format!(
                "ring sample {m} is not finite"
            )));
        }
        Ok(RingSpectrum {
            k,
            theta,
            samples,
            weight_convention: WEIGHT_CONVENTION.to_string(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn azimuth(&self, m: usize) -> f64 {
        ring_azimuth(m, self.len())
    }

    /// Element-wise `α·self + β·other` on a shared cone.
    pub fn combine(&self, alpha: Complex64, other: &RingSpectrum, beta: Complex64) -> Result<Self> {
        check_same_cone(self, other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        RingSpectrum::new(self.k, self.theta, samples)
    }
}

pub fn ring_azimuth(m: usize, ring_samples: usize) -> f64 {
    -PI + 2.0 * PI * m as f64 / ring_samples as f64
}

fn check_ring_size(m: usize) -> Result<()> {
    if m < MIN_RING_SAMPLES || !m.is_power_of_two() {
        return Err(HwmError::InvalidParameter(format!(
            "ring sample count must be a power of two >= {MIN_RING_SAMPLES}, got {m}"
        )));
    }
    Ok(())
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= SAME_CONE_TOLERANCE * a.abs().max(b.abs())
}

fn check_same_cone(a: &RingSpectrum, b: &RingSpectrum) -> Result<()> {
    if !nearly_equal(a.theta, b.theta) || !nearly_equal(a.k, b.k) {
        return Err(HwmError::ConeMismatch {
            left: a.theta,
            right: b.theta,
        });
    }
    if a.len() != b.len() {
        return Err(HwmError::InvalidParameter(format!(
            "ring sample counts differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Fixed-order pairwise summation.
pub(crate) fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= 16 {
        return values
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub(crate) fn pairwise_sum_real(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_real(&values[..mid]) + pairwise_sum_real(&values[mid..])
}

fn window_weights(field: &FieldGrid, window: Window) -> Option<Vec<f64>> {
    match window {
        Window::None => None,
        Window::Hann => {
            let cx = field.x0 + 0.5 * (field.nx - 1) as f64 * field.dx;
            let cy = field.y0 + 0.5 * (field.ny - 1) as f64 * field.dy;
            let radius =
                0.5 * ((field.nx - 1) as f64 * field.dx).min((field.ny - 1) as f64 * field.dy);
            let mut w = Vec::with_capacity(field.nx * field.ny);
            for j in 0..field.ny {
                for i in 0..field.nx {
                    let r = (field.x(i) - cx).hypot(field.y(j) - cy);
                    w.push(if r < radius {
                        0.5 * (1.0 + (PI * r / radius).cos())
                    } else {
                        0.0
                    });
                }
            }
            Some(w)
        }
    }
}

/// Angular spectrum of a sampled field on its cone, by direct evaluation of
/// the 2-D Fourier sum at the `M` ring wavevectors:
///
/// ```text
/// φ(φ_m) = (sinθ)^{1/2} e^{-ik z cosθ} Σ_{ij} w_ij Φ_ij e^{-i k_⊥(φ_m)·x_ij} dx dy
/// ```
///
/// The `e^{-ik z cosθ}` factor refers the spectrum to the `z = 0` plane.
pub fn ring_spectrum_from_grid(
    field: &FieldGrid,
    ring_samples: usize,
    window: Window,
) -> Result<RingSpectrum> {
    check_ring_size(ring_samples)?;
    let (k, theta) = (field.meta.k, field.meta.theta);
    if !(k.is_finite() && k > 0.0 && theta > 0.0 && theta < PI) {
        return Err(HwmError::InvalidParameter(format!(
            "field metadata needs k > 0 and θ in (0, π), got k={k} θ={theta}"
        )));
    }
    let kt = k * theta.sin();
    let nyquist = PI / field.dx.max(field.dy);
    if kt >= nyquist {
        return Err(HwmError::range(
            "transverse wavenumber k sinθ",
            kt,
            format!("k sinθ < π/max(dx, dy) = {nyquist}"),
        ));
    }

    let weighted: Vec<Complex64> = match window_weights(field, window) {
        None => field.values.clone(),
        Some(w) => field.values.iter().zip(&w).map(|(v, w)| v * *w).collect(),
    };
    let prefactor = theta.sin().sqrt()
        * field.dx
        * field.dy
        * Complex64::from_polar(1.0, -k * theta.cos() * field.meta.z_plane);

    let (nx, ny) = (field.nx, field.ny);
    let samples: Vec<Complex64> = (0..ring_samples)
        .into_par_iter()
        .map_init(
            || {
                (
                    vec![Complex64::new(0.0, 0.0); nx],
                    vec![Complex64::new(0.0, 0.0); ny],
                )
            },
            |(row, col), m| {
                let (s, c) = ring_azimuth(m, ring_samples).sin_cos();
                let (kx, ky) = (kt * c, kt * s);
                let ex: Vec<Complex64> = (0..nx)
                    .map(|i| Complex64::from_polar(1.0, -kx * field.x(i)))
                    .collect();
                for j in 0..ny {
                    let values = &weighted[j * nx..(j + 1) * nx];
                    for i in 0..nx {
                        row[i] = ex[i] * values[i];
                    }
                    col[j] = Complex64::from_polar(1.0, -ky * field.y(j)) * pairwise_sum(row);
                }
                prefactor * pairwise_sum(col)
            },
        )
        .collect();
    RingSpectrum::new(k, theta, samples)
}

/// Topological-charge amplitudes over `n_min..=n_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OamSpectrum {
    pub k: f64,
    pub theta: f64,
    pub n_min: i32,
    pub n_max: i32,
    pub coeffs: Vec<Complex64>,
    /// `Σ |c_n|²`.
    pub norm: f64,
}

impl OamSpectrum {
    pub fn new(k: f64, theta: f64, n_min: i32, coeffs: Vec<Complex64>) -> Self {
        let n_max = n_min + coeffs.len() as i32 - 1;
        let norm = pairwise_sum_real(&coeffs.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>());
        OamSpectrum {
            k,
            theta,
            n_min,
            n_max,
            coeffs,
            norm,
        }
    }

    /// Amplitude at charge `n`, zero outside the stored range.
    pub fn coeff(&self, n: i32) -> Complex64 {
        if n < self.n_min || n > self.n_max {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(n - self.n_min) as usize]
    }

    pub fn charges(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.n_min + i as i32, *c))
    }
}

/// Projection of a ring spectrum onto charges `n_min..=n_max` via the
/// M-point discrete transform.
pub fn oam_spectrum(ring: &RingSpectrum, n_min: i32, n_max: i32) -> Result<OamSpectrum> {
    let m = ring.len();
    if n_max < n_min {
        return Err(HwmError::InvalidParameter(format!(
            "empty charge range {n_min}..={n_max}"
        )));
    }
    if (n_max as i64 - n_min as i64 + 1) as usize > m {
        return Err(HwmError::range(
            "charge range width",
            (n_max as i64 - n_min as i64 + 1) as f64,
            format!("at most the {m} ring samples"),
        ));
    }
    let mut buffer = ring.samples.clone();
    FftPlanner::new().plan_fft_forward(m).process(&mut buffer);

    let scale = (2.0 * PI).powf(-0.5) * ring.theta.sin().sqrt() * 2.0 * PI / m as f64;
    let coeffs = (n_min..=n_max)
        .map(|n| {
            // e^{-inφ_m} = (-1)^n e^{-2πi nm/M}
            let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buffer[n.rem_euclid(m as i32) as usize] * (sign * scale)
        })
        .collect();
    Ok(OamSpectrum::new(ring.k, ring.theta, n_min, coeffs))
}

/// Plane-wave spectrum `(sinθ)^{-1/2} δ(φ - φ')`: the delta becomes unit mass
/// at the azimuth node nearest `φ'`, i.e. the value `M/(2π)` there.
pub fn analytic_ft_plane(label: &LabelSetPlane, ring_samples: usize) -> Result<RingSpectrum> {
    check_ring_size(ring_samples)?;
    let m = ring_samples as f64;
    let node = ((label.phi + PI) * m / (2.0 * PI)).round() as usize % ring_samples;
    let mut samples = vec![Complex64::new(0.0, 0.0); ring_samples];
    samples[node] = Complex64::new(m / (2.0 * PI) / label.theta.sin().sqrt(), 0.0);
    RingSpectrum::new(label.k, label.theta, samples)
}

/// Bessel-wave spectrum `(2π sinθ)^{-1/2} e^{inφ}`.
pub fn analytic_ft_bessel(label: &LabelSetBessel, ring_samples: usize) -> Result<RingSpectrum> {
    check_ring_size(ring_samples)?;
    let amp = (2.0 * PI * label.theta.sin()).powf(-0.5);
    let samples = (0..ring_samples)
        .map(|m| Complex64::from_polar(amp, label.n as f64 * ring_azimuth(m, ring_samples)))
        .collect();
    RingSpectrum::new(label.k, label.theta, samples)
}

/// Mathieu-wave spectrum `(π sinθ)^{-1/2} ce_n(φ, q)` (or `se_n`).
pub fn analytic_ft_mathieu(label: &LabelSetMathieu, ring_samples: usize) -> Result<RingSpectrum> {
    check_ring_size(ring_samples)?;
    let eigen = crate::specfun::mathieu_eigen(label.parity, label.n, label.q())?;
    analytic_ft_mathieu_from(&eigen, label.k, label.theta, ring_samples)
}

/// As [`analytic_ft_mathieu`], reusing a solved wave.
pub fn analytic_ft_mathieu_wave(wave: &MathieuWave, ring_samples: usize) -> Result<RingSpectrum> {
    analytic_ft_mathieu_from(&wave.eigen, wave.label.k, wave.label.theta, ring_samples)
}

fn analytic_ft_mathieu_from(
    eigen: &MathieuEigen,
    k: f64,
    theta: f64,
    ring_samples: usize,
) -> Result<RingSpectrum> {
    check_ring_size(ring_samples)?;
    let amp = (PI * theta.sin()).powf(-0.5);
    let samples = (0..ring_samples)
        .map(|m| Complex64::new(amp * eigen.angular(ring_azimuth(m, ring_samples)), 0.0))
        .collect();
    RingSpectrum::new(k, theta, samples)
}

/// `⟨⟨a|b⟩⟩ = (2π/M) Σ_m conj(a_m) b_m` on a shared cone.
pub fn plancherel_overlap(a: &RingSpectrum, b: &RingSpectrum) -> Result<Complex64> {
    check_same_cone(a, b)?;
    let terms: Vec<Complex64> = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| x.conj() * y)
        .collect();
    Ok(pairwise_sum(&terms) * (2.0 * PI / a.len() as f64))
}

/// `(2π/M) Σ |φ_m|²`. An [`OamSpectrum`] covering `M` consecutive charges has
/// `norm = sinθ · parseval_norm(ring)`.
pub fn parseval_norm(ring: &RingSpectrum) -> f64 {
    let sq: Vec<f64> = ring.samples.iter().map(|v| v.norm_sqr()).collect();
    pairwise_sum_real(&sq) * 2.0 * PI / ring.len() as f64
}

/// Charge amplitudes of a Mathieu wave in the two conventions.
#[derive(Clone, Debug, PartialEq)]
pub struct MathieuBesselCoeffs {
    /// `2^{-1/2} A_j` (or `B_j`) at charge `n = j ≥ 0`, as in the closed form.
    pub one_sided: OamSpectrum,
    /// From `cos jφ = (e^{ijφ} + e^{-ijφ})/2` and `sin jφ = (e^{ijφ} - e^{-ijφ})/2i`:
    /// `c_{±j} = A_j/√2` (`c_0 = √2 A_0`), or `c_{±j} = ∓i B_j/√2`.
    pub two_sided: OamSpectrum,
}

/// Bessel-wave (charge) decomposition of a Mathieu wave's ring spectrum,
/// built directly from its Fourier coefficients.
pub fn bessel_coeffs_of_mathieu(eigen: &MathieuEigen, k: f64, theta: f64) -> MathieuBesselCoeffs {
    let top = eigen.coeffs.len() as i32 - 1;
    let r = std::f64::consts::FRAC_1_SQRT_2;

    let one_sided: Vec<Complex64> = eigen
        .coeffs
        .iter()
        .map(|a| Complex64::new(r * a, 0.0))
        .collect();

    let mut two_sided = vec![Complex64::new(0.0, 0.0); (2 * top + 1) as usize];
    let at = |n: i32| (n + top) as usize;
    for (j, &a) in eigen.coeffs.iter().enumerate() {
        let j = j as i32;
        match eigen.parity() {
            Parity::Even => {
                if j == 0 {
                    two_sided[at(0)] = Complex64::new(std::f64::consts::SQRT_2 * a, 0.0);
                } else {
                    two_sided[at(j)] = Complex64::new(r * a, 0.0);
                    two_sided[at(-j)] = Complex64::new(r * a, 0.0);
                }
            }
            Parity::Odd => {
                if j > 0 {
                    two_sided[at(j)] = Complex64::new(0.0, -r * a);
                    two_sided[at(-j)] = Complex64::new(0.0, r * a);
                }
            }
        }
    }
    MathieuBesselCoeffs {
        one_sided: OamSpectrum::new(k, theta, 0, one_sided),
        two_sided: OamSpectrum::new(k, theta, -top, two_sided),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(n: i32, m: usize) -> RingSpectrum {
        let samples = (0..m)
            .map(|i| Complex64::from_polar(1.0, n as f64 * ring_azimuth(i, m)))
            .collect();
        RingSpectrum::new(1.0, 0.8, samples).unwrap()
    }

    #[test]
    fn overlap_of_harmonics() {
        let a = harmonic(2, 256);
        let b = harmonic(3, 256);
        let aa = plancherel_overlap(&a, &a).unwrap();
        assert!((aa - Complex64::new(2.0 * PI, 0.0)).norm() < 1e-12);
        assert!(plancherel_overlap(&a, &b).unwrap().norm() < 1e-12);
        let ab = plancherel_overlap(&a, &b).unwrap();
        let ba = plancherel_overlap(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
    }

    #[test]
    fn single_harmonic_projects_to_one_charge() {
        let spec = oam_spectrum(&harmonic(3, 512), -20, 20).unwrap();
        for (n, c) in spec.charges() {
            if n == 3 {
                let want = (2.0 * PI).sqrt() * 0.8_f64.sin().sqrt();
                assert!((c - Complex64::new(want, 0.0)).norm() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn zero_ring() {
        let ring = RingSpectrum::new(1.0, 1.0, vec![Complex64::new(0.0, 0.0); 256]).unwrap();
        let spec = oam_spectrum(&ring, -5, 5).unwrap();
        assert_eq!(spec.norm, 0.0);
        assert!(spec.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn ring_size_and_range_checks() {
        assert!(RingSpectrum::new(1.0, 1.0, vec![Complex64::new(0.0, 0.0); 300]).is_err());
        assert!(RingSpectrum::new(1.0, 1.0, vec![Complex64::new(0.0, 0.0); 128]).is_err());
        let ring = harmonic(0, 256);
        assert!(matches!(
            oam_spectrum(&ring, -200, 200),
            Err(HwmError::Range { .. })
        ));
        assert!(oam_spectrum(&ring, -128, 127).is_ok());
    }

    #[test]
    fn cone_mismatch_is_an_error() {
        let a = harmonic(1, 256);
        let mut b = harmonic(1, 256);
        b.theta = 0.9;
        assert!(matches!(
            plancherel_overlap(&a, &b),
            Err(HwmError::ConeMismatch { .. })
        ));
    }

    #[test]
    fn bessel_profile_signs() {
        let l = LabelSetBessel::new(1.0, 1.0, 1).unwrap();
        let ring = analytic_ft_bessel(&l, 256).unwrap();
        // φ_0 = -π and φ_128 = 0.
        assert!((ring.samples[0] + ring.samples[128]).norm() < 1e-15);
        let l0 = LabelSetBessel::new(1.0, 1.0, 0).unwrap();
        let flat = analytic_ft_bessel(&l0, 256).unwrap();
        assert!(flat
            .samples
            .iter()
            .all(|v| (*v - flat.samples[0]).norm() == 0.0));
    }

    #[test]
    fn plane_profile_is_a_unit_mass_delta() {
        let l = LabelSetPlane::new(1.0, 0.6, PI / 4.0).unwrap();
        let ring = analytic_ft_plane(&l, 1024).unwrap();
        let peak = ring.samples.iter().position(|v| v.norm() > 0.0).unwrap();
        assert!((ring.azimuth(peak) - PI / 4.0).abs() <= PI / 1024.0);
        let mass: Complex64 = ring.samples.iter().sum::<Complex64>() * (2.0 * PI / 1024.0);
        assert!((mass.re * 0.6_f64.sin().sqrt() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn window_parsing() {
        assert_eq!("hann".parse::<Window>().unwrap(), Window::Hann);
        assert!("tukey".parse::<Window>().is_err());
    }
}
