//! Mean values of the conserved momenta.
//!
//! Three independent routes are provided and never mixed: spectral means
//! from ring and charge spectra, Rayleigh quotients of finite-difference
//! operators applied to a sampled grid, and closed forms for labelled waves.
//! Every mean is a normalized ratio, so divergent normalizations of ideal
//! waves cancel.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HwmError, Result};
use crate::specfun::{mathieu_eigen, MathieuEigen, Parity};
use crate::spectral::{
    analytic_ft_plane, oam_spectrum, pairwise_sum, pairwise_sum_real, ring_spectrum_from_grid,
    OamSpectrum, RingSpectrum, Window,
};
use crate::waves::{FieldGrid, LabelSetPlane, Wave};

/// Default bound on `|Im⟨Φ|O|Φ⟩| / (‖Φ‖‖OΦ‖)` for a grid mean to be accepted.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1.0e-6;

/// Smallest interior extent, in cells, accepted by the grid oracle.
pub const MIN_INTERIOR_CELLS: usize = 8;

/// Relative size of the rounding noise in a difference quotient.
const ROUNDOFF_FLOOR: f64 = 1.0e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Spectral,
    GridOracle,
    PaperFormula,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Spectral => "spectral",
            Method::GridOracle => "grid-oracle",
            Method::PaperFormula => "paper-formula",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = HwmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "grid" | "grid-oracle" => Ok(Method::GridOracle),
            "paper" | "paper-formula" => Ok(Method::PaperFormula),
            other => Err(HwmError::InvalidParameter(format!(
                "unknown method `{other}` (expected spectral, grid or paper)"
            ))),
        }
    }
}

/// Mean momenta of one field by one method. Linear momenta are in the same
/// units as `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumReport {
    pub mean_lz: f64,
    pub mean_px: f64,
    pub mean_py: f64,
    /// `k cosθ` from the cone metadata.
    pub mean_pz: f64,
    /// `⟨l_z² + f² p_x²⟩`, present when a focal distance is known.
    pub elliptic_invariant: Option<f64>,
    pub method: Method,
    pub norm_used: f64,
    pub window: Window,
    pub notes: Vec<String>,
}

impl MomentumReport {
    fn check_finite(self) -> Result<Self> {
        let values = [
            self.mean_lz,
            self.mean_px,
            self.mean_py,
            self.mean_pz,
            self.norm_used,
        ];
        if values
            .iter()
            .chain(self.elliptic_invariant.iter())
            .any(|v| !v.is_finite())
        {
            return Err(HwmError::NumericalConsistency(format!(
                "{} report has non-finite entries",
                self.method
            )));
        }
        Ok(self)
    }
}

/// `Σ n|c_n|² / Σ|c_n|²`.
pub fn mean_charge(spec: &OamSpectrum) -> Result<f64> {
    charge_moment(spec, 1)
}

/// `Σ n^power |c_n|² / Σ|c_n|²`.
pub fn charge_moment(spec: &OamSpectrum, power: i32) -> Result<f64> {
    if spec.norm.is_nan() || spec.norm <= 0.0 {
        return Err(HwmError::UndefinedMean);
    }
    let terms: Vec<f64> = spec
        .charges()
        .map(|(n, c)| (n as f64).powi(power) * c.norm_sqr())
        .collect();
    Ok(pairwise_sum_real(&terms) / spec.norm)
}

/// Mean of `g(φ)` weighted by `|ring(φ)|²`.
fn ring_mean(ring: &RingSpectrum, g: impl Fn(f64) -> f64) -> Result<f64> {
    let weights: Vec<f64> = ring.samples.iter().map(|v| v.norm_sqr()).collect();
    let total = pairwise_sum_real(&weights);
    if total.is_nan() || total <= 0.0 {
        return Err(HwmError::UndefinedMean);
    }
    let terms: Vec<f64> = weights
        .iter()
        .enumerate()
        .map(|(m, w)| g(ring.azimuth(m)) * w)
        .collect();
    Ok(pairwise_sum_real(&terms) / total)
}

/// OAM of a plane wave through its discrete spectral profile over charges
/// `-40..=40`. All charge magnitudes are equal, so the mean vanishes.
pub fn oam_plane_wave(label: &LabelSetPlane) -> Result<f64> {
    let ring = analytic_ft_plane(label, crate::spectral::DEFAULT_RING_SAMPLES)?;
    mean_charge(&oam_spectrum(&ring, -40, 40)?)
}

/// The one-sided Mathieu OAM sum
/// `Σ_m [m + (n mod 2)/2] |A_{2m + n mod 2}|² / Σ_m |A_{2m + n mod 2}|²`
/// (`B` for odd parity). For the harmonic `j = 2m + (n mod 2)` the weight is
/// `j/2`.
pub fn oam_mathieu_paper(parity: Parity, n: u32, q: f64) -> Result<f64> {
    Ok(oam_mathieu_paper_of(&mathieu_eigen(parity, n, q)?))
}

pub fn oam_mathieu_paper_of(eigen: &MathieuEigen) -> f64 {
    let (num, den): (Vec<f64>, Vec<f64>) = eigen
        .harmonics()
        .map(|(j, a)| (0.5 * j as f64 * a * a, a * a))
        .unzip();
    pairwise_sum_real(&num) / pairwise_sum_real(&den)
}

/// Operators available to the grid oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Operator {
    Lz,
    Px,
    Py,
    /// `l_z² + f² p_x²`.
    Elliptic {
        f: f64,
    },
}

impl Operator {
    /// Magnitude of `‖OΦ‖/‖Φ‖` produced by rounding alone in the difference
    /// quotients on `field`.
    fn roundoff_gain(&self, field: &FieldGrid) -> f64 {
        let h = field.dx.min(field.dy);
        let reach = [
            field.x(0),
            field.x(field.nx - 1),
            field.y(0),
            field.y(field.ny - 1),
        ]
        .into_iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
        let g = match self {
            Operator::Px | Operator::Py => 1.0 / h,
            Operator::Lz => reach / h,
            Operator::Elliptic { f } => (reach / h).powi(2) + (f / h).powi(2),
        };
        ROUNDOFF_FLOOR * g
    }

    /// Cells excluded at each edge: one per derivative applied in sequence.
    pub fn border(&self) -> usize {
        match self {
            Operator::Elliptic { .. } => 2,
            _ => 1,
        }
    }
}

/// Grid Rayleigh quotient and its imaginary residue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMean {
    pub value: f64,
    /// `|Im⟨Φ|O|Φ⟩| / (‖Φ‖ ‖OΦ‖)` over the quadrature region, with `‖OΦ‖`
    /// floored at the stencil's round-off level.
    pub imaginary_residue: f64,
    /// `Σ|Φ|² dx dy` over the quadrature region.
    pub norm: f64,
}

struct Stencil<'a> {
    field: &'a FieldGrid,
}

impl Stencil<'_> {
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.field.nx + i
    }

    /// Centered `∂x`, valid at least `lo` cells from each edge.
    fn dx(&self, v: &[Complex64], lo: usize) -> Vec<Complex64> {
        let (nx, ny) = (self.field.nx, self.field.ny);
        let h = 0.5 / self.field.dx;
        let mut out = vec![Complex64::new(0.0, 0.0); nx * ny];
        for j in lo..ny - lo {
            for i in lo..nx - lo {
                out[self.idx(i, j)] = (v[self.idx(i + 1, j)] - v[self.idx(i - 1, j)]) * h;
            }
        }
        out
    }

    fn dy(&self, v: &[Complex64], lo: usize) -> Vec<Complex64> {
        let (nx, ny) = (self.field.nx, self.field.ny);
        let h = 0.5 / self.field.dy;
        let mut out = vec![Complex64::new(0.0, 0.0); nx * ny];
        for j in lo..ny - lo {
            for i in lo..nx - lo {
                out[self.idx(i, j)] = (v[self.idx(i, j + 1)] - v[self.idx(i, j - 1)]) * h;
            }
        }
        out
    }

    /// `x∂y − y∂x`.
    fn angular(&self, v: &[Complex64], lo: usize) -> Vec<Complex64> {
        let gx = self.dx(v, lo);
        let gy = self.dy(v, lo);
        let nx = self.field.nx;
        gx.iter()
            .zip(&gy)
            .enumerate()
            .map(|(k, (gx, gy))| gy * self.field.x(k % nx) - gx * self.field.y(k / nx))
            .collect()
    }

    fn apply(&self, op: Operator) -> Vec<Complex64> {
        let v = &self.field.values;
        let minus_i = Complex64::new(0.0, -1.0);
        match op {
            Operator::Px => self.dx(v, 1).into_iter().map(|d| minus_i * d).collect(),
            Operator::Py => self.dy(v, 1).into_iter().map(|d| minus_i * d).collect(),
            Operator::Lz => self
                .angular(v, 1)
                .into_iter()
                .map(|d| minus_i * d)
                .collect(),
            Operator::Elliptic { f } => {
                let l2 = self.angular(&self.angular(v, 1), 2);
                let d2 = self.dx(&self.dx(v, 1), 2);
                l2.iter()
                    .zip(&d2)
                    .map(|(a, b)| -(a + b * (f * f)))
                    .collect()
            }
        }
    }
}

fn check_interior(field: &FieldGrid, border: usize) -> Result<()> {
    let (ix, iy) = (
        field.nx.saturating_sub(2 * border),
        field.ny.saturating_sub(2 * border),
    );
    if ix < MIN_INTERIOR_CELLS || iy < MIN_INTERIOR_CELLS {
        return Err(HwmError::InvalidParameter(format!(
            "grid interior {ix}x{iy} is smaller than {MIN_INTERIOR_CELLS}x{MIN_INTERIOR_CELLS}"
        )));
    }
    Ok(())
}

fn quotient(
    field: &FieldGrid,
    applied: &[Complex64],
    gain: f64,
    (i0, i1): (usize, usize),
    (j0, j1): (usize, usize),
) -> GridMean {
    let nx = field.nx;
    let mut num = Vec::with_capacity((i1 - i0) * (j1 - j0));
    let mut den = Vec::with_capacity(num.capacity());
    let mut out = Vec::with_capacity(num.capacity());
    for j in j0..j1 {
        for i in i0..i1 {
            let (v, ov) = (field.values[j * nx + i], applied[j * nx + i]);
            num.push(v.conj() * ov);
            den.push(v.norm_sqr());
            out.push(ov.norm_sqr());
        }
    }
    let num = pairwise_sum(&num);
    let den = pairwise_sum_real(&den);
    let scale = den.sqrt() * pairwise_sum_real(&out).sqrt().max(gain * den.sqrt());
    let imaginary_residue = if num.im == 0.0 {
        0.0
    } else {
        num.im.abs() / scale
    };
    GridMean {
        value: num.re / den,
        imaginary_residue,
        norm: den * field.dx * field.dy,
    }
}

/// Rayleigh quotient `⟨Φ|O|Φ⟩/⟨Φ|Φ⟩` with second-order centered differences,
/// `p = −i∇` and `l_z = −i(x∂y − y∂x)` in grid coordinates. Fails if the
/// imaginary residue exceeds [`IMAGINARY_RESIDUE_TOLERANCE`].
pub fn grid_mean(field: &FieldGrid, op: Operator) -> Result<f64> {
    grid_mean_with_tolerance(field, op, IMAGINARY_RESIDUE_TOLERANCE).map(|m| m.value)
}

pub fn grid_mean_with_tolerance(
    field: &FieldGrid,
    op: Operator,
    tolerance: f64,
) -> Result<GridMean> {
    let mean = grid_mean_unchecked(field, op)?;
    if mean.imaginary_residue.is_nan() || mean.imaginary_residue > tolerance {
        return Err(HwmError::NumericalConsistency(format!(
            "grid mean of {op:?} has imaginary residue {:.3e} > {tolerance:.1e}",
            mean.imaginary_residue
        )));
    }
    if mean.norm.is_nan() || mean.norm <= 0.0 {
        return Err(HwmError::UndefinedMean);
    }
    Ok(mean)
}

/// As [`grid_mean_with_tolerance`] without the residue check.
pub fn grid_mean_unchecked(field: &FieldGrid, op: Operator) -> Result<GridMean> {
    let b = op.border();
    check_interior(field, b)?;
    let applied = Stencil { field }.apply(op);
    let gain = op.roundoff_gain(field);
    Ok(quotient(
        field,
        &applied,
        gain,
        (b, field.nx - b),
        (b, field.ny - b),
    ))
}

/// Rayleigh quotient restricted to one rectangular patch of the interior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PatchMean {
    pub px: usize,
    pub py: usize,
    pub mean: GridMean,
}

/// Splits the interior into `patches × patches` blocks and evaluates the
/// quotient on each. For an eigenfunction of `op` every block reproduces the
/// eigenvalue.
pub fn grid_mean_patches(
    field: &FieldGrid,
    op: Operator,
    patches: usize,
) -> Result<Vec<PatchMean>> {
    let b = op.border();
    check_interior(field, b)?;
    let (wx, wy) = (field.nx - 2 * b, field.ny - 2 * b);
    if patches == 0 || wx / patches < 2 || wy / patches < 2 {
        return Err(HwmError::InvalidParameter(format!(
            "cannot split a {wx}x{wy} interior into {patches}x{patches} patches"
        )));
    }
    let applied = Stencil { field }.apply(op);
    let gain = op.roundoff_gain(field);
    let edge = |w: usize, p: usize| b + p * w / patches;
    let mut out = Vec::with_capacity(patches * patches);
    for py in 0..patches {
        for px in 0..patches {
            let mean = quotient(
                field,
                &applied,
                gain,
                (edge(wx, px), edge(wx, px + 1)),
                (edge(wy, py), edge(wy, py + 1)),
            );
            out.push(PatchMean { px, py, mean });
        }
    }
    Ok(out)
}

/// Settings shared by the report builders.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportOptions {
    pub ring_samples: usize,
    /// Charge range for the spectral route; symmetric `±(M/2 − 1)` when `None`.
    pub n_range: Option<(i32, i32)>,
    pub window: Window,
    /// Focal distance for the elliptic invariant.
    pub f: Option<f64>,
    pub residue_tolerance: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            ring_samples: crate::spectral::DEFAULT_RING_SAMPLES,
            n_range: None,
            window: Window::None,
            f: None,
            residue_tolerance: IMAGINARY_RESIDUE_TOLERANCE,
        }
    }
}

impl ReportOptions {
    fn charge_range(&self) -> (i32, i32) {
        self.n_range.unwrap_or_else(|| {
            let half = (self.ring_samples / 2) as i32 - 1;
            (-half, half)
        })
    }
}

fn pz(field_k: f64, theta: f64) -> f64 {
    field_k * theta.cos()
}

/// Spectral means from the ring spectrum of `field` and its charge
/// decomposition. The elliptic invariant combines `⟨n²⟩` with
/// `f² k² sin²θ ⟨cos²φ⟩`.
pub fn report_spectral(field: &FieldGrid, opts: &ReportOptions) -> Result<MomentumReport> {
    let ring = ring_spectrum_from_grid(field, opts.ring_samples, opts.window)?;
    let (n_min, n_max) = opts.charge_range();
    let spec = oam_spectrum(&ring, n_min, n_max)?;
    let kt = ring.k * ring.theta.sin();
    let elliptic_invariant = match opts.f {
        Some(f) => Some(
            charge_moment(&spec, 2)? + f * f * kt * kt * ring_mean(&ring, |p| p.cos().powi(2))?,
        ),
        None => None,
    };
    MomentumReport {
        mean_lz: mean_charge(&spec)?,
        mean_px: kt * ring_mean(&ring, f64::cos)?,
        mean_py: kt * ring_mean(&ring, f64::sin)?,
        mean_pz: pz(ring.k, ring.theta),
        elliptic_invariant,
        method: Method::Spectral,
        norm_used: spec.norm,
        window: opts.window,
        notes: vec![
            format!(
                "charges {n_min}..={n_max} from {} ring samples",
                opts.ring_samples
            ),
            "mean_pz from cone metadata".into(),
        ],
    }
    .check_finite()
}

/// Finite-difference Rayleigh quotients on the sampled field.
pub fn report_grid(field: &FieldGrid, opts: &ReportOptions) -> Result<MomentumReport> {
    let tol = opts.residue_tolerance;
    let lz = grid_mean_with_tolerance(field, Operator::Lz, tol)?;
    let px = grid_mean_with_tolerance(field, Operator::Px, tol)?;
    let py = grid_mean_with_tolerance(field, Operator::Py, tol)?;
    let elliptic_invariant = match opts.f {
        Some(f) => Some(grid_mean_with_tolerance(field, Operator::Elliptic { f }, tol)?.value),
        None => None,
    };
    let mut notes = vec![
        "second-order centered differences, border cells excluded".to_string(),
        "mean_pz from cone metadata".into(),
    ];
    if opts.window != Window::None {
        notes.push("window applies to the spectral route only".into());
    }
    MomentumReport {
        mean_lz: lz.value,
        mean_px: px.value,
        mean_py: py.value,
        mean_pz: pz(field.meta.k, field.meta.theta),
        elliptic_invariant,
        method: Method::GridOracle,
        norm_used: lz.norm,
        window: Window::None,
        notes,
    }
    .check_finite()
}

/// Closed-form means for a labelled wave. For Mathieu waves the OAM is the
/// one-sided coefficient sum and the elliptic invariant is the printed
/// eigenvalue `a_n` (`b_n`); the value `a_n + 2q` (`b_n + 2q`) implied by the
/// angular Mathieu equation on the ring is recorded in the notes.
pub fn report_paper(wave: &Wave) -> Result<MomentumReport> {
    let (k, theta) = (wave.k(), wave.theta());
    let kt = k * theta.sin();
    let mut notes = vec!["mean_pz from cone metadata".to_string()];
    let (mean_lz, mean_px, mean_py, elliptic_invariant, norm_used) = match wave {
        Wave::Plane(l) => (0.0, kt * l.phi.cos(), kt * l.phi.sin(), None, 1.0),
        Wave::Bessel(l) => (l.n as f64, 0.0, 0.0, None, 1.0),
        Wave::Mathieu(l) => {
            let eigen = mathieu_eigen(l.parity, l.n, l.q())?;
            let norm: f64 = eigen.coeffs.iter().map(|a| a * a).sum();
            notes.push(
                "one-sided coefficient sum; two-sided conjugation symmetry gives 0 for real profiles"
                    .into(),
            );
            notes.push(format!(
                "characteristic value {:.17e}; ring profile eigenvalue of l_z^2 + f^2 p_x^2 is {:.17e}",
                eigen.char_value,
                eigen.char_value + 2.0 * l.q()
            ));
            (
                oam_mathieu_paper_of(&eigen),
                0.0,
                0.0,
                Some(eigen.char_value),
                norm,
            )
        }
    };
    MomentumReport {
        mean_lz,
        mean_px,
        mean_py,
        mean_pz: pz(k, theta),
        elliptic_invariant,
        method: Method::PaperFormula,
        norm_used,
        window: Window::None,
        notes,
    }
    .check_finite()
}

/// One report per requested method, in the order given. The closed-form method
/// needs the wave label stored in the field description.
pub fn report(
    field: &FieldGrid,
    methods: &[Method],
    opts: &ReportOptions,
) -> Result<Vec<MomentumReport>> {
    methods
        .iter()
        .map(|m| match m {
            Method::Spectral => report_spectral(field, opts),
            Method::GridOracle => report_grid(field, opts),
            Method::PaperFormula => {
                let wave: Wave = field.meta.description.parse().map_err(|_| {
                    HwmError::InvalidParameter(format!(
                        "paper formulas need a wave label in the field description, found `{}`",
                        field.meta.description
                    ))
                })?;
                report_paper(&wave)
            }
        })
        .collect()
}

/// Candidate constant nearest to `measured`, as (label, value).
pub fn nearest_convention(measured: f64, char_value: f64, q: f64) -> (&'static str, f64) {
    let candidates = [
        ("a", char_value),
        ("a+2q", char_value + 2.0 * q),
        ("a-2q", char_value - 2.0 * q),
    ];
    candidates
        .into_iter()
        .min_by(|x, y| (x.1 - measured).abs().total_cmp(&(y.1 - measured).abs()))
        .expect("non-empty")
}
