//! Periodic Mathieu functions and their radial (modified) counterparts.
//!
//! Angular equation: `y'' + (a - 2q cos 2η) y = 0`.
//! Radial equation:  `y'' - (a - 2q cosh 2ξ) y = 0`.
//!
//! Each symmetry class expands in one family of harmonics:
//!
//! | class            | series                  | harmonics      |
//! |------------------|-------------------------|----------------|
//! | even, even order | `Σ A_j cos jη`          | j = 0, 2, 4, … |
//! | even, odd order  | `Σ A_j cos jη`          | j = 1, 3, 5, … |
//! | odd, odd order   | `Σ B_j sin jη`          | j = 1, 3, 5, … |
//! | odd, even order  | `Σ B_j sin jη`          | j = 2, 4, 6, … |
//!
//! Normalization: `∫₀^{2π} ce_n² = ∫₀^{2π} se_n² = π`, i.e.
//! `2A_0² + Σ_{j>0} A_j² = 1` for the even/even class and `Σ coeff² = 1`
//! for the others. The largest-magnitude coefficient is positive.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::tridiag;
use crate::error::{HwmError, Result};

/// Coefficients below this fraction of the largest are treated as converged.
pub const TAIL_TOLERANCE: f64 = 1.0e-14;
pub const MAX_TRUNCATION: usize = 2048;

/// Radial series are evaluated only while `√q·cosh ξ` stays below this bound.
pub const RADIAL_ARGUMENT_LIMIT: f64 = 8.0;
pub const RADIAL_XI_CAP: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = HwmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(HwmError::InvalidParameter(format!(
                "parity must be `even` or `odd`, got `{other}`"
            ))),
        }
    }
}

/// One of the four symmetry classes of periodic Mathieu functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MathieuClass {
    pub parity: Parity,
    pub odd_order: bool,
}

impl MathieuClass {
    /// Class of the function of the given parity and order; odd functions
    /// start at order 1.
    pub fn of(parity: Parity, order: u32) -> Result<Self> {
        if parity == Parity::Odd && order == 0 {
            return Err(HwmError::InvalidParameter(
                "odd Mathieu functions have order >= 1".into(),
            ));
        }
        Ok(MathieuClass {
            parity,
            odd_order: order % 2 == 1,
        })
    }

    /// Lowest harmonic present in the class expansion.
    pub fn first_harmonic(&self) -> u32 {
        match (self.parity, self.odd_order) {
            (Parity::Even, false) => 0,
            (Parity::Even, true) | (Parity::Odd, true) => 1,
            (Parity::Odd, false) => 2,
        }
    }

    /// Rank of `order` among the eigenvalues of this class.
    fn rank(&self, order: u32) -> usize {
        ((order - self.first_harmonic()) / 2) as usize
    }

    fn harmonic(&self, slot: usize) -> u32 {
        self.first_harmonic() + 2 * slot as u32
    }

    /// Symmetric recurrence matrix of dimension `dim` for this class. The
    /// even/even class is symmetrized through `√2·A_0`.
    fn recurrence_matrix(&self, q: f64, dim: usize) -> (Vec<f64>, Vec<f64>) {
        let mut diag: Vec<f64> = (0..dim)
            .map(|s| {
                let j = self.harmonic(s) as f64;
                j * j
            })
            .collect();
        let mut off = vec![q; dim - 1];
        match (self.parity, self.odd_order) {
            (Parity::Even, false) => off[0] = std::f64::consts::SQRT_2 * q,
            (Parity::Even, true) => diag[0] += q,
            (Parity::Odd, true) => diag[0] -= q,
            (Parity::Odd, false) => {}
        }
        (diag, off)
    }

    /// Diagonal entry of recurrence row `slot`.
    fn row_diag(&self, q: f64, slot: usize) -> f64 {
        let j = self.harmonic(slot) as f64;
        let base = j * j;
        if slot == 0 {
            match (self.parity, self.odd_order) {
                (Parity::Even, true) => return base + q,
                (Parity::Odd, true) => return base - q,
                _ => {}
            }
        }
        base
    }
}

impl fmt::Display for MathieuClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match (self.parity, self.odd_order) {
            (Parity::Even, false) => "ce(2j)",
            (Parity::Even, true) => "ce(2j+1)",
            (Parity::Odd, true) => "se(2j+1)",
            (Parity::Odd, false) => "se(2j+2)",
        };
        f.write_str(name)
    }
}

/// Characteristic value and Fourier coefficients of one periodic Mathieu
/// function.
#[derive(Clone, Debug)]
pub struct MathieuEigen {
    pub class: MathieuClass,
    pub order: u32,
    pub q: f64,
    /// `a_n` for even functions, `b_n` for odd ones.
    pub char_value: f64,
    /// Dense by harmonic: `coeffs[j]` multiplies `cos jη` (or `sin jη`).
    /// Harmonics of the wrong parity hold exact zeros.
    pub coeffs: Vec<f64>,
    /// Dimension of the recurrence matrix that produced the eigenpair.
    pub truncation: usize,
}

/// Eigen-system with the automatic truncation rule: start from
/// `max(32, 2n + ⌈2√q⌉ + 25)` and double until the coefficient tail is below
/// [`TAIL_TOLERANCE`].
pub fn mathieu_eigen(parity: Parity, order: u32, q: f64) -> Result<MathieuEigen> {
    let class = MathieuClass::of(parity, order)?;
    check_q(q)?;
    let mut dim = 32usize.max(2 * order as usize + (2.0 * q.sqrt()).ceil() as usize + 25);
    loop {
        let dim_now = dim.min(MAX_TRUNCATION);
        let (eigen, tail) = solve(class, order, q, dim_now)?;
        if tail < TAIL_TOLERANCE {
            return Ok(eigen);
        }
        if dim_now == MAX_TRUNCATION {
            return Err(HwmError::EigenSolver {
                class,
                order,
                q,
                reason: format!(
                    "coefficient tail {tail:e} above {TAIL_TOLERANCE:e} at the maximum truncation"
                ),
            });
        }
        dim *= 2;
    }
}

/// Eigen-system at a fixed recurrence-matrix dimension.
pub fn mathieu_eigen_with_truncation(
    parity: Parity,
    order: u32,
    q: f64,
    dim: usize,
) -> Result<MathieuEigen> {
    let class = MathieuClass::of(parity, order)?;
    check_q(q)?;
    if dim <= class.rank(order) + 1 || dim > MAX_TRUNCATION {
        return Err(HwmError::InvalidParameter(format!(
            "truncation {dim} cannot resolve order {order} (maximum {MAX_TRUNCATION})"
        )));
    }
    solve(class, order, q, dim).map(|(eigen, _)| eigen)
}

fn check_q(q: f64) -> Result<()> {
    if !q.is_finite() || q < 0.0 {
        return Err(HwmError::range("Mathieu parameter q", q, "q >= 0"));
    }
    Ok(())
}

/// Returns the eigen-system and the relative magnitude of the last
/// eigenvector component.
fn solve(class: MathieuClass, order: u32, q: f64, dim: usize) -> Result<(MathieuEigen, f64)> {
    let fail = |reason: String| HwmError::EigenSolver {
        class,
        order,
        q,
        reason,
    };
    let rank = class.rank(order);
    let (diag, off) = class.recurrence_matrix(q, dim);
    let values = tridiag::eigenvalues(&diag, &off).map_err(fail)?;
    let lambda = values[rank];
    let mut slots = if q == 0.0 {
        // Diagonal matrix: the eigenvector is exactly a unit vector.
        let mut unit = vec![0.0; dim];
        unit[rank] = 1.0;
        unit
    } else {
        tridiag::eigenvector(&diag, &off, lambda)
    };
    if slots.iter().any(|v| !v.is_finite()) {
        return Err(fail("inverse iteration produced non-finite values".into()));
    }

    let peak = slots.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tail = slots[dim - 1].abs() / peak;

    if class.parity == Parity::Even && !class.odd_order {
        slots[0] /= std::f64::consts::SQRT_2;
    }
    extend_tail(class, rank, q, lambda, &mut slots);

    let mut eigen = MathieuEigen {
        class,
        order,
        q,
        char_value: lambda,
        coeffs: Vec::new(),
        truncation: dim,
    };
    normalize_and_fix_sign(class, &mut slots);

    // Refine the characteristic value against the extended vector.
    let mut sym = slots.clone();
    if class.parity == Parity::Even && !class.odd_order {
        sym[0] *= std::f64::consts::SQRT_2;
    }
    let (diag_ext, off_ext) = class.recurrence_matrix(q, sym.len());
    eigen.char_value = tridiag::rayleigh_quotient(&diag_ext, &off_ext, &sym);

    let mut dense = vec![0.0; class.harmonic(slots.len() - 1) as usize + 1];
    for (s, v) in slots.iter().enumerate() {
        dense[class.harmonic(s) as usize] = *v;
    }
    eigen.coeffs = dense;
    Ok((eigen, tail))
}

/// Replace the decaying tail of the coefficient vector by the minimal
/// solution of the three-term recurrence, computed as a backward continued
/// fraction. This keeps tiny coefficients accurate in a relative sense,
/// which the hyperbolic radial series needs.
fn extend_tail(class: MathieuClass, rank: usize, q: f64, a: f64, slots: &mut Vec<f64>) {
    if q == 0.0 {
        return;
    }
    let dim = slots.len();
    let min_start = if class.parity == Parity::Even && !class.odd_order {
        2
    } else {
        1
    };
    let start = (rank + 1).max(min_start);
    let start = (start..dim).find(|&s| class.row_diag(q, s) > a + 2.0 * q);
    let Some(start) = start else {
        return;
    };

    let end = 4 * dim;
    // ratio[s - start] = A_s / A_{s-1}
    let mut ratios = vec![0.0; end - start + 1];
    let mut next = 0.0;
    for s in (start..=end).rev() {
        let r = q / (a - class.row_diag(q, s) - q * next);
        ratios[s - start] = r;
        next = r;
    }

    slots.truncate(start);
    let mut prev = slots[start - 1];
    for s in start..=end {
        let v = prev * ratios[s - start];
        if v.abs() < 1.0e-300 || v == 0.0 {
            break;
        }
        slots.push(v);
        prev = v;
    }
}

fn normalize_and_fix_sign(class: MathieuClass, slots: &mut [f64]) {
    let mut sum_sq: f64 = slots.iter().map(|v| v * v).sum();
    if class.parity == Parity::Even && !class.odd_order {
        sum_sq += slots[0] * slots[0];
    }
    let norm = sum_sq.sqrt();
    let mut best = 0;
    for (s, v) in slots.iter().enumerate() {
        if v.abs() > slots[best].abs() {
            best = s;
        }
    }
    let sign = if slots[best] < 0.0 { -1.0 } else { 1.0 };
    for v in slots.iter_mut() {
        *v *= sign / norm;
    }
}

impl MathieuEigen {
    pub fn parity(&self) -> Parity {
        self.class.parity
    }

    /// Coefficient of harmonic `j`, zero outside the stored range.
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    /// `(j, coeff)` for the harmonics of this class.
    pub fn harmonics(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        let first = self.class.first_harmonic() as usize;
        (first..self.coeffs.len())
            .step_by(2)
            .map(move |j| (j as u32, self.coeffs[j]))
    }

    /// `ce_n(η)` or `se_n(η)` depending on parity.
    pub fn angular(&self, eta: f64) -> f64 {
        match self.class.parity {
            Parity::Even => self
                .harmonics()
                .map(|(j, c)| c * (j as f64 * eta).cos())
                .sum(),
            Parity::Odd => self
                .harmonics()
                .map(|(j, c)| c * (j as f64 * eta).sin())
                .sum(),
        }
    }

    pub fn angular_derivative(&self, eta: f64) -> f64 {
        match self.class.parity {
            Parity::Even => -self
                .harmonics()
                .map(|(j, c)| j as f64 * c * (j as f64 * eta).sin())
                .sum::<f64>(),
            Parity::Odd => self
                .harmonics()
                .map(|(j, c)| j as f64 * c * (j as f64 * eta).cos())
                .sum(),
        }
    }

    pub fn angular_second_derivative(&self, eta: f64) -> f64 {
        let sum: f64 = match self.class.parity {
            Parity::Even => self
                .harmonics()
                .map(|(j, c)| (j * j) as f64 * c * (j as f64 * eta).cos())
                .sum(),
            Parity::Odd => self
                .harmonics()
                .map(|(j, c)| (j * j) as f64 * c * (j as f64 * eta).sin())
                .sum(),
        };
        -sum
    }

    /// Largest ξ for which the hyperbolic radial series is supported.
    pub fn radial_xi_max(&self) -> f64 {
        radial_xi_max(self.q)
    }

    fn check_xi(&self, xi: f64) -> Result<()> {
        let max = self.radial_xi_max();
        if !(0.0..=max).contains(&xi) {
            return Err(HwmError::range(
                "radial coordinate xi",
                xi,
                format!("0 <= xi <= {max}"),
            ));
        }
        Ok(())
    }

    /// `Ce_n(ξ) = ce_n(iξ)` or `Se_n(ξ) = -i se_n(iξ)`.
    pub fn radial(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(match self.class.parity {
            Parity::Even => self.harmonics().map(|(j, c)| c_cosh(c, j, xi)).sum(),
            Parity::Odd => self.harmonics().map(|(j, c)| c_sinh(c, j, xi)).sum(),
        })
    }

    pub fn radial_derivative(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(match self.class.parity {
            Parity::Even => self
                .harmonics()
                .map(|(j, c)| j as f64 * c_sinh(c, j, xi))
                .sum(),
            Parity::Odd => self
                .harmonics()
                .map(|(j, c)| j as f64 * c_cosh(c, j, xi))
                .sum(),
        })
    }

    pub fn radial_second_derivative(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(match self.class.parity {
            Parity::Even => self
                .harmonics()
                .map(|(j, c)| (j * j) as f64 * c_cosh(c, j, xi))
                .sum(),
            Parity::Odd => self
                .harmonics()
                .map(|(j, c)| (j * j) as f64 * c_sinh(c, j, xi))
                .sum(),
        })
    }

    /// Normalization constant `c_n` (even) or `s_n` (odd) of the Mathieu wave.
    pub fn norm_constant(&self) -> Result<f64> {
        let q = self.q;
        let root_q_needed = |what: &str| {
            HwmError::Domain(format!(
                "{what} carries a 1/√q factor and is undefined at q = 0; use the q -> 0 limit"
            ))
        };
        let half_pi = std::f64::consts::FRAC_PI_2;
        match (self.class.parity, self.class.odd_order) {
            (Parity::Even, false) => {
                let a0 = self.coeff(0);
                if a0 == 0.0 {
                    return Err(HwmError::Domain(format!(
                        "c_{} needs A_0 != 0, which fails at q = {q}",
                        self.order
                    )));
                }
                Ok(self.angular(0.0) * self.angular(half_pi) / a0)
            }
            (Parity::Even, true) => {
                if q == 0.0 {
                    return Err(root_q_needed("c_(2n+1)"));
                }
                Ok(-self.angular(0.0) * self.angular_derivative(half_pi)
                    / (q.sqrt() * self.coeff(1)))
            }
            (Parity::Odd, true) => {
                if q == 0.0 {
                    return Err(root_q_needed("s_(2n+1)"));
                }
                Ok(self.angular_derivative(0.0) * self.angular(half_pi)
                    / (q.sqrt() * self.coeff(1)))
            }
            (Parity::Odd, false) => {
                if q == 0.0 {
                    return Err(HwmError::Domain(
                        "s_(2n+2) carries a 1/q factor and is undefined at q = 0; use the q -> 0 limit"
                            .into(),
                    ));
                }
                Ok(
                    self.angular_derivative(0.0) * self.angular_derivative(half_pi)
                        / (q * self.coeff(2)),
                )
            }
        }
    }
}

/// `c·cosh(jξ)` without overflowing cosh when `c` is a far-tail coefficient.
fn c_cosh(c: f64, j: u32, xi: f64) -> f64 {
    let x = j as f64 * xi;
    if x < 700.0 || c == 0.0 {
        c * x.cosh()
    } else {
        c.signum() * (c.abs().ln() + x - std::f64::consts::LN_2).exp()
    }
}

fn c_sinh(c: f64, j: u32, xi: f64) -> f64 {
    let x = j as f64 * xi;
    if x < 700.0 || c == 0.0 {
        c * x.sinh()
    } else {
        c.signum() * (c.abs().ln() + x - std::f64::consts::LN_2).exp()
    }
}

/// Largest supported ξ for radial functions at parameter `q`.
pub fn radial_xi_max(q: f64) -> f64 {
    let by_q = (3.0 + (1.0 + 1.0 / q.max(1.0e-6)).ln()).min(RADIAL_XI_CAP);
    if q > 0.0 {
        let cosh_limit = RADIAL_ARGUMENT_LIMIT / q.sqrt();
        if cosh_limit <= 1.0 {
            return 0.0;
        }
        by_q.min(cosh_limit.acosh())
    } else {
        by_q
    }
}

pub fn mathieu_ce(order: u32, q: f64, eta: f64) -> Result<f64> {
    Ok(mathieu_eigen(Parity::Even, order, q)?.angular(eta))
}

pub fn mathieu_se(order: u32, q: f64, eta: f64) -> Result<f64> {
    Ok(mathieu_eigen(Parity::Odd, order, q)?.angular(eta))
}

pub fn mathieu_ce_radial(order: u32, q: f64, xi: f64) -> Result<f64> {
    mathieu_eigen(Parity::Even, order, q)?.radial(xi)
}

pub fn mathieu_se_radial(order: u32, q: f64, xi: f64) -> Result<f64> {
    mathieu_eigen(Parity::Odd, order, q)?.radial(xi)
}

pub fn mathieu_angular_derivative(parity: Parity, order: u32, q: f64, eta: f64) -> Result<f64> {
    Ok(mathieu_eigen(parity, order, q)?.angular_derivative(eta))
}

pub fn mathieu_norm_constant(parity: Parity, order: u32, q: f64) -> Result<f64> {
    mathieu_eigen(parity, order, q)?.norm_constant()
}
