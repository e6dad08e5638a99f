//! Bessel functions of the first kind for integer order.
//!
//! All orders and arguments go through Miller's backward recurrence,
//! normalized with the Neumann identity `J_0 + 2 Σ J_2k = 1`. The recurrence
//! runs downward from an index well above both the order and the argument,
//! which keeps the computed sequence on the minimal solution.

use crate::error::{HwmError, Result};

pub const MAX_ORDER: i32 = 200;
pub const MAX_ARGUMENT: f64 = 1.0e4;

const RESCALE_ABOVE: f64 = 1.0e250;
const RESCALE_BY: f64 = 1.0e-250;

/// `J_n(x)` for `|n| ≤ 200`, `|x| ≤ 1e4`.
pub fn bessel_j(n: i32, x: f64) -> Result<f64> {
    if n.abs() > MAX_ORDER {
        return Err(HwmError::range("Bessel order", n as f64, "|n| <= 200"));
    }
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(HwmError::range("Bessel argument", x, "|x| <= 1e4"));
    }
    let order = n.unsigned_abs();
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x).
    let flips = (n < 0) as u32 + (x < 0.0) as u32;
    let sign = if order % 2 == 1 && flips == 1 {
        -1.0
    } else {
        1.0
    };
    Ok(sign * bessel_j_nonneg(order, x.abs()))
}

/// `J_n` for every order `0..=max_order` at one argument, from a single
/// recurrence sweep.
pub fn bessel_j_all(max_order: u32, x: f64) -> Result<Vec<f64>> {
    if max_order > MAX_ORDER as u32 {
        return Err(HwmError::range(
            "Bessel order",
            max_order as f64,
            "|n| <= 200",
        ));
    }
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(HwmError::range("Bessel argument", x, "|x| <= 1e4"));
    }
    let ax = x.abs();
    let mut out = miller_sweep(max_order, ax);
    if x < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
    Ok(out)
}

fn bessel_j_nonneg(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    if x < 1.0e-6 {
        return small_argument(order, x);
    }
    miller_sweep(order, x)[order as usize]
}

/// Two-term series, exact to rounding for x below 1e-6.
fn small_argument(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=order {
        lead *= half / k as f64;
        if lead == 0.0 {
            return 0.0;
        }
    }
    lead * (1.0 - half * half / (order as f64 + 1.0))
}

/// Values `J_0..=J_max_order` at `x > 0` by normalized backward recurrence.
fn miller_sweep(max_order: u32, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; max_order as usize + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let reach = (max_order as f64).max(x);
    let start = {
        let s = (reach + (160.0 * reach).sqrt()).ceil() as u32 + 30;
        s + (s % 2)
    };

    let two_over_x = 2.0 / x;
    let mut above = 0.0_f64; // J_{k+1}
    let mut current = 1.0e-300_f64; // J_k
    let mut even_sum = 0.0_f64; // Σ J_{2j}, j ≥ 1
    for k in (1..=start).rev() {
        if (k as usize) <= max_order as usize {
            out[k as usize] = current;
        }
        if k % 2 == 0 {
            even_sum += current;
        }
        let below = k as f64 * two_over_x * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            even_sum *= RESCALE_BY;
            for v in out.iter_mut() {
                *v *= RESCALE_BY;
            }
        }
    }
    out[0] = current;
    let norm = current + 2.0 * even_sum;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
