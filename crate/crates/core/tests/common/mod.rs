//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use hwm::specfun::Parity;

/// Cyclic Jacobi eigen-decomposition of a dense symmetric matrix. Returns
/// eigenvalues in ascending order with their eigenvectors.
pub fn jacobi(mut a: Vec<Vec<f64>>) -> Vec<(f64, Vec<f64>)> {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let th = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let t = if th == 0.0 {
                    1.0
                } else {
                    th.signum() / (th.abs() + (th * th + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                let (row_p, row_q) = (a[p].clone(), a[q].clone());
                for (k, (pk, qk)) in row_p.into_iter().zip(row_q).enumerate() {
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|j| (a[j][j], (0..n).map(|i| v[i][j]).collect()))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs
}

/// Characteristic value and Fourier coefficients (dense by harmonic, sign
/// arbitrary) of `ce_n` or `se_n` from the symmetrized three-term
/// recurrence on `dim` harmonics.
pub fn mathieu_oracle(parity: Parity, n: u32, q: f64, dim: usize) -> (f64, Vec<f64>) {
    let odd_harmonics = n % 2 == 1;
    let first = match (parity, odd_harmonics) {
        (Parity::Odd, false) => 2,
        (_, true) => 1,
        (Parity::Even, false) => 0,
    };
    let harmonic = |m: usize| first + 2 * m;
    let mut mat = vec![vec![0.0; dim]; dim];
    for m in 0..dim {
        mat[m][m] = (harmonic(m) as f64).powi(2);
        if m + 1 < dim {
            let off = if first == 0 && m == 0 {
                std::f64::consts::SQRT_2 * q
            } else {
                q
            };
            mat[m][m + 1] = off;
            mat[m + 1][m] = off;
        }
    }
    if first == 1 {
        mat[0][0] += if parity == Parity::Even { q } else { -q };
    }
    let index = ((n - first as u32) / 2) as usize;
    let (value, v) = jacobi(mat).swap_remove(index);
    let mut coeffs = vec![0.0; harmonic(dim - 1) + 1];
    for (m, x) in v.iter().enumerate() {
        coeffs[harmonic(m)] = if first == 0 && m == 0 {
            x / std::f64::consts::SQRT_2
        } else {
            *x
        };
    }
    (value, coeffs)
}

/// Printed one-sided OAM sum: weight `j/2` on `|coeff_j|²`.
pub fn one_sided_mean(coeffs: &[f64]) -> f64 {
    let num: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(j, a)| 0.5 * j as f64 * a * a)
        .sum();
    let den: f64 = coeffs.iter().map(|a| a * a).sum();
    num / den
}
