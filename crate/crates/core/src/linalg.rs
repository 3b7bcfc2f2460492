//! Small dense linear algebra.
use alloc::vec::Vec;

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

/// Solves `a x = b` in place (row-major `n x n`), Gaussian elimination with
/// partial pivoting. Returns `None` for a numerically singular matrix.
pub fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Option<()> {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col].abs() <= 1e-14 * scale {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f != 0.0 {
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for c in col + 1..n {
            s -= a[col * n + c] * b[c];
        }
        b[col] = s / a[col * n + col];
    }
    Some(())
}

/// Least-squares fit `min |M c - y|` through the normal equations; `rows`
/// holds the design matrix row by row.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let p = rows.first()?.len();
    let mut ata = alloc::vec![0.0; p * p];
    let mut aty = alloc::vec![0.0; p];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..p {
            aty[i] += row[i] * yi;
            for j in 0..p {
                ata[i * p + j] += row[i] * row[j];
            }
        }
    }
    solve_dense(&mut ata, &mut aty, p)?;
    Some(aty)
}

/// Conjugate gradients for a symmetric positive semi-definite operator.
pub fn conjugate_gradient<F: FnMut(&[f64], &mut [f64])>(
    mut apply: F,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Vec<f64> {
    let n = b.len();
    let mut x = alloc::vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = alloc::vec![0.0; n];
    let mut rr: f64 = r.iter().map(|v| v * v).sum();
    let target = tol * tol * b.iter().map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    for _ in 0..max_iter {
        if rr <= target {
            break;
        }
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            break;
        }
        let step = rr / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let rr_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    x
}
