//! Small dense linear algebra over [`Real`].

use super::jet::Real;

pub type Matrix<R> = Vec<Vec<R>>;

/// Inverse and determinant by Gauss–Jordan with partial pivoting on the
/// leading values. `None` when a pivot vanishes.
pub fn inverse_det<R: Real>(m: &[Vec<R>]) -> Option<(Matrix<R>, R)> {
    let n = m.len();
    let zero = m[0][0].lift(0.0);
    let one = m[0][0].lift(1.0);
    let mut a: Matrix<R> = m.to_vec();
    let mut inv: Matrix<R> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    let mut det = one.clone();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].value().abs().total_cmp(&a[j][col].value().abs()))?;
        if a[piv][col].value() == 0.0 || !a[piv][col].value().is_finite() {
            return None;
        }
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        let pinv = p.recip();
        for j in 0..n {
            a[col][j] = a[col][j].clone() * pinv.clone();
            inv[col][j] = inv[col][j].clone() * pinv.clone();
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                a[i][j] = a[i][j].clone() - f.clone() * a[col][j].clone();
                inv[i][j] = inv[i][j].clone() - f.clone() * inv[col][j].clone();
            }
        }
    }
    Some((inv, det))
}

pub fn inverse<R: Real>(m: &[Vec<R>]) -> Option<Matrix<R>> {
    inverse_det(m).map(|(i, _)| i)
}

pub fn det<R: Real>(m: &[Vec<R>]) -> Option<R> {
    inverse_det(m).map(|(_, d)| d)
}

pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Matrix<f64> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().enumerate().map(|(k, x)| x * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// max |a_ij − δ_ij|.
pub fn identity_defect(m: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            worst = worst.max((x - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

/// Cholesky succeeds iff the symmetric matrix is positive-definite.
pub fn is_positive_definite(m: &[Vec<f64>]) -> bool {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = m[i][i] - s;
                if d <= 0.0 || !d.is_finite() {
                    return false;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_small_matrix() {
        let m = vec![
            vec![0.0, 2.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![3.0, 0.0, 1.0],
        ];
        let (inv, d) = inverse_det(&m).unwrap();
        assert!((d + 5.0).abs() < 1e-14);
        assert!(identity_defect(&mat_mul(&m, &inv)) < 1e-14);
        assert!(inverse(&[vec![1.0, 2.0], vec![2.0, 4.0]]).is_none());
        assert!(is_positive_definite(&[vec![2.0, 1.0], vec![1.0, 2.0]]));
        assert!(!is_positive_definite(&[vec![1.0, 2.0], vec![2.0, 1.0]]));
    }
}
