//! Eigenvalues of dense real symmetric matrices: Householder reduction to
//! tridiagonal form followed by the implicit QL iteration.

use crate::error::{Error, Result};

/// Reduces the symmetric `n x n` row-major matrix `a` (only the lower
/// triangle is read) to tridiagonal form. Returns the diagonal and the
/// subdiagonal (`e[i]` couples `i` and `i + 1`, `e[n-1] = 0`).
pub fn tridiagonalize(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 0 {
        return (d, e);
    }
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        d[k] = a[k * n + k];
        let off = k + 1;
        let m = n - off;
        for i in 0..m {
            v[i] = a[(off + i) * n + k];
        }
        let tail: f64 = v[1..m].iter().map(|x| x * x).sum();
        if tail == 0.0 {
            e[k] = v[0];
            continue;
        }
        let norm = (v[0] * v[0] + tail).sqrt();
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        e[k] = alpha;
        v[0] -= alpha;
        let beta = 2.0 / (v[0] * v[0] + tail);

        // p = beta * A22 v from the lower triangle.
        p[..m].iter_mut().for_each(|x| *x = 0.0);
        for i in 0..m {
            let row = &a[(off + i) * n + off..(off + i) * n + off + i + 1];
            let vi = v[i];
            let mut s = 0.0;
            for j in 0..i {
                s += row[j] * v[j];
                p[j] += row[j] * vi;
            }
            p[i] += s + row[i] * vi;
        }
        p[..m].iter_mut().for_each(|x| *x *= beta);
        let pv: f64 = p[..m].iter().zip(&v[..m]).map(|(x, y)| x * y).sum();
        let kk = 0.5 * beta * pv;
        for i in 0..m {
            p[i] -= kk * v[i];
        }
        // A22 -= v w' + w v' on the lower triangle (w stored in p).
        for i in 0..m {
            let row = &mut a[(off + i) * n + off..(off + i) * n + off + i + 1];
            let (vi, wi) = (v[i], p[i]);
            for j in 0..=i {
                row[j] -= vi * p[j] + wi * v[j];
            }
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    d[n - 1] = a[(n - 1) * n + n - 1];
    (d, e)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-style shifts. Sorted ascending.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    let anorm = d.iter().zip(&e).map(|(x, y)| x.abs() + y.abs()).fold(0.0, f64::max);
    let floor = f64::EPSILON * anorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::ConvergenceFailure { residual: e[l].abs(), iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut i = m as isize - 1;
            let mut early = false;
            while i >= l as isize {
                let iu = i as usize;
                let f = s * e[iu];
                let b = c * e[iu];
                r = f.hypot(g);
                e[iu + 1] = r;
                if r == 0.0 {
                    d[iu + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[iu + 1] - p;
                r = (d[iu] - g) * s + 2.0 * c * b;
                p = s * r;
                d[iu + 1] = g + p;
                g = c * r - b;
                i -= 1;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// All eigenvalues of a dense symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let (d, e) = tridiagonalize(a, n);
    tridiagonal_eigenvalues(d, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn small_cases() {
        assert!(symmetric_eigenvalues(vec![], 0).unwrap().is_empty());
        assert_eq!(symmetric_eigenvalues(vec![3.0], 1).unwrap(), vec![3.0]);
        let ev = symmetric_eigenvalues(vec![2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!(close(&ev, &[1.0, 3.0], 1e-12));
        // Path graph on 3 vertices: 0, +-sqrt 2.
        let ev = symmetric_eigenvalues(vec![0., 1., 0., 1., 0., 1., 0., 1., 0.], 3).unwrap();
        assert!(close(&ev, &[-2f64.sqrt(), 0.0, 2f64.sqrt()], 1e-12));
    }

    #[test]
    fn cycle_graph_spectrum() {
        // C_n has eigenvalues 2 cos(2 pi k / n).
        let n = 37;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + (i + 1) % n] = 1.0;
            a[((i + 1) % n) * n + i] = 1.0;
        }
        let ev = symmetric_eigenvalues(a, n).unwrap();
        let mut want: Vec<f64> =
            (0..n).map(|k| 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()).collect();
        want.sort_by(|a, b| a.total_cmp(b));
        assert!(close(&ev, &want, 1e-10));
    }

    #[test]
    fn prescribed_spectrum_through_reflections() {
        // Q diag(lam) Q' with Q a product of random reflections.
        let n = 40;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let lam: Vec<f64> = (0..n).map(|i| (i as f64 - 17.0) * 0.75).collect();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = lam[i];
        }
        for _ in 0..4 {
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let uu: f64 = u.iter().map(|x| x * x).sum();
            // H a H with H = I - 2 u u'/u'u
            let au: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[i * n + j] * u[j]).sum()).collect();
            let uau: f64 = u.iter().zip(&au).map(|(x, y)| x * y).sum();
            for i in 0..n {
                for j in 0..n {
                    a[i * n + j] += -2.0 / uu * (u[i] * au[j] + au[i] * u[j]) + 4.0 * uau / (uu * uu) * u[i] * u[j];
                }
            }
        }
        let ev = symmetric_eigenvalues(a, n).unwrap();
        assert!(close(&ev, &lam, 1e-9));
    }

    #[test]
    fn clustered_zero_eigenvalues() {
        // Rank-one blocks give a large null space on which the shifts
        // stall unless tiny couplings are deflated absolutely.
        let (b, k) = (9, 12);
        let n = b * k;
        let mut a = vec![0.0; n * n];
        for blk in 0..k {
            for i in 0..b {
                for j in 0..b {
                    a[(blk * b + i) * n + blk * b + j] = 1.0;
                }
            }
        }
        let ev = symmetric_eigenvalues(a, n).unwrap();
        assert!(ev[..n - k].iter().all(|x| x.abs() < 1e-10));
        assert!(ev[n - k..].iter().all(|x| (x - b as f64).abs() < 1e-10));
    }

    #[test]
    fn repeated_eigenvalues() {
        // J_n (all ones) has eigenvalues n once and 0 with multiplicity n-1.
        let n = 25;
        let ev = symmetric_eigenvalues(vec![1.0; n * n], n).unwrap();
        assert!((ev[n - 1] - n as f64).abs() < 1e-10);
        assert!(ev[..n - 1].iter().all(|x| x.abs() < 1e-10));
    }
}
