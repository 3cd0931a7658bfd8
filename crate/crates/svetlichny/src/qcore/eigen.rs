//! Hermitian eigenvalue computation: Householder tridiagonalization followed
//! by implicit-shift QL. Dimensions here stay small (at most 2^12), so a
//! straightforward dense reduction is plenty.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qcore::matrix::ComplexMatrix;

const HERMITIAN_TOL: f64 = 1e-12;

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn eigenvalues_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let dev = if m.is_square() {
        m.hermitian_deviation()
    } else {
        f64::INFINITY
    };
    if dev > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation: dev });
    }
    let n = m.rows();
    let mut vals = match n {
        1 => vec![m.get(0, 0).re],
        2 => {
            let (lo, hi) = eig2(m);
            vec![lo, hi]
        }
        _ => {
            let (mut d, mut e) = tridiagonalize(m);
            ql_implicit(&mut d, &mut e)?;
            d
        }
    };
    vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(vals)
}

/// Smallest eigenvalue of a Hermitian matrix. The 2×2 case uses the closed
/// form `tr/2 − sqrt((tr/2)² − det)`.
pub fn min_eigenvalue_hermitian(m: &ComplexMatrix) -> Result<f64> {
    if m.is_square() && m.rows() == 2 {
        let dev = m.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation: dev });
        }
        return Ok(eig2(m).0);
    }
    Ok(eigenvalues_hermitian(m)?[0])
}

/// Closed-form eigenvalues of a 2×2 Hermitian matrix, (min, max).
fn eig2(m: &ComplexMatrix) -> (f64, f64) {
    let half_tr = 0.5 * (m.get(0, 0).re + m.get(1, 1).re);
    let det = m.get(0, 0).re * m.get(1, 1).re - m.get(0, 1).norm_sqr();
    let disc = (half_tr * half_tr - det).max(0.0).sqrt();
    (half_tr - disc, half_tr + disc)
}

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form. The complex off-diagonals produced by the reflectors are replaced by
/// their moduli, a unitary diagonal similarity that preserves eigenvalues.
#[allow(clippy::needless_range_loop)] // index arithmetic mirrors the reflector algebra
fn tridiagonalize(m: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.rows();
    let mut a: Vec<C64> = m.entries().to_vec();
    let at = |a: &[C64], i: usize, j: usize| a[i * n + j];

    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut w = vec![C64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        let norm_x: f64 = (k + 1..n)
            .map(|i| at(&a, i, k).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = at(&a, k + 1, k);
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * norm_x;

        // reflector v = x − α e₁ over indices k+1..n
        for i in k + 1..n {
            v[i] = at(&a, i, k);
        }
        v[k + 1] -= alpha;
        let norm_v_sq: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if norm_v_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / norm_v_sq;

        // w = βAv − (β²/2)(v†Av) v on the trailing block
        let mut vt_p = C64::new(0.0, 0.0);
        for i in k + 1..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in k + 1..n {
                acc += at(&a, i, j) * v[j];
            }
            w[i] = acc * beta;
            vt_p += v[i].conj() * w[i];
        }
        let kappa = 0.5 * vt_p.re * beta;
        for i in k + 1..n {
            w[i] -= v[i].scale(kappa);
        }

        // A ← A − w v† − v w† on the trailing block
        for i in k + 1..n {
            for j in k + 1..n {
                let delta = w[i] * v[j].conj() + v[i] * w[j].conj();
                a[i * n + j] -= delta;
            }
        }
        // border column/row collapse to the single subdiagonal entry α
        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha.conj();
        for i in k + 2..n {
            a[i * n + k] = C64::new(0.0, 0.0);
            a[k * n + i] = C64::new(0.0, 0.0);
        }
    }

    let d: Vec<f64> = (0..n).map(|i| at(&a, i, i).re).collect();
    let mut e: Vec<f64> = (0..n - 1).map(|i| at(&a, i + 1, i).norm()).collect();
    e.push(0.0);
    (d, e)
}

/// Implicit-shift QL iteration for a real symmetric tridiagonal matrix;
/// eigenvalues land in `d`.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::InvalidDensityMatrix {
                    reason: "eigenvalue iteration failed to converge".into(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
