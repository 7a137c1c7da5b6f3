//! Dense Hermitian eigensolver via cyclic Jacobi with complex rotations.
//!
//! Sized for the matrices this crate actually meets: reduced density
//! matrices up to 64x64 and dense test-oracle Hamiltonians up to 256x256.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and eigenvectors (columns of `vecs`, matching
/// order) of a Hermitian matrix in row-major layout.
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vecs: Vec<Complex64>,
    pub n: usize,
}

/// Max-norm deviation from Hermiticity.
pub fn hermiticity_deviation(m: &[Complex64], n: usize) -> f64 {
    let mut dev = 0.0f64;
    for r in 0..n {
        for c in r..n {
            dev = dev.max((m[r * n + c] - m[c * n + r].conj()).norm());
        }
    }
    dev
}

/// Ascending eigenvalues of a Hermitian matrix; rejects matrices whose
/// Hermiticity deviation exceeds 1e-10 relative to the largest entry.
pub fn eigenvalues_hermitian(m: &[Complex64], n: usize) -> Result<Vec<f64>> {
    Ok(eigh(m, n)?.values)
}

/// Full eigendecomposition by cyclic Jacobi sweeps.
pub fn eigh(m: &[Complex64], n: usize) -> Result<EigenDecomposition> {
    assert_eq!(m.len(), n * n, "matrix shape mismatch");
    let scale = m.iter().map(|e| e.norm()).fold(0.0f64, f64::max).max(1.0);
    let herm_dev = hermiticity_deviation(m, n);
    if herm_dev > 1e-10 * scale {
        return Err(Error::NotHermitian(herm_dev));
    }

    let mut a = m.to_vec();
    // Symmetrize roundoff so the iteration sees an exactly Hermitian matrix.
    for r in 0..n {
        a[r * n + r] = Complex64::new(a[r * n + r].re, 0.0);
        for c in (r + 1)..n {
            let avg = 0.5 * (a[r * n + c] + a[c * n + r].conj());
            a[r * n + c] = avg;
            a[c * n + r] = avg.conj();
        }
    }
    let mut v = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::ONE;
    }

    let tol = f64::EPSILON * scale;
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].norm());
            }
        }
        if off <= tol {
            return Ok(finish(a, v, n));
        }
        if sweep == MAX_SWEEPS - 1 {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q, tol);
            }
        }
    }
    unreachable!()
}

/// Zero a[p][q] with the unitary V = diag(1, conj(e)) * R(c, s), where
/// e = a_pq/|a_pq| and R is the real Jacobi rotation for the phased-out block.
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize, tol: f64) {
    let apq = a[p * n + q];
    let g = apq.norm();
    if g <= tol {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let e = apq / g;

    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column update: columns p, q of a 2x2 unitary
    // V = [[c, s], [-s*conj(e), c*conj(e)]].
    let v00 = Complex64::new(c, 0.0);
    let v01 = Complex64::new(s, 0.0);
    let v10 = -s * e.conj();
    let v11 = c * e.conj();

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * v00 + akq * v10;
        a[k * n + q] = akp * v01 + akq * v11;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = v00.conj() * apk + v10.conj() * aqk;
        a[q * n + k] = v01.conj() * apk + v11.conj() * aqk;
    }
    a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
    a[p * n + q] = Complex64::ZERO;
    a[q * n + p] = Complex64::ZERO;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * v00 + vkq * v10;
        v[k * n + q] = vkp * v01 + vkq * v11;
    }
}

fn finish(a: Vec<Complex64>, v: Vec<Complex64>, n: usize) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vecs = vec![Complex64::ZERO; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vecs[r * n + new_col] = v[r * n + old_col];
        }
    }
    EigenDecomposition { values, vecs, n }
}

impl EigenDecomposition {
    /// Reassemble `f(A) = V f(lambda) V^dag` for a complex-valued function of
    /// the (real) eigenvalues.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::ZERO; n * n];
        for (k, &lam) in self.values.iter().enumerate() {
            let flam = f(lam);
            for r in 0..n {
                let vr = self.vecs[r * n + k] * flam;
                for c in 0..n {
                    out[r * n + c] += vr * self.vecs[c * n + k].conj();
                }
            }
        }
        out
    }
}
