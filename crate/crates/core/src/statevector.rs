//! Pure-state representation and in-place gate kernels for periodic
//! spin-1/2 chains.
//!
//! Conventions: site `i` maps to bit `i` of the computational index, bit
//! value 0 is the Z = +1 state `|0>`. All kernels act in place; the only
//! full-vector scratch in the crate lives in the dense test oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::observables::DensityMatrix;
use crate::parallel;

/// Single-site Pauli operator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Per-site Bloch sphere angles (theta, phi) of a product state.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochAngles {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
}

impl BlochAngles {
    pub fn new(thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if thetas.len() != phis.len() {
            return Err(Error::AngleLength {
                got: phis.len(),
                expected: thetas.len(),
            });
        }
        Ok(Self { thetas, phis })
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }
}

/// Full statevector of an N-site periodic chain, 2^N complex amplitudes.
#[derive(Debug, Clone)]
pub struct QuantumState {
    n_sites: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// Product state with per-site amplitudes
    /// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn new_product_state(angles: &BlochAngles) -> Result<Self> {
        let n = angles.len();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::BadChainLength(n));
        }
        let cos_half: Vec<f64> = angles.thetas.iter().map(|t| (t / 2.0).cos()).collect();
        let sin_amp: Vec<Complex64> = angles
            .thetas
            .iter()
            .zip(&angles.phis)
            .map(|(t, p)| Complex64::from_polar((t / 2.0).sin(), *p))
            .collect();
        let dim = 1usize << n;
        let amps = parallel::map_indexed(dim, |b| {
            let mut a = Complex64::new(1.0, 0.0);
            for i in 0..n {
                if (b >> i) & 1 == 0 {
                    a *= cos_half[i];
                } else {
                    a *= sin_amp[i];
                }
            }
            a
        });
        Ok(Self { n_sites: n, amps })
    }

    /// Basis state |b> for tests and oracles.
    pub fn basis_state(n_sites: usize, b: usize) -> Result<Self> {
        if n_sites < 2 || !n_sites.is_multiple_of(2) {
            return Err(Error::BadChainLength(n_sites));
        }
        let mut amps = vec![Complex64::ZERO; 1 << n_sites];
        amps[b] = Complex64::ONE;
        Ok(Self { n_sites, amps })
    }

    /// Wrap raw amplitudes (normalized by the caller).
    pub fn from_amplitudes(n_sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_sites < 2 || !n_sites.is_multiple_of(2) {
            return Err(Error::BadChainLength(n_sites));
        }
        if amps.len() != 1 << n_sites {
            return Err(Error::Config(format!(
                "amplitude vector has length {}, expected {}",
                amps.len(),
                1usize << n_sites
            )));
        }
        Ok(Self { n_sites, amps })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        parallel::sum_chunked(self.amps.len(), |i| self.amps[i].norm_sqr())
    }

    /// |<psi|psi> - 1|
    pub fn norm_error(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    fn check_site(&self, i: usize) -> Result<()> {
        if i >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site: i,
                n_sites: self.n_sites,
            });
        }
        Ok(())
    }

    /// e^{+i angle Z_i Z_j}: multiplies each amplitude by
    /// `exp(i angle z_i z_j)` with z read off the bits. Diagonal, so the
    /// modulus of every amplitude is untouched exactly.
    pub fn apply_zz_phase(&mut self, i: usize, j: usize, angle: f64) -> Result<()> {
        self.check_site(i)?;
        self.check_site(j)?;
        if i == j {
            return Err(Error::DuplicateSite(i));
        }
        let plus = Complex64::from_polar(1.0, angle);
        let minus = Complex64::from_polar(1.0, -angle);
        let mi = 1usize << i;
        let mj = 1usize << j;
        parallel::for_each_mut(&mut self.amps, |b, a| {
            let same = ((b & mi) == 0) == ((b & mj) == 0);
            *a *= if same { plus } else { minus };
        });
        Ok(())
    }

    /// e^{+i angle * sum_bonds Z_k Z_{k+d}} over all periodic bonds at
    /// distance `d` in one pass, using popcount of `b XOR rot(b, d)`.
    pub fn apply_zz_layer(&mut self, d: usize, angle: f64) -> Result<()> {
        let n = self.n_sites;
        if d == 0 || d >= n {
            return Err(Error::SiteOutOfRange { site: d, n_sites: n });
        }
        let mask = (1usize << n) - 1;
        // sum_k z_k z_{k+d} = n - 2 * popcount(b ^ rot_right(b, d))
        let table: Vec<Complex64> = (0..=n)
            .map(|c| Complex64::from_polar(1.0, angle * (n as f64 - 2.0 * c as f64)))
            .collect();
        parallel::for_each_mut(&mut self.amps, |b, a| {
            let rot = ((b >> d) | (b << (n - d))) & mask;
            *a *= table[(b ^ rot).count_ones() as usize];
        });
        Ok(())
    }

    /// e^{+i beta (X_i X_j + Y_i Y_j)}: mixes the |01>/|10> amplitude pair at
    /// sites (i, j) by [[cos 2b, i sin 2b], [i sin 2b, cos 2b]]; |00> and
    /// |11> are untouched, so Hamming weight is conserved.
    pub fn apply_hopping(&mut self, i: usize, j: usize, beta: f64) -> Result<()> {
        self.check_site(i)?;
        self.check_site(j)?;
        if i == j {
            return Err(Error::DuplicateSite(i));
        }
        let (p1, p2) = if i < j { (i, j) } else { (j, i) };
        let c = Complex64::new((2.0 * beta).cos(), 0.0);
        let s = Complex64::new(0.0, (2.0 * beta).sin());
        let m_lo = 1usize << p1;
        let m_hi = 1usize << p2;
        let low_mask = m_lo - 1;
        let mid_bits = p2 - p1 - 1;
        let mid_mask = (1usize << mid_bits) - 1;
        let n_rest = self.amps.len() >> 2;
        let amps = parallel::SharedSlice::new(&mut self.amps);
        parallel::for_each_index(n_rest, |r| {
            let low = r & low_mask;
            let mid = (r >> p1) & mid_mask;
            let high = r >> (p1 + mid_bits);
            let b00 = low | (mid << (p1 + 1)) | (high << (p2 + 1));
            let b01 = b00 | m_lo;
            let b10 = b00 | m_hi;
            // Safety: each r addresses a distinct (b01, b10) pair.
            unsafe {
                let a01 = *amps.get(b01);
                let a10 = *amps.get(b10);
                *amps.get(b01) = c * a01 + s * a10;
                *amps.get(b10) = s * a01 + c * a10;
            }
        });
        Ok(())
    }

    /// Apply a 2x2 unitary to site `i`. Rejects matrices with
    /// `||u^dag u - I||_max > 1e-12`.
    pub fn apply_single_qubit(&mut self, i: usize, u: &[[Complex64; 2]; 2]) -> Result<()> {
        self.check_site(i)?;
        let dev = unitarity_deviation(u);
        if dev > 1e-12 {
            return Err(Error::NotUnitary(dev));
        }
        let m = 1usize << i;
        let low_mask = m - 1;
        let n_pairs = self.amps.len() >> 1;
        let (u00, u01, u10, u11) = (u[0][0], u[0][1], u[1][0], u[1][1]);
        let amps = parallel::SharedSlice::new(&mut self.amps);
        parallel::for_each_index(n_pairs, |r| {
            let b0 = (r & low_mask) | ((r >> i) << (i + 1));
            let b1 = b0 | m;
            // Safety: distinct r -> distinct (b0, b1) pair.
            unsafe {
                let a0 = *amps.get(b0);
                let a1 = *amps.get(b1);
                *amps.get(b0) = u00 * a0 + u01 * a1;
                *amps.get(b1) = u10 * a0 + u11 * a1;
            }
        });
        Ok(())
    }

    /// <psi| P |psi> for a Pauli string given as (site, operator) pairs.
    pub fn expect_pauli(&self, string: &[(usize, Pauli)]) -> Result<f64> {
        if string.is_empty() {
            return Err(Error::Config("empty Pauli string".into()));
        }
        let mut seen = 0usize;
        let mut flip = 0usize;
        let mut z_mask = 0usize;
        let mut y_mask = 0usize;
        for &(site, op) in string {
            self.check_site(site)?;
            let m = 1usize << site;
            if seen & m != 0 {
                return Err(Error::DuplicateSite(site));
            }
            seen |= m;
            match op {
                Pauli::X => flip |= m,
                Pauli::Y => {
                    flip |= m;
                    y_mask |= m;
                }
                Pauli::Z => z_mask |= m,
            }
        }
        let n_y = y_mask.count_ones() as usize;
        let amps = &self.amps;
        // P|b> = coeff(b) |b ^ flip>; coeff collects Z signs and Y phases:
        // Y|0> = i|1>, Y|1> = -i|0>.
        let val = parallel::sum_chunked(amps.len(), |b| {
            let sign_z = 1 - 2 * ((b & z_mask).count_ones() as i32 & 1);
            let y_ones = (b & y_mask).count_ones() as usize;
            // i^{n_y} * (-1)^{y_ones}
            let phase = match n_y % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            } * if y_ones.is_multiple_of(2) { 1.0 } else { -1.0 };
            (amps[b ^ flip].conj() * phase * amps[b]).re * sign_z as f64
        });
        Ok(val)
    }

    /// Expectation of a sum of Pauli strings.
    pub fn expect_pauli_sum(&self, strings: &[Vec<(usize, Pauli)>]) -> Result<f64> {
        let mut total = 0.0;
        for s in strings {
            total += self.expect_pauli(s)?;
        }
        Ok(total)
    }

    /// Reduced density matrix of the contiguous window
    /// `start..start+l-1 (mod N)`.
    pub fn reduced_density_matrix(&self, start: usize, l: usize) -> Result<DensityMatrix> {
        let n = self.n_sites;
        let max_l = 6.min(n - 1);
        if l < 1 || l > max_l {
            return Err(Error::BadSubsystemLength {
                l,
                max: max_l,
                n_sites: n,
            });
        }
        self.check_site(start)?;
        let sub_sites: Vec<usize> = (0..l).map(|k| (start + k) % n).collect();
        let mut in_sub = vec![false; n];
        for &s in &sub_sites {
            in_sub[s] = true;
        }
        let env_sites: Vec<usize> = (0..n).filter(|&s| !in_sub[s]).collect();
        let n_env = 1usize << env_sites.len();
        let dim = 1usize << l;

        // Scatter each env pattern into its bit positions once.
        let env_base: Vec<usize> = (0..n_env)
            .map(|e| {
                let mut b = 0usize;
                for (m, &pos) in env_sites.iter().enumerate() {
                    b |= ((e >> m) & 1) << pos;
                }
                b
            })
            .collect();
        let sub_base: Vec<usize> = (0..dim)
            .map(|a| {
                let mut b = 0usize;
                for (k, &pos) in sub_sites.iter().enumerate() {
                    b |= ((a >> k) & 1) << pos;
                }
                b
            })
            .collect();

        let amps = &self.amps;
        // rho[a][b] = sum_env psi[a + env] conj(psi[b + env]); each entry is a
        // fixed-order sum, so the result is thread-count independent.
        let rows = parallel::map_indexed(dim, |a| {
            let mut row = vec![Complex64::ZERO; dim];
            for (b, entry) in row.iter_mut().enumerate().skip(a) {
                let mut acc = Complex64::ZERO;
                for base in &env_base {
                    acc += amps[sub_base[a] | base] * amps[sub_base[b] | base].conj();
                }
                *entry = acc;
            }
            row
        });
        let mut data = vec![Complex64::ZERO; dim * dim];
        for (a, row) in rows.iter().enumerate() {
            for b in a..dim {
                data[a * dim + b] = row[b];
                if b != a {
                    data[b * dim + a] = row[b].conj();
                }
            }
        }
        DensityMatrix::new(l, data)
    }

    /// Probability of each Hamming-weight (charge) sector, w = 0..=N.
    pub fn sector_probabilities(&self) -> Vec<f64> {
        let amps = &self.amps;
        parallel::sum_bins_chunked(amps.len(), self.n_sites + 1, |b, acc| {
            acc[b.count_ones() as usize] += amps[b].norm_sqr();
        })
    }
}

/// Max-norm deviation of u^dag u from the identity.
pub fn unitarity_deviation(u: &[[Complex64; 2]; 2]) -> f64 {
    let mut dev = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            let mut e = Complex64::ZERO;
            for k in 0..2 {
                e += u[k][r].conj() * u[k][c];
            }
            let target = if r == c { Complex64::ONE } else { Complex64::ZERO };
            dev = dev.max((e - target).norm());
        }
    }
    dev
}
