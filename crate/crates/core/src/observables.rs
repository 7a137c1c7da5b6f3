//! Reduced-state spectral analysis and the three thermalization witnesses:
//! trace distance to the maximally mixed state, entropy deficit, and the
//! charge-sector entanglement asymmetry. Entropies are in nats.

use num_complex::Complex64;

use crate::eigen::{self, hermiticity_deviation};
use crate::error::{Error, Result};
use crate::statevector::Pauli;

/// Eigenvalues at or above this (negative) floor are treated as roundoff and
/// clipped to zero; anything lower is an error.
pub const PSD_TOL: f64 = 1e-10;

/// Reduced density matrix of an l-site subsystem, row-major 2^l x 2^l.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    l: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12) and unit trace (1e-9; the trace
    /// inherits the state's norm, which drifts by rounding over long runs).
    pub fn new(l: usize, data: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << l;
        if data.len() != dim * dim {
            return Err(Error::Config(format!(
                "density matrix has {} entries, expected {}",
                data.len(),
                dim * dim
            )));
        }
        let herm = hermiticity_deviation(&data, dim);
        if herm > 1e-12 {
            return Err(Error::NotHermitian(herm));
        }
        let tr: f64 = (0..dim).map(|i| data[i * dim + i].re).sum();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("trace is {tr}, expected 1")));
        }
        Ok(Self { l, data })
    }

    /// Maximally mixed state I / 2^l.
    pub fn maximally_mixed(l: usize) -> Self {
        let dim = 1usize << l;
        let mut data = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self { l, data }
    }

    /// Diagonal density matrix from a probability vector.
    pub fn from_probabilities(l: usize, probs: &[f64]) -> Result<Self> {
        let dim = 1usize << l;
        if probs.len() != dim {
            return Err(Error::Config(format!(
                "{} probabilities for dimension {dim}",
                probs.len()
            )));
        }
        let mut data = vec![Complex64::ZERO; dim * dim];
        for (i, p) in probs.iter().enumerate() {
            data[i * dim + i] = Complex64::new(*p, 0.0);
        }
        Self::new(l, data)
    }

    pub fn subsystem_len(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        1 << self.l
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).sum()
    }

    /// Tr rho^2
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|e| e.norm_sqr()).sum()
    }
}

/// Ascending eigenvalues; rejects spectra with entries below -PSD_TOL and
/// clips small negative roundoff to zero.
pub fn eigenvalues_hermitian(dm: &DensityMatrix) -> Result<Vec<f64>> {
    let vals = eigen::eigenvalues_hermitian(dm.entries(), dm.dim())?;
    clip_spectrum(vals)
}

fn clip_spectrum(mut vals: Vec<f64>) -> Result<Vec<f64>> {
    for v in &mut vals {
        if *v < -PSD_TOL {
            return Err(Error::NotPositive(*v));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(vals)
}

/// D_A = 1/2 sum_i |lambda_i - 2^{-l}|, the trace distance to I/2^l.
pub fn trace_distance_to_mixed(dm: &DensityMatrix) -> Result<f64> {
    let target = 1.0 / dm.dim() as f64;
    let vals = eigenvalues_hermitian(dm)?;
    Ok(0.5 * vals.iter().map(|v| (v - target).abs()).sum::<f64>())
}

fn spectrum_entropy(vals: &[f64]) -> f64 {
    vals.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.ln())
        .sum()
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(dm: &DensityMatrix) -> Result<f64> {
    Ok(spectrum_entropy(&eigenvalues_hermitian(dm)?))
}

/// Delta S_A = l ln 2 - S_A, the missing entropy to the maximum.
pub fn entropy_deficit(dm: &DensityMatrix) -> Result<f64> {
    let max = dm.subsystem_len() as f64 * std::f64::consts::LN_2;
    Ok((max - von_neumann_entropy(dm)?).clamp(0.0, max))
}

/// Pinching into charge sectors of Q_A = sum_{j in A} Z_j: zero every entry
/// whose row and column bit patterns carry different Hamming weight.
pub fn dephase_charge_sectors(dm: &DensityMatrix) -> DensityMatrix {
    let dim = dm.dim();
    let mut data = dm.entries().to_vec();
    for r in 0..dim {
        for c in 0..dim {
            if r.count_ones() != c.count_ones() {
                data[r * dim + c] = Complex64::ZERO;
            }
        }
    }
    DensityMatrix {
        l: dm.subsystem_len(),
        data,
    }
}

/// Entropy of the pinched state, accumulated spectrally per charge block.
fn pinched_entropy(dm: &DensityMatrix) -> Result<f64> {
    let l = dm.subsystem_len();
    let dim = dm.dim();
    let mut total = 0.0;
    for w in 0..=l {
        let idx: Vec<usize> = (0..dim).filter(|b| b.count_ones() as usize == w).collect();
        let k = idx.len();
        let mut block = vec![Complex64::ZERO; k * k];
        for (r, &br) in idx.iter().enumerate() {
            for (c, &bc) in idx.iter().enumerate() {
                block[r * k + c] = dm.entries()[br * dim + bc];
            }
        }
        let vals = clip_spectrum(eigen::eigenvalues_hermitian(&block, k)?)?;
        total += spectrum_entropy(&vals);
    }
    Ok(total)
}

/// Delta S_{A,Q} = S(pinched rho) - S(rho). Equals the relative entropy
/// between rho and its pinching, hence nonnegative.
pub fn entanglement_asymmetry(dm: &DensityMatrix) -> Result<f64> {
    let s_pinched = pinched_entropy(dm)?;
    let s = von_neumann_entropy(dm)?;
    Ok(s_pinched - s)
}

/// Tr(rho P) for a Pauli string supported on the subsystem (subsystem-local
/// site indices 0..l).
pub fn pauli_coefficient(dm: &DensityMatrix, string: &[(usize, Pauli)]) -> Result<f64> {
    let l = dm.subsystem_len();
    let dim = dm.dim();
    let mut seen = 0usize;
    let mut flip = 0usize;
    let mut z_mask = 0usize;
    let mut y_mask = 0usize;
    for &(site, op) in string {
        if site >= l {
            return Err(Error::SiteOutOfRange {
                site,
                n_sites: l,
            });
        }
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
    // Tr(rho P) = sum_b rho[b ^ flip][b] * coeff(b), P|b> = coeff(b)|b ^ flip>
    let mut acc = Complex64::ZERO;
    for b in 0..dim {
        let sign_z = if (b & z_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let y_ones = (b & y_mask).count_ones() as usize;
        let phase = match n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        } * if y_ones.is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += dm.entries()[(b ^ flip) * dim + b] * phase * sign_z;
    }
    Ok(acc.re)
}

/// One row of a witness time series.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSample {
    pub step: usize,
    pub t: f64,
    pub trace_distance: f64,
    pub entropy_deficit: f64,
    pub asymmetry: f64,
    pub q_mean: f64,
    pub q2_mean: f64,
    pub norm_err: f64,
}

/// Compute the three witnesses of one reduced state.
pub fn witnesses(dm: &DensityMatrix) -> Result<(f64, f64, f64)> {
    let vals = eigenvalues_hermitian(dm)?;
    let target = 1.0 / dm.dim() as f64;
    let d = 0.5 * vals.iter().map(|v| (v - target).abs()).sum::<f64>();
    let max = dm.subsystem_len() as f64 * std::f64::consts::LN_2;
    let s = spectrum_entropy(&vals);
    let deficit = (max - s).clamp(0.0, max);
    let asym = pinched_entropy(dm)? - s;
    Ok((d, deficit, asym))
}
