//! One-period Floquet stepper, one-Trotter-step MFI stepper, conserved
//! quantity measurement, and the dense-exponential oracle used by tests.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};
use crate::parallel;
use crate::statevector::{Pauli, QuantumState};

/// Kicked-chain parameters; the defaults are the chaotic working point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for FloquetParams {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            beta: 0.25,
            gamma: 1.0,
        }
    }
}

/// Mixed-field Ising parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfiParams {
    pub j: f64,
    pub h_x: f64,
    pub h_z: f64,
    pub dt: f64,
}

impl Default for MfiParams {
    fn default() -> Self {
        Self {
            j: 1.0,
            h_x: (5.0 + 5f64.sqrt()) / 8.0,
            h_z: (1.0 + 5f64.sqrt()) / 4.0,
            dt: 0.05,
        }
    }
}

impl MfiParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        Ok(())
    }
}

/// One Floquet period: zz kick (distance 1, angle alpha), hopping on odd
/// bonds, hopping on even bonds, then the next-nearest zz kick (angle gamma).
pub fn floquet_step(state: &mut QuantumState, p: &FloquetParams) -> Result<()> {
    let n = state.n_sites();
    state.apply_zz_layer(1, p.alpha)?;
    let mut i = 1;
    while i < n {
        state.apply_hopping(i, (i + 1) % n, p.beta)?;
        i += 2;
    }
    let mut i = 0;
    while i < n {
        state.apply_hopping(i, i + 1, p.beta)?;
        i += 2;
    }
    if n > 2 {
        state.apply_zz_layer(2, p.gamma)?;
    }
    Ok(())
}

/// Half-step field rotation exp(-i dt/2 (h_x X + h_z Z)) as a 2x2 unitary.
pub fn field_half_step(p: &MfiParams) -> [[Complex64; 2]; 2] {
    let h = (p.h_x * p.h_x + p.h_z * p.h_z).sqrt();
    let phi = h * p.dt / 2.0;
    if h == 0.0 {
        return [
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, Complex64::ONE],
        ];
    }
    let c = Complex64::new(phi.cos(), 0.0);
    let s = phi.sin() / h;
    // cos(phi) I - i sin(phi) (h_x X + h_z Z)/h
    [
        [c - Complex64::new(0.0, s * p.h_z), Complex64::new(0.0, -s * p.h_x)],
        [Complex64::new(0.0, -s * p.h_x), c + Complex64::new(0.0, s * p.h_z)],
    ]
}

/// One symmetric Trotter step exp(-iH_f dt/2) exp(-iH_zz dt) exp(-iH_f dt/2).
pub fn mfi_trotter_step(state: &mut QuantumState, p: &MfiParams) -> Result<()> {
    p.validate()?;
    let n = state.n_sites();
    let u = field_half_step(p);
    for i in 0..n {
        state.apply_single_qubit(i, &u)?;
    }
    // exp(-i J dt sum Z Z) is a zz layer with angle -J dt
    state.apply_zz_layer(1, -p.j * p.dt)?;
    for i in 0..n {
        state.apply_single_qubit(i, &u)?;
    }
    Ok(())
}

/// <H_MFI> = sum_i [J <Z_i Z_{i+1}> + h_x <X_i> + h_z <Z_i>].
pub fn mfi_energy(state: &QuantumState, p: &MfiParams) -> Result<f64> {
    let n = state.n_sites();
    let mask = (1usize << n) - 1;
    let amps = state.amplitudes();
    // diagonal part in one pass via popcounts
    let diag = parallel::sum_chunked(amps.len(), |b| {
        let w = amps[b].norm_sqr();
        let rot = ((b >> 1) | (b << (n - 1))) & mask;
        let zz = n as f64 - 2.0 * (b ^ rot).count_ones() as f64;
        let z = n as f64 - 2.0 * b.count_ones() as f64;
        w * (p.j * zz + p.h_z * z)
    });
    let mut e = diag;
    for i in 0..n {
        e += p.h_x * state.expect_pauli(&[(i, Pauli::X)])?;
    }
    Ok(e)
}

/// H_MFI |psi> into a fresh vector; used for <H> / <H^2> cross-checks.
pub fn apply_mfi_hamiltonian(state: &QuantumState, p: &MfiParams) -> Vec<Complex64> {
    let n = state.n_sites();
    let mask = (1usize << n) - 1;
    let amps = state.amplitudes();
    parallel::map_indexed(amps.len(), |b| {
        let rot = ((b >> 1) | (b << (n - 1))) & mask;
        let zz = n as f64 - 2.0 * (b ^ rot).count_ones() as f64;
        let z = n as f64 - 2.0 * b.count_ones() as f64;
        let mut out = amps[b] * (p.j * zz + p.h_z * z);
        for i in 0..n {
            out += p.h_x * amps[b ^ (1usize << i)];
        }
        out
    })
}

/// (<Q>, <Q^2>) for Q = sum_i Z_i, from charge-sector probabilities.
pub fn total_magnetization(state: &QuantumState) -> (f64, f64) {
    let n = state.n_sites() as f64;
    let probs = state.sector_probabilities();
    let mut q = 0.0;
    let mut q2 = 0.0;
    for (w, p) in probs.iter().enumerate() {
        let charge = n - 2.0 * w as f64;
        q += p * charge;
        q2 += p * charge * charge;
    }
    (q, q2)
}

/// Which model a dense oracle step should reproduce.
#[derive(Debug, Clone, Copy)]
pub enum StepModel {
    Floquet(FloquetParams),
    Mfi(MfiParams),
}

/// Accumulate `coeff * P` into a dense matrix for a Pauli string P.
pub fn add_pauli_term(h: &mut [Complex64], n: usize, string: &[(usize, Pauli)], coeff: f64) {
    let dim = 1usize << n;
    let mut flip = 0usize;
    let mut z_mask = 0usize;
    let mut y_mask = 0usize;
    for &(site, op) in string {
        let m = 1usize << site;
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
        h[(b ^ flip) * dim + b] += coeff * sign_z * phase;
    }
}

/// Dense H_MFI.
pub fn dense_mfi_hamiltonian(n: usize, p: &MfiParams) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut h = vec![Complex64::ZERO; dim * dim];
    for i in 0..n {
        add_pauli_term(&mut h, n, &[(i, Pauli::Z), ((i + 1) % n, Pauli::Z)], p.j);
        add_pauli_term(&mut h, n, &[(i, Pauli::X)], p.h_x);
        add_pauli_term(&mut h, n, &[(i, Pauli::Z)], p.h_z);
    }
    h
}

/// exp(-i factor H) for dense Hermitian H, via eigendecomposition.
pub fn expm_hermitian(h: &[Complex64], dim: usize, factor: f64) -> Result<Vec<Complex64>> {
    let eig = eigen::eigh(h, dim)?;
    Ok(eig.apply_function(|lam| Complex64::from_polar(1.0, -factor * lam)))
}

pub fn matvec(m: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let dim = v.len();
    (0..dim)
        .map(|r| {
            let mut acc = Complex64::ZERO;
            for c in 0..dim {
                acc += m[r * dim + c] * v[c];
            }
            acc
        })
        .collect()
}

/// Apply one exact step by building the full 2^N x 2^N unitary from layer
/// (Floquet) or Hamiltonian (MFI) exponentials. Test oracle, N <= 8 only.
pub fn dense_step_oracle(state: &QuantumState, model: &StepModel) -> Result<QuantumState> {
    let n = state.n_sites();
    if n > 8 {
        return Err(Error::OracleTooLarge(n));
    }
    let dim = 1usize << n;
    match model {
        StepModel::Floquet(p) => {
            // layer Hamiltonians, exponentiated independently of the kernels
            let mut h_alpha = vec![Complex64::ZERO; dim * dim];
            let mut h_odd = vec![Complex64::ZERO; dim * dim];
            let mut h_even = vec![Complex64::ZERO; dim * dim];
            let mut h_gamma = vec![Complex64::ZERO; dim * dim];
            for i in 0..n {
                add_pauli_term(
                    &mut h_alpha,
                    n,
                    &[(i, Pauli::Z), ((i + 1) % n, Pauli::Z)],
                    -p.alpha,
                );
                add_pauli_term(
                    &mut h_gamma,
                    n,
                    &[(i, Pauli::Z), ((i + 2) % n, Pauli::Z)],
                    -p.gamma,
                );
                let target = if i % 2 == 1 { &mut h_odd } else { &mut h_even };
                add_pauli_term(target, n, &[(i, Pauli::X), ((i + 1) % n, Pauli::X)], -p.beta);
                add_pauli_term(target, n, &[(i, Pauli::Y), ((i + 1) % n, Pauli::Y)], -p.beta);
            }
            let mut v = state.amplitudes().to_vec();
            for h in [&h_alpha, &h_odd, &h_even, &h_gamma] {
                let u = expm_hermitian(h, dim, 1.0)?;
                v = matvec(&u, &v);
            }
            QuantumState::from_amplitudes(n, v)
        }
        StepModel::Mfi(p) => {
            let h = dense_mfi_hamiltonian(n, p);
            let u = expm_hermitian(&h, dim, p.dt)?;
            QuantumState::from_amplitudes(n, matvec(&u, state.amplitudes()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_states;
    use crate::statevector::BlochAngles;
    use approx::assert_abs_diff_eq;

    fn random_state(n: usize, seed: u64) -> QuantumState {
        let dim = 1usize << n;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|i| {
                Complex64::new(
                    crate::rng::gaussian(seed, 20, i as u64, 0),
                    crate::rng::gaussian(seed, 21, i as u64, 0),
                )
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        QuantumState::from_amplitudes(n, amps).unwrap()
    }

    #[test]
    fn zero_parameters_are_identity() {
        let mut st = random_state(4, 1);
        let before = st.amplitudes().to_vec();
        let p = FloquetParams {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
        };
        floquet_step(&mut st, &p).unwrap();
        for (a, b) in st.amplitudes().iter().zip(&before) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn polarized_state_is_fixed_up_to_phase() {
        let mut st = QuantumState::basis_state(6, 0).unwrap();
        floquet_step(&mut st, &FloquetParams::default()).unwrap();
        assert_abs_diff_eq!(st.amplitudes()[0].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn floquet_conserves_charge_sectors() {
        let angles = initial_states::floquet_initial(8, 0.4).unwrap();
        let mut st = QuantumState::new_product_state(&angles).unwrap();
        let before = st.sector_probabilities();
        let p = FloquetParams::default();
        for _ in 0..50 {
            floquet_step(&mut st, &p).unwrap();
        }
        let after = st.sector_probabilities();
        for (a, b) in before.iter().zip(&after) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        assert!(st.norm_error() < 1e-12);
    }

    #[test]
    fn mfi_energy_fixed_points() {
        let n = 6;
        let p = MfiParams::default();
        let st = QuantumState::basis_state(n, 0).unwrap();
        assert_abs_diff_eq!(
            mfi_energy(&st, &p).unwrap(),
            n as f64 * (p.j + p.h_z),
            epsilon = 1e-12
        );
        let plus = BlochAngles::new(vec![std::f64::consts::FRAC_PI_2; n], vec![0.0; n]).unwrap();
        let st = QuantumState::new_product_state(&plus).unwrap();
        assert_abs_diff_eq!(
            mfi_energy(&st, &p).unwrap(),
            n as f64 * p.h_x,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mfi_energy_matches_hamiltonian_apply() {
        let p = MfiParams::default();
        let st = random_state(6, 9);
        let hv = apply_mfi_hamiltonian(&st, &p);
        let e_inner: f64 = st
            .amplitudes()
            .iter()
            .zip(&hv)
            .map(|(a, h)| (a.conj() * h).re)
            .sum();
        assert_abs_diff_eq!(mfi_energy(&st, &p).unwrap(), e_inner, epsilon = 1e-11);
    }

    #[test]
    fn magnetization_moments() {
        let n = 6;
        let plus = BlochAngles::new(vec![std::f64::consts::FRAC_PI_2; n], vec![0.0; n]).unwrap();
        let st = QuantumState::new_product_state(&plus).unwrap();
        let (q, q2) = total_magnetization(&st);
        assert_abs_diff_eq!(q, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(q2, n as f64, epsilon = 1e-12);

        let st = QuantumState::basis_state(n, 0).unwrap();
        let (q, q2) = total_magnetization(&st);
        assert_abs_diff_eq!(q, n as f64, epsilon = 1e-13);
        assert_abs_diff_eq!(q2, (n * n) as f64, epsilon = 1e-12);
    }

    #[test]
    fn trotter_step_dt_zero_rejected() {
        let mut st = random_state(4, 2);
        let p = MfiParams {
            dt: 0.0,
            ..MfiParams::default()
        };
        assert!(mfi_trotter_step(&mut st, &p).is_err());
    }

    #[test]
    fn oracle_rejects_large_n() {
        let st = QuantumState::basis_state(10, 0).unwrap();
        assert!(matches!(
            dense_step_oracle(&st, &StepModel::Floquet(FloquetParams::default())),
            Err(Error::OracleTooLarge(_))
        ));
    }

    #[test]
    fn floquet_step_matches_dense_oracle() {
        let p = FloquetParams::default();
        for seed in 0..5 {
            let st = random_state(6, 100 + seed);
            let oracle = dense_step_oracle(&st, &StepModel::Floquet(p)).unwrap();
            let mut stepped = st.clone();
            floquet_step(&mut stepped, &p).unwrap();
            let max_dev = stepped
                .amplitudes()
                .iter()
                .zip(oracle.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(max_dev < 1e-10, "seed {seed}: deviation {max_dev}");
        }
    }

    #[test]
    fn trotter_error_is_second_order() {
        // error at fixed total time drops ~4x when dt halves
        let n = 4;
        let t_total = 1.0;
        let st0 = random_state(n, 77);
        let mut errs = Vec::new();
        for dt in [0.05, 0.025] {
            let p = MfiParams {
                dt,
                ..MfiParams::default()
            };
            let steps = (t_total / dt).round() as usize;
            let mut st = st0.clone();
            for _ in 0..steps {
                mfi_trotter_step(&mut st, &p).unwrap();
            }
            // exact evolution to t_total in one dense exponential
            let exact = dense_step_oracle(
                &st0,
                &StepModel::Mfi(MfiParams {
                    dt: t_total,
                    ..MfiParams::default()
                }),
            )
            .unwrap();
            let max_dev = st
                .amplitudes()
                .iter()
                .zip(exact.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            errs.push(max_dev);
        }
        let ratio = errs[0] / errs[1];
        assert!(
            (3.5..=4.5).contains(&ratio),
            "errors {errs:?}, ratio {ratio}"
        );
    }
}
