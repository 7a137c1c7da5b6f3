//! The two one-parameter families of product initial states, both tuned so
//! the conserved quantity vanishes and the chain relaxes toward infinite
//! temperature.

use crate::error::{Error, Result};
use crate::models::MfiParams;
use crate::statevector::BlochAngles;

/// Default stagger-amplitude grid for sweeps.
pub const FLOQUET_A_GRID: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

/// Default tilt-angle grid for sweeps. Covers the theta = pi/2, theta < pi/2
/// and theta > pi/2 regimes; angles below ~0.3 pi admit no energy-zeroing
/// phase and are excluded.
pub fn mfi_theta_grid() -> [f64; 4] {
    use std::f64::consts::PI;
    [3.0 * PI / 8.0, PI / 2.0, 5.0 * PI / 8.0, 3.0 * PI / 4.0]
}

/// Staggered-magnetization family for the Floquet model: phi_i = 0 and
/// cos(theta_i) = (-1)^i a, so <Z_i> = (-1)^i a and <Q> = 0 exactly.
pub fn floquet_initial(n_sites: usize, a: f64) -> Result<BlochAngles> {
    if n_sites < 2 || !n_sites.is_multiple_of(2) {
        return Err(Error::BadChainLength(n_sites));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::StaggerOutOfRange(a));
    }
    let thetas = (0..n_sites)
        .map(|i| {
            let z = if i % 2 == 0 { a } else { -a };
            z.acos()
        })
        .collect();
    BlochAngles::new(thetas, vec![0.0; n_sites])
}

/// Argument of the arccos picking the phase that zeroes the MFI energy:
/// cos(phi) = (-h_z - cos(theta)) * cot(theta) / h_x (with J = 1 absorbed).
pub fn mfi_phase_argument(theta: f64, p: &MfiParams) -> f64 {
    (-p.h_z - theta.cos()) * theta.cos() / (theta.sin() * p.h_x)
}

/// Uniform tilted family for the MFI model: all sites carry (theta, phi)
/// with phi chosen so the energy density vanishes.
pub fn mfi_initial(n_sites: usize, theta: f64, p: &MfiParams) -> Result<BlochAngles> {
    if n_sites < 2 || !n_sites.is_multiple_of(2) {
        return Err(Error::BadChainLength(n_sites));
    }
    if theta <= 0.0 || theta >= std::f64::consts::PI {
        return Err(Error::ThetaSingular(theta));
    }
    let arg = mfi_phase_argument(theta, p);
    if !(-1.0..=1.0).contains(&arg) {
        return Err(Error::NoZeroEnergyPhase(arg));
    }
    // principal branch: phi in [0, pi]; the energy depends only on cos(phi)
    let phi = arg.acos();
    BlochAngles::new(vec![theta; n_sites], vec![phi; n_sites])
}
