//! Channel statistics: spatial correlation, path loss, and pilot parameters.

use num_complex::Complex64;

use crate::geometry::SimGeometry;
use crate::linalg::{self, CMat};
use crate::{Error, Result};

/// Negative-eigenvalue tolerance for PSD repair, relative to the atom count.
/// Sinc correlation matrices are PSD in exact arithmetic; eigenvalues in
/// `[-1e-10 * N, 0)` are treated as rounding noise and clipped, anything more
/// negative is a hard error.
pub const PSD_CLIP_TOL_PER_ATOM: f64 = 1e-10;

/// Normalized sinc, `sin(pi x) / (pi x)` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Spatial correlation of an isotropic scattering field sampled by the last
/// layer's atom grid: entry `(n, n')` is `sinc(2 d / lambda)` with `d` the
/// in-plane spacing of atoms `n` and `n'`. Hermitian (real symmetric) with
/// unit diagonal by construction.
pub fn build_correlation(geom: &SimGeometry) -> CMat {
    let pts = &geom.layer_positions[geom.num_layers - 1];
    let n = pts.len();
    let mut r = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let dx = pts[i][0] - pts[j][0];
            let dz = pts[i][2] - pts[j][2];
            let d = (dx * dx + dz * dz).sqrt();
            let v = Complex64::new(sinc(2.0 * d / geom.wavelength), 0.0);
            r[(i, j)] = v;
            r[(j, i)] = v;
        }
    }
    r
}

/// Log-distance path loss `ref_gain * (distance / ref_distance)^-exponent`.
///
/// The default reference gain used by [`UserStats::from_geometry`] is the
/// free-space gain at the reference distance, `(lambda / (4 pi d0))^2`.
pub fn path_loss(distance: f64, exponent: f64, ref_distance: f64, ref_gain: f64) -> Result<f64> {
    if ref_distance <= 0.0 {
        return Err(Error::config("ref_distance", "must be positive"));
    }
    if distance < ref_distance {
        return Err(Error::config(
            "distance",
            format!("distance {distance} below reference distance {ref_distance}"),
        ));
    }
    if exponent <= 0.0 {
        return Err(Error::config("path_loss_exponent", "must be positive"));
    }
    Ok(ref_gain * (distance / ref_distance).powf(-exponent))
}

/// Free-space power gain at the reference distance.
pub fn free_space_ref_gain(wavelength: f64, ref_distance: f64) -> f64 {
    (wavelength / (4.0 * std::f64::consts::PI * ref_distance)).powi(2)
}

/// Per-user channel statistics. The estimator math consumes the scaled
/// covariance `path_loss * correlation` everywhere, so the scaled square-root
/// factor and trace are precomputed here.
#[derive(Debug, Clone)]
pub struct UserStats {
    /// Power gain `beta` of the link.
    pub path_loss: f64,
    /// Unscaled correlation matrix, unit diagonal.
    pub covariance: CMat,
    /// Hermitian square root of `path_loss * covariance`.
    pub sqrt_scaled: CMat,
    /// `trace(path_loss * covariance)`, the channel power.
    pub trace_scaled: f64,
}

impl UserStats {
    pub fn new(path_loss: f64, covariance: CMat) -> Result<Self> {
        let n = covariance.nrows();
        let scaled = &covariance * Complex64::new(path_loss, 0.0);
        let sqrt_scaled = linalg::hermitian_sqrt(&scaled, PSD_CLIP_TOL_PER_ATOM * n as f64)?;
        let trace_scaled = linalg::trace_re(&scaled);
        Ok(UserStats {
            path_loss,
            covariance,
            sqrt_scaled,
            trace_scaled,
        })
    }

    /// Scaled covariance `path_loss * correlation`.
    pub fn scaled_covariance(&self) -> CMat {
        &self.covariance * Complex64::new(self.path_loss, 0.0)
    }
}

/// Uplink training parameters.
#[derive(Debug, Clone, Copy)]
pub struct PilotParams {
    /// Pilot symbol power in watts.
    pub power: f64,
    /// Pilot sequence length in symbols (at least the user count).
    pub pilot_len: usize,
    /// Noise variance in watts.
    pub noise_var: f64,
}

impl PilotParams {
    /// Training SNR `power / noise_var`.
    pub fn training_snr(&self) -> f64 {
        self.power / self.noise_var
    }

    /// Integrated training gain `training_snr * pilot_len`, the quantity the
    /// closed forms depend on.
    pub fn training_gain(&self) -> f64 {
        self.training_snr() * self.pilot_len as f64
    }
}

/// All channel statistics the estimator design needs.
#[derive(Debug, Clone)]
pub struct ChannelStats {
    pub users: Vec<UserStats>,
    pub pilot: PilotParams,
}

impl ChannelStats {
    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.users.is_empty() {
            return Err(Error::config("users", "at least one user is required"));
        }
        if self.pilot.pilot_len < self.users.len() {
            return Err(Error::config(
                "pilot_len",
                format!(
                    "pilot length {} shorter than user count {}",
                    self.pilot.pilot_len,
                    self.users.len()
                ),
            ));
        }
        if self.pilot.power <= 0.0 || self.pilot.noise_var <= 0.0 {
            return Err(Error::config("pilot", "power and noise_var must be positive"));
        }
        for (k, u) in self.users.iter().enumerate() {
            if u.path_loss <= 0.0 {
                return Err(Error::config("path_loss", format!("user {k}: must be positive")));
            }
        }
        Ok(())
    }

    pub fn mean_path_loss(&self) -> f64 {
        self.users.iter().map(|u| u.path_loss).sum::<f64>() / self.users.len() as f64
    }
}

/// Effective training SNR `power * mean(path_loss) / noise_var`, the x-axis
/// quantity of the SNR sweeps.
pub fn effective_training_snr(stats: &ChannelStats) -> f64 {
    stats.pilot.power * stats.mean_path_loss() / stats.pilot.noise_var
}

/// Inverse of [`effective_training_snr`]: the noise variance that realizes a
/// target effective SNR with the given power and path losses.
pub fn noise_var_for_effective_snr(target_snr: f64, power: f64, mean_path_loss: f64) -> f64 {
    power * mean_path_loss / target_snr
}
