//! Downlink SNR under maximum-ratio (conjugate) precoding.
//!
//! Two independent evaluations are provided:
//!
//! - [`matrix_snr_db`] builds the full channel vector `[h_1 … h_M]` from the
//!   element-level weights and steering phasors and uses `‖h‖²`.
//! - [`closed_form_snr_db`] collapses the array to `M·G·|A|²/N`, where `A` is
//!   the elevation beam kernel evaluated with the sine-ratio formula.
//!
//! With per-port weight normalisation and zero azimuth the two agree exactly.

use num_complex::Complex;
use serde::Serialize;

use crate::array_model::ArrayConfig;
use crate::error::Result;
use crate::link_channel::{channel_vector, free_space_gain, linear_gain, wavelength_m, LinkGeometry, RadioConfig};
use crate::scalar::{from_count, linear_to_db, lit, null_ratio, Real};

/// SNR values below this are reported as a null.
pub const SNR_FLOOR_DB: f64 = -400.0;

/// `|sin(a/2)|` below which the sine ratio is replaced by its limit.
const DEGENERATE_SIN: f64 = 1e-12;
/// `|sin(Na/2)|` below which the ratio's limit is used near `a = 2πk`.
const DEGENERATE_SIN_N: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrQuery<T> {
    pub array: ArrayConfig<T>,
    pub geometry: LinkGeometry<T>,
    pub radio: RadioConfig<T>,
    /// Steer the downtilt onto the UAV's vertical angle.
    pub tracking: bool,
}

impl<T: Real> SnrQuery<T> {
    pub fn validate(&self) -> Result<()> {
        self.array.validate()?;
        self.geometry.validate()?;
        self.radio.validate()
    }

    /// Downtilt actually applied for a UAV at vertical angle `theta_deg`.
    pub fn effective_tilt_deg(&self, theta_deg: T) -> T {
        if self.tracking {
            theta_deg
        } else {
            self.array.downtilt_deg
        }
    }
}

/// One evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrSample<T> {
    pub ports: usize,
    pub elements: usize,
    pub range_m: T,
    pub height_m: T,
    pub carrier_hz: T,
    pub theta_deg: T,
    pub tilt_deg: T,
    pub tracking: bool,
    /// `None` at an array null or below [`SNR_FLOOR_DB`].
    pub snr_db: Option<T>,
    /// `|A|`, within `[0, N]`.
    pub kernel_magnitude: T,
}

/// Phase increment `a = 2π (d_v/λ)(cos θ − cos θ_tilt)` between successive
/// elements of a port.
pub fn phase_increment<T: Real>(theta_deg: T, tilt_deg: T, dv_over_lambda: T) -> T {
    T::TAU() * dv_over_lambda * (theta_deg.to_radians().cos() - tilt_deg.to_radians().cos())
}

/// Elevation beam kernel `A = Σ_{k=1..N} exp(i(k−1)a)`.
pub fn beam_kernel<T: Real>(theta_deg: T, tilt_deg: T, n: usize, dv_over_lambda: T) -> Complex<T> {
    if theta_deg == tilt_deg {
        return Complex::new(from_count(n), T::zero());
    }
    kernel_from_increment(phase_increment(theta_deg, tilt_deg, dv_over_lambda), n)
}

/// `sin(N·x)` with `N·x` carried to double-word precision before the sine.
///
/// Without the correction the rounding of `N·x` alone dominates the error of
/// the sine ratio whenever `sin(x)` is small.
fn sin_scaled<T: Real>(n: T, x: T) -> T {
    let p = n * x;
    let err = n.mul_add(x, -p);
    let (s, c) = p.sin_cos();
    s + err * c
}

/// Beam kernel as a function of the phase increment `a`:
/// `sin(Na/2)/sin(a/2) · exp(i a (N−1)/2)`, or `N` when all phasors align.
pub fn kernel_from_increment<T: Real>(a: T, n: usize) -> Complex<T> {
    let nf: T = from_count(n);
    if a == T::zero() || n == 1 {
        return Complex::new(nf, T::zero());
    }
    let half = a * lit(0.5);
    let den = half.sin();
    let num = sin_scaled(nf, half);
    let phase = Complex::cis(half * (nf - T::one()));

    if den.abs() < lit(DEGENERATE_SIN) {
        if num.abs() < lit(DEGENERATE_SIN_N) {
            let limit = nf * (nf * half).cos() / half.cos();
            return phase * limit;
        }
        return direct_kernel(a, n);
    }
    phase * (num / den)
}

fn direct_kernel<T: Real>(a: T, n: usize) -> Complex<T> {
    (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
        acc + Complex::cis(from_count::<T>(k) * a)
    })
}

/// Link-budget terms common to both SNR routes, in dB:
/// `P_t − σ² + 10log10(F) + G_m`.
fn budget_db<T: Real>(q: &SnrQuery<T>) -> Result<T> {
    let lambda = wavelength_m(&q.radio)?;
    let f = free_space_gain(q.geometry.range_m, lambda)?;
    Ok(q.radio.tx_power_dbm - q.radio.noise_power_dbm() + linear_to_db(f) + q.array.max_element_gain_dbi)
}

fn floor_null<T: Real>(snr_db: T) -> Option<T> {
    (snr_db >= lit(SNR_FLOOR_DB)).then_some(snr_db)
}

/// Evaluates the closed form and returns the full sample.
pub fn evaluate<T: Real>(q: &SnrQuery<T>) -> Result<SnrSample<T>> {
    q.validate()?;
    let theta = q.geometry.vertical_angle_deg()?;
    let tilt = q.effective_tilt_deg(theta);
    let n = q.array.num_elements;
    let nf: T = from_count(n);

    let kernel = beam_kernel(theta, tilt, n, q.array.dv_over_lambda).norm();
    let snr_db = if kernel <= null_ratio::<T>() * nf {
        None
    } else {
        let g = linear_gain(theta, q.geometry.azimuth_deg, &q.array)?;
        let m: T = from_count(q.array.num_ports);
        floor_null(budget_db(q)? + linear_to_db(m * g * kernel * kernel / nf))
    };

    Ok(SnrSample {
        ports: q.array.num_ports,
        elements: n,
        range_m: q.geometry.range_m,
        height_m: q.geometry.height_m,
        carrier_hz: q.radio.carrier_hz,
        theta_deg: theta,
        tilt_deg: tilt,
        tracking: q.tracking,
        snr_db,
        kernel_magnitude: kernel.min(nf),
    })
}

/// Closed-form SNR in dB; `None` at a kernel null.
pub fn closed_form_snr_db<T: Real>(q: &SnrQuery<T>) -> Result<Option<T>> {
    Ok(evaluate(q)?.snr_db)
}

/// SNR from the explicit channel vector, `P_t F 10^(G_m/10) ‖h‖² / σ²`.
pub fn matrix_snr_db<T: Real>(q: &SnrQuery<T>) -> Result<Option<T>> {
    q.validate()?;
    let theta = q.geometry.vertical_angle_deg()?;
    let array = q.array.with_downtilt(q.effective_tilt_deg(theta));
    let h = channel_vector(theta, q.geometry.azimuth_deg, &array)?;

    let g = linear_gain(theta, q.geometry.azimuth_deg, &array)?;
    let coherent = g.sqrt() * array.weight_scale() * from_count(array.num_elements);
    let peak = h.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if peak <= null_ratio::<T>() * coherent {
        return Ok(None);
    }
    let norm_sqr = h.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
    Ok(floor_null(budget_db(q)? + linear_to_db(norm_sqr)))
}
