//! Line-of-sight link: geometry, angular gain, free-space path gain and the
//! per-port channel coefficients.

use num_complex::Complex;
use serde::Serialize;

use crate::array_model::{check_phi, check_theta, ArrayConfig};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::SPEED_OF_LIGHT;

/// Position of the UAV relative to the centre of the array.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkGeometry<T> {
    /// Slant distance `d` from array centre to UAV, metres.
    pub range_m: T,
    /// Height `h` of the UAV above the array, metres.
    pub height_m: T,
    /// Azimuth relative to array boresight, degrees.
    pub azimuth_deg: T,
}

impl<T: Real> LinkGeometry<T> {
    pub fn new(range_m: T, height_m: T) -> Self {
        Self {
            range_m,
            height_m,
            azimuth_deg: T::zero(),
        }
    }

    pub fn with_range(&self, range_m: T) -> Self {
        Self {
            range_m,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.range_m > T::zero() && self.range_m.is_finite()) {
            return Err(Error::invalid(format!(
                "range must be positive, got {} m",
                self.range_m
            )));
        }
        if !(self.height_m >= T::zero()) {
            return Err(Error::invalid(format!(
                "height must be non-negative, got {} m",
                self.height_m
            )));
        }
        if self.height_m > self.range_m {
            return Err(Error::invalid(format!(
                "height {} m exceeds range {} m: UAV geometrically unreachable",
                self.height_m, self.range_m
            )));
        }
        check_phi(self.azimuth_deg)
    }

    /// Zenith-referenced angle `acos(h/d)` in degrees, within `[0, 90]`.
    pub fn vertical_angle_deg(&self) -> Result<T> {
        self.validate()?;
        Ok((self.height_m / self.range_m).acos().to_degrees())
    }
}

/// How the receiver noise power is specified.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSpec<T> {
    /// Total noise power in dBm.
    Explicit { noise_power_dbm: T },
    /// Thermal floor `-174 dBm/Hz` over `bandwidth_hz` plus a noise figure.
    Thermal { bandwidth_hz: T, noise_figure_db: T },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadioConfig<T> {
    pub tx_power_dbm: T,
    pub carrier_hz: T,
    pub noise: NoiseSpec<T>,
}

impl<T: Real> Default for RadioConfig<T> {
    /// 30 dBm at 2 GHz against a -95 dBm noise floor (10 MHz, 9 dB NF).
    fn default() -> Self {
        Self {
            tx_power_dbm: lit(30.0),
            carrier_hz: lit(2.0e9),
            noise: NoiseSpec::Explicit {
                noise_power_dbm: lit(-95.0),
            },
        }
    }
}

impl<T: Real> RadioConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::invalid("transmit power must be finite"));
        }
        if !(self.carrier_hz > T::zero() && self.carrier_hz.is_finite()) {
            return Err(Error::invalid(format!(
                "carrier frequency must be positive, got {} Hz",
                self.carrier_hz
            )));
        }
        match &self.noise {
            NoiseSpec::Explicit { noise_power_dbm } if !noise_power_dbm.is_finite() => {
                Err(Error::invalid("noise power must be finite"))
            }
            NoiseSpec::Thermal { bandwidth_hz, noise_figure_db }
                if !(*bandwidth_hz > T::zero() && bandwidth_hz.is_finite()) || !noise_figure_db.is_finite() =>
            {
                Err(Error::invalid(format!(
                    "bandwidth must be positive and noise figure finite, got {bandwidth_hz} Hz / {noise_figure_db} dB"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Total noise power `σ²` in dBm.
    pub fn noise_power_dbm(&self) -> T {
        match &self.noise {
            NoiseSpec::Explicit { noise_power_dbm } => *noise_power_dbm,
            NoiseSpec::Thermal {
                bandwidth_hz,
                noise_figure_db,
            } => lit::<T>(-174.0) + lit::<T>(10.0) * bandwidth_hz.log10() + *noise_figure_db,
        }
    }
}

pub fn wavelength_m<T: Real>(radio: &RadioConfig<T>) -> Result<T> {
    if !(radio.carrier_hz > T::zero()) {
        return Err(Error::invalid(format!(
            "carrier frequency must be positive, got {} Hz",
            radio.carrier_hz
        )));
    }
    Ok(lit::<T>(SPEED_OF_LIGHT) / radio.carrier_hz)
}

/// Uncapped angular attenuation in linear scale,
/// `10^(-1.2((φ/φ3dB)² + ((θ-90)/θ3dB)²))`.
pub fn linear_gain<T: Real>(theta_deg: T, phi_deg: T, cfg: &ArrayConfig<T>) -> Result<T> {
    check_theta(theta_deg)?;
    check_phi(phi_deg)?;
    let h = phi_deg / cfg.phi_3db_deg;
    let v = (theta_deg - lit(90.0)) / cfg.theta_3db_deg;
    Ok(lit::<T>(10.0).powf(lit::<T>(-1.2) * (h * h + v * v)))
}

/// Free-space path gain `(λ/(4πd))²`.
pub fn free_space_gain<T: Real>(range_m: T, lambda_m: T) -> Result<T> {
    if !(range_m > T::zero()) || !(lambda_m > T::zero()) {
        return Err(Error::invalid(format!(
            "free-space gain needs positive range and wavelength, got d={range_m}, λ={lambda_m}"
        )));
    }
    let x = lambda_m / (lit::<T>(4.0) * T::PI() * range_m);
    Ok(x * x)
}

/// Channel coefficient `h_c = √G · w_cᵀ v_c` of port `c`.
pub fn channel_coefficient<T: Real>(
    c: usize,
    theta_deg: T,
    phi_deg: T,
    cfg: &ArrayConfig<T>,
) -> Result<Complex<T>> {
    let g = linear_gain(theta_deg, phi_deg, cfg)?;
    Ok(cfg.port_array_factor(c, theta_deg, phi_deg)? * g.sqrt())
}

/// `[h_1 … h_M]`.
pub fn channel_vector<T: Real>(theta_deg: T, phi_deg: T, cfg: &ArrayConfig<T>) -> Result<Vec<Complex<T>>> {
    (1..=cfg.num_ports)
        .map(|c| channel_coefficient(c, theta_deg, phi_deg, cfg))
        .collect()
}
