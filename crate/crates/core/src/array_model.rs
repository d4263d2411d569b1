//! 3GPP-style antenna element pattern and the per-port array factor of an
//! `M x N` planar array.
//!
//! Each of the `M` columns (antenna ports) holds `N` vertically stacked
//! elements driven with the same signal. Angles are in degrees everywhere in
//! the public surface; radians only appear inside the phase terms.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_count, lit, null_ratio, Real};

/// Normalisation constant applied to every weight entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightNorm {
    /// `1/sqrt(N)`: each port carries unit power. Closed-form SNR assumes this.
    #[default]
    PerPort,
    /// `1/sqrt(N*M)`: the whole array carries unit power.
    FullArray,
}

impl std::str::FromStr for WeightNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-port" => Ok(WeightNorm::PerPort),
            "full-array" => Ok(WeightNorm::FullArray),
            other => Err(Error::invalid(format!(
                "unknown weight normalisation '{other}' (expected per-port or full-array)"
            ))),
        }
    }
}

impl std::fmt::Display for WeightNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WeightNorm::PerPort => "per-port",
            WeightNorm::FullArray => "full-array",
        })
    }
}

/// Geometry and pattern parameters of the planar array.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrayConfig<T> {
    /// Number of antenna ports `M` (columns).
    pub num_ports: usize,
    /// Active elements per port `N` (rows).
    pub num_elements: usize,
    /// Vertical element spacing in wavelengths.
    pub dv_over_lambda: T,
    /// Horizontal port spacing in wavelengths.
    pub dh_over_lambda: T,
    /// Maximum element gain, dBi.
    pub max_element_gain_dbi: T,
    /// Elevation half-power beamwidth, degrees.
    pub theta_3db_deg: T,
    /// Azimuth half-power beamwidth, degrees.
    pub phi_3db_deg: T,
    /// Cap on the combined element attenuation, dB.
    pub max_attenuation_db: T,
    /// Cap on the vertical pattern attenuation (side-lobe level), dB.
    pub sidelobe_attenuation_db: T,
    /// Electrical downtilt, degrees from zenith (90 = horizon).
    pub downtilt_deg: T,
    /// Horizontal steering angle, degrees.
    pub scan_deg: T,
    pub weight_norm: WeightNorm,
}

impl<T: Real> Default for ArrayConfig<T> {
    fn default() -> Self {
        Self {
            num_ports: 1,
            num_elements: 8,
            dv_over_lambda: lit(0.5),
            dh_over_lambda: lit(0.5),
            max_element_gain_dbi: lit(8.0),
            theta_3db_deg: lit(65.0),
            phi_3db_deg: lit(65.0),
            max_attenuation_db: lit(30.0),
            sidelobe_attenuation_db: lit(30.0),
            downtilt_deg: lit(90.0),
            scan_deg: T::zero(),
            weight_norm: WeightNorm::PerPort,
        }
    }
}

pub(crate) fn check_theta<T: Real>(theta_deg: T) -> Result<()> {
    if theta_deg >= T::zero() && theta_deg <= lit(180.0) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "vertical angle {theta_deg} deg outside [0, 180]"
        )))
    }
}

pub(crate) fn check_phi<T: Real>(phi_deg: T) -> Result<()> {
    if phi_deg >= lit(-180.0) && phi_deg <= lit(180.0) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "azimuth angle {phi_deg} deg outside [-180, 180]"
        )))
    }
}

fn positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

impl<T: Real> ArrayConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.num_ports == 0 {
            return Err(Error::invalid("num_ports must be at least 1"));
        }
        if self.num_elements == 0 {
            return Err(Error::invalid("num_elements must be at least 1"));
        }
        positive("dv_over_lambda", self.dv_over_lambda)?;
        positive("dh_over_lambda", self.dh_over_lambda)?;
        positive("theta_3db_deg", self.theta_3db_deg)?;
        positive("phi_3db_deg", self.phi_3db_deg)?;
        positive("max_attenuation_db", self.max_attenuation_db)?;
        positive("sidelobe_attenuation_db", self.sidelobe_attenuation_db)?;
        if !self.max_element_gain_dbi.is_finite() {
            return Err(Error::invalid("max_element_gain_dbi must be finite"));
        }
        if !(self.downtilt_deg > T::zero() && self.downtilt_deg < lit(180.0)) {
            return Err(Error::invalid(format!(
                "downtilt {} deg outside (0, 180)",
                self.downtilt_deg
            )));
        }
        check_phi(self.scan_deg)?;
        Ok(())
    }

    /// Copy of this configuration steered to another downtilt.
    ///
    /// No validation: tracking may legitimately steer to 0 deg (UAV overhead).
    pub fn with_downtilt(&self, downtilt_deg: T) -> Self {
        Self {
            downtilt_deg,
            ..self.clone()
        }
    }

    pub fn with_ports(&self, num_ports: usize) -> Self {
        Self {
            num_ports,
            ..self.clone()
        }
    }

    /// Magnitude `κ` of every weight entry.
    pub fn weight_scale(&self) -> T {
        let n: T = from_count(self.num_elements);
        match self.weight_norm {
            WeightNorm::PerPort => n.sqrt().recip(),
            WeightNorm::FullArray => (n * from_count(self.num_ports)).sqrt().recip(),
        }
    }

    /// Vertical pattern `-min(12((θ-90)/θ3dB)², SLA)` in dB.
    pub fn vertical_attenuation(&self, theta_deg: T) -> Result<T> {
        check_theta(theta_deg)?;
        let x = (theta_deg - lit(90.0)) / self.theta_3db_deg;
        Ok(-(lit::<T>(12.0) * x * x).min(self.sidelobe_attenuation_db))
    }

    /// Horizontal pattern `-min(12(φ/φ3dB)², Am)` in dB.
    pub fn horizontal_attenuation(&self, phi_deg: T) -> Result<T> {
        check_phi(phi_deg)?;
        let x = phi_deg / self.phi_3db_deg;
        Ok(-(lit::<T>(12.0) * x * x).min(self.max_attenuation_db))
    }

    /// Element gain in dBi; always within `[G_m - A_m, G_m]`.
    pub fn element_pattern_db(&self, theta_deg: T, phi_deg: T) -> Result<T> {
        let total = self.vertical_attenuation(theta_deg)? + self.horizontal_attenuation(phi_deg)?;
        Ok(self.max_element_gain_dbi - (-total).min(self.max_attenuation_db))
    }

    fn check_index(&self, r: usize, c: usize) -> Result<()> {
        if !(1..=self.num_elements).contains(&r) {
            return Err(Error::invalid(format!(
                "element index {r} outside 1..={}",
                self.num_elements
            )));
        }
        if !(1..=self.num_ports).contains(&c) {
            return Err(Error::invalid(format!(
                "port index {c} outside 1..={}",
                self.num_ports
            )));
        }
        Ok(())
    }

    /// Phase (in cycles) of the element at row `r`, column `c` for a plane
    /// wave arriving from `(θ, φ)`.
    fn phase_cycles(&self, r: usize, c: usize, theta_deg: T, phi_deg: T) -> T {
        let (sin_t, cos_t) = theta_deg.to_radians().sin_cos();
        let sin_p = phi_deg.to_radians().sin();
        let col: T = from_count(c - 1);
        let row: T = from_count(r - 1);
        col * self.dh_over_lambda * sin_p * sin_t + row * self.dv_over_lambda * cos_t
    }

    /// Array response of element `(r, c)`; a unit-magnitude phasor.
    pub fn steering_entry(&self, r: usize, c: usize, theta_deg: T, phi_deg: T) -> Result<Complex<T>> {
        self.check_index(r, c)?;
        check_theta(theta_deg)?;
        check_phi(phi_deg)?;
        let phase = T::TAU() * self.phase_cycles(r, c, theta_deg, phi_deg);
        Ok(Complex::cis(phase))
    }

    /// Beamforming weight of element `(r, c)`, conjugate-matched to
    /// `(downtilt, scan)` and scaled by [`Self::weight_scale`].
    pub fn weight_entry(&self, r: usize, c: usize) -> Result<Complex<T>> {
        self.check_index(r, c)?;
        let phase = -T::TAU() * self.phase_cycles(r, c, self.downtilt_deg, self.scan_deg);
        Ok(Complex::from_polar(self.weight_scale(), phase))
    }

    /// Column sum of the Hadamard product of weights and steering entries for
    /// port `c`.
    pub fn port_array_factor(&self, c: usize, theta_deg: T, phi_deg: T) -> Result<Complex<T>> {
        self.check_index(1, c)?;
        check_theta(theta_deg)?;
        check_phi(phi_deg)?;
        let mut sum = Complex::new(T::zero(), T::zero());
        for r in 1..=self.num_elements {
            sum = sum + self.weight_entry(r, c)? * self.steering_entry(r, c, theta_deg, phi_deg)?;
        }
        Ok(sum)
    }

    /// `20·log10|A_F|` of port 1, or `None` at an exact array null.
    pub fn array_factor_db(&self, theta_deg: T, phi_deg: T) -> Result<Option<T>> {
        let mag = self.port_array_factor(1, theta_deg, phi_deg)?.norm();
        let coherent = self.weight_scale() * from_count(self.num_elements);
        if mag <= null_ratio::<T>() * coherent {
            Ok(None)
        } else {
            Ok(Some(lit::<T>(20.0) * mag.log10()))
        }
    }

    /// Composite port pattern: element gain plus array factor, in dB.
    /// `None` marks an array null.
    pub fn port_pattern_db(&self, theta_deg: T, phi_deg: T) -> Result<Option<T>> {
        let element = self.element_pattern_db(theta_deg, phi_deg)?;
        Ok(self.array_factor_db(theta_deg, phi_deg)?.map(|af| element + af))
    }

    /// Full −3 dB width (degrees) of the array-factor main lobe at `φ = 0`,
    /// centred on the downtilt. `None` if a lobe edge runs off `[0, 180]`.
    pub fn array_factor_beamwidth_deg(&self) -> Result<Option<T>> {
        let tilt = self.downtilt_deg;
        check_theta(tilt)?;
        let peak = self.port_array_factor(1, tilt, T::zero())?.norm_sqr();
        let half = peak * lit(0.5);
        let power = |theta: T| -> Result<T> { Ok(self.port_array_factor(1, theta, T::zero())?.norm_sqr()) };

        let step: T = lit(0.01);
        let mut edges = [T::zero(); 2];
        for (edge, dir) in edges.iter_mut().zip([-T::one(), T::one()]) {
            let mut inside = tilt;
            let crossing = loop {
                let next = inside + dir * step;
                if next < T::zero() || next > lit(180.0) {
                    return Ok(None);
                }
                if power(next)? < half {
                    break next;
                }
                inside = next;
            };
            let (mut lo, mut hi) = (inside, crossing);
            for _ in 0..60 {
                let mid = (lo + hi) * lit(0.5);
                if power(mid)? >= half {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            *edge = (lo + hi) * lit(0.5);
        }
        Ok(Some((edges[1] - edges[0]).abs()))
    }
}
