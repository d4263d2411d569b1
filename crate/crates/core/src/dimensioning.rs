//! Inverting the SNR model: how many antenna ports reach a target SNR at a
//! given range, and how far a given array reaches.

use serde::Serialize;

use crate::array_model::ArrayConfig;
use crate::error::{Error, Result};
use crate::link_channel::{free_space_gain, linear_gain, wavelength_m, LinkGeometry, RadioConfig};
use crate::scalar::{db_to_linear, from_count, lit, null_ratio, Real};
use crate::snr_engine::{beam_kernel, closed_form_snr_db, SnrQuery};

/// An SNR within this many dB below the target still counts as meeting it.
///
/// The ceiling of the inverted formula and a scan of the forward model have
/// to agree even when the port count is an exact integer solution.
pub const TARGET_SLACK_DB: f64 = 1e-9;

/// Largest port count the brute-force scan will try by default.
pub const DEFAULT_PORT_CAP: u64 = 1 << 16;

/// Beyond this the pre-ceiling port count is not treated as a usable answer.
const MAX_REPRESENTABLE_PORTS: f64 = 1e15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensioningQuery<T> {
    pub target_snr_db: T,
    pub geometry: LinkGeometry<T>,
    pub radio: RadioConfig<T>,
    /// `num_ports` is ignored: it is the unknown.
    pub array: ArrayConfig<T>,
    pub tracking: bool,
}

impl<T: Real> DimensioningQuery<T> {
    fn snr_query(&self, ports: usize) -> SnrQuery<T> {
        SnrQuery {
            array: self.array.with_ports(ports),
            geometry: self.geometry.clone(),
            radio: self.radio.clone(),
            tracking: self.tracking,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.target_snr_db.is_finite() {
            return Err(Error::invalid("target SNR must be finite"));
        }
        self.snr_query(1).validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensioningResult<T> {
    /// `None` when no port count reaches the target.
    pub min_ports: Option<u64>,
    pub achieved_snr_db: Option<T>,
    pub note: String,
}

impl<T> DimensioningResult<T> {
    pub fn feasible(&self) -> bool {
        self.min_ports.is_some()
    }

    fn infeasible(note: impl Into<String>) -> Self {
        Self {
            min_ports: None,
            achieved_snr_db: None,
            note: note.into(),
        }
    }
}

pub fn meets_target<T: Real>(snr_db: Option<T>, target_db: T) -> bool {
    snr_db.is_some_and(|s| s >= target_db - lit(TARGET_SLACK_DB))
}

/// Real-valued port count solving `SNR(M) = target` exactly, before the
/// ceiling. `None` when the elevation kernel is null at this geometry.
///
/// Tracking: `γ σ² (4πd)² / (N P_t λ² 10^(G_m/10) G)`.
/// Fixed tilt: `γ σ² (4πd)² N sin²(a/2) / (P_t λ² 10^(G_m/10) G sin²(Na/2))`,
/// which is the same expression with `N²` replaced by `|A|²`.
pub fn pre_ceiling_ports<T: Real>(q: &DimensioningQuery<T>) -> Result<Option<T>> {
    q.validate()?;
    let theta = q.geometry.vertical_angle_deg()?;
    let n = q.array.num_elements;
    let nf: T = from_count(n);
    let kernel_sqr = if q.tracking {
        nf * nf
    } else {
        let k = beam_kernel(theta, q.array.downtilt_deg, n, q.array.dv_over_lambda).norm();
        if k <= null_ratio::<T>() * nf {
            return Ok(None);
        }
        k * k
    };

    let lambda = wavelength_m(&q.radio)?;
    let path = free_space_gain(q.geometry.range_m, lambda)?;
    let g = linear_gain(theta, q.geometry.azimuth_deg, &q.array)?;
    let gamma = db_to_linear(q.target_snr_db);
    let noise = db_to_linear(q.radio.noise_power_dbm());
    let tx = db_to_linear(q.radio.tx_power_dbm);
    let gm = db_to_linear(q.array.max_element_gain_dbi);
    Ok(Some(gamma * noise * nf / (tx * path * gm * g * kernel_sqr)))
}

/// Minimum port count from the inverted closed form.
pub fn antennas_required<T: Real>(q: &DimensioningQuery<T>) -> Result<DimensioningResult<T>> {
    let Some(x) = pre_ceiling_ports(q)? else {
        return Ok(DimensioningResult::infeasible("array null at this geometry"));
    };
    let x = x * db_to_linear(-lit::<T>(TARGET_SLACK_DB));
    let ports = x.ceil().max(T::one());
    let Some(ports) = ports.to_f64().filter(|p| p.is_finite() && *p <= MAX_REPRESENTABLE_PORTS) else {
        return Ok(DimensioningResult::infeasible(format!(
            "required port count {x} is not representable"
        )));
    };
    let ports = ports as u64;
    let achieved = closed_form_snr_db(&q.snr_query(ports as usize))?;
    Ok(DimensioningResult {
        min_ports: Some(ports),
        achieved_snr_db: achieved,
        note: String::new(),
    })
}

/// Brute-force counterpart of [`antennas_required`]: scans `M = 1..=m_cap`
/// through the forward model.
pub fn min_antennas_oracle<T: Real>(q: &DimensioningQuery<T>, m_cap: u64) -> Result<DimensioningResult<T>> {
    q.validate()?;
    for m in 1..=m_cap {
        let snr = closed_form_snr_db(&q.snr_query(m as usize))?;
        if snr.is_none() {
            return Ok(DimensioningResult::infeasible("array null at this geometry"));
        }
        if meets_target(snr, q.target_snr_db) {
            return Ok(DimensioningResult {
                min_ports: Some(m),
                achieved_snr_db: snr,
                note: String::new(),
            });
        }
    }
    Ok(DimensioningResult::infeasible(format!("target not reached within {m_cap} ports")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeStatus {
    /// The returned range is the last crossing below the target.
    Crossing,
    /// The target is still met at the top of the bracket.
    BracketSaturated,
    /// No range in the bracket meets the target.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxRange<T> {
    pub range_m: Option<T>,
    pub status: RangeStatus,
    /// Tracking with `d_lo ≥ 3h`: SNR falls monotonically over the bracket
    /// and the crossing is unique. Otherwise SNR may rise with range near
    /// overhead and only the largest satisfying range is claimed.
    pub monotone_regime: bool,
}

#[derive(Debug, Clone)]
pub struct RangeSearch<T> {
    pub ports: usize,
    pub target_snr_db: T,
    /// Height and azimuth template; the range is the search variable.
    pub geometry: LinkGeometry<T>,
    pub radio: RadioConfig<T>,
    pub array: ArrayConfig<T>,
    pub tracking: bool,
    pub d_lo: T,
    pub d_hi: T,
    /// Coarse scan step, metres.
    pub step_m: T,
    /// Bisection stops once the bracket is this narrow, metres.
    pub resolution_m: T,
}

impl<T: Real> RangeSearch<T> {
    pub fn new(
        ports: usize,
        target_snr_db: T,
        geometry: LinkGeometry<T>,
        radio: RadioConfig<T>,
        array: ArrayConfig<T>,
        tracking: bool,
        d_lo: T,
        d_hi: T,
    ) -> Self {
        Self {
            ports,
            target_snr_db,
            geometry,
            radio,
            array,
            tracking,
            d_lo,
            d_hi,
            step_m: lit(10.0),
            resolution_m: lit(0.1),
        }
    }

    fn meets(&self, d: T) -> Result<bool> {
        let q = SnrQuery {
            array: self.array.with_ports(self.ports),
            geometry: self.geometry.with_range(d),
            radio: self.radio.clone(),
            tracking: self.tracking,
        };
        Ok(meets_target(closed_form_snr_db(&q)?, self.target_snr_db))
    }
}

/// Largest range in `[d_lo, d_hi]` at which `ports` ports still reach the
/// target: coarse grid scan, then bisection on the last crossing.
pub fn max_range<T: Real>(s: &RangeSearch<T>) -> Result<MaxRange<T>> {
    let h = s.geometry.height_m;
    if !(s.d_lo >= h) {
        return Err(Error::invalid(format!("d_lo {} m is below the UAV height {h} m", s.d_lo)));
    }
    if !(s.d_lo < s.d_hi) {
        return Err(Error::invalid(format!("empty range bracket [{}, {}]", s.d_lo, s.d_hi)));
    }
    if !(s.step_m > T::zero()) || !(s.resolution_m > T::zero()) {
        return Err(Error::invalid("scan step and resolution must be positive"));
    }
    if s.ports == 0 {
        return Err(Error::invalid("port count must be at least 1"));
    }
    let monotone_regime = s.tracking && s.d_lo >= lit::<T>(3.0) * h;

    if s.meets(s.d_hi)? {
        return Ok(MaxRange {
            range_m: Some(s.d_hi),
            status: RangeStatus::BracketSaturated,
            monotone_regime,
        });
    }

    // Walk the grid from the top down; the first satisfying point is the
    // last crossing.
    let steps = ((s.d_hi - s.d_lo) / s.step_m).ceil().to_usize().unwrap_or(usize::MAX);
    let mut upper = s.d_hi;
    let mut found = None;
    for i in (0..steps).rev() {
        let d = s.d_lo + from_count::<T>(i) * s.step_m;
        if s.meets(d)? {
            found = Some(d);
            break;
        }
        upper = d;
    }
    let Some(mut lo) = found else {
        return Ok(MaxRange {
            range_m: None,
            status: RangeStatus::Infeasible,
            monotone_regime,
        });
    };
    let mut hi = upper;
    while hi - lo > s.resolution_m {
        let mid = (lo + hi) * lit(0.5);
        if s.meets(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(MaxRange {
        range_m: Some(lo),
        status: RangeStatus::Crossing,
        monotone_regime,
    })
}
