//! Grid evaluation over the SNR, dimensioning and pattern models, with
//! figure presets and deterministic CSV/JSON output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array_model::{ArrayConfig, WeightNorm};
use crate::dimensioning::{antennas_required, DimensioningQuery};
use crate::error::{Error, Result};
use crate::link_channel::{LinkGeometry, NoiseSpec, RadioConfig};
use crate::snr_engine::{evaluate, SnrQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Custom,
}

impl Preset {
    pub const FIGURES: [Preset; 7] = [
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Custom => "custom",
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::FIGURES
            .into_iter()
            .chain([Preset::Custom])
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown preset '{s}'")))
    }
}

/// What each grid point reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Closed-form downlink SNR.
    Snr,
    /// Minimum antenna ports for the target SNR, plus the vertical angle.
    Ports,
    /// Port radiation pattern over a vertical-angle axis.
    Pattern,
}

impl Metric {
    fn columns(self) -> &'static [&'static str] {
        match self {
            Metric::Snr => &["snr_db", "is_null"],
            Metric::Ports => &["min_ports", "theta_deg", "is_null"],
            Metric::Pattern => &["pattern_db", "array_factor_db", "is_null"],
        }
    }

    fn allows(self, p: Param) -> bool {
        use Param::*;
        match self {
            Metric::Snr => matches!(p, MPorts | NElements | RangeM | HeightM | CarrierHz | TiltDeg),
            Metric::Ports => matches!(p, NElements | RangeM | HeightM | CarrierHz | TargetSnrDb | TiltDeg),
            Metric::Pattern => matches!(p, MPorts | NElements | ThetaDeg | TiltDeg),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    MPorts,
    NElements,
    RangeM,
    HeightM,
    CarrierHz,
    TargetSnrDb,
    ThetaDeg,
    TiltDeg,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::MPorts => "m_ports",
            Param::NElements => "n_elements",
            Param::RangeM => "range_m",
            Param::HeightM => "height_m",
            Param::CarrierHz => "carrier_hz",
            Param::TargetSnrDb => "target_snr_db",
            Param::ThetaDeg => "theta_deg",
            Param::TiltDeg => "tilt_deg",
        }
    }

    fn is_count(self) -> bool {
        matches!(self, Param::MPorts | Param::NElements)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: Param,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: Param, values: Vec<f64>) -> Self {
        Self { name, values }
    }

    /// `start, start+step, …` up to and including `stop`.
    pub fn stepped(name: Param, start: f64, stop: f64, step: f64) -> Self {
        let count = ((stop - start) / step).round() as usize;
        Self::new(name, (0..=count).map(|i| start + i as f64 * step).collect())
    }

    /// `count` points spaced evenly in log10 between `start` and `stop`.
    pub fn log_spaced(name: Param, start: f64, stop: f64, count: usize) -> Self {
        let (a, b) = (start.log10(), stop.log10());
        let last = (count - 1) as f64;
        Self::new(
            name,
            (0..count).map(|i| 10f64.powf(a + (b - a) * i as f64 / last)).collect(),
        )
    }
}

/// Defaults every grid point starts from before axis values are applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseParams {
    pub array: ArrayConfig<f64>,
    pub geometry: LinkGeometry<f64>,
    pub radio: RadioConfig<f64>,
    pub tracking: bool,
    pub target_snr_db: f64,
}

impl Default for BaseParams {
    fn default() -> Self {
        Self {
            array: ArrayConfig::default(),
            geometry: LinkGeometry::new(10_000.0, 1000.0),
            radio: RadioConfig::default(),
            tracking: false,
            target_snr_db: 5.0,
        }
    }
}

impl BaseParams {
    fn set(&mut self, p: Param, v: f64) {
        match p {
            Param::MPorts => self.array.num_ports = v as usize,
            Param::NElements => self.array.num_elements = v as usize,
            Param::RangeM => self.geometry.range_m = v,
            Param::HeightM => self.geometry.height_m = v,
            Param::CarrierHz => self.radio.carrier_hz = v,
            Param::TargetSnrDb => self.target_snr_db = v,
            Param::TiltDeg => self.array.downtilt_deg = v,
            Param::ThetaDeg => {}
        }
    }
}

/// Per-parameter overrides, named after the CLI flags (`--tx-dbm` ↔ `tx_dbm`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub ports: Option<usize>,
    pub elements: Option<usize>,
    pub range: Option<f64>,
    pub height: Option<f64>,
    pub freq: Option<f64>,
    pub tilt: Option<f64>,
    pub track: Option<bool>,
    pub target: Option<f64>,
    pub tx_dbm: Option<f64>,
    pub noise_dbm: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    pub noise_figure_db: Option<f64>,
    pub gm_dbi: Option<f64>,
    pub theta3db: Option<f64>,
    pub phi3db: Option<f64>,
    pub am: Option<f64>,
    pub sla: Option<f64>,
    pub dv: Option<f64>,
    pub dh: Option<f64>,
    pub azimuth: Option<f64>,
    pub norm: Option<WeightNorm>,
}

impl ParamOverrides {
    pub fn apply(&self, base: &mut BaseParams) -> Result<()> {
        if self.tilt.is_some() && self.track == Some(true) {
            return Err(Error::invalid("tilt and track are mutually exclusive"));
        }
        let a = &mut base.array;
        macro_rules! set {
            ($src:ident => $dst:expr) => {
                if let Some(v) = self.$src {
                    $dst = v;
                }
            };
        }
        set!(ports => a.num_ports);
        set!(elements => a.num_elements);
        set!(gm_dbi => a.max_element_gain_dbi);
        set!(theta3db => a.theta_3db_deg);
        set!(phi3db => a.phi_3db_deg);
        set!(am => a.max_attenuation_db);
        set!(sla => a.sidelobe_attenuation_db);
        set!(dv => a.dv_over_lambda);
        set!(dh => a.dh_over_lambda);
        set!(norm => a.weight_norm);
        set!(tilt => a.downtilt_deg);
        set!(range => base.geometry.range_m);
        set!(height => base.geometry.height_m);
        set!(azimuth => base.geometry.azimuth_deg);
        set!(freq => base.radio.carrier_hz);
        set!(tx_dbm => base.radio.tx_power_dbm);
        set!(target => base.target_snr_db);
        if self.tilt.is_some() {
            base.tracking = false;
        }
        set!(track => base.tracking);

        match (self.noise_dbm, self.bandwidth_hz, self.noise_figure_db) {
            (None, None, None) => {}
            (Some(n), None, None) => base.radio.noise = NoiseSpec::Explicit { noise_power_dbm: n },
            (None, Some(bandwidth_hz), Some(noise_figure_db)) => {
                base.radio.noise = NoiseSpec::Thermal {
                    bandwidth_hz,
                    noise_figure_db,
                }
            }
            (Some(_), _, _) => {
                return Err(Error::invalid(
                    "give either an explicit noise power or bandwidth plus noise figure, not both",
                ))
            }
            _ => {
                return Err(Error::invalid(
                    "bandwidth and noise figure must be given together",
                ))
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub preset: Preset,
    pub metric: Metric,
    pub axes: Vec<Axis>,
    pub base: BaseParams,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

const FIG_RANGE_START: f64 = 1000.0;
const FIG_RANGE_STOP: f64 = 20_000.0;
const FIG_RANGE_STEP: f64 = 50.0;

fn dyadic_ports() -> Axis {
    Axis::new(Param::MPorts, (0..=8).map(|k| f64::from(1u32 << k)).collect())
}

fn fig_ranges() -> Axis {
    Axis::stepped(Param::RangeM, FIG_RANGE_START, FIG_RANGE_STOP, FIG_RANGE_STEP)
}

fn dimensioning_ranges() -> Axis {
    Axis::log_spaced(Param::RangeM, 1.0e3, 1.0e5, 41)
}

impl SweepSpec {
    /// Default grid for a figure preset. `Custom` yields an empty axis list.
    pub fn preset(preset: Preset) -> Self {
        let mut base = BaseParams::default();
        let (metric, axes) = match preset {
            Preset::Fig2 => {
                base.array.downtilt_deg = 70.0;
                let theta = Axis::new(Param::ThetaDeg, (0..=1800).map(|i| f64::from(i) / 10.0).collect());
                let n = Axis::new(Param::NElements, vec![2.0, 4.0, 8.0, 16.0, 32.0]);
                (Metric::Pattern, vec![n, theta])
            }
            Preset::Fig3 => {
                base.tracking = true;
                (Metric::Snr, vec![dyadic_ports(), fig_ranges()])
            }
            Preset::Fig7 | Preset::Fig8 => {
                base.array.downtilt_deg = if preset == Preset::Fig7 { 70.0 } else { 85.0 };
                (Metric::Snr, vec![dyadic_ports(), fig_ranges()])
            }
            Preset::Fig4 => {
                base.tracking = true;
                let targets = Axis::new(Param::TargetSnrDb, vec![0.0, 5.0, 10.0, 15.0]);
                (Metric::Ports, vec![targets, dimensioning_ranges()])
            }
            Preset::Fig5 => {
                base.tracking = true;
                let freqs = Axis::new(Param::CarrierHz, vec![0.7e9, 2.0e9, 3.5e9]);
                (Metric::Ports, vec![freqs, dimensioning_ranges()])
            }
            Preset::Fig6 => {
                base.tracking = true;
                let heights = Axis::new(Param::HeightM, vec![500.0, 1000.0, 2000.0]);
                (Metric::Ports, vec![heights, dimensioning_ranges()])
            }
            Preset::Custom => (Metric::Snr, Vec::new()),
        };
        Self {
            preset,
            metric,
            axes,
            base,
            output_path: None,
            format: Format::Csv,
        }
    }

    /// Builds a spec from a JSON config. Keys are the CLI flag names with
    /// dashes replaced by underscores, plus `preset`, `metric`, `axes`, `out`
    /// and `format`. Unknown keys are rejected.
    pub fn from_config_json(text: &str) -> Result<Self> {
        let mut map: serde_json::Map<String, serde_json::Value> = serde_json::from_str(text)?;
        let mut take = |k: &str| map.remove(k);

        let preset: Preset = match take("preset") {
            Some(v) => serde_json::from_value(v)?,
            None => Preset::Custom,
        };
        let mut spec = SweepSpec::preset(preset);
        if let Some(v) = take("metric") {
            spec.metric = serde_json::from_value(v)?;
        }
        if let Some(v) = take("axes") {
            spec.axes = serde_json::from_value(v)?;
        }
        if let Some(v) = take("out") {
            spec.output_path = Some(serde_json::from_value(v)?);
        }
        if let Some(v) = take("format") {
            spec.format = serde_json::from_value(v)?;
        }
        let overrides: ParamOverrides = serde_json::from_value(serde_json::Value::Object(map))?;
        overrides.apply(&mut spec.base)?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::invalid("sweep needs at least one axis"));
        }
        for (i, axis) in self.axes.iter().enumerate() {
            let name = axis.name.name();
            if self.axes[..i].iter().any(|a| a.name == axis.name) {
                return Err(Error::invalid(format!("axis '{name}' given twice")));
            }
            if !self.metric.allows(axis.name) {
                return Err(Error::invalid(format!(
                    "axis '{name}' does not apply to the {:?} metric",
                    self.metric
                )));
            }
            if axis.values.is_empty() {
                return Err(Error::invalid(format!("axis '{name}' has no values")));
            }
            if axis.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("axis '{name}' has non-finite values")));
            }
            if axis.values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::invalid(format!("axis '{name}' is not strictly increasing")));
            }
            if axis.name.is_count() && axis.values.iter().any(|v| *v < 1.0 || v.fract() != 0.0) {
                return Err(Error::invalid(format!("axis '{name}' must hold positive integers")));
            }
        }
        if self.metric == Metric::Pattern && !self.axes.iter().any(|a| a.name == Param::ThetaDeg) {
            return Err(Error::invalid("pattern sweeps need a theta_deg axis"));
        }
        Ok(())
    }

    pub fn columns(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|a| a.name.name())
            .chain(self.metric.columns().iter().copied())
            .map(String::from)
            .collect()
    }

    pub fn point_count(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Bool(bool),
    Null,
}

impl Cell {
    fn real(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Real)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Real(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

fn evaluate_point(spec: &SweepSpec, values: &[f64]) -> Vec<Cell> {
    let mut p = spec.base.clone();
    let mut theta = None;
    let mut row = Vec::with_capacity(values.len() + 3);
    for (axis, &v) in spec.axes.iter().zip(values) {
        p.set(axis.name, v);
        if axis.name == Param::ThetaDeg {
            theta = Some(v);
        }
        row.push(if axis.name.is_count() { Cell::Int(v as u64) } else { Cell::Real(v) });
    }

    match spec.metric {
        Metric::Snr => {
            let q = SnrQuery {
                array: p.array,
                geometry: p.geometry,
                radio: p.radio,
                tracking: p.tracking,
            };
            let snr = evaluate(&q).ok().and_then(|s| s.snr_db);
            row.extend([Cell::real(snr), Cell::Bool(snr.is_none())]);
        }
        Metric::Ports => {
            let theta = p.geometry.vertical_angle_deg().ok();
            let q = DimensioningQuery {
                target_snr_db: p.target_snr_db,
                geometry: p.geometry,
                radio: p.radio,
                array: p.array,
                tracking: p.tracking,
            };
            let ports = antennas_required(&q).ok().and_then(|r| r.min_ports);
            row.extend([
                ports.map_or(Cell::Null, Cell::Int),
                Cell::real(theta),
                Cell::Bool(ports.is_none()),
            ]);
        }
        Metric::Pattern => {
            let theta = theta.expect("validated: pattern sweeps carry a theta axis");
            let phi = p.geometry.azimuth_deg;
            let valid = p.array.validate().is_ok();
            let af = valid.then(|| p.array.array_factor_db(theta, phi).ok().flatten()).flatten();
            let pattern = valid.then(|| p.array.port_pattern_db(theta, phi).ok().flatten()).flatten();
            row.extend([Cell::real(pattern), Cell::real(af), Cell::Bool(pattern.is_none())]);
        }
    }
    row
}

/// Evaluates the Cartesian product of the axes, first axis outermost.
///
/// Points are evaluated in parallel; rows come back in grid order. Points that
/// fail validation or hit a null produce a null row instead of an error.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let dims: Vec<usize> = spec.axes.iter().map(|a| a.values.len()).collect();
    let rows = (0..spec.point_count())
        .into_par_iter()
        .map(|mut idx| {
            let mut values = vec![0.0; dims.len()];
            for (k, &len) in dims.iter().enumerate().rev() {
                values[k] = spec.axes[k].values[idx % len];
                idx /= len;
            }
            evaluate_point(spec, &values)
        })
        .collect();
    Ok(SweepTable {
        columns: spec.columns(),
        rows,
    })
}

/// Formats like C's `%.6g`.
pub fn format_sig6(x: f64) -> String {
    const PRECISION: i32 = 6;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Exponent after rounding to the target precision.
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..PRECISION).contains(&exp) {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn csv_cell(c: &Cell) -> String {
    match *c {
        Cell::Int(i) => i.to_string(),
        Cell::Real(v) => format_sig6(v),
        Cell::Bool(b) => b.to_string(),
        Cell::Null => String::new(),
    }
}

pub fn write_csv<W: Write>(table: &SweepTable, mut out: W) -> std::io::Result<()> {
    let mut buf = table.columns.join(",");
    buf.push('\n');
    for row in &table.rows {
        let line: Vec<String> = row.iter().map(csv_cell).collect();
        buf.push_str(&line.join(","));
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
}

pub fn table_json(table: &SweepTable) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| match *c {
                    Cell::Int(i) => serde_json::Value::from(i),
                    Cell::Real(v) => serde_json::Value::from(v),
                    Cell::Bool(b) => serde_json::Value::from(b),
                    Cell::Null => serde_json::Value::Null,
                })
                .collect()
        })
        .collect();
    serde_json::json!({ "columns": table.columns, "rows": rows })
}

pub fn write_json<W: Write>(table: &SweepTable, mut out: W) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(&table_json(table)).expect("table serialises");
    text.push('\n');
    out.write_all(text.as_bytes())
}

/// Sidecar path: `fig3.csv` → `fig3.meta.json`.
pub fn metadata_path(output: &Path) -> PathBuf {
    output.with_extension("meta.json")
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    preset: Preset,
    metric: Metric,
    format: Format,
    columns: &'a [String],
    row_count: usize,
    axes: &'a [Axis],
    base: &'a BaseParams,
    grid_source: &'static str,
    notes: Vec<String>,
}

pub fn metadata_json(spec: &SweepSpec, table: &SweepTable) -> serde_json::Value {
    let grid_source = if spec.preset == Preset::Custom {
        "user configuration"
    } else {
        "preset default grid (tool choice; only the fixed parameters come from the reference scenario)"
    };
    let mut notes = vec![format!(
        "noise power {} dBm is a tool default unless overridden",
        spec.base.radio.noise_power_dbm()
    )];
    match spec.preset {
        Preset::Fig5 => notes.push("carrier set {0.7, 2.0, 3.5} GHz is a tool choice".into()),
        Preset::Fig6 => notes.push("height set {500, 1000, 2000} m is a tool choice".into()),
        _ => {}
    }
    notes.push("null values are empty fields with is_null = true".into());
    let meta = Metadata {
        tool: "skyreach",
        version: env!("CARGO_PKG_VERSION"),
        preset: spec.preset,
        metric: spec.metric,
        format: spec.format,
        columns: &table.columns,
        row_count: table.rows.len(),
        axes: &spec.axes,
        base: &spec.base,
        grid_source,
        notes,
    };
    serde_json::to_value(meta).expect("metadata serialises")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the table in the spec's format plus the `.meta.json` sidecar.
pub fn emit(spec: &SweepSpec, table: &SweepTable, path: &Path) -> Result<()> {
    let mut body = Vec::new();
    match spec.format {
        Format::Csv => write_csv(table, &mut body),
        Format::Json => write_json(table, &mut body),
    }
    .expect("writing to memory");
    write_file(path, &body)?;

    let mut meta = serde_json::to_string_pretty(&metadata_json(spec, table))?;
    meta.push('\n');
    write_file(&metadata_path(path), meta.as_bytes())
}

/// Writes a CSV file without a sidecar.
pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<()> {
    let mut body = Vec::new();
    write_csv(table, &mut body).expect("writing to memory");
    write_file(path, &body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(125.0), "125");
        assert_eq!(format_sig6(-3.0), "-3");
        assert_eq!(format_sig6(6.864_125_4), "6.86413");
        assert_eq!(format_sig6(0.000_123_456_7), "0.000123457");
        assert_eq!(format_sig6(0.000_012_345_67), "1.23457e-05");
        assert_eq!(format_sig6(2.0e9), "2e+09");
        assert_eq!(format_sig6(999_999.4), "999999");
        assert_eq!(format_sig6(999_999.6), "1e+06");
        assert_eq!(format_sig6(20_000.0), "20000");
        assert_eq!(format_sig6(0.1), "0.1");
        assert_eq!(format_sig6(0.0), "0");
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = SweepTable {
            columns: vec!["m_ports".into(), "range_m".into(), "snr_db".into(), "is_null".into()],
            rows: vec![],
        };
        let mut out = Vec::new();
        write_csv(&t, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "m_ports,range_m,snr_db,is_null\n");
    }

    #[test]
    fn fig3_schema_and_null_rows() {
        let mut spec = SweepSpec::preset(Preset::Fig3);
        spec.axes[1] = Axis::new(Param::RangeM, vec![500.0, 5000.0]);
        spec.axes[0].values.truncate(1);
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.columns, ["m_ports", "range_m", "snr_db", "is_null"]);
        let mut out = Vec::new();
        write_csv(&t, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        // 500 m is below the 1000 m UAV height: null row, not an abort.
        assert_eq!(lines[1], "1,500,,true");
        assert!(lines[2].starts_with("1,5000,") && lines[2].ends_with(",false"));
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let mut spec = SweepSpec::preset(Preset::Custom);
        spec.axes = vec![
            Axis::new(Param::MPorts, vec![1.0, 2.0]),
            Axis::new(Param::RangeM, vec![2000.0, 3000.0, 4000.0]),
        ];
        spec.base.tracking = true;
        let t = run_sweep(&spec).unwrap();
        let keys: Vec<(f64, f64)> = t.rows.iter().map(|r| (r[0].as_f64().unwrap(), r[1].as_f64().unwrap())).collect();
        assert_eq!(
            keys,
            [(1.0, 2000.0), (1.0, 3000.0), (1.0, 4000.0), (2.0, 2000.0), (2.0, 3000.0), (2.0, 4000.0)]
        );
    }

    #[test]
    fn spec_validation() {
        let mut spec = SweepSpec::preset(Preset::Fig3);
        assert!(spec.validate().is_ok());
        spec.axes[1].values = vec![2000.0, 2000.0];
        assert!(spec.validate().is_err());

        let mut spec = SweepSpec::preset(Preset::Fig3);
        spec.axes.push(Axis::new(Param::MPorts, vec![3.0]));
        assert!(spec.validate().is_err());

        let mut spec = SweepSpec::preset(Preset::Fig3);
        spec.axes[0].values = vec![1.5];
        assert!(spec.validate().is_err());

        let mut spec = SweepSpec::preset(Preset::Fig3);
        spec.axes.push(Axis::new(Param::ThetaDeg, vec![3.0]));
        assert!(spec.validate().is_err());

        assert!(SweepSpec::preset(Preset::Custom).validate().is_err());
    }

    #[test]
    fn config_json_round() {
        let spec = SweepSpec::from_config_json(
            r#"{"metric":"snr","axes":[{"name":"range_m","values":[2000,4000]}],"track":true,"ports":4,"noise_dbm":-100,"norm":"full-array"}"#,
        )
        .unwrap();
        assert_eq!(spec.preset, Preset::Custom);
        assert!(spec.base.tracking);
        assert_eq!(spec.base.array.num_ports, 4);
        assert_eq!(spec.base.array.weight_norm, WeightNorm::FullArray);
        assert_eq!(spec.base.radio.noise_power_dbm(), -100.0);

        let spec = SweepSpec::from_config_json(r#"{"preset":"fig7","tilt":72}"#).unwrap();
        assert_eq!(spec.base.array.downtilt_deg, 72.0);
        assert_eq!(spec.metric, Metric::Snr);

        assert!(SweepSpec::from_config_json(r#"{"preset":"fig3","bogus":1}"#).is_err());
        assert!(SweepSpec::from_config_json(r#"{"axes":[{"name":"range_m","values":[1],"x":2}]}"#).is_err());
        assert!(SweepSpec::from_config_json(r#"{"tilt":70,"track":true}"#).is_err());
        assert!(SweepSpec::from_config_json(r#"{"noise_dbm":-90,"bandwidth_hz":1e6,"noise_figure_db":3}"#).is_err());
        assert!(SweepSpec::from_config_json(r#"{"preset":"fig9"}"#).is_err());
    }

    #[test]
    fn metadata_path_replaces_extension() {
        assert_eq!(metadata_path(Path::new("out/fig3.csv")), Path::new("out/fig3.meta.json"));
    }
}
