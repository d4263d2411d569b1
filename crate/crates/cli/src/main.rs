//! `skyreach`: downlink SNR, antenna dimensioning and figure sweeps for a
//! ground base station serving an airborne user.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skyreach_core::dimensioning::{antennas_required, DimensioningQuery};
use skyreach_core::snr_engine::{evaluate, SnrQuery};
use skyreach_core::sweep::{
    self, format_sig6, Axis, BaseParams, Format, Metric, Param, ParamOverrides, Preset, SweepSpec,
};
use skyreach_core::{Error, WeightNorm};

const EXIT_INVALID: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "skyreach", version, about = "Ground-to-air downlink SNR and antenna dimensioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Port radiation pattern over θ = 0..180° in 0.1° steps.
    Pattern(PatternArgs),
    /// Downlink SNR at a single point.
    Snr(SnrArgs),
    /// Minimum antenna ports for a target SNR.
    Dimension(DimensionArgs),
    /// Grid sweep from a figure preset or a JSON config.
    Sweep(SweepArgs),
}

/// Overrides shared by every subcommand.
#[derive(Args, Debug, Default)]
struct Common {
    /// Transmit power, dBm.
    #[arg(long = "tx-dbm", allow_negative_numbers = true)]
    tx_dbm: Option<f64>,
    /// Total noise power, dBm.
    #[arg(long = "noise-dbm", allow_negative_numbers = true)]
    noise_dbm: Option<f64>,
    /// Receiver bandwidth for a thermal noise floor, Hz (needs --noise-figure-db).
    #[arg(long = "bandwidth-hz")]
    bandwidth_hz: Option<f64>,
    #[arg(long = "noise-figure-db", allow_negative_numbers = true)]
    noise_figure_db: Option<f64>,
    /// Maximum element gain, dBi.
    #[arg(long = "gm-dbi", allow_negative_numbers = true)]
    gm_dbi: Option<f64>,
    /// Elevation half-power beamwidth, degrees.
    #[arg(long)]
    theta3db: Option<f64>,
    /// Azimuth half-power beamwidth, degrees.
    #[arg(long)]
    phi3db: Option<f64>,
    /// Maximum element attenuation, dB.
    #[arg(long)]
    am: Option<f64>,
    /// Vertical side-lobe attenuation cap, dB.
    #[arg(long)]
    sla: Option<f64>,
    /// Vertical element spacing, wavelengths.
    #[arg(long)]
    dv: Option<f64>,
    /// Horizontal port spacing, wavelengths.
    #[arg(long)]
    dh: Option<f64>,
    /// UAV azimuth, degrees.
    #[arg(long, allow_negative_numbers = true)]
    azimuth: Option<f64>,
    /// Weight normalisation: per-port or full-array.
    #[arg(long)]
    norm: Option<WeightNorm>,
}

impl Common {
    fn overrides(&self) -> ParamOverrides {
        ParamOverrides {
            tx_dbm: self.tx_dbm,
            noise_dbm: self.noise_dbm,
            bandwidth_hz: self.bandwidth_hz,
            noise_figure_db: self.noise_figure_db,
            gm_dbi: self.gm_dbi,
            theta3db: self.theta3db,
            phi3db: self.phi3db,
            am: self.am,
            sla: self.sla,
            dv: self.dv,
            dh: self.dh,
            azimuth: self.azimuth,
            norm: self.norm,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct PatternArgs {
    /// Downtilt, degrees from zenith.
    #[arg(long)]
    tilt: f64,
    /// Elements per port.
    #[arg(long)]
    elements: usize,
    #[arg(long)]
    ports: Option<usize>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SnrArgs {
    #[arg(long)]
    ports: usize,
    #[arg(long)]
    elements: usize,
    /// Slant range, metres.
    #[arg(long)]
    range: f64,
    /// UAV height, metres.
    #[arg(long)]
    height: f64,
    /// Carrier frequency, Hz.
    #[arg(long)]
    freq: f64,
    /// Fixed downtilt, degrees.
    #[arg(long, conflicts_with = "track")]
    tilt: Option<f64>,
    /// Steer the beam onto the UAV.
    #[arg(long)]
    track: bool,
    /// Print a JSON object instead of a CSV row.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DimensionArgs {
    /// Target SNR, dB.
    #[arg(long, allow_negative_numbers = true)]
    target: f64,
    #[arg(long)]
    range: f64,
    #[arg(long)]
    height: f64,
    #[arg(long, conflicts_with = "track")]
    tilt: Option<f64>,
    #[arg(long)]
    track: bool,
    #[arg(long)]
    elements: Option<usize>,
    #[arg(long)]
    freq: Option<f64>,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// fig2 … fig8.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<Preset>,
    /// JSON sweep configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn csv_real(v: Option<f64>) -> String {
    v.map(format_sig6).unwrap_or_default()
}

fn print_stdout(text: &str) -> Result<(), Failure> {
    io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| Failure::Io(format!("stdout: {e}")))
}

fn base_with(overrides: ParamOverrides) -> Result<BaseParams, Failure> {
    let mut base = BaseParams::default();
    overrides.apply(&mut base)?;
    Ok(base)
}

fn run_pattern(args: PatternArgs) -> Result<u8, Failure> {
    let base = base_with(ParamOverrides {
        tilt: Some(args.tilt),
        elements: Some(args.elements),
        ports: args.ports,
        ..args.common.overrides()
    })?;
    base.array.validate()?;
    let spec = SweepSpec {
        preset: Preset::Custom,
        metric: Metric::Pattern,
        axes: vec![Axis::new(Param::ThetaDeg, (0..=1800).map(|i| f64::from(i) / 10.0).collect())],
        base,
        output_path: args.out.clone(),
        format: Format::Csv,
    };
    let table = sweep::run_sweep(&spec)?;
    match args.out {
        Some(path) => sweep::emit_csv(&table, &path)?,
        None => {
            let mut buf = Vec::new();
            sweep::write_csv(&table, &mut buf).expect("writing to memory");
            print_stdout(&String::from_utf8(buf).expect("utf-8"))?;
        }
    }
    Ok(0)
}

fn run_snr(args: SnrArgs) -> Result<u8, Failure> {
    let base = base_with(ParamOverrides {
        ports: Some(args.ports),
        elements: Some(args.elements),
        range: Some(args.range),
        height: Some(args.height),
        freq: Some(args.freq),
        tilt: args.tilt,
        track: Some(args.track),
        ..args.common.overrides()
    })?;
    let q = SnrQuery {
        array: base.array,
        geometry: base.geometry,
        radio: base.radio,
        tracking: base.tracking,
    };
    let s = evaluate(&q)?;
    let text = if args.json {
        let mut v = serde_json::to_value(&s).expect("sample serialises");
        v["is_null"] = s.snr_db.is_none().into();
        format!("{v}\n")
    } else {
        format!(
            "m_ports,n_elements,range_m,height_m,carrier_hz,theta_deg,tilt_deg,tracking,snr_db,kernel_magnitude,is_null\n\
             {},{},{},{},{},{},{},{},{},{},{}\n",
            s.ports,
            s.elements,
            format_sig6(s.range_m),
            format_sig6(s.height_m),
            format_sig6(s.carrier_hz),
            format_sig6(s.theta_deg),
            format_sig6(s.tilt_deg),
            s.tracking,
            csv_real(s.snr_db),
            format_sig6(s.kernel_magnitude),
            s.snr_db.is_none(),
        )
    };
    print_stdout(&text)?;
    Ok(0)
}

fn run_dimension(args: DimensionArgs) -> Result<u8, Failure> {
    let base = base_with(ParamOverrides {
        target: Some(args.target),
        range: Some(args.range),
        height: Some(args.height),
        tilt: args.tilt,
        track: Some(args.track),
        elements: args.elements,
        freq: args.freq,
        ..args.common.overrides()
    })?;
    let theta = base.geometry.vertical_angle_deg()?;
    let q = DimensioningQuery {
        target_snr_db: base.target_snr_db,
        geometry: base.geometry,
        radio: base.radio,
        array: base.array,
        tracking: base.tracking,
    };
    let r = antennas_required(&q)?;
    let text = if args.json {
        let mut v = serde_json::to_value(&r).expect("result serialises");
        v["feasible"] = r.feasible().into();
        v["theta_deg"] = theta.into();
        format!("{v}\n")
    } else {
        format!(
            "min_ports,achieved_snr_db,feasible,theta_deg,note\n{},{},{},{},{}\n",
            r.min_ports.map(|m| m.to_string()).unwrap_or_default(),
            csv_real(r.achieved_snr_db),
            r.feasible(),
            format_sig6(theta),
            r.note.replace(',', ";"),
        )
    };
    print_stdout(&text)?;
    Ok(if r.feasible() { 0 } else { EXIT_INFEASIBLE })
}

fn run_sweep(args: SweepArgs) -> Result<u8, Failure> {
    let mut spec = match (&args.preset, &args.config) {
        (Some(p), _) => SweepSpec::preset(*p),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            SweepSpec::from_config_json(&text)?
        }
        (None, None) => return Err(Failure::Invalid("give --preset or --config".into())),
    };
    if let Some(out) = args.out {
        spec.output_path = Some(out);
    }
    if let Some(f) = args.format {
        spec.format = serde_json::from_value(serde_json::Value::String(f.clone()))
            .map_err(|_| Failure::Invalid(format!("unknown format '{f}' (expected csv or json)")))?;
    }
    let Some(out) = spec.output_path.clone() else {
        return Err(Failure::Invalid("sweep needs an output path (--out)".into()));
    };
    let table = sweep::run_sweep(&spec)?;
    sweep::emit(&spec, &table, &out)?;
    eprintln!("wrote {} rows to {}", table.rows.len(), out.display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Pattern(a) => run_pattern(a),
        Command::Snr(a) => run_snr(a),
        Command::Dimension(a) => run_dimension(a),
        Command::Sweep(a) => run_sweep(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
