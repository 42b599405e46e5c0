use std::path::PathBuf;

use clap::Args;
use wavequbit::relation::{RelationCoefficients, TwoQubitState};
use wavequbit::{
    dual_function_with, encode_qubit, forward_cwt, load_csv, normalize, reconstruct as rebuild,
    reconstruction_error, relate_product, select_peaks, superpose, synth_burst,
    AnalyzingWavelet, BurstSpec, ColumnSpec, DualBasisFunction, RelationReport, SampleGrid,
    ShiftGrid, TimeSeries, WaveletMap, WaveletQubit,
};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Burst as `center,frequency,width,amplitude` (s, rad/s, s, -); repeatable.
    #[arg(long = "burst", value_parser = parse_burst)]
    bursts: Vec<BurstSpec>,
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
    #[arg(long)]
    dt: f64,
    #[arg(long)]
    samples: usize,
    #[arg(long, default_value = "signal.csv")]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Signal CSV (`time,value` or `value` rows).
    signal: PathBuf,
    /// Sample spacing for single-column input.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, default_value = "map.csv")]
    out: PathBuf,
    /// Also write an 8-bit PGM heatmap of |W|.
    #[arg(long)]
    pgm: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    map: PathBuf,
    #[arg(long, default_value = "reconstructed.csv")]
    out: PathBuf,
    /// Original signal; prints the relative L2 error against it.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    map: PathBuf,
    /// Map indices `freq_index,time_index` for the m amplitude.
    #[arg(long, value_parser = parse_index, requires = "point_n", conflicts_with = "auto")]
    point_m: Option<(usize, usize)>,
    #[arg(long, value_parser = parse_index, requires = "point_m")]
    point_n: Option<(usize, usize)>,
    /// Pick the strongest local maxima instead; the first two are encoded.
    #[arg(long)]
    auto: Option<usize>,
    /// Divide amplitudes by the qubit norm.
    #[arg(long)]
    normalize: bool,
    #[arg(long, default_value = "qubit.json")]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RelateArgs {
    qubit1: PathBuf,
    qubit2: PathBuf,
    #[arg(long, default_value = "relation.json")]
    out: PathBuf,
}

fn parse_burst(s: &str) -> Result<BurstSpec, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    let [center, frequency, width, amplitude] = v[..] else {
        return Err(format!("expected center,frequency,width,amplitude, got `{s}`"));
    };
    BurstSpec::new(center, frequency, width, amplitude).map_err(|e| e.to_string())
}

fn parse_index(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected freq_index,time_index, got `{s}`"))?;
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn dual(cfg: &RunConfig) -> Result<DualBasisFunction, CliError> {
    Ok(dual_function_with(
        &AnalyzingWavelet::new(cfg.wavelet),
        cfg.admissibility,
        cfg.weighting,
    )?)
}

pub fn synth(cfg: &RunConfig, args: SynthArgs) -> Result<(), CliError> {
    if args.bursts.is_empty() {
        return Err(CliError::usage("synth needs at least one --burst"));
    }
    let grid = SampleGrid::new(args.t0, args.dt, args.samples)?;
    let parts = args
        .bursts
        .iter()
        .map(|b| synth_burst(b, grid))
        .collect::<Result<Vec<_>, _>>()?;
    let signal = if parts.len() == 1 {
        parts.into_iter().next().expect("one part")
    } else {
        superpose(&parts)?
    };
    let out = cfg.output_path(&args.out);
    signal.save_csv(&out)?;
    println!(
        "wrote {} samples (t0 = {}, dt = {}) from {} burst(s) to {}",
        grid.n,
        grid.t0,
        grid.dt,
        args.bursts.len(),
        out.display()
    );
    Ok(())
}

pub fn transform(cfg: &RunConfig, args: TransformArgs) -> Result<(), CliError> {
    let spec = ColumnSpec::Auto {
        fallback_dt: args.dt,
        t0: 0.0,
    };
    let signal = load_csv(&args.signal, spec)
        .map_err(|e| CliError::from(e).context(args.signal.display()))?;
    let wavelet = AnalyzingWavelet::new(cfg.wavelet);
    let freq = cfg.frequency_grid()?;
    let shifts = ShiftGrid::covering(signal.grid(), cfg.stride)?;
    let map = forward_cwt(&signal, &wavelet, &freq, &shifts)?;

    let out = cfg.output_path(&args.out);
    map.save_csv(&out)?;
    if let Some(pgm) = &args.pgm {
        map.save_pgm(cfg.output_path(pgm))?;
    }

    let (i, j, max) = map.abs_argmax();
    println!(
        "map: {} frequencies x {} shifts ({}), written to {}",
        map.rows(),
        map.cols(),
        wavelet.kind(),
        out.display()
    );
    println!(
        "max |W| = {max:.6e} at omega = {:.6} rad/s, T = {:.6} s (row {i}, col {j})",
        freq.values()[i],
        shifts.time(j)
    );
    if max > 0.0 && (i == 0 || i + 1 == map.rows()) {
        println!(
            "warning: the maximum sits on the edge of the band [{}, {}] rad/s; \
             signal content may lie outside it",
            cfg.omega_min, cfg.omega_max
        );
    }
    Ok(())
}

pub fn reconstruct_cmd_grid(
    map: &WaveletMap,
    cfg: &RunConfig,
    args: &ReconstructArgs,
    reference: Option<&TimeSeries>,
) -> Result<SampleGrid, CliError> {
    let explicit = args.t0.is_some() || args.dt.is_some() || args.samples.is_some();
    if let (Some(r), false) = (reference, explicit) {
        return Ok(r.grid());
    }
    let shifts = map.shifts();
    let dt = args.dt.unwrap_or(shifts.dt() / cfg.stride as f64);
    let t0 = args.t0.unwrap_or(shifts.t0());
    let n = match args.samples {
        Some(n) => n,
        None => ((shifts.t_end() - t0) / dt + 1e-9).floor() as usize + 1,
    };
    Ok(SampleGrid::new(t0, dt, n)?)
}

pub fn reconstruct(cfg: &RunConfig, args: ReconstructArgs) -> Result<(), CliError> {
    let map = WaveletMap::load_csv(&args.map, cfg.wavelet)
        .map_err(|e| CliError::from(e).context(args.map.display()))?;
    let reference = match &args.reference {
        Some(path) => Some(
            load_csv(path, ColumnSpec::TimeValue)
                .map_err(|e| CliError::from(e).context(path.display()))?,
        ),
        None => None,
    };
    let grid = reconstruct_cmd_grid(&map, cfg, &args, reference.as_ref())?;
    if let Some(r) = &reference {
        if !r.grid().matches(&grid, 1e-9) {
            return Err(CliError::usage(format!(
                "reference has {} samples (t0 = {}, dt = {}) but the output grid has {} (t0 = {}, dt = {})",
                r.len(),
                r.t0(),
                r.dt(),
                grid.n,
                grid.t0,
                grid.dt
            )));
        }
    }
    let dual = dual(cfg)?;
    let signal = rebuild(&map, &dual, grid)?;
    let out = cfg.output_path(&args.out);
    signal.save_csv(&out)?;
    println!(
        "reconstructed {} samples (t0 = {}, dt = {}) to {}",
        grid.n,
        grid.t0,
        grid.dt,
        out.display()
    );
    if let Some(r) = &reference {
        let err = reconstruction_error(r, &signal)?;
        println!("relative L2 error: {err:.17e}");
    }
    Ok(())
}

pub fn encode(cfg: &RunConfig, args: EncodeArgs) -> Result<(), CliError> {
    let map = WaveletMap::load_csv(&args.map, cfg.wavelet)
        .map_err(|e| CliError::from(e).context(args.map.display()))?;
    let (p1, p2) = match (args.point_m, args.point_n, args.auto) {
        (Some(m), Some(n), None) => (m, n),
        (None, None, Some(k)) => {
            if k < 2 {
                return Err(CliError::usage("--auto needs at least 2 peaks"));
            }
            let peaks = select_peaks(&map, k)?;
            for (rank, p) in peaks.iter().enumerate() {
                println!(
                    "peak {}: omega = {:.6}, T = {:.6}, W = {:.6e} ({}, {})",
                    rank + 1,
                    p.omega,
                    p.shift,
                    p.coeff,
                    p.freq_index,
                    p.time_index
                );
            }
            (peaks[0].index(), peaks[1].index())
        }
        _ => {
            return Err(CliError::usage(
                "give either --point-m and --point-n, or --auto <k>",
            ))
        }
    };
    let dual = dual(cfg)?;
    let mut qubit = encode_qubit(&map, p1, p2, &dual)?;
    if args.normalize {
        qubit = normalize(&qubit)?;
    }
    let out = cfg.output_path(&args.out);
    qubit.save_json(&out)?;
    println!(
        "qubit {}: alpha = {:.6e}, beta = {:.6e}{}, written to {}",
        qubit.id(),
        qubit.alpha(),
        qubit.beta(),
        if qubit.is_normalized() { " (normalized)" } else { "" },
        out.display()
    );
    Ok(())
}

pub fn relate(cfg: &RunConfig, args: RelateArgs) -> Result<(), CliError> {
    let load = |path: &PathBuf| -> Result<WaveletQubit, CliError> {
        Ok(WaveletQubit::load_json(path, cfg.weighting)?)
    };
    let q1 = load(&args.qubit1)?;
    let q2 = load(&args.qubit2)?;
    let state = relate_product(&q1, &q2);
    let state = TwoQubitState::new(
        RelationCoefficients::from_array(state.coeffs.to_array()),
        (
            args.qubit1.display().to_string(),
            args.qubit2.display().to_string(),
        ),
    );
    let bell_tol = cfg.tol_bell * state.coeffs.max_abs();
    let report = RelationReport::new(&state, bell_tol, cfg.tol_sep);
    let out = cfg.output_path(&args.out);
    report.save_json(&out)?;
    println!(
        "U = {:?}, determinant = {:.6e}, separated = {}, bell = [{}], written to {}",
        state.coeffs.to_array(),
        report.determinant,
        report.separated,
        report.bell_matched.join(", "),
        out.display()
    );
    Ok(())
}
