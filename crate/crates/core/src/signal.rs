//! Uniformly sampled real signals: CSV ingestion, Gabor burst synthesis and
//! pointwise superposition.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

/// Relative tolerance on the spacing of a CSV time column.
pub const SPACING_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("time column is not uniformly spaced: step {step} at line {line} deviates from mean step {mean}")]
    Spacing { line: u64, step: f64, mean: f64 },
    #[error("a signal needs at least 2 samples, got {0}")]
    Size(usize),
    #[error("sample spacing must be finite and positive, got {0}")]
    NonPositiveStep(f64),
    #[error("sample {index} is not finite")]
    NonFinite { index: usize },
    #[error("{0}")]
    Domain(String),
    #[error("signal grids differ: {0}")]
    Grid(String),
}

pub type SignalResult<T> = Result<T, SignalError>;

/// Uniform sample grid `t_k = t0 + k * dt`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
}

impl SampleGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> SignalResult<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(SignalError::NonPositiveStep(dt));
        }
        if !t0.is_finite() {
            return Err(SignalError::Domain(format!("grid origin {t0} is not finite")));
        }
        if n < 2 {
            return Err(SignalError::Size(n));
        }
        Ok(Self { t0, dt, n })
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.time(k))
    }

    /// Same origin, spacing and length, compared with a relative tolerance on
    /// the floating-point fields.
    pub fn matches(&self, other: &SampleGrid, rel_tol: f64) -> bool {
        let scale = self.dt.abs().max(other.dt.abs());
        self.n == other.n
            && (self.dt - other.dt).abs() <= rel_tol * scale
            && (self.t0 - other.t0).abs() <= rel_tol * scale.max(self.t0.abs())
    }
}

/// A uniformly sampled, finite, real-valued signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    grid: SampleGrid,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, t0: f64, dt: f64) -> SignalResult<Self> {
        let grid = SampleGrid::new(t0, dt, samples.len())?;
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::NonFinite { index });
        }
        Ok(Self { samples, grid })
    }

    pub fn from_grid(grid: SampleGrid, samples: Vec<f64>) -> SignalResult<Self> {
        if samples.len() != grid.n {
            return Err(SignalError::Grid(format!(
                "{} samples for a grid of {}",
                samples.len(),
                grid.n
            )));
        }
        Self::new(samples, grid.t0, grid.dt)
    }

    pub fn zeros(grid: SampleGrid) -> Self {
        Self {
            samples: vec![0.0; grid.n],
            grid,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn grid(&self) -> SampleGrid {
        self.grid
    }

    pub fn dt(&self) -> f64 {
        self.grid.dt
    }

    pub fn t0(&self) -> f64 {
        self.grid.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.grid.time(k)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|v| c * v).collect(),
            grid: self.grid,
        }
    }

    /// Writes `time,value` rows at 17 significant digits with a header line.
    pub fn save_csv(&self, path: impl AsRef<Path>) -> SignalResult<()> {
        let path = path.as_ref();
        let io_err = |source| SignalError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
        self.write_csv(&mut out).map_err(io_err)?;
        out.flush().map_err(io_err)
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "time,value")?;
        for (k, v) in self.samples.iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e}", self.time(k), v)?;
        }
        Ok(())
    }
}

/// How to interpret the columns of a signal CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColumnSpec {
    /// Two columns `time,value` when present; a single `value` column falls
    /// back to `fallback_dt` (error if absent), starting at `t0`.
    Auto { fallback_dt: Option<f64>, t0: f64 },
    /// `time,value` rows only.
    TimeValue,
    /// `value` rows with the given spacing and origin.
    ValueOnly { dt: f64, t0: f64 },
}

impl Default for ColumnSpec {
    fn default() -> Self {
        ColumnSpec::Auto {
            fallback_dt: None,
            t0: 0.0,
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, spec: ColumnSpec) -> SignalResult<TimeSeries> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| SignalError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file, spec)
}

pub fn read_csv<R: io::Read>(input: R, spec: ColumnSpec) -> SignalResult<TimeSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);

    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut width = None;
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| SignalError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if first {
            first = false;
            if record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
                continue;
            }
        }
        let fields: Vec<&str> = record.iter().collect();
        let expected = *width.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(SignalError::Parse {
                line,
                message: format!("expected {expected} fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| -> SignalResult<f64> {
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(SignalError::Parse {
                    line,
                    message: format!("non-finite number `{s}`"),
                }),
                Err(_) => Err(SignalError::Parse {
                    line,
                    message: format!("not a number: `{s}`"),
                }),
            }
        };
        match fields.len() {
            1 => values.push(parse(fields[0])?),
            2 => {
                times.push((line, parse(fields[0])?));
                values.push(parse(fields[1])?);
            }
            n => {
                return Err(SignalError::Parse {
                    line,
                    message: format!("expected 1 or 2 fields, found {n}"),
                })
            }
        }
    }

    if values.len() < 2 {
        return Err(SignalError::Size(values.len()));
    }

    let has_time = !times.is_empty();
    match (spec, has_time) {
        (ColumnSpec::TimeValue, false) => Err(SignalError::Parse {
            line: 1,
            message: "expected `time,value` rows".into(),
        }),
        (ColumnSpec::ValueOnly { .. }, true) => Err(SignalError::Parse {
            line: times[0].0,
            message: "expected single `value` rows".into(),
        }),
        (ColumnSpec::ValueOnly { dt, t0 }, false)
        | (
            ColumnSpec::Auto {
                fallback_dt: Some(dt),
                t0,
            },
            false,
        ) => TimeSeries::new(values, t0, dt),
        (ColumnSpec::Auto { fallback_dt: None, .. }, false) => Err(SignalError::Domain(
            "single-column signal needs an explicit sample spacing".into(),
        )),
        (_, true) => {
            let (t0, dt) = uniform_spacing(&times)?;
            TimeSeries::new(values, t0, dt)
        }
    }
}

fn uniform_spacing(times: &[(u64, f64)]) -> SignalResult<(f64, f64)> {
    let t0 = times[0].1;
    let last = times[times.len() - 1].1;
    let mean = (last - t0) / (times.len() - 1) as f64;
    if !(mean > 0.0) {
        return Err(SignalError::NonPositiveStep(mean));
    }
    for pair in times.windows(2) {
        let step = pair[1].1 - pair[0].1;
        if (step - mean).abs() > SPACING_TOLERANCE * mean {
            return Err(SignalError::Spacing {
                line: pair[1].0,
                step,
                mean,
            });
        }
    }
    Ok((t0, mean))
}

/// A localized time-frequency event: cosine carrier under a Gaussian envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurstSpec {
    pub center: f64,
    /// Carrier angular frequency, rad/s.
    pub frequency: f64,
    /// Envelope standard deviation, seconds.
    pub width: f64,
    pub amplitude: f64,
}

impl BurstSpec {
    pub fn new(center: f64, frequency: f64, width: f64, amplitude: f64) -> SignalResult<Self> {
        let spec = Self {
            center,
            frequency,
            width,
            amplitude,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> SignalResult<()> {
        if !(self.frequency.is_finite() && self.frequency > 0.0) {
            return Err(SignalError::Domain(format!(
                "burst frequency must be positive, got {}",
                self.frequency
            )));
        }
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(SignalError::Domain(format!(
                "burst width must be positive, got {}",
                self.width
            )));
        }
        if !(self.center.is_finite() && self.amplitude.is_finite()) {
            return Err(SignalError::Domain("burst center and amplitude must be finite".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn value_at(&self, t: f64) -> f64 {
        let x = t - self.center;
        self.amplitude * (self.frequency * x).cos() * (-x * x / (2.0 * self.width * self.width)).exp()
    }
}

pub fn synth_burst(spec: &BurstSpec, grid: SampleGrid) -> SignalResult<TimeSeries> {
    spec.validate()?;
    let grid = SampleGrid::new(grid.t0, grid.dt, grid.n)?;
    let samples = grid.times().map(|t| spec.value_at(t)).collect();
    TimeSeries::from_grid(grid, samples)
}

/// Pointwise sum of signals sharing one grid.
pub fn superpose(signals: &[TimeSeries]) -> SignalResult<TimeSeries> {
    let first = signals
        .first()
        .ok_or_else(|| SignalError::Grid("nothing to superpose".into()))?;
    let grid = first.grid();
    let mut samples = vec![0.0; grid.n];
    for (i, s) in signals.iter().enumerate() {
        if s.grid() != grid {
            return Err(SignalError::Grid(format!(
                "signal {i} has grid {:?}, expected {:?}",
                s.grid(),
                grid
            )));
        }
        for (acc, v) in samples.iter_mut().zip(s.samples()) {
            *acc += v;
        }
    }
    TimeSeries::from_grid(grid, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, spec: ColumnSpec) -> SignalResult<TimeSeries> {
        read_csv(text.as_bytes(), spec)
    }

    #[test]
    fn reads_time_value_rows() {
        let ts = read("0.0,1.0\n0.1,2.0\n0.2,3.0", ColumnSpec::default()).unwrap();
        assert_eq!(ts.samples(), &[1.0, 2.0, 3.0]);
        assert_eq!(ts.t0(), 0.0);
        assert!((ts.dt() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn skips_header_and_blank_lines() {
        let ts = read("time,value\n0,1\n\n1,2\n", ColumnSpec::default()).unwrap();
        assert_eq!(ts.samples(), &[1.0, 2.0]);
        assert_eq!(ts.dt(), 1.0);
    }

    #[test]
    fn single_row_is_a_size_error() {
        assert!(matches!(
            read("0.0,1.0\n", ColumnSpec::default()),
            Err(SignalError::Size(1))
        ));
    }

    #[test]
    fn non_uniform_time_is_a_spacing_error() {
        let err = read("0.0,1.0\n0.1,2.0\n0.5,3.0", ColumnSpec::default()).unwrap_err();
        assert!(matches!(err, SignalError::Spacing { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn malformed_row_names_its_line() {
        let err = read("0,1\n1,2\n2,abc\n", ColumnSpec::default()).unwrap_err();
        match err {
            SignalError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let err = read("0,1\n1,2,3\n", ColumnSpec::default()).unwrap_err();
        assert!(matches!(err, SignalError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn value_column_needs_dt() {
        assert!(matches!(
            read("1\n2\n3\n", ColumnSpec::default()),
            Err(SignalError::Domain(_))
        ));
        let ts = read(
            "1\n2\n3\n",
            ColumnSpec::Auto {
                fallback_dt: Some(0.5),
                t0: 1.0,
            },
        )
        .unwrap();
        assert_eq!(ts.dt(), 0.5);
        assert_eq!(ts.time(2), 2.0);
    }

    #[test]
    fn time_series_invariants() {
        assert!(TimeSeries::new(vec![1.0], 0.0, 1.0).is_err());
        assert!(TimeSeries::new(vec![1.0, 2.0], 0.0, 0.0).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::NAN], 0.0, 1.0).is_err());
    }

    #[test]
    fn burst_peak_is_amplitude() {
        let spec = BurstSpec::new(5.0, 10.0, 0.5, 1.0).unwrap();
        let ts = synth_burst(&spec, SampleGrid::new(0.0, 0.01, 1001).unwrap()).unwrap();
        assert_eq!(ts.samples()[500], 1.0);
        let zero = BurstSpec::new(5.0, 10.0, 0.5, 0.0).unwrap();
        let ts = synth_burst(&zero, SampleGrid::new(0.0, 0.01, 1001).unwrap()).unwrap();
        assert!(ts.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn burst_closed_form_at_offset() {
        // cos(10 * 0.5) * exp(-0.25 / 0.5), evaluated independently:
        // cos(5) = 0.28366218546322625, exp(-0.5) = 0.6065306597126334
        let expected = 0.172_049_812_484_538;
        let spec = BurstSpec::new(5.0, 10.0, 0.5, 1.0).unwrap();
        let ts = synth_burst(&spec, SampleGrid::new(0.0, 0.01, 1001).unwrap()).unwrap();
        assert!((ts.time(550) - 5.5).abs() < 1e-12);
        assert!((ts.samples()[550] - expected).abs() < 1e-12);
    }

    #[test]
    fn burst_rejects_bad_parameters() {
        assert!(BurstSpec::new(0.0, 0.0, 1.0, 1.0).is_err());
        assert!(BurstSpec::new(0.0, 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn superpose_identity_and_doubling() {
        let grid = SampleGrid::new(0.0, 0.01, 200).unwrap();
        let s = synth_burst(&BurstSpec::new(1.0, 7.0, 0.3, 1.3).unwrap(), grid).unwrap();
        let z = TimeSeries::zeros(grid);
        assert_eq!(superpose(&[s.clone(), z]).unwrap(), s);
        assert_eq!(superpose(&[s.clone(), s.clone()]).unwrap(), s.scaled(2.0));
    }

    #[test]
    fn superpose_rejects_mismatched_grids() {
        let a = TimeSeries::zeros(SampleGrid::new(0.0, 0.01, 10).unwrap());
        let b = TimeSeries::zeros(SampleGrid::new(0.0, 0.02, 10).unwrap());
        assert!(matches!(superpose(&[a, b]), Err(SignalError::Grid(_))));
        assert!(superpose(&[]).is_err());
    }
}
