//! The wavelet map W(ω, T) and its CSV / PGM exports.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{EngineError, EngineResult};
use crate::grid::{FrequencyGrid, ShiftGrid};
use crate::signal::SampleGrid;
use crate::wavelet::WaveletKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapMeta {
    pub wavelet: WaveletKind,
    /// Grid of the analysed signal; unknown for maps read back from CSV.
    pub signal_grid: Option<SampleGrid>,
}

/// Real coefficients on a frequency × shift grid, stored row-major
/// (one row per frequency).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletMap {
    freq: FrequencyGrid,
    shifts: ShiftGrid,
    coeffs: Vec<f64>,
    meta: MapMeta,
}

impl WaveletMap {
    pub fn new(
        freq: FrequencyGrid,
        shifts: ShiftGrid,
        coeffs: Vec<f64>,
        meta: MapMeta,
    ) -> EngineResult<Self> {
        if coeffs.len() != freq.count() * shifts.len() {
            return Err(EngineError::Domain(format!(
                "{} coefficients for a {}x{} grid",
                coeffs.len(),
                freq.count(),
                shifts.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(EngineError::Domain("map coefficients must be finite".into()));
        }
        Ok(Self {
            freq,
            shifts,
            coeffs,
            meta,
        })
    }

    pub fn freq(&self) -> &FrequencyGrid {
        &self.freq
    }

    pub fn shifts(&self) -> &ShiftGrid {
        &self.shifts
    }

    pub fn meta(&self) -> &MapMeta {
        &self.meta
    }

    pub fn rows(&self) -> usize {
        self.freq.count()
    }

    pub fn cols(&self) -> usize {
        self.shifts.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i * self.cols() + j]
    }

    pub fn try_get(&self, i: usize, j: usize) -> Option<f64> {
        (i < self.rows() && j < self.cols()).then(|| self.get(i, j))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.cols();
        &self.coeffs[i * c..(i + 1) * c]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|w| c * w).collect(),
            ..self.clone()
        }
    }

    /// `(i, j, |W|)` of the largest magnitude, first in row-major order on ties.
    pub fn abs_argmax(&self) -> (usize, usize, f64) {
        let mut best = (0, 0.0);
        for (k, w) in self.coeffs.iter().enumerate() {
            if w.abs() > best.1 {
                best = (k, w.abs());
            }
        }
        (best.0 / self.cols(), best.0 % self.cols(), best.1)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> EngineResult<()> {
        write_file(path.as_ref(), |out| self.write_csv(out))
    }

    /// Header `omega,T,W`, one row per cell, ω-major, 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "omega,T,W")?;
        for (i, omega) in self.freq.values().iter().enumerate() {
            for j in 0..self.cols() {
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e}",
                    omega,
                    self.shifts.time(j),
                    self.get(i, j)
                )?;
            }
        }
        Ok(())
    }

    pub fn save_pgm(&self, path: impl AsRef<Path>) -> EngineResult<()> {
        write_file(path.as_ref(), |out| self.write_pgm(out))
    }

    /// Binary 8-bit PGM of |W| scaled to the map maximum: highest frequency
    /// in the top row, shifts ascending left to right.
    pub fn write_pgm<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let (_, _, max) = self.abs_argmax();
        write!(out, "P5\n{} {}\n255\n", self.cols(), self.rows())?;
        let mut pixels = Vec::with_capacity(self.coeffs.len());
        for i in (0..self.rows()).rev() {
            for w in self.row(i) {
                let level = if max > 0.0 {
                    (255.0 * w.abs() / max).round()
                } else {
                    0.0
                };
                pixels.push(level as u8);
            }
        }
        out.write_all(&pixels)
    }

    pub fn load_csv(path: impl AsRef<Path>, wavelet: WaveletKind) -> EngineResult<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| EngineError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::read_csv(file, wavelet)
    }

    pub fn read_csv<R: Read>(input: R, wavelet: WaveletKind) -> EngineResult<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut rows: Vec<(u64, [f64; 3])> = Vec::new();
        for (n, record) in reader.records().enumerate() {
            let record = record.map_err(|e| EngineError::Parse {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line());
            if n == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
                continue;
            }
            if record.len() != 3 {
                return Err(EngineError::Parse {
                    line,
                    message: format!("expected `omega,T,W`, found {} fields", record.len()),
                });
            }
            let mut vals = [0.0; 3];
            for (slot, field) in vals.iter_mut().zip(record.iter()) {
                *slot = field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| EngineError::Parse {
                        line,
                        message: format!("not a finite number: `{field}`"),
                    })?;
            }
            rows.push((line, vals));
        }
        if rows.is_empty() {
            return Err(EngineError::Parse {
                line: 1,
                message: "map file has no data rows".into(),
            });
        }

        let first_omega = rows[0].1[0];
        let cols = rows.iter().take_while(|r| r.1[0] == first_omega).count();
        if rows.len() % cols != 0 {
            return Err(EngineError::Parse {
                line: rows[rows.len() - 1].0,
                message: format!("{} rows do not form a grid of width {cols}", rows.len()),
            });
        }
        let shift_values: Vec<f64> = rows[..cols].iter().map(|r| r.1[1]).collect();
        let mut omegas = Vec::with_capacity(rows.len() / cols);
        for chunk in rows.chunks(cols) {
            let omega = chunk[0].1[0];
            for (k, (line, r)) in chunk.iter().enumerate() {
                if r[0] != omega || r[1] != shift_values[k] {
                    return Err(EngineError::Parse {
                        line: *line,
                        message: "rows are not ω-major over a shared shift grid".into(),
                    });
                }
            }
            omegas.push(omega);
        }
        let freq = FrequencyGrid::from_values(omegas)?;
        let shifts = ShiftGrid::from_values(&shift_values)?;
        let coeffs = rows.iter().map(|r| r.1[2]).collect();
        Self::new(
            freq,
            shifts,
            coeffs,
            MapMeta {
                wavelet,
                signal_grid: None,
            },
        )
    }
}

fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> EngineResult<()> {
    let io_err = |source| EngineError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    body(&mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}
