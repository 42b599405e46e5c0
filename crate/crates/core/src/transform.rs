//! Forward wavelet transform, dual function, discrete resolution-of-identity
//! kernel and reconstruction.
//!
//! Map rows are labelled by angular frequency ω (rad/s). The wavelet is
//! evaluated at `s * (t - T)` with dilation `s = ω / c`, where `c` is the
//! wavelet's center frequency, so a tone at ω₀ peaks on the row labelled ω₀.
//! All integrals over the dilation use the trapezoid rule in `ln ω`.

use rayon::prelude::*;

use crate::error::{EngineError, EngineResult};
use crate::grid::{FrequencyGrid, ShiftGrid};
use crate::map::{MapMeta, WaveletMap};
use crate::quadrature;
use crate::signal::{SampleGrid, TimeSeries};
use crate::wavelet::{AnalyzingWavelet, WaveletKind};

/// Relative change allowed when refining the admissibility quadrature.
pub const ADMISSIBILITY_TOLERANCE: f64 = 1e-6;

/// Powers of the dilation used by the analysis, synthesis and kernel sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleWeighting {
    /// Analysis `√s`, synthesis `√s`, kernel `s`: with `Ψ = g / C_g` the
    /// kernel integrates to the identity on the band.
    #[default]
    Unitary,
    /// Analysis `√s`, synthesis `s`, kernel `s³`. Does not reproduce the
    /// identity; kept to measure how far it departs.
    Literal,
}

impl ScaleWeighting {
    pub fn analysis_exponent(&self) -> f64 {
        0.5
    }

    pub fn synthesis_exponent(&self) -> f64 {
        match self {
            ScaleWeighting::Unitary => 0.5,
            ScaleWeighting::Literal => 1.0,
        }
    }

    pub fn kernel_exponent(&self) -> f64 {
        match self {
            ScaleWeighting::Unitary => 1.0,
            ScaleWeighting::Literal => 3.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScaleWeighting::Unitary => "unitary",
            ScaleWeighting::Literal => "literal",
        }
    }
}

impl std::str::FromStr for ScaleWeighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unitary" => Ok(ScaleWeighting::Unitary),
            "literal" => Ok(ScaleWeighting::Literal),
            other => Err(format!("unknown weighting `{other}` (expected unitary or literal)")),
        }
    }
}

/// Log-spaced quadrature over ξ for the admissibility integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityQuadrature {
    pub xi_min: f64,
    pub xi_max: f64,
    pub n: usize,
}

impl Default for AdmissibilityQuadrature {
    fn default() -> Self {
        Self {
            xi_min: 1e-3,
            xi_max: 1e2,
            n: 4096,
        }
    }
}

/// `C_g = ∫_0^∞ |ĝ(ξ)|² / ξ dξ`, checked for stability under doubling the
/// node count and under widening the range.
pub fn admissibility_constant(
    wavelet: &AnalyzingWavelet,
    quad: AdmissibilityQuadrature,
) -> EngineResult<f64> {
    let AdmissibilityQuadrature { xi_min, xi_max, n } = quad;
    if !(xi_min > 0.0 && xi_max > xi_min && xi_max.is_finite()) {
        return Err(EngineError::Domain(format!(
            "admissibility range must satisfy 0 < ξ_min < ξ_max, got [{xi_min}, {xi_max}]"
        )));
    }
    if n < 1000 {
        return Err(EngineError::Domain(format!(
            "admissibility quadrature needs at least 1000 nodes, got {n}"
        )));
    }
    let integrand = |xi: f64| {
        let g = wavelet.spectrum(xi);
        g * g / xi
    };
    let base = quadrature::integrate_log(integrand, xi_min, xi_max, n);
    let doubled = quadrature::integrate_log(integrand, xi_min, xi_max, 2 * n);

    let (wide_min, wide_max) = (xi_min / 10.0, xi_max * 2.0);
    let spacing = (xi_max / xi_min).ln() / (n - 1) as f64;
    let wide_n = ((wide_max / wide_min).ln() / spacing).ceil() as usize + 1;
    let widened = quadrature::integrate_log(integrand, wide_min, wide_max, wide_n);

    if !(base.is_finite() && base > 0.0) {
        return Err(EngineError::Convergence(format!(
            "integral evaluated to {base}"
        )));
    }
    for (what, other) in [("doubling nodes", doubled), ("widening range", widened)] {
        let rel = ((other - base) / base).abs();
        if rel > ADMISSIBILITY_TOLERANCE {
            return Err(EngineError::Convergence(format!(
                "{what} changed the result by {rel:.3e} relative ({base} -> {other})"
            )));
        }
    }
    Ok(base)
}

/// Dual function `Ψ(z) = g(z) / C_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualBasisFunction {
    base: AnalyzingWavelet,
    admissibility: f64,
    weighting: ScaleWeighting,
}

impl DualBasisFunction {
    /// Builds a dual from a known admissibility constant, e.g. one read back
    /// from an exported qubit.
    pub fn with_constant(
        base: AnalyzingWavelet,
        admissibility: f64,
        weighting: ScaleWeighting,
    ) -> EngineResult<Self> {
        if !(admissibility.is_finite() && admissibility > 0.0) {
            return Err(EngineError::Domain(format!(
                "admissibility constant must be positive and finite, got {admissibility}"
            )));
        }
        Ok(Self {
            base,
            admissibility,
            weighting,
        })
    }

    #[inline]
    pub fn evaluate(&self, z: f64) -> f64 {
        self.base.evaluate(z) / self.admissibility
    }

    pub fn base(&self) -> &AnalyzingWavelet {
        &self.base
    }

    pub fn admissibility(&self) -> f64 {
        self.admissibility
    }

    pub fn weighting(&self) -> ScaleWeighting {
        self.weighting
    }

    pub fn kind(&self) -> WaveletKind {
        self.base.kind()
    }
}

pub fn dual_function(wavelet: &AnalyzingWavelet) -> EngineResult<DualBasisFunction> {
    dual_function_with(wavelet, AdmissibilityQuadrature::default(), ScaleWeighting::default())
}

pub fn dual_function_with(
    wavelet: &AnalyzingWavelet,
    quad: AdmissibilityQuadrature,
    weighting: ScaleWeighting,
) -> EngineResult<DualBasisFunction> {
    let c = admissibility_constant(wavelet, quad)?;
    DualBasisFunction::with_constant(*wavelet, c, weighting)
}

/// `W(ω, T) = √s Σ_k f(t_k) g(s (t_k - T)) w_k` with `s = ω / c` and
/// trapezoid weights `w_k`; terms with `|s (t_k - T)|` beyond the support
/// radius are skipped.
pub fn forward_cwt(
    signal: &TimeSeries,
    wavelet: &AnalyzingWavelet,
    freq: &FrequencyGrid,
    shifts: &ShiftGrid,
) -> EngineResult<WaveletMap> {
    if freq.count() == 0 || shifts.is_empty() {
        return Err(EngineError::Domain("empty frequency or shift grid".into()));
    }
    let grid = signal.grid();
    let radius = wavelet.support_radius();
    let (t_lo, t_hi) = (grid.t0, grid.t_end());
    for &omega in freq.values() {
        let half = radius / wavelet.dilation(omega);
        let reach = shifts.t0() - half <= t_hi && shifts.t_end() + half >= t_lo;
        if !reach {
            return Err(EngineError::Domain(format!(
                "no shift places the wavelet at ω = {omega} over the signal"
            )));
        }
    }

    let samples = signal.samples();
    let n = samples.len();
    let dt = grid.dt;
    let cols = shifts.len();
    let rows: Vec<Vec<f64>> = freq
        .values()
        .par_iter()
        .map(|&omega| {
            let s = wavelet.dilation(omega);
            let half = radius / s;
            let prefactor = s.sqrt();
            (0..cols)
                .map(|j| {
                    let shift = shifts.time(j);
                    let range = sample_range(grid, shift - half, shift + half);
                    let mut acc = 0.0;
                    for k in range {
                        let w = quadrature::uniform_weight(k, n, dt);
                        acc += samples[k] * wavelet.evaluate(s * (grid.time(k) - shift)) * w;
                    }
                    prefactor * acc
                })
                .collect()
        })
        .collect();

    WaveletMap::new(
        freq.clone(),
        *shifts,
        rows.concat(),
        MapMeta {
            wavelet: wavelet.kind(),
            signal_grid: Some(grid),
        },
    )
}

fn sample_range(grid: SampleGrid, lo: f64, hi: f64) -> std::ops::Range<usize> {
    let start = ((lo - grid.t0) / grid.dt).ceil().max(0.0) as usize;
    let end = ((hi - grid.t0) / grid.dt).floor();
    let end = if end < 0.0 {
        0
    } else {
        (end as usize + 1).min(grid.n)
    };
    start.min(end)..end
}

/// Discrete kernel
/// `K(t, t') = Σ_ω Σ_T s^q g(s (t' - T)) Ψ(s (t - T)) Δs ΔT`
/// with `q` the weighting's kernel exponent.
pub fn delta_kernel(
    wavelet: &AnalyzingWavelet,
    dual: &DualBasisFunction,
    t: f64,
    t_prime: f64,
    freq: &FrequencyGrid,
    shifts: &ShiftGrid,
) -> EngineResult<f64> {
    if freq.count() == 0 || shifts.is_empty() {
        return Err(EngineError::Domain("empty frequency or shift grid".into()));
    }
    let exponent = dual.weighting().kernel_exponent();
    let c = wavelet.center_frequency();
    let radius = wavelet.support_radius().min(dual.base().support_radius());
    let mut total = 0.0;
    for (omega, d_omega) in freq.values().iter().zip(freq.weights()) {
        let s = wavelet.dilation(*omega);
        let half = radius / s;
        let lo = t.max(t_prime) - half;
        let hi = t.min(t_prime) + half;
        if lo > hi {
            continue;
        }
        let mut row = 0.0;
        for j in shifts.index_range(lo, hi) {
            let shift = shifts.time(j);
            row += wavelet.evaluate(s * (t_prime - shift))
                * dual.evaluate(s * (t - shift))
                * shifts.weight(j);
        }
        total += s.powf(exponent) * (d_omega / c) * row;
    }
    Ok(total)
}

/// `f̂(t) = Σ_ω Σ_T W(ω, T) s^p Ψ(s (t - T)) Δs ΔT` with `p` the weighting's
/// synthesis exponent.
pub fn reconstruct(
    map: &WaveletMap,
    dual: &DualBasisFunction,
    out_grid: SampleGrid,
) -> EngineResult<TimeSeries> {
    if map.meta().wavelet != dual.kind() {
        return Err(EngineError::Domain(format!(
            "map was computed with {} but the dual is built on {}",
            map.meta().wavelet,
            dual.kind()
        )));
    }
    let out_grid = SampleGrid::new(out_grid.t0, out_grid.dt, out_grid.n)?;
    let shifts = map.shifts();
    let slack = 1e-9 * shifts.dt();
    if out_grid.t0 < shifts.t0() - slack || out_grid.t_end() > shifts.t_end() + slack {
        return Err(EngineError::Extent {
            t0: out_grid.t0,
            t1: out_grid.t_end(),
            lo: shifts.t0(),
            hi: shifts.t_end(),
        });
    }

    let wavelet = dual.base();
    let c = wavelet.center_frequency();
    let exponent = dual.weighting().synthesis_exponent();
    let half_radius = wavelet.support_radius();
    let rows: Vec<(f64, f64)> = map
        .freq()
        .values()
        .iter()
        .zip(map.freq().weights())
        .map(|(&omega, d_omega)| {
            let s = wavelet.dilation(omega);
            (s, s.powf(exponent) * d_omega / c)
        })
        .collect();

    let samples: Vec<f64> = (0..out_grid.n)
        .into_par_iter()
        .map(|k| {
            let t = out_grid.time(k);
            let mut total = 0.0;
            for (i, &(s, row_weight)) in rows.iter().enumerate() {
                let half = half_radius / s;
                let coeffs = map.row(i);
                let mut row = 0.0;
                for j in shifts.index_range(t - half, t + half) {
                    row += coeffs[j] * dual.evaluate(s * (t - shifts.time(j))) * shifts.weight(j);
                }
                total += row_weight * row;
            }
            total
        })
        .collect();
    Ok(TimeSeries::from_grid(out_grid, samples)?)
}

/// `‖original - reconstructed‖₂ / ‖original‖₂`.
pub fn reconstruction_error(
    original: &TimeSeries,
    reconstructed: &TimeSeries,
) -> EngineResult<f64> {
    if !original.grid().matches(&reconstructed.grid(), 1e-9) {
        return Err(EngineError::Grid(format!(
            "{:?} vs {:?}",
            original.grid(),
            reconstructed.grid()
        )));
    }
    let norm = original.samples().iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(EngineError::UndefinedMetric);
    }
    let diff = original
        .samples()
        .iter()
        .zip(reconstructed.samples())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(diff / norm)
}
