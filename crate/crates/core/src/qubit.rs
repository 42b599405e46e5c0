//! Qubit states whose amplitudes are wavelet-map coefficients and whose two
//! versors are dual-function waveforms placed in disjoint component slots.

use std::cmp::Ordering;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::EngineError;
use crate::map::WaveletMap;
use crate::sigfig;
use crate::transform::{DualBasisFunction, ScaleWeighting};
use crate::wavelet::{AnalyzingWavelet, WaveletKind};

/// Norms at or below this are treated as zero by [`normalize`].
pub const MIN_NORM: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum QubitError {
    #[error("both amplitudes come from the same map point ({0}, {1})")]
    Degenerate(usize, usize),
    #[error("map point ({freq_index}, {time_index}) is outside the {rows}x{cols} map")]
    Index {
        freq_index: usize,
        time_index: usize,
        rows: usize,
        cols: usize,
    },
    #[error("qubit norm {0:e} is too small to normalize")]
    NonNormalizable(f64),
    #[error("requested {requested} peaks but found {found} local maxima")]
    Count { requested: usize, found: usize },
    #[error("peak count must be at least 1")]
    ZeroCount,
    #[error("invalid qubit file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub type QubitResult<T> = Result<T, QubitError>;

/// One cell of a wavelet map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapPoint {
    #[serde(serialize_with = "sigfig::serialize")]
    pub omega: f64,
    #[serde(rename = "T", serialize_with = "sigfig::serialize")]
    pub shift: f64,
    #[serde(rename = "W", serialize_with = "sigfig::serialize")]
    pub coeff: f64,
    pub freq_index: usize,
    pub time_index: usize,
}

impl MapPoint {
    pub fn from_map(map: &WaveletMap, freq_index: usize, time_index: usize) -> QubitResult<Self> {
        let coeff = map
            .try_get(freq_index, time_index)
            .ok_or(QubitError::Index {
                freq_index,
                time_index,
                rows: map.rows(),
                cols: map.cols(),
            })?;
        Ok(Self {
            omega: map.freq().values()[freq_index],
            shift: map.shifts().time(time_index),
            coeff,
            freq_index,
            time_index,
        })
    }

    pub fn index(&self) -> (usize, usize) {
        (self.freq_index, self.time_index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Versor {
    M,
    N,
}

impl Versor {
    pub fn label(&self) -> &'static str {
        match self {
            Versor::M => "m",
            Versor::N => "n",
        }
    }
}

/// `Q = W(ω_i, T_j) m̄ + W(ω_p, T_q) n̄` with `m̄ = (0, Ψ)ᵀ`, `n̄ = (Ψ, 0)ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletQubit {
    point_m: MapPoint,
    point_n: MapPoint,
    amplitudes: [f64; 2],
    dual: DualBasisFunction,
    normalized: bool,
}

impl WaveletQubit {
    /// Raw qubit: amplitudes are the two points' coefficients.
    pub fn new(point_m: MapPoint, point_n: MapPoint, dual: DualBasisFunction) -> QubitResult<Self> {
        if point_m.index() == point_n.index() {
            return Err(QubitError::Degenerate(point_m.freq_index, point_m.time_index));
        }
        Ok(Self {
            amplitudes: [point_m.coeff, point_n.coeff],
            point_m,
            point_n,
            dual,
            normalized: false,
        })
    }

    pub fn point_m(&self) -> &MapPoint {
        &self.point_m
    }

    pub fn point_n(&self) -> &MapPoint {
        &self.point_n
    }

    pub fn dual(&self) -> &DualBasisFunction {
        &self.dual
    }

    /// Amplitude on m̄.
    pub fn alpha(&self) -> f64 {
        self.amplitudes[0]
    }

    /// Amplitude on n̄.
    pub fn beta(&self) -> f64 {
        self.amplitudes[1]
    }

    pub fn amplitudes(&self) -> [f64; 2] {
        self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Short identifier built from the two grid indices.
    pub fn id(&self) -> String {
        format!(
            "m({},{})/n({},{})",
            self.point_m.freq_index,
            self.point_m.time_index,
            self.point_n.freq_index,
            self.point_n.time_index
        )
    }

    pub fn to_json(&self) -> String {
        let doc = QubitDoc {
            point_m: MapPoint {
                coeff: self.alpha(),
                ..self.point_m
            },
            point_n: MapPoint {
                coeff: self.beta(),
                ..self.point_n
            },
            wavelet_kind: self.dual.kind(),
            admissibility: self.dual.admissibility(),
            normalized: self.normalized,
        };
        serde_json::to_string_pretty(&doc).expect("qubit serialization is infallible")
    }

    /// Parses an exported qubit. The amplitudes are the stored `W` values.
    pub fn from_json(text: &str, weighting: ScaleWeighting) -> QubitResult<Self> {
        let doc: QubitDoc = serde_json::from_str(text)?;
        let dual = DualBasisFunction::with_constant(
            AnalyzingWavelet::new(doc.wavelet_kind),
            doc.admissibility,
            weighting,
        )?;
        let mut q = Self::new(doc.point_m, doc.point_n, dual)?;
        q.normalized = doc.normalized;
        Ok(q)
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> QubitResult<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|source| QubitError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load_json(path: impl AsRef<Path>, weighting: ScaleWeighting) -> QubitResult<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| QubitError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text, weighting)
    }
}

#[derive(Serialize, Deserialize)]
struct QubitDoc {
    point_m: MapPoint,
    point_n: MapPoint,
    wavelet_kind: WaveletKind,
    #[serde(serialize_with = "sigfig::serialize")]
    admissibility: f64,
    normalized: bool,
}

pub fn encode_qubit(
    map: &WaveletMap,
    p1: (usize, usize),
    p2: (usize, usize),
    dual: &DualBasisFunction,
) -> QubitResult<WaveletQubit> {
    if p1 == p2 {
        return Err(QubitError::Degenerate(p1.0, p1.1));
    }
    let point_m = MapPoint::from_map(map, p1.0, p1.1)?;
    let point_n = MapPoint::from_map(map, p2.0, p2.1)?;
    WaveletQubit::new(point_m, point_n, *dual)
}

/// `m̄(t) = (0, Ψ(s_i (t - T_j)))`, `n̄(t) = (Ψ(s_p (t - T_q)), 0)`.
pub fn versor_waveform(qubit: &WaveletQubit, which: Versor, t: f64) -> [f64; 2] {
    let dual = qubit.dual();
    let point = match which {
        Versor::M => qubit.point_m(),
        Versor::N => qubit.point_n(),
    };
    let s = dual.base().dilation(point.omega);
    let psi = dual.evaluate(s * (t - point.shift));
    match which {
        Versor::M => [0.0, psi],
        Versor::N => [psi, 0.0],
    }
}

pub fn qubit_norm(qubit: &WaveletQubit) -> f64 {
    qubit.alpha().hypot(qubit.beta())
}

pub fn normalize(qubit: &WaveletQubit) -> QubitResult<WaveletQubit> {
    let norm = qubit_norm(qubit);
    if !(norm > MIN_NORM) {
        return Err(QubitError::NonNormalizable(norm));
    }
    let mut out = qubit.clone();
    out.amplitudes = [qubit.alpha() / norm, qubit.beta() / norm];
    out.normalized = true;
    Ok(out)
}

/// The `k` largest strict local maxima of |W| over interior cells (all 8
/// neighbours strictly smaller), by descending |W|, then lower frequency
/// index, then earlier shift.
pub fn select_peaks(map: &WaveletMap, k: usize) -> QubitResult<Vec<MapPoint>> {
    if k == 0 {
        return Err(QubitError::ZeroCount);
    }
    let (rows, cols) = (map.rows(), map.cols());
    let mut found = Vec::new();
    for i in 1..rows.saturating_sub(1) {
        for j in 1..cols.saturating_sub(1) {
            let v = map.get(i, j).abs();
            let is_peak = (i - 1..=i + 1)
                .flat_map(|a| (j - 1..=j + 1).map(move |b| (a, b)))
                .filter(|&cell| cell != (i, j))
                .all(|(a, b)| map.get(a, b).abs() < v);
            if is_peak {
                found.push((v, i, j));
            }
        }
    }
    if found.len() < k {
        return Err(QubitError::Count {
            requested: k,
            found: found.len(),
        });
    }
    found.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    found
        .into_iter()
        .take(k)
        .map(|(_, i, j)| MapPoint::from_map(map, i, j))
        .collect()
}
