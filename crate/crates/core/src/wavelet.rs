//! Real analyzing wavelets with closed-form spectra.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Carrier of the real Morlet wavelet.
pub const MORLET_CARRIER: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveletKind {
    /// `(1 - z²) exp(-z²/2)`
    #[default]
    MexicanHat,
    /// `(cos(κz) - exp(-κ²/2)) exp(-z²/2)` with `κ = 6`; the constant term
    /// makes the mean exactly zero.
    Morlet,
}

impl WaveletKind {
    pub fn name(&self) -> &'static str {
        match self {
            WaveletKind::MexicanHat => "mexican-hat",
            WaveletKind::Morlet => "morlet",
        }
    }
}

impl fmt::Display for WaveletKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WaveletKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mexican-hat" | "mexican_hat" | "ricker" => Ok(WaveletKind::MexicanHat),
            "morlet" => Ok(WaveletKind::Morlet),
            other => Err(format!("unknown wavelet `{other}` (expected mexican-hat or morlet)")),
        }
    }
}

/// A real-valued analyzing wavelet `g(z)`, optionally scaled by a constant
/// amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzingWavelet {
    kind: WaveletKind,
    amplitude: f64,
}

impl Default for AnalyzingWavelet {
    fn default() -> Self {
        Self::new(WaveletKind::default())
    }
}

impl AnalyzingWavelet {
    pub fn new(kind: WaveletKind) -> Self {
        Self {
            kind,
            amplitude: 1.0,
        }
    }

    pub fn mexican_hat() -> Self {
        Self::new(WaveletKind::MexicanHat)
    }

    pub fn morlet() -> Self {
        Self::new(WaveletKind::Morlet)
    }

    /// The same wavelet multiplied by `c`.
    pub fn scaled(self, c: f64) -> Self {
        Self {
            amplitude: self.amplitude * c,
            ..self
        }
    }

    pub fn kind(&self) -> WaveletKind {
        self.kind
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    #[inline]
    pub fn evaluate(&self, z: f64) -> f64 {
        let z2 = z * z;
        let shape = match self.kind {
            WaveletKind::MexicanHat => (1.0 - z2) * (-0.5 * z2).exp(),
            WaveletKind::Morlet => {
                let k = MORLET_CARRIER;
                ((k * z).cos() - (-0.5 * k * k).exp()) * (-0.5 * z2).exp()
            }
        };
        self.amplitude * shape
    }

    /// Fourier transform `ĝ(ξ) = ∫ g(z) exp(-iξz) dz`, real for these even
    /// wavelets.
    pub fn spectrum(&self, xi: f64) -> f64 {
        let root = (2.0 * PI).sqrt();
        let x2 = xi * xi;
        let shape = match self.kind {
            WaveletKind::MexicanHat => root * x2 * (-0.5 * x2).exp(),
            WaveletKind::Morlet => {
                let k = MORLET_CARRIER;
                let lobes = 0.5
                    * ((-0.5 * (xi - k).powi(2)).exp() + (-0.5 * (xi + k).powi(2)).exp());
                root * (lobes - (-0.5 * k * k).exp() * (-0.5 * x2).exp())
            }
        };
        self.amplitude * shape
    }

    /// |g(z)| < 1e-12 beyond this radius.
    pub fn support_radius(&self) -> f64 {
        8.0
    }

    /// Dimensionless frequency `u` at which the √s-weighted response
    /// `√u |ĝ(u)|` to a pure tone peaks. A tone at ω rad/s produces its
    /// largest coefficient at dilation `s = ω / center_frequency`.
    pub fn center_frequency(&self) -> f64 {
        match self.kind {
            WaveletKind::MexicanHat => 2.5f64.sqrt(),
            WaveletKind::Morlet => {
                let k = MORLET_CARRIER;
                0.5 * (k + (k * k + 2.0).sqrt())
            }
        }
    }

    /// Dilation applied to `(t - T)` for the map row labelled `omega`.
    #[inline]
    pub fn dilation(&self, omega: f64) -> f64 {
        omega / self.center_frequency()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_uniform;

    #[test]
    fn mexican_hat_closed_form() {
        let g = AnalyzingWavelet::mexican_hat();
        assert_eq!(g.evaluate(0.0), 1.0);
        assert_eq!(g.evaluate(1.0), 0.0);
        // -3 exp(-2)
        assert!((g.evaluate(2.0) - (-0.406_005_849_709_838_1)).abs() < 1e-15);
    }

    #[test]
    fn zero_mean_and_support() {
        for g in [AnalyzingWavelet::mexican_hat(), AnalyzingWavelet::morlet()] {
            let r = g.support_radius();
            let mean = integrate_uniform(|z| g.evaluate(z), -r, r, 16001);
            assert!(mean.abs() <= 1e-8, "{:?}: {mean}", g.kind());
            for z in [r, r + 0.5, 2.0 * r, -r] {
                assert!(g.evaluate(z).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectrum_matches_direct_fourier_integral() {
        for g in [AnalyzingWavelet::mexican_hat(), AnalyzingWavelet::morlet()] {
            for xi in [0.0, 0.7, 1.4, 3.0, 6.0, 9.0] {
                let direct = integrate_uniform(|z| g.evaluate(z) * (xi * z).cos(), -12.0, 12.0, 24001);
                assert!((direct - g.spectrum(xi)).abs() < 1e-9, "{:?} ξ={xi}", g.kind());
            }
        }
    }

    #[test]
    fn center_frequency_maximizes_weighted_response() {
        for g in [AnalyzingWavelet::mexican_hat(), AnalyzingWavelet::morlet()] {
            let c = g.center_frequency();
            let resp = |u: f64| u.sqrt() * g.spectrum(u).abs();
            assert!(resp(c) >= resp(c * 1.001));
            assert!(resp(c) >= resp(c / 1.001));
        }
    }

    #[test]
    fn kind_parses() {
        assert_eq!("mexican-hat".parse::<WaveletKind>(), Ok(WaveletKind::MexicanHat));
        assert_eq!("Morlet".parse::<WaveletKind>(), Ok(WaveletKind::Morlet));
        assert!("haar".parse::<WaveletKind>().is_err());
    }
}
