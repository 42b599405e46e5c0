//! Two-qubit relations: coefficients `U_ij` over the pair versors, the
//! separated (product) form, and the four zero-pattern conditions with their
//! two-term reduced forms.
//!
//! Index convention: the first index of `U_ij` names the versor of the first
//! qubit and the second index that of the second qubit, with 1 ↦ m̄ and
//! 2 ↦ n̄. `U_12` therefore multiplies the pair (m̄₁, n̄₂).

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::qubit::{Versor, WaveletQubit};
use crate::sigfig;

/// Default zero threshold, relative to `max |U_ij|`.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-10;

pub const INDEX_CONVENTION: &str =
    "U_ij: i = versor of qubit 1, j = versor of qubit 2; 1 = m, 2 = n";

#[derive(Debug, Error)]
pub enum RelationError {
    #[error("coefficient rule returned non-finite {value} for {slot}")]
    NonFinite { slot: Slot, value: f64 },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// One of the four coefficient positions, in `11, 12, 21, 22` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    U11,
    U12,
    U21,
    U22,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::U11, Slot::U12, Slot::U21, Slot::U22];

    pub fn index(&self) -> usize {
        *self as usize
    }

    /// (versor of qubit 1, versor of qubit 2)
    pub fn versors(&self) -> (Versor, Versor) {
        match self {
            Slot::U11 => (Versor::M, Versor::M),
            Slot::U12 => (Versor::M, Versor::N),
            Slot::U21 => (Versor::N, Versor::M),
            Slot::U22 => (Versor::N, Versor::N),
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Slot::U11 => "U11",
            Slot::U12 => "U12",
            Slot::U21 => "U21",
            Slot::U22 => "U22",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationCoefficients {
    pub u11: f64,
    pub u12: f64,
    pub u21: f64,
    pub u22: f64,
}

impl RelationCoefficients {
    pub fn from_array(u: [f64; 4]) -> Self {
        Self {
            u11: u[0],
            u12: u[1],
            u21: u[2],
            u22: u[3],
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.u11, self.u12, self.u21, self.u22]
    }

    pub fn get(&self, slot: Slot) -> f64 {
        self.to_array()[slot.index()]
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |m, u| m.max(u.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_array(self.to_array().map(|u| c * u))
    }
}

/// Result of relating two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    pub coeffs: RelationCoefficients,
    /// Source versors of each component, indexed like [`Slot::ALL`].
    pub versor_labels: [(Versor, Versor); 4],
    pub provenance: (String, String),
}

impl TwoQubitState {
    pub fn new(coeffs: RelationCoefficients, provenance: (String, String)) -> Self {
        Self {
            coeffs,
            versor_labels: Slot::ALL.map(|s| s.versors()),
            provenance,
        }
    }

    /// A state with the given coefficients and placeholder provenance.
    pub fn from_coefficients(u: [f64; 4]) -> Self {
        Self::new(
            RelationCoefficients::from_array(u),
            (String::from("q1"), String::from("q2")),
        )
    }
}

/// `U_ij` as products of amplitudes: `U11 = α₁α₂`, `U12 = α₁β₂`,
/// `U21 = β₁α₂`, `U22 = β₁β₂`.
pub fn relate_product(q1: &WaveletQubit, q2: &WaveletQubit) -> TwoQubitState {
    let coeffs = product_rule(q1.alpha(), q1.beta(), q2.alpha(), q2.beta());
    TwoQubitState::new(RelationCoefficients::from_array(coeffs), (q1.id(), q2.id()))
}

pub fn product_rule(a1: f64, b1: f64, a2: f64, b2: f64) -> [f64; 4] {
    [a1 * a2, a1 * b2, b1 * a2, b1 * b2]
}

/// `U_ij` from an arbitrary rule over `(α₁, β₁, α₂, β₂)`, returned in
/// `11, 12, 21, 22` order.
pub fn relate_general<F>(
    q1: &WaveletQubit,
    q2: &WaveletQubit,
    rule: F,
) -> Result<TwoQubitState, RelationError>
where
    F: Fn(f64, f64, f64, f64) -> [f64; 4],
{
    let u = rule(q1.alpha(), q1.beta(), q2.alpha(), q2.beta());
    for slot in Slot::ALL {
        let value = u[slot.index()];
        if !value.is_finite() {
            return Err(RelationError::NonFinite { slot, value });
        }
    }
    Ok(TwoQubitState::new(
        RelationCoefficients::from_array(u),
        (q1.id(), q2.id()),
    ))
}

/// The four zero-pattern conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellCondition {
    /// `U11 = 0 ∧ U21 = 0`
    A,
    /// `U11 = 0 ∧ U22 = 0`
    B,
    /// `U12 = 0 ∧ U21 = 0`
    C,
    /// `U12 = 0 ∧ U22 = 0`
    D,
}

impl BellCondition {
    pub const ALL: [BellCondition; 4] = [
        BellCondition::A,
        BellCondition::B,
        BellCondition::C,
        BellCondition::D,
    ];

    pub fn zero_slots(&self) -> [Slot; 2] {
        match self {
            BellCondition::A => [Slot::U11, Slot::U21],
            BellCondition::B => [Slot::U11, Slot::U22],
            BellCondition::C => [Slot::U12, Slot::U21],
            BellCondition::D => [Slot::U12, Slot::U22],
        }
    }

    /// Slots that remain in the reduced two-term form.
    pub fn surviving_slots(&self) -> [Slot; 2] {
        match self {
            BellCondition::A => [Slot::U12, Slot::U22],
            BellCondition::B => [Slot::U12, Slot::U21],
            BellCondition::C => [Slot::U11, Slot::U22],
            BellCondition::D => [Slot::U11, Slot::U21],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            BellCondition::A => "A",
            BellCondition::B => "B",
            BellCondition::C => "C",
            BellCondition::D => "D",
        }
    }

    /// Name of the reduced form in exported files.
    pub fn form_name(&self) -> &'static str {
        match self {
            BellCondition::A => "9a",
            BellCondition::B => "9b",
            BellCondition::C => "9c",
            BellCondition::D => "9d",
        }
    }

    pub fn holds(&self, coeffs: &RelationCoefficients, tol: f64) -> bool {
        self.zero_slots()
            .iter()
            .all(|&s| coeffs.get(s).abs() <= tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellClassification {
    /// Conditions that hold, in A, B, C, D order.
    pub matched: Vec<BellCondition>,
    pub tolerance: f64,
    /// All four coefficients are within tolerance of zero.
    pub degenerate: bool,
}

impl BellClassification {
    pub fn is_bell(&self) -> bool {
        !self.matched.is_empty()
    }
}

/// Checks each condition with `|U| ≤ tol` standing in for `U = 0`.
pub fn classify_bell_condition(state: &TwoQubitState, tol: f64) -> BellClassification {
    let tol = tol.max(0.0);
    let matched = BellCondition::ALL
        .into_iter()
        .filter(|c| c.holds(&state.coeffs, tol))
        .collect();
    BellClassification {
        matched,
        tolerance: tol,
        degenerate: state.coeffs.to_array().iter().all(|u| u.abs() <= tol),
    }
}

/// The two surviving terms of a state under one condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedForm {
    pub condition: BellCondition,
    pub terms: [(Slot, f64); 2],
}

impl ReducedForm {
    pub fn of(state: &TwoQubitState, condition: BellCondition) -> Self {
        let terms = condition
            .surviving_slots()
            .map(|s| (s, state.coeffs.get(s)));
        Self { condition, terms }
    }

    /// Coefficients with the vanished slots set to exactly zero.
    pub fn to_coefficients(&self) -> RelationCoefficients {
        let mut u = [0.0; 4];
        for (slot, value) in self.terms {
            u[slot.index()] = value;
        }
        RelationCoefficients::from_array(u)
    }
}

/// `U11 U22 - U12 U21`; zero exactly when the coefficient matrix has rank
/// at most one, i.e. the state factors as a product.
pub fn entanglement_determinant(state: &TwoQubitState) -> f64 {
    let c = &state.coeffs;
    c.u11 * c.u22 - c.u12 * c.u21
}

/// `|det| ≤ tol · max(1, max |U_ij|²)`.
pub fn is_separated(state: &TwoQubitState, tol: f64) -> bool {
    let m = state.coeffs.max_abs();
    entanglement_determinant(state).abs() <= tol * (m * m).max(1.0)
}

/// Serializable summary of a relation.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    #[serde(rename = "U", serialize_with = "sigfig::serialize_slice")]
    pub u: Vec<f64>,
    pub labels: Vec<[&'static str; 2]>,
    pub convention: &'static str,
    #[serde(serialize_with = "sigfig::serialize")]
    pub determinant: f64,
    pub bell_matched: Vec<&'static str>,
    pub bell_forms: Vec<&'static str>,
    pub degenerate: bool,
    pub separated: bool,
    pub tol: ToleranceReport,
    pub provenance: [String; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceReport {
    #[serde(serialize_with = "sigfig::serialize")]
    pub bell: f64,
    #[serde(serialize_with = "sigfig::serialize")]
    pub separated: f64,
}

impl RelationReport {
    /// `bell_tol` is the absolute zero threshold for the conditions,
    /// `sep_tol` the tolerance passed to [`is_separated`].
    pub fn new(state: &TwoQubitState, bell_tol: f64, sep_tol: f64) -> Self {
        let bell = classify_bell_condition(state, bell_tol);
        Self {
            u: state.coeffs.to_array().to_vec(),
            labels: state
                .versor_labels
                .iter()
                .map(|(a, b)| [a.label(), b.label()])
                .collect(),
            convention: INDEX_CONVENTION,
            determinant: entanglement_determinant(state),
            bell_matched: bell.matched.iter().map(|c| c.label()).collect(),
            bell_forms: bell.matched.iter().map(|c| c.form_name()).collect(),
            degenerate: bell.degenerate,
            separated: is_separated(state, sep_tol),
            tol: ToleranceReport {
                bell: bell.tolerance,
                separated: sep_tol,
            },
            provenance: [state.provenance.0.clone(), state.provenance.1.clone()],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("relation serialization is infallible")
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<(), RelationError> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|source| RelationError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{FrequencyGrid, ShiftGrid};
    use crate::map::{MapMeta, WaveletMap};
    use crate::qubit::encode_qubit;
    use crate::transform::dual_function;
    use crate::wavelet::{AnalyzingWavelet, WaveletKind};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn qubit(alpha: f64, beta: f64) -> WaveletQubit {
        let map = WaveletMap::new(
            FrequencyGrid::log_spaced(1.0, 2.0, 2).unwrap(),
            ShiftGrid::new(0.0, 1.0, 1).unwrap(),
            vec![alpha, beta],
            MapMeta {
                wavelet: WaveletKind::MexicanHat,
                signal_grid: None,
            },
        )
        .unwrap();
        let dual = dual_function(&AnalyzingWavelet::mexican_hat()).unwrap();
        encode_qubit(&map, (0, 0), (1, 0), &dual).unwrap()
    }

    #[test]
    fn product_examples() {
        let s = relate_product(&qubit(1.0, 0.0), &qubit(1.0, 0.0));
        assert_eq!(s.coeffs.to_array(), [1.0, 0.0, 0.0, 0.0]);
        let s = relate_product(&qubit(0.3, -2.0), &qubit(0.0, 0.0));
        assert!(s.coeffs.to_array().iter().all(|&u| u == 0.0));
        let s = relate_product(&qubit(2.0, 3.0), &qubit(5.0, 7.0));
        assert_eq!(s.coeffs.to_array(), [10.0, 14.0, 15.0, 21.0]);
        assert_eq!(
            s.versor_labels,
            [
                (Versor::M, Versor::M),
                (Versor::M, Versor::N),
                (Versor::N, Versor::M),
                (Versor::N, Versor::N)
            ]
        );
    }

    #[test]
    fn general_rule() {
        let (q1, q2) = (qubit(0.4, 1.1), qubit(-0.2, 3.0));
        let s = relate_general(&q1, &q2, |_, _, _, _| [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap();
        assert_eq!(
            classify_bell_condition(&s, 0.0).matched,
            vec![BellCondition::B]
        );
        let err = relate_general(&q1, &q2, |_, _, _, _| [0.0, 1.0, f64::NAN, 0.0]).unwrap_err();
        assert!(matches!(err, RelationError::NonFinite { slot: Slot::U21, .. }));
        assert!(err.to_string().contains("U21"));
        let p = relate_general(&q1, &q2, product_rule).unwrap();
        assert_eq!(p, relate_product(&q1, &q2));
    }

    #[test]
    fn classification_examples() {
        let s = TwoQubitState::from_coefficients([0.0, 2.0, 0.0, -1.5]);
        let c = classify_bell_condition(&s, 0.0);
        assert_eq!(c.matched, vec![BellCondition::A]);
        assert_eq!(c.matched[0].form_name(), "9a");
        assert!(!c.degenerate);

        let s = TwoQubitState::from_coefficients([0.0; 4]);
        let c = classify_bell_condition(&s, 0.0);
        assert_eq!(c.matched, BellCondition::ALL.to_vec());
        assert!(c.degenerate);

        let s = TwoQubitState::from_coefficients([1.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            classify_bell_condition(&s, 0.0).matched,
            vec![BellCondition::C, BellCondition::D]
        );
    }

    #[test]
    fn tolerance_treats_small_as_zero() {
        let s = TwoQubitState::from_coefficients([1e-12, 0.7, 0.7, -1e-13]);
        assert!(classify_bell_condition(&s, 0.0).matched.is_empty());
        assert_eq!(
            classify_bell_condition(&s, 1e-10).matched,
            vec![BellCondition::B]
        );
    }

    #[test]
    fn determinant_and_separation() {
        let bell = TwoQubitState::from_coefficients([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]);
        assert!((entanglement_determinant(&bell) + 0.5).abs() <= 1e-15);
        assert!(!is_separated(&bell, 1e-10));
        let phi = TwoQubitState::from_coefficients([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]);
        assert!((entanglement_determinant(&phi) - 0.5).abs() <= 1e-15);
        assert!(is_separated(&TwoQubitState::from_coefficients([0.0; 4]), 0.0));
        let prod = relate_product(&qubit(0.3, -1.7), &qubit(2.2, 0.9));
        assert!(is_separated(&prod, 1e-10));
    }

    #[test]
    fn reduced_form_rebuilds_state() {
        let s = TwoQubitState::from_coefficients([0.0, 0.25, -3.0, 0.0]);
        let form = ReducedForm::of(&s, BellCondition::B);
        assert_eq!(form.to_coefficients(), s.coeffs);
    }

    #[test]
    fn report_json_shape() {
        let s = relate_product(&qubit(1.0, 0.0), &qubit(1.0, 0.0));
        let r = RelationReport::new(&s, 0.0, 1e-10);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["U"][0].as_f64(), Some(1.0));
        assert_eq!(v["labels"][1], serde_json::json!(["m", "n"]));
        assert_eq!(v["bell_matched"], serde_json::json!(["C", "D"]));
        assert_eq!(v["bell_forms"], serde_json::json!(["9c", "9d"]));
        assert_eq!(v["separated"], serde_json::json!(true));
        assert_eq!(v["determinant"].as_f64(), Some(0.0));
    }
}
