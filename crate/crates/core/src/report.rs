//! End-to-end analysis of one symbol.

use serde::{Deserialize, Serialize};

use crate::exact::{self, Rational};
use crate::growth::{expected_crossings, stokes_word_with_retries, GrowthDiagram};
use crate::lattice::{newton_polygon, operator_profile, PolygonJson};
use crate::poly::{parse_polynomial, preset_family, DynkinType, LaurentPolynomial};
use crate::words::CyclicWord;
use crate::Error;

/// A preset name such as `E8`, or polynomial text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineInput {
    Preset(DynkinType),
    Polynomial(String),
}

impl PipelineInput {
    /// Preset names win over polynomial text.
    pub fn detect(text: &str) -> Self {
        match text.trim().parse::<DynkinType>() {
            Ok(t) => PipelineInput::Preset(t),
            Err(_) => PipelineInput::Polynomial(text.to_string()),
        }
    }

    pub fn polynomial(&self) -> Result<LaurentPolynomial, Error> {
        Ok(match self {
            PipelineInput::Preset(t) => preset_family(*t),
            PipelineInput::Polynomial(text) => parse_polynomial(text)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordReport {
    pub canonical: String,
    pub dual: String,
    pub letters: Vec<u32>,
    pub rank: usize,
    pub length: usize,
}

impl From<&CyclicWord> for WordReport {
    fn from(w: &CyclicWord) -> Self {
        let c = w.canonical();
        WordReport {
            canonical: c.to_string(),
            dual: c.dual().canonical().to_string(),
            letters: c.letters().to_vec(),
            rank: c.rank(),
            length: c.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: String,
    pub preset: Option<DynkinType>,
    pub swapped: bool,
    pub polynomial: String,
    pub polygon: PolygonJson,
    pub genus: u64,
    pub points_at_infinity: usize,
    pub homology_rank: u64,
    pub upward_sides: usize,
    pub operator_order: u64,
    pub trivial_local_system: bool,
    pub growth: GrowthDiagram,
    #[serde(with = "exact::serde_str")]
    pub expected_crossings: Rational,
    pub word: WordReport,
    pub seed: u64,
    pub attempt: u64,
    pub resolution: usize,
}

impl AnalysisReport {
    /// Checks `rank = 2 genus + points at infinity - 1` and that the word has
    /// as many letters as the diagram has crossings per period.
    pub fn invariants_hold(&self) -> bool {
        let rank_ok = self.homology_rank + 1 == 2 * self.genus + self.points_at_infinity as u64;
        let len_ok = Rational::from_integer((self.word.length as i64).into()) == self.expected_crossings;
        rank_ok && len_ok
    }
}

pub fn run_pipeline(input: &str, seed: u64, resolution: usize, swap: bool) -> Result<AnalysisReport, Error> {
    let source = PipelineInput::detect(input);
    let mut poly = source.polynomial()?;
    if swap {
        poly = poly.swap_variables();
    }
    let polygon = newton_polygon(&poly)?;
    let profile = operator_profile(&poly)?;
    let (growth, word, attempt) = stokes_word_with_retries(&polygon, seed, resolution)?;
    Ok(AnalysisReport {
        input: input.to_string(),
        preset: match source {
            PipelineInput::Preset(t) => Some(t),
            PipelineInput::Polynomial(_) => None,
        },
        swapped: swap,
        polynomial: poly.to_string(),
        polygon: polygon.to_json(),
        genus: polygon.genus(),
        points_at_infinity: polygon.points_at_infinity(),
        homology_rank: polygon.homology_rank(),
        upward_sides: polygon.upward_sides().len(),
        operator_order: profile.order,
        trivial_local_system: profile.trivial_local_system,
        expected_crossings: expected_crossings(&growth),
        growth,
        word: WordReport::from(&word),
        seed,
        attempt,
        resolution,
    })
}

#[cfg(test)]
mod tests {
    use num_traits::Signed;

    use super::*;

    #[test]
    fn e8_report() {
        let r = run_pipeline("E8", 0, 4096, false).unwrap();
        assert_eq!(r.genus, 4);
        assert_eq!(r.homology_rank, 8);
        assert_eq!(
            r.word.canonical,
            CyclicWord::parse("(s1 s2)^8", Some(3)).unwrap().canonical().to_string()
        );
        assert!(r.invariants_hold());
    }

    #[test]
    fn d4_swapped_report() {
        let r = run_pipeline("D4", 0, 4096, true).unwrap();
        assert_eq!(r.operator_order, 2);
        assert!(!r.trivial_local_system);
        assert_eq!(r.word.letters, vec![1, 1, 1, 1]);
    }

    #[test]
    fn a4_report() {
        let r = run_pipeline("A4", 0, 4096, false).unwrap();
        assert_eq!(r.upward_sides, 1);
        assert_eq!(r.growth.points.len(), 2);
        let half = &r.growth.points[0].phase - &r.growth.points[1].phase;
        assert_eq!(half.abs(), exact::ratio(1, 2));
    }

    #[test]
    fn polynomial_input_and_errors() {
        let r = run_pipeline("p^2 + x^3 + 1", 0, 4096, false).unwrap();
        assert!(r.preset.is_none());
        assert_eq!(r.word.letters, vec![1; 5]);
        assert!(matches!(run_pipeline("p^2 +", 0, 4096, false), Err(Error::Poly(_))));
        assert!(matches!(
            run_pipeline("x^3 + x", 0, 4096, false),
            Err(Error::Lattice(_))
        ));
    }

    #[test]
    fn deterministic_json() {
        let a = serde_json::to_string(&run_pipeline("D5", 7, 4096, false).unwrap()).unwrap();
        let b = serde_json::to_string(&run_pipeline("D5", 7, 4096, false).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
