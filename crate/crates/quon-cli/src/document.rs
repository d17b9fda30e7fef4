//! JSON diagram documents. Complex numbers are `[re, im]` pairs.
//!
//! ```json
//! {
//!   "format": 1,
//!   "width_in": 0,
//!   "width_out": 0,
//!   "amplitude": [1.0, 0.0],
//!   "elements": [{ "tag": "cap", "j": 0 }, { "tag": "cup", "j": 0 }],
//!   "parity_cuts": [],
//!   "open_intervals": [],
//!   "boundary_tracking": null
//! }
//! ```
//!
//! An open interval lists `side`, `start` and optionally `pairing`, the
//! element list creating its strands; without it the default nested
//! pairing of `size` strands is used.

use crate::error::CliError;
use quon_core::factory::FactoryLedger;
use quon_core::quon::{OpenInterval, ParityCut, QuonDiagram, Side, StrandMark};
use quon_core::{Complex64, Element, MajoranaDiagram};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalDocument {
    pub side: Side,
    pub start: usize,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<Element>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub format: u32,
    pub width_in: usize,
    pub width_out: usize,
    pub amplitude: Complex64,
    pub elements: Vec<Element>,
    #[serde(default)]
    pub parity_cuts: Vec<ParityCut>,
    #[serde(default)]
    pub open_intervals: Vec<IntervalDocument>,
    #[serde(default)]
    pub boundary_tracking: Option<Vec<StrandMark>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<FactoryLedger>,
}

impl DiagramDocument {
    pub fn from_quon(q: &QuonDiagram, ledger: Option<FactoryLedger>) -> Self {
        let open_intervals = q
            .open_intervals
            .iter()
            .map(|iv| {
                let default = OpenInterval::new(iv.side, iv.start, iv.size).ok();
                let pairing = (default.as_ref() != Some(iv)).then(|| iv.pairing.elements.clone());
                IntervalDocument { side: iv.side, start: iv.start, size: iv.size, pairing }
            })
            .collect();
        Self {
            format: FORMAT_VERSION,
            width_in: q.core.width_in,
            width_out: q.core.width_out,
            amplitude: q.core.amplitude,
            elements: q.core.elements.clone(),
            parity_cuts: q.parity_cuts.clone(),
            open_intervals,
            boundary_tracking: q.boundary_tracking.clone(),
            ledger,
        }
    }

    /// Rebuilds the diagram and re-checks every structural invariant.
    pub fn to_quon(&self) -> Result<QuonDiagram, CliError> {
        let violation = |check: &str, detail: String| CliError::InvariantViolation(format!("{check}: {detail}"));
        if self.format != FORMAT_VERSION {
            return Err(violation("format", format!("unsupported version {}", self.format)));
        }
        if self.width_in % 2 == 1 || self.width_out % 2 == 1 {
            return Err(violation("even width", format!("widths {} and {} must be even", self.width_in, self.width_out)));
        }
        if !self.amplitude.is_finite() {
            return Err(violation("amplitude", "must be finite".into()));
        }
        let core = MajoranaDiagram { width_in: self.width_in, width_out: self.width_out, elements: self.elements.clone(), amplitude: self.amplitude };
        check_positions(&core).map_err(|d| violation("element positions", d))?;
        core.validate().map_err(|e| violation("widths", e.to_string()))?;
        let mut open_intervals = Vec::with_capacity(self.open_intervals.len());
        for iv in &self.open_intervals {
            let built = match &iv.pairing {
                None => OpenInterval::new(iv.side, iv.start, iv.size),
                Some(elements) => MajoranaDiagram::new(0, elements.clone(), Complex64::new(1.0, 0.0))
                    .and_then(|p| OpenInterval::with_pairing(iv.side, iv.start, p)),
            }
            .map_err(|e| violation("interval pairing", e.to_string()))?;
            if built.size != iv.size {
                return Err(violation("interval size", format!("pairing creates {} strands, size says {}", built.size, iv.size)));
            }
            open_intervals.push(built);
        }
        let q = QuonDiagram { core, parity_cuts: self.parity_cuts.clone(), open_intervals, boundary_tracking: self.boundary_tracking.clone() };
        q.validate().map_err(|e| violation("quon structure", e.to_string()))?;
        Ok(q)
    }
}

/// Every element must act on strands that exist at its slice.
fn check_positions(core: &MajoranaDiagram) -> Result<(), String> {
    let mut w = core.width_in;
    for (t, e) in core.elements.iter().enumerate() {
        let ok = match e {
            Element::Cap { j } => *j <= w,
            _ => e.touched().iter().all(|&p| p < w),
        };
        if !ok {
            return Err(format!("element {t} ({e:?}) is outside width {w}"));
        }
        w = (w as isize + e.width_delta()) as usize;
    }
    Ok(())
}

pub fn parse_document(text: &str) -> Result<DiagramDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn parse_diagram(text: &str) -> Result<QuonDiagram, CliError> {
    parse_document(text)?.to_quon()
}

pub fn serialize_document(doc: &DiagramDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn serialize_diagram(q: &QuonDiagram) -> String {
    serialize_document(&DiagramDocument::from_quon(q, None))
}
