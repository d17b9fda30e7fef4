//! Factory move scripts, one move per line (`#` comments):
//!
//! ```text
//! stretch <time> <position> bulk|encoder:top|encoder:bottom|new:top|new:bottom [<element>:left|right ...]
//! insert <time> <position> string-hole|double-string-hole|closed <diagram file>
//! switch <site> flip|scatter <θ>|angle <θ>|dots <j>
//! ```
//!
//! Angles are real numbers or complex numbers written `a+bi`.

use crate::document::parse_diagram;
use crate::error::{line_error, CliError};
use crate::numbers::parse_complex;
use quon_core::factory::{CrossSide, Crossing, Insert, Move, Payload, Region, Segment, Stretch, StretchTarget, Switch, SwitchChange};
use quon_core::quon::Side;
use std::path::Path;

fn number(line: usize, w: Option<&&str>, what: &str) -> Result<usize, CliError> {
    let w = w.ok_or_else(|| line_error(line, format!("missing {what}")))?;
    w.parse().map_err(|_| line_error(line, format!("bad {what} `{w}`")))
}

fn target(line: usize, w: Option<&&str>) -> Result<StretchTarget, CliError> {
    Ok(match w.copied() {
        Some("bulk") => StretchTarget::Bulk,
        Some("encoder:top") => StretchTarget::ExistingEncoder { side: Side::Top },
        Some("encoder:bottom") => StretchTarget::ExistingEncoder { side: Side::Bottom },
        Some("new:top") => StretchTarget::NewEncoder { side: Side::Top },
        Some("new:bottom") => StretchTarget::NewEncoder { side: Side::Bottom },
        other => return Err(line_error(line, format!("bad stretch target `{}`", other.unwrap_or("")))),
    })
}

fn crossing(line: usize, w: &str) -> Result<Crossing, CliError> {
    let (e, side) = w.split_once(':').ok_or_else(|| line_error(line, format!("crossing `{w}` must be <element>:left|right")))?;
    let element = e.parse().map_err(|_| line_error(line, format!("bad element index `{e}`")))?;
    let side = match side {
        "left" => CrossSide::Left,
        "right" => CrossSide::Right,
        _ => return Err(line_error(line, format!("bad crossing side `{side}`"))),
    };
    Ok(Crossing { element, side })
}

/// Parses a script; `closed` payload paths are relative to `base`.
pub fn parse_script(text: &str, base: &Path) -> Result<Vec<Move>, CliError> {
    let mut moves = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let w: Vec<&str> = body.split_whitespace().collect();
        let mv = match w[0] {
            "stretch" => Move::Stretch(Stretch {
                segment: Segment { time_index: number(line, w.get(1), "time")?, position: number(line, w.get(2), "position")? },
                target: target(line, w.get(3))?,
                path: w.iter().skip(4).map(|x| crossing(line, x)).collect::<Result<_, _>>()?,
            }),
            "insert" => {
                let region = Region { time_index: number(line, w.get(1), "time")?, position: number(line, w.get(2), "position")? };
                let payload = match (w.get(3).copied(), w.get(4)) {
                    (Some("string-hole"), None) => Payload::StringHolePair,
                    (Some("double-string-hole"), None) => Payload::DoubleStringHolePair,
                    (Some("closed"), Some(path)) => {
                        let p = base.join(path);
                        let text = std::fs::read_to_string(&p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
                        Payload::Closed(parse_diagram(&text)?.core)
                    }
                    _ => return Err(line_error(line, "expected string-hole, double-string-hole or closed <file>")),
                };
                Move::Insert(Insert { region, payload })
            }
            "switch" => {
                let site = number(line, w.get(1), "site")?;
                let angle = |k: usize| -> Result<_, CliError> {
                    let a = w.get(k).ok_or_else(|| line_error(line, "missing angle"))?;
                    parse_complex(a).ok_or_else(|| line_error(line, format!("bad angle `{a}`")))
                };
                let change = match w.get(2).copied() {
                    Some("flip") => SwitchChange::FlipBraid,
                    Some("scatter") => SwitchChange::BraidToScattering { theta: angle(3)? },
                    Some("angle") => SwitchChange::SetAngle { theta: angle(3)? },
                    Some("dots") => SwitchChange::AddDotPair { j: number(line, w.get(3), "strand")? },
                    _ => return Err(line_error(line, "expected flip, scatter, angle or dots")),
                };
                Move::Switch(Switch { site, change })
            }
            other => return Err(line_error(line, format!("unknown move `{other}`"))),
        };
        moves.push(mv);
    }
    Ok(moves)
}
