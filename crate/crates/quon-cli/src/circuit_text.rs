//! Line-oriented circuits: `GATE q [q2] [angle]`, `#` starts a comment.
//! An optional `qubits N` line fixes the register size; otherwise it is
//! one more than the largest qubit used.

use crate::error::{line_error, CliError};
use quon_core::compile::{Circuit, Gate};
use std::f64::consts::TAU;

fn gate_for(name: &str, angle: Option<f64>) -> Option<Gate> {
    let g = match name {
        "X" => Gate::X,
        "Y" => Gate::Y,
        "Z" => Gate::Z,
        "S" => Gate::S,
        "SDG" | "SINV" => Gate::Sinv,
        "H" => Gate::H,
        "RXQ+" => Gate::RotXQuarter { positive: true },
        "RXQ-" => Gate::RotXQuarter { positive: false },
        "RZ" => Gate::Rz { theta: angle? },
        "XX" => Gate::XXRot { theta: angle? },
        "CNOT" | "CX" => Gate::Cnot { control_left: true },
        "CNOTR" => Gate::Cnot { control_left: false },
        "CZ" => Gate::Cz,
        "SWAP" => Gate::Swap,
        _ => return None,
    };
    Some(g)
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CliError> {
    let mut declared = None;
    let mut ops = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        let name = words[0].to_ascii_uppercase();
        if name == "QUBITS" {
            let count = words.get(1).and_then(|w| w.parse::<usize>().ok()).ok_or_else(|| line_error(line, "expected `qubits N`"))?;
            declared = Some(count);
            continue;
        }
        let takes_angle = matches!(name.as_str(), "RZ" | "XX");
        let arity = match name.as_str() {
            "XX" | "CNOT" | "CX" | "CNOTR" | "CZ" | "SWAP" => 2,
            _ => 1,
        };
        if words.len() != 1 + arity + takes_angle as usize {
            return Err(line_error(line, format!("{name} expects {arity} qubit(s){}", if takes_angle { " and an angle" } else { "" })));
        }
        let qubits = words[1..=arity]
            .iter()
            .map(|w| w.parse::<usize>().map_err(|_| line_error(line, format!("bad qubit `{w}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let angle = if takes_angle {
            let w = words[arity + 1];
            Some(w.parse::<f64>().map_err(|_| line_error(line, format!("bad angle `{w}`")))?.rem_euclid(TAU))
        } else {
            None
        };
        let gate = gate_for(&name, angle).ok_or_else(|| line_error(line, format!("unknown gate `{}`", words[0])))?;
        ops.push((line, gate, qubits));
    }
    let used = ops.iter().flat_map(|(_, _, q)| q.iter().copied()).max().map_or(0, |m| m + 1);
    let mut c = Circuit::new(declared.unwrap_or(used));
    for (line, gate, qubits) in ops {
        c.push(gate, &qubits).map_err(|e| line_error(line, e.to_string()))?;
    }
    if c.n_qubits == 0 {
        return Err(line_error(1, "circuit has no qubits"));
    }
    Ok(c)
}

/// Bit string such as `0110`.
pub fn parse_bits(s: &str) -> Result<Vec<u8>, CliError> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(crate::error::usage(format!("bad bit `{ch}` in `{s}`"))),
        })
        .collect()
}
