//! Line-oriented circuit text format.
//!
//! ```text
//! ringqec-circuit 1
//! name rep3-fb
//! topology ring 4
//! mode qnd
//! initial a1 q1 q2 q3
//! generator ZZI
//! measure r=0 t=1 g=0 slot=2 a=1 slice=3
//! cycles 12
//! slice CNS(1,0)@1 ID(2) ID(3)
//! end
//! ```

use std::fmt::Write;

use super::{AncillaMode, Circuit, CircuitError, Gate, GateKind, Occupant, ScheduleEntry, Targets, Topology};

const MAGIC: &str = "ringqec-circuit 1";

fn gate_token(g: &Gate) -> String {
    let mut t = String::from(g.kind.name());
    match (g.kind, g.targets) {
        (GateKind::Rx(theta) | GateKind::Rz(theta), Targets::One(s)) => {
            let _ = write!(t, "({s},{theta:?})");
        }
        (_, Targets::One(s)) => {
            let _ = write!(t, "({s})");
        }
        (_, Targets::Two(a, b)) => {
            let _ = write!(t, "({a},{b})");
        }
    }
    if let GateKind::MeasureZ { record } = g.kind {
        let _ = write!(t, "->r{record}");
    }
    if g.step > 0 {
        let _ = write!(t, "@{}", g.step);
    }
    t
}

pub(super) fn write_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "name {}", c.name);
    match &c.topology {
        Topology::Ring(n) => {
            let _ = writeln!(out, "topology ring {n}");
        }
        Topology::Graph { slots, edges } => {
            let _ = write!(out, "topology graph {slots}");
            for (a, b) in edges {
                let _ = write!(out, " {a}-{b}");
            }
            out.push('\n');
        }
    }
    let _ = writeln!(out, "mode {}", c.mode);
    out.push_str("initial");
    for o in &c.initial {
        let _ = write!(out, " {o}");
    }
    out.push('\n');
    for g in &c.generators {
        let _ = writeln!(out, "generator {g}");
    }
    for e in &c.schedule {
        let _ = writeln!(
            out,
            "measure r={} t={} g={} slot={} a={} slice={}",
            e.record,
            e.step,
            e.generator,
            e.slot,
            e.ancilla + 1,
            e.slice
        );
    }
    out.push_str("cycles");
    for e in &c.cycle_ends {
        let _ = write!(out, " {e}");
    }
    out.push('\n');
    for slice in &c.slices {
        out.push_str("slice");
        for g in slice {
            out.push(' ');
            out.push_str(&gate_token(g));
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

fn err(line: usize, msg: impl Into<String>) -> CircuitError {
    CircuitError::Parse {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, CircuitError> {
    s.parse().map_err(|_| err(line, format!("bad number {s:?}")))
}

fn parse_occupant(s: &str, line: usize) -> Result<Occupant, CircuitError> {
    let label = |rest: &str| -> Result<usize, CircuitError> {
        let k: usize = num(rest, line)?;
        k.checked_sub(1).ok_or_else(|| err(line, "labels are 1-based"))
    };
    if let Some(rest) = s.strip_prefix('q') {
        Ok(Occupant::Data(label(rest)?))
    } else if let Some(rest) = s.strip_prefix('a') {
        Ok(Occupant::Ancilla(label(rest)?))
    } else {
        Err(err(line, format!("bad occupant {s:?}")))
    }
}

fn parse_gate(tok: &str, line: usize) -> Result<Gate, CircuitError> {
    let open = tok.find('(').ok_or_else(|| err(line, format!("bad gate {tok:?}")))?;
    let close = tok.find(')').ok_or_else(|| err(line, format!("bad gate {tok:?}")))?;
    let name = &tok[..open];
    let args: Vec<&str> = tok[open + 1..close].split(',').collect();
    let mut rest = &tok[close + 1..];
    let mut record = None;
    if let Some(r) = rest.strip_prefix("->r") {
        let end = r.find('@').unwrap_or(r.len());
        record = Some(num::<usize>(&r[..end], line)?);
        rest = &r[end..];
    }
    let step = match rest.strip_prefix('@') {
        Some(s) => num(s, line)?,
        None if rest.is_empty() => 0,
        None => return Err(err(line, format!("trailing text in {tok:?}"))),
    };
    let slot = |i: usize| -> Result<usize, CircuitError> {
        args.get(i)
            .ok_or_else(|| err(line, format!("missing argument in {tok:?}")))
            .and_then(|s| num(s, line))
    };
    let expect_args = |k: usize| -> Result<(), CircuitError> {
        if args.len() == k {
            Ok(())
        } else {
            Err(err(line, format!("{name} takes {k} arguments")))
        }
    };
    let gate = match name {
        "H" | "ID" | "IDL" | "RESET" => {
            expect_args(1)?;
            let kind = match name {
                "H" => GateKind::H,
                "ID" => GateKind::Id { long: false },
                "IDL" => GateKind::Id { long: true },
                _ => GateKind::ResetToZero,
            };
            Gate::one(kind, slot(0)?, step)
        }
        "RX" | "RZ" => {
            expect_args(2)?;
            let theta: f64 = num(args[1], line)?;
            let kind = if name == "RX" {
                GateKind::Rx(theta)
            } else {
                GateKind::Rz(theta)
            };
            Gate::one(kind, slot(0)?, step)
        }
        "MZ" => {
            expect_args(1)?;
            let record = record.ok_or_else(|| err(line, "MZ needs ->r<k>"))?;
            Gate::one(GateKind::MeasureZ { record }, slot(0)?, step)
        }
        "CNOT" | "SWAP" | "CNS" | "ISWAP" => {
            expect_args(2)?;
            let kind = match name {
                "CNOT" => GateKind::Cnot,
                "SWAP" => GateKind::Swap,
                "CNS" => GateKind::Cns,
                _ => GateKind::ISwap,
            };
            Gate::two(kind, slot(0)?, slot(1)?, step)
        }
        other => return Err(err(line, format!("unknown gate {other:?}"))),
    };
    if record.is_some() && !matches!(gate.kind, GateKind::MeasureZ { .. }) {
        return Err(err(line, "record suffix on a non-measurement gate"));
    }
    Ok(gate)
}

fn keyed<'a>(field: &'a str, key: &str, line: usize) -> Result<&'a str, CircuitError> {
    field
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| err(line, format!("expected {key}=..., got {field:?}")))
}

pub(super) fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    match lines.next() {
        Some((_, l)) if l == MAGIC => {}
        _ => return Err(err(1, "missing header")),
    }
    let mut name = None;
    let mut topology = None;
    let mut mode = AncillaMode::Qnd;
    let mut initial = None;
    let mut generators = Vec::new();
    let mut schedule = Vec::new();
    let mut cycle_ends = Vec::new();
    let mut slices = Vec::new();
    let mut ended = false;
    for (ln, l) in lines {
        if l.is_empty() {
            continue;
        }
        if ended {
            return Err(err(ln, "content after end"));
        }
        let (head, rest) = l.split_once(' ').unwrap_or((l, ""));
        match head {
            "name" => name = Some(rest.to_string()),
            "topology" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                topology = Some(match parts.as_slice() {
                    ["ring", n] => Topology::Ring(num(n, ln)?),
                    ["graph", n, edges @ ..] => {
                        let edges = edges
                            .iter()
                            .map(|e| {
                                let (a, b) = e.split_once('-').ok_or_else(|| err(ln, "bad edge"))?;
                                Ok((num(a, ln)?, num(b, ln)?))
                            })
                            .collect::<Result<Vec<_>, CircuitError>>()?;
                        Topology::Graph {
                            slots: num(n, ln)?,
                            edges,
                        }
                    }
                    _ => return Err(err(ln, "bad topology")),
                })
            }
            "mode" => {
                mode = match rest {
                    "qnd" => AncillaMode::Qnd,
                    "reinit" => AncillaMode::Reinit,
                    other => return Err(err(ln, format!("bad mode {other:?}"))),
                }
            }
            "initial" => {
                initial = Some(
                    rest.split_whitespace()
                        .map(|s| parse_occupant(s, ln))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            "generator" => generators.push(rest.parse().map_err(|e| err(ln, format!("{e}")))?),
            "measure" => {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() != 6 {
                    return Err(err(ln, "measure needs 6 fields"));
                }
                let a: usize = num(keyed(f[4], "a", ln)?, ln)?;
                schedule.push(ScheduleEntry {
                    record: num(keyed(f[0], "r", ln)?, ln)?,
                    step: num(keyed(f[1], "t", ln)?, ln)?,
                    generator: num(keyed(f[2], "g", ln)?, ln)?,
                    slot: num(keyed(f[3], "slot", ln)?, ln)?,
                    ancilla: a.checked_sub(1).ok_or_else(|| err(ln, "ancilla labels are 1-based"))?,
                    slice: num(keyed(f[5], "slice", ln)?, ln)?,
                });
            }
            "cycles" => {
                cycle_ends = rest
                    .split_whitespace()
                    .map(|s| num(s, ln))
                    .collect::<Result<Vec<_>, _>>()?
            }
            "slice" => slices.push(
                rest.split_whitespace()
                    .map(|t| parse_gate(t, ln))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            "end" => ended = true,
            other => return Err(err(ln, format!("unknown directive {other:?}"))),
        }
    }
    if !ended {
        return Err(err(0, "missing end"));
    }
    let initial = initial.ok_or_else(|| err(0, "missing initial"))?;
    let n_data = initial
        .iter()
        .filter(|o| matches!(o, Occupant::Data(_)))
        .count();
    let circuit = Circuit {
        name: name.ok_or_else(|| err(0, "missing name"))?,
        topology: topology.ok_or_else(|| err(0, "missing topology"))?,
        mode,
        n_data,
        initial,
        generators,
        schedule,
        slices,
        cycle_ends,
    };
    if let Some(e) = circuit.schedule.iter().find(|e| e.generator >= circuit.generators.len()) {
        return Err(err(0, format!("schedule r{} names unknown generator", e.record)));
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_tokens_round_trip() {
        let gates = [
            Gate::one(GateKind::Rz(-std::f64::consts::FRAC_PI_2), 3, 2),
            Gate::one(GateKind::Rx(0.1 + 0.2), 0, 0),
            Gate::two(GateKind::Cns, 1, 0, 5),
            Gate::one(GateKind::MeasureZ { record: 7 }, 2, 8),
            Gate::one(GateKind::Id { long: true }, 4, 0),
        ];
        for g in gates {
            let t = gate_token(&g);
            assert_eq!(parse_gate(&t, 1).unwrap(), g, "{t}");
        }
        assert!(parse_gate("FOO(1)", 1).is_err());
        assert!(parse_gate("H(1)->r2", 1).is_err());
        assert!(parse_gate("CNS(1)", 1).is_err());
    }
}
