//! Text format for instruction programs.
//!
//! A header line `q n`, then one step per line in application order:
//!
//! ```text
//! ASSIGN x_1 ... x_n -> y_1 ... y_n
//! INSTR v : d_0 d_1 ... d_(q^n - 1)
//! ```
//!
//! `INSTR` updates coordinate `v` (1-based) and lists its new value for each
//! configuration index. Lines starting with `#` are comments.

use super::{AssignmentInstruction, Instruction};
use crate::error::{Error, Result};
use crate::network::{Configuration, Network, Params};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgramStep {
    Assign(AssignmentInstruction),
    Instruction(Instruction),
}

impl ProgramStep {
    pub fn network(&self, params: Params) -> Network {
        match self {
            ProgramStep::Assign(a) => a.network(params),
            ProgramStep::Instruction(i) => i.network().clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub params: Params,
    pub steps: Vec<ProgramStep>,
}

impl Program {
    pub fn from_assignments(params: Params, steps: &[AssignmentInstruction]) -> Self {
        Program {
            params,
            steps: steps.iter().copied().map(ProgramStep::Assign).collect(),
        }
    }

    pub fn from_instructions(params: Params, steps: &[Instruction]) -> Self {
        Program {
            params,
            steps: steps.iter().cloned().map(ProgramStep::Instruction).collect(),
        }
    }

    /// The composition of all steps.
    pub fn replay(&self) -> Network {
        let mut table: Vec<u32> = (0..self.params.size() as u32).collect();
        for step in &self.steps {
            let net = step.network(self.params);
            for t in table.iter_mut() {
                *t = net.table()[*t as usize];
            }
        }
        Network::from_table(self.params, table).expect("steps share parameters")
    }
}

fn digits(p: Params, x: Configuration) -> String {
    p.decode(x).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn emit_program(program: &Program) -> String {
    let p = program.params;
    let mut out = format!("{} {}\n", p.q(), p.n());
    for step in &program.steps {
        match step {
            ProgramStep::Assign(a) => {
                out.push_str(&format!("ASSIGN {} -> {}\n", digits(p, a.a()), digits(p, a.b())));
            }
            ProgramStep::Instruction(i) => {
                let values: Vec<String> = (0..p.size())
                    .map(|x| i.network().local(i.v(), x).to_string())
                    .collect();
                out.push_str(&format!("INSTR {} : {}\n", i.v() + 1, values.join(" ")));
            }
        }
    }
    out
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got {t:?}")))
        })
        .collect()
}

pub fn parse_program(text: &str) -> Result<Program> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let head = numbers(hline, header)?;
    let [q, n] = head[..] else {
        return Err(Error::parse(hline, "header must be \"q n\""));
    };
    let p = Params::new(n, q).map_err(|e| Error::parse(hline, e.to_string()))?;
    let mut steps = Vec::new();
    for (lno, line) in lines {
        let at = |e: Error| Error::parse(lno, e.to_string());
        if let Some(rest) = line.strip_prefix("ASSIGN") {
            let (a, b) = rest
                .split_once("->")
                .ok_or_else(|| Error::parse(lno, "expected \"ASSIGN a -> b\""))?;
            let a = p.encode(&numbers(lno, a)?).map_err(at)?;
            let b = p.encode(&numbers(lno, b)?).map_err(at)?;
            steps.push(ProgramStep::Assign(AssignmentInstruction::new(p, a, b).map_err(at)?));
        } else if let Some(rest) = line.strip_prefix("INSTR") {
            let (v, values) = rest
                .split_once(':')
                .ok_or_else(|| Error::parse(lno, "expected \"INSTR v : values\""))?;
            let v = match numbers(lno, v)?[..] {
                [v] if (1..=n).contains(&v) => v - 1,
                _ => return Err(Error::parse(lno, format!("coordinate must be in 1..={n}"))),
            };
            let values = numbers(lno, values)?;
            if values.len() != p.size() || values.iter().any(|&d| d >= q) {
                return Err(Error::parse(
                    lno,
                    format!("expected {} values below {q}", p.size()),
                ));
            }
            let net = Network::from_index_fn(p, |x| p.with_digit(x, v, values[x])).map_err(at)?;
            steps.push(ProgramStep::Instruction(Instruction::new(v, net).map_err(at)?));
        } else {
            return Err(Error::parse(lno, "expected ASSIGN or INSTR"));
        }
    }
    Ok(Program { params: p, steps })
}
