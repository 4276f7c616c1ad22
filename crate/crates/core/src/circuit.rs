//! Circuit representation, text format, gate values, and random generation.
//!
//! The gate set is {H, T, X^1/2, Y^1/2, CZ}. T and CZ are diagonal in the
//! computational basis, which matters downstream: diagonal gates attach a
//! factor to existing network variables, while the others introduce a new
//! variable for the qubit they act on.
//!
//! Text format: the first significant line is the qubit count, then one gate
//! per line as `cycle name qubit [qubit]` with 1-based cycles and 0-based
//! qubits. `#` starts a comment; blank lines and CRLF endings are accepted.

use num_complex::Complex64;
use std::collections::HashSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    T,
    XHalf,
    YHalf,
    CZ,
}

impl GateKind {
    pub const ALL: [GateKind; 5] = [
        GateKind::H,
        GateKind::T,
        GateKind::XHalf,
        GateKind::YHalf,
        GateKind::CZ,
    ];

    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::CZ => 2,
            _ => 1,
        }
    }

    /// Diagonal gates keep a qubit's network variable alive instead of
    /// producing a new one.
    pub fn is_diagonal(self) -> bool {
        matches!(self, GateKind::T | GateKind::CZ)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::XHalf => "x_1_2",
            GateKind::YHalf => "y_1_2",
            GateKind::CZ => "cz",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        match name.to_ascii_lowercase().as_str() {
            "h" => Some(GateKind::H),
            "t" => Some(GateKind::T),
            "x_1_2" => Some(GateKind::XHalf),
            "y_1_2" => Some(GateKind::YHalf),
            "cz" => Some(GateKind::CZ),
            _ => None,
        }
    }
}

/// One gate application at a given cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub cycle: usize,
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn new(cycle: usize, kind: GateKind, qubits: &[usize]) -> Self {
        Gate {
            cycle,
            kind,
            qubits: qubits.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("unknown gate name `{0}`")]
    UnknownGate(String),
    #[error("qubit {qubit} out of range (circuit has {n_qubits} qubits)")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("cycle numbers are 1-based, got 0")]
    ZeroCycle,
    #[error("gate lists qubit {0} twice")]
    RepeatedQubit(usize),
    #[error("{kind:?} takes {expected} qubit(s), got {got}")]
    WrongArity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("two gates act on qubit {qubit} in cycle {cycle}")]
    QubitBusy { qubit: usize, cycle: usize },
}

/// Parse failure with the 1-based source line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("malformed line")]
    Malformed,
    #[error("missing qubit-count header")]
    MissingHeader,
    #[error(transparent)]
    Invalid(#[from] CircuitError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    depth: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Validates and normalizes a gate list: qubits must be in range and
    /// distinct, cycles 1-based, and no two gates may touch the same qubit in
    /// the same cycle. Gates are stored sorted by cycle (stable).
    pub fn new(n_qubits: usize, mut gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let mut busy: HashSet<(usize, usize)> = HashSet::new();
        for gate in &gates {
            validate_gate(gate, n_qubits)?;
            for &q in &gate.qubits {
                if !busy.insert((gate.cycle, q)) {
                    return Err(CircuitError::QubitBusy {
                        qubit: q,
                        cycle: gate.cycle,
                    });
                }
            }
        }
        gates.sort_by_key(|g| g.cycle);
        let depth = gates.last().map_or(0, |g| g.cycle);
        Ok(Circuit {
            n_qubits,
            depth,
            gates,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Highest cycle number used; 0 for an empty circuit.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Gates in cycle order.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.n_qubits);
        for g in &self.gates {
            write!(out, "{} {}", g.cycle, g.kind.name()).unwrap();
            for &q in &g.qubits {
                write!(out, " {q}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn validate_gate(gate: &Gate, n_qubits: usize) -> Result<(), CircuitError> {
    if gate.cycle == 0 {
        return Err(CircuitError::ZeroCycle);
    }
    let expected = gate.kind.arity();
    if gate.qubits.len() != expected {
        return Err(CircuitError::WrongArity {
            kind: gate.kind,
            expected,
            got: gate.qubits.len(),
        });
    }
    for (i, &q) in gate.qubits.iter().enumerate() {
        if q >= n_qubits {
            return Err(CircuitError::QubitOutOfRange { qubit: q, n_qubits });
        }
        if gate.qubits[..i].contains(&q) {
            return Err(CircuitError::RepeatedQubit(q));
        }
    }
    Ok(())
}

/// Parses the text format. Errors carry the 1-based line number.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut n_qubits: Option<usize> = None;
    let mut gates: Vec<(usize, Gate)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fail = |kind: ParseErrorKind| ParseError {
            line: line_no,
            kind,
        };

        if n_qubits.is_none() {
            let n = line
                .parse::<usize>()
                .map_err(|_| fail(ParseErrorKind::Malformed))?;
            n_qubits = Some(n);
            continue;
        }

        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(fail(ParseErrorKind::Malformed));
        }
        let cycle = tokens[0]
            .parse::<usize>()
            .map_err(|_| fail(ParseErrorKind::Malformed))?;
        let kind = GateKind::from_name(tokens[1])
            .ok_or_else(|| fail(CircuitError::UnknownGate(tokens[1].to_string()).into()))?;
        let qubits = tokens[2..]
            .iter()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<usize>, _>>()
            .map_err(|_| fail(ParseErrorKind::Malformed))?;

        let gate = Gate {
            cycle,
            kind,
            qubits,
        };
        let n = n_qubits.unwrap();
        validate_gate(&gate, n).map_err(|e| fail(e.into()))?;
        gates.push((line_no, gate));
    }

    let n_qubits = n_qubits.ok_or(ParseError {
        line: text.lines().count().max(1),
        kind: ParseErrorKind::MissingHeader,
    })?;

    // Per-cycle exclusivity, attributed to the later of the two lines.
    let mut busy: HashSet<(usize, usize)> = HashSet::new();
    for (line_no, gate) in &gates {
        for &q in &gate.qubits {
            if !busy.insert((gate.cycle, q)) {
                return Err(ParseError {
                    line: *line_no,
                    kind: CircuitError::QubitBusy {
                        qubit: q,
                        cycle: gate.cycle,
                    }
                    .into(),
                });
            }
        }
    }

    let gates = gates.into_iter().map(|(_, g)| g).collect();
    Ok(Circuit::new(n_qubits, gates).expect("gate list pre-validated"))
}

/// Full unitary of a gate, row-major `M[out][in]` (4 entries for 1-qubit
/// gates, 16 for CZ with the first listed qubit as the high index bit).
pub fn gate_matrix(kind: GateKind) -> Vec<Complex64> {
    let c = |re, im| Complex64::new(re, im);
    let r = |re| Complex64::new(re, 0.0);
    match kind {
        GateKind::H => vec![
            r(FRAC_1_SQRT_2),
            r(FRAC_1_SQRT_2),
            r(FRAC_1_SQRT_2),
            r(-FRAC_1_SQRT_2),
        ],
        GateKind::T => vec![
            r(1.0),
            r(0.0),
            r(0.0),
            Complex64::from_polar(1.0, FRAC_PI_4),
        ],
        GateKind::XHalf => vec![
            c(0.5, 0.5),
            c(0.5, -0.5),
            c(0.5, -0.5),
            c(0.5, 0.5),
        ],
        GateKind::YHalf => vec![
            c(0.5, 0.5),
            c(-0.5, -0.5),
            c(0.5, 0.5),
            c(0.5, 0.5),
        ],
        GateKind::CZ => {
            let mut m = vec![r(0.0); 16];
            for i in 0..4 {
                m[i * 4 + i] = r(if i == 3 { -1.0 } else { 1.0 });
            }
            m
        }
    }
}

/// Network-factor form of a gate.
///
/// Layouts (row-major over the listed variables):
/// - `T`: `[f(0), f(1)]` over the qubit's current variable, `f = diag(T)`.
/// - `CZ`: `f(a,b)` over the two current variables; `-1` iff `a = b = 1`.
/// - non-diagonal gates: `f(old, new) = <new|G|old>` over the consumed and
///   the freshly created variable.
pub fn gate_tensor(kind: GateKind) -> Vec<Complex64> {
    let m = gate_matrix(kind);
    match kind {
        GateKind::T => vec![m[0], m[3]],
        GateKind::CZ => vec![m[0], m[5], m[10], m[15]],
        // Transpose: matrix rows are "out", factor rows are "old" = "in".
        _ => vec![m[0], m[2], m[1], m[3]],
    }
}

/// Deterministic pseudo-random circuit on a k x k grid (qubit `r*k + c` at
/// row r, column c), in the style of random supremacy benchmarks:
///
/// - cycle 1 applies H to every qubit;
/// - cycles 2..=d apply CZ along one of eight stencils of disjoint grid
///   edges, rotating through the stencils in a fixed sequence;
/// - a qubit skipped by this cycle's stencil but hit by CZ in the previous
///   cycle gets a single-qubit gate: T the first time, afterwards X^1/2 or
///   Y^1/2 with equal probability.
///
/// Stencils that select no edge on a small grid are dropped from the
/// rotation, so every cycle applies at least one CZ.
pub fn generate_random_circuit(k: usize, d: usize, seed: u64) -> Circuit {
    assert!(k >= 2, "grid side must be at least 2, got {k}");
    assert!(d >= 2, "depth must be at least 2, got {d}");
    let n = k * k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let stencils: Vec<Vec<(usize, usize)>> = cz_stencils(k)
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();

    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(Gate::new(1, GateKind::H, &[q]));
    }

    let mut prev_cz = vec![false; n];
    let mut had_t = vec![false; n];
    for cycle in 2..=d {
        let stencil = &stencils[(cycle - 2) % stencils.len()];
        let mut in_cz = vec![false; n];
        for &(a, b) in stencil {
            gates.push(Gate::new(cycle, GateKind::CZ, &[a, b]));
            in_cz[a] = true;
            in_cz[b] = true;
        }
        for q in 0..n {
            if !in_cz[q] && prev_cz[q] {
                let kind = if !had_t[q] {
                    had_t[q] = true;
                    GateKind::T
                } else if rng.gen_bool(0.5) {
                    GateKind::XHalf
                } else {
                    GateKind::YHalf
                };
                gates.push(Gate::new(cycle, kind, &[q]));
            }
        }
        prev_cz = in_cz;
    }

    Circuit::new(n, gates).expect("generated gates are valid by construction")
}

/// Eight patterns of vertex-disjoint grid edges, keyed by direction and the
/// parities of the anchor row/column. Their union is the full set of grid
/// edges; consecutive entries alternate direction.
fn cz_stencils(k: usize) -> Vec<Vec<(usize, usize)>> {
    let at = |r: usize, c: usize| r * k + c;
    let horizontal = |rp: usize, cp: usize| {
        let mut edges = Vec::new();
        for r in (rp..k).step_by(2) {
            for c in (cp..k.saturating_sub(1)).step_by(2) {
                edges.push((at(r, c), at(r, c + 1)));
            }
        }
        edges
    };
    let vertical = |rp: usize, cp: usize| {
        let mut edges = Vec::new();
        for r in (rp..k.saturating_sub(1)).step_by(2) {
            for c in (cp..k).step_by(2) {
                edges.push((at(r, c), at(r + 1, c)));
            }
        }
        edges
    };
    vec![
        horizontal(0, 0),
        vertical(0, 0),
        horizontal(1, 1),
        vertical(1, 1),
        horizontal(0, 1),
        vertical(0, 1),
        horizontal(1, 0),
        vertical(1, 0),
    ]
}
