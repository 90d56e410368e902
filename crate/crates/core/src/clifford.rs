//! Gates, circuits and stabilizer tableaux.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::channel::ChannelMatrix;
use crate::dense::{self, Matrix};
use crate::error::{Error, Result};
use crate::pauli::{num_paulis, Pauli, PauliIndex, Phase, SignedPauli};

/// A gate on 1-based qubits. `Tof(a, b, c)` has controls `a`, `b` and target `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Z(usize),
    Cnot(usize, usize),
    Swap(usize, usize),
    Tof(usize, usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Z(q) => vec![q],
            Gate::Cnot(a, b) | Gate::Swap(a, b) => vec![a, b],
            Gate::Tof(a, b, c) => vec![a, b, c],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "Sdg",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::Cnot(..) => "CNOT",
            Gate::Swap(..) => "SWAP",
            Gate::Tof(..) => "TOF",
        }
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::Tof(..))
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            g => g,
        }
    }

    /// Checks operand range and distinctness.
    pub fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q == 0 || q > n {
                return Err(Error::InvalidGate(format!("{self}: qubit {q} outside 1..={n}")));
            }
            if qs[..i].contains(&q) {
                return Err(Error::InvalidGate(format!("{self}: repeated qubit {q}")));
            }
        }
        Ok(())
    }

    /// `g P g^dagger` for a Clifford gate.
    pub fn conjugate(&self, p: &SignedPauli) -> Result<SignedPauli> {
        let n = p.num_qubits();
        self.validate(n)?;
        let img = |q: usize, is_x: bool| -> SignedPauli {
            let x = Pauli::x(n, q).signed();
            let z = Pauli::z(n, q).signed();
            let y = Pauli::single(n, q, 'Y').signed();
            match (*self, is_x) {
                (Gate::H(_), true) => z,
                (Gate::H(_), false) => x,
                (Gate::S(_), true) => y,
                (Gate::Sdg(_), true) => y.neg(),
                (Gate::S(_) | Gate::Sdg(_), false) => z,
                (Gate::X(_), true) => x,
                (Gate::X(_), false) => z.neg(),
                (Gate::Z(_), true) => x.neg(),
                (Gate::Z(_), false) => z,
                (Gate::Cnot(c, t), true) if q == c => x * Pauli::x(n, t).signed(),
                (Gate::Cnot(c, t), false) if q == t => Pauli::z(n, c).signed() * z,
                (Gate::Cnot(..), true) => x,
                (Gate::Cnot(..), false) => z,
                (Gate::Swap(a, b), is_x) => {
                    let other = if q == a { b } else { a };
                    let letter = if is_x { 'X' } else { 'Z' };
                    Pauli::single(n, other, letter).signed()
                }
                (Gate::Tof(..), _) => unreachable!(),
            }
        };
        if !self.is_clifford() {
            return Err(Error::ToffoliInClifford);
        }
        Ok(conjugate_local(p, &self.qubits(), img))
    }
}

/// Conjugates `p` given the images of `X_q`, `Z_q` for the listed qubits;
/// every other qubit is left alone.
fn conjugate_local(
    p: &SignedPauli,
    qubits: &[usize],
    img: impl Fn(usize, bool) -> SignedPauli,
) -> SignedPauli {
    let n = p.num_qubits();
    let mut local = 0u64;
    for &q in qubits {
        local |= 1u64 << (n - q);
    }
    let (x, z) = (p.pauli.x_bits(), p.pauli.z_bits());
    let rest = Pauli::from_bits(n, x & !local, z & !local);
    // Hermitian local part = i^{|x&z|} X^x Z^z.
    let y = (x & z & local).count_ones();
    let mut acc = SignedPauli::new(Phase::from_exponent(y) * p.phase, Pauli::identity(n));
    for &q in qubits {
        if x >> (n - q) & 1 == 1 {
            acc = acc * img(q, true);
        }
    }
    for &q in qubits {
        if z >> (n - q) & 1 == 1 {
            acc = acc * img(q, false);
        }
    }
    acc * rest.signed()
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(line: &str) -> Result<Gate> {
        let mut parts = line.split_whitespace();
        let name = parts
            .next()
            .ok_or_else(|| Error::InvalidGate("empty line".into()))?;
        let args: Vec<usize> = parts
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::InvalidGate(format!("{line:?}: bad qubit {s:?}")))
            })
            .collect::<Result<_>>()?;
        let arity = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidGate(format!("{line:?}: expected {k} qubits")))
            }
        };
        let g = match name.to_ascii_uppercase().as_str() {
            "H" => arity(1).map(|_| Gate::H(args[0])),
            "S" => arity(1).map(|_| Gate::S(args[0])),
            "SDG" => arity(1).map(|_| Gate::Sdg(args[0])),
            "X" => arity(1).map(|_| Gate::X(args[0])),
            "Z" => arity(1).map(|_| Gate::Z(args[0])),
            "CNOT" | "CX" => arity(2).map(|_| Gate::Cnot(args[0], args[1])),
            "SWAP" => arity(2).map(|_| Gate::Swap(args[0], args[1])),
            "TOF" | "CCX" => arity(3).map(|_| Gate::Tof(args[0], args[1], args[2])),
            _ => Err(Error::InvalidGate(format!("unknown gate {name:?}"))),
        }?;
        if g.qubits().contains(&0) {
            return Err(Error::InvalidGate(format!("{line:?}: qubits are 1-based")));
        }
        Ok(g)
    }
}

/// Gates in application order: the unitary of `[g1, g2, ...]` is `... g2 g1`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    pub n: usize,
    gates: Vec<Gate>,
    pub global_phase: Option<f64>,
}

impl Circuit {
    pub fn new(n: usize) -> Circuit {
        Circuit {
            n,
            gates: Vec::new(),
            global_phase: None,
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Circuit> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(Circuit {
            n,
            gates,
            global_phase: None,
        })
    }

    /// Parses the line format (`H 1`, `CNOT 1 2`, `TOF 1 2 3`, `#` comments).
    /// With `n = None` the width is the largest qubit mentioned.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Circuit> {
        let mut gates = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            gates.push(line.parse::<Gate>()?);
        }
        let width = gates
            .iter()
            .flat_map(|g| g.qubits())
            .max()
            .unwrap_or(0);
        let n = n.unwrap_or(width);
        Circuit::from_gates(n, gates)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) {
        g.validate(self.n).expect("gate fits the circuit");
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        self.gates.extend_from_slice(&other.gates);
        if let Some(p) = other.global_phase {
            self.global_phase = Some(self.global_phase.unwrap_or(0.0) + p);
        }
    }

    pub fn toffoli_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_clifford()).count()
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford)
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            global_phase: self.global_phase.map(|p| -p),
        }
    }

    /// Cancels adjacent inverse pairs.
    pub fn simplify(&self) -> Circuit {
        let mut out: Vec<Gate> = Vec::with_capacity(self.gates.len());
        for &g in &self.gates {
            if out.last() == Some(&g.inverse()) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        Circuit {
            n: self.n,
            gates: out,
            global_phase: self.global_phase,
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# qubits: {}", self.n)?;
        if let Some(p) = self.global_phase {
            writeln!(f, "# global phase: {p}")?;
        }
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Circuit> {
        let declared = s.lines().find_map(|l| {
            l.trim()
                .strip_prefix("# qubits:")
                .and_then(|v| v.trim().parse::<usize>().ok())
        });
        Circuit::parse(s, declared)
    }
}

/// `C p C^dagger` for a Clifford circuit.
pub fn conjugate_pauli(c: &Circuit, p: &SignedPauli) -> Result<SignedPauli> {
    if p.num_qubits() != c.n {
        return Err(Error::DimensionMismatch(c.n, p.num_qubits()));
    }
    let mut out = *p;
    for g in c.gates() {
        out = g.conjugate(&out)?;
    }
    Ok(out)
}

/// Images of `X_i` and `Z_i` under conjugation by a Clifford.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    x_img: Vec<SignedPauli>,
    z_img: Vec<SignedPauli>,
}

impl Tableau {
    pub fn identity(n: usize) -> Tableau {
        Tableau {
            n,
            x_img: (1..=n).map(|q| Pauli::x(n, q).signed()).collect(),
            z_img: (1..=n).map(|q| Pauli::z(n, q).signed()).collect(),
        }
    }

    pub fn from_images(x_img: Vec<SignedPauli>, z_img: Vec<SignedPauli>) -> Result<Tableau> {
        let n = x_img.len();
        if z_img.len() != n {
            return Err(Error::DimensionMismatch(n, z_img.len()));
        }
        for p in x_img.iter().chain(&z_img) {
            if p.num_qubits() != n {
                return Err(Error::DimensionMismatch(n, p.num_qubits()));
            }
        }
        let t = Tableau { n, x_img, z_img };
        if !t.is_symplectic() {
            return Err(Error::NotClifford("generator images break commutation relations".into()));
        }
        Ok(t)
    }

    pub fn from_circuit(c: &Circuit) -> Result<Tableau> {
        let mut t = Tableau::identity(c.n);
        for g in c.gates() {
            t.apply(g)?;
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> SignedPauli {
        self.x_img[q - 1]
    }

    pub fn z_image(&self, q: usize) -> SignedPauli {
        self.z_img[q - 1]
    }

    /// Appends a gate: the new map is `P -> g T(P) g^dagger`.
    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        for p in self.x_img.iter_mut().chain(self.z_img.iter_mut()) {
            *p = g.conjugate(p)?;
        }
        Ok(())
    }

    /// Hermitian images with the canonical commutation relations.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        let herm = |p: &SignedPauli| p.phase.is_real() && !p.pauli.is_identity();
        if !self.x_img.iter().chain(&self.z_img).all(herm) {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                let xz = self.x_img[i].pauli.commutes(&self.z_img[j].pauli);
                if xz == (i == j) {
                    return false;
                }
                if !self.x_img[i].pauli.commutes(&self.x_img[j].pauli)
                    || !self.z_img[i].pauli.commutes(&self.z_img[j].pauli)
                {
                    return false;
                }
            }
        }
        true
    }

    pub fn conjugate(&self, p: &SignedPauli) -> SignedPauli {
        let all: Vec<usize> = (1..=self.n).collect();
        conjugate_local(p, &all, |q, is_x| {
            if is_x {
                self.x_img[q - 1]
            } else {
                self.z_img[q - 1]
            }
        })
    }

    /// Exact channel representation, a signed permutation.
    pub fn channel(&self) -> ChannelMatrix {
        let n = self.n;
        let cols: Vec<(usize, i8)> = (0..num_paulis(n))
            .map(|s| {
                let img = self.conjugate(&Pauli::from_index(n, PauliIndex(s)).signed());
                (img.pauli.index().0, img.phase.sign() as i8)
            })
            .collect();
        ChannelMatrix::from_signed_columns(n, &cols)
    }

    /// Circuit realizing the tableau, by staged elimination.
    pub fn to_circuit(&self) -> Circuit {
        let n = self.n;
        let mut t = self.clone();
        let mut undo: Vec<Gate> = Vec::new();
        let mut step = |t: &mut Tableau, g: Gate| {
            t.apply(&g).expect("Clifford gate");
            undo.push(g);
        };
        for i in 1..=n {
            let bit = |p: &SignedPauli, q: usize, x: bool| {
                let m = if x { p.pauli.x_bits() } else { p.pauli.z_bits() };
                m >> (n - q) & 1 == 1
            };
            // Bring an X-type letter of img(X_i) to qubit i.
            let a = t.x_img[i - 1];
            match (i..=n).find(|&q| bit(&a, q, true)) {
                Some(j) => {
                    if j != i {
                        step(&mut t, Gate::Swap(i, j));
                    }
                }
                None => {
                    let j = (i..=n).find(|&q| bit(&a, q, false)).expect("symplectic");
                    step(&mut t, Gate::H(j));
                    if j != i {
                        step(&mut t, Gate::Swap(i, j));
                    }
                }
            }
            for k in i + 1..=n {
                if bit(&t.x_img[i - 1], k, true) {
                    step(&mut t, Gate::Cnot(i, k));
                }
            }
            if bit(&t.x_img[i - 1], i, false) {
                step(&mut t, Gate::S(i));
            }
            for k in i + 1..=n {
                if bit(&t.x_img[i - 1], k, false) {
                    step(&mut t, Gate::H(k));
                    step(&mut t, Gate::Cnot(i, k));
                }
            }
            // img(X_i) is now +-X_i; reduce img(Z_i) to +-Z_i.
            if bit(&t.z_img[i - 1], i, true) {
                step(&mut t, Gate::H(i));
                step(&mut t, Gate::S(i));
                step(&mut t, Gate::H(i));
            }
            for k in i + 1..=n {
                let b = t.z_img[i - 1];
                match (bit(&b, k, true), bit(&b, k, false)) {
                    (false, false) => continue,
                    (true, false) => step(&mut t, Gate::H(k)),
                    (true, true) => {
                        step(&mut t, Gate::Sdg(k));
                        step(&mut t, Gate::H(k));
                    }
                    (false, true) => {}
                }
                step(&mut t, Gate::Cnot(k, i));
            }
        }
        for i in 1..=n {
            if t.x_img[i - 1].phase != Phase::ONE {
                step(&mut t, Gate::Z(i));
            }
            if t.z_img[i - 1].phase != Phase::ONE {
                step(&mut t, Gate::X(i));
            }
        }
        debug_assert_eq!(t, Tableau::identity(n));
        Circuit {
            n,
            gates: undo,
            global_phase: None,
        }
        .inverse()
    }
}

/// Clifford `C` and qubits `(a, b, c)` with `C Z_a C^dagger = t1`,
/// `C Z_b C^dagger = t2` and `C X_c C^dagger = t3`.
#[derive(Clone, Debug, PartialEq)]
pub struct MappingTriple {
    pub circuit: Circuit,
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

pub fn clifford_mapping_triple(targets: &[Pauli; 3]) -> Result<MappingTriple> {
    let n = targets[0].num_qubits();
    let triple = crate::genset::GenTriple::new(targets[0], targets[1], targets[2])?;
    let mut cur: Vec<SignedPauli> = triple.paulis().iter().map(|p| p.signed()).collect();
    let mut d = Circuit::new(n);
    let mut pivots: Vec<usize> = Vec::new();
    let apply = |cur: &mut Vec<SignedPauli>, d: &mut Circuit, g: Gate| {
        for p in cur.iter_mut() {
            *p = g.conjugate(p).expect("Clifford gate");
        }
        d.push(g);
    };
    for i in 0..3 {
        let support: Vec<usize> = (1..=n)
            .filter(|q| !pivots.contains(q) && cur[i].pauli.letter(*q) != 'I')
            .collect();
        let Some(&pivot) = support.first() else {
            return Err(Error::DegenerateTriple("targets are dependent".into()));
        };
        for &q in &support {
            match cur[i].pauli.letter(q) {
                'X' => apply(&mut cur, &mut d, Gate::H(q)),
                'Y' => {
                    apply(&mut cur, &mut d, Gate::Sdg(q));
                    apply(&mut cur, &mut d, Gate::H(q));
                }
                _ => {}
            }
        }
        for &q in &support[1..] {
            apply(&mut cur, &mut d, Gate::Cnot(q, pivot));
        }
        for &q in &pivots.clone() {
            if cur[i].pauli.letter(q) == 'Z' {
                apply(&mut cur, &mut d, Gate::Cnot(q, pivot));
            }
        }
        debug_assert_eq!(cur[i].pauli, Pauli::z(n, pivot));
        pivots.push(pivot);
    }
    let (a, b, c) = (pivots[0], pivots[1], pivots[2]);
    let mut circuit = Circuit::new(n);
    if cur[0].phase != Phase::ONE {
        circuit.push(Gate::X(a));
    }
    if cur[1].phase != Phase::ONE {
        circuit.push(Gate::X(b));
    }
    if cur[2].phase != Phase::ONE {
        circuit.push(Gate::Z(c));
    }
    circuit.push(Gate::H(c));
    circuit.extend(&d.inverse());
    Ok(MappingTriple {
        circuit: circuit.simplify(),
        a,
        b,
        c,
    })
}

/// Clifford circuit with the given signed-permutation channel.
pub fn clifford_from_channel(m: &ChannelMatrix) -> Result<Circuit> {
    let n = m.num_qubits();
    let col = |p: Pauli| -> Result<SignedPauli> {
        let (row, sign) = m
            .signed_column(p.index().0)
            .ok_or_else(|| Error::NotClifford("not a signed permutation".into()))?;
        let img = Pauli::from_index(n, PauliIndex(row));
        let phase = if sign > 0 { Phase::ONE } else { Phase::MINUS_ONE };
        Ok(SignedPauli::new(phase, img))
    };
    if !m.is_signed_permutation() {
        return Err(Error::NotClifford("not a signed permutation".into()));
    }
    let x_img = (1..=n).map(|q| col(Pauli::x(n, q))).collect::<Result<Vec<_>>>()?;
    let z_img = (1..=n).map(|q| col(Pauli::z(n, q))).collect::<Result<Vec<_>>>()?;
    let t = Tableau::from_images(x_img, z_img)?;
    if t.channel() != *m {
        return Err(Error::NotClifford(
            "column images do not respect Pauli products".into(),
        ));
    }
    Ok(t.to_circuit())
}

/// Dense unitary of a circuit (gates applied in order).
pub fn circuit_to_unitary(c: &Circuit) -> Result<Matrix> {
    let n = c.n;
    dense::check_dense_limit("circuit simulation", n)?;
    let mut u = dense::identity(n);
    for g in c.gates() {
        apply_gate_left(&mut u, n, g);
    }
    if let Some(p) = c.global_phase {
        u *= Complex64::from_polar(1.0, p);
    }
    Ok(u)
}

/// `u <- g u`, by row operations.
fn apply_gate_left(u: &mut Matrix, n: usize, g: &Gate) {
    let dim = 1usize << n;
    let bit = |q: usize| 1usize << (n - q);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let single = |u: &mut Matrix, q: usize, m: [[Complex64; 2]; 2]| {
        let b = bit(q);
        for r0 in (0..dim).filter(|r| r & b == 0) {
            let r1 = r0 | b;
            for col in 0..dim {
                let (v0, v1) = (u[(r0, col)], u[(r1, col)]);
                u[(r0, col)] = m[0][0] * v0 + m[0][1] * v1;
                u[(r1, col)] = m[1][0] * v0 + m[1][1] * v1;
            }
        }
    };
    let zero = Complex64::new(0.0, 0.0);
    match *g {
        Gate::H(q) => {
            let s = Complex64::new(h, 0.0);
            single(u, q, [[s, s], [s, -s]]);
        }
        Gate::S(q) => single(u, q, [[one, zero], [zero, i]]),
        Gate::Sdg(q) => single(u, q, [[one, zero], [zero, -i]]),
        Gate::X(q) => single(u, q, [[zero, one], [one, zero]]),
        Gate::Z(q) => single(u, q, [[one, zero], [zero, -one]]),
        Gate::Cnot(c, t) => {
            for r in (0..dim).filter(|r| r & bit(c) != 0 && r & bit(t) == 0) {
                u.swap_rows(r, r | bit(t));
            }
        }
        Gate::Swap(a, b) => {
            for r in (0..dim).filter(|r| r & bit(a) != 0 && r & bit(b) == 0) {
                u.swap_rows(r, r ^ bit(a) ^ bit(b));
            }
        }
        Gate::Tof(a, b, t) => {
            let ctl = bit(a) | bit(b);
            for r in (0..dim).filter(|r| r & ctl == ctl && r & bit(t) == 0) {
                u.swap_rows(r, r | bit(t));
            }
        }
    }
}

/// `sqrt(1 - |Tr(u^dagger w)| / N)`, invariant under global phase.
pub fn global_phase_distance(u: &Matrix, w: &Matrix) -> Result<f64> {
    if u.shape() != w.shape() {
        return Err(Error::DimensionMismatch(u.nrows(), w.nrows()));
    }
    let d = u.nrows() as f64;
    let tr: Complex64 = u.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
    if tr.norm() == 0.0 {
        return Ok(1.0);
    }
    // 1 - |tr|/N = ||u - c w||^2 / 2N with c = conj(tr)/|tr|; the norm form
    // keeps precision near zero distance.
    let c = tr.conj() / tr.norm();
    let diff: f64 = u.iter().zip(w.iter()).map(|(a, b)| (a - c * b).norm_sqr()).sum();
    Ok((diff / (2.0 * d)).min(1.0).sqrt())
}
