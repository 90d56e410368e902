//! The Toffoli generating set: generators `G_{P1,P2,P3} = I - 2 (I-P1)(I-P2)(I-P3)/8`
//! for pairwise commuting, independent Paulis.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{clifford_mapping_triple, Circuit, Gate};
use crate::dense::{self, Matrix};
use crate::error::{Error, Result};
use crate::pauli::{num_paulis, Pauli, PauliIndex, SignedPauli};

/// Three pairwise commuting, independent, non-identity Paulis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenTriple {
    p1: Pauli,
    p2: Pauli,
    p3: Pauli,
}

impl GenTriple {
    /// Validates the triple without reordering it.
    pub fn new(p1: Pauli, p2: Pauli, p3: Pauli) -> Result<GenTriple> {
        let n = p1.num_qubits();
        for p in [&p2, &p3] {
            if p.num_qubits() != n {
                return Err(Error::DimensionMismatch(n, p.num_qubits()));
            }
        }
        let show = || format!("({p1}, {p2}, {p3})");
        if p1.is_identity() || p2.is_identity() || p3.is_identity() {
            return Err(Error::DegenerateTriple(format!("{} contains the identity", show())));
        }
        if p1 == p2 || p2 == p3 || p1 == p3 {
            return Err(Error::DegenerateTriple(format!("{} repeats a Pauli", show())));
        }
        if !(p1.commutes(&p2) && p2.commutes(&p3) && p1.commutes(&p3)) {
            return Err(Error::DegenerateTriple(format!("{} does not commute", show())));
        }
        if p3 == p1.mul_unsigned(&p2) {
            return Err(Error::DegenerateTriple(format!("{} has rank 2", show())));
        }
        Ok(GenTriple { p1, p2, p3 })
    }

    /// Parses three Pauli strings.
    pub fn parse(a: &str, b: &str, c: &str) -> Result<GenTriple> {
        GenTriple::new(a.parse()?, b.parse()?, c.parse()?)
    }

    pub fn num_qubits(&self) -> usize {
        self.p1.num_qubits()
    }

    pub fn paulis(&self) -> [Pauli; 3] {
        [self.p1, self.p2, self.p3]
    }

    /// The seven non-identity elements of the generated unsigned subgroup, sorted.
    pub fn subgroup(&self) -> [Pauli; 7] {
        let (a, b, c) = (self.p1, self.p2, self.p3);
        let ab = a.mul_unsigned(&b);
        let mut v = [
            a,
            b,
            c,
            ab,
            b.mul_unsigned(&c),
            a.mul_unsigned(&c),
            ab.mul_unsigned(&c),
        ];
        v.sort();
        v
    }

    /// Representative of the equivalence class: the smallest ordered
    /// independent triple inside the subgroup.
    pub fn canonical(&self) -> GenTriple {
        let v = self.subgroup();
        let (a, b) = (v[0], v[1]);
        let ab = a.mul_unsigned(&b);
        let c = v[2..]
            .iter()
            .copied()
            .find(|p| *p != ab)
            .expect("subgroup has rank 3");
        GenTriple { p1: a, p2: b, p3: c }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Equivalent generators share their subgroup.
    pub fn equivalent(&self, other: &GenTriple) -> bool {
        self.subgroup() == other.subgroup()
    }

    /// Pauli expansion with coefficients in units of 1/4.
    pub fn terms(&self) -> [(SignedPauli, i8); 8] {
        let (a, b, c) = (self.p1.signed(), self.p2.signed(), self.p3.signed());
        let n = self.num_qubits();
        let ab = a * b;
        [
            (SignedPauli::identity(n), 3),
            (a, 1),
            (b, 1),
            (c, 1),
            (ab, -1),
            (b * c, -1),
            (c * a, -1),
            (ab * c, 1),
        ]
    }
}

impl fmt::Display for GenTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p1, self.p2, self.p3)
    }
}

impl Serialize for GenTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.p1.to_string(), self.p2.to_string(), self.p3.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for GenTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c] = <[String; 3]>::deserialize(d)?;
        GenTriple::parse(&a, &b, &c).map_err(serde::de::Error::custom)
    }
}

/// Canonicalizing constructor; errors on degenerate input.
pub fn canonical_triple(p1: Pauli, p2: Pauli, p3: Pauli) -> Result<GenTriple> {
    Ok(GenTriple::new(p1, p2, p3)?.canonical())
}

/// How duplicate triples are merged during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GenMode {
    /// One triple per rank-3 isotropic subgroup.
    #[default]
    Canonical,
    /// The published enumeration procedure, kept for count comparisons.
    PaperCompat,
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenMode::Canonical => "canonical",
            GenMode::PaperCompat => "paper-compat",
        })
    }
}

impl FromStr for GenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenMode> {
        match s {
            "canonical" => Ok(GenMode::Canonical),
            "paper-compat" | "paper" => Ok(GenMode::PaperCompat),
            _ => Err(Error::Format(format!("unknown generating-set mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSet {
    pub n: usize,
    pub mode: GenMode,
    pub triples: Vec<GenTriple>,
}

impl GenSet {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Position of the stored triple equivalent to `t`, if any.
    pub fn position(&self, t: &GenTriple) -> Option<usize> {
        let v = t.subgroup();
        self.triples.iter().position(|s| s.subgroup() == v)
    }
}

/// Largest qubit count accepted by the enumeration.
pub const GENSET_LIMIT: usize = 6;

/// Enumerates the generating set. For `n < 3` the set is empty and
/// [`Error::TooFewQubits`] is returned.
pub fn generate_gen_set(n: usize, mode: GenMode) -> Result<GenSet> {
    if n < 3 {
        return Err(Error::TooFewQubits(n));
    }
    if n > GENSET_LIMIT {
        return Err(Error::SizeLimit {
            what: "generating set",
            n,
            limit: GENSET_LIMIT,
        });
    }
    let triples = match mode {
        GenMode::Canonical => canonical_set(n),
        GenMode::PaperCompat => paper_compat_set(n),
    };
    log::debug!("generating set n={n} mode={mode}: {} triples", triples.len());
    Ok(GenSet { n, mode, triples })
}

fn paulis_after_identity(n: usize) -> Vec<Pauli> {
    (1..num_paulis(n))
        .map(|i| Pauli::from_index(n, PauliIndex(i)))
        .collect()
}

fn canonical_set(n: usize) -> Vec<GenTriple> {
    let ps = paulis_after_identity(n);
    let per_first: Vec<Vec<GenTriple>> = (0..ps.len())
        .into_par_iter()
        .map(|i1| {
            let p1 = ps[i1];
            let mut out = Vec::new();
            for i2 in i1 + 1..ps.len() {
                let p2 = ps[i2];
                if !p1.commutes(&p2) {
                    continue;
                }
                let p12 = p1.mul_unsigned(&p2);
                // p1, p2 must be the two smallest elements of the subgroup.
                if p12 < p2 {
                    continue;
                }
                for &p3 in &ps[i2 + 1..] {
                    if p3 == p12 || !p3.commutes(&p1) || !p3.commutes(&p2) {
                        continue;
                    }
                    let t = GenTriple { p1, p2, p3 };
                    if t.is_canonical() {
                        out.push(t);
                    }
                }
            }
            out
        })
        .collect();
    per_first.into_iter().flatten().collect()
}

/// Enumeration with the published merge rule, transcribed step by step.
/// Triples are visited in increasing index order and a candidate is
/// dropped when it shares a Pauli with a stored triple and one of the
/// stored pairwise products reappears in the rearranged candidate.
fn paper_compat_set(n: usize) -> Vec<GenTriple> {
    let ps = paulis_after_identity(n);
    let id = Pauli::identity(n);
    let mut stored: Vec<([Pauli; 3], [Pauli; 4])> = Vec::new();
    for i1 in 0..ps.len() {
        let p1 = ps[i1];
        for i2 in i1 + 1..ps.len() {
            let p2 = ps[i2];
            if !p1.commutes(&p2) {
                continue;
            }
            for &p3 in &ps[i2 + 1..] {
                if !(p2.commutes(&p3) && p3.commutes(&p1)) {
                    continue;
                }
                if p1.mul_unsigned(&p2) == p3 {
                    continue;
                }
                let cand = [p1, p2, p3];
                let keep = stored
                    .iter()
                    .all(|(r, prods)| !literal_merges(r, prods, &cand, id));
                if keep {
                    let [a, b, c] = cand;
                    let ab = a.mul_unsigned(&b);
                    let prods = [ab, b.mul_unsigned(&c), c.mul_unsigned(&a), ab.mul_unsigned(&c)];
                    stored.push((cand, prods));
                }
            }
        }
    }
    stored
        .into_iter()
        .map(|([p1, p2, p3], _)| GenTriple { p1, p2, p3 })
        .collect()
}

fn literal_merges(r: &[Pauli; 3], prods: &[Pauli; 4], cand: &[Pauli; 3], id: Pauli) -> bool {
    let [p12, p23, p31, p123] = *prods;
    let mut q = [id; 3];
    let mut qp = [id; 3];
    let mut ix1 = vec![0usize, 1, 2];
    let mut ix2 = vec![0usize, 1, 2];
    let mut matched = false;
    for j in 0..3 {
        for k in 0..3 {
            if r[j] == cand[k] {
                q[j] = cand[k];
                qp[j] = cand[k];
                matched = true;
                ix1.retain(|&x| x != j);
                ix2.retain(|&x| x != k);
            }
        }
    }
    if !matched {
        return false;
    }
    let l = ix1.len();
    if l == 2 {
        q[ix1[0]] = cand[ix2[0]];
        q[ix1[1]] = cand[ix2[1]];
        qp[ix1[1]] = cand[ix2[0]];
        qp[ix1[0]] = cand[ix2[1]];
    }
    if l == 1 {
        q[ix1[0]] = cand[ix2[0]];
    }
    let hits = |q: &[Pauli; 3]| {
        p12 == q[0] || p12 == q[1] || p23 == q[1] || p23 == q[2] || p31 == q[2] || p31 == q[0]
    };
    if hits(&q) {
        return true;
    }
    if l == 1 && q.contains(&p123) {
        return true;
    }
    l == 2 && hits(&qp)
}

/// Dense unitary `(3/4) I + (1/4)(P1 + P2 + P3 - P1P2 - P2P3 - P3P1 + P1P2P3)`.
pub fn gen_element_unitary(t: &GenTriple) -> Result<Matrix> {
    let n = t.num_qubits();
    dense::check_dense_limit("generator unitary", n)?;
    let dim = 1usize << n;
    let mut m = Matrix::zeros(dim, dim);
    for (sp, c) in t.terms() {
        let w = c as f64 / 4.0;
        for j in 0..dim {
            let (row, ph) = sp.pauli.apply_to_basis(j);
            m[(row, j)] += (ph * sp.phase).to_complex() * Complex64::new(w, 0.0);
        }
    }
    Ok(m)
}

/// Circuit `C . TOF(a,b;c) . C^dagger` implementing the generator, where `C`
/// maps `Z_a, Z_b, X_c` onto the triple.
pub fn gen_element_circuit(t: &GenTriple) -> Circuit {
    let m = clifford_mapping_triple(&t.paulis()).expect("valid triple");
    let mut c = m.circuit.inverse();
    c.push(Gate::Tof(m.a, m.b, m.c));
    c.extend(&m.circuit);
    c
}

/// Dense product `G_1 G_2 ... G_k` of a word.
pub fn word_unitary(n: usize, word: &[GenTriple]) -> Result<Matrix> {
    let mut u = dense::identity(n);
    for t in word {
        if t.num_qubits() != n {
            return Err(Error::DimensionMismatch(n, t.num_qubits()));
        }
        u *= gen_element_unitary(t)?;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: &str, b: &str, c: &str) -> GenTriple {
        GenTriple::parse(a, b, c).unwrap()
    }

    #[test]
    fn validation() {
        assert!(GenTriple::parse("ZII", "IZI", "ZZI").is_err());
        assert!(GenTriple::parse("ZII", "XII", "IIZ").is_err());
        assert!(GenTriple::parse("III", "IZI", "IIZ").is_err());
        assert!(GenTriple::parse("ZII", "ZII", "IIZ").is_err());
        assert!(GenTriple::parse("ZII", "IZI", "IIZ").is_ok());
    }

    #[test]
    fn canonical_is_order_free() {
        let a = t("IIX", "IZI", "ZII").canonical();
        let b = t("IZI", "IIX", "ZII").canonical();
        assert_eq!(a, b);
        let c = t("IIX", "IZX", "ZII").canonical();
        assert_eq!(a, c);
        assert!(a.is_canonical());
    }

    #[test]
    fn small_n_has_no_generators() {
        assert_eq!(generate_gen_set(2, GenMode::Canonical), Err(Error::TooFewQubits(2)));
    }

    #[test]
    fn ccz_expansion() {
        let u = gen_element_unitary(&t("ZII", "IZI", "IIZ")).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i != j {
                    0.0
                } else if i == 7 {
                    -1.0
                } else {
                    1.0
                };
                assert!((u[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
