//! Exact Toffoli-count synthesis: nested meet-in-the-middle (provably
//! minimal) and the sde / Hamming-weight pruned tree search (heuristic).

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    chan_rep_generator, coset_label, mult_generator, word_channel, ChannelMatrix, CompactRows,
};
use crate::clifford::{clifford_from_channel, Circuit};
use crate::error::{Error, Result};
use crate::genset::{gen_element_circuit, GenSet, GenTriple};
use crate::pauli::Pauli;

/// A generating set with its compact channels precomputed.
#[derive(Clone, Debug)]
pub struct Generators {
    set: GenSet,
    rows: Vec<CompactRows>,
    keys: Vec<[Pauli; 7]>,
}

impl Generators {
    pub fn new(set: GenSet) -> Generators {
        let rows = set.triples.par_iter().map(chan_rep_generator).collect();
        let keys = set.triples.iter().map(GenTriple::subgroup).collect();
        Generators { set, rows, keys }
    }

    pub fn set(&self) -> &GenSet {
        &self.set
    }

    pub fn num_qubits(&self) -> usize {
        self.set.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn triple(&self, i: usize) -> GenTriple {
        self.set.triples[i]
    }

    pub fn rows(&self, i: usize) -> &CompactRows {
        &self.rows[i]
    }

    /// `<G_i> m`.
    pub fn apply(&self, i: usize, m: &ChannelMatrix) -> Result<ChannelMatrix> {
        mult_generator(&self.rows[i], m)
    }

    fn same_class(&self, i: usize, j: usize) -> bool {
        self.keys[i] == self.keys[j]
    }

    fn check(&self, u: &ChannelMatrix) -> Result<()> {
        if u.num_qubits() != self.num_qubits() {
            return Err(Error::DimensionMismatch(self.num_qubits(), u.num_qubits()));
        }
        Ok(())
    }
}

/// `u = <G_1> ... <G_k> <C_0>` with `C_0` a signed permutation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub word: Vec<GenTriple>,
    pub trailing: ChannelMatrix,
}

impl Decomposition {
    pub fn count(&self) -> usize {
        self.word.len()
    }

    /// Exact check against the target channel.
    pub fn verify(&self, u: &ChannelMatrix) -> bool {
        self.trailing.is_signed_permutation()
            && word_channel(u.num_qubits(), &self.word)
                .and_then(|w| w.mul(&self.trailing))
                .map(|p| p == *u)
                .unwrap_or(false)
    }

    /// Circuit for the trailing Clifford; fails when the signed permutation
    /// is not the channel of any Clifford.
    pub fn trailing_circuit(&self) -> Result<Circuit> {
        clifford_from_channel(&self.trailing)
    }

    /// Full circuit: trailing Clifford first, then `G_k`, ..., `G_1`.
    pub fn circuit(&self) -> Result<Circuit> {
        let mut c = self.trailing_circuit()?;
        for t in self.word.iter().rev() {
            c.extend(&gen_element_circuit(t));
        }
        Ok(c)
    }
}

fn finish(gens: &Generators, path: &[usize], node: ChannelMatrix) -> Decomposition {
    Decomposition {
        word: path.iter().map(|&i| gens.triple(i)).collect(),
        trailing: node,
    }
}

/// Divide-and-select rule of the tree search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Rule {
    /// Two cells: sde increases or not.
    #[default]
    A,
    /// Nine cells: sign of the sde change times sign of the Hamming change.
    B,
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rule> {
        match s {
            "A" | "a" => Ok(Rule::A),
            "B" | "b" => Ok(Rule::B),
            _ => Err(Error::Format(format!("unknown rule {s:?}"))),
        }
    }
}

/// Child counts per (sde change, Hamming change) cell; index 0 = increase,
/// 1 = unchanged, 2 = decrease.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SHMatrix(pub [[usize; 3]; 3]);

impl SHMatrix {
    pub fn total(&self) -> usize {
        self.0.iter().flatten().sum()
    }

    /// Minimum nonzero cell, scanning the sde-decrease row and the
    /// Hamming-decrease column first; the first minimum wins.
    pub fn min_cell(&self) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), usize)> = None;
        for r in [2, 1, 0] {
            for c in [2, 1, 0] {
                let v = self.0[r][c];
                if v > 0 && best.is_none_or(|(_, b)| v < b) {
                    best = Some(((r, c), v));
                }
            }
        }
        best.map(|(cell, _)| cell)
    }
}

fn delta_index(child: i64, parent: i64) -> usize {
    match child.cmp(&parent) {
        std::cmp::Ordering::Greater => 0,
        std::cmp::Ordering::Equal => 1,
        std::cmp::Ordering::Less => 2,
    }
}

/// Cell of a child under `rule`. Rule A uses only column 0, with row 0 for
/// an sde increase and row 1 otherwise.
pub fn sh_cell(rule: Rule, child: (u32, usize), parent: (u32, usize)) -> (usize, usize) {
    let ds = delta_index(child.0 as i64, parent.0 as i64);
    match rule {
        Rule::A => (if ds == 0 { 0 } else { 1 }, 0),
        Rule::B => (ds, delta_index(child.1 as i64, parent.1 as i64)),
    }
}

/// Counts one child and returns its cell.
pub fn update_sh(
    sh: &mut SHMatrix,
    rule: Rule,
    child: (u32, usize),
    parent: (u32, usize),
) -> (usize, usize) {
    let cell = sh_cell(rule, child, parent);
    sh.0[cell.0][cell.1] += 1;
    cell
}

#[derive(Clone, Debug, PartialEq)]
pub enum HeuristicOutcome {
    Found(Decomposition),
    /// Every child was pruned at this level.
    Exhausted { level: usize },
    /// Depth `m` reached without a Clifford; nothing is proven.
    DepthLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicReport {
    pub outcome: HeuristicOutcome,
    /// Surviving nodes after each level.
    pub frontier: Vec<usize>,
}

impl HeuristicReport {
    pub fn decomposition(&self) -> Option<&Decomposition> {
        match &self.outcome {
            HeuristicOutcome::Found(d) => Some(d),
            _ => None,
        }
    }
}

struct Node {
    matrix: ChannelMatrix,
    path: Vec<usize>,
}

/// Pruned tree search for a decomposition with at most `m` generators.
pub fn exact_tof_decide(
    u: &ChannelMatrix,
    m: usize,
    rule: Rule,
    gens: &Generators,
) -> Result<HeuristicReport> {
    gens.check(u)?;
    let mut frontier = Vec::new();
    if u.sde() == 0 {
        let d = finish(gens, &[], u.clone());
        return Ok(HeuristicReport {
            outcome: HeuristicOutcome::Found(d),
            frontier,
        });
    }
    let mut nodes = vec![Node {
        matrix: u.clone(),
        path: Vec::new(),
    }];
    for level in 1..=m {
        // A child at this level needs at least sde more steps.
        let budget = (m - level) as u32;
        // First pass: statistics only, to keep memory flat.
        let stats: Vec<Vec<(usize, u32, usize)>> = nodes
            .par_iter()
            .map(|node| -> Result<Vec<(usize, u32, usize)>> {
                let last = node.path.last().copied();
                let mut out = Vec::new();
                for g in 0..gens.len() {
                    if last.is_some_and(|l| gens.same_class(l, g)) {
                        continue;
                    }
                    let child = gens.apply(g, &node.matrix)?;
                    out.push((g, child.sde(), child.hamming()));
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        for (ni, kids) in stats.iter().enumerate() {
            if let Some(&(g, _, _)) = kids.iter().find(|k| k.1 == 0) {
                let node = &nodes[ni];
                let mut path = node.path.clone();
                path.push(g);
                let leaf = gens.apply(g, &node.matrix)?;
                frontier.push(0);
                log::info!("level {level}: reached a Clifford");
                return Ok(HeuristicReport {
                    outcome: HeuristicOutcome::Found(finish(gens, &path, leaf)),
                    frontier,
                });
            }
        }
        let mut sh = SHMatrix::default();
        let mut cells: Vec<Vec<(usize, (usize, usize), u32)>> = Vec::with_capacity(nodes.len());
        for (ni, kids) in stats.iter().enumerate() {
            let parent = (nodes[ni].matrix.sde(), nodes[ni].matrix.hamming());
            let mut v = Vec::new();
            for &(g, sde, ham) in kids {
                if sde > budget {
                    continue;
                }
                v.push((g, update_sh(&mut sh, rule, (sde, ham), parent), sde));
            }
            cells.push(v);
        }
        let Some(best) = sh.min_cell() else {
            frontier.push(0);
            return Ok(HeuristicReport {
                outcome: HeuristicOutcome::Exhausted { level },
                frontier,
            });
        };
        let selected: Vec<(usize, usize)> = cells
            .iter()
            .enumerate()
            .flat_map(|(ni, v)| {
                v.iter()
                    .filter(|(_, cell, sde)| *cell == best || *sde == 1)
                    .map(move |(g, _, _)| (ni, *g))
            })
            .collect();
        let next: Vec<Node> = selected
            .par_iter()
            .map(|&(ni, g)| {
                let node = &nodes[ni];
                let mut path = node.path.clone();
                path.push(g);
                Ok(Node {
                    matrix: gens.apply(g, &node.matrix)?,
                    path,
                })
            })
            .collect::<Result<_>>()?;
        log::info!(
            "level {level}: {} children, cell {:?}, {} kept",
            sh.total(),
            best,
            next.len()
        );
        frontier.push(next.len());
        nodes = next;
    }
    Ok(HeuristicReport {
        outcome: HeuristicOutcome::DepthLimit,
        frontier,
    })
}

/// Runs the tree search with `m = sde(u), sde(u) + 1, ...` up to
/// `sde(u) + extra`.
pub fn exact_tof_opt(
    u: &ChannelMatrix,
    rule: Rule,
    gens: &Generators,
    extra: usize,
) -> Result<Option<Decomposition>> {
    let start = u.sde() as usize;
    for m in start..=start + extra {
        let report = exact_tof_decide(u, m, rule, gens)?;
        if let HeuristicOutcome::Found(d) = report.outcome {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Coset labels of all products of exactly minimal length `0..=depth`,
/// each with one shortest word (leftmost generator first).
#[derive(Clone, Debug)]
pub struct MitmDatabase {
    layers: Vec<HashMap<[u8; 32], Vec<u32>>>,
}

impl MitmDatabase {
    /// Builds layers up to `depth`; fails once more than `max_entries`
    /// labels would be stored.
    pub fn build(gens: &Generators, depth: usize, max_entries: usize) -> Result<MitmDatabase> {
        let n = gens.num_qubits();
        let mut layers: Vec<HashMap<[u8; 32], Vec<u32>>> = Vec::new();
        let mut root = HashMap::new();
        root.insert(coset_label(&ChannelMatrix::identity(n)).digest(), Vec::new());
        layers.push(root);
        let mut total = 1usize;
        for len in 1..=depth {
            let mut prev: Vec<&Vec<u32>> = layers[len - 1].values().collect();
            prev.sort();
            let found: Vec<Vec<([u8; 32], Vec<u32>)>> = prev
                .par_iter()
                .map(|w| -> Result<Vec<([u8; 32], Vec<u32>)>> {
                    let base = word_matrix(gens, w)?;
                    let mut out = Vec::new();
                    for g in 0..gens.len() {
                        if w.first().is_some_and(|&f| gens.same_class(f as usize, g)) {
                            continue;
                        }
                        let m = gens.apply(g, &base)?;
                        let mut word = Vec::with_capacity(w.len() + 1);
                        word.push(g as u32);
                        word.extend_from_slice(w);
                        out.push((coset_label(&m).digest(), word));
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()?;
            let mut layer = HashMap::new();
            for (key, word) in found.into_iter().flatten() {
                if layers.iter().any(|l| l.contains_key(&key)) || layer.contains_key(&key) {
                    continue;
                }
                layer.insert(key, word);
                total += 1;
                if total > max_entries {
                    return Err(Error::BudgetExceeded(format!(
                        "meet-in-the-middle database exceeds {max_entries} entries at depth {len}"
                    )));
                }
            }
            log::info!("database layer {len}: {} labels", layer.len());
            layers.push(layer);
        }
        Ok(MitmDatabase { layers })
    }

    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(HashMap::len).collect()
    }

    pub fn lookup(&self, len: usize, digest: &[u8; 32]) -> Option<&Vec<u32>> {
        self.layers.get(len)?.get(digest)
    }

    fn words(&self, len: usize) -> Vec<&Vec<u32>> {
        let mut v: Vec<&Vec<u32>> = self.layers[len].values().collect();
        v.sort();
        v
    }
}

/// `<G_{w_1}> ... <G_{w_k}>`.
fn word_matrix(gens: &Generators, w: &[u32]) -> Result<ChannelMatrix> {
    let mut m = ChannelMatrix::identity(gens.num_qubits());
    for &g in w.iter().rev() {
        m = gens.apply(g as usize, &m)?;
    }
    Ok(m)
}

/// `<W>^T m` for a word `W = G_1 ... G_k`.
fn strip_word(gens: &Generators, w: &[u32], m: &ChannelMatrix) -> Result<ChannelMatrix> {
    let mut m = m.clone();
    for &g in w {
        m = gens.apply(g as usize, &m)?;
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq)]
pub enum MitmOutcome {
    Found(Decomposition),
    /// The Toffoli-count exceeds `m`.
    ExceedsBound,
}

/// Default cap on stored labels.
pub const MITM_MAX_ENTRIES: usize = 5_000_000;

/// Minimal decomposition with at most `m` generators, searching products
/// of `c - 1` database words against the database.
pub fn nested_mitm(
    u: &ChannelMatrix,
    m: usize,
    c: usize,
    gens: &Generators,
    max_entries: usize,
) -> Result<MitmOutcome> {
    gens.check(u)?;
    if c < 2 {
        return Err(Error::Format("nesting level must be at least 2".into()));
    }
    if u.sde() == 0 {
        return Ok(MitmOutcome::Found(finish(gens, &[], u.clone())));
    }
    let d = m.div_ceil(c);
    let db = MitmDatabase::build(gens, d, max_entries)?;
    nested_mitm_with(u, m, c, gens, &db)
}

/// As [`nested_mitm`] with a prebuilt database of depth `>= ceil(m / c)`.
pub fn nested_mitm_with(
    u: &ChannelMatrix,
    m: usize,
    c: usize,
    gens: &Generators,
    db: &MitmDatabase,
) -> Result<MitmOutcome> {
    gens.check(u)?;
    let d = db.depth();
    if d * c < m {
        return Err(Error::Format(format!(
            "database depth {d} too small for m = {m}, c = {c}"
        )));
    }
    if u.sde() == 0 {
        return Ok(MitmOutcome::Found(finish(gens, &[], u.clone())));
    }
    for total in u.sde() as usize..=m {
        if let Some(word) = search_split(u, total, c, gens, db)? {
            let path: Vec<usize> = word.iter().map(|&g| g as usize).collect();
            let trailing = strip_word(gens, &word, u)?;
            debug_assert!(trailing.is_signed_permutation());
            return Ok(MitmOutcome::Found(finish(gens, &path, trailing)));
        }
    }
    Ok(MitmOutcome::ExceedsBound)
}

/// A word of length exactly `total` split into `parts` database words,
/// whose product is `u` up to a Clifford.
fn search_split(
    u: &ChannelMatrix,
    total: usize,
    parts: usize,
    gens: &Generators,
    db: &MitmDatabase,
) -> Result<Option<Vec<u32>>> {
    let d = db.depth();
    if parts == 1 {
        if total > d || u.sde() as usize > total {
            return Ok(None);
        }
        return Ok(db.lookup(total, &coset_label(u).digest()).cloned());
    }
    for first in 0..=total.min(d) {
        let rest = total - first;
        if rest > d * (parts - 1) {
            continue;
        }
        let words = db.words(first);
        let hit = words
            .par_iter()
            .map(|w| -> Result<Option<Vec<u32>>> {
                let v = strip_word(gens, w, u)?;
                if v.sde() as usize > rest {
                    return Ok(None);
                }
                Ok(search_split(&v, rest, parts - 1, gens, db)?.map(|tail| {
                    let mut full = (*w).clone();
                    full.extend(tail);
                    full
                }))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}
