//! epsilon-Toffoli-count synthesis for arbitrary unitaries: exhaustive word
//! search, the amplitude and conjugation tests, and reconstruction of the
//! trailing Clifford.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::{chan_rep_unitary, ChannelMatrix};
use crate::clifford::{circuit_to_unitary, clifford_from_channel, global_phase_distance, Circuit};
use crate::dense::{self, Matrix};
use crate::error::{Error, Result};
use crate::exact::Generators;
use crate::genset::{gen_element_unitary, word_unitary, GenTriple};
use crate::pauli::{num_paulis, trace_with_pauli, Pauli, PauliIndex};

/// Floating slack added to every band edge.
pub const BAND_SLACK: f64 = 1e-9;

/// Pauli-coefficient magnitudes `|Tr(w' P)| / N`, sorted descending, with
/// the split `M` between the large set `S1` and the small set `S0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeProfile {
    /// `(|t_P|, P)` sorted by decreasing magnitude.
    pub values: Vec<(f64, Pauli)>,
    /// Number of entries in `S1`; zero when no split passed.
    pub m: usize,
}

impl AmplitudeProfile {
    pub fn s1(&self) -> &[(f64, Pauli)] {
        &self.values[..self.m]
    }

    pub fn s0(&self) -> &[(f64, Pauli)] {
        &self.values[self.m..]
    }
}

fn coefficients(w: &Matrix, n: usize) -> Vec<Complex64> {
    (0..num_paulis(n))
        .map(|i| trace_with_pauli(w, &Pauli::from_index(n, PauliIndex(i))))
        .collect()
}

/// Amplitude test: returns the profile, with `m > 0` iff some split `M`
/// fits the bands around `1/sqrt(M)` and `0`.
pub fn amplitude_test(w_prime: &Matrix, epsilon: f64) -> Result<AmplitudeProfile> {
    let n = dense::qubits_of(w_prime)?;
    let coeffs = coefficients(w_prime, n);
    Ok(profile_from(&coeffs, n, epsilon))
}

fn profile_from(coeffs: &[Complex64], n: usize, epsilon: f64) -> AmplitudeProfile {
    let mut values: Vec<(f64, Pauli)> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (c.norm(), Pauli::from_index(n, PauliIndex(i))))
        .collect();
    values.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let e2 = 2.0 * epsilon * epsilon - epsilon.powi(4);
    let mut m = 0;
    for split in 1..=values.len() {
        let sm = (split as f64).sqrt();
        let delta = sm * e2.max(0.0).sqrt();
        let lo = (1.0 - epsilon * epsilon) / sm - delta - BAND_SLACK;
        let hi = 1.0 / sm + delta + BAND_SLACK;
        // Sorted values: only the extremes of each group matter.
        let top_ok = values[0].0 <= hi && values[split - 1].0 >= lo;
        let rest_ok = values.get(split).is_none_or(|v| v.0 <= delta + BAND_SLACK);
        if top_ok && rest_ok {
            m = split;
            break;
        }
    }
    AmplitudeProfile { values, m }
}

/// Conjugation test: every `w' P w'^dagger` has one Pauli coefficient of
/// magnitude at least `1 - 4 eps^2 + 2 eps^4` and none in `(2 eps, that)`.
pub fn conjugation_test(w_prime: &Matrix, epsilon: f64) -> Result<bool> {
    let n = dense::qubits_of(w_prime)?;
    let hi = 1.0 - 4.0 * epsilon * epsilon + 2.0 * epsilon.powi(4) - BAND_SLACK;
    let lo = 2.0 * epsilon + BAND_SLACK;
    let wd = w_prime.adjoint();
    let d = 1usize << n;
    for out in 1..num_paulis(n) {
        let p = Pauli::from_index(n, PauliIndex(out));
        let mut wp = Matrix::zeros(d, d);
        for j in 0..d {
            let (k, ph) = p.apply_to_basis(j);
            let z = ph.to_complex();
            for i in 0..d {
                wp[(i, j)] = w_prime[(i, k)] * z;
            }
        }
        let a = wp * &wd;
        let mut big = 0;
        for pin in 0..num_paulis(n) {
            let t = trace_with_pauli(&a, &Pauli::from_index(n, PauliIndex(pin))).norm();
            if t >= hi {
                big += 1;
            } else if t > lo {
                return Ok(false);
            }
        }
        if big != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both tests on `w'`; returns the profile when they pass.
pub fn near_clifford(w_prime: &Matrix, epsilon: f64) -> Result<Option<AmplitudeProfile>> {
    let profile = amplitude_test(w_prime, epsilon)?;
    if profile.m == 0 || !conjugation_test(w_prime, epsilon)? {
        return Ok(None);
    }
    Ok(Some(profile))
}

/// Bounds on `|Tr(E Q P1)| / N` for a general unitary `Q` with Pauli
/// coefficients `q`, when `|Tr(E)| >= N (1 - eps^2)`. Diagnostic only.
pub fn coefficient_band(q: &[Complex64], p1: usize, epsilon: f64) -> (f64, f64) {
    let e = (2.0 * epsilon * epsilon - epsilon.powi(4)).max(0.0).sqrt();
    let others: f64 = q
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != p1)
        .map(|(_, c)| c.norm())
        .sum();
    let a = q[p1].norm();
    ((1.0 - epsilon * epsilon) * a - others * e, a + others * e)
}

/// A passing word of the search, leftmost generator first.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxMatch {
    pub word: Vec<GenTriple>,
    pub w_prime: Matrix,
    pub profile: AmplitudeProfile,
}

/// Searches all words `G_1 ... G_m` (no two neighbours equivalent) for one
/// with `w^dagger G_1 ... G_m` within `epsilon` of a Clifford. The first
/// passing word in lexicographic index order is returned.
pub fn approx_tof_decide(
    w: &Matrix,
    m: usize,
    epsilon: f64,
    gens: &Generators,
) -> Result<Option<ApproxMatch>> {
    let n = dense::check_unitary(w, 1e-8)?;
    if n != gens.num_qubits() {
        return Err(Error::DimensionMismatch(gens.num_qubits(), n));
    }
    let wd = w.adjoint();
    if m == 0 {
        return Ok(near_clifford(&wd, epsilon)?.map(|profile| ApproxMatch {
            word: Vec::new(),
            w_prime: wd,
            profile,
        }));
    }
    let units: Vec<Matrix> = (0..gens.len())
        .map(|i| gen_element_unitary(&gens.triple(i)))
        .collect::<Result<_>>()?;
    let keys: Vec<[Pauli; 7]> = (0..gens.len()).map(|i| gens.triple(i).subgroup()).collect();
    let found = (0..gens.len())
        .into_par_iter()
        .map(|first| -> Result<Option<(Vec<usize>, Matrix, AmplitudeProfile)>> {
            let mut path = vec![first];
            let left = &wd * &units[first];
            search(&left, &mut path, m, epsilon, &units, &keys)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok(found.map(|(path, w_prime, profile)| ApproxMatch {
        word: path.iter().map(|&i| gens.triple(i)).collect(),
        w_prime,
        profile,
    }))
}

fn search(
    left: &Matrix,
    path: &mut Vec<usize>,
    m: usize,
    epsilon: f64,
    units: &[Matrix],
    keys: &[[Pauli; 7]],
) -> Result<Option<(Vec<usize>, Matrix, AmplitudeProfile)>> {
    if path.len() == m {
        return Ok(near_clifford(left, epsilon)?.map(|p| (path.clone(), left.clone(), p)));
    }
    let last = *path.last().unwrap();
    for g in 0..units.len() {
        if keys[g] == keys[last] {
            continue;
        }
        path.push(g);
        let next = left * &units[g];
        let hit = search(&next, path, m, epsilon, units, keys)?;
        path.pop();
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Trailing Clifford recovered from `w' ~ C_0^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrailingClifford {
    /// `C~_0 = r sum conj(a_P) P` over `S1`.
    pub coefficients: Vec<(Pauli, Complex64)>,
    pub unitary: Matrix,
    pub circuit: Circuit,
}

/// Rebuilds `C_0` from the large Pauli coefficients of `w'`. Phases are
/// taken relative to the identity when it is in `S1`, else relative to the
/// largest coefficient.
pub fn reconstruct_trailing_clifford(
    w_prime: &Matrix,
    profile: &AmplitudeProfile,
) -> Result<TrailingClifford> {
    let n = dense::qubits_of(w_prime)?;
    let s1 = profile.s1();
    if s1.is_empty() {
        return Err(Error::Reconstruction("amplitude test did not pass".into()));
    }
    let r = 1.0 / (s1.len() as f64).sqrt();
    let identity = Pauli::identity(n);
    let reference = s1
        .iter()
        .find(|(_, p)| *p == identity)
        .unwrap_or(&s1[0])
        .1;
    let t_ref = trace_with_pauli(w_prime, &reference);
    let coefficients: Vec<(Pauli, Complex64)> = s1
        .iter()
        .map(|&(_, p)| {
            let a = trace_with_pauli(w_prime, &p) / t_ref;
            (p, (a / a.norm()).conj() * r)
        })
        .collect();
    let d = 1usize << n;
    let mut approx = Matrix::zeros(d, d);
    for (p, c) in &coefficients {
        for j in 0..d {
            let (k, ph) = p.apply_to_basis(j);
            approx[(k, j)] += ph.to_complex() * c;
        }
    }
    let err = dense::unitarity_error(&approx);
    if err > 0.25 {
        return Err(Error::Reconstruction(format!(
            "rebuilt operator is not unitary (deviation {err:.3e})"
        )));
    }
    // Snap the channel to a signed permutation and synthesize it exactly.
    let ch = chan_rep_unitary_loose(&approx)?;
    let dim = num_paulis(n);
    let mut cols = Vec::with_capacity(dim);
    for c in 0..dim {
        let (r, v) = (0..dim)
            .map(|r| (r, ch[(r, c)]))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        if v.abs() < 0.5 {
            return Err(Error::Reconstruction(format!("column {c} has no dominant entry")));
        }
        cols.push((r, if v > 0.0 { 1 } else { -1 }));
    }
    let exact = ChannelMatrix::from_signed_columns(n, &cols);
    if !exact.is_signed_permutation() {
        return Err(Error::Reconstruction("channel is not a signed permutation".into()));
    }
    let circuit = clifford_from_channel(&exact)
        .map_err(|e| Error::Reconstruction(format!("no Clifford for the snapped channel: {e}")))?;
    let unitary = circuit_to_unitary(&circuit)?;
    Ok(TrailingClifford {
        coefficients,
        unitary,
        circuit,
    })
}

/// Channel of a nearly unitary matrix: normalizes before the trace formula.
fn chan_rep_unitary_loose(u: &Matrix) -> Result<nalgebra::DMatrix<f64>> {
    let svd = u.clone().svd(true, true);
    let (Some(a), Some(b)) = (svd.u, svd.v_t) else {
        return Err(Error::Reconstruction("singular value decomposition failed".into()));
    };
    chan_rep_unitary(&(a * b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxResult {
    pub epsilon: f64,
    pub count: usize,
    /// Leftmost generator first: the target is close to `G_1 ... G_m C_0`.
    pub word: Vec<GenTriple>,
    pub trailing: TrailingClifford,
    /// `d(w, G_1 ... G_m C_0)`.
    pub distance: f64,
}

/// Smallest `m <= max_count` with a passing word, with the trailing Clifford
/// rebuilt and the achieved distance checked against `epsilon`.
pub fn approx_tof_opt(
    w: &Matrix,
    epsilon: f64,
    gens: &Generators,
    max_count: usize,
) -> Result<ApproxResult> {
    let n = gens.num_qubits();
    for m in 0..=max_count {
        let Some(found) = approx_tof_decide(w, m, epsilon, gens)? else {
            log::info!("no word of length {m} within {epsilon}");
            continue;
        };
        let trailing = reconstruct_trailing_clifford(&found.w_prime, &found.profile)?;
        let approx = word_unitary(n, &found.word)? * &trailing.unitary;
        let distance = global_phase_distance(w, &approx)?;
        if distance > epsilon + BAND_SLACK {
            return Err(Error::Reconstruction(format!(
                "achieved distance {distance:.3e} exceeds {epsilon:.3e}"
            )));
        }
        return Ok(ApproxResult {
            epsilon,
            count: m,
            word: found.word,
            trailing,
            distance,
        });
    }
    Err(Error::BudgetExceeded(format!(
        "no decomposition with at most {max_count} Toffoli gates within {epsilon}"
    )))
}
