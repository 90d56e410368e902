//! Channel (Pauli-transfer) representation `<U>_{rs} = Tr(P_r U P_s U^dagger) / 2^n`.
//!
//! Exact matrices keep all entries over one power-of-two denominator, so
//! the matrix sde is just the stored exponent.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clifford::{Circuit, Gate, Tableau};
use crate::dense::{self, Matrix};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::genset::{GenSet, GenTriple};
use crate::pauli::{num_paulis, trace_with_pauli, Pauli, PauliIndex};

/// Largest qubit count for dense channel matrices (`4^n x 4^n`).
pub const CHANNEL_LIMIT: usize = 5;

/// Largest denominator exponent tried when snapping floating entries.
pub const SNAP_MAX_EXP: u32 = 16;

/// Snap tolerance for floating entries.
pub const SNAP_TOL: f64 = 1e-10;

fn check_channel_limit(n: usize) -> Result<()> {
    if n > CHANNEL_LIMIT {
        return Err(Error::SizeLimit {
            what: "channel matrix",
            n,
            limit: CHANNEL_LIMIT,
        });
    }
    Ok(())
}

/// Exact channel matrix: entry `(r, c)` is `nums[r * dim + c] / 2^exp`,
/// with `exp = 0` or some numerator odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChannelMatrix {
    n: usize,
    exp: u32,
    nums: Vec<i64>,
}

impl ChannelMatrix {
    pub fn identity(n: usize) -> ChannelMatrix {
        let dim = num_paulis(n);
        let mut nums = vec![0; dim * dim];
        for i in 0..dim {
            nums[i * dim + i] = 1;
        }
        ChannelMatrix { n, exp: 0, nums }
    }

    /// Signed permutation with column `s` equal to `sign * e_row`.
    pub fn from_signed_columns(n: usize, cols: &[(usize, i8)]) -> ChannelMatrix {
        let dim = num_paulis(n);
        assert_eq!(cols.len(), dim);
        let mut nums = vec![0; dim * dim];
        for (s, &(r, sign)) in cols.iter().enumerate() {
            nums[r * dim + s] = sign as i64;
        }
        ChannelMatrix { n, exp: 0, nums }
    }

    /// Row-major numerators over `2^exp`; the result is normalized.
    pub fn from_numerators(n: usize, exp: u32, nums: Vec<i64>) -> Result<ChannelMatrix> {
        check_channel_limit(n)?;
        let dim = num_paulis(n);
        if nums.len() != dim * dim {
            return Err(Error::Format(format!(
                "expected {} entries for n = {n}, got {}",
                dim * dim,
                nums.len()
            )));
        }
        let mut m = ChannelMatrix { n, exp, nums };
        m.normalize();
        Ok(m)
    }

    /// Row-major dyadic entries.
    pub fn from_dyadics(n: usize, entries: &[Dyadic]) -> Result<ChannelMatrix> {
        let exp = entries.iter().map(Dyadic::exponent).max().unwrap_or(0);
        let nums = entries
            .iter()
            .map(|d| d.numerator_at(exp).to_i64().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        ChannelMatrix::from_numerators(n, exp, nums)
    }

    fn normalize(&mut self) {
        let or = self.nums.iter().fold(0u64, |acc, &v| acc | v.unsigned_abs());
        if or == 0 {
            self.exp = 0;
            return;
        }
        let shift = or.trailing_zeros().min(self.exp);
        if shift > 0 {
            for v in &mut self.nums {
                *v >>= shift;
            }
            self.exp -= shift;
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Side length `4^n`.
    pub fn dim(&self) -> usize {
        num_paulis(self.n)
    }

    /// Common denominator exponent, equal to the matrix sde.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn numerators(&self) -> &[i64] {
        &self.nums
    }

    pub fn numerator(&self, r: usize, c: usize) -> i64 {
        self.nums[r * self.dim() + c]
    }

    pub fn entry(&self, r: usize, c: usize) -> Dyadic {
        Dyadic::new(BigInt::from(self.numerator(r, c)), self.exp)
    }

    pub fn entries(&self) -> Vec<Dyadic> {
        self.nums
            .iter()
            .map(|&v| Dyadic::new(BigInt::from(v), self.exp))
            .collect()
    }

    /// Largest entry sde.
    pub fn sde(&self) -> u32 {
        self.exp
    }

    /// Number of nonzero entries.
    pub fn hamming(&self) -> usize {
        self.nums.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_signed_permutation(&self) -> bool {
        if self.exp != 0 {
            return false;
        }
        let dim = self.dim();
        let mut row_seen = vec![false; dim];
        for c in 0..dim {
            match self.signed_column(c) {
                Some((r, _)) if !row_seen[r] => row_seen[r] = true,
                _ => return false,
            }
        }
        true
    }

    /// `(row, sign)` of the only nonzero entry of column `c`, if it is `+-1`.
    pub fn signed_column(&self, c: usize) -> Option<(usize, i64)> {
        if self.exp != 0 {
            return None;
        }
        let dim = self.dim();
        let mut found = None;
        for r in 0..dim {
            let v = self.nums[r * dim + c];
            if v != 0 {
                if found.is_some() || v.abs() != 1 {
                    return None;
                }
                found = Some((r, v));
            }
        }
        found
    }

    pub fn transpose(&self) -> ChannelMatrix {
        let dim = self.dim();
        let mut nums = vec![0; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                nums[c * dim + r] = self.nums[r * dim + c];
            }
        }
        ChannelMatrix {
            n: self.n,
            exp: self.exp,
            nums,
        }
    }

    /// Exact product `self * other`.
    pub fn mul(&self, other: &ChannelMatrix) -> Result<ChannelMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let dim = self.dim();
        let rows: Vec<Vec<i64>> = (0..dim)
            .into_par_iter()
            .map(|r| {
                (0..dim)
                    .map(|c| {
                        let mut acc: i128 = 0;
                        for k in 0..dim {
                            acc += self.nums[r * dim + k] as i128 * other.nums[k * dim + c] as i128;
                        }
                        i64::try_from(acc).map_err(|_| Error::Overflow)
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<_>>()?;
        ChannelMatrix::from_numerators(self.n, self.exp + other.exp, rows.concat())
    }

    /// `self * S` for a signed column permutation.
    pub fn permute_columns(&self, s: &SignedPerm) -> ChannelMatrix {
        let dim = self.dim();
        assert_eq!(s.perm.len(), dim);
        let mut nums = vec![0; dim * dim];
        for r in 0..dim {
            for j in 0..dim {
                nums[r * dim + j] = s.signs[j] as i64 * self.nums[r * dim + s.perm[j]];
            }
        }
        ChannelMatrix {
            n: self.n,
            exp: self.exp,
            nums,
        }
    }

    /// Exact orthogonality check `M M^T = I`.
    pub fn is_orthogonal(&self) -> bool {
        self.mul(&self.transpose())
            .map(|p| p == ChannelMatrix::identity(self.n))
            .unwrap_or(false)
    }

    pub fn to_real(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let scale = (self.exp as f64).exp2();
        DMatrix::from_fn(dim, dim, |r, c| self.nums[r * dim + c] as f64 / scale)
    }

    /// Exact matrix from a floating one, snapping entries to dyadics.
    pub fn from_real(m: &DMatrix<f64>) -> Result<ChannelMatrix> {
        let dim = m.nrows();
        if m.ncols() != dim || !dim.is_power_of_two() || !dim.trailing_zeros().is_multiple_of(2) {
            return Err(Error::NotSquare {
                rows: dim,
                cols: m.ncols(),
            });
        }
        let n = dim.trailing_zeros() as usize / 2;
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                let value = m[(r, c)];
                let d = Dyadic::from_f64_snap(value, SNAP_MAX_EXP, SNAP_TOL)
                    .ok_or(Error::NotDyadic { row: r, col: c, value })?;
                entries.push(d);
            }
        }
        ChannelMatrix::from_dyadics(n, &entries)
    }
}

impl fmt::Display for ChannelMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dim = self.dim();
        writeln!(f, "1/2^{} *", self.exp)?;
        for r in 0..dim {
            let row: Vec<String> = (0..dim).map(|c| self.numerator(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    n: usize,
    entries: Vec<Dyadic>,
}

impl Serialize for ChannelMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChannelJson {
            n: self.n,
            entries: self.entries(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChannelMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ChannelJson::deserialize(d)?;
        ChannelMatrix::from_dyadics(j.n, &j.entries).map_err(serde::de::Error::custom)
    }
}

pub fn matrix_sde(m: &ChannelMatrix) -> u32 {
    m.sde()
}

pub fn matrix_hamming(m: &ChannelMatrix) -> usize {
    m.hamming()
}

pub fn is_clifford_channel(m: &ChannelMatrix) -> bool {
    m.is_signed_permutation()
}

/// One non-trivial row of a generator channel: `1/2` on the diagonal and
/// `+-1/2` at three other columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CompactRow {
    pub r: u32,
    pub cols: [u32; 3],
    pub signs: [i8; 3],
}

/// Generator channel; rows not listed are rows of the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactRows {
    pub n: usize,
    pub rows: Vec<CompactRow>,
}

impl CompactRows {
    pub fn to_dense(&self) -> ChannelMatrix {
        let dim = num_paulis(self.n);
        let mut nums = vec![0; dim * dim];
        for i in 0..dim {
            nums[i * dim + i] = 2;
        }
        for row in &self.rows {
            let r = row.r as usize;
            nums[r * dim + r] = 1;
            for (c, s) in row.cols.iter().zip(row.signs) {
                nums[r * dim + *c as usize] = s as i64;
            }
        }
        ChannelMatrix {
            n: self.n,
            exp: 1,
            nums,
        }
    }

    /// Number of diagonal-one rows.
    pub fn unlisted(&self) -> usize {
        num_paulis(self.n) - self.rows.len()
    }
}

/// Compact channel of a generator, computed from the exact Pauli
/// expansion of `G P_r G`.
pub fn chan_rep_generator(t: &GenTriple) -> CompactRows {
    let n = t.num_qubits();
    let [p1, p2, p3] = t.paulis();
    let terms = t.terms();
    let rows: Vec<CompactRow> = (0..num_paulis(n))
        .into_par_iter()
        .filter_map(|r| {
            let pr = Pauli::from_index(n, PauliIndex(r));
            if pr.commutes(&p1) && pr.commutes(&p2) && pr.commutes(&p3) {
                return None;
            }
            // Coefficients in sixteenths, keyed by Pauli index.
            let mut acc: Vec<(usize, i32, i32)> = Vec::with_capacity(8);
            let prs = pr.signed();
            for (a, ca) in &terms {
                let left = *a * prs;
                for (b, cb) in &terms {
                    let prod = left * *b;
                    let w = (*ca as i32) * (*cb as i32);
                    let z = prod.phase.to_complex();
                    let (re, im) = (z.re as i32 * w, z.im as i32 * w);
                    let idx = prod.pauli.index().0;
                    match acc.iter_mut().find(|e| e.0 == idx) {
                        Some(e) => {
                            e.1 += re;
                            e.2 += im;
                        }
                        None => acc.push((idx, re, im)),
                    }
                }
            }
            let mut cols = [0u32; 3];
            let mut signs = [0i8; 3];
            let mut k = 0;
            for (idx, re, im) in acc {
                assert_eq!(im, 0, "generator channel is real");
                if re == 0 {
                    continue;
                }
                if idx == r {
                    assert_eq!(re, 8, "diagonal entry is 1/2");
                    continue;
                }
                assert_eq!(re.abs(), 8, "off-diagonal entries are +-1/2");
                cols[k] = idx as u32;
                signs[k] = re.signum() as i8;
                k += 1;
            }
            assert_eq!(k, 3, "three off-diagonal entries");
            Some(CompactRow {
                r: r as u32,
                cols,
                signs,
            })
        })
        .collect();
    CompactRows { n, rows }
}

/// Exact product `<G> m` using the compact rows.
pub fn mult_generator(g: &CompactRows, m: &ChannelMatrix) -> Result<ChannelMatrix> {
    if g.n != m.n {
        return Err(Error::DimensionMismatch(g.n, m.n));
    }
    let max = m.nums.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    if max > (i64::MAX as u64) / 4 || m.exp == u32::MAX {
        return Err(Error::Overflow);
    }
    let dim = m.dim();
    let mut nums: Vec<i64> = m.nums.iter().map(|v| 2 * v).collect();
    for row in &g.rows {
        let r = row.r as usize;
        let out = &mut nums[r * dim..(r + 1) * dim];
        let src = |i: u32| &m.nums[i as usize * dim..(i as usize + 1) * dim];
        let (a, b, c, d) = (src(row.r), src(row.cols[0]), src(row.cols[1]), src(row.cols[2]));
        let [sb, sc, sd] = row.signs.map(|s| s as i64);
        for j in 0..dim {
            out[j] = a[j] + sb * b[j] + sc * c[j] + sd * d[j];
        }
    }
    let mut out = ChannelMatrix {
        n: m.n,
        exp: m.exp + 1,
        nums,
    };
    out.normalize();
    Ok(out)
}

/// Signed column permutation: column `j` of `M S` is `signs[j] * M[:, perm[j]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(dim: usize) -> SignedPerm {
        SignedPerm {
            perm: (0..dim).collect(),
            signs: vec![1; dim],
        }
    }

    pub fn to_matrix(&self, n: usize) -> ChannelMatrix {
        let cols: Vec<(usize, i8)> = self.perm.iter().copied().zip(self.signs.iter().copied()).collect();
        ChannelMatrix::from_signed_columns(n, &cols)
    }

    pub fn inverse(&self) -> SignedPerm {
        let dim = self.perm.len();
        let mut perm = vec![0; dim];
        let mut signs = vec![0; dim];
        for (j, &p) in self.perm.iter().enumerate() {
            perm[p] = j;
            signs[p] = self.signs[j];
        }
        SignedPerm { perm, signs }
    }

    /// `S = self * other` as matrices.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        let signs = other
            .perm
            .iter()
            .zip(&other.signs)
            .map(|(&p, &s)| s * self.signs[p])
            .collect();
        SignedPerm { perm, signs }
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> SignedPerm {
        let mut perm: Vec<usize> = (0..dim).collect();
        perm.shuffle(rng);
        let signs = (0..dim).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        SignedPerm { perm, signs }
    }
}

/// Canonical form of the coset `M * {signed permutations}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetLabel {
    n: usize,
    exp: u32,
    /// Column-major numerators of the sorted, sign-normalized columns.
    cols: Vec<i64>,
}

impl CosetLabel {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn to_matrix(&self) -> ChannelMatrix {
        let dim = num_paulis(self.n);
        let mut nums = vec![0; dim * dim];
        for c in 0..dim {
            for r in 0..dim {
                nums[r * dim + c] = self.cols[c * dim + r];
            }
        }
        ChannelMatrix {
            n: self.n,
            exp: self.exp,
            nums,
        }
    }

    /// Deterministic serialization: magic, `n`, exponent, then zigzag
    /// varint numerators column by column.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = b"CL1".to_vec();
        out.push(self.n as u8);
        put_varint(&mut out, self.exp as u64);
        for &v in &self.cols {
            put_varint(&mut out, ((v << 1) ^ (v >> 63)) as u64);
        }
        out
    }

    pub fn digest(&self) -> [u8; 32] {
        Sha256::digest(self.to_bytes()).into()
    }

    pub fn hex(&self) -> String {
        hex::encode(self.digest())
    }
}

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

pub fn coset_label(m: &ChannelMatrix) -> CosetLabel {
    coset_label_with_witness(m).0
}

/// Label together with `S` such that `label = M * S`.
pub fn coset_label_with_witness(m: &ChannelMatrix) -> (CosetLabel, SignedPerm) {
    let dim = m.dim();
    let mut cols: Vec<(Vec<i64>, usize, i8)> = (0..dim)
        .map(|c| {
            let mut col: Vec<i64> = (0..dim).map(|r| m.nums[r * dim + c]).collect();
            let first = col.iter().copied().find(|&v| v != 0).unwrap_or(0);
            let sign = if first < 0 { -1 } else { 1 };
            if sign < 0 {
                col.iter_mut().for_each(|v| *v = -*v);
            }
            (col, c, sign)
        })
        .collect();
    cols.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let witness = SignedPerm {
        perm: cols.iter().map(|c| c.1).collect(),
        signs: cols.iter().map(|c| c.2).collect(),
    };
    let label = CosetLabel {
        n: m.n,
        exp: m.exp,
        cols: cols.into_iter().flat_map(|c| c.0).collect(),
    };
    (label, witness)
}

/// Floating channel representation of a dense unitary.
pub fn chan_rep_unitary(u: &Matrix) -> Result<DMatrix<f64>> {
    let n = dense::check_unitary(u, 1e-8)?;
    check_channel_limit(n)?;
    let dim = num_paulis(n);
    let d = 1usize << n;
    let ud = u.adjoint();
    let cols: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|s| {
            let ps = Pauli::from_index(n, PauliIndex(s));
            let mut v = Matrix::zeros(d, d);
            for j in 0..d {
                let (k, ph) = ps.apply_to_basis(j);
                let z: Complex64 = ph.to_complex();
                for i in 0..d {
                    v[(i, j)] = u[(i, k)] * z;
                }
            }
            let ms = v * &ud;
            (0..dim)
                .map(|r| trace_with_pauli(&ms, &Pauli::from_index(n, PauliIndex(r))).re)
                .collect()
        })
        .collect();
    Ok(DMatrix::from_fn(dim, dim, |r, c| cols[c][r]))
}

/// Exact channel of a dense unitary; fails when an entry is not dyadic.
pub fn chan_rep_unitary_exact(u: &Matrix) -> Result<ChannelMatrix> {
    ChannelMatrix::from_real(&chan_rep_unitary(u)?)
}

/// Exact channel of `G_1 G_2 ... G_k`.
pub fn word_channel(n: usize, word: &[GenTriple]) -> Result<ChannelMatrix> {
    let mut m = ChannelMatrix::identity(n);
    for t in word.iter().rev() {
        if t.num_qubits() != n {
            return Err(Error::DimensionMismatch(n, t.num_qubits()));
        }
        m = mult_generator(&chan_rep_generator(t), &m)?;
    }
    Ok(m)
}

/// How the Clifford factor of a random channel is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CliffordFactor {
    /// Random column permutation and column signs.
    #[default]
    SignedPermutation,
    /// Channel of a random Clifford circuit.
    Circuit,
}

#[derive(Clone, Debug)]
pub struct RandomChannel {
    pub matrix: ChannelMatrix,
    /// Generators of the product, leftmost first.
    pub word: Vec<GenTriple>,
    /// Present for [`CliffordFactor::Circuit`].
    pub clifford: Option<Circuit>,
}

impl RandomChannel {
    pub fn ground_truth(&self) -> usize {
        self.word.len()
    }
}

/// Random product of `tof_in` generators (no two neighbours equal) times
/// a random Clifford factor. Deterministic in `seed`.
pub fn random_chan_rep(
    gs: &GenSet,
    tof_in: usize,
    seed: u64,
    factor: CliffordFactor,
) -> Result<RandomChannel> {
    let n = gs.n;
    if gs.is_empty() && tof_in > 0 {
        return Err(Error::TooFewQubits(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = Vec::with_capacity(tof_in);
    while idx.len() < tof_in {
        let k = rng.gen_range(0..gs.len());
        if idx.last() != Some(&k) || gs.len() == 1 {
            idx.push(k);
        }
    }
    let word: Vec<GenTriple> = idx.iter().map(|&k| gs.triples[k]).collect();
    let product = word_channel(n, &word)?;
    let dim = num_paulis(n);
    let (matrix, clifford) = match factor {
        CliffordFactor::SignedPermutation => {
            let mut s = SignedPerm::random(dim, &mut rng);
            // Column 0 stays the identity column of a channel.
            let zero = s.perm.iter().position(|&p| p == 0).unwrap();
            s.perm.swap(0, zero);
            s.signs.swap(0, zero);
            s.signs[0] = 1;
            (product.permute_columns(&s), None)
        }
        CliffordFactor::Circuit => {
            let c = random_clifford_circuit(n, &mut rng);
            let cm = Tableau::from_circuit(&c)?.channel();
            (product.mul(&cm)?, Some(c))
        }
    };
    Ok(RandomChannel {
        matrix,
        word,
        clifford,
    })
}

/// Random circuit of `8 n^2` gates drawn from H, S and CNOT.
pub fn random_clifford_circuit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..8 * n * n {
        let q = rng.gen_range(1..=n);
        let g = match rng.gen_range(0..3) {
            0 => Gate::H(q),
            1 => Gate::S(q),
            _ if n > 1 => {
                let mut t = rng.gen_range(1..=n);
                while t == q {
                    t = rng.gen_range(1..=n);
                }
                Gate::Cnot(q, t)
            }
            _ => Gate::H(q),
        };
        c.push(g);
    }
    c
}
