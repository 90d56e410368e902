// Independent oracles shared by the integration tests. Nothing here calls
// the library's arithmetic; only its types are used for input and output.
#![allow(dead_code)]

use std::collections::HashSet;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};
use tofsynth::{ChannelMatrix, GenTriple};

pub type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter_matrix(l: char) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match l {
        'I' => CMat::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("bad letter {l}"),
    }
}

/// Kronecker product of the letters, leftmost letter most significant.
pub fn pauli_matrix(s: &str) -> CMat {
    s.chars()
        .map(letter_matrix)
        .reduce(|a, b| a.kronecker(&b))
        .unwrap()
}

/// Pauli string of basis index `k`, base 4 with I, X, Y, Z = 0..3.
pub fn pauli_string(n: usize, mut k: usize) -> String {
    let mut out = vec!['I'; n];
    for q in (0..n).rev() {
        out[q] = ['I', 'X', 'Y', 'Z'][k % 4];
        k /= 4;
    }
    out.into_iter().collect()
}

pub fn all_pauli_matrices(n: usize) -> Vec<CMat> {
    (0..1usize << (2 * n))
        .map(|k| pauli_matrix(&pauli_string(n, k)))
        .collect()
}

pub fn generator_unitary(t: &GenTriple) -> CMat {
    let [a, b, cc] = t.paulis().map(|p| pauli_matrix(&p.to_string()));
    let d = a.nrows();
    let id = CMat::identity(d, d);
    let sum = &a + &b + &cc - &a * &b - &b * &cc - &cc * &a + &a * &b * &cc;
    id * c(0.75, 0.0) + sum * c(0.25, 0.0)
}

/// `Tr(P_r U P_s U^dagger) / 2^n`.
pub fn channel_f64(u: &CMat) -> DMatrix<f64> {
    let d = u.nrows();
    let n = d.trailing_zeros() as usize;
    let ps = all_pauli_matrices(n);
    let ud = u.adjoint();
    let dim = ps.len();
    let conj: Vec<CMat> = ps.iter().map(|p| u * p * &ud).collect();
    DMatrix::from_fn(dim, dim, |r, s| {
        (&ps[r] * &conj[s]).trace().re / d as f64
    })
}

/// Pauli coefficients `Tr(P U) / 2^n`.
pub fn pauli_coefficients(u: &CMat) -> Vec<Complex64> {
    let d = u.nrows();
    let n = d.trailing_zeros() as usize;
    all_pauli_matrices(n)
        .iter()
        .map(|p| (p * u).trace() / d as f64)
        .collect()
}

/// `sqrt(1 - |Tr(U^dagger W)| / 2^n)`, evaluated as the phase-aligned
/// Frobenius residual so that tiny distances keep their precision.
pub fn distance(u: &CMat, w: &CMat) -> f64 {
    let d = u.nrows() as f64;
    let t = (u.adjoint() * w).trace();
    if t.norm() == 0.0 {
        return 1.0;
    }
    let phase = t.conj() / t.norm();
    let r = u - w * phase;
    (r.norm_squared() / (2.0 * d)).sqrt()
}

pub fn to_rationals(m: &ChannelMatrix) -> Vec<BigRational> {
    let den = BigInt::one() << m.exponent();
    m.numerators()
        .iter()
        .map(|&a| BigRational::new(BigInt::from(a), den.clone()))
        .collect()
}

/// Schoolbook product over the rationals.
pub fn rational_product(a: &[BigRational], b: &[BigRational], dim: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let x = &a[i * dim + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..dim {
                let y = &b[k * dim + j];
                if !y.is_zero() {
                    out[i * dim + j] += x * y;
                }
            }
        }
    }
    out
}

/// Smallest `k` with every entry of `2^k m` integral.
pub fn rational_sde(m: &[BigRational]) -> u32 {
    m.iter()
        .map(|x| {
            let d = x.denom();
            assert!(
                (d & (d - BigInt::one())).is_zero(),
                "denominator {d} is not a power of two"
            );
            d.bits() as u32 - 1
        })
        .max()
        .unwrap_or(0)
}

/// Integer matrix `2 <G>`, derived from the dense generator.
pub fn doubled_generator(t: &GenTriple) -> Vec<Vec<(usize, i64)>> {
    let ch = channel_f64(&generator_unitary(t));
    let dim = ch.nrows();
    (0..dim)
        .map(|r| {
            (0..dim)
                .filter_map(|s| {
                    let v = 2.0 * ch[(r, s)];
                    let k = v.round();
                    assert!((v - k).abs() < 1e-9, "entry not a half-integer");
                    (k != 0.0).then_some((s, k as i64))
                })
                .collect()
        })
        .collect()
}

/// Normalized integer channel `nums / 2^exp`.
#[derive(Clone, Debug)]
pub struct IntChannel {
    pub dim: usize,
    pub exp: u32,
    pub nums: Vec<i64>,
}

impl IntChannel {
    pub fn from_channel(m: &ChannelMatrix) -> IntChannel {
        let mut out = IntChannel {
            dim: m.dim(),
            exp: m.exponent(),
            nums: m.numerators().to_vec(),
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        while self.exp > 0 && self.nums.iter().all(|a| a % 2 == 0) {
            self.nums.iter_mut().for_each(|a| *a /= 2);
            self.exp -= 1;
        }
    }

    pub fn sde(&self) -> u32 {
        self.exp
    }

    /// `<G> self`, or `None` as soon as an entry has sde above `budget`.
    pub fn left_mul(&self, g2: &[Vec<(usize, i64)>], budget: u32) -> Option<IntChannel> {
        let dim = self.dim;
        let exp = self.exp + 1;
        let modulus = if exp > budget { 1i64 << (exp - budget) } else { 1 };
        let mut nums = vec![0i64; dim * dim];
        for (r, row) in g2.iter().enumerate() {
            for j in 0..dim {
                let mut acc = 0i64;
                for &(k, w) in row {
                    acc += w * self.nums[k * dim + j];
                }
                if acc % modulus != 0 {
                    return None;
                }
                nums[r * dim + j] = acc;
            }
        }
        let mut out = IntChannel { dim, exp, nums };
        out.normalize();
        Some(out)
    }

    /// Digest of the matrix modulo signed column permutations.
    pub fn coset_key(&self) -> [u8; 32] {
        let dim = self.dim;
        let mut cols: Vec<Vec<i64>> = (0..dim)
            .map(|j| {
                let mut col: Vec<i64> = (0..dim).map(|i| self.nums[i * dim + j]).collect();
                if col.iter().find(|&&a| a != 0).is_some_and(|&a| a < 0) {
                    col.iter_mut().for_each(|a| *a = -*a);
                }
                col
            })
            .collect();
        cols.sort();
        let mut h = Sha256::new();
        h.update(self.exp.to_le_bytes());
        for col in cols {
            for a in col {
                h.update(a.to_le_bytes());
            }
        }
        h.finalize().into()
    }
}

/// Minimal number of generators `k <= max_depth` with `<G_k>...<G_1> u`
/// a signed permutation, by breadth-first search over cosets with
/// admissible sde pruning.
pub fn bfs_min_count(
    u: &ChannelMatrix,
    gens: &[Vec<Vec<(usize, i64)>>],
    max_depth: usize,
) -> Option<usize> {
    let start = IntChannel::from_channel(u);
    if start.sde() as usize > max_depth {
        return None;
    }
    let mut seen: HashSet<[u8; 32]> = HashSet::new();
    seen.insert(start.coset_key());
    let mut frontier = vec![start];
    for depth in 0..=max_depth {
        if frontier.iter().any(|m| m.sde() == 0) {
            return Some(depth);
        }
        if depth == max_depth {
            break;
        }
        let budget = (max_depth - depth - 1) as u32;
        let mut next = Vec::new();
        for node in &frontier {
            for g in gens {
                if let Some(child) = node.left_mul(g, budget) {
                    if seen.insert(child.coset_key()) {
                        next.push(child);
                    }
                }
            }
        }
        frontier = next;
    }
    None
}
