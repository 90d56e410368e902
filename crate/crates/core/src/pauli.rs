//! n-qubit Pauli operators in symplectic bit form.
//!
//! Qubit 1 is the leftmost character of a Pauli string and the most
//! significant digit of its [`PauliIndex`]. In the bit masks qubit `q` lives
//! at bit `n - q`, which is also the bit it occupies in a computational basis
//! index, so masks act directly on basis states.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dense::{self, Matrix};
use crate::error::{Error, Result};

/// Largest qubit count a [`Pauli`] can describe (indices must fit in `u64`).
pub const MAX_QUBITS: usize = 31;

/// A power of `i`, stored as its exponent modulo 4.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(e: u32) -> Phase {
        Phase((e % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Sign as an integer; only meaningful when [`Phase::is_real`] holds.
    pub fn sign(self) -> i64 {
        if self.0 == 2 {
            -1
        } else {
            1
        }
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    fn prefix(self) -> &'static str {
        ["", "i", "-", "-i"][self.0 as usize]
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Position of a Pauli in the base-4 enumeration `I=0, X=1, Y=2, Z=3`,
/// qubit 1 most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliIndex(pub usize);

/// An unsigned (Hermitian) n-qubit Pauli operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pauli {
    n: u8,
    x: u64,
    z: u64,
}

impl Pauli {
    pub fn identity(n: usize) -> Pauli {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Pauli { n: n as u8, x: 0, z: 0 }
    }

    /// Builds a Pauli from raw masks (qubit `q` at bit `n - q`).
    pub fn from_bits(n: usize, x: u64, z: u64) -> Pauli {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let mask = mask(n);
        assert!(x & !mask == 0 && z & !mask == 0, "bits outside {n} qubits");
        Pauli { n: n as u8, x, z }
    }

    /// Single-qubit letter `letter` on qubit `q` (1-based).
    pub fn single(n: usize, q: usize, letter: char) -> Pauli {
        assert!(q >= 1 && q <= n, "qubit {q} out of range 1..={n}");
        let bit = 1u64 << (n - q);
        let (x, z) = match letter {
            'I' => (0, 0),
            'X' => (bit, 0),
            'Y' => (bit, bit),
            'Z' => (0, bit),
            _ => panic!("unknown Pauli letter {letter:?}"),
        };
        Pauli::from_bits(n, x, z)
    }

    pub fn x(n: usize, q: usize) -> Pauli {
        Pauli::single(n, q, 'X')
    }

    pub fn z(n: usize, q: usize) -> Pauli {
        Pauli::single(n, q, 'Z')
    }

    pub fn num_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Letter acting on qubit `q` (1-based).
    pub fn letter(&self, q: usize) -> char {
        let bit = 1u64 << (self.n as usize - q);
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn index(&self) -> PauliIndex {
        let n = self.n as usize;
        let mut idx = 0usize;
        for b in (0..n).rev() {
            let x = (self.x >> b) & 1;
            let z = (self.z >> b) & 1;
            let digit = match (x, z) {
                (0, 0) => 0,
                (1, 0) => 1,
                (1, 1) => 2,
                _ => 3,
            };
            idx = idx * 4 + digit;
        }
        PauliIndex(idx)
    }

    pub fn from_index(n: usize, index: PauliIndex) -> Pauli {
        assert!(n <= MAX_QUBITS);
        assert!(index.0 < num_paulis(n), "index {} out of range", index.0);
        let (mut x, mut z) = (0u64, 0u64);
        let mut rest = index.0;
        for b in 0..n {
            let (dx, dz) = match rest % 4 {
                0 => (0, 0),
                1 => (1, 0),
                2 => (1, 1),
                _ => (0, 1),
            };
            x |= dx << b;
            z |= dz << b;
            rest /= 4;
        }
        Pauli { n: n as u8, x, z }
    }

    /// Symplectic inner product is zero.
    pub fn commutes(&self, other: &Pauli) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    pub fn try_commutes(&self, other: &Pauli) -> Result<bool> {
        check_dims(self.num_qubits(), other.num_qubits())?;
        Ok(self.commutes(other))
    }

    /// Product with the phase dropped.
    pub fn mul_unsigned(&self, other: &Pauli) -> Pauli {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        Pauli {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    pub fn signed(self) -> SignedPauli {
        SignedPauli::new(Phase::ONE, self)
    }

    /// Dense `2^n x 2^n` matrix.
    pub fn to_matrix(&self) -> Result<Matrix> {
        self.signed().to_matrix()
    }

    /// `(column -> (row, value))` action on basis state `j`: `P|j> = value |row>`.
    #[inline]
    pub fn apply_to_basis(&self, j: usize) -> (usize, Phase) {
        let y = (self.x & self.z).count_ones();
        let sign = 2 * ((self.z & j as u64).count_ones() % 2);
        (j ^ self.x as usize, Phase::from_exponent(y + sign))
    }
}

impl PartialOrd for Pauli {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by qubit count, then by [`PauliIndex`].
impl Ord for Pauli {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.index().cmp(&other.index()))
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 1..=self.num_qubits() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pauli> {
        let sp: SignedPauli = s.parse()?;
        if sp.phase != Phase::ONE {
            return Err(Error::PauliParse {
                input: s.to_string(),
                reason: "unsigned Pauli expected".into(),
            });
        }
        Ok(sp.pauli)
    }
}

/// A Pauli operator times a power of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedPauli {
    pub phase: Phase,
    pub pauli: Pauli,
}

impl SignedPauli {
    pub fn new(phase: Phase, pauli: Pauli) -> SignedPauli {
        SignedPauli { phase, pauli }
    }

    pub fn identity(n: usize) -> SignedPauli {
        Pauli::identity(n).signed()
    }

    pub fn num_qubits(&self) -> usize {
        self.pauli.num_qubits()
    }

    pub fn neg(self) -> SignedPauli {
        SignedPauli::new(self.phase * Phase::MINUS_ONE, self.pauli)
    }

    /// Exact operator product `self * other`.
    pub fn try_mul(&self, other: &SignedPauli) -> Result<SignedPauli> {
        check_dims(self.num_qubits(), other.num_qubits())?;
        let (a, b) = (&self.pauli, &other.pauli);
        let out = a.mul_unsigned(b);
        // P(x,z) = i^{|x&z|} X^x Z^z and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
        let e = self.phase.0 as u32
            + other.phase.0 as u32
            + (a.x & a.z).count_ones()
            + (b.x & b.z).count_ones()
            + 2 * (a.z & b.x).count_ones()
            + 4 * 64
            - (out.x & out.z).count_ones();
        Ok(SignedPauli::new(Phase::from_exponent(e), out))
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        let n = self.num_qubits();
        dense::check_dense_limit("pauli matrix", n)?;
        let dim = 1usize << n;
        let mut m = Matrix::zeros(dim, dim);
        for j in 0..dim {
            let (row, ph) = self.pauli.apply_to_basis(j);
            m[(row, j)] = (ph * self.phase).to_complex();
        }
        Ok(m)
    }
}

impl Mul for SignedPauli {
    type Output = SignedPauli;

    fn mul(self, rhs: SignedPauli) -> SignedPauli {
        self.try_mul(&rhs).expect("qubit count mismatch")
    }
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase.prefix(), self.pauli)
    }
}

impl FromStr for SignedPauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<SignedPauli> {
        let bad = |reason: &str| Error::PauliParse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let (phase, body) = if let Some(rest) = t.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = t.strip_prefix('i') {
            (Phase::I, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else {
            (Phase::ONE, t)
        };
        let n = body.chars().count();
        if n == 0 {
            return Err(bad("empty operator"));
        }
        if n > MAX_QUBITS {
            return Err(bad("too many qubits"));
        }
        let mut p = Pauli::identity(n);
        for (k, c) in body.chars().enumerate() {
            let bit = 1u64 << (n - 1 - k);
            match c {
                'I' => {}
                'X' => p.x |= bit,
                'Y' => {
                    p.x |= bit;
                    p.z |= bit
                }
                'Z' => p.z |= bit,
                _ => return Err(bad(&format!("unexpected character {c:?}"))),
            }
        }
        Ok(SignedPauli::new(phase, p))
    }
}

/// `4^n`.
pub fn num_paulis(n: usize) -> usize {
    1usize << (2 * n)
}

/// All n-qubit Paulis in [`PauliIndex`] order.
pub fn all_paulis(n: usize) -> impl Iterator<Item = Pauli> {
    (0..num_paulis(n)).map(move |i| Pauli::from_index(n, PauliIndex(i)))
}

pub fn pauli_mul(a: &SignedPauli, b: &SignedPauli) -> Result<SignedPauli> {
    a.try_mul(b)
}

pub fn pauli_commutes(p: &Pauli, q: &Pauli) -> Result<bool> {
    p.try_commutes(q)
}

/// `Tr(u P) / 2^n`, using the one-nonzero-per-column structure of `P`.
pub fn trace_with_pauli(u: &Matrix, p: &Pauli) -> Complex64 {
    let dim = u.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..dim {
        // (uP)[j,j] = u[j,k] P[k,j] with P|j> = ph |k>.
        let (k, ph) = p.apply_to_basis(j);
        acc += u[(j, k)] * ph.to_complex();
    }
    acc / dim as f64
}

/// Pauli-basis coefficients `q_P = Tr(u P) / 2^n`, indexed by [`PauliIndex`].
pub fn pauli_coefficients(u: &Matrix) -> Result<Vec<Complex64>> {
    let n = dense::qubits_of(u)?;
    Ok(all_paulis(n).map(|p| trace_with_pauli(u, &p)).collect())
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(a, b));
    }
    Ok(())
}
