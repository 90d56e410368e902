//! Counting bounds on the generating sets, Toffoli-count lower bounds and
//! Pauli expansions of rotation gates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::pauli::Pauli;

fn pow(b: i64, n: u32) -> BigInt {
    BigInt::from(b).pow(n)
}

fn frac(num: BigInt, den: i64) -> BigRational {
    BigRational::new(num, BigInt::from(den))
}

/// Upper bound on the size of the Toffoli generating set.
pub fn gen_set_bound_tof(n: u32) -> BigRational {
    let p = |b| pow(b, n);
    frac(p(64) - p(52) - BigInt::from(17) * (p(16) - p(4)), 384)
        + frac(p(48) - BigInt::from(2) * p(24), 576)
        - frac(p(12) - BigInt::from(2) * p(6), 36)
        + frac(p(13) - 1, 24)
}

/// Upper bound on the size of the Clifford+CS generating set.
pub fn gen_set_bound_cs(n: u32) -> BigRational {
    let p = |b| pow(b, n);
    frac(p(16) - p(13) - p(4) + 1, 8) + frac(p(12) - BigInt::from(2) * p(6), 12)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v <= 0.0 {
        return Err(Error::Format(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Lower bound on the epsilon-Toffoli-count from the largest Pauli
/// coefficient magnitude `alpha_max` and support size `m`, up to the
/// unspecified constant `c`. Clamped at zero.
pub fn lower_bound_approx(alpha_max: f64, m: usize, epsilon: f64, c: f64) -> Result<f64> {
    check_positive("alpha_max", alpha_max)?;
    check_positive("epsilon", epsilon)?;
    check_positive("c", c)?;
    if m == 0 {
        return Err(Error::Format("support size must be positive".into()));
    }
    let sm = (m as f64).sqrt();
    let v = (1.0 / epsilon).log(4.0)
        - ((epsilon / (2.0 * sm) + (2.0 * m as f64).sqrt()) / (c * alpha_max)).log(4.0);
    Ok(v.max(0.0))
}

/// Exact-case lower bound `log4(alpha_max c sqrt(M))`, clamped at zero.
pub fn lower_bound_exact(alpha_max: f64, m: usize, c: f64) -> Result<f64> {
    check_positive("alpha_max", alpha_max)?;
    check_positive("c", c)?;
    if m == 0 {
        return Err(Error::Format("support size must be positive".into()));
    }
    Ok((alpha_max * c * (m as f64).sqrt()).log(4.0).max(0.0))
}

/// Largest Pauli coefficient magnitude and the number of coefficients
/// above `tol`.
pub fn coefficient_summary(coeffs: &[Complex64], tol: f64) -> (f64, usize) {
    let alpha = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let support = coeffs.iter().filter(|c| c.norm() > tol).count();
    (alpha, support)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RotationKind {
    /// `diag(e^{-it/2}, e^{it/2})`.
    Rz,
    /// `Rz` controlled on the first qubit.
    CRz,
    /// `diag(1, 1, 1, e^{it})`.
    CRn,
    /// Rotation by `t` in the span of `|01>`, `|10>`.
    Givens,
    /// `diag(1, ..., 1, e^{it})` on three qubits.
    CcRn,
    /// `Rz` controlled on the first two qubits.
    CcRz,
}

impl RotationKind {
    pub const ALL: [RotationKind; 6] = [
        RotationKind::Rz,
        RotationKind::CRz,
        RotationKind::CRn,
        RotationKind::Givens,
        RotationKind::CcRn,
        RotationKind::CcRz,
    ];

    pub fn arity(&self) -> usize {
        match self {
            RotationKind::Rz => 1,
            RotationKind::CRz | RotationKind::CRn | RotationKind::Givens => 2,
            RotationKind::CcRn | RotationKind::CcRz => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RotationKind::Rz => "rz",
            RotationKind::CRz => "crz",
            RotationKind::CRn => "crn",
            RotationKind::Givens => "givens",
            RotationKind::CcRn => "ccrn",
            RotationKind::CcRz => "ccrz",
        }
    }

    /// Dense matrix at angle `theta`.
    pub fn unitary(&self, theta: f64) -> Matrix {
        let d = 1usize << self.arity();
        let mut m = Matrix::identity(d, d);
        let e = |x: f64| Complex64::from_polar(1.0, x);
        match self {
            RotationKind::Rz => {
                m[(0, 0)] = e(-theta / 2.0);
                m[(1, 1)] = e(theta / 2.0);
            }
            RotationKind::CRz => {
                m[(2, 2)] = e(-theta / 2.0);
                m[(3, 3)] = e(theta / 2.0);
            }
            RotationKind::CRn => m[(3, 3)] = e(theta),
            RotationKind::Givens => {
                let (s, c) = theta.sin_cos();
                m[(1, 1)] = c.into();
                m[(1, 2)] = (-s).into();
                m[(2, 1)] = s.into();
                m[(2, 2)] = c.into();
            }
            RotationKind::CcRn => m[(7, 7)] = e(theta),
            RotationKind::CcRz => {
                m[(6, 6)] = e(-theta / 2.0);
                m[(7, 7)] = e(theta / 2.0);
            }
        }
        m
    }
}

impl fmt::Display for RotationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RotationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<RotationKind> {
        RotationKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Format(format!("unknown rotation kind {s:?}")))
    }
}

/// Coefficient `k0 + k1 e^{it} + k2 cos(t/2) + k3 sin(t/2) + k4 cos t + k5 sin t`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CoeffForm {
    pub constant: Complex64,
    pub exp_i: Complex64,
    pub cos_half: Complex64,
    pub sin_half: Complex64,
    pub cos: Complex64,
    pub sin: Complex64,
}

impl CoeffForm {
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.constant
            + self.exp_i * Complex64::from_polar(1.0, theta)
            + self.cos_half * (theta / 2.0).cos()
            + self.sin_half * (theta / 2.0).sin()
            + self.cos * theta.cos()
            + self.sin * theta.sin()
    }
}

impl fmt::Display for CoeffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            (self.constant, ""),
            (self.exp_i, " e^{it}"),
            (self.cos_half, " cos(t/2)"),
            (self.sin_half, " sin(t/2)"),
            (self.cos, " cos(t)"),
            (self.sin, " sin(t)"),
        ];
        let shown: Vec<String> = parts
            .iter()
            .filter(|(k, _)| k.norm() > 0.0)
            .map(|(k, s)| {
                let k = if k.im == 0.0 {
                    format!("{}", k.re)
                } else if k.re == 0.0 {
                    format!("{}i", k.im)
                } else {
                    format!("({}{:+}i)", k.re, k.im)
                };
                format!("{k}{s}")
            })
            .collect();
        if shown.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&shown.join(" + "))
        }
    }
}

/// Pauli expansion of a rotation family with angle-dependent coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationExpansion {
    pub kind: RotationKind,
    pub terms: Vec<(Pauli, CoeffForm)>,
}

impl RotationExpansion {
    /// Numeric coefficients at `theta`.
    pub fn eval(&self, theta: f64) -> Vec<(Pauli, Complex64)> {
        self.terms.iter().map(|(p, c)| (*p, c.eval(theta))).collect()
    }

    /// Dense matrix assembled from the expansion.
    pub fn to_matrix(&self, theta: f64) -> Matrix {
        let n = self.kind.arity();
        let d = 1usize << n;
        let mut m = Matrix::zeros(d, d);
        for (p, c) in self.eval(theta) {
            for j in 0..d {
                let (k, ph) = p.apply_to_basis(j);
                m[(k, j)] += ph.to_complex() * c;
            }
        }
        m
    }
}

pub fn rotation_expansion(kind: RotationKind) -> RotationExpansion {
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let p = |s: &str| s.parse::<Pauli>().expect("valid Pauli");
    let form = CoeffForm::default;
    let phase = |c: f64, e: f64| CoeffForm {
        constant: re(c),
        exp_i: re(e),
        ..form()
    };
    let half_cos = |c: f64, k: f64| CoeffForm {
        constant: re(c),
        cos_half: re(k),
        ..form()
    };
    let half_sin = |k: Complex64| CoeffForm {
        sin_half: k,
        ..form()
    };
    let terms = match kind {
        RotationKind::Rz => vec![
            (p("I"), half_cos(0.0, 1.0)),
            (p("Z"), half_sin(im(-1.0))),
        ],
        RotationKind::CRz => vec![
            (p("II"), half_cos(0.5, 0.5)),
            (p("ZI"), half_cos(0.5, -0.5)),
            (p("IZ"), half_sin(im(-0.5))),
            (p("ZZ"), half_sin(im(0.5))),
        ],
        RotationKind::CRn => vec![
            (p("II"), phase(0.75, 0.25)),
            (p("ZI"), phase(0.25, -0.25)),
            (p("IZ"), phase(0.25, -0.25)),
            (p("ZZ"), phase(-0.25, 0.25)),
        ],
        RotationKind::Givens => vec![
            (
                p("II"),
                CoeffForm {
                    constant: re(0.5),
                    cos: re(0.5),
                    ..form()
                },
            ),
            (
                p("XY"),
                CoeffForm {
                    sin: im(0.5),
                    ..form()
                },
            ),
            (
                p("YX"),
                CoeffForm {
                    sin: im(-0.5),
                    ..form()
                },
            ),
            (
                p("ZZ"),
                CoeffForm {
                    constant: re(0.5),
                    cos: re(-0.5),
                    ..form()
                },
            ),
        ],
        RotationKind::CcRn => {
            let mut t = vec![(p("III"), phase(0.875, 0.125))];
            for s in ["IIZ", "IZI", "ZII", "ZZZ"] {
                t.push((p(s), phase(0.125, -0.125)));
            }
            for s in ["IZZ", "ZZI", "ZIZ"] {
                t.push((p(s), phase(-0.125, 0.125)));
            }
            t
        }
        RotationKind::CcRz => vec![
            (p("III"), half_cos(0.75, 0.25)),
            (p("ZII"), half_cos(0.25, -0.25)),
            (p("IZI"), half_cos(0.25, -0.25)),
            (p("ZZI"), half_cos(-0.25, 0.25)),
            (p("IIZ"), half_sin(im(-0.25))),
            (p("IZZ"), half_sin(im(0.25))),
            (p("ZIZ"), half_sin(im(0.25))),
            (p("ZZZ"), half_sin(im(-0.25))),
        ],
    };
    RotationExpansion { kind, terms }
}
