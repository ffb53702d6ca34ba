//! Closed-form and conjectured formulas for `φ(n, a)`, the diagonal-model
//! binomial, and exact interpolation of `φ(·, a)` as a polynomial in `n`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest `a` with a stored formula.
pub const MAX_FORMULA_A: u32 = 12;

/// Formulas for `a ≤ 5` are theorems; `6 ≤ a ≤ 12` are conjectures.
pub fn is_conjectural(a: u32) -> bool {
    a >= 6
}

/// `φ(n, a) = (1/d)·(n−1)(n−2)…(n−k)·q(n)` with `q` given highest degree
/// first.
struct Formula {
    divisor: i64,
    vanishing: i64,
    inner: &'static [i64],
}

fn formula(a: u32) -> Result<Formula> {
    let f = |divisor, vanishing, inner| Formula {
        divisor,
        vanishing,
        inner,
    };
    Ok(match a {
        4 => f(6, 2, &[5, -3]),
        5 => f(12, 2, &[7, -19, 6]),
        6 => f(120, 2, &[43, -221, 316, -60]),
        // The 57 term is quadratic.
        7 => f(60, 3, &[12, -57, 81, -10]),
        8 => f(840, 3, &[87, -654, 1755, -1844, 140]),
        9 => f(3360, 3, &[169, -1770, 7163, -14042, 12136, -560]),
        10 => f(
            362880,
            3,
            &[8357, -114126, 629471, -1816902, 2911016, -2201088, 60480],
        ),
        11 => f(
            907200,
            4,
            &[9053, -118395, 625700, -1749975, 2847707, -2352810, 37800],
        ),
        12 => f(
            9979200,
            4,
            &[
                40993, -685483, 4763290, -17995750, 41239027, -59728927, 45442410, -415800,
            ],
        ),
        _ => return Err(Error::UnsupportedFormula(a)),
    })
}

/// Evaluates the known (`a ≤ 5`) or conjectured (`6 ≤ a ≤ 12`) formula for
/// `φ(n, a)`. Any integer `n` is accepted, including `n ≤ 0`.
pub fn phi_closed_form(n: i64, a: u32) -> Result<BigRational> {
    let x = BigInt::from(n);
    match a {
        0 => Err(Error::InvalidArgument("a must be at least 1".into())),
        1..=3 => Ok(BigRational::from_integer(num_traits::pow(&x - 1, (a - 1) as usize))),
        _ => {
            let f = formula(a)?;
            let mut value: BigInt = (1..=f.vanishing).map(|k| &x - k).product();
            let inner = f
                .inner
                .iter()
                .fold(BigInt::zero(), |acc, &c| acc * &x + c);
            value *= inner;
            Ok(BigRational::new(value, BigInt::from(f.divisor)))
        }
    }
}

/// `C(n−2, a−1)`: the ML-degree of the diagonal analogue of the model. Zero
/// outside the binomial range.
pub fn beta_diagonal(n: u32, a: u32) -> BigUint {
    if n < 2 || a == 0 || a - 1 > n - 2 {
        return BigUint::zero();
    }
    let top = (n - 2) as u64;
    let k = ((a - 1) as u64).min(top - (a - 1) as u64);
    (0..k).fold(BigUint::one(), |acc, i| acc * (top - i) / (i + 1))
}

/// `φ(·, a)` as a polynomial in `n`, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPolynomial {
    a: u32,
    coeffs: Vec<BigRational>,
}

impl PhiPolynomial {
    pub fn a(&self) -> u32 {
        self.a
    }

    /// Exactly `a` coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree of the polynomial, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, n: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(n));
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Coefficients as `"p/q"` strings, lowest degree first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }
}

impl fmt::Display for PhiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if wrote {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "({mag})")?,
            }
            match k {
                0 => {}
                1 => f.write_str("n")?,
                _ => write!(f, "n^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn poly_mul(p: &[BigRational], q: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Expands the stored formula for `a` into a coefficient list.
pub fn closed_form_polynomial(a: u32) -> Result<PhiPolynomial> {
    let mut coeffs = match a {
        0 => return Err(Error::InvalidArgument("a must be at least 1".into())),
        1..=3 => (0..a - 1).fold(vec![int(1)], |acc, _| poly_mul(&acc, &[int(-1), int(1)])),
        _ => {
            let f = formula(a)?;
            let inner: Vec<BigRational> = f.inner.iter().rev().map(|&c| int(c)).collect();
            let mut p = (1..=f.vanishing).fold(inner, |acc, k| poly_mul(&acc, &[int(-k), int(1)]));
            let scale = BigRational::new(BigInt::one(), BigInt::from(f.divisor));
            p.iter_mut().for_each(|c| *c *= &scale);
            p
        }
    };
    coeffs.resize(a as usize, BigRational::zero());
    Ok(PhiPolynomial { a, coeffs })
}

/// Lagrange interpolation through the first `a` samples; any further samples
/// must lie on the result.
pub fn interpolate_phi(a: u32, samples: &[(i64, BigInt)]) -> Result<PhiPolynomial> {
    if a == 0 {
        return Err(Error::InvalidArgument("a must be at least 1".into()));
    }
    let mut seen = HashSet::new();
    if let Some((n, _)) = samples.iter().find(|(n, _)| !seen.insert(*n)) {
        return Err(Error::InvalidArgument(format!("duplicate sample at n = {n}")));
    }
    let need = a as usize;
    if samples.len() < need {
        return Err(Error::InvalidArgument(format!(
            "{} samples given, at least {need} needed",
            samples.len()
        )));
    }

    let (basis_pts, extra) = samples.split_at(need);
    let mut coeffs = vec![BigRational::zero(); need];
    for (i, (xi, yi)) in basis_pts.iter().enumerate() {
        let mut basis = vec![int(1)];
        let mut scale = BigRational::from_integer(yi.clone());
        for (j, (xj, _)) in basis_pts.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = poly_mul(&basis, &[int(-xj), int(1)]);
            scale /= int(xi - xj);
        }
        for (c, b) in coeffs.iter_mut().zip(basis) {
            *c += b * &scale;
        }
    }
    let poly = PhiPolynomial { a, coeffs };

    for (n, phi) in extra {
        let actual = poly.eval(*n);
        let expected = BigRational::from_integer(phi.clone());
        if actual != expected {
            return Err(Error::InconsistentSample {
                n: *n,
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    Ok(poly)
}
