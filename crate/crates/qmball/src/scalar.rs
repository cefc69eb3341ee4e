//! The ground field: rational functions in `s = q^(1/2)` with rational
//! coefficients, plus exact numeric evaluation at a rational `q`.
//!
//! Every coefficient in the library lives here. A [`Scalar`] is kept in a
//! canonical form (numerator and denominator coprime, denominator monic),
//! so equality of values is plain structural equality. `q` itself is the
//! alias `s^2`; half-integer powers of `q` are honest monomials in `s`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, the coefficient substrate.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("scalar contains an odd power of s: irrational at rational q")]
    OddSPower,
    #[error("denominator vanishes at q = {0}: pole")]
    Pole(Rational),
}

/// Dense polynomial in `s` over the rationals. `coeffs[i]` multiplies `s^i`;
/// the vector carries no trailing zeros (empty means zero).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
struct SPoly {
    coeffs: Vec<Rational>,
}

fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

impl SPoly {
    fn zero() -> Self {
        SPoly { coeffs: Vec::new() }
    }

    fn constant(c: Rational) -> Self {
        let mut p = SPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    fn one() -> Self {
        SPoly::constant(Rational::one())
    }

    fn monomial(c: Rational, exp: usize) -> Self {
        if c.is_zero() {
            return SPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); exp + 1];
        coeffs[exp] = c;
        SPoly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; None for zero.
    fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Lowest exponent with a nonzero coefficient; None for zero.
    fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn is_monomial(&self) -> bool {
        matches!((self.degree(), self.valuation()), (Some(d), Some(v)) if d == v)
    }

    fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    fn add(&self, other: &SPoly) -> SPoly {
        let mut coeffs = vec![Rational::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        let mut p = SPoly { coeffs };
        p.trim();
        p
    }

    fn neg(&self) -> SPoly {
        SPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn sub(&self, other: &SPoly) -> SPoly {
        self.add(&other.neg())
    }

    fn mul(&self, other: &SPoly) -> SPoly {
        if self.is_zero() || other.is_zero() {
            return SPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        let mut p = SPoly { coeffs };
        p.trim();
        p
    }

    fn scale(&self, c: &Rational) -> SPoly {
        if c.is_zero() {
            return SPoly::zero();
        }
        SPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; the divisor must be nonzero.
    fn divrem(&self, d: &SPoly) -> (SPoly, SPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead_inv = Rational::one() / d.leading();
        let mut rem = self.clone();
        let mut quot = SPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading() * &lead_inv;
            let shift = rd - dd;
            quot = quot.add(&SPoly::monomial(factor.clone(), shift));
            rem = rem.sub(&d.mul(&SPoly::monomial(factor, shift)));
        }
        (quot, rem)
    }

    /// Monic gcd. Monomial operands only share powers of `s`, which gives a
    /// cheap path that covers almost every reduction in practice.
    fn gcd(a: &SPoly, b: &SPoly) -> SPoly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_monomial() || b.is_monomial() {
            let v = a.valuation().unwrap().min(b.valuation().unwrap());
            return SPoly::monomial(Rational::one(), v);
        }
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.divrem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    fn monic(&self) -> SPoly {
        if self.is_zero() {
            return SPoly::zero();
        }
        let inv = Rational::one() / self.leading();
        self.scale(&inv)
    }

    /// Substitute `s^2 = q`. Fails if any odd power of `s` survives.
    fn eval_even(&self, q: &Rational) -> Result<Rational, ScalarError> {
        let mut acc = Rational::zero();
        let mut qpow = Rational::one();
        for (e, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() && e % 2 == 1 {
                return Err(ScalarError::OddSPower);
            }
            if e % 2 == 0 {
                if e > 0 {
                    qpow *= q;
                }
                if !c.is_zero() {
                    acc += c * &qpow;
                }
            }
        }
        Ok(acc)
    }
}

/// An element of the ground field: a reduced fraction of polynomials in `s`.
///
/// Invariants: the denominator is nonzero and monic, and shares no factor
/// with the numerator, so two equal values are structurally equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scalar {
    num: SPoly,
    den: SPoly,
}

impl Scalar {
    fn make(num: SPoly, den: SPoly) -> Scalar {
        assert!(!den.is_zero(), "scalar with zero denominator");
        if num.is_zero() {
            return Scalar {
                num: SPoly::zero(),
                den: SPoly::one(),
            };
        }
        let g = SPoly::gcd(&num, &den);
        let (num, r1) = num.divrem(&g);
        debug_assert!(r1.is_zero());
        let (den, r2) = den.divrem(&g);
        debug_assert!(r2.is_zero());
        let lead_inv = Rational::one() / den.leading();
        Scalar {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        }
    }

    pub fn zero() -> Scalar {
        Scalar {
            num: SPoly::zero(),
            den: SPoly::one(),
        }
    }

    pub fn one() -> Scalar {
        Scalar {
            num: SPoly::one(),
            den: SPoly::one(),
        }
    }

    pub fn from_int(v: i64) -> Scalar {
        Scalar::from_rational(rat_int(v))
    }

    pub fn from_rational(c: Rational) -> Scalar {
        Scalar {
            num: SPoly::constant(c),
            den: SPoly::one(),
        }
    }

    /// `s^k`, with `s = q^(1/2)`; negative `k` lands in the denominator.
    pub fn s_pow(k: i64) -> Scalar {
        if k >= 0 {
            Scalar {
                num: SPoly::monomial(Rational::one(), k as usize),
                den: SPoly::one(),
            }
        } else {
            Scalar {
                num: SPoly::one(),
                den: SPoly::monomial(Rational::one(), (-k) as usize),
            }
        }
    }

    /// `q^k = s^(2k)`.
    pub fn q_pow(k: i64) -> Scalar {
        Scalar::s_pow(2 * k)
    }

    pub fn q() -> Scalar {
        Scalar::q_pow(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == SPoly::one() && self.den == SPoly::one()
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::make(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn pow_checked(&self, exp: i64) -> Result<Scalar, ScalarError> {
        if exp < 0 && self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut acc = Scalar::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * self;
        }
        if exp < 0 {
            acc = Scalar::one().checked_div(&acc)?;
        }
        Ok(acc)
    }

    /// Exact value at `q = q_value` (so `s^2 = q_value`). Errors on odd
    /// powers of `s` and on poles; square roots are never approximated.
    pub fn evaluate_at(&self, q_value: &Rational) -> Result<Rational, ScalarError> {
        let den = self.den.eval_even(q_value)?;
        if den.is_zero() {
            return Err(ScalarError::Pole(q_value.clone()));
        }
        let num = self.num.eval_even(q_value)?;
        Ok(num / den)
    }

    /// True when the printed form is a sum or difference of several terms,
    /// which a product context must parenthesize.
    pub fn is_compound(&self) -> bool {
        if self.den.is_monomial() || self.den == SPoly::one() {
            self.num.coeffs.iter().filter(|c| !c.is_zero()).count() > 1
        } else {
            false // prints as a fraction, which binds tightly
        }
    }

    /// Split into (is_negative, magnitude) for sum-style printing. Compound
    /// scalars count as positive; their parentheses keep the sign inside.
    pub fn signed_display(&self) -> (bool, String) {
        if self.is_compound() {
            return (false, self.to_string());
        }
        match laurent_terms(&self.num, &self.den) {
            Some(terms) if terms.len() == 1 => {
                let (c, e) = &terms[0];
                if c.is_negative() {
                    (true, laurent_term_string(&(-c), *e))
                } else {
                    (false, laurent_term_string(c, *e))
                }
            }
            Some(_) => (false, self.to_string()),
            None => {
                let (num_terms, den_terms) = self.fraction_display_parts();
                if num_terms.len() == 1 && num_terms[0].0.is_negative() {
                    let flipped: Vec<_> = num_terms.iter().map(|(c, e)| (-c, *e)).collect();
                    (
                        true,
                        format!("{}/({})", poly_string(&flipped), poly_string(&den_terms)),
                    )
                } else {
                    (false, self.to_string())
                }
            }
        }
    }

    /// Numerator and denominator terms for fraction printing. The canonical
    /// denominator is monic; if its lowest term is negative, both sides are
    /// negated so the denominator reads like `1 - q^2`.
    fn fraction_display_parts(&self) -> (LaurentTerms, LaurentTerms) {
        let num_terms = laurent_terms(&self.num, &SPoly::one()).unwrap();
        let den_terms = laurent_terms(&self.den, &SPoly::one()).unwrap();
        if den_terms.first().is_some_and(|(c, _)| c.is_negative()) {
            (
                num_terms.iter().map(|(c, e)| (-c, *e)).collect(),
                den_terms.iter().map(|(c, e)| (-c, *e)).collect(),
            )
        } else {
            (num_terms, den_terms)
        }
    }
}

/// Printable terms `(coefficient, s-exponent)` in increasing exponent order.
type LaurentTerms = Vec<(Rational, i64)>;

/// Terms of `num/den` when the denominator is a power of `s`.
fn laurent_terms(num: &SPoly, den: &SPoly) -> Option<LaurentTerms> {
    if !den.is_monomial() && *den != SPoly::one() {
        return None;
    }
    let shift = den.valuation().unwrap_or(0) as i64;
    Some(
        num.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (c.clone(), e as i64 - shift))
            .collect(),
    )
}

/// One Laurent term with a nonnegative coefficient, e.g. `3/2*q^-2`, `s`, `q`.
fn laurent_term_string(c: &Rational, e: i64) -> String {
    let base = if e == 0 {
        None
    } else if e % 2 == 0 {
        let k = e / 2;
        Some(if k == 1 {
            "q".to_string()
        } else {
            format!("q^{k}")
        })
    } else {
        Some(if e == 1 {
            "s".to_string()
        } else {
            format!("s^{e}")
        })
    };
    match base {
        None => format!("{c}"),
        Some(b) => {
            if c.is_one() {
                b
            } else {
                format!("{c}*{b}")
            }
        }
    }
}

fn poly_string(terms: &[(Rational, i64)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (c, e)) in terms.iter().enumerate() {
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&laurent_term_string(&c.abs(), *e));
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match laurent_terms(&self.num, &self.den) {
            Some(terms) => write!(f, "{}", poly_string(&terms)),
            None => {
                let (num_terms, den_terms) = self.fraction_display_parts();
                let num_str = if num_terms.len() > 1 {
                    format!("({})", poly_string(&num_terms))
                } else {
                    poly_string(&num_terms)
                };
                write!(f, "{}/({})", num_str, poly_string(&den_terms))
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Scalar::make(self.num.add(&other.num), self.den.clone());
        }
        Scalar::make(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: &Scalar) -> Scalar {
        self + &(-other)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        Scalar::make(self.num.mul(&other.num), self.den.mul(&other.den))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, other: Scalar) -> Scalar {
        &self + &other
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, other: Scalar) -> Scalar {
        &self - &other
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, other: Scalar) -> Scalar {
        &self * &other
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
