//! Exact scalars: Laurent polynomials in the deformation parameter `q` over
//! the rationals, and the fraction field built from them.
//!
//! All structure maps of the quantized function algebra only ever produce
//! integer powers of `q` with rational coefficients, so [`LaurentQ`] is the
//! coefficient ring of the symbolic layer. Haar values are genuine rational
//! functions of `q`, which is what [`QRat`] is for.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

/// A Laurent polynomial in `q` with rational coefficients.
///
/// Canonical form: no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LaurentQ {
    coeffs: BTreeMap<i64, BigRational>,
}

impl LaurentQ {
    pub fn zero() -> Self {
        LaurentQ::default()
    }

    pub fn one() -> Self {
        LaurentQ::q_pow(0)
    }

    /// The monomial `q^e`.
    pub fn q_pow(e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(e, BigRational::one());
        LaurentQ { coeffs }
    }

    pub fn from_int(n: i64) -> Self {
        LaurentQ::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0, r);
        }
        LaurentQ { coeffs }
    }

    /// `c * q^e` for rational `c`.
    pub fn term(c: BigRational, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        LaurentQ { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).map_or(false, |c| c.is_one())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn insert_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.coeffs.remove(&e);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    /// Evaluate at a numeric value of `q`.
    pub fn eval(&self, q: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| rational_to_f64(c) * q.powi(*e as i32))
            .sum()
    }

    /// Multiply by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        LaurentQ {
            coeffs: self.coeffs.iter().map(|(k, v)| (k + e, v.clone())).collect(),
        }
    }

    /// Dense coefficient vector `[c_min, ..., c_max]` together with the
    /// minimal exponent. Empty vector for zero.
    pub fn to_dense(&self) -> (i64, Vec<BigRational>) {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => {
                let mut v = vec![BigRational::zero(); (hi - lo + 1) as usize];
                for (e, c) in &self.coeffs {
                    v[(e - lo) as usize] = c.clone();
                }
                (lo, v)
            }
            _ => (0, Vec::new()),
        }
    }

    pub fn from_dense(lo: i64, v: &[BigRational]) -> Self {
        let mut out = LaurentQ::zero();
        for (k, c) in v.iter().enumerate() {
            out.insert_term(lo + k as i64, c.clone());
        }
        out
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Exact for the small numerators/denominators that occur here.
    let n = r.numer();
    let d = r.denom();
    bigint_to_f64(n) / bigint_to_f64(d)
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_string().parse::<f64>().unwrap()
}

impl Add for LaurentQ {
    type Output = LaurentQ;
    fn add(mut self, rhs: LaurentQ) -> LaurentQ {
        self += rhs;
        self
    }
}

impl AddAssign for LaurentQ {
    fn add_assign(&mut self, rhs: LaurentQ) {
        for (e, c) in rhs.coeffs {
            self.insert_term(e, c);
        }
    }
}

impl Sub for LaurentQ {
    type Output = LaurentQ;
    fn sub(mut self, rhs: LaurentQ) -> LaurentQ {
        self -= rhs;
        self
    }
}

impl SubAssign for LaurentQ {
    fn sub_assign(&mut self, rhs: LaurentQ) {
        for (e, c) in rhs.coeffs {
            self.insert_term(e, -c);
        }
    }
}

impl Neg for LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        LaurentQ {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: LaurentQ) -> LaurentQ {
        &self * &rhs
    }
}

impl Mul for &LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.insert_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl MulAssign for LaurentQ {
    fn mul_assign(&mut self, rhs: LaurentQ) {
        *self = &*self * &rhs;
    }
}

impl fmt::Display for LaurentQ {
    /// Canonical text form: `c*q^e` terms joined by ` + `, exponents
    /// ascending, rationals as `p` or `p/r`. Zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*q^{}", c, e)?;
        }
        Ok(())
    }
}

impl LaurentQ {
    /// Parse the canonical text form produced by `Display`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "0" {
            return Ok(LaurentQ::zero());
        }
        let mut out = LaurentQ::zero();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(format!("empty term in laurent polynomial {s:?}"));
            }
            let (c_str, e_str) = match term.split_once("*q^") {
                Some((c, e)) => (c.trim(), e.trim()),
                None => return Err(format!("term {term:?} is not of the form c*q^e")),
            };
            let c = parse_rational(c_str)?;
            let e: i64 = e_str
                .parse()
                .map_err(|_| format!("bad exponent {e_str:?}"))?;
            out.insert_term(e, c);
        }
        Ok(out)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator {n:?}"))?;
            let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator {d:?}"))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// A rational function of `q`: a quotient of two Laurent polynomials.
///
/// Kept reduced (numerator and denominator coprime as polynomials, the
/// denominator a genuine polynomial with positive leading coefficient and
/// nonzero constant term).
#[derive(Clone, Debug)]
pub struct QRat {
    num: LaurentQ,
    den: LaurentQ,
}

impl QRat {
    pub fn zero() -> Self {
        QRat { num: LaurentQ::zero(), den: LaurentQ::one() }
    }

    pub fn one() -> Self {
        QRat { num: LaurentQ::one(), den: LaurentQ::one() }
    }

    pub fn from_laurent(p: LaurentQ) -> Self {
        QRat { num: p, den: LaurentQ::one() }
    }

    pub fn new(num: LaurentQ, den: LaurentQ) -> Self {
        assert!(!den.is_zero(), "division by zero rational function");
        let mut r = QRat { num, den };
        r.reduce();
        r
    }

    pub fn numerator(&self) -> &LaurentQ {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentQ {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.num.eval(q) / self.den.eval(q)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero rational function");
        QRat::new(self.den.clone(), self.num.clone())
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentQ::one();
            return;
        }
        // Pull out the q-power units so both parts are honest polynomials.
        let (nlo, nv) = self.num.to_dense();
        let (dlo, dv) = self.den.to_dense();
        let g = poly_gcd(&nv, &dv);
        let (nq, nr) = poly_divmod(&nv, &g);
        let (dq, dr) = poly_divmod(&dv, &g);
        debug_assert!(nr.iter().all(|c| c.is_zero()));
        debug_assert!(dr.iter().all(|c| c.is_zero()));
        // Normalize: denominator constant term positive (its constant term is
        // nonzero after the gcd step since q does not divide it... it may;
        // shift any residual q-power into the numerator exponent).
        let dshift = dq.iter().position(|c| !c.is_zero()).unwrap() as i64;
        let lead = dq.iter().rev().find(|c| !c.is_zero()).unwrap().clone();
        let scale = lead;
        let nv: Vec<BigRational> = nq.iter().map(|c| c / &scale).collect();
        let dv: Vec<BigRational> = dq.iter().map(|c| c / &scale).collect();
        self.num = LaurentQ::from_dense(nlo - dlo - dshift, &nv);
        self.den = LaurentQ::from_dense(0, &dv[dshift as usize..]);
    }
}

impl PartialEq for QRat {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Add for QRat {
    type Output = QRat;
    fn add(self, rhs: QRat) -> QRat {
        QRat::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for QRat {
    type Output = QRat;
    fn sub(self, rhs: QRat) -> QRat {
        QRat::new(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Mul for QRat {
    type Output = QRat;
    fn mul(self, rhs: QRat) -> QRat {
        QRat::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat { num: -self.num, den: self.den }
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Quotient and remainder of dense polynomial division.
fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let bdeg = match b.iter().rposition(|c| !c.is_zero()) {
        Some(d) => d,
        None => panic!("polynomial division by zero"),
    };
    let blead = b[bdeg].clone();
    let mut rem: Vec<BigRational> = a.to_vec();
    if rem.len() <= bdeg {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - bdeg];
    for i in (bdeg..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let f = &rem[i] / &blead;
        quot[i - bdeg] = f.clone();
        for j in 0..=bdeg {
            let delta = &f * &b[j];
            rem[i - bdeg + j] -= delta;
        }
    }
    (quot, rem)
}

/// Monic gcd of two dense polynomials over the rationals.
fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let trim = |v: &[BigRational]| -> Vec<BigRational> {
        let d = v.iter().rposition(|c| !c.is_zero());
        match d {
            Some(d) => v[..=d].to_vec(),
            None => Vec::new(),
        }
    };
    let mut a = trim(a);
    let mut b = trim(b);
    while !b.is_empty() {
        let (_, r) = poly_divmod(&a, &b);
        a = b;
        b = trim(&r);
    }
    if a.is_empty() {
        return vec![BigRational::one()];
    }
    let lead = a.last().unwrap().clone();
    a.iter().map(|c| c / &lead).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> LaurentQ {
        LaurentQ::q_pow(1)
    }

    #[test]
    fn arithmetic_basics() {
        let one = LaurentQ::one();
        let x = one.clone() + q() * q();
        assert_eq!(x.eval(0.5), 1.25);
        assert_eq!((x.clone() - x.clone()), LaurentQ::zero());
        assert!(LaurentQ::term(BigRational::zero(), 3).is_zero());
    }

    #[test]
    fn display_parse_roundtrip() {
        let x = LaurentQ::from_rational(BigRational::new(BigInt::from(-3), BigInt::from(2)))
            .shift(-1)
            + LaurentQ::one()
            + LaurentQ::q_pow(4);
        let s = x.to_string();
        assert_eq!(s, "-3/2*q^-1 + 1*q^0 + 1*q^4");
        assert_eq!(LaurentQ::parse(&s).unwrap(), x);
    }

    #[test]
    fn qrat_reduction() {
        // (1 - q^4) / (1 - q^2) = 1 + q^2
        let num = LaurentQ::one() - LaurentQ::q_pow(4);
        let den = LaurentQ::one() - LaurentQ::q_pow(2);
        let r = QRat::new(num, den);
        assert_eq!(r, QRat::from_laurent(LaurentQ::one() + LaurentQ::q_pow(2)));
        assert!((r.eval(0.5) - 1.25).abs() < 1e-14);
    }

    #[test]
    fn qrat_field_ops() {
        let one = QRat::one();
        let r = QRat::new(LaurentQ::one(), LaurentQ::one() + LaurentQ::q_pow(2));
        let s = r.clone().recip() * r.clone();
        assert_eq!(s, one);
        assert_eq!(r.clone() - r.clone(), QRat::zero());
        assert!((r.eval(0.5) - 0.8).abs() < 1e-14);
    }
}
