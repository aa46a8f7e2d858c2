//! Exact arithmetic in a real number field Q(λ).
//!
//! A field is given by an integer minimal polynomial together with a rational
//! interval isolating one real root λ. Elements are rational polynomials in λ
//! kept reduced modulo the minimal polynomial. Signs are certified by rational
//! interval evaluation over a bisection-refined isolating interval, so no
//! floating point is involved anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumFieldError {
    #[error("NoRootInInterval: polynomial has no sign change on the interval")]
    NoRootInInterval,
    #[error("MultipleRootsSuspected: polynomial is not square-free or the interval holds several roots")]
    MultipleRootsSuspected,
    #[error("Reducible: polynomial has the rational root {0}")]
    Reducible(String),
    #[error("ConstantPolynomial: minimal polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("FieldMismatch: operands live in different number fields")]
    FieldMismatch,
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("ParseError: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, NumFieldError>;

/// Rational polynomial, coefficients in ascending degree, no trailing zeros.
pub(crate) type Poly = Vec<BigRational>;

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn degree(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &lead;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            let t = &c * bc;
            rem[i + shift] -= t;
        }
        quot[shift] = c;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn poly_derivative(p: &Poly) -> Poly {
    let mut out: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * rat(i as i64))
        .collect();
    trim(&mut out);
    out
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    x
}

pub(crate) fn poly_eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Horner evaluation over a closed rational interval.
fn poly_eval_interval(p: &Poly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut acc = (BigRational::zero(), BigRational::zero());
    for c in p.iter().rev() {
        let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = prods.iter().min().unwrap().clone();
        let mx = prods.iter().max().unwrap().clone();
        acc = (mn + c, mx + c);
    }
    acc
}

/// Number of sign changes of a Sturm chain evaluated at `x`.
fn sturm_variations(chain: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| sign_of(&poly_eval(p, x)))
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), poly_derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let (_, r) = poly_divrem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_of(x: &BigRational) -> i8 {
    match x.cmp(&BigRational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

/// A rational root of an integer polynomial, if one exists.
fn rational_root(coeffs: &[BigInt]) -> Option<BigRational> {
    let p: Poly = coeffs.iter().cloned().map(BigRational::from_integer).collect();
    if coeffs[0].is_zero() {
        return Some(BigRational::zero());
    }
    let lead = coeffs.last().unwrap();
    for num in divisors(&coeffs[0]) {
        for den in divisors(lead) {
            for s in [1, -1] {
                let cand = BigRational::new(&num * s, den.clone());
                if poly_eval(&p, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// A real number field Q(λ) with λ pinned by an isolating interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    min_poly: Vec<BigInt>,
    lo: BigRational,
    hi: BigRational,
    poly: Poly,
}

impl NumberField {
    pub fn new(min_poly: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Arc<Self>> {
        let mut min_poly = min_poly;
        while min_poly.last().is_some_and(|c| c.is_zero()) {
            min_poly.pop();
        }
        if min_poly.len() < 2 {
            return Err(NumFieldError::ConstantPolynomial);
        }
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let poly: Poly = min_poly.iter().cloned().map(BigRational::from_integer).collect();
        let deg = min_poly.len() - 1;
        if deg >= 2 {
            let g = poly_gcd(&poly, &poly_derivative(&poly));
            if degree(&g).unwrap_or(0) > 0 {
                return Err(NumFieldError::MultipleRootsSuspected);
            }
            if let Some(r) = rational_root(&min_poly) {
                return Err(NumFieldError::Reducible(r.to_string()));
            }
        }
        let (slo, shi) = (sign_of(&poly_eval(&poly, &lo)), sign_of(&poly_eval(&poly, &hi)));
        if deg == 1 {
            if slo * shi > 0 {
                return Err(NumFieldError::NoRootInInterval);
            }
        } else {
            if slo * shi >= 0 {
                let chain = sturm_chain(&poly);
                let roots = sturm_variations(&chain, &lo) as i64 - sturm_variations(&chain, &hi) as i64;
                return Err(if roots > 1 {
                    NumFieldError::MultipleRootsSuspected
                } else {
                    NumFieldError::NoRootInInterval
                });
            }
            let chain = sturm_chain(&poly);
            let roots = sturm_variations(&chain, &lo) as i64 - sturm_variations(&chain, &hi) as i64;
            if roots != 1 {
                return Err(NumFieldError::MultipleRootsSuspected);
            }
        }
        Ok(Arc::new(NumberField { min_poly, lo, hi, poly }))
    }

    /// The rationals, presented as Q(λ) with λ = 0.
    pub fn rationals() -> Arc<Self> {
        Self::new(vec![BigInt::zero(), BigInt::one()], rat(-1), rat(1)).unwrap()
    }

    /// Q((1+√5)/2) with minimal polynomial x² − x − 1.
    pub fn golden() -> Arc<Self> {
        Self::new(
            vec![BigInt::from(-1), BigInt::from(-1), BigInt::one()],
            BigRational::new(3.into(), 2.into()),
            BigRational::new(7.into(), 4.into()),
        )
        .unwrap()
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    fn is_rational_field(&self) -> bool {
        self.degree() == 1
    }

    /// The root itself when the field is Q.
    fn rational_root(&self) -> BigRational {
        -&self.poly[0] / &self.poly[1]
    }

    /// Halves the isolating interval once.
    fn bisect(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mid = (lo + hi) / rat(2);
        let s_lo = sign_of(&poly_eval(&self.poly, lo));
        let s_mid = sign_of(&poly_eval(&self.poly, &mid));
        if s_mid == 0 {
            (mid.clone(), mid)
        } else if s_lo == s_mid {
            (mid, hi.clone())
        } else {
            (lo.clone(), mid)
        }
    }

    /// An isolating interval of width at most `width`.
    pub fn refine_to(&self, width: &BigRational) -> (BigRational, BigRational) {
        if self.is_rational_field() {
            let r = self.rational_root();
            return (r.clone(), r);
        }
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        while &(&hi - &lo) > width {
            (lo, hi) = self.bisect(&lo, &hi);
        }
        (lo, hi)
    }

    fn reduce(&self, mut coeffs: Poly) -> Poly {
        trim(&mut coeffs);
        if coeffs.len() > self.degree() {
            coeffs = poly_divrem(&coeffs, &self.poly).1;
        }
        coeffs
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.min_poly.iter().map(|c| c.to_string()).collect();
        write!(f, "field:{};iv:{},{}", cs.join(","), self.lo, self.hi)
    }
}

/// An element of Q(λ), stored as coefficients of 1, λ, λ², … below the field degree.
#[derive(Debug, Clone)]
pub struct NumberFieldElement {
    field: Arc<NumberField>,
    coeffs: Poly,
}

impl PartialEq for NumberFieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.field, &other.field)
    }
}

impl Eq for NumberFieldElement {}

fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || a.min_poly == b.min_poly && a.lo == b.lo && a.hi == b.hi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl NumberFieldElement {
    pub fn new(field: &Arc<NumberField>, coeffs: Vec<BigRational>) -> Self {
        let coeffs = field.reduce(coeffs);
        NumberFieldElement { field: Arc::clone(field), coeffs }
    }

    pub fn from_rational(field: &Arc<NumberField>, r: BigRational) -> Self {
        Self::new(field, vec![r])
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// λ itself.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::new(field, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value as a rational, if it has no λ terms.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn same_field(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field)
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        if !self.same_field(other) {
            return Err(NumFieldError::FieldMismatch);
        }
        let coeffs = match op {
            ArithOp::Add => {
                let neg: Poly = other.coeffs.iter().map(|c| -c).collect();
                poly_sub(&self.coeffs, &neg)
            }
            ArithOp::Sub => poly_sub(&self.coeffs, &other.coeffs),
            ArithOp::Mul => poly_mul(&self.coeffs, &other.coeffs),
            ArithOp::Div => return self.arith(&other.inverse()?, ArithOp::Mul),
        };
        Ok(Self::new(&self.field, coeffs))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against the
    /// minimal polynomial.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(NumFieldError::DivisionByZero);
        }
        // invariant: s * self ≡ r (mod min_poly)
        let (mut r0, mut r1) = (self.field.poly.clone(), self.coeffs.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while degree(&r1).unwrap_or(0) > 0 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            if r1.is_empty() {
                // common factor with the minimal polynomial: λ is a root of self
                return Err(NumFieldError::DivisionByZero);
            }
        }
        let c = r1[0].clone();
        let inv: Poly = s1.into_iter().map(|x| x / &c).collect();
        Ok(Self::new(&self.field, inv))
    }

    /// Exact sign of the element evaluated at λ.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.coeffs.len() == 1 {
            return sign_of(&self.coeffs[0]);
        }
        let field = &self.field;
        if field.is_rational_field() {
            return sign_of(&poly_eval(&self.coeffs, &field.rational_root()));
        }
        let (mut lo, mut hi) = (field.lo.clone(), field.hi.clone());
        loop {
            let (a, b) = poly_eval_interval(&self.coeffs, &lo, &hi);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            (lo, hi) = field.bisect(&lo, &hi);
            if lo == hi {
                return sign_of(&poly_eval(&self.coeffs, &lo));
            }
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        let d = self.arith(other, ArithOp::Sub)?;
        Ok(d.sign().cmp(&0))
    }

    /// Rational enclosure of the value whose width shrinks with `width`.
    pub fn approx(&self, width: &BigRational) -> (BigRational, BigRational) {
        let (lo, hi) = self.field.refine_to(width);
        poly_eval_interval(&self.coeffs, &lo, &hi)
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.approx(&BigRational::new(1.into(), BigInt::from(1u64 << 60)));
        ((lo + hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

macro_rules! impl_op {
    ($tr:ident, $m:ident, $op:expr) => {
        impl $tr for NumberFieldElement {
            type Output = NumberFieldElement;
            fn $m(self, rhs: Self) -> Self {
                self.arith(&rhs, $op).expect("field mismatch in operator")
            }
        }
        impl<'a> $tr<&'a NumberFieldElement> for &'a NumberFieldElement {
            type Output = NumberFieldElement;
            fn $m(self, rhs: Self) -> NumberFieldElement {
                self.arith(rhs, $op).expect("field mismatch in operator")
            }
        }
    };
}

impl_op!(Add, add, ArithOp::Add);
impl_op!(Sub, sub, ArithOp::Sub);
impl_op!(Mul, mul, ArithOp::Mul);

impl Neg for NumberFieldElement {
    type Output = NumberFieldElement;
    fn neg(self) -> Self {
        let coeffs = self.coeffs.into_iter().map(|c| -c).collect();
        NumberFieldElement { field: self.field, coeffs }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = if self.coeffs.is_empty() {
            vec!["0".to_string()]
        } else {
            self.coeffs.iter().map(fmt_rat).collect()
        };
        write!(
            f,
            "poly:{};{};iv:{},{}",
            cs.join(","),
            {
                let mp: Vec<String> = self.field.min_poly.iter().map(|c| c.to_string()).collect();
                format!("field:{}", mp.join(","))
            },
            fmt_rat(&self.field.lo),
            fmt_rat(&self.field.hi)
        )
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || NumFieldError::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(f).collect()
}

/// Parses the field part `field:<coeffs>;iv:<lo>,<hi>`.
pub fn parse_field(s: &str) -> Result<Arc<NumberField>> {
    let mut poly = None;
    let mut iv = None;
    for part in s.split(';') {
        let part = part.trim();
        if let Some(rest) = part.strip_prefix("field:") {
            poly = Some(parse_list(rest, |x| {
                BigInt::from_str(x.trim()).map_err(|_| NumFieldError::Parse(format!("bad integer '{x}'")))
            })?);
        } else if let Some(rest) = part.strip_prefix("iv:") {
            let v = parse_list(rest, parse_rational)?;
            if v.len() != 2 {
                return Err(NumFieldError::Parse("interval needs two endpoints".into()));
            }
            iv = Some((v[0].clone(), v[1].clone()));
        }
    }
    let poly = poly.ok_or_else(|| NumFieldError::Parse("missing field:".into()))?;
    let (lo, hi) = iv.ok_or_else(|| NumFieldError::Parse("missing iv:".into()))?;
    NumberField::new(poly, lo, hi)
}

/// Parses `poly:<c0>,<c1>,...;field:<min_poly>;iv:<lo>,<hi>`.
///
/// `cache` lets many elements share one field handle.
pub fn parse_element(s: &str, cache: &mut Option<Arc<NumberField>>) -> Result<NumberFieldElement> {
    let s = s.trim();
    let rest = s
        .strip_prefix("poly:")
        .ok_or_else(|| NumFieldError::Parse(format!("element must start with poly: in '{s}'")))?;
    let (coeffs, field_part) = rest
        .split_once(';')
        .ok_or_else(|| NumFieldError::Parse("element missing field part".into()))?;
    let coeffs = parse_list(coeffs, parse_rational)?;
    let parsed = parse_field(field_part)?;
    let field = match cache {
        Some(f) if same_field(f, &parsed) => Arc::clone(f),
        Some(_) => return Err(NumFieldError::FieldMismatch),
        None => {
            *cache = Some(Arc::clone(&parsed));
            parsed
        }
    };
    Ok(NumberFieldElement::new(&field, coeffs))
}

impl FromStr for NumberFieldElement {
    type Err = NumFieldError;
    fn from_str(s: &str) -> Result<Self> {
        parse_element(s, &mut None)
    }
}

/// gcd of two integers, used by callers that normalize integer weights.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn golden_field_echoes_defining_data() {
        let f = NumberField::golden();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.interval(), (&r(3, 2), &r(7, 4)));
    }

    #[test]
    fn linear_field_is_rationals() {
        let f = NumberField::new(vec![BigInt::from(-2), BigInt::one()], rat(1), rat(3)).unwrap();
        assert_eq!(f.degree(), 1);
        let l = NumberFieldElement::generator(&f);
        assert_eq!(l.as_rational(), Some(rat(2)));
    }

    #[test]
    fn reducible_input_rejected() {
        let e = NumberField::new(vec![BigInt::from(-1), BigInt::zero(), BigInt::one()], rat(0), rat(2));
        assert!(matches!(
            e,
            Err(NumFieldError::Reducible(_)) | Err(NumFieldError::MultipleRootsSuspected)
        ));
        let e = NumberField::new(vec![BigInt::from(1), BigInt::from(-2), BigInt::one()], rat(0), rat(2));
        assert_eq!(e, Err(NumFieldError::MultipleRootsSuspected));
    }

    #[test]
    fn interval_without_root() {
        let e = NumberField::new(vec![BigInt::from(-1), BigInt::from(-1), BigInt::one()], rat(2), rat(3));
        assert_eq!(e, Err(NumFieldError::NoRootInInterval));
        // both roots of x^2 - 2 inside [-2, 2]: no sign change, Sturm count 2
        let e = NumberField::new(vec![BigInt::from(-2), BigInt::zero(), BigInt::one()], rat(-2), rat(2));
        assert_eq!(e, Err(NumFieldError::MultipleRootsSuspected));
    }

    #[test]
    fn golden_arithmetic() {
        let f = NumberField::golden();
        let l = NumberFieldElement::generator(&f);
        let one = NumberFieldElement::one(&f);
        assert_eq!(&l * &l, &l + &one);
        assert_eq!(&(&l + &one) - &l, one);
        assert_eq!(l.inverse().unwrap(), &l - &one);
        assert_eq!(&l * &l.inverse().unwrap(), one);
    }

    #[test]
    fn golden_signs() {
        let f = NumberField::golden();
        let l = NumberFieldElement::generator(&f);
        let one = NumberFieldElement::one(&f);
        let rel = &(&(&l * &l) - &l) - &one;
        assert_eq!(rel.sign(), 0);
        let two_l_minus_3 = &(&l + &l) - &NumberFieldElement::from_int(&f, 3);
        assert_eq!(two_l_minus_3.sign(), 1);
        assert_eq!((-l).sign(), -1);
    }

    #[test]
    fn mismatch_and_zero_division() {
        let g = NumberField::golden();
        let q = NumberField::rationals();
        let a = NumberFieldElement::one(&g);
        let b = NumberFieldElement::one(&q);
        assert_eq!(a.arith(&b, ArithOp::Add), Err(NumFieldError::FieldMismatch));
        let z = NumberFieldElement::zero(&g);
        assert_eq!(a.arith(&z, ArithOp::Div), Err(NumFieldError::DivisionByZero));
    }

    #[test]
    fn text_form_round_trip() {
        let f = NumberField::golden();
        let e = NumberFieldElement::new(&f, vec![r(-1, 3), r(5, 2)]);
        let s = e.to_string();
        assert_eq!(s, "poly:-1/3,5/2;field:-1,-1,1;iv:3/2,7/4");
        assert_eq!(s.parse::<NumberFieldElement>().unwrap(), e);
    }

    #[test]
    fn reduction_is_idempotent() {
        let f = NumberField::golden();
        let e = NumberFieldElement::new(&f, vec![rat(1), rat(2), rat(3), rat(4)]);
        let again = NumberFieldElement::new(&f, e.coeffs().to_vec());
        assert_eq!(e, again);
        assert!(e.coeffs().len() < 2 + 1);
    }
}
