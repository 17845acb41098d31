//! Two-mode scalar field: exact Gaussian rationals `Q(i)` and approximate
//! complex doubles, plus the deterministic polynomial root solver used for
//! the catalog's auxiliary constants.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("cannot parse scalar {text:?}: unexpected token {token:?}")]
    Parse { text: String, token: String },
    #[error("polynomial domain error: {0}")]
    Domain(String),
}

/// Comparison tolerance for approximate values. Exact comparisons ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub epsilon: f64,
}

impl Tolerance {
    pub const DEFAULT_EPSILON: f64 = 1e-9;

    pub fn new(epsilon: f64) -> Self {
        assert!(epsilon >= 0.0, "tolerance must be nonnegative");
        Tolerance { epsilon }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            epsilon: Self::DEFAULT_EPSILON,
        }
    }
}

/// A complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -&self.im / &n))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    fn add(&self, o: &Self) -> Self {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn sub(&self, o: &Self) -> Self {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul(&self, o: &Self) -> Self {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fallback for values whose numerator or denominator overflows f64.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Scalar value in one of two modes. Mixing modes promotes to `Approx`.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(GaussianRational),
    Approx(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(GaussianRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::Exact(GaussianRational::new(BigRational::zero(), BigRational::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(GaussianRational::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        ))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(GaussianRational::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        ))
    }

    pub fn exact(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact(GaussianRational::new(re, im))
    }

    /// Exact complex `(re_num/re_den) + (im_num/im_den) i`.
    pub fn gaussian(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Scalar::exact(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn approx(re: f64, im: f64) -> Self {
        Scalar::Approx(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Self {
        Scalar::Approx(z)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussianRational> {
        match self {
            Scalar::Exact(g) => Some(g),
            Scalar::Approx(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(g) => g.to_complex(),
            Scalar::Approx(z) => *z,
        }
    }

    pub fn to_approx(&self) -> Scalar {
        Scalar::Approx(self.to_complex())
    }

    /// Exact zero test in exact mode; `max(|re|,|im|) <= eps` in approx mode.
    pub fn is_zero_within(&self, tol: Tolerance) -> bool {
        match self {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Approx(z) => z.re.abs().max(z.im.abs()) <= tol.epsilon,
        }
    }

    /// Structural zero: exact zero, or an approximate value equal to 0.0.
    pub fn is_zero(&self) -> bool {
        self.is_zero_within(Tolerance::new(0.0))
    }

    pub fn approx_eq(&self, other: &Scalar, tol: Tolerance) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let d = self.to_complex() - other.to_complex();
                d.re.abs().max(d.im.abs()) <= tol.epsilon
            }
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(g.conj()),
            Scalar::Approx(z) => Scalar::Approx(z.conj()),
        }
    }

    /// Multiplicative inverse; `None` for exact zero or approximate 0.0.
    pub fn recip(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(g) => g.recip().map(Scalar::Exact),
            Scalar::Approx(z) => {
                if z.re == 0.0 && z.im == 0.0 {
                    None
                } else {
                    Some(Scalar::Approx(z.inv()))
                }
            }
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.recip().map(|r| self * &r)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Principal square root. Exact when the input is exact and its root is
    /// a Gaussian rational; approximate otherwise.
    pub fn sqrt_principal(&self) -> Scalar {
        let z = self.to_complex().sqrt();
        self.recover_with(z, |c| &(c * c) == self)
    }

    /// Principal branch of `self^p` for a real exponent `p`.
    pub fn powf_principal(&self, p: f64) -> Scalar {
        Scalar::Approx(self.to_complex().powf(p))
    }

    fn recover_with(&self, z: Complex64, verify: impl Fn(&Scalar) -> bool) -> Scalar {
        if self.is_exact() {
            if let Some(c) = rationalize_complex(z, 1 << 20) {
                if verify(&c) {
                    return c;
                }
            }
        }
        Scalar::Approx(z)
    }

    /// Real-part/imaginary-part key rounded to 12 decimals; used for
    /// reproducible ordering of approximate roots.
    pub fn ordering_key(&self) -> (i64, i64) {
        let z = self.to_complex();
        let r = |v: f64| {
            let k = (v * 1e12).round();
            if k == 0.0 {
                0
            } else {
                k as i64
            }
        };
        (r(z.re), r(z.im))
    }
}

/// Best rational approximation with denominator at most `max_den`, via
/// continued fractions.
pub fn rationalize(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let ai = a as u128;
        let p2 = ai.checked_mul(p1)?.checked_add(p0)?;
        let q2 = ai.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = BigRational::new(BigInt::from(p1), BigInt::from(q1));
    Some(if neg { -r } else { r })
}

fn rationalize_complex(z: Complex64, max_den: u64) -> Option<Scalar> {
    Some(Scalar::exact(
        rationalize(z.re, max_den)?,
        rationalize(z.im, max_den)?,
    ))
}

fn promote(a: &Scalar, b: &Scalar, exact: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational, approx: impl Fn(Complex64, Complex64) -> Complex64) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        _ => Scalar::Approx(approx(a.to_complex(), b.to_complex())),
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        promote(self, rhs, GaussianRational::add, |x, y| x + y)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        promote(self, rhs, GaussianRational::sub, |x, y| x - y)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        promote(self, rhs, GaussianRational::mul, |x, y| x * y)
    }
}

/// Panics on division by exact zero; use [`Scalar::checked_div`] otherwise.
impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(_), Scalar::Exact(y)) => {
                let inv = y.recip().expect("exact division by zero");
                self * &Scalar::Exact(inv)
            }
            _ => Scalar::Approx(self.to_complex() / rhs.to_complex()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(GaussianRational::new(-&g.re, -&g.im)),
            Scalar::Approx(z) => Scalar::Approx(-z),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Approx(z)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_decimal(v: f64) -> String {
    let a = v.abs();
    let s = if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{:e}", v)
    } else {
        format!("{}", v)
    };
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => {
                let im_zero = g.im.is_zero();
                if !g.re.is_zero() || im_zero {
                    write!(f, "{}", fmt_rational(&g.re))?;
                }
                if !im_zero {
                    let mag = g.im.abs();
                    let sign = if g.im.is_negative() {
                        "-"
                    } else if g.re.is_zero() {
                        ""
                    } else {
                        "+"
                    };
                    if mag.is_one() {
                        write!(f, "{sign}i")
                    } else {
                        write!(f, "{sign}{}i", fmt_rational(&mag))
                    }
                } else {
                    Ok(())
                }
            }
            Scalar::Approx(z) => {
                if z.im == 0.0 && !z.im.is_sign_negative() {
                    return write!(f, "{}", fmt_decimal(z.re));
                }
                if z.re == 0.0 && !z.re.is_sign_negative() {
                    return write!(f, "{}i", fmt_decimal(z.im));
                }
                let im = fmt_decimal(z.im);
                if im.starts_with('-') {
                    write!(f, "{}{}i", fmt_decimal(z.re), im)
                } else {
                    write!(f, "{}+{}i", fmt_decimal(z.re), im)
                }
            }
        }
    }
}

enum Number {
    Rational(BigRational),
    Decimal(f64),
}

fn parse_number(tok: &str) -> Option<Number> {
    if tok.is_empty() {
        return None;
    }
    let decimal = tok.contains('.') || tok.contains('e') || tok.contains('E');
    if decimal {
        if tok.contains('/') {
            return None;
        }
        let ok = tok
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
        if !ok {
            return None;
        }
        return tok.parse::<f64>().ok().map(Number::Decimal);
    }
    let mut parts = tok.splitn(2, '/');
    let num = parts.next()?;
    let den = parts.next();
    if num.is_empty() || !num.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n = BigInt::from_str(num).ok()?;
    let d = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            BigInt::from_str(d).ok()?
        }
    };
    if d.is_zero() {
        return None;
    }
    Some(Number::Rational(BigRational::new(n, d)))
}

fn split_terms(s: &str) -> Vec<String> {
    let chars: Vec<char> = s.chars().collect();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (idx, &c) in chars.iter().enumerate() {
        // a sign right after an exponent marker belongs to the number
        let is_sep = (c == '+' || c == '-')
            && idx > 0
            && !matches!(chars[idx - 1], 'e' | 'E')
            && !cur.is_empty();
        if is_sep {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    terms
}

/// Parses `rational [± rational i]`, a pure imaginary term, or decimal
/// literals (which force approximate mode).
pub fn scalar_parse(text: &str) -> Result<Scalar, ScalarError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |token: &str| ScalarError::Parse {
        text: text.to_string(),
        token: token.to_string(),
    };
    if compact.is_empty() {
        return Err(err(""));
    }
    let terms = split_terms(&compact);
    if terms.len() > 2 {
        return Err(err(&terms[2]));
    }
    let mut re: Option<Number> = None;
    let mut im: Option<Number> = None;
    for term in &terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        let (imag, body) = match body.strip_suffix('i') {
            Some(b) => (true, b.strip_suffix('*').unwrap_or(b)),
            None => (false, body),
        };
        let num = if imag && body.is_empty() {
            Number::Rational(BigRational::one())
        } else {
            parse_number(body).ok_or_else(|| err(term))?
        };
        let num = match (num, neg) {
            (Number::Rational(r), true) => Number::Rational(-r),
            (Number::Decimal(d), true) => Number::Decimal(-d),
            (n, false) => n,
        };
        let slot = if imag { &mut im } else { &mut re };
        if slot.is_some() {
            return Err(err(term));
        }
        *slot = Some(num);
    }
    let approx = matches!(re, Some(Number::Decimal(_))) || matches!(im, Some(Number::Decimal(_)));
    if approx {
        let f = |n: Option<Number>| match n {
            None => 0.0,
            Some(Number::Decimal(d)) => d,
            Some(Number::Rational(r)) => rat_to_f64(&r),
        };
        Ok(Scalar::approx(f(re), f(im)))
    } else {
        let f = |n: Option<Number>| match n {
            Some(Number::Rational(r)) => r,
            _ => BigRational::zero(),
        };
        Ok(Scalar::exact(f(re), f(im)))
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        scalar_parse(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        scalar_parse(&s).map_err(serde::de::Error::custom)
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Evaluates a polynomial given by coefficients in descending degree order.
pub fn poly_eval(coeffs: &[Scalar], z: &Scalar) -> Scalar {
    coeffs.iter().fold(Scalar::zero(), |acc, c| &(&acc * z) + c)
}

/// All complex roots (with multiplicity) of a polynomial of degree 1..=4.
///
/// `coeffs` are in descending degree order, leading coefficient first. Roots
/// are returned in approximate mode, sorted by [`Scalar::ordering_key`].
pub fn poly_roots(coeffs: &[Scalar]) -> Result<Vec<Scalar>, ScalarError> {
    if coeffs.len() < 2 || coeffs.len() > 5 {
        return Err(ScalarError::Domain(format!(
            "degree must be between 1 and 4, got {}",
            coeffs.len() as i64 - 1
        )));
    }
    if coeffs[0].is_zero() {
        return Err(ScalarError::Domain("leading coefficient is zero".into()));
    }
    let lead = coeffs[0].to_complex();
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c.to_complex() / lead).collect();
    let degree = monic.len() - 1;
    let mut roots = match degree {
        1 => vec![-monic[1]],
        2 => quadratic(monic[1], monic[2]),
        _ => aberth(&monic),
    };
    for r in roots.iter_mut() {
        *r = polish(&monic, *r);
    }
    let mut out: Vec<Scalar> = roots.into_iter().map(Scalar::Approx).collect();
    out.sort_by_key(|a| a.ordering_key());
    Ok(out)
}

/// Roots of `z^2 + b z + c` by the cancellation-free quadratic formula.
fn quadratic(b: Complex64, c: Complex64) -> Vec<Complex64> {
    let disc = (b * b - 4.0 * c).sqrt();
    let q1 = -b + disc;
    let q2 = -b - disc;
    let q = if q1.norm() >= q2.norm() { q1 } else { q2 } * 0.5;
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q, c / q]
}

fn aberth(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let center = -monic[1] / n as f64;
    let radius = (1..=n)
        .map(|k| monic[k].norm().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 1.5;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..800 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let step = if denom.norm() == 0.0 || !ratio.is_finite() {
                Complex64::new(1e-8, 1e-8)
            } else {
                ratio / denom
            };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-16 {
            break;
        }
    }
    z
}

/// A few guarded Newton steps: only accepted if |p| decreases.
fn polish(monic: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..4 {
        let (p, dp) = horner(monic, z);
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let cand = z - p / dp;
        if horner(monic, cand).0.norm() < p.norm() {
            z = cand;
        } else {
            break;
        }
    }
    z
}

/// Attempts to recognise an approximate root of an exact polynomial as an
/// exact Gaussian rational, verified by exact evaluation.
pub fn exact_root_candidate(coeffs: &[Scalar], root: &Scalar) -> Option<Scalar> {
    if !coeffs.iter().all(Scalar::is_exact) {
        return None;
    }
    let cand = rationalize_complex(root.to_complex(), 1 << 16)?;
    poly_eval(coeffs, &cand).is_zero().then_some(cand)
}

impl PartialOrd for Scalar {
    /// Orders by the rounded (re, im) key; not a field ordering.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.ordering_key().cmp(&other.ordering_key()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        scalar_parse(t).unwrap()
    }

    #[test]
    fn parse_literals() {
        assert_eq!(s("1/2"), Scalar::ratio(1, 2));
        assert_eq!(s("-3+2i"), Scalar::gaussian(-3, 1, 2, 1));
        assert_eq!(s("0.5"), Scalar::approx(0.5, 0.0));
        assert_eq!(s("2/4"), Scalar::ratio(1, 2));
        assert_eq!(s("i"), Scalar::i());
        assert_eq!(s("-i"), -Scalar::i());
        assert_eq!(s("1/2-3/4i"), Scalar::gaussian(1, 2, -3, 4));
        assert_eq!(s("1.5e-3-2e+1i"), Scalar::approx(1.5e-3, -20.0));
        assert_eq!(s(" 3 + i "), Scalar::gaussian(3, 1, 1, 1));
    }

    #[test]
    fn parse_errors_name_token() {
        match scalar_parse("1/0") {
            Err(ScalarError::Parse { token, .. }) => assert_eq!(token, "1/0"),
            other => panic!("{other:?}"),
        }
        match scalar_parse("1+2i+3") {
            Err(ScalarError::Parse { token, .. }) => assert_eq!(token, "+3"),
            other => panic!("{other:?}"),
        }
        assert!(scalar_parse("abc").is_err());
        assert!(scalar_parse("").is_err());
        assert!(scalar_parse("2i+3i").is_err());
        assert!(scalar_parse("1/2.5").is_err());
    }

    #[test]
    fn display_round_trips() {
        for t in ["0", "1/2", "-3+2i", "i", "-i", "1/2i", "-7/3-5/2i", "0.5", "1.5i", "0.25-1e-7i"] {
            let v = s(t);
            assert_eq!(s(&v.to_string()), v, "{t} -> {v}");
        }
        assert_eq!(Scalar::approx(1.0, 0.0).to_string(), "1.0");
    }

    #[test]
    fn mixing_promotes_to_approx() {
        let e = Scalar::ratio(1, 2);
        let a = Scalar::approx(0.25, 0.0);
        assert!(!(&e + &a).is_exact());
        assert!(!(&a * &e).is_exact());
        assert!((&e * &e).is_exact());
    }

    #[test]
    fn exact_to_approx_is_accurate() {
        let v = Scalar::gaussian(355, 113, -1, 7);
        let z = v.to_complex();
        assert!((z.re - 355.0 / 113.0).abs() <= 1e-15 * z.re.abs());
        assert!((z.im + 1.0 / 7.0).abs() <= 1e-15 / 7.0);
    }

    #[test]
    fn tolerance_only_applies_to_approx() {
        let tol = Tolerance::new(1e-3);
        assert!(!Scalar::ratio(1, 1_000_000).is_zero_within(tol));
        assert!(Scalar::approx(1e-6, 0.0).is_zero_within(tol));
        assert!(Scalar::approx(0.5, 0.0).approx_eq(&Scalar::ratio(1, 2), Tolerance::default()));
    }

    #[test]
    fn roots_of_z2_minus_1() {
        let r = poly_roots(&[Scalar::one(), Scalar::zero(), Scalar::from_int(-1)]).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].approx_eq(&Scalar::from_int(-1), Tolerance::default()));
        assert!(r[1].approx_eq(&Scalar::one(), Tolerance::default()));
    }

    #[test]
    fn roots_of_g2_constraint_cubic() {
        let c = [Scalar::one(), Scalar::from_int(-1), Scalar::zero(), Scalar::from_int(-1)];
        let r = poly_roots(&c).unwrap();
        assert_eq!(r.len(), 3);
        for root in &r {
            let z = root.to_complex();
            assert!((z * z * z - z * z - 1.0).norm() <= 1e-9);
        }
    }

    #[test]
    fn fourth_roots_of_minus_three() {
        let c = [
            Scalar::one(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::from_int(3),
        ];
        let r = poly_roots(&c).unwrap();
        assert_eq!(r.len(), 4);
        for root in &r {
            let z = root.to_complex();
            assert!((z.powi(4) + 3.0).norm() <= 1e-9);
        }
        let principal = Scalar::from_int(-3).powf_principal(0.25).to_complex();
        assert!((principal.arg() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!((principal.powi(4) + 3.0).norm() <= 1e-9);
    }

    #[test]
    fn root_domain_errors() {
        assert!(matches!(poly_roots(&[Scalar::one()]), Err(ScalarError::Domain(_))));
        assert!(matches!(
            poly_roots(&[Scalar::zero(), Scalar::one()]),
            Err(ScalarError::Domain(_))
        ));
        assert!(poly_roots(&vec![Scalar::one(); 6]).is_err());
    }

    #[test]
    fn multiple_roots_are_recovered_exactly() {
        // b^3 - b^2 = b^2 (b - 1)
        let c = [Scalar::one(), Scalar::from_int(-1), Scalar::zero(), Scalar::zero()];
        let roots = poly_roots(&c).unwrap();
        let exact: Vec<Scalar> = roots
            .iter()
            .map(|r| exact_root_candidate(&c, r).expect("rational root"))
            .collect();
        assert_eq!(exact.iter().filter(|r| r.is_zero()).count(), 2);
        assert!(exact.contains(&Scalar::one()));
    }

    #[test]
    fn sqrt_principal_recovers_exact_squares() {
        assert_eq!(Scalar::from_int(9).sqrt_principal(), Scalar::from_int(3));
        assert_eq!(Scalar::from_int(-4).sqrt_principal(), Scalar::gaussian(0, 1, 2, 1));
        assert!(!Scalar::from_int(-3).sqrt_principal().is_exact());
    }

    #[test]
    fn rationalize_simple_fractions() {
        assert_eq!(rationalize(0.75, 100), Some(BigRational::new(3.into(), 4.into())));
        assert_eq!(rationalize(-1.0 / 3.0, 100), Some(BigRational::new((-1).into(), 3.into())));
        assert_eq!(rationalize(f64::NAN, 100), None);
    }
}
