//! Exact coefficients: Laurent polynomials over the rationals in a formal
//! root `s`, with `q = s^N` for the matrix size `N` in use.
//!
//! Working with a transcendental `q` means no root-of-unity degeneracies can
//! occur, and carrying the root `s` lets the special linear r-form use
//! `q^{-1/N} = s^{-1}` without leaving exact arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub mod coeff;
pub mod linalg;

pub use coeff::Coeff;

pub use linalg::{fraction_solve, kernel_basis, FractionSolution};

/// Symbol used when rendering coefficients: `q` itself, with fractional
/// exponents where needed, or its `N`-th root `s`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Notation {
    #[default]
    Q,
    S,
}

/// Laurent polynomial in `s` with rational coefficients.
///
/// Terms are kept sorted by strictly increasing exponent with no zero
/// coefficients; the zero scalar is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QScalar {
    terms: Vec<(i32, Coeff)>,
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, Coeff::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::monomial(0, Coeff::from(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::monomial(0, Coeff::from(c))
    }

    /// `c * s^e`.
    pub fn monomial(e: i32, c: impl Into<Coeff>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            QScalar { terms: vec![(e, c)] }
        }
    }

    /// `s^e`.
    pub fn s_pow(e: i32) -> Self {
        Self::monomial(e, Coeff::one())
    }

    /// `q^k = s^{nk}` for matrix size `n`.
    pub fn q_pow(n: usize, k: i32) -> Self {
        Self::s_pow(n as i32 * k)
    }

    /// `q - q^{-1}` for matrix size `n`.
    pub fn q_minus_qinv(n: usize) -> Self {
        Self::q_pow(n, 1) - Self::q_pow(n, -1)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging
    /// duplicates.
    pub fn from_terms<C: Into<Coeff>, I: IntoIterator<Item = (i32, C)>>(it: I) -> Self {
        let mut v: Vec<(i32, Coeff)> = it.into_iter().map(|(e, c)| (e, c.into())).collect();
        v.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i32, Coeff)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        QScalar { terms: out }
    }

    pub fn terms(&self) -> &[(i32, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Units of the Laurent ring are exactly the nonzero single terms.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Width of the exponent range, the Laurent analogue of degree.
    pub fn span(&self) -> usize {
        match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => (b - a) as usize,
            _ => 0,
        }
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QScalar { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Multiplies by `s^k`.
    pub fn shift(&self, k: i32) -> Self {
        QScalar { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.is_unit() {
            let (e, c) = &self.terms[0];
            Some(Self::monomial(-e, c.recip()))
        } else {
            None
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power, negative exponents allowed for units only.
    pub fn powi(&self, k: i64) -> Option<Self> {
        if k >= 0 {
            Some(self.pow(k as u32))
        } else {
            self.unit_inverse().map(|u| u.pow((-k) as u32))
        }
    }

    /// Substitutes `s -> s^{-1}`.
    pub fn bar(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (-e, c.clone())))
    }

    /// Exact quotient in the Laurent ring.
    pub fn divide_exact(&self, b: &QScalar) -> Result<QScalar> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (q, r) = self.div_rem_poly(b);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    /// Polynomial division after normalising both operands to start at
    /// exponent zero. The quotient carries the exponent offset.
    fn div_rem_poly(&self, b: &QScalar) -> (QScalar, QScalar) {
        let a_off = self.min_exp().unwrap_or(0);
        let b_off = b.min_exp().unwrap();
        let a = self.shift(-a_off);
        let bn = b.shift(-b_off);
        let (q, r) = poly_div_rem(&a, &bn);
        (q.shift(a_off - b_off), r.shift(a_off))
    }

    /// Monic gcd of the polynomial parts; units are discarded.
    pub fn gcd(&self, other: &QScalar) -> QScalar {
        if self.is_zero() {
            return other.normalize_unit();
        }
        if other.is_zero() {
            return self.normalize_unit();
        }
        if self.is_unit() || other.is_unit() {
            return Self::one();
        }
        let mut a = self.shift(-self.min_exp().unwrap());
        let mut b = other.shift(-other.min_exp().unwrap());
        if a.span() < b.span() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r) = poly_div_rem(&a, &b);
            a = b;
            b = if r.is_zero() {
                r
            } else {
                let off = r.min_exp().unwrap();
                r.shift(-off).make_monic()
            };
        }
        a.make_monic()
    }

    /// Divides out the unit part so that the lowest exponent is zero and
    /// the leading coefficient is one.
    pub fn normalize_unit(&self) -> QScalar {
        if self.is_zero() {
            return Self::zero();
        }
        self.shift(-self.min_exp().unwrap()).make_monic()
    }

    /// The unit `u` with `self = u * self.normalize_unit()`.
    pub fn unit_part(&self) -> QScalar {
        match (self.min_exp(), self.leading_coeff()) {
            (Some(e), Some(c)) => Self::monomial(e, c.clone()),
            _ => Self::one(),
        }
    }

    fn make_monic(&self) -> QScalar {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Total order used for deterministic output.
    pub fn cmp_repr(&self, other: &QScalar) -> Ordering {
        self.terms.iter().map(|(e, c)| (*e, c)).cmp(other.terms.iter().map(|(e, c)| (*e, c)))
    }

    pub fn render_in(&self, n: usize, notation: Notation) -> String {
        match notation {
            Notation::Q => self.display_q(n),
            Notation::S => self.to_string(),
        }
    }

    /// Renders with `q` as the symbol; exponents that are not multiples of
    /// `n` are shown as fractional powers.
    pub fn display_q(&self, n: usize) -> String {
        self.render(|e| {
            let n = n as i32;
            if e % n == 0 {
                let k = e / n;
                match k {
                    0 => String::new(),
                    1 => "q".to_string(),
                    _ => format!("q^{}", k),
                }
            } else {
                let g = num_integer::gcd(e.abs(), n);
                format!("q^({}/{})", e / g, n / g)
            }
        })
    }

    fn render(&self, sym: impl Fn(i32) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let s = sym(*e);
            if s.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&s);
            } else {
                out.push_str(&format!("{}*{}", mag, s));
            }
        }
        out
    }
}

fn poly_div_rem(a: &QScalar, b: &QScalar) -> (QScalar, QScalar) {
    // both operands have min exponent >= 0; plain polynomial long division
    let bdeg = b.max_exp().unwrap();
    let blc = b.leading_coeff().unwrap().clone();
    let mut rem = a.clone();
    let mut quot: Vec<(i32, Coeff)> = Vec::new();
    while let Some(rdeg) = rem.max_exp() {
        if rdeg < bdeg {
            break;
        }
        let c = rem.leading_coeff().unwrap() / &blc;
        let e = rdeg - bdeg;
        rem = &rem - &b.shift(e).scale(&c);
        quot.push((e, c));
    }
    (QScalar::from_terms(quot), rem)
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.render(|e| match e {
            0 => String::new(),
            1 => "s".to_string(),
            _ => format!("s^{}", e),
        });
        f.write_str(&s)
    }
}

fn merge_add(a: &[(i32, Coeff)], b: &[(i32, Coeff)], negate_b: bool) -> QScalar {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match take {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let (e, c) = &b[j];
                out.push((*e, if negate_b { -c } else { c.clone() }));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    QScalar { terms: out }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        merge_add(&self.terms, &rhs.terms, false)
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        merge_add(&self.terms, &rhs.terms, true)
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        if self.is_zero() || rhs.is_zero() {
            return QScalar::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return QScalar { terms: rhs.terms.iter().map(|(f, d)| (e + f, c * d)).collect() };
        }
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            return QScalar { terms: self.terms.iter().map(|(f, d)| (e + f, d * c)).collect() };
        }
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.terms.last().unwrap().0 + rhs.terms.last().unwrap().0;
        let mut dense: Vec<Coeff> = vec![Coeff::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                dense[(e + f - lo) as usize] += &(c * d);
            }
        }
        QScalar {
            terms: dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (lo + k as i32, c))
                .collect(),
        }
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: &QScalar) -> QScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        // single-term fast path keeps the hot accumulation loops cheap
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            match self.terms.binary_search_by_key(e, |t| t.0) {
                Ok(i) => {
                    self.terms[i].1 += c;
                    if self.terms[i].1.is_zero() {
                        self.terms.remove(i);
                    }
                }
                Err(i) => self.terms.insert(i, (*e, c.clone())),
            }
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        *self += &(-rhs);
    }
}

impl From<i64> for QScalar {
    fn from(c: i64) -> Self {
        QScalar::from_int(c)
    }
}

/// Element of the fraction field of the Laurent ring.
///
/// Canonical form: numerator and denominator coprime, denominator with
/// lowest exponent zero and leading coefficient one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QFraction {
    num: QScalar,
    den: QScalar,
}

impl QFraction {
    pub fn new(num: QScalar, den: QScalar) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_scalar(num: QScalar) -> Self {
        QFraction { num, den: QScalar::one() }
    }

    pub fn zero() -> Self {
        Self::from_scalar(QScalar::zero())
    }

    pub fn one() -> Self {
        Self::from_scalar(QScalar::one())
    }

    fn reduce(num: QScalar, den: QScalar) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) =
            if g.is_one() { (num, den) } else { (num.divide_exact(&g).unwrap(), den.divide_exact(&g).unwrap()) };
        let u = den.unit_part();
        let uinv = u.unit_inverse().unwrap();
        QFraction { num: &num * &uinv, den: &den * &uinv }
    }

    pub fn numer(&self) -> &QScalar {
        &self.num
    }

    pub fn denom(&self) -> &QScalar {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &QFraction) -> QFraction {
        if self.den == o.den {
            return Self::reduce(&self.num + &o.num, self.den.clone());
        }
        Self::reduce(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &QFraction) -> QFraction {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> QFraction {
        QFraction { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &QFraction) -> QFraction {
        Self::reduce(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn inv(&self) -> Result<QFraction> {
        QFraction::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &QFraction) -> Result<QFraction> {
        Ok(self.mul(&o.inv()?))
    }
}

impl fmt::Debug for QFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Parses the coefficient notation `"a"` or `"a/b"`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse { pos: 0, msg: format!("bad rational {:?}", text) };
    let t = text.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: i32) -> QScalar {
        QScalar::q_pow(2, k)
    }

    #[test]
    fn inverse_pair_and_cancellation() {
        assert!((&q(1) * &q(-1)).is_one());
        let a = &q(1) - &q(-1);
        assert_eq!(&a + &q(-1), q(1));
    }

    #[test]
    fn schoolbook_product() {
        let a = &QScalar::one() + &q(1);
        let b = &QScalar::one() - &q(1);
        assert_eq!(&a * &b, &QScalar::one() - &q(2));
    }

    #[test]
    fn exact_division() {
        let num = &q(2) - &QScalar::one();
        let den = &q(1) - &QScalar::one();
        assert_eq!(num.divide_exact(&den).unwrap(), &q(1) + &QScalar::one());
        assert!(q(1).divide_exact(&q(1)).unwrap().is_one());
        let bad = (&q(1) + &QScalar::one()).divide_exact(&den);
        assert!(matches!(bad, Err(Error::NotDivisible)));
        assert!(matches!(q(1).divide_exact(&QScalar::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn gcd_ignores_units() {
        let a = &(&q(2) - &QScalar::one()) * &q(3);
        let b = (&q(1) - &QScalar::one()).scale(&Coeff::from(5));
        assert_eq!(a.gcd(&b), &QScalar::s_pow(2) - &QScalar::one());
    }

    #[test]
    fn fraction_canonical_form() {
        let a = QFraction::new(&q(2) - &QScalar::one(), (&q(1) - &QScalar::one()).shift(3)).unwrap();
        let b = QFraction::new((&q(1) + &QScalar::one()).shift(-3), QScalar::one()).unwrap();
        assert_eq!(a, b);
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn display() {
        let a = &q(1) - &q(-1);
        assert_eq!(a.display_q(2), "q - q^-1");
        assert_eq!(QScalar::s_pow(-1).display_q(2), "q^(-1/2)");
    }
}
