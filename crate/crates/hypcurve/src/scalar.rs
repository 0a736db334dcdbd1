//! Scalars: exact rationals and arbitrary-precision floats under one roof.
//!
//! Every value is either `Exact` (a reduced `BigRational`) or `Float` (an
//! astro-float `BigFloat` carrying its own precision in bits). Binary
//! operations promote exact operands to floats when mixed and compute at the
//! maximum of the operand precisions. Exact zero/one act as mode-neutral
//! identities, which lets generic code build sums without committing to a
//! mode up front.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default float precision in bits.
pub const DEFAULT_PRECISION: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Scalar mode tag: exact rational or float at a given precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float(usize),
}

impl Mode {
    pub fn is_exact(self) -> bool {
        matches!(self, Mode::Exact)
    }

    pub fn precision(self) -> usize {
        match self {
            Mode::Exact => DEFAULT_PRECISION,
            Mode::Float(p) => p.max(64),
        }
    }

    /// Combined mode of two operands: float wins, precisions max out.
    pub fn join(self, other: Mode) -> Mode {
        match (self, other) {
            (Mode::Exact, Mode::Exact) => Mode::Exact,
            (Mode::Float(p), Mode::Exact) | (Mode::Exact, Mode::Float(p)) => Mode::Float(p),
            (Mode::Float(p), Mode::Float(q)) => Mode::Float(p.max(q)),
        }
    }
}

/// A real scalar: exact rational or big float.
#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(BigRational),
    Float(BigFloat),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    /// Float scalar from an `f64` at the given precision.
    pub fn float_from_f64(v: f64, prec: usize) -> Self {
        Scalar::Float(BigFloat::from_f64(v, prec.max(64)))
    }

    /// Parse a decimal string into a float scalar at the given precision.
    pub fn float_from_str(s: &str, prec: usize) -> Result<Self, String> {
        let p = prec.max(64);
        let bf = CONSTS.with(|c| BigFloat::parse(s, Radix::Dec, p, RM, &mut c.borrow_mut()));
        if bf.is_nan() {
            return Err(format!("invalid decimal literal: {s}"));
        }
        Ok(Scalar::Float(bf))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            // astro-float reports precision 0 for zero values; floor at 64 bits
            Scalar::Float(f) => Mode::Float(f.precision().unwrap_or(DEFAULT_PRECISION).max(64)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Convert to float mode at the given precision (no-op precision bump for floats).
    pub fn to_float(&self, prec: usize) -> Scalar {
        let p = prec.max(64);
        match self {
            Scalar::Exact(r) => Scalar::Float(rational_to_bigfloat(r, p)),
            Scalar::Float(f) => {
                if f.precision().unwrap_or(0) >= p {
                    self.clone()
                } else {
                    let mut g = f.clone();
                    g.set_precision(p, RM).expect("precision bump");
                    Scalar::Float(g)
                }
            }
        }
    }

    /// Coerce into the given mode.
    pub fn to_mode(&self, mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => match self {
                Scalar::Exact(_) => self.clone(),
                Scalar::Float(_) => Scalar::Exact(self.to_rational()),
            },
            Mode::Float(p) => self.to_float(p),
        }
    }

    /// Exact rational value. For floats this is the represented dyadic value.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Exact(r) => r.clone(),
            Scalar::Float(f) => bigfloat_to_rational(f),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or_else(|| {
                // fall back through a float conversion for huge numerators
                bigfloat_to_f64(&rational_to_bigfloat(r, 64))
            }),
            Scalar::Float(f) => bigfloat_to_f64(f),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => f.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(f) => f.is_negative() && !f.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && !self.is_negative()
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(f) => Scalar::Float(f.abs()),
        }
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn recip(&self) -> Scalar {
        Scalar::one() / self.clone()
    }

    pub fn powi(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Square root. Exact inputs are promoted to floats at default precision
    /// unless the rational is a perfect square.
    pub fn sqrt(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                if let Some(s) = rational_sqrt_exact(r) {
                    return Scalar::Exact(s);
                }
                self.to_float(DEFAULT_PRECISION).sqrt()
            }
            Scalar::Float(f) => {
                let p = f.precision().unwrap_or(DEFAULT_PRECISION);
                Scalar::Float(f.sqrt(p, RM))
            }
        }
    }

    pub fn max(&self, other: &Scalar) -> Scalar {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn min(&self, other: &Scalar) -> Scalar {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Decimal string rendering, deterministic for a given value and precision.
    pub fn decimal_string(&self) -> String {
        match self {
            Scalar::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
            Scalar::Float(f) => format!("{f}"),
        }
    }
}


pub(crate) fn rational_to_bigfloat(r: &BigRational, prec: usize) -> BigFloat {
    // convert through guard digits so the final rounding is clean
    let p = prec.max(64) + 32;
    let num = bigint_to_bigfloat(r.numer(), p);
    let den = bigint_to_bigfloat(r.denom(), p);
    let mut q = num.div(&den, p, RM);
    q.set_precision(prec.max(64), RM).expect("precision set");
    q
}

fn bigint_to_bigfloat(n: &BigInt, prec: usize) -> BigFloat {
    let (sign, bytes) = n.to_bytes_le();
    // build from 64-bit words, little endian
    let mut words = Vec::with_capacity(bytes.len() / 8 + 1);
    for chunk in bytes.chunks(8) {
        let mut w = [0u8; 8];
        w[..chunk.len()].copy_from_slice(chunk);
        words.push(u64::from_le_bytes(w));
    }
    if words.is_empty() {
        words.push(0);
    }
    let mut acc = BigFloat::from_f64(0.0, prec);
    let base = BigFloat::from_u64(1u64 << 32, prec);
    let base2 = base.mul(&base, prec, RM);
    for &w in words.iter().rev() {
        acc = acc.mul(&base2, prec, RM).add(&BigFloat::from_u64(w, prec), prec, RM);
    }
    if sign == Sign::Minus {
        acc = acc.neg();
    }
    acc
}

pub(crate) fn bigfloat_to_rational(f: &BigFloat) -> BigRational {
    if f.is_zero() {
        return BigRational::zero();
    }
    let (words, n, sign, exp, _) = f.as_raw_parts().expect("finite float");
    let mut bytes: Vec<u8> = Vec::with_capacity(words.len() * 8);
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    let m = BigInt::from_bytes_le(Sign::Plus, &bytes);
    let shift = exp as i64 - n as i64;
    let mut r = BigRational::from_integer(m);
    let two = BigInt::from(2);
    if shift >= 0 {
        r *= BigRational::from_integer(two.pow(shift as u32));
    } else {
        r /= BigRational::from_integer(two.pow((-shift) as u32));
    }
    if sign.is_negative() {
        r = -r;
    }
    r
}

fn bigfloat_to_f64(f: &BigFloat) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    if f.is_inf() {
        return if f.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    match f.as_raw_parts() {
        Some((words, _n, sign, exp, _)) => {
            let top = words.last().copied().unwrap_or(0);
            let mant = top as f64 / 2f64.powi(64);
            let v = mant * 2f64.powi(exp);
            if sign.is_negative() {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

fn rational_sqrt_exact(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

/// Best rational approximation to `x` with denominator at most `max_den`,
/// via continued fractions with semiconvergents.
pub fn best_rational_approx(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let mut p_prev = BigInt::one();
    let mut q_prev = BigInt::zero();
    let mut p = x.numer().div_floor_ref(x.denom());
    let mut q = BigInt::one();
    let mut frac = x - BigRational::from_integer(p.clone());
    while !frac.is_zero() {
        let inv = frac.recip();
        let a = inv.numer().div_floor_ref(inv.denom());
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        if &q_next > max_den {
            // best semiconvergent with denominator within the bound
            let k = (max_den - &q_prev) / &q;
            let half_a = {
                // semiconvergent admissible when k >= ceil(a/2); compare 2k vs a
                BigInt::from(2) * &k >= a
            };
            if k > BigInt::zero() && half_a {
                let sp = &k * &p + &p_prev;
                let sq = &k * &q + &q_prev;
                let cand1 = BigRational::new(sp, sq);
                let cand2 = BigRational::new(p, q);
                let d1 = (x - &cand1).abs();
                let d2 = (x - &cand2).abs();
                return if d1 <= d2 { cand1 } else { cand2 };
            }
            return BigRational::new(p, q);
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        frac = inv - BigRational::from_integer(a);
    }
    BigRational::new(p, q)
}

trait DivFloorRef {
    fn div_floor_ref(&self, other: &BigInt) -> BigInt;
}

impl DivFloorRef for BigInt {
    fn div_floor_ref(&self, other: &BigInt) -> BigInt {
        num_integer::Integer::div_floor(self, other)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $ratop:tt, $bfmethod:ident) => {
        impl std::ops::$trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $ratop b),
                    _ => {
                        let p = self.mode().join(rhs.mode()).precision();
                        let (a, b) = (self.to_float(p), rhs.to_float(p));
                        match (a, b) {
                            (Scalar::Float(x), Scalar::Float(y)) => {
                                Scalar::Float(x.$bfmethod(&y, p, RM))
                            }
                            _ => unreachable!(),
                        }
                    }
                }
            }
        }

        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +, add);
scalar_binop!(Sub, sub, -, sub);
scalar_binop!(Mul, mul, *, mul);

impl std::ops::Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                assert!(!b.is_zero(), "scalar division by exact zero");
                Scalar::Exact(a / b)
            }
            _ => {
                let p = self.mode().join(rhs.mode()).precision();
                let (a, b) = (self.to_float(p), rhs.to_float(p));
                match (a, b) {
                    (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(x.div(&y, p, RM)),
                    _ => unreachable!(),
                }
            }
        }
    }
}

impl std::ops::Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self).div(&rhs)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(f) => Scalar::Float(f.neg()),
        }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => {
                let p = self.mode().join(other.mode()).precision();
                let (a, b) = (self.to_float(p), other.to_float(p));
                match (a, b) {
                    (Scalar::Float(x), Scalar::Float(y)) => x.cmp(&y).map(|c| c.cmp(&0)),
                    _ => unreachable!(),
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Complex number over [`Scalar`].
#[derive(Debug, Clone, PartialEq)]
pub struct Cplx {
    pub re: Scalar,
    pub im: Scalar,
}

impl Cplx {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        Cplx { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        Cplx { re, im: Scalar::zero() }
    }

    pub fn zero() -> Self {
        Cplx::real(Scalar::zero())
    }

    pub fn one() -> Self {
        Cplx::real(Scalar::one())
    }

    pub fn i() -> Self {
        Cplx { re: Scalar::zero(), im: Scalar::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Cplx {
        Cplx { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Scalar {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> Scalar {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: &Scalar) -> Cplx {
        Cplx { re: &self.re * s, im: &self.im * s }
    }

    pub fn recip(&self) -> Cplx {
        let n = self.norm_sqr();
        Cplx { re: &self.re / &n, im: -&(&self.im / &n) }
    }

    pub fn to_float(&self, prec: usize) -> Cplx {
        Cplx { re: self.re.to_float(prec), im: self.im.to_float(prec) }
    }
}

impl std::ops::Add for &Cplx {
    type Output = Cplx;
    fn add(self, rhs: &Cplx) -> Cplx {
        Cplx { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl std::ops::Sub for &Cplx {
    type Output = Cplx;
    fn sub(self, rhs: &Cplx) -> Cplx {
        Cplx { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl std::ops::Mul for &Cplx {
    type Output = Cplx;
    fn mul(self, rhs: &Cplx) -> Cplx {
        Cplx {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl std::ops::Div for &Cplx {
    type Output = Cplx;
    fn div(self, rhs: &Cplx) -> Cplx {
        self * &rhs.recip()
    }
}

impl std::ops::Neg for &Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx { re: -&self.re, im: -&self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn exact_arithmetic_reduces() {
        let a = Scalar::from_ratio(2, 4);
        let b = Scalar::from_ratio(1, 2);
        assert_eq!(a, b);
        assert_eq!(&a + &b, Scalar::one());
    }

    #[test]
    fn mixed_mode_promotes_to_max_precision() {
        let a = Scalar::from_ratio(1, 3);
        let b = Scalar::float_from_f64(0.5, 320);
        let c = &a + &b;
        assert_eq!(c.mode(), Mode::Float(320));
        assert!((c.to_f64() - (1.0 / 3.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn float_roundtrip_through_rational() {
        let x = Scalar::float_from_str("-2.71828182845904523536", 256).unwrap();
        let r = x.to_rational();
        let back = Scalar::from_rational(r).to_float(256);
        assert_eq!(x, back);
    }

    #[test]
    fn sqrt_exact_and_float() {
        assert_eq!(Scalar::from_ratio(9, 4).sqrt(), Scalar::from_ratio(3, 2));
        let s = Scalar::from_int(2).to_float(256).sqrt();
        let err = &(&s * &s) - &Scalar::from_int(2);
        assert!(err.abs().to_f64() < 1e-70);
    }

    #[test]
    fn best_approx_finds_pi_convergent() {
        let pi = BigRational::new(
            BigInt::from_str("314159265358979323846").unwrap(),
            BigInt::from_str("100000000000000000000").unwrap(),
        );
        let r = best_rational_approx(&pi, &BigInt::from(120));
        assert_eq!(r, BigRational::new(BigInt::from(355), BigInt::from(113)));
    }

    #[test]
    fn big_integer_to_float_roundtrip() {
        let n = BigInt::from_str("123456789012345678901234567890123456789").unwrap();
        let r = BigRational::from_integer(n.clone());
        let f = rational_to_bigfloat(&r, 256);
        assert_eq!(bigfloat_to_rational(&f), r);
    }

    #[test]
    fn complex_field_ops() {
        let z = Cplx::new(Scalar::from_int(3), Scalar::from_int(4));
        assert_eq!(z.norm_sqr(), Scalar::from_int(25));
        let w = &z * &z.recip();
        assert_eq!(w.re, Scalar::one());
        assert!(w.im.is_zero());
    }
}
