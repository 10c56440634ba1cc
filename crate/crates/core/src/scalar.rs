//! Exact scalars: rationals and Gaussian rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p`, `p/q` or a decimal-free signed integer ratio.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GQ {
    pub re: Q,
    pub im: Q,
}

impl GQ {
    pub fn new(re: Q, im: Q) -> Self {
        GQ { re, im }
    }

    pub fn real(re: Q) -> Self {
        GQ { re, im: Q::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        GQ::real(q(n))
    }

    pub fn i() -> Self {
        GQ { re: Q::zero(), im: Q::one() }
    }

    pub fn conj(&self) -> Self {
        GQ { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(GQ { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, r: &Q) -> Self {
        GQ { re: &self.re * r, im: &self.im * r }
    }
}

impl Zero for GQ {
    fn zero() -> Self {
        GQ { re: Q::zero(), im: Q::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GQ {
    fn one() -> Self {
        GQ::real(Q::one())
    }
}

impl fmt::Debug for GQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a GQ> for &'a GQ {
    type Output = GQ;
    fn add(self, o: &GQ) -> GQ {
        GQ { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GQ> for &'a GQ {
    type Output = GQ;
    fn sub(self, o: &GQ) -> GQ {
        GQ { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GQ> for &'a GQ {
    type Output = GQ;
    fn mul(self, o: &GQ) -> GQ {
        if self.im.is_zero() && o.im.is_zero() {
            return GQ::real(&self.re * &o.re);
        }
        GQ {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a GQ> for &'a GQ {
    type Output = GQ;
    fn div(self, o: &GQ) -> GQ {
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &GQ {
    type Output = GQ;
    fn neg(self) -> GQ {
        GQ { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<GQ> for GQ {
            type Output = GQ;
            fn $m(self, o: GQ) -> GQ {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GQ> for GQ {
            type Output = GQ;
            fn $m(self, o: &GQ) -> GQ {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<GQ> for &'a GQ {
            type Output = GQ;
            fn $m(self, o: GQ) -> GQ {
                self.$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for GQ {
    type Output = GQ;
    fn neg(self) -> GQ {
        -&self
    }
}

impl AddAssign<&GQ> for GQ {
    fn add_assign(&mut self, o: &GQ) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GQ> for GQ {
    fn sub_assign(&mut self, o: &GQ) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GQ> for GQ {
    fn mul_assign(&mut self, o: &GQ) {
        *self = &*self * o;
    }
}

impl From<Q> for GQ {
    fn from(r: Q) -> Self {
        GQ::real(r)
    }
}

/// Field operations needed by the dense linear algebra kernel.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + Zero + One {
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    fn finv(&self) -> Option<Self>;
}

impl Field for Q {
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self.clone()
    }
    fn finv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Field for GQ {
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Option<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_inverse() {
        let z = GQ::new(qf(3, 2), q(-2));
        let w = z.inv().unwrap();
        assert_eq!(&z * &w, GQ::one());
        assert!(GQ::zero().inv().is_none());
    }

    #[test]
    fn i_squared() {
        assert_eq!(&GQ::i() * &GQ::i(), GQ::from_int(-1));
    }

    #[test]
    fn rational_round_trip() {
        for s in ["3/4", "-7/2", "5", "0"] {
            let x = parse_q(s).unwrap();
            assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
        }
        assert_eq!(fmt_q(&q(5)), "5/1");
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("x").is_none());
    }
}
