//! Exact coefficients: Laurent polynomials in λ times polynomials in ω with
//! Gaussian-rational coefficients. `η` never appears; it is stored as `2λ⁻¹ + ω`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type GaussRational = Complex<BigRational>;

fn gq_int(re: i64, im: i64) -> GaussRational {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

/// Exponent key `(λ power, ω power)`.
type Mono = (i32, u32);

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    terms: BTreeMap<Mono, GaussRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(gq_int(1, 0))
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(gq_int(n, 0))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        Self::constant(Complex::new(r, BigRational::zero()))
    }

    pub fn imag_unit() -> Self {
        Self::constant(gq_int(0, 1))
    }

    pub fn monomial(c: GaussRational, lambda_pow: i32, omega_pow: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((lambda_pow, omega_pow), c);
        }
        Self { terms }
    }

    pub fn lambda_pow(p: i32) -> Self {
        Self::monomial(gq_int(1, 0), p, 0)
    }

    pub fn omega() -> Self {
        Self::monomial(gq_int(1, 0), 0, 1)
    }

    /// `η = 2/λ + ω`.
    pub fn eta() -> Self {
        Self::monomial(gq_int(2, 0), -1, 0).add(&Self::omega())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            let e = self.terms.entry(*k).or_insert_with(GaussRational::zero);
            *e = &*e + v;
            if e.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((l1, w1), c1) in &self.terms {
            for ((l2, w2), c2) in &other.terms {
                let key = (l1 + l2, w1 + w2);
                let e = out.terms.entry(key).or_insert_with(GaussRational::zero);
                *e = &*e + c1 * c2;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.mul(&Self::int(n))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Numeric value at given `λ`, `ω`.
    pub fn eval(&self, lambda: f64, omega: f64) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|((l, w), c)| {
                let f = lambda.powi(*l) * omega.powi(*w as i32);
                num_complex::Complex64::new(
                    c.re.to_f64().unwrap_or(f64::NAN) * f,
                    c.im.to_f64().unwrap_or(f64::NAN) * f,
                )
            })
            .sum()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_gauss(c: &GaussRational) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => {
            if c.im.is_one() {
                "i".into()
            } else if (-c.im.clone()).is_one() {
                "-i".into()
            } else {
                format!("{} i", fmt_rational(&c.im))
            }
        }
        _ => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            format!("({} {sign} {} i)", fmt_rational(&c.re), fmt_rational(&c.im.abs()))
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((l, w), c)| {
                let mut s = fmt_gauss(c);
                match *l {
                    0 => {}
                    1 => s.push_str(" lambda"),
                    p => s.push_str(&format!(" lambda^{p}")),
                }
                match *w {
                    0 => {}
                    1 => s.push_str(" omega"),
                    p => s.push_str(&format!(" omega^{p}")),
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
