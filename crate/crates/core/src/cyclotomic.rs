//! Exact arithmetic in the cyclotomic field `Q(ζ_p)` and the character
//! primitives built on it: the additive character `ψ(z) = ζ^z`, the Legendre
//! character `σ`, and the quadratic Gauss sum `G(ψ) = Σ_z ψ(z²/2)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{p-2}` as an integer
//! numerator vector over a single positive denominator. The pair is kept
//! reduced (the gcd of the denominator and every numerator coefficient is 1),
//! so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced rational number with unbounded numerator and denominator.
pub type Rat = BigRational;

/// The four field operations accepted by [`cyc_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Returns true when `p` is an odd prime.
pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_prime(p: u32) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// An element of `Q(ζ_p)` in canonical power-basis form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    p: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    pub fn zero(p: u32) -> Self {
        CycNum {
            p,
            num: vec![BigInt::zero(); (p - 1) as usize],
            den: BigInt::one(),
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, value: i64) -> Self {
        let mut out = Self::zero(p);
        out.num[0] = BigInt::from(value);
        out
    }

    pub fn from_rat(p: u32, value: &Rat) -> Self {
        let mut num = vec![BigInt::zero(); (p - 1) as usize];
        num[0] = value.numer().clone();
        Self::from_parts(p, num, value.denom().clone())
    }

    /// Builds an element from its power-basis coefficients `c_0, …, c_{p-2}`.
    pub fn from_coeffs(p: u32, coeffs: &[Rat]) -> Result<Self> {
        check_prime(p)?;
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::DimensionMismatch {
                expected: format!("{} coefficients", p - 1),
                got: coeffs.len().to_string(),
            });
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::from_parts(p, num, den))
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_coeffs(p: u32, coeffs: &[i64]) -> Self {
        assert_eq!(coeffs.len(), (p - 1) as usize, "expected p-1 coefficients");
        let num = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_parts(p, num, BigInt::one())
    }

    /// `ζ^k`, with `k` taken modulo `p`.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let k = k.rem_euclid(p as i64) as usize;
        let mut num = vec![BigInt::zero(); (p - 1) as usize];
        if k == (p - 1) as usize {
            // ζ^{p-1} = -(1 + ζ + … + ζ^{p-2})
            for c in num.iter_mut() {
                *c = BigInt::from(-1);
            }
        } else {
            num[k] = BigInt::one();
        }
        CycNum {
            p,
            num,
            den: BigInt::one(),
        }
    }

    fn from_parts(p: u32, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut out = CycNum { p, num, den };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Power-basis coefficients as reduced rationals.
    pub fn coeffs(&self) -> Vec<Rat> {
        self.num
            .iter()
            .map(|c| Rat::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Common denominator of the coefficients.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Some(q) when the element is the rational number q.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rat::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Self {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let den = self.den.lcm(&other.den);
            let fa = &den / &self.den;
            let fb = &den / &other.den;
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &fa, b * &fb);
                    if negate {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
            (num, den)
        };
        Self::from_parts(self.p, num, den)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.add_signed(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.add_signed(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as usize;
        // Product modulo x^p - 1, then fold the ζ^{p-1} coefficient.
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc[(i + j) % p] += a * b;
            }
        }
        Self::fold(self.p, acc, &self.den * &other.den)
    }

    /// Reduces a length-`p` vector in the basis `1, ζ, …, ζ^{p-1}`.
    fn fold(p: u32, mut acc: Vec<BigInt>, den: BigInt) -> Self {
        let top = acc.pop().expect("length p");
        if !top.is_zero() {
            for c in acc.iter_mut() {
                *c -= &top;
            }
        }
        Self::from_parts(p, acc, den)
    }

    /// Multiplication by `ζ^k`: a rotation followed by one fold.
    pub fn mul_zeta(&self, k: i64) -> Self {
        let p = self.p as usize;
        let k = k.rem_euclid(p as i64) as usize;
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let mut acc = vec![BigInt::zero(); p];
        for (i, c) in self.num.iter().enumerate() {
            acc[(i + k) % p] = c.clone();
        }
        Self::fold(self.p, acc, self.den.clone())
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        if factor == 0 {
            return Self::zero(self.p);
        }
        let f = BigInt::from(factor);
        Self::from_parts(
            self.p,
            self.num.iter().map(|c| c * &f).collect(),
            self.den.clone(),
        )
    }

    pub fn scale_rat(&self, factor: &Rat) -> Self {
        Self::from_parts(
            self.p,
            self.num.iter().map(|c| c * factor.numer()).collect(),
            &self.den * factor.denom(),
        )
    }

    /// Multiplicative inverse, computed by solving `b·x = 1` in the power
    /// basis over `Q`.
    pub fn inverse(&self) -> Result<Self> {
        self.solve_mul(&Self::one(self.p))
    }

    /// Returns `x` with `self · x = rhs`.
    fn solve_mul(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = (self.p - 1) as usize;
        // Column j holds the coordinates of self·ζ^j (integer numerators; the
        // shared denominator is restored at the end).
        let integral = CycNum {
            p: self.p,
            num: self.num.clone(),
            den: BigInt::one(),
        };
        let mut m: Vec<Vec<Rat>> = vec![vec![Rat::zero(); d + 1]; d];
        for j in 0..d {
            let col = integral.mul_zeta(j as i64);
            for i in 0..d {
                m[i][j] = Rat::from_integer(col.num[i].clone());
            }
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[d] = Rat::new(rhs.num[i].clone(), rhs.den.clone());
        }
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(col, pivot);
            let inv = m[col][col].recip();
            for v in m[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=d {
                        let delta = &f * &m[col][c];
                        m[r][c] = &m[r][c] - delta;
                    }
                }
            }
        }
        let coeffs: Vec<Rat> = m
            .iter()
            .map(|row| &row[d] * Rat::from_integer(self.den.clone()))
            .collect();
        Self::from_coeffs(self.p, &coeffs)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        other.solve_mul(self)
    }

    /// Complex conjugation `ζ^i ↦ ζ^{-i}`.
    pub fn conjugate(&self) -> Self {
        let p = self.p as usize;
        let mut acc = vec![BigInt::zero(); p];
        for (i, c) in self.num.iter().enumerate() {
            acc[(p - i) % p] = c.clone();
        }
        Self::fold(self.p, acc, self.den.clone())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Self::one(self.p);
        for _ in 0..exp {
            out = out.mul_unchecked(self);
        }
        out
    }
}

/// `a (op) b` in `Q(ζ_p)`.
pub fn cyc_arith(a: &CycNum, b: &CycNum, which: ArithOp) -> Result<CycNum> {
    match which {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

/// Complex conjugation.
pub fn conjugate(a: &CycNum) -> CycNum {
    a.conjugate()
}

/// The additive character `ψ(z) = ζ^z` on `F_p`.
pub fn psi(p: u32, z: i64) -> CycNum {
    CycNum::zeta_pow(p, z)
}

/// Legendre character of `a` modulo `p`.
pub fn sigma(p: u32, a: i64) -> Result<i8> {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Err(Error::SigmaOfZero);
    }
    let r = mod_pow(a, (p as u64 - 1) / 2, p as u64);
    Ok(if r == 1 { 1 } else { -1 })
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut out = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            out = out * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    out
}

/// Inverse of `a` modulo the prime `p`.
pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

/// `1/2` in `F_p`, i.e. `(p+1)/2`.
pub fn half(p: u32) -> u32 {
    p.div_ceil(2)
}

/// `1/4` in `F_p`.
pub fn quarter(p: u32) -> u32 {
    mod_inv(4 % p as u64, p as u64) as u32
}

/// `G(ψ) = Σ_{z ∈ F_p} ψ(z²/2)`.
pub fn gauss_sum(p: u32) -> CycNum {
    let h = half(p) as u64;
    let mut counts = vec![0i64; p as usize];
    for z in 0..p as u64 {
        counts[(h * z % p as u64 * z % p as u64) as usize] += 1;
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .fold(CycNum::zero(p), |acc, (k, &c)| {
            &acc + &psi(p, k as i64).scale_int(c)
        })
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.p, rhs.p, "prime mismatch");
        self.add_signed(rhs, false)
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.p, rhs.p, "prime mismatch");
        self.add_signed(rhs, true)
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        assert_eq!(self.p, rhs.p, "prime mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            p: self.p,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => c.to_string(),
                1 => format!("{c}ζ"),
                _ => format!("{c}ζ^{i}"),
            });
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        };
        if self.den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    fn from_big(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => JsonInt::Small(x),
            None => JsonInt::Big(v.to_string()),
        }
    }

    fn to_big<E: de::Error>(&self) -> Result<BigInt, E> {
        match self {
            JsonInt::Small(x) => Ok(BigInt::from(*x)),
            JsonInt::Big(s) => s.parse().map_err(E::custom),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycJson {
    p: u32,
    coeffs: Vec<[JsonInt; 2]>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CycJson {
            p: self.p,
            coeffs: self
                .coeffs()
                .iter()
                .map(|c| [JsonInt::from_big(c.numer()), JsonInt::from_big(c.denom())])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = CycJson::deserialize(deserializer)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|[n, d]| {
                let d = d.to_big::<D::Error>()?;
                if d.is_zero() {
                    return Err(de::Error::custom("zero denominator"));
                }
                Ok(Rat::new(n.to_big::<D::Error>()?, d))
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        CycNum::from_coeffs(raw.p, &coeffs).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zeta_squared_mod_phi3() {
        let z = psi(3, 1);
        let sq = cyc_arith(&z, &z, ArithOp::Mul).unwrap();
        assert_eq!(sq, CycNum::from_int_coeffs(3, &[-1, -1]));
    }

    #[test]
    fn self_division_is_one() {
        let a = CycNum::from_int_coeffs(5, &[1, 1, 0, 0]);
        assert!(cyc_arith(&a, &a, ArithOp::Div).unwrap().is_one());
    }

    #[test]
    fn gauss_sum_p3_squared() {
        let g = CycNum::from_int_coeffs(3, &[-1, -2]);
        assert_eq!(&g * &g, CycNum::from_int(3, -3));
    }

    #[test]
    fn errors() {
        let a = CycNum::one(3);
        let b = CycNum::one(5);
        assert_eq!(
            cyc_arith(&a, &b, ArithOp::Add),
            Err(Error::PrimeMismatch { left: 3, right: 5 })
        );
        assert_eq!(
            cyc_arith(&a, &CycNum::zero(3), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        assert_eq!(sigma(7, 0), Err(Error::SigmaOfZero));
        assert!(CycNum::from_coeffs(4, &vec![rat(1, 1); 3]).is_err());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(conjugate(&psi(3, 1)), CycNum::from_int_coeffs(3, &[-1, -1]));
        assert_eq!(conjugate(&CycNum::from_int(3, 5)), CycNum::from_int(3, 5));
        let g = gauss_sum(3);
        assert_eq!(conjugate(&g), CycNum::from_int_coeffs(3, &[1, 2]));
        assert_eq!(&g * &conjugate(&g), CycNum::from_int(3, 3));
    }

    #[test]
    fn psi_examples() {
        assert!(psi(3, 0).is_one());
        assert_eq!(psi(3, 1), CycNum::from_int_coeffs(3, &[0, 1]));
        assert_eq!(&psi(3, 2) * &psi(3, 2), psi(3, 1));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(3, 1), Ok(1));
        assert_eq!(sigma(3, 2), Ok(-1));
        assert_eq!(sigma(5, 4), Ok(1));
    }

    #[test]
    fn gauss_sum_examples() {
        let g3 = gauss_sum(3);
        assert_eq!(g3, CycNum::from_int_coeffs(3, &[-1, -2]));
        assert_eq!(&g3 * &g3, CycNum::from_int(3, -3));
        let g5 = gauss_sum(5);
        assert_eq!(&g5 * &g5, CycNum::from_int(5, 5));
    }

    #[test]
    fn gauss_sum_square_law() {
        for p in [3u32, 5, 7, 11, 13] {
            let g = gauss_sum(p);
            let expected = CycNum::from_int(p, sigma(p, -1).unwrap() as i64 * p as i64);
            assert_eq!(&g * &g, expected, "p = {p}");
            assert_eq!(&g * &g.conjugate(), CycNum::from_int(p, p as i64));
        }
    }

    #[test]
    fn sigma_is_a_balanced_character() {
        for p in [3u32, 5, 7, 11] {
            let total: i64 = (1..p as i64).map(|a| sigma(p, a).unwrap() as i64).sum();
            assert_eq!(total, 0);
            for a in 1..p as i64 {
                for b in 1..p as i64 {
                    assert_eq!(
                        sigma(p, a * b).unwrap(),
                        sigma(p, a).unwrap() * sigma(p, b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn psi_is_additive_and_faithful() {
        for p in [3u32, 5, 7] {
            for a in 0..p as i64 {
                assert_eq!(psi(p, a).is_one(), a == 0);
                assert_eq!(conjugate(&psi(p, a)), psi(p, -a));
                for b in 0..p as i64 {
                    assert_eq!(psi(p, a + b), &psi(p, a) * &psi(p, b));
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let g = gauss_sum(3).scale_rat(&rat(1, 3));
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"p":3,"coeffs":[[-1,3],[-2,3]]}"#);
        let back: CycNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }

    fn arb_cyc(p: u32) -> impl Strategy<Value = CycNum> {
        proptest::collection::vec((-20i64..20, 1i64..6), (p - 1) as usize).prop_map(move |cs| {
            let coeffs: Vec<Rat> = cs.iter().map(|&(n, d)| rat(n, d)).collect();
            CycNum::from_coeffs(p, &coeffs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_cyc(5), b in arb_cyc(5), c in arb_cyc(5)) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(conjugate(&conjugate(&a)), a.clone());
            prop_assert_eq!(conjugate(&(&a * &b)), &conjugate(&a) * &conjugate(&b));
            if !b.is_zero() {
                prop_assert_eq!(cyc_arith(&(&a * &b), &b, ArithOp::Div).unwrap(), a.clone());
            }
        }

        #[test]
        fn canonical_form_is_stable(a in arb_cyc(7)) {
            let rebuilt = CycNum::from_coeffs(7, &a.coeffs()).unwrap();
            prop_assert_eq!(&rebuilt, &a);
            let json = serde_json::to_string(&a).unwrap();
            let back: CycNum = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
