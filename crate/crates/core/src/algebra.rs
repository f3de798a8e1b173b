//! Exact truncated series: `Q[v] / (v^(D+1))` and power series in `t` over it.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational with arbitrary-precision numerator and denominator,
/// always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

fn check_orders(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::OrderMismatch { left, right })
    }
}

/// Polynomial in `v` truncated after degree `D`.
///
/// Stored as integer numerators over one positive common denominator with
/// no common factor, so equal polynomials have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    numers: Vec<BigInt>,
    denom: BigInt,
}

impl TruncPoly {
    fn normalized(mut numers: Vec<BigInt>, mut denom: BigInt) -> Self {
        debug_assert!(!denom.is_zero());
        if denom.is_negative() {
            numers.iter_mut().for_each(|c| *c = -&*c);
            denom = -denom;
        }
        if numers.iter().all(Zero::is_zero) {
            return TruncPoly {
                numers,
                denom: BigInt::one(),
            };
        }
        let mut g = denom.clone();
        for c in &numers {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            numers.iter_mut().for_each(|c| *c /= &g);
            denom /= &g;
        }
        TruncPoly { numers, denom }
    }

    pub fn zero(order: usize) -> Self {
        TruncPoly {
            numers: vec![BigInt::zero(); order + 1],
            denom: BigInt::one(),
        }
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        TruncPoly::from_coeffs(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        TruncPoly::constant(Rat::one(), order)
    }

    /// `v^k`, or zero when `k > order`.
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut p = TruncPoly::zero(order);
        if k <= order {
            p.numers[k] = BigInt::one();
        }
        p
    }

    /// Pads with zeros or truncates `coeffs` to degree `order`.
    pub fn from_coeffs(mut coeffs: Vec<Rat>, order: usize) -> Self {
        coeffs.resize(order + 1, Rat::zero());
        let denom = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numers = coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        TruncPoly::normalized(numers, denom)
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        let mut numers: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        numers.resize(order + 1, BigInt::zero());
        TruncPoly::normalized(numers, BigInt::one())
    }

    pub fn order(&self) -> usize {
        self.numers.len() - 1
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        (0..=self.order()).map(|k| self.coeff(k)).collect()
    }

    /// Coefficient of `v^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Rat {
        match self.numers.get(k) {
            Some(c) => Rat::new(c.clone(), self.denom.clone()),
            None => Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numers.iter().all(Zero::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        !self.numers[0].is_zero()
    }

    fn combine(&self, other: &TruncPoly, sign: i8) -> Result<TruncPoly> {
        check_orders(self.order(), other.order())?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        let g = self.denom.gcd(&other.denom);
        let scale_self = &other.denom / &g;
        let scale_other = &self.denom / &g;
        let numers = self
            .numers
            .iter()
            .zip(&other.numers)
            .map(|(a, b)| {
                let b = b * &scale_other;
                let a = a * &scale_self;
                if sign > 0 {
                    a + b
                } else {
                    a - b
                }
            })
            .collect();
        Ok(TruncPoly::normalized(numers, &self.denom * scale_self))
    }

    pub fn checked_add(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.combine(other, 1)
    }

    pub fn checked_sub(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.combine(other, -1)
    }

    /// Truncated convolution.
    pub fn checked_mul(&self, other: &TruncPoly) -> Result<TruncPoly> {
        check_orders(self.order(), other.order())?;
        let order = self.order();
        let mut numers = vec![BigInt::zero(); order + 1];
        for (i, a) in self.numers.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (b, slot) in other.numers[..=order - i].iter().zip(&mut numers[i..]) {
                if !b.is_zero() {
                    *slot += a * b;
                }
            }
        }
        Ok(TruncPoly::normalized(numers, &self.denom * &other.denom))
    }

    pub fn scale(&self, c: &Rat) -> TruncPoly {
        let numers = self.numers.iter().map(|a| a * c.numer()).collect();
        TruncPoly::normalized(numers, &self.denom * c.denom())
    }

    /// Multiplicative inverse modulo `v^(D+1)`.
    pub fn inverse(&self) -> Result<TruncPoly> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let order = self.order();
        let a = self.coeffs();
        let lead_inv = a[0].recip();
        let mut out = vec![lead_inv.clone()];
        for k in 1..=order {
            let mut acc = Rat::zero();
            for i in 1..=k {
                if !a[i].is_zero() {
                    acc += &a[i] * &out[k - i];
                }
            }
            out.push(-(acc * &lead_inv));
        }
        Ok(TruncPoly::from_coeffs(out, order))
    }

    pub fn pow(&self, exp: usize) -> TruncPoly {
        let mut out = TruncPoly::one(self.order());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Drops coefficients above `order`, which must not exceed the current one.
    pub fn truncate(&self, order: usize) -> TruncPoly {
        assert!(order <= self.order());
        TruncPoly::normalized(self.numers[..=order].to_vec(), self.denom.clone())
    }

    /// The principal branch of `sqrt(1 - v)`: `1 - v/2 - v^2/8 - ...`.
    pub fn sqrt_one_minus_v(order: usize) -> TruncPoly {
        // a_k = C(1/2, k) (-1)^k satisfies a_k = a_{k-1} (k - 3/2) / k
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = Rat::one();
        coeffs.push(term.clone());
        for k in 1..=order {
            let k = k as i64;
            term *= rat(2 * k - 3, 2 * k);
            coeffs.push(term.clone());
        }
        TruncPoly::from_coeffs(coeffs, order)
    }
}

pub fn sqrt_one_minus_v(order: usize) -> TruncPoly {
    TruncPoly::sqrt_one_minus_v(order)
}

impl Add for &TruncPoly {
    type Output = TruncPoly;
    fn add(self, other: &TruncPoly) -> TruncPoly {
        self.checked_add(other).expect("v-orders differ")
    }
}

impl Sub for &TruncPoly {
    type Output = TruncPoly;
    fn sub(self, other: &TruncPoly) -> TruncPoly {
        self.checked_sub(other).expect("v-orders differ")
    }
}

impl Mul for &TruncPoly {
    type Output = TruncPoly;
    fn mul(self, other: &TruncPoly) -> TruncPoly {
        self.checked_mul(other).expect("v-orders differ")
    }
}

impl Neg for &TruncPoly {
    type Output = TruncPoly;
    fn neg(self) -> TruncPoly {
        TruncPoly {
            numers: self.numers.iter().map(|a| -a).collect(),
            denom: self.denom.clone(),
        }
    }
}

/// Power series in `t` truncated after degree `N`, with [`TruncPoly`]
/// coefficients sharing one `v`-order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TSeries {
    coeffs: Vec<TruncPoly>,
}

impl TSeries {
    pub fn zero(t_order: usize, v_order: usize) -> Self {
        TSeries {
            coeffs: vec![TruncPoly::zero(v_order); t_order + 1],
        }
    }

    /// `c * t^k` (zero when `k > t_order`).
    pub fn monomial(c: TruncPoly, k: usize, t_order: usize) -> Self {
        let mut s = TSeries::zero(t_order, c.order());
        if k <= t_order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn one(t_order: usize, v_order: usize) -> Self {
        TSeries::monomial(TruncPoly::one(v_order), 0, t_order)
    }

    /// Builds a series from its leading coefficients; missing ones are zero.
    pub fn from_coeffs(coeffs: Vec<TruncPoly>, t_order: usize, v_order: usize) -> Result<Self> {
        let mut s = TSeries::zero(t_order, v_order);
        for (k, c) in coeffs.into_iter().enumerate().take(t_order + 1) {
            check_orders(v_order, c.order())?;
            s.coeffs[k] = c;
        }
        Ok(s)
    }

    pub fn t_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn v_order(&self) -> usize {
        self.coeffs[0].order()
    }

    pub fn coeff(&self, k: usize) -> &TruncPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[TruncPoly] {
        &self.coeffs
    }

    fn check_shape(&self, other: &TSeries) -> Result<()> {
        check_orders(self.t_order(), other.t_order())?;
        check_orders(self.v_order(), other.v_order())
    }

    pub fn checked_add(&self, other: &TSeries) -> Result<TSeries> {
        self.check_shape(other)?;
        Ok(TSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &TSeries) -> Result<TSeries> {
        self.check_shape(other)?;
        Ok(TSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &TSeries) -> Result<TSeries> {
        self.check_shape(other)?;
        let n = self.t_order();
        let mut out = TSeries::zero(n, self.v_order());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (b, slot) in other.coeffs[..=n - i].iter().zip(&mut out.coeffs[i..]) {
                if !b.is_zero() {
                    *slot = &*slot + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &TruncPoly) -> Result<TSeries> {
        check_orders(self.v_order(), c.order())?;
        Ok(TSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        })
    }

    /// Multiplicative inverse modulo `t^(N+1)`; needs a unit `t^0` coefficient.
    pub fn inverse(&self) -> Result<TSeries> {
        let lead_inv = self.coeffs[0].inverse()?;
        let n = self.t_order();
        let mut out = TSeries::zero(n, self.v_order());
        out.coeffs[0] = lead_inv.clone();
        for k in 1..=n {
            let mut acc = TruncPoly::zero(self.v_order());
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc = &acc + &(&self.coeffs[i] * &out.coeffs[k - i]);
                }
            }
            out.coeffs[k] = -&(&acc * &lead_inv);
        }
        Ok(out)
    }

    pub fn pow(&self, exp: usize) -> TSeries {
        (0..exp).fold(TSeries::one(self.t_order(), self.v_order()), |acc, _| {
            &acc * self
        })
    }
}

impl Add for &TSeries {
    type Output = TSeries;
    fn add(self, other: &TSeries) -> TSeries {
        self.checked_add(other).expect("series shapes differ")
    }
}

impl Sub for &TSeries {
    type Output = TSeries;
    fn sub(self, other: &TSeries) -> TSeries {
        self.checked_sub(other).expect("series shapes differ")
    }
}

impl Mul for &TSeries {
    type Output = TSeries;
    fn mul(self, other: &TSeries) -> TSeries {
        self.checked_mul(other).expect("series shapes differ")
    }
}

/// Converts an exact rational to a nonnegative integer if it is one.
pub(crate) fn as_natural(r: &Rat) -> Option<num_bigint::BigUint> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_biguint()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(coeffs: &[i64], order: usize) -> TruncPoly {
        TruncPoly::from_ints(coeffs, order)
    }

    #[test]
    fn poly_mul_examples() {
        assert_eq!(&p(&[1, 1], 2) * &p(&[1, -1], 2), p(&[1, 0, -1], 2));
        assert_eq!(&p(&[1, 1], 1) * &p(&[1, 1], 1), p(&[1, 2], 1));
        assert!(p(&[1], 1).checked_mul(&p(&[1], 2)).is_err());
        for d in 0..=16 {
            let s = sqrt_one_minus_v(d);
            assert_eq!(&s * &s, p(&[1, -1], d));
        }
    }

    #[test]
    fn poly_inverse_examples() {
        assert_eq!(p(&[1, -1], 3).inverse().unwrap(), p(&[1, 1, 1, 1], 3));
        assert_eq!(
            TruncPoly::constant(int(2), 2).inverse().unwrap(),
            TruncPoly::constant(rat(1, 2), 2)
        );
        assert_eq!(TruncPoly::monomial(1, 3).inverse(), Err(Error::NotAUnit));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(
            sqrt_one_minus_v(3),
            TruncPoly::from_coeffs(vec![int(1), rat(-1, 2), rat(-1, 8), rat(-1, 16)], 3)
        );
        assert_eq!(sqrt_one_minus_v(0), TruncPoly::one(0));
        let s6 = sqrt_one_minus_v(6);
        assert_eq!(&s6 * &s6, p(&[1, -1], 6));
    }

    #[test]
    fn sqrt_truncation_is_stable() {
        let big = sqrt_one_minus_v(16);
        for d in 0..16 {
            assert_eq!(big.truncate(d), sqrt_one_minus_v(d));
        }
    }

    #[test]
    fn geometric_series_inverse() {
        let c = int(3);
        let one_minus_ct = TSeries::from_coeffs(
            vec![TruncPoly::one(2), TruncPoly::constant(-c.clone(), 2)],
            6,
            2,
        )
        .unwrap();
        let inv = one_minus_ct.inverse().unwrap();
        for m in 0..=6 {
            assert_eq!(
                inv.coeff(m),
                &TruncPoly::constant(num_traits::pow(c.clone(), m), 2)
            );
        }
    }

    #[test]
    fn non_unit_series_rejected() {
        let s = TSeries::monomial(TruncPoly::monomial(1, 3), 0, 4);
        assert_eq!(s.inverse(), Err(Error::NotAUnit));
        assert!(TSeries::zero(3, 2)
            .checked_mul(&TSeries::zero(4, 2))
            .is_err());
        assert!(TSeries::zero(3, 2)
            .checked_add(&TSeries::zero(3, 1))
            .is_err());
    }

    fn random_unit_series(rng: &mut ChaCha8Rng, t_order: usize, v_order: usize) -> TSeries {
        let coeffs = (0..=t_order)
            .map(|k| {
                let cs = (0..=v_order)
                    .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
                    .collect();
                let mut c = TruncPoly::from_coeffs(cs, v_order);
                if k == 0 && !c.is_unit() {
                    c = &c + &TruncPoly::one(v_order);
                }
                c
            })
            .collect();
        TSeries::from_coeffs(coeffs, t_order, v_order).unwrap()
    }

    #[test]
    fn seeded_unit_series_invert_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_unit_series(&mut rng, 8, 4);
            assert_eq!(&a * &a.inverse().unwrap(), TSeries::one(8, 4));
        }
    }

    fn small_poly(order: usize) -> impl Strategy<Value = TruncPoly> {
        proptest::collection::vec((-6i64..=6, 1i64..=4), order + 1).prop_map(move |cs| {
            TruncPoly::from_coeffs(cs.into_iter().map(|(a, b)| rat(a, b)).collect(), order)
        })
    }

    fn small_series() -> impl Strategy<Value = TSeries> {
        proptest::collection::vec(small_poly(2), 4)
            .prop_map(|cs| TSeries::from_coeffs(cs, 3, 2).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn poly_ring_axioms(a in small_poly(3), b in small_poly(3), c in small_poly(3)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &TruncPoly::one(3), a);
        }

        #[test]
        fn series_ring_axioms(a in small_series(), b in small_series(), c in small_series()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn canonical_representation(a in small_poly(4), k in (-5i64..=5).prop_filter("nonzero", |k| *k != 0)) {
            prop_assert_eq!(TruncPoly::from_coeffs(a.coeffs(), 4), a.clone());
            let scaled = a.scale(&int(k)).scale(&rat(1, k));
            prop_assert_eq!(scaled, a);
        }

        #[test]
        fn poly_inverse_is_exact(a in small_poly(5)) {
            prop_assume!(a.is_unit());
            prop_assert_eq!(&a * &a.inverse().unwrap(), TruncPoly::one(5));
        }
    }
}
