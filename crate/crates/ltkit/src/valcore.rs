//! Valuations and truncated tamely ramified p-adic rings.
//!
//! Elements of `Z_p[u]/(u^m - p)` are stored in coefficient form
//! `c_0 + c_1 u + ... + c_{m-1} u^{m-1}` with each `c_i` in `Z/p^N`.
//! The base-p digit with index `k = m*j + i` is the j-th digit of `c_i`,
//! so the two views agree.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rationals used for valuations and slopes.
pub type Q = Ratio<i128>;

pub fn q(num: i128, den: i128) -> Q {
    Q::new(num, den)
}

pub fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

/// Parse `a/b`, an integer, or a finite decimal such as `0.05`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a.trim().parse().map_err(|_| bad())?;
        let b: i128 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Q::new(a, b));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || fp.len() > 18 || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ipv: i128 = if ip.is_empty() || ip == "-" { 0 } else { ip.parse().map_err(|_| bad())? };
        let den = 10i128.pow(fp.len() as u32);
        let fpv: i128 = fp.parse().map_err(|_| bad())?;
        let num = ipv.abs() * den + fpv;
        return Ok(Q::new(if neg { -num } else { num }, den));
    }
    s.parse::<i128>().map(Q::from_integer).map_err(|_| bad())
}

/// A valuation: an exact rational or `Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Val {
    Fin(Q),
    Inf,
}

impl Val {
    pub fn fin(num: i128, den: i128) -> Val {
        Val::Fin(Q::new(num, den))
    }

    pub fn zero() -> Val {
        Val::Fin(Q::zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Val::Inf)
    }

    pub fn finite(&self) -> Option<Q> {
        match self {
            Val::Fin(x) => Some(*x),
            Val::Inf => None,
        }
    }

    pub fn min(self, other: Val) -> Val {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Multiply by a rational; `Inf` stays `Inf`.
    pub fn scale(self, c: Q) -> Val {
        match self {
            Val::Fin(x) => Val::Fin(x * c),
            Val::Inf => Val::Inf,
        }
    }

    pub fn parse(s: &str) -> Result<Val> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            Ok(Val::Inf)
        } else {
            parse_q(t).map(Val::Fin)
        }
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::Inf, Val::Inf) => Ordering::Equal,
            (Val::Inf, _) => Ordering::Greater,
            (_, Val::Inf) => Ordering::Less,
            (Val::Fin(a), Val::Fin(b)) => a.cmp(b),
        }
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, rhs: Val) -> Val {
        match (self, rhs) {
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a + b),
            _ => Val::Inf,
        }
    }
}

impl From<Q> for Val {
    fn from(x: Q) -> Val {
        Val::Fin(x)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Inf => write!(f, "inf"),
            Val::Fin(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Val {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Val::Inf => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("inf", &true)?;
                m.end()
            }
            Val::Fin(x) => ser_q(x, s),
        }
    }
}

/// `{"num": .., "den": ..}` encoding of a rational.
pub fn ser_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(2))?;
    m.serialize_entry("num", &(*x.numer() as i64))?;
    m.serialize_entry("den", &(*x.denom() as i64))?;
    m.end()
}

pub fn ser_opt_q<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => ser_q(x, s),
        None => s.serialize_none(),
    }
}

pub fn ser_q_vec<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut sq = s.serialize_seq(Some(x.len()))?;
    for v in x {
        sq.serialize_element(&Val::Fin(*v))?;
    }
    sq.end()
}

pub fn q_json(x: &Q) -> serde_json::Value {
    serde_json::json!({"num": *x.numer() as i64, "den": *x.denom() as i64})
}

/// p-adic valuation of a nonzero integer.
pub fn vp_i128(mut x: i128, p: i128) -> u32 {
    assert!(x != 0);
    let mut k = 0;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    k
}

/// p-adic valuation of a rational, `None` for zero.
pub fn vp_q(x: &Q, p: i128) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(vp_i128(*x.numer(), p) as i64 - vp_i128(*x.denom(), p) as i64)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Parameters of `Z_p[u]/(u^m - p)` known modulo `p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RamifiedRing {
    pub p: u64,
    pub m: u32,
    pub n: u32,
}

impl RamifiedRing {
    /// `p^N` must stay below `2^63` so products fit in `u128`.
    pub fn new(p: u64, m: u32, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("p = {p} is not prime")));
        }
        if m == 0 || n == 0 {
            return Err(Error::Domain("ramification and precision must be positive".into()));
        }
        let mut acc: u128 = 1;
        for _ in 0..n {
            acc *= p as u128;
            if acc >= 1u128 << 63 {
                return Err(Error::Domain(format!("p^N too large for p = {p}, N = {n}")));
            }
        }
        Ok(RamifiedRing { p, m, n })
    }

    /// Largest precision supported for `p`.
    pub fn max_precision(p: u64) -> u32 {
        let mut acc: u128 = 1;
        let mut k = 0;
        while acc * (p as u128) < 1u128 << 63 {
            acc *= p as u128;
            k += 1;
        }
        k
    }

    pub fn modulus(&self) -> u128 {
        (self.p as u128).pow(self.n)
    }

    pub fn zero(&self) -> RamifiedElem {
        RamifiedElem { ring: *self, c: vec![0; self.m as usize] }
    }

    pub fn one(&self) -> RamifiedElem {
        self.from_int(1)
    }

    pub fn from_int(&self, x: i128) -> RamifiedElem {
        let mut e = self.zero();
        e.c[0] = reduce_i128(x, self.modulus());
        e
    }

    /// Reduce a rational with denominator prime to p.
    pub fn from_q(&self, x: &Q) -> Result<RamifiedElem> {
        let md = self.modulus();
        let d = reduce_i128(*x.denom(), md);
        let inv = inv_mod(d, md).ok_or_else(|| Error::Domain(format!("{x} is not p-integral")))?;
        let mut e = self.zero();
        e.c[0] = mulmod(reduce_i128(*x.numer(), md), inv, md);
        Ok(e)
    }

    /// The uniformizer `u`.
    pub fn uniformizer(&self) -> RamifiedElem {
        self.u_pow(1)
    }

    /// `u^k = p^(k div m) u^(k mod m)`.
    pub fn u_pow(&self, k: u64) -> RamifiedElem {
        let mut e = self.zero();
        let j = k / self.m as u64;
        let i = (k % self.m as u64) as usize;
        if j < self.n as u64 {
            e.c[i] = (self.p as u128).pow(j as u32);
        }
        e
    }

    pub fn from_digits(&self, digits: &[u64]) -> Result<RamifiedElem> {
        let mut e = self.zero();
        for (k, &d) in digits.iter().enumerate() {
            if d >= self.p {
                return Err(Error::Domain(format!("digit {d} out of range")));
            }
            if k >= (self.m * self.n) as usize {
                break;
            }
            let i = k % self.m as usize;
            let j = (k / self.m as usize) as u32;
            e.c[i] = (e.c[i] + d as u128 * (self.p as u128).pow(j)) % self.modulus();
        }
        Ok(e)
    }
}

fn reduce_i128(x: i128, md: u128) -> u128 {
    let r = x.rem_euclid(md as i128);
    r as u128
}

fn mulmod(a: u128, b: u128, md: u128) -> u128 {
    (a % md) * (b % md) % md
}

fn inv_mod(a: u128, md: u128) -> Option<u128> {
    let g = (a as i128).extended_gcd(&(md as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(reduce_i128(g.x, md))
}

/// Result of a valuation query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValReport {
    pub val: Val,
    pub below_precision: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RamifiedElem {
    pub ring: RamifiedRing,
    c: Vec<u128>,
}

impl RamifiedElem {
    pub fn coeffs(&self) -> &[u128] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::PrecisionMismatch(format!("{:?} vs {:?}", self.ring, other.ring)));
        }
        Ok(())
    }

    /// Base-p digits in the uniformizer, length `m*N`, lowest first.
    pub fn digits(&self) -> Vec<u64> {
        let (p, m, n) = (self.ring.p as u128, self.ring.m as usize, self.ring.n as usize);
        let mut out = vec![0u64; m * n];
        for (i, &ci) in self.c.iter().enumerate() {
            let mut x = ci;
            for j in 0..n {
                out[m * j + i] = (x % p) as u64;
                x /= p;
            }
        }
        out
    }

    /// Index of the lowest nonzero digit.
    pub fn order(&self) -> Option<u64> {
        let m = self.ring.m as u64;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, &ci)| ci != 0)
            .map(|(i, &ci)| m * vp_u128(ci, self.ring.p as u128) as u64 + i as u64)
            .min()
    }

    pub fn valuation(&self) -> ValReport {
        match self.order() {
            Some(k) => ValReport { val: Val::fin(k as i128, self.ring.m as i128), below_precision: false },
            None => ValReport { val: Val::Inf, below_precision: true },
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let md = self.ring.modulus();
        let c = self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % md).collect();
        Ok(RamifiedElem { ring: self.ring, c })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let md = self.ring.modulus();
        let c = self.c.iter().zip(&o.c).map(|(a, b)| (a + md - b) % md).collect();
        Ok(RamifiedElem { ring: self.ring, c })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let md = self.ring.modulus();
        let m = self.ring.m as usize;
        let p = self.ring.p as u128;
        let mut c = vec![0u128; m];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let mut t = mulmod(a, b, md);
                let mut k = i + j;
                if k >= m {
                    k -= m;
                    t = mulmod(t, p, md);
                }
                c[k] = (c[k] + t) % md;
            }
        }
        Ok(RamifiedElem { ring: self.ring, c })
    }

    pub fn scale_int(&self, k: i128) -> Self {
        let md = self.ring.modulus();
        let kk = reduce_i128(k, md);
        RamifiedElem { ring: self.ring, c: self.c.iter().map(|&a| mulmod(a, kk, md)).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.c[0] % self.ring.p as u128 != 0
    }

    /// Inverse of a unit, via `c0^{-1} * sum (-t)^k`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonUnit(format!("valuation {}", self.valuation().val)));
        }
        let md = self.ring.modulus();
        let c0inv = inv_mod(self.c[0], md).expect("unit");
        let mut t = self.scale_u(c0inv);
        t.c[0] = 0;
        let neg_t = -&t;
        let mut term = self.ring.one();
        let mut acc = self.ring.one();
        for _ in 0..(self.ring.m * self.ring.n) {
            term = &term * &neg_t;
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc.scale_u(c0inv))
    }

    fn scale_u(&self, k: u128) -> Self {
        let md = self.ring.modulus();
        RamifiedElem { ring: self.ring, c: self.c.iter().map(|&a| mulmod(a, k, md)).collect() }
    }

    /// Reduce to a lower precision.
    pub fn reduce(&self, n: u32) -> Result<Self> {
        if n > self.ring.n {
            return Err(Error::PrecisionMismatch(format!("cannot raise precision {} to {n}", self.ring.n)));
        }
        let ring = RamifiedRing { n, ..self.ring };
        let md = ring.modulus();
        Ok(RamifiedElem { ring, c: self.c.iter().map(|&a| a % md).collect() })
    }

    /// Divide by `p^j`, assuming divisibility; result known to `N - j` digits, padded with zeros.
    fn div_p_pow(&self, j: u32) -> Self {
        let pj = (self.ring.p as u128).pow(j);
        RamifiedElem { ring: self.ring, c: self.c.iter().map(|&a| a / pj).collect() }
    }

    /// Largest `j` with `p^j` dividing every coefficient (up to precision N).
    fn p_content(&self) -> u32 {
        self.c
            .iter()
            .filter(|&&a| a != 0)
            .map(|&a| vp_u128(a, self.ring.p as u128))
            .min()
            .unwrap_or(self.ring.n)
    }

    /// Zero out digits at positions `>= m*prec`.
    fn truncate_to(&self, prec: u32) -> Self {
        let md = (self.ring.p as u128).pow(prec.min(self.ring.n));
        RamifiedElem { ring: self.ring, c: self.c.iter().map(|&a| a % md).collect() }
    }
}

fn vp_u128(mut x: u128, p: u128) -> u32 {
    let mut k = 0;
    while x != 0 && x % p == 0 {
        x /= p;
        k += 1;
    }
    k
}

macro_rules! ring_op {
    ($tr:ident, $f:ident, $m:ident) => {
        impl $tr for &RamifiedElem {
            type Output = RamifiedElem;
            fn $f(self, o: &RamifiedElem) -> RamifiedElem {
                self.$m(o).expect("ring mismatch")
            }
        }
        impl $tr for RamifiedElem {
            type Output = RamifiedElem;
            fn $f(self, o: RamifiedElem) -> RamifiedElem {
                self.$m(&o).expect("ring mismatch")
            }
        }
    };
}
ring_op!(Add, add, checked_add);
ring_op!(Sub, sub, checked_sub);
ring_op!(Mul, mul, checked_mul);

impl Neg for &RamifiedElem {
    type Output = RamifiedElem;
    fn neg(self) -> RamifiedElem {
        self.ring.zero().checked_sub(self).unwrap()
    }
}

impl Neg for RamifiedElem {
    type Output = RamifiedElem;
    fn neg(self) -> RamifiedElem {
        -&self
    }
}

/// `unit * p^pi_exponent`, with `unit` known to `prec` p-adic digits.
///
/// `unit` has valuation in `[0, 1)`; when `m = 1` that means valuation 0.
#[derive(Clone, Debug)]
pub struct LaurentCoeff {
    pub unit: RamifiedElem,
    pub pi_exponent: i64,
    pub prec: u32,
}

impl LaurentCoeff {
    pub fn zero(ring: RamifiedRing) -> Self {
        LaurentCoeff { unit: ring.zero(), pi_exponent: 0, prec: ring.n }
    }

    pub fn one(ring: RamifiedRing) -> Self {
        Self::from_elem(ring.one(), 0)
    }

    /// Exact integer: powers of p are split off before reduction.
    pub fn from_int(ring: RamifiedRing, x: i128) -> Self {
        if x == 0 {
            return Self::zero(ring);
        }
        let p = ring.p as i128;
        let j = vp_i128(x, p);
        let u = x / p.pow(j);
        Self::from_elem(ring.from_int(u), j as i64)
    }

    /// `pi^k`.
    pub fn pi_pow(ring: RamifiedRing, k: i64) -> Self {
        LaurentCoeff { unit: ring.one(), pi_exponent: k, prec: ring.n }
    }

    pub fn from_elem(e: RamifiedElem, k: i64) -> Self {
        let prec = e.ring.n;
        LaurentCoeff { unit: e, pi_exponent: k, prec }.normalized()
    }

    pub fn ring(&self) -> RamifiedRing {
        self.unit.ring
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    fn normalized(mut self) -> Self {
        self.unit = self.unit.truncate_to(self.prec);
        if self.unit.is_zero() {
            self.pi_exponent = 0;
            return self;
        }
        let j = self.unit.p_content();
        if j > 0 {
            self.unit = self.unit.div_p_pow(j);
            self.pi_exponent += j as i64;
            self.prec = self.prec.saturating_sub(j);
        }
        self
    }

    pub fn valuation(&self) -> ValReport {
        if self.is_zero() {
            return ValReport { val: Val::Inf, below_precision: true };
        }
        let v = self.unit.valuation().val.finite().unwrap();
        ValReport { val: Val::Fin(v + qi(self.pi_exponent as i128)), below_precision: false }
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.ring()));
        }
        let unit = self.unit.checked_mul(&o.unit)?;
        Ok(LaurentCoeff { unit, pi_exponent: self.pi_exponent + o.pi_exponent, prec: self.prec.min(o.prec) }
            .normalized())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        let (lo, hi) = if self.pi_exponent <= o.pi_exponent { (self, o) } else { (o, self) };
        let shift = (hi.pi_exponent - lo.pi_exponent) as u64;
        let prec = (lo.prec as u64).min(hi.prec as u64 + shift).min(lo.ring().n as u64) as u32;
        let hi_shift = if shift >= lo.ring().n as u64 {
            lo.ring().zero()
        } else {
            hi.unit.checked_mul(&lo.ring().from_int((lo.ring().p as i128).pow(shift as u32)))?
        };
        let unit = lo.unit.checked_add(&hi_shift)?;
        Ok(LaurentCoeff { unit, pi_exponent: lo.pi_exponent, prec }.normalized())
    }

    pub fn neg(&self) -> Self {
        LaurentCoeff { unit: -&self.unit, pi_exponent: self.pi_exponent, prec: self.prec }
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.neg())
    }

    /// Inverse of a nonzero coefficient whose unit part is a genuine unit.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NonUnit("zero coefficient".into()));
        }
        let inv = self.unit.truncate_to(self.prec).inverse()?;
        Ok(LaurentCoeff { unit: inv, pi_exponent: -self.pi_exponent, prec: self.prec }.normalized())
    }

    /// Multiply by `pi^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentCoeff { unit: self.unit.clone(), pi_exponent: self.pi_exponent + k, prec: self.prec }
    }

    /// Move an unramified coefficient into a ring with the same p.
    pub fn change_ring(&self, ring: RamifiedRing) -> Result<Self> {
        if ring == self.ring() {
            return Ok(self.clone());
        }
        if self.ring().m != 1 || ring.p != self.ring().p {
            return Err(Error::PrecisionMismatch(format!("{:?} to {:?}", self.ring(), ring)));
        }
        if self.is_zero() {
            return Ok(Self::zero(ring));
        }
        let md = self.ring().modulus() as i128;
        let mut c = self.unit.coeffs()[0] as i128;
        if c > md / 2 {
            c -= md;
        }
        let prec = self.prec.min(ring.n);
        Ok(LaurentCoeff { unit: ring.from_int(c), pi_exponent: self.pi_exponent, prec }.normalized())
    }

    /// Digits of the unit part within its known precision, lowest first.
    pub fn digit_string(&self) -> String {
        let m = self.ring().m as usize;
        let d = self.unit.digits();
        d[..m * self.prec as usize].iter().map(|x| std::char::from_digit(*x as u32, 36).unwrap()).collect()
    }

    /// Exact integer value `unit * p^k` as a rational, if `pi_exponent` is reachable.
    pub fn to_q(&self) -> Option<Q> {
        if self.ring().m != 1 {
            return None;
        }
        let md = self.ring().modulus() as i128;
        let mut c = self.unit.coeffs()[0] as i128;
        if c > md / 2 {
            c -= md;
        }
        let p = self.ring().p as i128;
        let k = self.pi_exponent;
        Some(if k >= 0 { qi(c * p.pow(k as u32)) } else { Q::new(c, p.pow((-k) as u32)) })
    }
}

/// Equality up to the common known precision.
impl PartialEq for LaurentCoeff {
    fn eq(&self, o: &Self) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        let pr = self.prec.min(o.prec);
        self.ring() == o.ring()
            && self.pi_exponent == o.pi_exponent
            && self.unit.truncate_to(pr) == o.unit.truncate_to(pr)
    }
}

impl Eq for LaurentCoeff {}

impl fmt::Display for LaurentCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_q() {
            Some(x) if x.numer().abs() < 1_000_000_000 => write!(f, "{x}"),
            _ => write!(f, "[{}]*pi^{}", self.digit_string(), self.pi_exponent),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_squared_is_p() {
        let r = RamifiedRing::new(3, 2, 5).unwrap();
        let u = r.uniformizer();
        assert_eq!(&u * &u, r.from_int(3));
    }

    #[test]
    fn difference_of_squares() {
        let r = RamifiedRing::new(3, 2, 5).unwrap();
        let u = r.uniformizer();
        let a = &r.one() + &u;
        let b = &r.one() - &u;
        assert_eq!(&a * &b, r.from_int(-2));
    }

    #[test]
    fn inverse_of_four_mod_nine() {
        let r = RamifiedRing::new(3, 1, 2).unwrap();
        let inv = r.from_int(4).inverse().unwrap();
        assert_eq!(inv, r.from_int(1 - 3));
    }

    #[test]
    fn valuations() {
        let r = RamifiedRing::new(3, 2, 6).unwrap();
        assert_eq!(r.u_pow(3).valuation().val, Val::fin(3, 2));
        let z = r.zero().valuation();
        assert_eq!(z.val, Val::Inf);
        assert!(z.below_precision);
        assert_eq!(r.from_int(18).valuation().val, Val::fin(2, 1));
    }

    #[test]
    fn non_unit_inverse_fails() {
        let r = RamifiedRing::new(5, 3, 4).unwrap();
        assert!(r.uniformizer().inverse().is_err());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = RamifiedRing::new(3, 1, 4).unwrap().one();
        let b = RamifiedRing::new(3, 1, 5).unwrap().one();
        assert!(matches!(a.checked_add(&b), Err(Error::PrecisionMismatch(_))));
    }

    #[test]
    fn digit_views_agree() {
        let r = RamifiedRing::new(2, 3, 4).unwrap();
        let d = vec![1, 0, 1, 1, 0, 0, 1];
        let e = r.from_digits(&d).unwrap();
        assert_eq!(&e.digits()[..7], &d[..]);
        assert_eq!(e.order(), Some(0));
    }

    #[test]
    fn laurent_tracks_pi() {
        let r = RamifiedRing::new(3, 1, 8).unwrap();
        let a = LaurentCoeff::from_int(r, 9);
        assert_eq!(a.pi_exponent, 2);
        let b = LaurentCoeff::pi_pow(r, -1);
        let c = a.checked_mul(&b).unwrap();
        assert_eq!(c.to_q(), Some(qi(3)));
        let s = LaurentCoeff::one(r).checked_add(&b).unwrap();
        assert_eq!(s.to_q(), Some(q(4, 3)));
        assert_eq!(s.valuation().val, Val::fin(-1, 1));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_q("3/10").unwrap(), q(3, 10));
        assert_eq!(parse_q("0.05").unwrap(), q(1, 20));
        assert_eq!(Val::parse("inf").unwrap(), Val::Inf);
        assert!(parse_q("1/0").is_err());
    }
}
