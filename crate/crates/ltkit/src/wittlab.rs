//! Ramified Witt vectors over abstract O-algebras, O-divided powers, log/exp, and the
//! Dieudonne slope functor on graded sigma-modules.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::building::{mat_mul, mat_scale, rat, vp_rat, Mat};
use crate::error::{Error, Result};
use crate::valcore::{is_prime, RamifiedElem, RamifiedRing, Q};

/// Commutative ring with a distinguished `pi`; constants `c pi^k` are built through `laurent`.
pub trait OAlgebra: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// `c pi^k`, failing when it is not integral.
    fn laurent(&self, c: &BigRational, k: i64) -> Result<Self>;

    /// `sum c_k pi^k`; only the total has to be integral.
    fn laurent_sum(&self, cs: &[(BigRational, i64)]) -> Result<Self> {
        let mut acc = self.zero_like();
        for (c, k) in cs {
            acc = acc.add(&self.laurent(c, *k)?);
        }
        Ok(acc)
    }

    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    fn pi_pow(&self, k: i64) -> Result<Self> {
        self.laurent(&BigRational::one(), k)
    }
}

fn prime_of(q: u64) -> Result<u64> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| Error::Domain(format!("q = {q} is not a prime power")))?;
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    if r != 1 || !is_prime(p) {
        return Err(Error::Domain(format!("q = {q} is not a prime power")));
    }
    Ok(p)
}

/// Split `c = p^v u` with `u` a `p`-unit.
fn split_p(c: &BigRational, p: u64) -> (i64, BigRational) {
    match vp_rat(c, p) {
        None => (0, BigRational::zero()),
        Some(v) => {
            let pp = BigRational::from_integer(BigInt::from(p));
            let mut u = c.clone();
            for _ in 0..v.unsigned_abs() {
                if v > 0 {
                    u /= &pp;
                } else {
                    u *= &pp;
                }
            }
            (v, u)
        }
    }
}

/// Rewrite `sum c_k pi^k` with `pi^e = p` as `sum_r (rational) pi^r`, `0 <= r < e`.
fn group_mod(cs: &[(BigRational, i64)], p: u64, e: i64) -> BTreeMap<i64, BigRational> {
    let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
    for (c, k) in cs {
        let r = k.rem_euclid(e);
        let t = (k - r) / e;
        let pp = BigRational::from_integer(BigInt::from(p)).pow(t as i32);
        *out.entry(r).or_insert_with(BigRational::zero) += c * pp;
    }
    out
}

type Mono = (Vec<u32>, i64);

/// Polynomials over `Q[pi, 1/pi]`: the `pi`-torsion-free symbolic cover.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, BigRational>,
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational, pi_exp: i64) -> Self {
        let mut p = Poly::zero();
        p.insert((vec![], pi_exp), c);
        p
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(rat(c), 0)
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = Poly::zero();
        p.insert((e, 0), BigRational::one());
        p
    }

    fn insert(&mut self, k: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let k = (trim(k.0), k.1);
        let e = self.terms.entry(k.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64, &BigRational)> {
        self.terms.iter().map(|((e, k), c)| (e, *k, c))
    }

    /// Multiply by `pi^k`.
    pub fn shift_pi(&self, k: i64) -> Poly {
        Poly { terms: self.terms.iter().map(|((e, j), c)| ((e.clone(), j + k), c.clone())).collect() }
    }

    /// Coefficients grouped by monomial.
    fn by_monomial(&self) -> Vec<(&Vec<u32>, Vec<(BigRational, i64)>)> {
        let mut out: Vec<(&Vec<u32>, Vec<(BigRational, i64)>)> = Vec::new();
        for ((e, k), c) in &self.terms {
            match out.last_mut() {
                Some((le, v)) if *le == e => v.push((c.clone(), *k)),
                _ => out.push((e, vec![(c.clone(), *k)])),
            }
        }
        out
    }

    /// Integral over `O` with uniformizer `pi`, `pi^e = p`, for each `e` in `1..=max_e`.
    pub fn integrality(&self, p: u64, max_e: u32) -> Result<()> {
        for (e, cs) in self.by_monomial() {
            for ram in 1..=max_e as i64 {
                for (r, c) in group_mod(&cs, p, ram) {
                    if vp_rat(&c, p).is_some_and(|v| v * ram + r < 0) {
                        return Err(Error::NonIntegral(format!("monomial {e:?} with pi^{ram} = {p}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Substitute ring elements for the variables.
    pub fn eval<R: OAlgebra>(&self, vals: &[R], proto: &R) -> Result<R> {
        let mut acc = proto.zero_like();
        for (e, cs) in self.by_monomial() {
            let mut t = proto.laurent_sum(&cs)?;
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    let v = vals.get(i).ok_or_else(|| Error::Shape(format!("no value for variable {i}")))?;
                    t = t.mul(&v.pow(d as u64));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by_key(|((e, k), _)| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone()), *k));
        let mut out = String::new();
        for (n, ((e, k), c)) in order.into_iter().enumerate() {
            let neg = c < &BigRational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            out.push_str(match (n, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            });
            let mut factors = Vec::new();
            let scalar = match *k {
                0 => a.to_string(),
                1 if a.is_one() => String::new(),
                -1 => format!("({a}/pi)"),
                k if k < 0 => format!("({a}/pi^{})", -k),
                1 => format!("{a}*pi"),
                k if a.is_one() => format!("pi^{k}"),
                k => format!("{a}*pi^{k}"),
            };
            let pi_only = *k == 1 && a.is_one();
            if pi_only {
                factors.push("pi".to_string());
            } else if !(scalar == "1" && e.iter().any(|&d| d > 0)) {
                factors.push(scalar);
            }
            for (i, &d) in e.iter().enumerate() {
                match d {
                    0 => {}
                    1 => factors.push(name(i)),
                    d => factors.push(format!("{}^{d}", name(i))),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl OAlgebra for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero()
    }

    fn one_like(&self) -> Self {
        Poly::int(1)
    }

    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.insert(k.clone(), c.clone());
        }
        r
    }

    fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.insert(k.clone(), -c.clone());
        }
        r
    }

    fn mul(&self, o: &Self) -> Self {
        let mut r = Poly::zero();
        for ((e1, k1), c1) in &self.terms {
            for ((e2, k2), c2) in &o.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> = (0..n).map(|i| e1.get(i).unwrap_or(&0) + e2.get(i).unwrap_or(&0)).collect();
                r.insert((e, k1 + k2), c1 * c2);
            }
        }
        r
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn laurent(&self, c: &BigRational, k: i64) -> Result<Self> {
        Ok(Poly::constant(c.clone(), k))
    }
}

/// `(Z/p^k)[eps]/(eps^r)` with `pi = p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QElem {
    pub p: u64,
    pub k: u32,
    pub c: Vec<u128>,
}

impl QElem {
    pub fn new(p: u64, k: u32, r: usize, coeffs: &[i128]) -> Result<Self> {
        let m = (p as u128).checked_pow(k).filter(|&m| m < 1 << 63);
        let m = m.ok_or_else(|| Error::Domain(format!("{p}^{k} too large")))? as i128;
        if r == 0 || coeffs.len() > r {
            return Err(Error::Shape(format!("{} coefficients for truncation order {r}", coeffs.len())));
        }
        let mut c = vec![0u128; r];
        for (i, &x) in coeffs.iter().enumerate() {
            c[i] = x.rem_euclid(m) as u128;
        }
        Ok(QElem { p, k, c })
    }

    pub fn modulus(&self) -> u128 {
        (self.p as u128).pow(self.k)
    }

    pub fn r(&self) -> usize {
        self.c.len()
    }

    pub fn eps_pow(&self, s: usize) -> QElem {
        let mut c = vec![0; self.r()];
        if s < self.r() {
            c[s] = 1;
        }
        QElem { c, ..self.clone() }
    }

    fn scalar(&self, x: u128) -> QElem {
        let mut c = vec![0; self.r()];
        c[0] = x % self.modulus();
        QElem { c, ..self.clone() }
    }

    /// `x / eps^s` when every coefficient below `s` vanishes.
    pub fn div_eps(&self, s: usize) -> Option<QElem> {
        if self.c[..s.min(self.r())].iter().any(|&x| x != 0) {
            return None;
        }
        let mut c = vec![0; self.r()];
        for i in s..self.r() {
            c[i - s] = self.c[i];
        }
        Some(QElem { c, ..self.clone() })
    }

    /// `x / p` when every coefficient is divisible by `p`.
    pub fn div_p(&self) -> Option<QElem> {
        let p = self.p as u128;
        if self.c.iter().any(|x| x % p != 0) {
            return None;
        }
        Some(QElem { c: self.c.iter().map(|x| x / p).collect(), ..self.clone() })
    }
}

impl OAlgebra for QElem {
    fn zero_like(&self) -> Self {
        QElem { c: vec![0; self.r()], ..self.clone() }
    }

    fn one_like(&self) -> Self {
        self.scalar(1)
    }

    fn add(&self, o: &Self) -> Self {
        let m = self.modulus();
        QElem { c: self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % m).collect(), ..self.clone() }
    }

    fn sub(&self, o: &Self) -> Self {
        let m = self.modulus();
        QElem { c: self.c.iter().zip(&o.c).map(|(a, b)| (a + m - b) % m).collect(), ..self.clone() }
    }

    fn mul(&self, o: &Self) -> Self {
        let m = self.modulus();
        let r = self.r();
        let mut c = vec![0u128; r];
        for i in 0..r {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..r - i {
                c[i + j] = (c[i + j] + self.c[i] * o.c[j] % m) % m;
            }
        }
        QElem { c, ..self.clone() }
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn laurent_sum(&self, cs: &[(BigRational, i64)]) -> Result<Self> {
        let total = group_mod(cs, self.p, 1).remove(&0).unwrap_or_else(BigRational::zero);
        self.laurent(&total, 0)
    }

    fn laurent(&self, c: &BigRational, k: i64) -> Result<Self> {
        if c.is_zero() {
            return Ok(self.zero_like());
        }
        let (v, u) = split_p(c, self.p);
        let t = v + k;
        if t < 0 {
            return Err(Error::NonIntegral(format!("{c}*pi^{k} in characteristic {}^{}", self.p, self.k)));
        }
        if t >= self.k as i64 {
            return Ok(self.zero_like());
        }
        let m = BigInt::from(self.modulus());
        let inv = u.denom().extended_gcd(&m).x;
        let val = (u.numer() * inv).mod_floor(&m).to_u128().unwrap();
        Ok(self.scalar(val * (self.p as u128).pow(t as u32)))
    }
}

impl OAlgebra for RamifiedElem {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }

    fn one_like(&self) -> Self {
        self.ring.one()
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }

    fn sub(&self, o: &Self) -> Self {
        self - o
    }

    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn is_zero(&self) -> bool {
        RamifiedElem::is_zero(self)
    }

    fn laurent_sum(&self, cs: &[(BigRational, i64)]) -> Result<Self> {
        let mut acc = self.ring.zero();
        for (r, c) in group_mod(cs, self.ring.p, self.ring.m as i64) {
            acc = &acc + &self.laurent(&c, r)?;
        }
        Ok(acc)
    }

    /// `pi` is the uniformizer `u` with `u^m = p`.
    fn laurent(&self, c: &BigRational, k: i64) -> Result<Self> {
        let ring: RamifiedRing = self.ring;
        if c.is_zero() {
            return Ok(ring.zero());
        }
        let (v, u) = split_p(c, ring.p);
        let t = v * ring.m as i64 + k;
        if t < 0 {
            return Err(Error::NonIntegral(format!("{c}*pi^{k} over a ramified ring")));
        }
        let uq = Q::new(
            u.numer().to_i128().ok_or_else(|| Error::Domain("coefficient too large".into()))?,
            u.denom().to_i128().ok_or_else(|| Error::Domain("coefficient too large".into()))?,
        );
        Ok(&ring.from_q(&uq)? * &ring.u_pow(t as u64))
    }
}

/// `w_i = sum_j pi^j x_j^{q^{i-j}}`.
pub fn ghost<R: OAlgebra>(q: u64, x: &[R], i: usize) -> Result<R> {
    let proto = &x[0];
    let mut acc = proto.zero_like();
    for (j, xj) in x.iter().enumerate().take(i + 1) {
        acc = acc.add(&proto.pi_pow(j as i64)?.mul(&xj.pow(q.pow((i - j) as u32))));
    }
    Ok(acc)
}

pub fn ghost_vector<R: OAlgebra>(q: u64, x: &[R]) -> Result<Vec<R>> {
    (0..x.len()).map(|i| ghost(q, x, i)).collect()
}

fn vars(offset: usize, len: usize) -> Vec<Poly> {
    (0..len).map(|i| Poly::var(offset + i)).collect()
}

/// Solve `w_i(out) = target_i` for the components.
fn solve_ghost(q: u64, targets: &[Poly]) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        let mut rhs = t.clone();
        for (j, s) in out.iter().enumerate() {
            rhs = rhs.sub(&s.pow(q.pow((i - j) as u32)).shift_pi(j as i64));
        }
        out.push(rhs.shift_pi(-(i as i64)));
    }
    out
}

/// Sum, product and Frobenius structure polynomials. `x_i` is variable `i`, `y_i` is `len + i`.
#[derive(Clone, Debug)]
pub struct WittPolys {
    pub q: u64,
    pub p: u64,
    pub len: usize,
    pub sum: Vec<Poly>,
    pub prod: Vec<Poly>,
    pub frob: Vec<Poly>,
    /// Components of the Witt vector with all ghost components `pi`.
    pub pi_vec: Vec<Poly>,
}

impl WittPolys {
    pub fn new(q: u64, len: usize) -> Result<Self> {
        let p = prime_of(q)?;
        if len == 0 || len > 4 {
            return Err(Error::Domain(format!("length {len} outside 1..=4")));
        }
        let x = vars(0, len);
        let y = vars(len, len);
        let xf = vars(0, len + 1);
        let mut st = Vec::new();
        let mut pt = Vec::new();
        let mut ft = Vec::new();
        for i in 0..len {
            let (gx, gy) = (ghost(q, &x, i)?, ghost(q, &y, i)?);
            st.push(gx.add(&gy));
            pt.push(gx.mul(&gy));
            if i + 1 < len {
                ft.push(ghost(q, &xf, i + 1)?);
            }
        }
        let polys = WittPolys {
            q,
            p,
            len,
            sum: solve_ghost(q, &st),
            prod: solve_ghost(q, &pt),
            frob: solve_ghost(q, &ft),
            pi_vec: solve_ghost(q, &vec![Poly::constant(BigRational::one(), 1); len]),
        };
        for s in polys.sum.iter().chain(&polys.prod).chain(&polys.frob).chain(&polys.pi_vec) {
            s.integrality(p, 3)?;
        }
        Ok(polys)
    }

    pub fn name(&self, i: usize) -> String {
        if i < self.len {
            format!("x{i}")
        } else {
            format!("y{}", i - self.len)
        }
    }

    pub fn render(&self) -> Vec<String> {
        let nm = |i: usize| self.name(i);
        let mut out = Vec::new();
        for (i, s) in self.sum.iter().enumerate() {
            out.push(format!("S_{i} = {}", s.render(&nm)));
        }
        for (i, s) in self.prod.iter().enumerate() {
            out.push(format!("P_{i} = {}", s.render(&nm)));
        }
        let fx = |i: usize| format!("x{i}");
        for (i, s) in self.frob.iter().enumerate() {
            out.push(format!("F_{i} = {}", s.render(&fx)));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WittVector<R> {
    pub comps: Vec<R>,
}

impl<R: OAlgebra> WittVector<R> {
    pub fn new(comps: Vec<R>) -> Self {
        WittVector { comps }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn teichmuller(a: &R, len: usize) -> Self {
        let mut comps = vec![a.zero_like(); len];
        comps[0] = a.clone();
        WittVector { comps }
    }

    fn binary(polys: &[Poly], a: &Self, b: &Self) -> Result<Self> {
        let mut vals = a.comps.clone();
        vals.extend(b.comps.iter().cloned());
        let proto = &a.comps[0];
        Ok(WittVector { comps: polys.iter().take(a.len()).map(|s| s.eval(&vals, proto)).collect::<Result<_>>()? })
    }

    pub fn add(&self, o: &Self, wp: &WittPolys) -> Result<Self> {
        check_len(self, o, wp)?;
        Self::binary(&wp.sum, self, o)
    }

    pub fn mul(&self, o: &Self, wp: &WittPolys) -> Result<Self> {
        check_len(self, o, wp)?;
        Self::binary(&wp.prod, self, o)
    }

    /// `V(x) = (0, x_0, x_1, ...)`, truncated to the same length.
    pub fn verschiebung(&self) -> Self {
        let mut comps = vec![self.comps[0].zero_like()];
        comps.extend(self.comps[..self.len() - 1].iter().cloned());
        WittVector { comps }
    }

    /// Drops one component.
    pub fn frobenius(&self, wp: &WittPolys) -> Result<Self> {
        let proto = &self.comps[0];
        Ok(WittVector {
            comps: wp.frob.iter().take(self.len() - 1).map(|f| f.eval(&self.comps, proto)).collect::<Result<_>>()?,
        })
    }

    pub fn scale(&self, a: &R, wp: &WittPolys) -> Result<Self> {
        Self::teichmuller(a, self.len()).mul(self, wp)
    }

    /// The image of `pi` in `W_O(R)`.
    pub fn pi(proto: &R, wp: &WittPolys, len: usize) -> Result<Self> {
        Ok(WittVector { comps: wp.pi_vec.iter().take(len).map(|c| c.eval(&[], proto)).collect::<Result<_>>()? })
    }

    pub fn truncate(&self, len: usize) -> Self {
        WittVector { comps: self.comps[..len].to_vec() }
    }

    pub fn ghost(&self, q: u64) -> Result<Vec<R>> {
        ghost_vector(q, &self.comps)
    }
}

fn check_len<R: OAlgebra>(a: &WittVector<R>, b: &WittVector<R>, wp: &WittPolys) -> Result<()> {
    if a.len() != b.len() || a.len() > wp.len || a.is_empty() {
        return Err(Error::Shape(format!("lengths {} and {} against polynomials of length {}", a.len(), b.len(), wp.len)));
    }
    Ok(())
}

/// An O-divided power structure `gamma` on an ideal `J`.
pub struct Opd<'a, R> {
    pub q: u64,
    gamma: Box<dyn Fn(&R) -> Result<R> + 'a>,
    member: Box<dyn Fn(&R) -> bool + 'a>,
}

impl<'a, R: OAlgebra + 'a> Opd<'a, R> {
    pub fn new(q: u64, gamma: impl Fn(&R) -> Result<R> + 'a, member: impl Fn(&R) -> bool + 'a) -> Self {
        Opd { q, gamma: Box::new(gamma), member: Box::new(member) }
    }

    /// `x^q / pi` on the torsion-free cover.
    pub fn torsion_free(q: u64) -> Opd<'a, Poly> {
        Opd::new(q, move |x: &Poly| Ok(x.pow(q).shift_pi(-1)), |_| true)
    }

    pub fn gamma(&self, x: &R) -> Result<R> {
        if !(self.member)(x) {
            return Err(Error::Domain(format!("{x:?} is not in the ideal")));
        }
        (self.gamma)(x)
    }

    pub fn contains(&self, x: &R) -> bool {
        (self.member)(x)
    }

    /// `delta_n(x) = gamma^n(x) pi^{1 + q + ... + q^{n-1} - n}`.
    pub fn delta(&self, n: usize, x: &R) -> Result<R> {
        let mut g = x.clone();
        for _ in 0..n {
            g = self.gamma(&g)?;
        }
        let e: i64 = (0..n as u32).map(|j| self.q.pow(j) as i64).sum::<i64>() - n as i64;
        Ok(g.mul(&x.pi_pow(e)?))
    }

    /// Axioms on sampled scalars and ideal elements; `gamma_i(x)` for `0 < i < q` is `x^i`.
    pub fn check_axioms(&self, scalars: &[R], elems: &[R]) -> Result<()> {
        let q = self.q;
        for x in elems {
            if !self.contains(x) {
                return Err(Error::Axiom(format!("sample {x:?} is outside J")));
            }
            let g = self.gamma(x)?;
            if !self.contains(&g) {
                return Err(Error::Axiom("gamma leaves J".into()));
            }
            if x.pi_pow(1)?.mul(&g) != x.pow(q) {
                return Err(Error::Axiom(format!("pi gamma(x) != x^q for {x:?}")));
            }
            for a in scalars {
                if self.gamma(&a.mul(x))? != a.pow(q).mul(&g) {
                    return Err(Error::Axiom(format!("gamma(ax) != a^q gamma(x) for a = {a:?}")));
                }
            }
            for y in elems {
                let mut rhs = g.add(&self.gamma(y)?);
                for i in 1..q {
                    let alpha = x.laurent(&BigRational::from_integer(binom(q, i)), -1)?;
                    rhs = rhs.add(&alpha.mul(&x.pow(i)).mul(&y.pow(q - i)));
                }
                if self.gamma(&x.add(y))? != rhs {
                    return Err(Error::Axiom(format!("additivity fails on {x:?}, {y:?}")));
                }
            }
        }
        Ok(())
    }

    /// Smallest `t <= bound` with `gamma^t(x) = 0`.
    pub fn nilpotency(&self, x: &R, bound: usize) -> Result<usize> {
        let mut g = x.clone();
        for t in 0..=bound {
            if g.is_zero() {
                return Ok(t);
            }
            g = self.gamma(&g)?;
        }
        Err(Error::NotNilpotent(format!("gamma^{bound} does not vanish")))
    }

    /// `log_i = sum_j delta_{i-j}(x_j)`.
    pub fn log(&self, w: &WittVector<R>) -> Result<Vec<R>> {
        for c in &w.comps {
            if !self.contains(c) {
                return Err(Error::Domain("Witt vector has a component outside J".into()));
            }
        }
        (0..w.len())
            .map(|i| {
                let mut acc = w.comps[0].zero_like();
                for j in 0..=i {
                    acc = acc.add(&self.delta(i - j, &w.comps[j])?);
                }
                Ok(acc)
            })
            .collect()
    }

    /// Triangular inverse of `log`; needs `gamma` nilpotent on the input.
    pub fn exp(&self, y: &[R], bound: usize) -> Result<WittVector<R>> {
        let mut x: Vec<R> = Vec::new();
        for (i, yi) in y.iter().enumerate() {
            self.nilpotency(yi, bound)?;
            let mut xi = yi.clone();
            for (j, xj) in x.iter().enumerate() {
                xi = xi.sub(&self.delta(i - j, xj)?);
            }
            self.nilpotency(&xi, bound)?;
            x.push(xi);
        }
        Ok(WittVector::new(x))
    }
}

pub fn binom(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

#[derive(Clone, Debug)]
pub struct ExpReport<R> {
    pub values: Vec<Vec<R>>,
    pub terms: Vec<usize>,
}

/// `Pi = alpha (x) gamma` on `J Lie H`; `alpha` is a `d x d` matrix over `F_p` acting after `gamma`.
pub fn apply_pi<R: OAlgebra>(opd: &Opd<R>, alpha: &[Vec<u64>], v: &[R]) -> Result<Vec<R>> {
    let g: Vec<R> = v.iter().map(|x| opd.gamma(x)).collect::<Result<_>>()?;
    alpha
        .iter()
        .map(|row| {
            let mut acc = v[0].zero_like();
            for (a, gx) in row.iter().zip(&g) {
                acc = acc.add(&gx.laurent(&rat(*a as i64), 0)?.mul(gx));
            }
            Ok(acc)
        })
        .collect()
}

/// `exp f = sum_k (-1)^k Pi^k f` on each value of `f`.
pub fn exp_nilpotent_hom<R: OAlgebra>(
    opd: &Opd<R>,
    alpha: &[Vec<u64>],
    f_values: &[Vec<R>],
    bound: usize,
) -> Result<ExpReport<R>> {
    let mut values = Vec::new();
    let mut terms = Vec::new();
    for v in f_values {
        let mut acc = v.clone();
        let mut term = v.clone();
        let mut count = if v.iter().all(|x| x.is_zero()) { 0 } else { 1 };
        let mut sign_neg = true;
        loop {
            term = apply_pi(opd, alpha, &term)?;
            if term.iter().all(|x| x.is_zero()) {
                break;
            }
            if count >= bound {
                return Err(Error::NotNilpotent(format!("Pi^{bound} does not vanish")));
            }
            count += 1;
            acc = acc.iter().zip(&term).map(|(a, t)| if sign_neg { a.sub(t) } else { a.add(t) }).collect();
            sign_neg = !sign_neg;
        }
        values.push(acc);
        terms.push(count);
    }
    Ok(ExpReport { values, terms })
}

/// `(Id + Pi)` applied to each value.
pub fn id_plus_pi<R: OAlgebra>(opd: &Opd<R>, alpha: &[Vec<u64>], vals: &[Vec<R>]) -> Result<Vec<Vec<R>>> {
    vals.iter()
        .map(|v| Ok(v.iter().zip(apply_pi(opd, alpha, v)?).map(|(a, b)| a.add(&b)).collect()))
        .collect()
}

/// Lattice `M` in `Q_p^r` with a `sigma`-linear `phi`, stored by its matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaModule {
    pub rank: usize,
    pub p: u64,
    pub phi: Mat,
}

impl SigmaModule {
    /// Elementary divisor valuations.
    pub fn smith_valuations(&self) -> Result<Vec<i64>> {
        smith_valuations(&self.phi, self.p)
    }

    /// `pi M <= phi(M) <= M` with `pi = p`.
    pub fn is_admissible(&self) -> bool {
        self.smith_valuations().is_ok_and(|v| v.iter().all(|&x| (0..=1).contains(&x)))
    }

    pub fn dimension(&self) -> Result<i64> {
        Ok(self.smith_valuations()?.iter().sum())
    }
}

pub fn smith_valuations(m: &Mat, p: u64) -> Result<Vec<i64>> {
    let mut a = m.clone();
    let n = a.len();
    let mut out = Vec::new();
    for k in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if let Some(v) = vp_rat(x, p) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, i, j) = best.ok_or(Error::Singular)?;
        a.swap(k, i);
        for row in a.iter_mut() {
            row.swap(k, j);
        }
        let piv = a[k][k].clone();
        for r in k + 1..n {
            let f = &a[r][k] / &piv;
            let pr = a[k].clone();
            for (x, y) in a[r].iter_mut().zip(pr) {
                *x -= &f * y;
            }
        }
        for c in k + 1..n {
            let f = &a[k][c] / &piv;
            for row in a.iter_mut() {
                let y = row[k].clone();
                row[c] -= &f * y;
            }
        }
        out.push(v);
    }
    out.sort();
    Ok(out)
}

/// `phi_O = (pi / p^{f0}) Phi_{f0-1} sigma(... sigma(Phi_0))` on the first graded piece, `pi = p`.
pub fn dieudonne_o(blocks: &[Mat], p: u64, sigma: &dyn Fn(&Mat) -> Mat) -> Result<SigmaModule> {
    let f0 = blocks.len();
    let first = blocks.first().ok_or_else(|| Error::Domain("no graded blocks".into()))?;
    let r = first.len();
    let pr = rat(p as i64);
    for (t, b) in blocks.iter().enumerate().skip(1) {
        let v = mat_scale(b, &pr.recip());
        let ok = v.iter().flatten().all(|x| vp_rat(x, p).is_none_or(|e| e >= 0))
            && smith_valuations(&v, p).is_ok_and(|s| s.iter().all(|&e| e == 0));
        if !ok {
            return Err(Error::Domain(format!("V is not invertible on graded piece {t}")));
        }
    }
    let mut prod = first.clone();
    for b in &blocks[1..] {
        prod = mat_mul(b, &sigma(&prod));
    }
    let scale = pr.clone() / (0..f0).fold(BigRational::one(), |a, _| a * &pr);
    Ok(SigmaModule { rank: r, p, phi: mat_scale(&prod, &scale) })
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn line(name: &str, pass: bool, detail: impl Into<String>) -> SelftestLine {
    SelftestLine { name: name.into(), pass, detail: detail.into() }
}

/// Ghost equalities for sum and product, checked by re-expansion.
pub fn ghost_hom_check(wp: &WittPolys) -> Result<bool> {
    let q = wp.q;
    let x = vars(0, wp.len);
    let y = vars(wp.len, wp.len);
    for i in 0..wp.len {
        let (gx, gy) = (ghost(q, &x, i)?, ghost(q, &y, i)?);
        if ghost(q, &wp.sum, i)? != gx.add(&gy) || ghost(q, &wp.prod, i)? != gx.mul(&gy) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `S(S(x, y), z) = S(x, S(y, z))` and `P(x, S(y, z)) = S(P(x, y), P(x, z))` symbolically.
pub fn ring_axioms_check(wp: &WittPolys) -> Result<bool> {
    let n = wp.len;
    let x = WittVector::new(vars(0, n));
    let y = WittVector::new(vars(n, n));
    let z = WittVector::new(vars(2 * n, n));
    let assoc = x.add(&y, wp)?.add(&z, wp)? == x.add(&y.add(&z, wp)?, wp)?;
    let dist = x.mul(&y.add(&z, wp)?, wp)? == x.mul(&y, wp)?.add(&x.mul(&z, wp)?, wp)?;
    Ok(assoc && dist)
}

/// Identity suite over the symbolic cover and small finite algebras.
pub fn selftest(q: u64, len: usize) -> Result<Vec<SelftestLine>> {
    let wp = WittPolys::new(q, len)?;
    let p = wp.p;
    let mut out = Vec::new();
    out.push(line("structure polynomials integral", true, format!("q = {q}, length {len}")));
    out.push(line("ghost homomorphism", ghost_hom_check(&wp)?, ""));
    if len <= 3 && q <= 3 {
        out.push(line("associativity and distributivity", ring_axioms_check(&wp)?, ""));
    }
    let a = Poly::var(3 * len);
    let b = Poly::var(3 * len + 1);
    let ta = WittVector::teichmuller(&a, len);
    let tb = WittVector::teichmuller(&b, len);
    out.push(line("teichmuller multiplicative", ta.mul(&tb, &wp)? == WittVector::teichmuller(&a.mul(&b), len), ""));
    let x = WittVector::new(vars(0, len));
    if len >= 2 {
        let fv = x.verschiebung().frobenius(&wp)?;
        let pix = WittVector::pi(&Poly::int(1), &wp, len)?.mul(&x, &wp)?.truncate(len - 1);
        out.push(line("FV = pi", fv == pix, ""));
        let vf = x.frobenius(&wp)?.verschiebung();
        let vf_ghost = ghost(q, &vf.comps, 0)? == ghost(q, &pix.comps, 0)?;
        out.push(line("VF = pi fails on the torsion-free cover", !vf_ghost, "ghost component 0 differs"));
        let ring = QElem::new(p, 1, 3, &[0])?;
        let sample = WittVector::new((0..len).map(|i| QElem::new(p, 1, 3, &[1 + i as i128, 1, 2]).unwrap()).collect());
        let vf = sample.frobenius(&wp)?.verschiebung();
        let pis = WittVector::pi(&ring, &wp, len)?.mul(&sample, &wp)?.truncate(len - 1);
        out.push(line("VF = pi in characteristic p", vf.truncate(len - 1) == pis, ""));
    }
    let opd = Opd::<Poly>::torsion_free(q);
    let lx = opd.log(&x)?;
    let ly = opd.log(&WittVector::new(vars(len, len)))?;
    let lsum = opd.log(&x.add(&WittVector::new(vars(len, len)), &wp)?)?;
    out.push(line("log additive on the cover", lsum.iter().zip(lx.iter().zip(&ly)).all(|(s, (u, v))| *s == u.add(v)), ""));
    let mut b21 = true;
    if len >= 2 {
        let lf = opd.log(&x.frobenius(&wp)?)?;
        b21 &= (0..len - 1).all(|i| lf[i] == lx[i + 1].shift_pi(1));
    }
    let lv = opd.log(&x.verschiebung())?;
    b21 &= lv[0].is_zero() && (1..len).all(|i| lv[i] == lx[i - 1]);
    let la = opd.log(&x.scale(&a, &wp)?)?;
    b21 &= (0..len).all(|i| la[i] == a.pow(q.pow(i as u32)).mul(&lx[i]));
    out.push(line("F, V, [a] under log", b21, "[a] multiplies log_i by a^(q^i)"));
    let literal = (0..len).all(|i| la[i] == a.mul(&lx[i]));
    out.push(line("[a] as plain a*y_i rejected", !literal || len == 1, "holds only for i = 0"));
    let d = (1..=2).all(|n| opd.delta(n, &a).ok() == Some(a.pow(q.pow(n as u32)).shift_pi(-(n as i64))));
    out.push(line("delta_n = x^(q^n)/pi^n", d, ""));
    let samples = [a.clone(), b.clone(), a.mul(&b).add(&Poly::int(3))];
    out.push(line("OPD axioms accept x^q/pi", opd.check_axioms(&samples, &samples).is_ok(), ""));
    let wrong = Opd::new(q, move |x: &Poly| Ok(x.pow(q).shift_pi(-1).add(x)), |_| true);
    out.push(line("OPD axioms reject x^q/pi + x", wrong.check_axioms(&samples, &samples).is_err(), ""));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s1_q2() {
        let wp = WittPolys::new(2, 2).unwrap();
        let expect = Poly::var(1).add(&Poly::var(3)).sub(&Poly::var(0).mul(&Poly::var(2)).mul(&Poly::constant(rat(2), -1)));
        assert_eq!(wp.sum[1], expect);
        assert_eq!(wp.sum[0], Poly::var(0).add(&Poly::var(2)));
        assert_eq!(wp.prod[0], Poly::var(0).mul(&Poly::var(2)));
        assert_eq!(wp.render()[1], "S_1 = x1 + y1 - (2/pi)*x0*y0");
    }

    #[test]
    fn suite() {
        for (q, n) in [(2, 3), (3, 3), (4, 2)] {
            for l in selftest(q, n).unwrap() {
                assert!(l.pass, "q={q} n={n}: {}", l.name);
            }
        }
    }

    #[test]
    fn finite_log_exp() {
        let p = 3;
        let r = QElem::new(p, 5, 2, &[0]).unwrap();
        let opd = Opd::new(
            p,
            move |x: &QElem| {
                let a = x.div_p().ok_or_else(|| Error::Domain("not in pR".into()))?;
                Ok(a.pow(p).mul(&r.laurent(&rat(1), p as i64 - 1)?))
            },
            |x: &QElem| x.div_p().is_some(),
        );
        let wp = WittPolys::new(p, 3).unwrap();
        let el = |a: i128, b: i128| QElem::new(p, 5, 2, &[a, b]).unwrap();
        let x = WittVector::new(vec![el(3, 6), el(9, 3), el(6, 0)]);
        let y = WittVector::new(vec![el(6, 3), el(3, 27), el(12, 9)]);
        let s = opd.log(&x.add(&y, &wp).unwrap()).unwrap();
        let (lx, ly) = (opd.log(&x).unwrap(), opd.log(&y).unwrap());
        for i in 0..3 {
            assert_eq!(s[i], lx[i].add(&ly[i]));
        }
        assert_eq!(opd.exp(&lx, 32).unwrap(), x);
        let scalars = [el(1, 1), el(2, 0)];
        let elems = [el(3, 0), el(0, 3), el(6, 9)];
        opd.check_axioms(&scalars, &elems).unwrap();
    }

    #[test]
    fn eps_log() {
        let p = 3;
        let c = 2i128;
        let g = move |x: &QElem| {
            let a = x.div_eps(1).ok_or_else(|| Error::Domain("not in (eps)".into()))?;
            let a0 = QElem::new(p, 1, 2, &[a.c[0] as i128]).unwrap();
            Ok(a0.pow(p).mul(&QElem::new(p, 1, 2, &[0, c]).unwrap()))
        };
        let opd = Opd::new(p, g, |x: &QElem| x.c[0] == 0);
        let xe = QElem::new(p, 1, 2, &[0, 2]).unwrap();
        let z = xe.zero_like();
        let w = WittVector::new(vec![xe.clone(), z.clone(), z.clone()]);
        let l = opd.log(&w).unwrap();
        assert_eq!(l, vec![xe.clone(), opd.gamma(&xe).unwrap(), z.clone()]);
        assert!(!opd.gamma(&opd.gamma(&xe).unwrap()).unwrap().is_zero());
        assert!(matches!(opd.exp(&l, 8), Err(Error::NotNilpotent(_))));
    }

    #[test]
    fn nilpotent_exp() {
        let r = QElem::new(2, 1, 4, &[0]).unwrap();
        let e2 = r.eps_pow(2);
        let e3 = r.eps_pow(3);
        let e3c = e3.clone();
        let opd = Opd::new(2, move |x: &QElem| Ok(x.div_eps(2).unwrap().pow(2).mul(&e3c)), |x: &QElem| x.div_eps(2).is_some());
        let alpha = vec![vec![1u64]];
        let rep = exp_nilpotent_hom(&opd, &alpha, &[vec![e2.clone()]], 8).unwrap();
        assert_eq!(rep.terms, vec![2]);
        assert_eq!(rep.values[0][0], e2.sub(&e3));
        assert_eq!(id_plus_pi(&opd, &alpha, &rep.values).unwrap()[0][0], e2);
        let zero = Opd::new(2, |x: &QElem| Ok(x.zero_like()), |x: &QElem| x.div_eps(2).is_some());
        let rep = exp_nilpotent_hom(&zero, &alpha, &[vec![e2.clone()]], 8).unwrap();
        assert_eq!(rep.values[0][0], e2);
    }

    #[test]
    fn dieudonne() {
        let id = |m: &Mat| m.clone();
        let one = vec![vec![rat(1)]];
        let p3 = vec![vec![rat(3)]];
        let m = dieudonne_o(&[one.clone(), p3.clone()], 3, &id).unwrap();
        assert_eq!(m.phi, one);
        assert!(m.is_admissible());
        let m = dieudonne_o(&[p3.clone()], 3, &id).unwrap();
        assert_eq!(m.phi, p3);
        assert!(dieudonne_o(&[one.clone(), one.clone()], 3, &id).is_err());
    }

    #[test]
    fn ramified_coefficients() {
        let ring = RamifiedRing::new(2, 2, 10).unwrap();
        let wp = WittPolys::new(2, 2).unwrap();
        let u = ring.uniformizer();
        let x = WittVector::new(vec![ring.from_int(3), u.clone()]);
        let y = WittVector::new(vec![u.clone(), ring.from_int(5)]);
        let s = x.add(&y, &wp).unwrap();
        let gs = s.ghost(2).unwrap();
        let (gx, gy) = (x.ghost(2).unwrap(), y.ghost(2).unwrap());
        for i in 0..2 {
            assert_eq!(gs[i], gx[i].add(&gy[i]));
        }
    }
}
