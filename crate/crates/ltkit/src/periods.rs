//! Display matrices and the period map of the Lubin-Tate space.
//!
//! Series live over `Z_p` with `pi = p`, so `q` must be prime here.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::series::{row_times_matrix, SeriesMatrix, TruncSeries};
use crate::valcore::{is_prime, qi, ser_opt_q, LaurentCoeff, RamifiedElem, RamifiedRing, Val, ValReport, Q};

pub fn default_ring(q: u64) -> Result<RamifiedRing> {
    if !is_prime(q) {
        return Err(Error::Domain(format!("q = {q} must be prime for series computations")));
    }
    RamifiedRing::new(q, 1, RamifiedRing::max_precision(q))
}

#[derive(Clone, Debug)]
pub struct DisplayData {
    pub n: usize,
    pub q: u64,
    pub a: SeriesMatrix,
    pub b: SeriesMatrix,
    pub c: SeriesMatrix,
}

impl DisplayData {
    /// Matrix of `F` on the display basis; it coincides with `A`.
    pub fn f_operator(&self) -> &SeriesMatrix {
        &self.a
    }
}

fn pi_series(ring: RamifiedRing, nvars: usize, cap: u64, k: i64) -> TruncSeries {
    TruncSeries::constant(LaurentCoeff::pi_pow(ring, k), nvars, cap)
}

fn grid(n: usize, ring: RamifiedRing, cap: u64) -> Vec<Vec<TruncSeries>> {
    vec![vec![TruncSeries::zero(ring, n - 1, cap); n]; n]
}

pub fn display_matrices(n: usize, q: u64, cap: u64) -> Result<DisplayData> {
    display_matrices_in(default_ring(q)?, n, q, cap)
}

pub fn display_matrices_in(ring: RamifiedRing, n: usize, q: u64, cap: u64) -> Result<DisplayData> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be at least 2")));
    }
    let nv = n - 1;
    let x = |k: usize| TruncSeries::var(ring, nv, cap, k);
    let pi = pi_series(ring, nv, cap, 1);
    let one = TruncSeries::one(ring, nv, cap);

    let mut a = grid(n, ring, cap);
    let mut b = grid(n, ring, cap);
    let mut c = grid(n, ring, cap);
    a[0][0] = x(1);
    for k in 1..n - 1 {
        a[0][k] = pi.mul(&x(k + 1))?;
    }
    a[0][n - 1] = pi.clone();
    b[0][n - 1] = pi.clone();
    for j in 1..n {
        let s = if j == 1 { one.clone() } else { pi.clone() };
        a[j][j - 1] = s.clone();
        b[j][j - 1] = s;
    }
    for (k, row) in c.iter_mut().enumerate() {
        row[k] = one.clone();
    }
    for k in 1..n {
        c[0][k] = x(k);
    }
    Ok(DisplayData {
        n,
        q,
        a: SeriesMatrix::new(a)?,
        b: SeriesMatrix::new(b)?,
        c: SeriesMatrix::new(c)?,
    })
}

/// `B^{-1}`: `B` is monomial, so invert entrywise on the transposed pattern.
pub fn b_inverse(ring: RamifiedRing, n: usize, cap: u64) -> Result<SeriesMatrix> {
    let mut m = grid(n, ring, cap);
    m[n - 1][0] = pi_series(ring, n - 1, cap, -1);
    for j in 1..n {
        m[j - 1][j] = if j == 1 { TruncSeries::one(ring, n - 1, cap) } else { pi_series(ring, n - 1, cap, -1) };
    }
    SeriesMatrix::new(m)
}

/// One pivot step of the recurrence, kept for the integrality audit.
#[derive(Clone, Debug, Serialize)]
pub struct PivotRecord {
    pub step: u32,
    pub pivot: usize,
    pub min_pi_exponent: Option<i64>,
    pub neg_updates: u32,
}

impl PivotRecord {
    pub fn holds(&self) -> bool {
        self.min_pi_exponent.map_or(true, |m| m >= -(self.neg_updates as i64))
    }
}

#[derive(Clone, Debug)]
pub struct PeriodTuple {
    pub n: usize,
    pub q: u64,
    pub depth: u32,
    pub f: Vec<TruncSeries>,
    pub neg_updates: Vec<u32>,
    pub ledger: Vec<PivotRecord>,
}

impl PeriodTuple {
    pub fn cap(&self) -> u64 {
        self.f[0].cap
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "q": self.q,
            "depth": self.depth,
            "cap": self.cap(),
            "f": self.f.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for PeriodTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.f.iter().enumerate() {
            writeln!(f, "f_{i} = {s}")?;
        }
        Ok(())
    }
}

pub fn cap_for(q: u64, depth: u32) -> Result<u64> {
    q.checked_pow(depth).ok_or_else(|| Error::Domain(format!("q^depth overflows for depth {depth}")))
}

/// alpha(b, i) for b != 0.
fn alpha(b: usize, i: usize) -> i64 {
    if i == 0 || i > b {
        -1
    } else {
        0
    }
}

pub fn period_series(n: usize, q: u64, depth: u32) -> Result<PeriodTuple> {
    period_series_in(default_ring(q)?, n, depth)
}

pub fn period_series_in(ring: RamifiedRing, n: usize, depth: u32) -> Result<PeriodTuple> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be at least 2")));
    }
    let q = ring.p;
    let cap = cap_for(q, depth)?;
    let nv = n - 1;
    let mut f = vec![TruncSeries::zero(ring, nv, cap); n];
    f[0] = TruncSeries::one(ring, nv, cap);
    let mut neg = vec![0u32; n];
    let mut ledger = Vec::new();
    for k in 0..depth {
        let b = k as usize % n;
        let qk = cap_for(q, k)?;
        let xpow = |idx: usize| {
            let mut e = vec![0u64; nv];
            if idx % n != 0 {
                e[idx % n - 1] = qk;
            }
            e
        };
        if b == 0 {
            for i in 1..n {
                let add = f[0].mul_monomial(&LaurentCoeff::one(ring), &xpow(i));
                f[i] = f[i].add(&add)?;
                neg[i] = neg[i].max(neg[0]);
            }
        } else {
            ledger.push(PivotRecord { step: k, pivot: b, min_pi_exponent: f[b].min_pi_exponent(), neg_updates: neg[b] });
            let fb = f[b].clone();
            for i in (0..n).filter(|&i| i != b) {
                let a = alpha(b, i);
                let add = fb.mul_monomial(&LaurentCoeff::pi_pow(ring, a), &xpow(n - b + i));
                f[i] = f[i].add(&add)?;
                if a == -1 {
                    neg[i] = neg[i].max(neg[b]) + 1;
                } else {
                    neg[i] = neg[i].max(neg[b]);
                }
            }
        }
    }
    Ok(PeriodTuple { n, q, depth, f, neg_updates: neg, ledger })
}

/// Explicit product `(1,0,..,0) A A^(s) .. A^(s^{k-1}) B^{-k}`.
pub fn period_product(n: usize, q: u64, depth: u32) -> Result<Vec<TruncSeries>> {
    let ring = default_ring(q)?;
    let cap = cap_for(q, depth)?;
    let d = display_matrices_in(ring, n, q, cap)?;
    let binv = b_inverse(ring, n, cap)?;
    let mut row = vec![TruncSeries::zero(ring, n - 1, cap); n];
    row[0] = TruncSeries::one(ring, n - 1, cap);
    for i in 0..depth {
        row = row_times_matrix(&row, &d.a.frobenius_twist(q, i))?;
    }
    for _ in 0..depth {
        row = row_times_matrix(&row, &binv)?;
    }
    Ok(row)
}

/// A Laurent series in one variable `x`, known below `x^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XLaurent {
    pub ring: RamifiedRing,
    pub prec: i64,
    terms: BTreeMap<i64, LaurentCoeff>,
}

const EXACT: i64 = i64::MAX / 4;

impl XLaurent {
    pub fn zero(ring: RamifiedRing, prec: i64) -> Self {
        XLaurent { ring, prec, terms: BTreeMap::new() }
    }

    pub fn monomial(c: LaurentCoeff, e: i64) -> Self {
        let mut s = Self::zero(c.ring(), EXACT);
        s.insert(e, c);
        s
    }

    pub fn from_series(s: &TruncSeries) -> Result<Self> {
        if s.nvars != 1 {
            return Err(Error::Shape("one variable expected".into()));
        }
        let mut out = Self::zero(s.ring, s.cap as i64);
        for (e, c) in s.terms() {
            out.insert(e[0] as i64, c.clone());
        }
        Ok(out)
    }

    fn insert(&mut self, e: i64, c: LaurentCoeff) {
        if c.is_zero() || e >= self.prec {
            return;
        }
        let v = match self.terms.remove(&e) {
            Some(old) => old.checked_add(&c).expect("same ring"),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &LaurentCoeff)> {
        self.terms.iter()
    }

    pub fn order(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let mut s = Self::zero(self.ring, prec.min(self.prec));
        for (e, c) in &self.terms {
            s.insert(*e, c.clone());
        }
        s
    }

    /// Remove terms at or above `x^e`, keeping the precision.
    pub fn drop_from(&self, e: i64) -> Self {
        let mut s = self.clone();
        s.terms.retain(|k, _| *k < e);
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = Self::zero(self.ring, self.prec.min(o.prec));
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            s.insert(*e, c.clone());
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let va = self.order().unwrap_or(self.prec);
        let vb = o.order().unwrap_or(o.prec);
        let prec = self.prec.saturating_add(vb).min(o.prec.saturating_add(va)).min(EXACT);
        let mut s = Self::zero(self.ring, prec);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                if ea + eb < prec {
                    s.insert(ea + eb, ca.checked_mul(cb)?);
                }
            }
        }
        Ok(s)
    }

    /// Inverse, keeping `rel` terms of relative precision when the input is exact.
    pub fn inverse(&self, rel: i64) -> Result<Self> {
        let v = self.order().ok_or_else(|| Error::PrecisionExhausted("inverse of zero series".into()))?;
        let lead = self.terms[&v].clone();
        let lead_inv = lead.inverse()?;
        let r = if self.prec >= EXACT { rel } else { (self.prec - v).min(rel) };
        // t = self / (lead x^v) - 1
        let mut t = Self::zero(self.ring, r);
        for (e, c) in &self.terms {
            if *e != v {
                t.insert(e - v, c.checked_mul(&lead_inv)?);
            }
        }
        let mut acc = XLaurent::monomial(LaurentCoeff::one(self.ring), 0).truncate(r);
        let mut pw = acc.clone();
        let neg_t = XLaurent { terms: t.terms.iter().map(|(e, c)| (*e, c.neg())).collect(), ..t.clone() };
        loop {
            pw = pw.mul(&neg_t)?.truncate(r);
            if pw.terms.is_empty() {
                break;
            }
            acc = acc.add(&pw);
        }
        let mut out = Self::zero(self.ring, r - v);
        for (e, c) in &acc.terms {
            out.insert(e - v, c.checked_mul(&lead_inv)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(e, c)| json!({"exp": e, "pi_exponent": c.pi_exponent, "digits": c.digit_string()}))
            .collect();
        json!({"prec": self.prec, "terms": terms})
    }
}

impl fmt::Display for XLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}*x^{e}")).collect();
        write!(f, "{} + O(x^{})", if parts.is_empty() { "0".into() } else { parts.join(" + ") }, self.prec)
    }
}

/// Entries `x^{q^{2k}}/pi, x^{q^{2k-1}}, ..., x^q, x/pi` of the n = 2 continued fraction.
pub fn cf2_entries(ring: RamifiedRing, q: u64, k: u32) -> Result<Vec<XLaurent>> {
    let len = 2 * k + 1;
    (1..=len)
        .map(|j| {
            let e = cap_for(q, len - j)? as i64;
            let c = if j % 2 == 1 { LaurentCoeff::pi_pow(ring, -1) } else { LaurentCoeff::one(ring) };
            Ok(XLaurent::monomial(c, e))
        })
        .collect()
}

/// Evaluate `1/(a_1 + 1/(a_2 + ... + 1/a_last))` with entries reduced modulo `x^cap`.
///
/// Caps above `q^{2k+1}` are rejected.
pub fn period_cf2(q: u64, k: u32, cap: u64) -> Result<XLaurent> {
    let ring = default_ring(q)?;
    let limit = cap_for(q, 2 * k + 1)?;
    if cap > limit {
        return Err(Error::Domain(format!("depth {k} determines the series only below x^{limit}, cap {cap} requested")));
    }
    let entries: Vec<XLaurent> = cf2_entries(ring, q, k)?.iter().map(|a| a.drop_from(cap as i64)).collect();
    let rel = cap as i64 + 2 * cap_for(q, 2 * k)? as i64 + 2;
    let mut acc = entries.last().unwrap().clone();
    for a in entries.iter().rev().skip(1) {
        let inv = acc.inverse(rel)?;
        acc = if a.order().is_none() { inv } else { a.add(&inv) };
    }
    let out = acc.inverse(rel)?;
    if out.prec < cap as i64 {
        return Err(Error::PrecisionExhausted(format!(
            "continued fraction known below x^{} only, {} requested",
            out.prec, cap
        )));
    }
    Ok(out.truncate(cap as i64))
}

#[derive(Clone, Debug, Serialize)]
pub struct CfCrossCheck {
    pub convention: Option<&'static str>,
    pub agree_below: i64,
    pub known_below: i64,
}

/// Compare the continued fraction with ratios built from the period tuple.
pub fn cf2_cross_check(q: u64, k: u32) -> Result<CfCrossCheck> {
    let depth = (2 * k).max(1);
    let pt = period_series(2, q, depth)?;
    let cap = pt.cap();
    let cf = period_cf2(q, k, cap)?;
    let f0 = XLaurent::from_series(&pt.f[0])?;
    let f1 = XLaurent::from_series(&pt.f[1])?;
    let rel = cap as i64 + 2;
    let pi = XLaurent::monomial(LaurentCoeff::pi_pow(pt.f[0].ring, 1), 0);
    let cands = [
        ("pi*f0/f1", pi.mul(&f0)?.mul(&f1.inverse(rel)?)?),
        ("f1/f0", f1.mul(&f0.inverse(rel)?)?),
    ];
    let mut best = CfCrossCheck { convention: None, agree_below: i64::MIN, known_below: cf.prec };
    for (name, r) in cands {
        let agree = agreement(&cf, &r);
        let leading = cf.order() == r.order() && cf.order().map_or(false, |o| cf.terms[&o] == r.terms[&o]);
        if leading && agree > best.agree_below {
            best = CfCrossCheck { convention: Some(name), agree_below: agree, known_below: cf.prec.min(r.prec) };
        }
    }
    Ok(best)
}

/// Exponent below which two series agree termwise.
fn agreement(a: &XLaurent, b: &XLaurent) -> i64 {
    let lim = a.prec.min(b.prec);
    let keys: std::collections::BTreeSet<i64> = a.terms.keys().chain(b.terms.keys()).copied().collect();
    for e in keys {
        if e >= lim {
            break;
        }
        if a.terms.get(&e) != b.terms.get(&e) {
            return e;
        }
    }
    lim
}

/// Point with `v(x_i) = vals[i]`, realized as `x_i = u^{m v_i}` in a ring with `m` the common denominator.
pub fn point_from_vals(p: u64, vals: &[Val], precision: u32) -> Result<Vec<RamifiedElem>> {
    let mut m: i128 = 1;
    for v in vals.iter().filter_map(|v| v.finite()) {
        if v <= qi(0) {
            return Err(Error::Domain(format!("coordinate valuation {v} must be positive")));
        }
        m = m.lcm(v.denom());
    }
    let ring = RamifiedRing::new(p, m as u32, precision)?;
    Ok(vals
        .iter()
        .map(|v| match v.finite() {
            Some(x) => ring.u_pow((x * Q::from_integer(m)).to_integer() as u64),
            None => ring.zero(),
        })
        .collect())
}

/// Valuations of `f_0, .., f_{n-1}` at a point.
pub fn evaluate_periods(pt: &PeriodTuple, point: &[RamifiedElem]) -> Result<Vec<ValReport>> {
    if point.len() + 1 != pt.n {
        return Err(Error::Shape(format!("point of length {} for n = {}", point.len(), pt.n)));
    }
    let ring = point.first().map(|e| e.ring).unwrap_or(pt.f[0].ring);
    for x in point {
        if x.ring != ring {
            return Err(Error::PrecisionMismatch("point coordinates in different rings".into()));
        }
        if let Val::Fin(v) = x.valuation().val {
            if v <= qi(0) {
                return Err(Error::Domain("point coordinates need positive valuation".into()));
            }
        }
    }
    let pl: Vec<LaurentCoeff> = point.iter().map(|x| LaurentCoeff::from_elem(x.clone(), 0)).collect();
    let mut out = Vec::with_capacity(pt.n);
    for s in &pt.f {
        let mut acc = LaurentCoeff::zero(ring);
        let mut any = false;
        for (e, c) in s.terms() {
            let mut t = c.change_ring(ring)?;
            for (x, &k) in pl.iter().zip(e) {
                if k > 0 && x.is_zero() {
                    t = LaurentCoeff::zero(ring);
                    break;
                }
                for _ in 0..k {
                    t = t.checked_mul(x)?;
                }
            }
            any |= !t.is_zero();
            acc = acc.checked_add(&t)?;
        }
        if any && acc.is_zero() {
            return Err(Error::PrecisionExhausted("cancellation consumed all digits".into()));
        }
        out.push(acc.valuation());
    }
    Ok(out)
}

/// `v(f_i / f_0)` for i = 1..n-1, required stable between `depth` and `depth + 1`.
pub fn valuation_identity(n: usize, q: u64, vals: &[Val], depth: u32) -> Result<Vec<Val>> {
    let point = point_from_vals(q, vals, RamifiedRing::max_precision(q))?;
    let mut last: Option<Vec<Val>> = None;
    for d in [depth, depth + 1] {
        let pt = period_series(n, q, d)?;
        let v = evaluate_periods(&pt, &point)?;
        let f0 = v[0].val.finite().ok_or_else(|| Error::PrecisionExhausted("f_0 vanished".into()))?;
        let r: Vec<Val> = v[1..]
            .iter()
            .map(|r| match r.val {
                Val::Fin(x) => Val::Fin(x - f0),
                Val::Inf => Val::Inf,
            })
            .collect();
        if let Some(prev) = &last {
            if prev != &r {
                return Err(Error::PrecisionExhausted(format!("valuations still moving at depth {d}")));
            }
        }
        last = Some(r);
    }
    Ok(last.unwrap())
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodDomains {
    pub source: bool,
    #[serde(serialize_with = "ser_opt_q")]
    pub max_lhs: Option<Q>,
    #[serde(serialize_with = "ser_opt_q")]
    pub min_rhs: Option<Q>,
    pub lhs: Vec<Val>,
    pub rhs: Vec<Val>,
    pub target_witness: Vec<Val>,
}

/// Source-domain test with `x_0 = pi` and `x_n = 1`.
pub fn period_domains(n: usize, q: u64, vals: &[Val]) -> Result<PeriodDomains> {
    if vals.len() + 1 != n {
        return Err(Error::Shape(format!("{} valuations for n = {n}", vals.len())));
    }
    let qn = qpow(q, n as u32);
    let v = |i: usize| -> Val {
        if i == 0 {
            Val::Fin(qi(1))
        } else if i == n {
            Val::Fin(qi(0))
        } else {
            vals[i - 1]
        }
    };
    // Inf on the left means the term is absent, so it is recorded as Inf and skipped.
    let lhs: Vec<Val> = (1..=n)
        .map(|i| match v(i) {
            Val::Fin(x) => Val::Fin((qi(1) - x) / (qn * (qpow(q, i as u32) - qi(1)))),
            Val::Inf => Val::Inf,
        })
        .collect();
    let rhs: Vec<Val> = (0..n).map(|j| v(j).scale(qi(1) / (qn - qpow(q, j as u32)))).collect();
    let max_lhs = lhs.iter().filter_map(|x| x.finite()).max();
    let min_rhs = rhs.iter().filter_map(|x| x.finite()).min();
    let source = match (max_lhs, min_rhs) {
        (Some(a), Some(b)) => a < b,
        _ => true,
    };
    let target_witness = vec![
        max_lhs.map_or(Val::Inf, |x| Val::Fin(x * qn)),
        min_rhs.map_or(Val::Inf, Val::Fin),
    ];
    Ok(PeriodDomains { source, max_lhs, min_rhs, lhs, rhs, target_witness })
}

fn qpow(q: u64, k: u32) -> Q {
    Q::from_integer((q as i128).pow(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valcore::q as qq;

    fn one_var(q: u64, cap: u64, terms: &[(u64, i64)]) -> TruncSeries {
        let ring = default_ring(q).unwrap();
        let mut s = TruncSeries::zero(ring, 1, cap);
        for &(e, k) in terms {
            s = s.add(&TruncSeries::monomial(LaurentCoeff::pi_pow(ring, k), vec![e], cap)).unwrap();
        }
        s
    }

    #[test]
    fn n2_matrices() {
        let d = display_matrices(2, 3, 9).unwrap();
        let ring = default_ring(3).unwrap();
        let x = TruncSeries::var(ring, 1, 9, 1);
        assert_eq!(d.a.get(0, 0), &x);
        assert_eq!(d.a.get(0, 1).constant_term(), LaurentCoeff::pi_pow(ring, 1));
        assert_eq!(d.a.get(1, 0), &TruncSeries::one(ring, 1, 9));
        assert!(d.b.get(0, 0).is_empty());
    }

    #[test]
    fn depth_two_tuple() {
        for q in [2u64, 3, 5] {
            let pt = period_series(2, q, 2).unwrap();
            assert_eq!(pt.f[0], one_var(q, q * q, &[(0, 0), (q + 1, -1)]));
            assert_eq!(pt.f[1], one_var(q, q * q, &[(1, 0)]));
        }
    }

    #[test]
    fn depth_zero_and_one() {
        let pt = period_series(3, 2, 0).unwrap();
        assert_eq!(pt.f[0].len(), 1);
        assert!(pt.f[1].is_empty() && pt.f[2].is_empty());
        let pt = period_series(3, 2, 1).unwrap();
        assert_eq!(pt.f[1].len(), 1);
        assert_eq!(pt.f[1].coeff(&[1, 0]).unwrap(), &LaurentCoeff::one(pt.f[1].ring));
        assert_eq!(pt.f[2].coeff(&[0, 1]).unwrap(), &LaurentCoeff::one(pt.f[1].ring));
    }

    #[test]
    fn cf_small_cases() {
        let r = period_cf2(3, 0, 3).unwrap();
        assert_eq!(r.terms().count(), 1);
        assert_eq!(r.order(), Some(-1));
        let r = period_cf2(3, 1, 9).unwrap();
        let exps: Vec<i64> = r.terms().map(|(e, _)| *e).collect();
        assert_eq!(exps, vec![-1, 3]);
    }

    #[test]
    fn domain_examples() {
        let t = period_domains(2, 3, &[Val::fin(3, 5)]).unwrap();
        assert!(t.source);
        assert_eq!(t.max_lhs, Some(qq(1, 45)));
        assert_eq!(t.min_rhs, Some(qq(1, 10)));
        let t = period_domains(2, 3, &[Val::fin(1, 20)]).unwrap();
        assert!(!t.source);
        assert!(period_domains(3, 2, &[Val::Inf, Val::Inf]).unwrap().source);
    }

    #[test]
    fn evaluate_zero_point() {
        let pt = period_series(2, 3, 2).unwrap();
        let ring = RamifiedRing::new(3, 1, 20).unwrap();
        let v = evaluate_periods(&pt, &[ring.zero()]).unwrap();
        assert_eq!(v[0].val, Val::fin(0, 1));
        assert_eq!(v[1].val, Val::Inf);
    }
}
