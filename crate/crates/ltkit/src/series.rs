//! Truncated multivariate power series with Laurent coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::valcore::{LaurentCoeff, RamifiedRing};

pub type Exps = Vec<u64>;

/// Series in `x_1..x_nvars`, kept modulo `(x_1^cap, ..., x_nvars^cap)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    pub nvars: usize,
    pub cap: u64,
    pub ring: RamifiedRing,
    coeffs: BTreeMap<Exps, LaurentCoeff>,
}

impl TruncSeries {
    pub fn zero(ring: RamifiedRing, nvars: usize, cap: u64) -> Self {
        TruncSeries { nvars, cap, ring, coeffs: BTreeMap::new() }
    }

    pub fn constant(c: LaurentCoeff, nvars: usize, cap: u64) -> Self {
        let mut s = Self::zero(c.ring(), nvars, cap);
        s.insert(vec![0; nvars], c);
        s
    }

    pub fn one(ring: RamifiedRing, nvars: usize, cap: u64) -> Self {
        Self::constant(LaurentCoeff::one(ring), nvars, cap)
    }

    /// `c * x^e`, dropped if any exponent reaches the cap.
    pub fn monomial(c: LaurentCoeff, e: Exps, cap: u64) -> Self {
        let mut s = Self::zero(c.ring(), e.len(), cap);
        s.insert(e, c);
        s
    }

    /// `x_k` (1-based), or the constant 1 for `k = 0`.
    pub fn var(ring: RamifiedRing, nvars: usize, cap: u64, k: usize) -> Self {
        let mut e = vec![0; nvars];
        if k > 0 {
            e[k - 1] = 1;
        }
        Self::monomial(LaurentCoeff::one(ring), e, cap)
    }

    fn insert(&mut self, e: Exps, c: LaurentCoeff) {
        if c.is_zero() || e.iter().any(|&x| x >= self.cap) {
            return;
        }
        match self.coeffs.remove(&e) {
            Some(old) => {
                let s = old.checked_add(&c).expect("same ring");
                if !s.is_zero() {
                    self.coeffs.insert(e, s);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &LaurentCoeff)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, e: &[u64]) -> Option<&LaurentCoeff> {
        self.coeffs.get(e)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> LaurentCoeff {
        self.coeffs.get(&vec![0; self.nvars]).cloned().unwrap_or_else(|| LaurentCoeff::zero(self.ring))
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars || self.cap != o.cap || self.ring != o.ring {
            return Err(Error::Shape(format!(
                "series ({}, cap {}) vs ({}, cap {})",
                self.nvars, self.cap, o.nvars, o.cap
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut s = self.clone();
        for (e, c) in &o.coeffs {
            s.insert(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.values_mut() {
            *c = c.neg();
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut s = Self::zero(self.ring, self.nvars, self.cap);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &o.coeffs {
                let e: Exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if e.iter().any(|&x| x >= self.cap) {
                    continue;
                }
                s.insert(e, ca.checked_mul(cb)?);
            }
        }
        Ok(s)
    }

    pub fn scale(&self, c: &LaurentCoeff) -> Self {
        let mut s = Self::zero(self.ring, self.nvars, self.cap);
        for (e, a) in &self.coeffs {
            s.insert(e.clone(), a.checked_mul(c).expect("same ring"));
        }
        s
    }

    /// Multiply by `c * x^e`.
    pub fn mul_monomial(&self, c: &LaurentCoeff, e: &[u64]) -> Self {
        let mut s = Self::zero(self.ring, self.nvars, self.cap);
        for (ea, a) in &self.coeffs {
            let ee: Exps = ea.iter().zip(e).map(|(x, y)| x + y).collect();
            s.insert(ee, a.checked_mul(c).expect("same ring"));
        }
        s
    }

    /// Substitute `x_k -> x_k^(q^i)`.
    pub fn frobenius_twist(&self, q: u64, i: u32) -> Self {
        let mut s = Self::zero(self.ring, self.nvars, self.cap);
        let f = q.checked_pow(i);
        for (e, c) in &self.coeffs {
            let ee: Option<Exps> = e
                .iter()
                .map(|&x| if x == 0 { Some(0) } else { f.and_then(|f| f.checked_mul(x)) })
                .collect();
            if let Some(ee) = ee {
                s.insert(ee, c.clone());
            }
        }
        s
    }

    /// Change the cap, dropping terms beyond a smaller one.
    pub fn with_cap(&self, cap: u64) -> Self {
        let mut s = Self::zero(self.ring, self.nvars, cap);
        for (e, c) in &self.coeffs {
            s.insert(e.clone(), c.clone());
        }
        s
    }

    /// Smallest pi exponent among coefficients.
    pub fn min_pi_exponent(&self) -> Option<i64> {
        self.coeffs.values().map(|c| c.pi_exponent).min()
    }

    /// Evaluate at a point given as Laurent coefficients.
    pub fn evaluate(&self, point: &[LaurentCoeff]) -> Result<LaurentCoeff> {
        if point.len() != self.nvars {
            return Err(Error::Shape(format!("point of length {} for {} variables", point.len(), self.nvars)));
        }
        let mut acc = LaurentCoeff::zero(self.ring);
        for (e, c) in &self.coeffs {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t.checked_mul(x)?;
                }
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Canonical sorted-monomial JSON.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .coeffs
            .iter()
            .map(|(e, c)| json!({"exps": e, "pi_exponent": c.pi_exponent, "digits": c.digit_string()}))
            .collect();
        json!({"nvars": self.nvars, "cap": self.cap, "p": self.ring.p, "terms": terms})
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*x{}", k + 1)?,
                    _ => write!(f, "*x{}^{}", k + 1, x)?,
                }
            }
        }
        Ok(())
    }
}

/// Rectangular matrix of series sharing `(nvars, cap)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<TruncSeries>>,
}

impl SeriesMatrix {
    pub fn new(entries: Vec<Vec<TruncSeries>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged matrix".into()));
        }
        let all: Vec<&TruncSeries> = entries.iter().flatten().collect();
        if let Some(f) = all.first() {
            for s in &all {
                f.check(s)?;
            }
        }
        Ok(SeriesMatrix { rows, cols, entries })
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncSeries {
        &self.entries[i][j]
    }

    pub fn mul(&self, o: &SeriesMatrix) -> Result<SeriesMatrix> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            out.push(row_times_matrix(&self.entries[i], o)?);
        }
        SeriesMatrix::new(out)
    }

    pub fn frobenius_twist(&self, q: u64, i: u32) -> SeriesMatrix {
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|r| r.iter().map(|s| s.frobenius_twist(q, i)).collect()).collect(),
        }
    }

    pub fn with_cap(&self, cap: u64) -> SeriesMatrix {
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|r| r.iter().map(|s| s.with_cap(cap)).collect()).collect(),
        }
    }
}

pub fn row_times_matrix(v: &[TruncSeries], m: &SeriesMatrix) -> Result<Vec<TruncSeries>> {
    if v.len() != m.rows {
        return Err(Error::Shape(format!("row of length {} times {}x{}", v.len(), m.rows, m.cols)));
    }
    let first = v.first().ok_or_else(|| Error::Shape("empty row".into()))?;
    let mut out = Vec::with_capacity(m.cols);
    for j in 0..m.cols {
        let mut acc = TruncSeries::zero(first.ring, first.nvars, first.cap);
        for (i, vi) in v.iter().enumerate() {
            if vi.is_empty() || m.entries[i][j].is_empty() {
                continue;
            }
            acc = acc.add(&vi.mul(&m.entries[i][j])?)?;
        }
        out.push(acc);
    }
    Ok(out)
}
