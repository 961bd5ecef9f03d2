//! Vertices, edges and simplices of the building of `GL_n x D^*` modulo `pi^Z`, over `Q_p`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::valcore::is_prime;

/// Height shift along an edge to a lattice larger by `i` dimensions is `EDGE_HEIGHT_SIGN * i`.
pub const EDGE_HEIGHT_SIGN: i64 = 1;

pub type Mat = Vec<Vec<BigRational>>;

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| rat((i == j) as i64)).collect()).collect()
}

pub fn from_ints(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(BigRational::zero(), |s, l| s + &a[i][l] * &b[l][j])).collect())
        .collect()
}

pub fn mat_scale(a: &Mat, c: &BigRational) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn mat_inv(a: &Mat) -> Result<Mat> {
    let n = a.len();
    let mut m: Mat = a.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero()).ok_or(Error::Singular)?;
        m.swap(c, piv);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let row_c = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(row_c) {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn p_pow(p: u64, k: i64) -> BigRational {
    let b = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

fn vp_int(x: &BigInt, p: &BigInt) -> i64 {
    let mut x = x.clone();
    let mut k = 0;
    while (&x % p).is_zero() {
        x /= p;
        k += 1;
    }
    k
}

/// `v_p`; `None` for zero.
pub fn vp_rat(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    Some(vp_int(x.numer(), &pb) - vp_int(x.denom(), &pb))
}

/// Reduction of a `p`-integral rational modulo `p`.
pub fn mod_p(x: &BigRational, p: u64) -> Result<u64> {
    if vp_rat(x, p).is_some_and(|v| v < 0) {
        return Err(Error::NonIntegral(format!("{x} is not {p}-integral")));
    }
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb);
    let den = x.denom().mod_floor(&pb);
    let inv = den.modpow(&(&pb - 2u32), &pb);
    Ok((num * inv).mod_floor(&pb).to_u64().unwrap())
}

/// Representative of `x` modulo `p^a Z_(p)` in `Z[1/p] ∩ [0, p^a)`.
fn reduce_mod_ppow(x: &BigRational, p: u64, a: i64) -> BigRational {
    let v = match vp_rat(x, p) {
        None => return BigRational::zero(),
        Some(v) if v >= a => return BigRational::zero(),
        Some(v) => v,
    };
    let s = (-v).max(0);
    let y = x * p_pow(p, s);
    let m = BigInt::from(p).pow((a + s) as u32);
    let num = y.numer().mod_floor(&m);
    let den = y.denom().mod_floor(&m);
    let inv = den.extended_gcd(&m).x.mod_floor(&m);
    BigRational::new((num * inv).mod_floor(&m), BigInt::one()) / p_pow(p, s)
}

/// Column Hermite normal form over `Z_(p)` of the lattice spanned by the columns of `gens` (n x m).
fn hnf(p: u64, gens: &Mat) -> Result<(Mat, Vec<i64>)> {
    let n = gens.len();
    let m = gens.first().map_or(0, |r| r.len());
    let mut cols: Vec<Vec<BigRational>> = (0..m).map(|j| (0..n).map(|i| gens[i][j].clone()).collect()).collect();
    let mut out: Vec<Vec<BigRational>> = vec![vec![]; n];
    let mut pivots = vec![0i64; n];
    for r in (0..n).rev() {
        let best = cols
            .iter()
            .enumerate()
            .filter_map(|(k, c)| vp_rat(&c[r], p).map(|v| (v, k)))
            .min()
            .ok_or(Error::Singular)?;
        let (a, k) = best;
        let mut pc = cols.swap_remove(k);
        let unit = &pc[r] / p_pow(p, a);
        for x in pc.iter_mut() {
            *x /= &unit;
        }
        for c in cols.iter_mut() {
            if !c[r].is_zero() {
                let f = &c[r] / &pc[r];
                for (x, y) in c.iter_mut().zip(&pc) {
                    *x -= &f * y;
                }
            }
        }
        pivots[r] = a;
        out[r] = pc;
    }
    for j in 0..n {
        for i in (0..j).rev() {
            let x = out[j][i].clone();
            let rep = reduce_mod_ppow(&x, p, pivots[i]);
            if rep != x {
                let k = (x - rep) / p_pow(p, pivots[i]);
                let ci = out[i].clone();
                for (y, z) in out[j].iter_mut().zip(ci) {
                    *y -= &k * z;
                }
            }
        }
    }
    let basis = (0..n).map(|i| (0..n).map(|j| out[j][i].clone()).collect()).collect();
    Ok((basis, pivots))
}

/// A full-rank `Z_p`-lattice in `Q_p^n`, basis in canonical column HNF.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lattice {
    pub n: usize,
    pub p: u64,
    pub basis: Mat,
}

impl Lattice {
    pub fn new(p: u64, gens: &Mat) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let (basis, _) = hnf(p, gens)?;
        Ok(Lattice { n: gens.len(), p, basis })
    }

    pub fn standard(n: usize, p: u64) -> Self {
        Lattice { n, p, basis: identity(n) }
    }

    pub fn pivots(&self) -> Vec<i64> {
        (0..self.n).map(|i| vp_rat(&self.basis[i][i], self.p).unwrap()).collect()
    }

    pub fn det_val(&self) -> i64 {
        self.pivots().iter().sum()
    }

    /// `p^k L`.
    pub fn scaled(&self, k: i64) -> Lattice {
        Lattice { n: self.n, p: self.p, basis: mat_scale(&self.basis, &p_pow(self.p, k)) }
    }

    /// `g L`.
    pub fn transform(&self, g: &Mat) -> Result<Lattice> {
        Lattice::new(self.p, &mat_mul(g, &self.basis))
    }

    /// Coordinates of `other`'s basis in this basis.
    pub fn coords(&self, other: &Lattice) -> Result<Mat> {
        Ok(mat_mul(&mat_inv(&self.basis)?, &other.basis))
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        self.coords(other)
            .map(|t| t.iter().flatten().all(|x| vp_rat(x, self.p).is_none_or(|v| v >= 0)))
            .unwrap_or(false)
    }

    /// Lattice spanned by `L` and `p^shift B w` for each vector `w` (coordinates in this basis).
    pub fn extend(&self, shift: i64, vecs: &[Vec<u64>]) -> Result<Lattice> {
        let n = self.n;
        let c = p_pow(self.p, shift);
        let mut gens: Mat = self.basis.clone();
        for w in vecs {
            for (i, row) in gens.iter_mut().enumerate() {
                let s = (0..n).fold(BigRational::zero(), |s, j| s + &self.basis[i][j] * rat(w[j] as i64));
                row.push(s * &c);
            }
        }
        Lattice::new(self.p, &gens)
    }

    /// `pi L + span(B w)`.
    pub fn sub_from(&self, vecs: &[Vec<u64>]) -> Result<Lattice> {
        let mut gens: Mat = mat_scale(&self.basis, &rat(self.p as i64));
        for w in vecs {
            for (i, row) in gens.iter_mut().enumerate() {
                row.push((0..self.n).fold(BigRational::zero(), |s, j| s + &self.basis[i][j] * rat(w[j] as i64)));
            }
        }
        Lattice::new(self.p, &gens)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let off: Vec<Vec<String>> =
            (0..self.n).map(|i| (i + 1..self.n).map(|j| self.basis[i][j].to_string()).collect()).collect();
        json!({ "pivots": self.pivots(), "off_diagonal": off })
    }
}

/// A vertex `[L, Pi^h O_D]`, normalized with `det_val(L)` in `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BuildingVertex {
    pub lat: Lattice,
    pub h: i64,
}

impl BuildingVertex {
    pub fn standard(n: usize, p: u64) -> Self {
        BuildingVertex { lat: Lattice::standard(n, p), h: 0 }
    }

    pub fn from_lattice(lat: Lattice, h: i64) -> Self {
        let n = lat.n as i64;
        let t = lat.det_val().div_euclid(n);
        BuildingVertex { lat: lat.scaled(-t), h: h + t * n }
    }

    pub fn n(&self) -> usize {
        self.lat.n
    }

    pub fn p(&self) -> u64 {
        self.lat.p
    }

    /// `(L, h) ~ (pi L, h - n)`, quantity preserved by edges.
    pub fn charge(&self) -> i64 {
        self.lat.det_val() + EDGE_HEIGHT_SIGN * self.h
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.lat.to_json();
        v["h"] = json!(self.h);
        v
    }

    pub fn label(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n() {
            if i > 0 {
                s.push(';');
            }
            for j in 0..self.n() {
                if j > 0 {
                    s.push(',');
                }
                write!(s, "{}", self.lat.basis[i][j]).unwrap();
            }
        }
        format!("[{s}] h={}", self.h)
    }
}

pub fn canonicalize(p: u64, raw: &Mat, h: i64) -> Result<BuildingVertex> {
    Ok(BuildingVertex::from_lattice(Lattice::new(p, raw)?, h))
}

/// All proper nonzero subspaces of `F_p^n` in reduced row echelon form, by dimension.
pub fn subspaces(n: usize, p: u64, dim: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for pivots in combinations(n, dim) {
        let free: Vec<(usize, usize)> = (0..dim)
            .flat_map(|r| (pivots[r] + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let total = (p as u128).pow(free.len() as u32);
        for code in 0..total {
            let mut m = vec![vec![0u64; n]; dim];
            for (r, &c) in pivots.iter().enumerate() {
                m[r][c] = 1;
            }
            let mut k = code;
            for &(r, c) in &free {
                m[r][c] = (k % p as u128) as u64;
                k /= p as u128;
            }
            out.push(m);
        }
    }
    out
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in combinations(n - first - 1, k - 1) {
            let mut v = vec![first];
            v.extend(rest.into_iter().map(|x| x + first + 1));
            out.push(v);
        }
    }
    out
}

/// Edges `a' -> a` with `pi L < L' < L`; `i = dim L/L'`.
pub fn out_edges(a: &BuildingVertex) -> Result<Vec<(BuildingVertex, usize)>> {
    let n = a.n();
    let mut out = Vec::new();
    for w in 1..n {
        for sub in subspaces(n, a.p(), w) {
            let l = a.lat.sub_from(&sub)?;
            let i = n - w;
            out.push((BuildingVertex::from_lattice(l, a.h - EDGE_HEIGHT_SIGN * i as i64), i));
        }
    }
    Ok(out)
}

/// Edges `a -> a''` with `L < L'' < pi^{-1} L`; `i = dim L''/L`.
pub fn up_edges(a: &BuildingVertex) -> Result<Vec<(BuildingVertex, usize)>> {
    let n = a.n();
    let mut out = Vec::new();
    for i in 1..n {
        for sub in subspaces(n, a.p(), i) {
            let l = a.lat.extend(-1, &sub)?;
            out.push((BuildingVertex::from_lattice(l, a.h + EDGE_HEIGHT_SIGN * i as i64), i));
        }
    }
    Ok(out)
}

/// `[g^{-1} L, h + d]`.
pub fn act(g: &Mat, d: i64, a: &BuildingVertex) -> Result<BuildingVertex> {
    let gi = mat_inv(g)?;
    Ok(BuildingVertex::from_lattice(a.lat.transform(&gi)?, a.h + d))
}

pub fn descent(a: &BuildingVertex) -> BuildingVertex {
    BuildingVertex { lat: a.lat.clone(), h: a.h - 1 }
}

pub fn ball(a: &BuildingVertex, r: usize) -> Result<BTreeSet<BuildingVertex>> {
    let mut seen = BTreeSet::from([a.clone()]);
    let mut queue = VecDeque::from([(a.clone(), 0usize)]);
    while let Some((v, d)) = queue.pop_front() {
        if d == r {
            continue;
        }
        for (w, _) in out_edges(&v)? {
            if seen.insert(w.clone()) {
                queue.push_back((w, d + 1));
            }
        }
    }
    Ok(seen)
}

/// Sphere sizes of a ball.
pub fn ball_layers(a: &BuildingVertex, r: usize) -> Result<Vec<usize>> {
    let mut dist = BTreeMap::from([(a.clone(), 0usize)]);
    let mut queue = VecDeque::from([a.clone()]);
    let mut layers = vec![1];
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == r {
            continue;
        }
        for (w, _) in out_edges(&v)? {
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                if layers.len() <= d + 1 {
                    layers.push(0);
                }
                layers[d + 1] += 1;
                queue.push_back(w);
            }
        }
    }
    Ok(layers)
}

pub fn ball_dot(vs: &BTreeSet<BuildingVertex>) -> Result<String> {
    let idx: BTreeMap<&BuildingVertex, usize> = vs.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut s = String::from("digraph building {\n");
    for (v, i) in &idx {
        writeln!(s, "  v{i} [label=\"{}\"];", v.label()).unwrap();
    }
    for (v, i) in &idx {
        for (w, d) in out_edges(v)? {
            if let Some(j) = idx.get(&w) {
                writeln!(s, "  v{j} -> v{i} [label=\"{d}\"];").unwrap();
            }
        }
    }
    s.push_str("}\n");
    Ok(s)
}

/// Chain `L_0 < L_1 < ... < L_r < pi^{-1} L_0` with height `h0` at `L_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSimplex {
    pub chain: Vec<Lattice>,
    pub h0: i64,
}

impl OrientedSimplex {
    pub fn new(chain: Vec<Lattice>, h0: i64) -> Result<Self> {
        let first = chain.first().ok_or_else(|| Error::Domain("empty chain".into()))?;
        let top = first.scaled(-1);
        for w in chain.windows(2) {
            if !w[1].contains(&w[0]) || w[0] == w[1] {
                return Err(Error::Domain("chain is not strictly increasing".into()));
            }
        }
        for l in &chain {
            if !top.contains(l) || *l == top {
                return Err(Error::Domain("chain leaves pi^-1 L_0".into()));
            }
        }
        Ok(OrientedSimplex { chain, h0 })
    }

    pub fn dims(&self) -> Vec<i64> {
        let d0 = self.chain[0].det_val();
        self.chain.iter().map(|l| d0 - l.det_val()).collect()
    }

    pub fn vertices(&self) -> Vec<BuildingVertex> {
        self.chain
            .iter()
            .zip(self.dims())
            .map(|(l, d)| BuildingVertex::from_lattice(l.clone(), self.h0 + EDGE_HEIGHT_SIGN * d))
            .collect()
    }

    /// Same simplex with `L_0` normalized.
    pub fn canonical(&self) -> OrientedSimplex {
        let n = self.chain[0].n as i64;
        let t = self.chain[0].det_val().div_euclid(n);
        OrientedSimplex { chain: self.chain.iter().map(|l| l.scaled(-t)).collect(), h0: self.h0 + t * n }
    }

    /// `a_i -> ... -> a_r -> a_0 -> ... -> a_{i-1}` via `pi^{-1}` on the wrapped part.
    pub fn rotate(&self, i: usize) -> OrientedSimplex {
        let r1 = self.chain.len();
        let i = i % r1;
        let mut chain: Vec<Lattice> = self.chain[i..].to_vec();
        chain.extend(self.chain[..i].iter().map(|l| l.scaled(-1)));
        let d = self.dims()[i];
        OrientedSimplex { chain, h0: self.h0 + EDGE_HEIGHT_SIGN * d }.canonical()
    }
}

/// Simplex from a vertex and a flag of subspaces of `pi^{-1}L/L`, smallest first.
pub fn simplex_from_flag(a: &BuildingVertex, flag: &[Vec<Vec<u64>>]) -> Result<OrientedSimplex> {
    let mut chain = vec![a.lat.clone()];
    for e in flag {
        chain.push(a.lat.extend(-1, e)?);
    }
    OrientedSimplex::new(chain, a.h)
}

pub fn diag(entries: &[BigRational]) -> Mat {
    let n = entries.len();
    (0..n).map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { BigRational::zero() }).collect()).collect()
}

pub fn pi_scalar(n: usize, p: u64, k: i64) -> Mat {
    diag(&vec![p_pow(p, k); n])
}

pub fn is_integral(m: &Mat, p: u64) -> bool {
    m.iter().flatten().all(|x| vp_rat(x, p).is_none_or(|v| v >= 0))
}

pub fn min_val(m: &Mat, p: u64) -> Option<i64> {
    m.iter().flatten().filter_map(|x| vp_rat(x, p)).min()
}

pub fn abs_max(m: &Mat) -> BigRational {
    m.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
}
