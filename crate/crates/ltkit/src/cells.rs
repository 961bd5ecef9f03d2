//! Cells attached to building vertices, their boundary strata, gluing along edges and the
//! assembled complex; plus integral generators of the polygon constraints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_integer::Integer;
use serde_json::json;

use crate::building::{
    act, min_val, mat_inv, mat_mul, mod_p, subspaces, BuildingVertex, Lattice, Mat, OrientedSimplex, EDGE_HEIGHT_SIGN,
};
use crate::error::{Error, Result};
use crate::hecke::canonical_quotient;
use crate::polygon::{reference_polygon, NewtonPolygon};
use crate::valcore::{q_json, Q};

pub type FpMat = Vec<Vec<u64>>;

/// Reduced row echelon form over `F_p`, zero rows dropped.
pub fn rref(rows: &[Vec<u64>], p: u64) -> FpMat {
    let mut m: FpMat = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&k| m[k][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for k in 0..m.len() {
            if k != r && m[k][c] != 0 {
                let f = m[k][c];
                let row = m[r].clone();
                for (x, y) in m[k].iter_mut().zip(row) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(p as i64));
    e.x.rem_euclid(p as i64) as u64
}

pub fn transpose(m: &FpMat) -> FpMat {
    let c = m.first().map_or(0, |r| r.len());
    (0..c).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn fp_mul(a: &FpMat, b: &FpMat, p: u64) -> FpMat {
    let k = b.len();
    let c = b.first().map_or(0, |r| r.len());
    a.iter().map(|r| (0..c).map(|j| (0..k).map(|l| r[l] * b[l][j] % p).sum::<u64>() % p).collect()).collect()
}

/// Echelon form of the span of `m`'s columns.
pub fn column_space(m: &FpMat, p: u64) -> FpMat {
    rref(&transpose(m), p)
}

fn reduce_mat(m: &Mat, p: u64) -> Result<FpMat> {
    m.iter().map(|r| r.iter().map(|x| mod_p(x, p)).collect()).collect()
}

pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for j in 0..k {
        num *= q.pow(n - j) - 1;
        den *= q.pow(j + 1) - 1;
    }
    num / den
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub vertex: BuildingVertex,
    pub level: u32,
}

impl Cell {
    pub fn new(vertex: BuildingVertex, level: u32) -> Self {
        Cell { vertex, level }
    }

    /// The Gross-Hopkins bound `v(x_i) >= 1 - i/n`.
    pub fn constraint(&self) -> Result<NewtonPolygon> {
        reference_polygon(self.vertex.n(), self.vertex.p())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "vertex": self.vertex.to_json(), "level": self.level })
    }
}

/// Stratum `d_{i,E}` of a cell, `E` in `pi^{-1}L/L` with coordinates in the HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoundaryComponent {
    pub cell: Cell,
    pub i: usize,
    pub e: FpMat,
}

impl BoundaryComponent {
    pub fn new(cell: Cell, e: FpMat) -> Result<Self> {
        let n = cell.vertex.n();
        let p = cell.vertex.p();
        let e = rref(&e, p);
        if e.is_empty() || e.len() >= n || e.iter().any(|r| r.len() != n) {
            return Err(Error::Domain(format!("subspace of dimension {} is not proper in F_{p}^{n}", e.len())));
        }
        Ok(BoundaryComponent { i: e.len(), cell, e })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "vertex": self.cell.vertex.to_json(), "i": self.i, "E": self.e })
    }

    pub fn label(&self) -> String {
        let rows: Vec<String> =
            self.e.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("")).collect();
        format!("d{}[{}]", self.i, rows.join(","))
    }
}

fn check_level(c: &Cell) -> Result<()> {
    if c.level == 0 {
        return Err(Error::Level(0, "boundary strata need level at least 1".into()));
    }
    Ok(())
}

pub fn boundary_components(c: &Cell, i: usize) -> Result<Vec<BoundaryComponent>> {
    check_level(c)?;
    let n = c.vertex.n();
    if i == 0 || i >= n {
        return Err(Error::Domain(format!("rank {i} outside 1..{}", n - 1)));
    }
    subspaces(n, c.vertex.p(), i)
        .into_iter()
        .map(|e| Ok(BoundaryComponent { cell: c.clone(), i, e }))
        .collect()
}

fn contained(small: &FpMat, big: &FpMat, p: u64) -> bool {
    let mut all = big.clone();
    all.extend(small.iter().cloned());
    rref(&all, p).len() == big.len()
}

/// Flags `E_1 < E_2 < ...` with the given strictly increasing dimensions.
pub fn flag_components(c: &Cell, dims: &[usize]) -> Result<Vec<Vec<FpMat>>> {
    check_level(c)?;
    let n = c.vertex.n();
    let p = c.vertex.p();
    if dims.is_empty() || dims.windows(2).any(|w| w[0] >= w[1]) || dims[0] == 0 || *dims.last().unwrap() >= n {
        return Err(Error::Domain(format!("flag type {dims:?} is not strictly increasing inside 1..{}", n - 1)));
    }
    let mut flags: Vec<Vec<FpMat>> = vec![vec![]];
    for &d in dims {
        let subs = subspaces(n, p, d);
        let mut next = Vec::new();
        for f in &flags {
            for s in &subs {
                if f.last().is_none_or(|prev| contained(prev, s, p)) {
                    let mut g = f.clone();
                    g.push(s.clone());
                    next.push(g);
                }
            }
        }
        flags = next;
    }
    Ok(flags)
}

/// Reduction mod `p` of the change of basis from `from` into `to`, for `from <= to`.
pub fn relabel_matrix(from: &Lattice, to: &Lattice) -> Result<FpMat> {
    reduce_mat(&to.coords(from)?, from.p)
}

/// Whether `Id + pi^m End(from)` lies in `Id + pi End(to)`.
pub fn congruence_contained(m: u32, from: &Lattice, to: &Lattice) -> Result<bool> {
    let t = from.coords(to)?;
    let ti = mat_inv(&t)?;
    let p = from.p;
    Ok(m as i64 - 1 + min_val(&t, p).unwrap() + min_val(&ti, p).unwrap() >= 0)
}

/// Raw lattice `p^{-1}(E)` for a component.
pub fn edge_lattice(b: &BoundaryComponent) -> Result<Lattice> {
    b.cell.vertex.lat.extend(-1, &b.e)
}

/// Component glued to `b` along the quotient by `E`.
pub fn glue_edge(b: &BoundaryComponent) -> Result<BoundaryComponent> {
    let lat = &b.cell.vertex.lat;
    let m = b.cell.level;
    let le = edge_lattice(b)?;
    if !congruence_contained(m, lat, lat)? || !congruence_contained(m, lat, &le)? {
        return Err(Error::Level(m, "congruence subgroup is not inside the target stabilizer condition".into()));
    }
    let r = relabel_matrix(lat, &le)?;
    let target = BuildingVertex::from_lattice(le, b.cell.vertex.h + EDGE_HEIGHT_SIGN * b.i as i64);
    let e = column_space(&r, lat.p);
    Ok(BoundaryComponent { i: e.len(), cell: Cell::new(target, m), e })
}

/// Image of a polygon of `d_i D` under the gluing, checked to land in `d_{n-i} D`.
pub fn glue_polygon(b: &BoundaryComponent, poly: &NewtonPolygon) -> Result<NewtonPolygon> {
    let n = b.cell.vertex.n();
    if !poly.in_gross_hopkins() || !poly.boundary_indices().contains(&b.i) {
        return Err(Error::Domain(format!("polygon is not on the rank-{} boundary", b.i)));
    }
    let img = canonical_quotient(poly, b.i)?.image;
    if !img.in_gross_hopkins() || !img.boundary_indices().contains(&(n - b.i)) {
        return Err(Error::Domain("glued polygon left the opposite boundary".into()));
    }
    Ok(img)
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    pub x0: Vec<Cell>,
    pub x1: Vec<BoundaryComponent>,
    pub faces: Vec<(usize, usize)>,
    pub partner: Vec<usize>,
    pub dangling: Vec<BoundaryComponent>,
    index: BTreeMap<BuildingVertex, usize>,
}

impl CellComplex {
    pub fn contains(&self, v: &BuildingVertex) -> bool {
        self.index.contains_key(v)
    }

    pub fn level(&self) -> u32 {
        self.x0.first().map_or(0, |c| c.level)
    }

    pub fn is_involutive(&self) -> bool {
        self.partner.iter().enumerate().all(|(k, &j)| self.partner[j] == k && self.faces[j] == (self.faces[k].1, self.faces[k].0))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "cells": self.x0.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "edges": self.x1.iter().enumerate().map(|(k, b)| json!({
                "component": b.label(),
                "source": self.faces[k].0,
                "target": self.faces[k].1,
                "partner": self.partner[k],
            })).collect::<Vec<_>>(),
            "dangling": self.dangling.len(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph cells {\n");
        for (k, c) in self.x0.iter().enumerate() {
            writeln!(s, "  c{k} [label=\"{}\"];", c.vertex.label()).unwrap();
        }
        for (k, b) in self.x1.iter().enumerate() {
            let (a, t) = self.faces[k];
            writeln!(s, "  c{a} -> c{t} [label=\"{}\"];", b.label()).unwrap();
        }
        s.push_str("}\n");
        s
    }
}

pub fn assemble_complex(a: &BTreeSet<BuildingVertex>, level: u32) -> Result<CellComplex> {
    let x0: Vec<Cell> = a.iter().map(|v| Cell::new(v.clone(), level)).collect();
    let index: BTreeMap<BuildingVertex, usize> = a.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut x1 = Vec::new();
    let mut faces = Vec::new();
    let mut dangling = Vec::new();
    for (k, c) in x0.iter().enumerate() {
        for i in 1..c.vertex.n() {
            for b in boundary_components(c, i)? {
                let g = glue_edge(&b)?;
                match index.get(&g.cell.vertex) {
                    Some(&t) => {
                        x1.push(b);
                        faces.push((k, t));
                    }
                    None => dangling.push(b),
                }
            }
        }
    }
    let pos: BTreeMap<(usize, FpMat), usize> =
        x1.iter().enumerate().map(|(k, b)| ((faces[k].0, b.e.clone()), k)).collect();
    let mut partner = Vec::with_capacity(x1.len());
    for (k, b) in x1.iter().enumerate() {
        let g = glue_edge(b)?;
        let j = pos
            .get(&(faces[k].1, g.e.clone()))
            .ok_or_else(|| Error::MissingVertex(format!("partner of {} not assembled", b.label())))?;
        partner.push(*j);
    }
    Ok(CellComplex { x0, x1, faces, partner, dangling, index })
}

/// Component `(g . a, E)` with `E` rewritten in the HNF basis of `g^{-1} L`.
pub fn transport_component(g: &Mat, d: i64, b: &BoundaryComponent) -> Result<BoundaryComponent> {
    let v = &b.cell.vertex;
    let p = v.p();
    let gi = mat_inv(g)?;
    let moved = mat_mul(&gi, &v.lat.basis);
    let target = act(g, d, v)?;
    let u = reduce_mat(&mat_mul(&mat_inv(&target.lat.basis)?, &moved), p)?;
    let e = column_space(&fp_mul(&u, &transpose(&b.e), p), p);
    Ok(BoundaryComponent { cell: Cell::new(target, b.cell.level), i: e.len(), e })
}

/// Transport of the complex on `A` equals the complex on `g.A`, faces included.
pub fn equivariance_check(a: &BTreeSet<BuildingVertex>, level: u32, g: &Mat, d: i64) -> Result<bool> {
    let c1 = assemble_complex(a, level)?;
    let ga: BTreeSet<BuildingVertex> = a.iter().map(|v| act(g, d, v)).collect::<Result<_>>()?;
    let c2 = assemble_complex(&ga, level)?;
    if c1.x1.len() != c2.x1.len() || c1.dangling.len() != c2.dangling.len() {
        return Ok(false);
    }
    let edges2: BTreeSet<(BuildingVertex, BuildingVertex, FpMat)> = (0..c2.x1.len())
        .map(|k| (c2.x0[c2.faces[k].0].vertex.clone(), c2.x0[c2.faces[k].1].vertex.clone(), c2.x1[k].e.clone()))
        .collect();
    for (k, b) in c1.x1.iter().enumerate() {
        let t = transport_component(g, d, b)?;
        let tgt = act(g, d, &c1.x0[c1.faces[k].1].vertex)?;
        if !edges2.contains(&(t.cell.vertex, tgt, t.e)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct CocycleReport {
    pub holds: bool,
    pub composite: FpMat,
    pub direct: FpMat,
}

/// Composite relabeling through the middle vertex against the direct one, for `L_0 < L_1 < L_2`.
pub fn cocycle_check(cx: &CellComplex, tri: &OrientedSimplex) -> Result<bool> {
    Ok(cocycle_report(cx, tri, false)?.holds)
}

/// `corrupt` perturbs the first relabeling by a rank-one term that survives the second one.
pub fn cocycle_report(cx: &CellComplex, tri: &OrientedSimplex, corrupt: bool) -> Result<CocycleReport> {
    if tri.chain.len() != 3 {
        return Err(Error::Domain("cocycle check needs a 2-simplex".into()));
    }
    let vs = tri.vertices();
    for v in &vs {
        if !cx.contains(v) {
            return Err(Error::MissingVertex(v.label()));
        }
    }
    let (l0, l1, l2) = (&tri.chain[0], &tri.chain[1], &tri.chain[2]);
    let p = l0.p;
    let n = l0.n;
    let mut r01 = relabel_matrix(l0, l1)?;
    let r12 = relabel_matrix(l1, l2)?;
    let r02 = relabel_matrix(l0, l2)?;
    if corrupt {
        if let Some(k) = (0..n).find(|&k| r12.iter().any(|row| row[k] != 0)) {
            r01[k][0] = (r01[k][0] + 1) % p;
        }
    }
    let composite = fp_mul(&r12, &r01, p);
    let dims = tri.dims();
    let level = cx.level();
    let e1 = BoundaryComponent { cell: Cell::new(vs[0].clone(), level), i: dims[1] as usize, e: column_space(&lift_rows(l0, l1)?, p) };
    let e2 = BoundaryComponent { cell: Cell::new(vs[0].clone(), level), i: dims[2] as usize, e: column_space(&lift_rows(l0, l2)?, p) };
    let direct_target = glue_edge(&e2)?;
    let step_target = glue_edge(&e1)?;
    let heights = step_target.cell.vertex == vs[1] && direct_target.cell.vertex == vs[2];
    let images = column_space(&composite, p) == column_space(&r02, p);
    Ok(CocycleReport { holds: heights && images && composite == r02, composite, direct: r02 })
}

/// Coordinates of `big/small` inside `pi^{-1} small / small`, as columns.
fn lift_rows(small: &Lattice, big: &Lattice) -> Result<FpMat> {
    let t = small.coords(big)?;
    let scaled: Mat = t.iter().map(|r| r.iter().map(|x| x * crate::building::rat(small.p as i64)).collect()).collect();
    reduce_mat(&scaled, small.p)
}

/// All 2-simplices `a -> a' -> a''` starting inside `A`, from flags of `pi^{-1}L/L`.
pub fn triangles_at(a: &BuildingVertex) -> Result<Vec<OrientedSimplex>> {
    let n = a.n();
    let p = a.p();
    let mut out = Vec::new();
    for d1 in 1..n {
        for d2 in d1 + 1..n {
            for e2 in subspaces(n, p, d2) {
                for e1 in subspaces(n, p, d1) {
                    if contained(&e1, &e2, p) {
                        out.push(crate::building::simplex_from_flag(a, &[e1, e2.clone()])?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Orbits of boundary lines of an `n = 2` cell under the image of `Stab_K(sigma)` in `GL_2(F_p)`.
/// `level = 0` means `K = GL(L)`; `edge` restricts to the stabilizer of that line.
pub fn crushed_orbits(v: &BuildingVertex, level: u32, edge: Option<&FpMat>) -> Result<Vec<Vec<FpMat>>> {
    if v.n() != 2 {
        return Err(Error::Domain("crushed orbits are only tracked for n = 2".into()));
    }
    let p = v.p();
    let lines = subspaces(2, p, 1);
    let mut group: Vec<FpMat> = Vec::new();
    if level == 0 {
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - b * c % p) % p != 0 {
                            group.push(vec![vec![a, b], vec![c, d]]);
                        }
                    }
                }
            }
        }
    } else {
        group.push(vec![vec![1, 0], vec![0, 1]]);
    }
    if let Some(e) = edge {
        let e = rref(e, p);
        group.retain(|g| column_space(&fp_mul(g, &transpose(&e), p), p) == e);
    }
    let mut seen: BTreeSet<FpMat> = BTreeSet::new();
    let mut orbits = Vec::new();
    for l in &lines {
        if seen.contains(l) {
            continue;
        }
        let orbit: BTreeSet<FpMat> = group.iter().map(|g| column_space(&fp_mul(g, &transpose(l), p), p)).collect();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit.into_iter().collect());
    }
    Ok(orbits)
}

/// Monomials `x^e / pi^k` for `k = 1..a`, `e = ceil(k b / a)`, where `alpha = a/b`.
pub fn generators_for(alpha: Q) -> Result<Vec<(u64, u64)>> {
    if alpha <= Q::from_integer(0) || alpha >= Q::from_integer(1) {
        return Err(Error::Domain(format!("exponent {alpha} outside (0, 1)")));
    }
    let (a, b) = (*alpha.numer(), *alpha.denom());
    Ok((1..=a).map(|k| (Integer::div_ceil(&(k * b), &a) as u64, k as u64)).collect())
}

pub fn integral_generators(n: usize, i: usize) -> Result<Vec<(u64, u64)>> {
    if n < 2 || i == 0 || i >= n {
        return Err(Error::Domain(format!("need 1 <= i < n, got i = {i}, n = {n}")));
    }
    generators_for(Q::new((n - i) as i128, n as i128))
}

#[derive(Clone, Debug)]
pub struct ConstraintModel {
    pub alpha: Q,
    pub generators: Vec<(u64, u64)>,
    pub nonnegative: bool,
    pub saturated: bool,
    pub box_size: u64,
}

impl ConstraintModel {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "alpha": q_json(&self.alpha),
            "relation": format!("x^{} = pi^{} T", self.alpha.denom(), self.alpha.numer()),
            "generators": self.generators.iter().map(|(e, k)| format!("x^{e}/pi^{k}")).collect::<Vec<_>>(),
            "nonnegative": self.nonnegative,
            "saturated": self.saturated,
        })
    }
}

/// Largest `k` with `x^e / pi^k` in the monoid generated by `x`, `pi` and `gens`, for `e <= bound`.
pub fn reachable_max(gens: &[(u64, u64)], bound: u64) -> Vec<i64> {
    let mut maxk = vec![i64::MIN; bound as usize + 1];
    maxk[0] = 0;
    let mut all: Vec<(u64, i64)> = vec![(1, 0)];
    all.extend(gens.iter().map(|&(e, k)| (e, k as i64)));
    for e in 1..=bound as usize {
        for &(ge, gk) in &all {
            if ge as usize <= e && maxk[e - ge as usize] != i64::MIN {
                maxk[e] = maxk[e].max(maxk[e - ge as usize] + gk);
            }
        }
    }
    maxk
}

pub fn constraint_model(alphas: &[Q]) -> Result<Vec<ConstraintModel>> {
    alphas
        .iter()
        .map(|&alpha| {
            let generators = generators_for(alpha)?;
            let nonnegative = generators.iter().all(|&(e, k)| alpha * Q::from_integer(e as i128) >= Q::from_integer(k as i128));
            let box_size = 4 * *alpha.denom() as u64 + 8;
            let maxk = reachable_max(&generators, box_size);
            let saturated = maxk
                .iter()
                .enumerate()
                .all(|(e, &k)| k == (alpha * Q::from_integer(e as i128)).floor().to_integer() as i64);
            Ok(ConstraintModel { alpha, generators, nonnegative, saturated, box_size })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::ball;

    fn std_cell(n: usize, p: u64, m: u32) -> Cell {
        Cell::new(BuildingVertex::standard(n, p), m)
    }

    #[test]
    fn component_counts() {
        assert_eq!(boundary_components(&std_cell(2, 3, 1), 1).unwrap().len(), 4);
        assert_eq!(boundary_components(&std_cell(3, 2, 1), 1).unwrap().len(), 7);
        assert!(boundary_components(&std_cell(3, 2, 1), 3).is_err());
        assert!(matches!(boundary_components(&std_cell(3, 2, 0), 1), Err(Error::Level(..))));
        assert_eq!(flag_components(&std_cell(3, 2, 1), &[1, 2]).unwrap().len(), 21);
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
    }

    #[test]
    fn glue_involution() {
        let c = std_cell(2, 3, 2);
        for b in boundary_components(&c, 1).unwrap() {
            let g = glue_edge(&b).unwrap();
            assert_eq!(g.cell.vertex.lat.det_val(), 1);
            assert!(crate::building::out_edges(&c.vertex).unwrap().iter().any(|(v, _)| *v == g.cell.vertex));
            assert_eq!(glue_edge(&g).unwrap(), b);
        }
        let b = &boundary_components(&std_cell(2, 3, 1), 1).unwrap()[0];
        assert!(matches!(glue_edge(b), Err(Error::Level(1, _))));
    }

    #[test]
    fn small_complex() {
        let a = BuildingVertex::standard(2, 3);
        let cx = assemble_complex(&ball(&a, 1).unwrap(), 2).unwrap();
        assert_eq!(cx.x0.len(), 5);
        assert_eq!(cx.x1.len(), 8);
        assert_eq!(cx.dangling.len(), 12);
        assert!(cx.is_involutive());
        let single = assemble_complex(&BTreeSet::from([a]), 2).unwrap();
        assert!(single.x1.is_empty());
    }

    #[test]
    fn cocycles() {
        let a = BuildingVertex::standard(3, 2);
        let cx = assemble_complex(&ball(&a, 2).unwrap(), 2).unwrap();
        let tris = triangles_at(&a).unwrap();
        assert_eq!(tris.len(), 21);
        for t in &tris {
            assert!(cocycle_check(&cx, t).unwrap());
            assert!(!cocycle_report(&cx, t, true).unwrap().holds);
        }
    }

    #[test]
    fn crushed() {
        let v = BuildingVertex::standard(2, 3);
        assert_eq!(crushed_orbits(&v, 0, None).unwrap().len(), 1);
        let e = vec![vec![1, 0]];
        let o = crushed_orbits(&v, 0, Some(&e)).unwrap();
        assert_eq!(o.iter().map(|x| x.len()).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(crushed_orbits(&v, 1, None).unwrap().len(), 4);
    }

    #[test]
    fn generators() {
        assert_eq!(integral_generators(2, 1).unwrap(), vec![(2, 1)]);
        assert_eq!(integral_generators(3, 1).unwrap(), vec![(2, 1), (3, 2)]);
        assert_eq!(integral_generators(4, 2).unwrap(), vec![(2, 1)]);
        let m = constraint_model(&[Q::new(2, 3), Q::new(3, 7)]).unwrap();
        assert!(m.iter().all(|c| c.nonnegative && c.saturated));
        assert!(!constraint_model(&[Q::new(2, 3)]).unwrap()[0].generators.is_empty());
    }
}
