//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ltkit::periods::default_ring;
use ltkit::polygon::NewtonPolygon;
use ltkit::series::TruncSeries;
use ltkit::valcore::{LaurentCoeff, Val, Q};
use num_integer::Integer;
use rand::Rng;

/// Fractions `a/b` in `(0, upper]` with `b <= maxden`.
pub fn farey(maxden: i128, upper: i128) -> Vec<Val> {
    let set: BTreeSet<Q> = (1..=maxden).flat_map(|b| (1..=upper * b).map(move |a| Q::new(a, b))).collect();
    set.into_iter().map(Val::Fin).collect()
}

pub fn farey_with_inf(maxden: i128, upper: i128) -> Vec<Val> {
    let mut v = farey(maxden, upper);
    v.push(Val::Inf);
    v
}

pub fn grid_points(k: usize, pts: &[Val]) -> Vec<Vec<Val>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|p| pts.iter().map(move |x| [p.clone(), vec![*x]].concat())).collect();
    }
    out
}

fn qp(q: u64, k: usize) -> Q {
    Q::from_integer((q as i128).pow(k as u32))
}

/// Lower hull of `(q^i, v_i)` with `v_0 = 1`, `v_n = 0`, evaluated at each `q^i`, by checking every chord.
pub fn hull_values(n: usize, q: u64, vals: &[Val]) -> Vec<Q> {
    let mut pts: Vec<(Q, Q)> = vec![(qp(q, 0), Q::from_integer(1))];
    for (i, v) in vals.iter().enumerate() {
        if let Val::Fin(x) = v {
            pts.push((qp(q, i + 1), *x));
        }
    }
    pts.push((qp(q, n), Q::from_integer(0)));
    (0..=n)
        .map(|i| {
            let x = qp(q, i);
            let mut best: Option<Q> = pts.iter().find(|p| p.0 == x).map(|p| p.1);
            for a in &pts {
                for b in &pts {
                    if a.0 < x && x < b.0 {
                        let y = a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0);
                        best = Some(best.map_or(y, |c| c.min(y)));
                    }
                }
            }
            best.unwrap()
        })
        .collect()
}

pub fn hull_extremes(q: u64, hull: &[Q]) -> (Q, Q) {
    let n = hull.len() - 1;
    ((hull[0] - hull[1]) / (qp(q, 1) - qp(q, 0)), (hull[n - 1] - hull[n]) / (qp(q, n) - qp(q, n - 1)))
}

/// `{q^i lambda_j : j > i}` with multiplicity `(q^j - q^{j-1}) / q^i` and
/// `{lambda_j / q^{n-i} : j <= i}` with multiplicity `(q^j - q^{j-1}) q^{n-i}`, largest value first.
pub fn closed_form(pg: &NewtonPolygon, i: usize) -> Vec<(Q, u128)> {
    let (n, q) = (pg.n, pg.q as u128);
    let mut m: BTreeMap<Q, u128> = BTreeMap::new();
    for j in 1..=n {
        let c = q.pow(j as u32) - q.pow(j as u32 - 1);
        let lam = pg.slopes[j - 1];
        let (v, k) = if j > i {
            (lam * Q::from_integer(q.pow(i as u32) as i128), c / q.pow(i as u32))
        } else {
            (lam / Q::from_integer(q.pow((n - i) as u32) as i128), c * q.pow((n - i) as u32))
        };
        *m.entry(v).or_insert(0) += k;
    }
    m.into_iter().rev().collect()
}

/// Valuations with denominators up to 100 in `(0, 3]`, `inf` with probability 1/20.
pub fn random_vals(rng: &mut impl Rng, n: usize) -> Vec<Val> {
    (1..n)
        .map(|_| {
            if rng.gen_bool(0.05) {
                Val::Inf
            } else {
                let d = rng.gen_range(1..=100);
                Val::fin(rng.gen_range(1..=3 * d), d)
            }
        })
        .collect()
}

/// Number of `k`-dimensional subspaces of `F_q^n`, by counting ordered bases.
pub fn subspace_count(n: u32, k: u32, q: u64) -> u128 {
    let q = q as u128;
    let ordered = |m: u32| (0..k).map(|j| q.pow(m) - q.pow(j)).product::<u128>();
    ordered(n) / ordered(k)
}

/// `x^{ceil(k n / (n - i))} / pi^k` for `k = 1 .. (n - i) / gcd(n, i)`.
pub fn listed_generators(n: usize, i: usize) -> Vec<(u64, u64)> {
    let g = n.gcd(&i);
    (1..=(n - i) / g).map(|k| ((k * n).div_ceil(n - i) as u64, k as u64)).collect()
}

/// Closure of `{x, pi} U gens` inside the box `e <= bound` equals all `(e, k)` with `k <= e a / b`.
pub fn saturated(gens: &[(u64, u64)], a: u64, b: u64, bound: u64) -> bool {
    let mut reach: BTreeSet<(u64, i64)> = BTreeSet::new();
    let mut frontier = vec![(0u64, 0i64)];
    let cap = |e: u64| (e * a / b) as i64;
    let mut steps: Vec<(u64, i64)> = vec![(1, 0), (0, -1)];
    steps.extend(gens.iter().map(|&(e, k)| (e, k as i64)));
    while let Some((e, k)) = frontier.pop() {
        if !reach.insert((e, k)) {
            continue;
        }
        for &(de, dk) in &steps {
            let (ne, nk) = (e + de, k + dk);
            if ne <= bound && nk >= 0 && nk <= cap(ne) + 1 {
                frontier.push((ne, nk));
            }
        }
    }
    (0..=bound).all(|e| (0..=cap(e) + 1).all(|k| reach.contains(&(e, k)) == (k <= cap(e))))
}

/// Sum of monomials `pi^k x^e` truncated at `cap`.
pub fn series_from(q: u64, nvars: usize, cap: u64, terms: &[(&[u64], i64)]) -> TruncSeries {
    let ring = default_ring(q).unwrap();
    let mut s = TruncSeries::zero(ring, nvars, cap);
    for &(e, k) in terms {
        s = s.add(&TruncSeries::monomial(LaurentCoeff::pi_pow(ring, k), e.to_vec(), cap)).unwrap();
    }
    s
}
