//! Isogeny calculus on polygons: quotients by canonical subgroups and reduction into D.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::polygon::{log_count, log_json, log_mass, lower_hull_segments, merge_log, pw, NewtonPolygon, ValueLog};
use crate::valcore::{q_json, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyStep {
    pub rank: usize,
    pub source: NewtonPolygon,
    pub image: NewtonPolygon,
    pub image_value_log: ValueLog,
}

impl IsogenyStep {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rank": self.rank,
            "source": self.source.to_json(),
            "image": self.image.to_json(),
            "image_values": log_json(&self.image_value_log),
        })
    }
}

/// Root valuations of `[pi](T) = beta` with `v(beta) = b`, as (value, count) pairs.
pub fn root_valuations(poly: &NewtonPolygon, b: Q) -> Vec<(Q, u128)> {
    let mut pts = vec![(qi(0), b)];
    for (j, v) in poly.vertex_vals.iter().enumerate() {
        pts.push((qi(pw(poly.q, j as u32)), *v));
    }
    let h = lower_hull_segments(&pts);
    h.windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            ((w[0].1 - w[1].1) / len, len.to_integer() as u128)
        })
        .collect()
}

/// `v(f(alpha)) = sum over kernel points k of min(v(alpha), v(k))`, for `alpha` of maximal
/// valuation in its torsion coset.
fn image_valuation(poly: &NewtonPolygon, i: usize, r: Q) -> Q {
    let mut w = r;
    for l in 1..=i {
        let cnt = pw(poly.q, l as u32) - pw(poly.q, l as u32 - 1);
        w += r.min(poly.slopes[l - 1]) * qi(cnt);
    }
    w
}

/// Quotient by the rank-i canonical subgroup.
pub fn canonical_quotient(poly: &NewtonPolygon, i: usize) -> Result<IsogenyStep> {
    let (n, q) = (poly.n, poly.q);
    if i == 0 || i >= n {
        return Err(Error::Domain(format!("rank {i} outside 1..{}", n - 1)));
    }
    let li = poly.slopes[i - 1];
    if li <= poly.slopes[i] {
        return Err(Error::Collision(format!(
            "lambda_{i} = {li} does not dominate lambda_{} = {}",
            i + 1,
            poly.slopes[i]
        )));
    }
    let qi_ = pw(q, i as u32) as u128;
    let div = |m: u128, what: &str| -> Result<u128> {
        if m % qi_ != 0 {
            return Err(Error::Multiplicity(format!("{what}: {m} not divisible by {qi_}")));
        }
        Ok(m / qi_)
    };
    let scale = qi(qi_ as i128);
    let mut items = Vec::new();
    for j in i + 1..=n {
        let m = (pw(q, j as u32) - pw(q, j as u32 - 1)) as u128;
        items.push((poly.slopes[j - 1] * scale, div(m, "type A")?));
    }
    let mut raw = Vec::new();
    for j in 1..=i {
        let cnt = (pw(q, j as u32) - pw(q, j as u32 - 1)) as u128;
        let r_max = root_valuations(poly, poly.slopes[j - 1])[0].0;
        let w0 = image_valuation(poly, i, r_max);
        let mut top = qi_;
        for l in i + 1..=n {
            let c = (pw(q, l as u32) - pw(q, l as u32 - 1)) as u128;
            let t = poly.slopes[l - 1] * scale;
            if t < w0 {
                raw.push((t, cnt * c));
            } else {
                top += c;
            }
        }
        raw.push((w0, cnt * top));
    }
    for (v, m) in merge_log(raw) {
        items.push((v, div(m, "type B")?));
    }
    let log = merge_log(items);
    let image = NewtonPolygon::from_value_log(n, q, &log)?;
    Ok(IsogenyStep { rank: i, source: poly.clone(), image, image_value_log: log })
}

/// Closed form on the boundary: `{q^i lambda_j, j > i} U {lambda_j / q^{n-i}, j <= i}`.
pub fn boundary_closed_form(poly: &NewtonPolygon, i: usize) -> ValueLog {
    let (n, q) = (poly.n as u32, poly.q);
    let i = i as u32;
    let mut items = Vec::new();
    for j in 1..=n {
        let m = (pw(q, j) - pw(q, j - 1)) as u128;
        if j > i {
            items.push((poly.slopes[j as usize - 1] * qi(pw(q, i)), m / pw(q, i) as u128));
        } else {
            items.push((poly.slopes[j as usize - 1] / qi(pw(q, n - i)), m * pw(q, n - i) as u128));
        }
    }
    merge_log(items)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelType {
    pub r: Vec<usize>,
}

impl KernelType {
    pub fn new(n: usize, r: Vec<usize>) -> Result<Self> {
        if r.windows(2).any(|w| w[0] < w[1]) || r.iter().any(|&x| x == 0 || x >= n) {
            return Err(Error::Domain(format!("kernel type {r:?} needs n-1 >= r_1 >= ... >= r_k >= 1")));
        }
        Ok(KernelType { r })
    }

    pub fn height(&self) -> usize {
        self.r.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.r.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelImageReport {
    #[serde(skip)]
    pub values: ValueLog,
    pub exponent: usize,
    #[serde(serialize_with = "crate::valcore::ser_q")]
    pub sum: Q,
    #[serde(serialize_with = "crate::valcore::ser_q")]
    pub upper_bound: Q,
    #[serde(serialize_with = "crate::valcore::ser_q")]
    pub lower_bound: Q,
    pub certifies_impossible: bool,
}

/// Values `lambda_{a_j} / q^{nk - sum r}` with multiplicity `q^j - q^{j-1}` for `j <= r_k`.
pub fn kernel_image_values(poly: &NewtonPolygon, kt: &KernelType, flags: &[usize]) -> Result<KernelImageReport> {
    let (n, q) = (poly.n, poly.q);
    if !poly.in_gross_hopkins() {
        return Err(Error::Domain("polygon is not in D".into()));
    }
    let k = kt.k();
    if k == 0 {
        return Ok(KernelImageReport {
            values: vec![],
            exponent: 0,
            sum: qi(0),
            upper_bound: qi(0),
            lower_bound: qi(0),
            certifies_impossible: false,
        });
    }
    let r = kt.r[k - 1];
    if flags.len() < r || flags.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain(format!("need {r} non-decreasing flag ranks")));
    }
    for (j, &a) in flags.iter().enumerate().take(r) {
        if a < j + 1 || a > n {
            return Err(Error::Domain(format!("flag rank a_{} = {a} out of range", j + 1)));
        }
    }
    let exponent = n * k - kt.height();
    let d = qi(pw(q, exponent as u32));
    let items: Vec<(Q, u128)> = (1..=r)
        .map(|j| (poly.slopes[flags[j - 1] - 1] / d, (pw(q, j as u32) - pw(q, j as u32 - 1)) as u128))
        .collect();
    let sum = items.iter().map(|(v, c)| v * qi(*c as i128)).sum();
    let nn = n as i128;
    let upper_bound = Q::new(r as i128, nn * pw(q, (n + k - 1 - r) as u32));
    let lower_bound = Q::new(r as i128, nn * pw(q, (n - r) as u32));
    Ok(KernelImageReport {
        values: merge_log(items),
        exponent,
        sum,
        upper_bound,
        lower_bound,
        certifies_impossible: k >= 2 && sum <= upper_bound && upper_bound < lower_bound,
    })
}

/// Boundary ranks, each checked to send the polygon into the opposite stratum.
pub fn admissible_targets(poly: &NewtonPolygon) -> Result<Vec<usize>> {
    if !poly.in_gross_hopkins() {
        return Err(Error::Domain("polygon is not in D".into()));
    }
    let b = poly.boundary_indices();
    for &i in &b {
        let step = canonical_quotient(poly, i)?;
        if !step.image.in_gross_hopkins() || !step.image.boundary_indices().contains(&(poly.n - i)) {
            return Err(Error::Domain(format!("rank {i} image left the opposite boundary stratum")));
        }
    }
    Ok(b)
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub fin: NewtonPolygon,
    pub steps: Vec<usize>,
    pub log: Vec<IsogenyStep>,
}

impl Reduction {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "steps": self.steps,
            "final": self.fin.to_json(),
            "final_vals": self.fin.vertex_vals[1..self.fin.n].iter().map(q_json).collect::<Vec<_>>(),
            "log": self.log.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        })
    }
}

pub const DEFAULT_BUDGET: usize = 10;

/// Greedy reduction: quotient at the largest rupture until the polygon lies in D.
pub fn reduce_to_domain(poly: &NewtonPolygon, budget: usize) -> Result<Reduction> {
    let mut cur = poly.clone();
    let mut steps = Vec::new();
    let mut log = Vec::new();
    while !cur.in_gross_hopkins() {
        if steps.len() >= budget {
            return Err(Error::Budget(steps.len()));
        }
        let i = *cur
            .ruptures()
            .last()
            .ok_or_else(|| Error::Domain("polygon outside D without rupture".into()))?;
        let step = canonical_quotient(&cur, i)?;
        steps.push(i);
        cur = step.image.clone();
        log.push(step);
    }
    Ok(Reduction { fin: cur, steps, log })
}

#[derive(Clone, Debug, Serialize)]
pub struct DistinctnessCertificate {
    pub gap: usize,
    #[serde(serialize_with = "crate::valcore::ser_q")]
    pub max_candidate: Q,
    #[serde(serialize_with = "crate::valcore::ser_q")]
    pub threshold: Q,
    #[serde(serialize_with = "crate::valcore::ser_q")]
    pub min_slope: Q,
    pub holds: bool,
}

/// Every candidate `lambda_i / q^{gap}` sits at or below `lambda_1 / q^n`, strictly below every slope.
pub fn distinctness_certificate(poly: &NewtonPolygon, kt: &KernelType) -> Result<DistinctnessCertificate> {
    let n = poly.n;
    if !poly.in_h() {
        return Err(Error::Domain("polygon is not in H".into()));
    }
    if kt.k() == 0 || kt.height() % n != 0 {
        return Err(Error::Domain(format!("height {} is not a positive multiple of n", kt.height())));
    }
    let gap = n * kt.k() - kt.height();
    let d = qi(pw(poly.q, gap as u32));
    let max_candidate = poly.slopes.iter().map(|l| l / d).max().unwrap();
    let threshold = poly.lambda1() / qi(pw(poly.q, n as u32));
    let min_slope = poly.lambda_n();
    Ok(DistinctnessCertificate {
        gap,
        max_candidate,
        threshold,
        min_slope,
        holds: gap >= n && max_candidate <= threshold && threshold < min_slope,
    })
}

/// Mass and count of an image log.
pub fn conservation(step: &IsogenyStep) -> (Q, u128) {
    (log_mass(&step.image_value_log), log_count(&step.image_value_log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valcore::{q, Val};

    fn poly(n: usize, qq: u64, vals: &[Val]) -> NewtonPolygon {
        NewtonPolygon::from_vals(n, qq, vals).unwrap()
    }

    #[test]
    fn boundary_rank_one() {
        let p = NewtonPolygon::from_slopes(3, 2, vec![q(1, 3), q(1, 9), q(1, 9)]).unwrap();
        let s = canonical_quotient(&p, 1).unwrap();
        assert_eq!(s.image.slopes, vec![q(2, 9), q(2, 9), q(1, 12)]);
        assert_eq!(s.image.boundary_indices(), vec![2]);
        assert_eq!(s.image_value_log, boundary_closed_form(&p, 1));
    }

    #[test]
    fn reflection_n2() {
        let p = poly(2, 3, &[Val::fin(3, 10)]);
        assert_eq!(p.slopes, vec![q(7, 20), q(1, 20)]);
        let s = canonical_quotient(&p, 1).unwrap();
        assert_eq!(s.image.vertex_vals[1], q(7, 10));
    }

    #[test]
    fn two_type_hull() {
        let p = poly(3, 2, &[Val::fin(9, 10), Val::fin(1, 20)]);
        let s = canonical_quotient(&p, 2).unwrap();
        assert_eq!(s.image.slopes, vec![q(4, 15), q(4, 15), q(1, 20)]);
        assert_eq!(conservation(&s), (qi(1), 7));
    }

    #[test]
    fn fixed_boundary_point() {
        let p = poly(2, 3, &[Val::fin(1, 2)]);
        assert_eq!(canonical_quotient(&p, 1).unwrap().image, p);
    }

    #[test]
    fn no_domination() {
        let p = poly(2, 3, &[Val::Inf]);
        assert!(matches!(canonical_quotient(&p, 1), Err(Error::Collision(_))));
    }

    #[test]
    fn reductions() {
        let r = reduce_to_domain(&poly(2, 3, &[Val::fin(3, 10)]), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.steps, vec![1]);
        assert_eq!(r.fin.vertex_vals[1], q(7, 10));
        let r = reduce_to_domain(&poly(3, 2, &[Val::fin(9, 10), Val::fin(1, 20)]), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.steps, vec![2, 2]);
        assert_eq!(r.fin.vertex_vals[1..3], [q(4, 5), q(8, 15)]);
        let r = reduce_to_domain(&poly(2, 3, &[Val::Inf]), DEFAULT_BUDGET).unwrap();
        assert!(r.steps.is_empty());
    }

    #[test]
    fn targets() {
        assert!(admissible_targets(&poly(2, 3, &[Val::Inf])).unwrap().is_empty());
        assert_eq!(admissible_targets(&poly(2, 3, &[Val::fin(1, 2)])).unwrap(), vec![1]);
        assert_eq!(admissible_targets(&poly(3, 2, &[Val::fin(2, 3), Val::fin(1, 2)])).unwrap(), vec![1]);
    }

    #[test]
    fn kernel_types() {
        let p = poly(3, 2, &[Val::fin(2, 3), Val::fin(1, 2)]);
        let kt = KernelType::new(3, vec![2, 1]).unwrap();
        let rep = kernel_image_values(&p, &kt, &[1]).unwrap();
        assert!(rep.certifies_impossible);
        let kt = KernelType::new(3, vec![1]).unwrap();
        let rep = kernel_image_values(&p, &kt, &[1]).unwrap();
        assert_eq!(rep.values, vec![(p.slopes[0] / qi(4), 1)]);
        let empty = KernelType::new(3, vec![]).unwrap();
        assert!(kernel_image_values(&p, &empty, &[]).unwrap().values.is_empty());
    }

    #[test]
    fn distinctness_gap() {
        let p = poly(2, 3, &[Val::fin(3, 5)]);
        let c = distinctness_certificate(&p, &KernelType::new(2, vec![1, 1]).unwrap()).unwrap();
        assert_eq!(c.gap, 2);
        assert!(c.holds);
    }
}
