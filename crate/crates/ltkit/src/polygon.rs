//! Newton polygons of `H[pi]` and the domains D and H.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::valcore::{q_json, qi, ser_q_vec, Val, Q};

/// Multiset of valuations, sorted by decreasing value.
pub type ValueLog = Vec<(Q, u128)>;

pub fn merge_log(items: impl IntoIterator<Item = (Q, u128)>) -> ValueLog {
    let mut m: BTreeMap<Q, u128> = BTreeMap::new();
    for (v, c) in items {
        if c > 0 {
            *m.entry(v).or_insert(0) += c;
        }
    }
    m.into_iter().rev().collect()
}

pub fn log_count(log: &ValueLog) -> u128 {
    log.iter().map(|(_, c)| c).sum()
}

pub fn log_mass(log: &ValueLog) -> Q {
    log.iter().map(|(v, c)| v * qi(*c as i128)).sum()
}

pub fn log_json(log: &ValueLog) -> serde_json::Value {
    json!(log.iter().map(|(v, c)| json!({"val": q_json(v), "mult": *c as u64})).collect::<Vec<_>>())
}

pub(crate) fn pw(q: u64, k: u32) -> i128 {
    (q as i128).pow(k)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NewtonPolygon {
    pub n: usize,
    pub q: u64,
    /// `slopes[j-1] = lambda_j`, stored as positive numbers.
    #[serde(serialize_with = "ser_q_vec")]
    pub slopes: Vec<Q>,
    /// Hull values at abscissas `q^0 .. q^n`.
    #[serde(serialize_with = "ser_q_vec")]
    pub vertex_vals: Vec<Q>,
}

fn check_nq(n: usize, q: u64) -> Result<()> {
    if n < 1 || q < 2 {
        return Err(Error::Domain(format!("need n >= 1 and q >= 2, got n = {n}, q = {q}")));
    }
    if (q as f64).powi(n as i32) > 1e15 {
        return Err(Error::Domain(format!("q^n too large for n = {n}, q = {q}")));
    }
    Ok(())
}

/// Lower convex hull of points sorted by abscissa.
fn lower_hull(pts: &[(Q, Q)]) -> Vec<(Q, Q)> {
    let mut h: Vec<(Q, Q)> = Vec::new();
    for &p in pts {
        while h.len() >= 2 {
            let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
            // drop b when it lies on or above segment a-p
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= Q::zero() {
                h.pop();
            } else {
                break;
            }
        }
        h.push(p);
    }
    h
}

fn hull_value(h: &[(Q, Q)], x: Q) -> Q {
    for w in h.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x0 <= x && x <= x1 {
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    panic!("abscissa outside hull");
}

/// Lower hull of arbitrary points, used by the isogeny calculus.
pub fn lower_hull_segments(pts: &[(Q, Q)]) -> Vec<(Q, Q)> {
    let mut v = pts.to_vec();
    v.sort();
    v.dedup_by(|a, b| {
        if a.0 == b.0 {
            b.1 = b.1.min(a.1);
            true
        } else {
            false
        }
    });
    lower_hull(&v)
}

impl NewtonPolygon {
    /// Hull of `(1, 1)`, the finite `(q^i, v_i)` and `(q^n, 0)`.
    pub fn from_vals(n: usize, q: u64, vals: &[Val]) -> Result<Self> {
        check_nq(n, q)?;
        if vals.len() + 1 != n {
            return Err(Error::Shape(format!("{} valuations for n = {n}", vals.len())));
        }
        let mut pts = vec![(qi(1), qi(1))];
        for (i, v) in vals.iter().enumerate() {
            if let Val::Fin(x) = v {
                if *x <= Q::zero() {
                    return Err(Error::Domain(format!("v(x_{}) = {x} must be positive", i + 1)));
                }
                pts.push((qi(pw(q, i as u32 + 1)), *x));
            }
        }
        pts.push((qi(pw(q, n as u32)), Q::zero()));
        let h = lower_hull(&pts);
        let vertex_vals: Vec<Q> = (0..=n).map(|j| hull_value(&h, qi(pw(q, j as u32)))).collect();
        Ok(Self::from_vertex_vals(n, q, vertex_vals))
    }

    fn from_vertex_vals(n: usize, q: u64, vertex_vals: Vec<Q>) -> Self {
        let slopes = (1..=n)
            .map(|j| (vertex_vals[j - 1] - vertex_vals[j]) / qi(pw(q, j as u32) - pw(q, j as u32 - 1)))
            .collect();
        NewtonPolygon { n, q, slopes, vertex_vals }
    }

    /// Polygon with prescribed slopes; they must be positive, non-increasing and of mass 1.
    pub fn from_slopes(n: usize, q: u64, slopes: Vec<Q>) -> Result<Self> {
        check_nq(n, q)?;
        if slopes.len() != n {
            return Err(Error::Shape(format!("{} slopes for n = {n}", slopes.len())));
        }
        if slopes.iter().any(|s| *s <= Q::zero()) || slopes.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain("slopes must be positive and non-increasing".into()));
        }
        let mut vv = vec![qi(1)];
        for (j, s) in slopes.iter().enumerate() {
            let w = qi(pw(q, j as u32 + 1) - pw(q, j as u32));
            vv.push(vv[j] - s * w);
        }
        if !vv[n].is_zero() {
            return Err(Error::Domain(format!("slope mass is {}, not 1", qi(1) - vv[n])));
        }
        Ok(NewtonPolygon { n, q, slopes, vertex_vals: vv })
    }

    /// Rebuild from the multiset of torsion valuations.
    pub fn from_value_log(n: usize, q: u64, log: &ValueLog) -> Result<Self> {
        check_nq(n, q)?;
        let total = log_count(log);
        if total != (pw(q, n as u32) - 1) as u128 {
            return Err(Error::Multiplicity(format!("{total} values, expected q^n - 1")));
        }
        let mut slopes = Vec::with_capacity(n);
        let mut it = log.iter();
        let mut cur: Option<(Q, u128)> = None;
        for j in 1..=n {
            let mut need = (pw(q, j as u32) - pw(q, j as u32 - 1)) as u128;
            let mut val: Option<Q> = None;
            while need > 0 {
                let (v, c) = match cur.take() {
                    Some(x) => x,
                    None => *it.next().expect("count checked"),
                };
                if let Some(w) = val {
                    if w != v {
                        return Err(Error::Multiplicity(format!(
                            "break at a count that is not of the form q^j - 1 (slope {j})"
                        )));
                    }
                }
                val = Some(v);
                let take = need.min(c);
                need -= take;
                if c > take {
                    cur = Some((v, c - take));
                }
            }
            slopes.push(val.unwrap());
        }
        Self::from_slopes(n, q, slopes)
    }

    pub fn lambda1(&self) -> Q {
        self.slopes[0]
    }

    pub fn lambda_n(&self) -> Q {
        self.slopes[self.n - 1]
    }

    pub fn mass(&self) -> Q {
        (1..=self.n).map(|j| self.slopes[j - 1] * qi(pw(self.q, j as u32) - pw(self.q, j as u32 - 1))).sum()
    }

    pub fn is_monotone(&self) -> bool {
        self.slopes.iter().all(|s| *s > Q::zero()) && self.slopes.windows(2).all(|w| w[0] >= w[1])
    }

    /// Threshold `1 - i/n` of the domain D.
    pub fn threshold(&self, i: usize) -> Q {
        qi(1) - Q::new(i as i128, self.n as i128)
    }

    pub fn in_gross_hopkins(&self) -> bool {
        (1..self.n).all(|i| self.vertex_vals[i] >= self.threshold(i))
    }

    pub fn boundary_indices(&self) -> Vec<usize> {
        (1..self.n).filter(|&i| self.vertex_vals[i] == self.threshold(i)).collect()
    }

    pub fn in_h(&self) -> bool {
        self.lambda1() / qi(pw(self.q, self.n as u32)) < self.lambda_n()
    }

    /// Ranks `i` where the slopes break: `lambda_i > lambda_{i+1}`.
    pub fn ruptures(&self) -> Vec<usize> {
        (1..self.n).filter(|&i| self.slopes[i - 1] > self.slopes[i]).collect()
    }

    /// Coordinate data read back from the polygon; off-vertex abscissas are only lower bounds.
    pub fn coordinate_bounds(&self) -> Vec<(Q, bool)> {
        (1..self.n)
            .map(|i| (self.vertex_vals[i], self.slopes[i - 1] != self.slopes[i]))
            .collect()
    }

    /// The multiset of valuations of nonzero points of `H[pi]`.
    pub fn value_log(&self) -> ValueLog {
        merge_log(
            (1..=self.n).map(|j| (self.slopes[j - 1], (pw(self.q, j as u32) - pw(self.q, j as u32 - 1)) as u128)),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "q": self.q,
            "slopes": self.slopes.iter().map(q_json).collect::<Vec<_>>(),
            "vertex_vals": self.vertex_vals.iter().map(q_json).collect::<Vec<_>>(),
            "in_D": self.in_gross_hopkins(),
            "in_H": self.in_h(),
            "boundary": self.boundary_indices(),
        })
    }

    pub fn render_svg(&self) -> String {
        render_svg(self)
    }

    pub fn render_ascii(&self, width: usize, height: usize) -> String {
        render_ascii(self, width, height)
    }
}

/// Closed-form extremes `(lambda_1, lambda_n)` with `x_0 = pi`, `x_n = 1`.
pub fn lambda_extremes(n: usize, q: u64, vals: &[Val]) -> Result<(Q, Q)> {
    check_nq(n, q)?;
    if vals.len() + 1 != n {
        return Err(Error::Shape(format!("{} valuations for n = {n}", vals.len())));
    }
    let v = |i: usize| -> Val {
        match i {
            0 => Val::Fin(qi(1)),
            i if i == n => Val::Fin(Q::zero()),
            i => vals[i - 1],
        }
    };
    let l1 = (1..=n)
        .filter_map(|i| v(i).finite().map(|x| (qi(1) - x) / qi(pw(q, i as u32) - 1)))
        .max()
        .unwrap();
    let ln = (0..n)
        .filter_map(|j| v(j).finite().map(|x| x / qi(pw(q, n as u32) - pw(q, j as u32))))
        .min()
        .unwrap();
    Ok((l1, ln))
}

/// Membership in D straight from coordinates.
pub fn in_gross_hopkins_vals(n: usize, vals: &[Val]) -> bool {
    vals.iter()
        .enumerate()
        .all(|(k, v)| *v >= Val::Fin(qi(1) - Q::new(k as i128 + 1, n as i128)))
}

/// Polygon with slopes `1/(e (q^{(k+1)f} - q^{kf}))` on full blocks of length `f = n/e`.
pub fn cm_polygon(n: usize, q: u64, e: usize) -> Result<NewtonPolygon> {
    check_nq(n, q)?;
    if e == 0 || n % e != 0 {
        return Err(Error::Domain(format!("e = {e} does not divide n = {n}")));
    }
    let f = n / e;
    let mut slopes = Vec::with_capacity(n);
    for k in 0..e {
        let s = Q::new(1, e as i128 * (pw(q, ((k + 1) * f) as u32) - pw(q, (k * f) as u32)));
        slopes.extend(std::iter::repeat(s).take(f));
    }
    NewtonPolygon::from_slopes(n, q, slopes)
}

/// Boundary polygon through every `(q^i, 1 - i/n)`.
pub fn reference_polygon(n: usize, q: u64) -> Result<NewtonPolygon> {
    cm_polygon(n, q, n)
}

/// Valuations of nonzero `pi^k`-torsion.
pub fn torsion_valuations(poly: &NewtonPolygon, k: u32) -> Result<ValueLog> {
    if !poly.in_h() {
        return Err(Error::Domain("polygon is not in H".into()));
    }
    let (n, q) = (poly.n as u32, poly.q);
    let mut items = Vec::new();
    for l in 1..=k {
        let s = pw(q, n * (l - 1));
        for j in 1..=n {
            let m = (pw(q, j) - pw(q, j - 1)) * s;
            items.push((poly.slopes[j as usize - 1] / qi(s), m as u128));
        }
    }
    Ok(merge_log(items))
}

fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn to_f(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Abscissa axis in log_q scale, one column per power of q.
fn render_svg(p: &NewtonPolygon) -> String {
    let (w, h, pad) = (480.0, 320.0, 40.0);
    let sx = |i: usize| pad + (w - 2.0 * pad) * i as f64 / p.n as f64;
    let sy = |v: f64| h - pad - (h - 2.0 * pad) * v;
    let reference = reference_polygon(p.n, p.q).expect("valid parameters");
    let path = |poly: &NewtonPolygon| {
        poly.vertex_vals
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{:.2},{:.2}", sx(i), sy(to_f(v))))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{pad}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        h - pad,
        w - pad,
        h - pad
    );
    let _ = writeln!(s, r#"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{}" stroke="black"/>"#, h - pad);
    for i in 0..=p.n {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" font-size="11" text-anchor="middle">q^{i}</text>"#,
            sx(i),
            h - pad + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="gray" stroke-dasharray="5,4"/>"#,
        path(&reference)
    );
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="blue" stroke-width="2"/>"#, path(p));
    for (i, v) in p.vertex_vals.iter().enumerate() {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="blue"/>"#, sx(i), sy(to_f(v)));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#,
            sx(i) + 4.0,
            sy(to_f(v)) - 4.0,
            fmt_q(v)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// `*` marks the polygon, `.` the reference polygon, `#` where both meet.
fn render_ascii(p: &NewtonPolygon, width: usize, height: usize) -> String {
    let width = width.max(p.n * 4 + 1);
    let height = height.max(5);
    let reference = reference_polygon(p.n, p.q).expect("valid parameters");
    let mut grid = vec![vec![' '; width]; height];
    let mut plot = |poly: &NewtonPolygon, ch: char| {
        for c in 0..width {
            let t = c as f64 / (width - 1) as f64 * p.n as f64;
            let i = (t.floor() as usize).min(p.n - 1);
            let fr = t - i as f64;
            let v = to_f(&poly.vertex_vals[i]) * (1.0 - fr) + to_f(&poly.vertex_vals[i + 1]) * fr;
            let r = ((1.0 - v) * (height - 1) as f64).round().clamp(0.0, (height - 1) as f64) as usize;
            grid[r][c] = match (grid[r][c], ch) {
                (' ', x) => x,
                (a, b) if a == b => a,
                _ => '#',
            };
        }
    };
    plot(&reference, '.');
    plot(p, '*');
    let mut s = String::new();
    for row in grid {
        s.push('|');
        s.extend(row);
        s.push('\n');
    }
    s.push('+');
    s.push_str(&"-".repeat(width));
    s.push('\n');
    let _ = writeln!(s, " slopes: {}", p.slopes.iter().map(fmt_q).collect::<Vec<_>>().join(", "));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valcore::q;

    #[test]
    fn two_point_hull() {
        let p = NewtonPolygon::from_vals(2, 3, &[Val::Inf]).unwrap();
        assert_eq!(p.slopes, vec![q(1, 8), q(1, 8)]);
        assert!(p.in_gross_hopkins());
        assert!(p.boundary_indices().is_empty());
    }

    #[test]
    fn boundary_point() {
        let p = NewtonPolygon::from_vals(2, 3, &[Val::fin(1, 2)]).unwrap();
        assert_eq!(p.slopes, vec![q(1, 4), q(1, 12)]);
        assert_eq!(p.boundary_indices(), vec![1]);
        assert_eq!(p, cm_polygon(2, 3, 2).unwrap());
    }

    #[test]
    fn eliminated_point() {
        let p = NewtonPolygon::from_vals(3, 2, &[Val::fin(2, 3), Val::fin(1, 2)]).unwrap();
        assert_eq!(p.slopes, vec![q(1, 3), q(1, 9), q(1, 9)]);
        assert_eq!(p.boundary_indices(), vec![1]);
        assert!(!p.coordinate_bounds()[1].1);
        assert_eq!(lambda_extremes(3, 2, &[Val::fin(2, 3), Val::fin(1, 2)]).unwrap(), (q(1, 3), q(1, 9)));
    }

    #[test]
    fn domain_h() {
        assert!(NewtonPolygon::from_vals(2, 3, &[Val::fin(3, 5)]).unwrap().in_h());
        assert!(!NewtonPolygon::from_vals(2, 3, &[Val::fin(1, 20)]).unwrap().in_h());
    }

    #[test]
    fn cm_blocks() {
        assert_eq!(cm_polygon(2, 3, 1).unwrap().slopes, vec![q(1, 8), q(1, 8)]);
        let p = cm_polygon(4, 2, 2).unwrap();
        assert_eq!(p.slopes, vec![q(1, 6), q(1, 6), q(1, 24), q(1, 24)]);
        assert!(cm_polygon(4, 2, 3).is_err());
    }

    #[test]
    fn torsion_tower() {
        let p = NewtonPolygon::from_vals(2, 3, &[Val::fin(3, 5)]).unwrap();
        let t = torsion_valuations(&p, 2).unwrap();
        assert_eq!(t, vec![(q(1, 5), 2), (q(1, 10), 6), (q(1, 45), 18), (q(1, 90), 54)]);
        assert_eq!(log_count(&t), 80);
        assert!(torsion_valuations(&p, 0).unwrap().is_empty());
        let bad = NewtonPolygon::from_vals(2, 3, &[Val::fin(1, 20)]).unwrap();
        assert!(torsion_valuations(&bad, 1).is_err());
    }

    #[test]
    fn rebuild_from_log() {
        let p = NewtonPolygon::from_vals(3, 2, &[Val::fin(9, 10), Val::fin(1, 20)]).unwrap();
        assert_eq!(NewtonPolygon::from_value_log(3, 2, &p.value_log()).unwrap(), p);
    }

    #[test]
    fn renders() {
        let p = NewtonPolygon::from_vals(3, 2, &[Val::fin(2, 3), Val::fin(1, 2)]).unwrap();
        assert!(p.render_svg().contains("<polyline"));
        assert!(p.render_ascii(40, 10).contains('*'));
    }
}
