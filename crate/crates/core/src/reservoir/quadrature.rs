//! Adaptive Gauss-Kronrod (7/15) quadrature of complex integrands on finite
//! or infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Total number of subintervals allowed before giving up.
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 20_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: C64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// `x = a + t/(1−t)`, `t ∈ [0, 1)`.
    Right(f64),
    /// `x = b − t/(1−t)`, `t ∈ [0, 1)`.
    Left(f64),
}

impl Map {
    #[inline]
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Map::Identity => (t, 1.0),
            Map::Right(a) => {
                let u = 1.0 - t;
                (a + t / u, 1.0 / (u * u))
            }
            Map::Left(b) => {
                let u = 1.0 - t;
                (b - t / u, 1.0 / (u * u))
            }
        }
    }
}

struct Piece {
    map: Map,
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> C64>(f: &F, map: Map, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let eval = |t: f64| {
        let (x, jac) = map.apply(t);
        let v = f(x) * jac;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            C64::new(0.0, 0.0)
        }
    };
    let fc = eval(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = eval(c - dx) + eval(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    (kron, (kron - gauss).norm())
}

/// Integrates `f` over `[lo, hi]` (either end may be infinite), splitting at
/// the given interior `breaks` first.
pub fn integrate<F: Fn(f64) -> C64>(f: F, lo: f64, hi: f64, breaks: &[f64], opts: &QuadOptions) -> Result<QuadResult> {
    if !(lo < hi) {
        return Ok(QuadResult { value: C64::new(0.0, 0.0), error: 0.0, intervals: 0 });
    }
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|p| p.is_finite() && *p > lo && *p < hi).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if lo.is_infinite() && hi.is_infinite() && pts.is_empty() {
        pts.push(0.0);
    }
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(lo);
    edges.extend(pts);
    edges.push(hi);

    let mut heap = BinaryHeap::new();
    for w in edges.windows(2) {
        let (map, a, b) = match (w[0].is_finite(), w[1].is_finite()) {
            (true, true) => (Map::Identity, w[0], w[1]),
            (true, false) => (Map::Right(w[0]), 0.0, 1.0),
            (false, true) => (Map::Left(w[1]), 0.0, 1.0),
            (false, false) => unreachable!(),
        };
        let (value, error) = gk15(&f, map, a, b);
        heap.push(Piece { map, a, b, value, error });
    }

    let total = |heap: &BinaryHeap<Piece>| {
        heap.iter().fold((C64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.value, e + p.error))
    };
    let (mut value, mut error) = total(&heap);
    let mut refinements = 0usize;
    while error > opts.abs_tol.max(opts.rel_tol * value.norm()) {
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureDivergence { intervals: heap.len(), estimate: error });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval exhausted at machine precision
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.map, worst.a, mid);
        let (v2, e2) = gk15(&f, worst.map, mid, worst.b);
        heap.push(Piece { map: worst.map, a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { map: worst.map, a: mid, b: worst.b, value: v2, error: e2 });
        refinements += 1;
        if refinements % 64 == 0 {
            (value, error) = total(&heap);
        } else {
            value += v1 + v2 - worst.value;
            error += e1 + e2 - worst.error;
        }
    }
    let (value, error) = total(&heap);
    Ok(QuadResult { value, error, intervals: heap.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| C64::new(x.powi(5) - 2.0 * x, x * x), -1.0, 2.0, &[], &QuadOptions::default()).unwrap();
        assert!((r.value - C64::new(63.0 / 6.0 - 3.0, 3.0)).norm() < 1e-13);
    }

    #[test]
    fn infinite_lorentzian_integrates_to_pi() {
        let r = integrate(|x| C64::new(1.0 / (1.0 + x * x), 0.0), f64::NEG_INFINITY, f64::INFINITY, &[], &QuadOptions::default())
            .unwrap();
        assert!((r.value.re - PI).abs() < 1e-11, "{:?}", r);
        let half = integrate(|x| C64::new((-x).exp(), 0.0), 0.0, f64::INFINITY, &[], &QuadOptions::default()).unwrap();
        assert!((half.value.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_pole_resolves_with_breakpoint() {
        let eps = 1e-3;
        let r = integrate(|x| C64::new(1.0, 0.0) / C64::new(eps, -x), -1.0, 1.0, &[0.0], &QuadOptions::default()).unwrap();
        assert!((r.value.re - 2.0 * (1.0 / eps).atan()).abs() < 1e-11);
        assert!(r.value.im.abs() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_reports_divergence() {
        let opts = QuadOptions { abs_tol: 0.0, rel_tol: 0.0, max_intervals: 8 };
        let r = integrate(|x| C64::new(x.abs().sqrt().recip(), 0.0), -1.0, 1.0, &[], &opts);
        assert!(matches!(r, Err(Error::QuadratureDivergence { .. })));
    }
}
