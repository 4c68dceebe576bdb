//! Mutual inductance of two closed loops by the Neumann double line integral.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{segment_distance, CurrentLoop, PathSegment, Vec3, DEFAULT_SAGITTA_TOL, WIRE_EXCLUSION_RADIUS};
use crate::quantities::{H_PLANCK, MU0};

const MAX_ORDER: usize = 64;
const BASE_ORDER: usize = 4;
/// Pieces per loop; each piece is a parameter sub-interval of one segment.
const PIECES_PER_LOOP: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InductanceResult {
    /// Mutual inductance (H).
    pub henries: f64,
    pub achieved_tol: f64,
    /// Gauss order used for well-separated piece pairs at the final level.
    pub order: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Piece<'a> {
    segment: &'a PathSegment,
    t0: f64,
    t1: f64,
    a: Vec3,
    b: Vec3,
    length: f64,
}

fn pieces(lp: &CurrentLoop) -> Vec<Piece<'_>> {
    let target = lp.perimeter() / PIECES_PER_LOOP as f64;
    let mut out = Vec::new();
    for s in lp.segments() {
        let n = (s.length() / target).ceil().max(1.0) as usize;
        for i in 0..n {
            let (t0, t1) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            out.push(Piece { segment: s, t0, t1, a: s.point_at(t0), b: s.point_at(t1), length: s.length() / n as f64 });
        }
    }
    out
}

struct Rules {
    tables: Vec<(usize, Vec<(f64, f64)>)>,
}

impl Rules {
    fn new() -> Self {
        let mut tables = Vec::new();
        let mut n = BASE_ORDER;
        while n <= MAX_ORDER {
            let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("non-zero order"));
            tables.push((n, rule.as_node_weight_pairs().to_vec()));
            n *= 2;
        }
        Self { tables }
    }

    fn get(&self, order: usize) -> &[(f64, f64)] {
        let order = order.min(MAX_ORDER);
        &self.tables.iter().find(|(n, _)| *n >= order).expect("order within table").1
    }
}

fn pair_integral(p: &Piece, q: &Piece, rp: &[(f64, f64)], rq: &[(f64, f64)]) -> f64 {
    let (hp, hq) = (0.5 * (p.t1 - p.t0), 0.5 * (q.t1 - q.t0));
    let (mp, mq) = (0.5 * (p.t1 + p.t0), 0.5 * (q.t1 + q.t0));
    let mut sum = 0.0;
    for &(x, wx) in rp {
        let s = mp + hp * x;
        let xa = p.segment.point_at(s);
        let ta = p.segment.tangent_at(s);
        let mut inner = 0.0;
        for &(y, wy) in rq {
            let u = mq + hq * y;
            let xb = q.segment.point_at(u);
            inner += wy * ta.dot(&q.segment.tangent_at(u)) / (xa - xb).norm();
        }
        sum += wx * inner;
    }
    sum * hp * hq
}

fn neumann_level(pa: &[Piece], pb: &[Piece], rules: &Rules, order: usize) -> f64 {
    let far = rules.get(order);
    let near = rules.get(order * 4);
    let rows: Vec<f64> = pa
        .par_iter()
        .map(|p| {
            pb.iter()
                .map(|q| {
                    let d = segment_distance(&p.a, &p.b, &q.a, &q.b);
                    let rule = if d < 3.0 * p.length.max(q.length) { near } else { far };
                    pair_integral(p, q, rule, rule)
                })
                .sum()
        })
        .collect();
    MU0 / (4.0 * std::f64::consts::PI) * rows.iter().sum::<f64>()
}

/// Smallest wire-to-wire distance between two loops.
pub fn min_distance(a: &CurrentLoop, b: &CurrentLoop) -> f64 {
    let pa = a.discretize(DEFAULT_SAGITTA_TOL);
    let pb = b.discretize(DEFAULT_SAGITTA_TOL);
    pa.edges()
        .map(|(a0, a1)| pb.edges().map(|(b0, b1)| segment_distance(&a0, &a1, &b0, &b1)).fold(f64::INFINITY, f64::min))
        .fold(f64::INFINITY, f64::min)
}

/// Mutual inductance (H) between two disjoint loops, refined by doubling the
/// Gauss order until successive estimates differ by less than `tol`.
pub fn mutual_inductance(a: &CurrentLoop, b: &CurrentLoop, tol: f64) -> Result<InductanceResult> {
    if !(tol > 0.0) {
        return Err(Error::Config("inductance tolerance must be positive".into()));
    }
    let d = min_distance(a, b);
    if d <= WIRE_EXCLUSION_RADIUS {
        return Err(Error::Geometry(format!(
            "loops are {d:.3e} m apart; they must be separated by more than {WIRE_EXCLUSION_RADIUS:.1e} m"
        )));
    }
    let rules = Rules::new();
    let (pa, pb) = (pieces(a), pieces(b));
    let mut order = BASE_ORDER;
    let mut prev = neumann_level(&pa, &pb, &rules, order);
    let mut achieved = f64::INFINITY;
    while order * 2 <= MAX_ORDER {
        order *= 2;
        let next = neumann_level(&pa, &pb, &rules, order);
        achieved = if next == 0.0 { 0.0 } else { ((next - prev) / next).abs() };
        prev = next;
        if achieved < tol {
            return Ok(InductanceResult { henries: prev, achieved_tol: achieved, order, converged: true });
        }
    }
    Ok(InductanceResult { henries: prev, achieved_tol: achieved, order, converged: false })
}

/// M·I₁·I₂/h (Hz).
pub fn inductive_coupling_frequency(m: f64, i1: f64, i2: f64) -> f64 {
    m * i1 * i2 / H_PLANCK
}
