use crate::structure::TeichPoint;
use crate::C64;

/// Ordered samples of a path in the upper half-plane, joined linearly.
pub type Path = Vec<TeichPoint>;

fn point(t: C64) -> TeichPoint {
    TeichPoint::new(t).expect("interpolated point left the upper half-plane")
}

/// `samples` points on the straight segment from `a` to `b` (inclusive).
pub fn straight(a: TeichPoint, b: TeichPoint, samples: usize) -> Path {
    let n = samples.max(2);
    (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            point(a.tau() * (1.0 - s) + b.tau() * s)
        })
        .collect()
}

/// `samples` points on the hyperbolic geodesic from `a` to `b`, equally
/// spaced in hyperbolic arclength.
pub fn geodesic(a: TeichPoint, b: TeichPoint, samples: usize) -> Path {
    let n = samples.max(2);
    let frac = |i: usize| i as f64 / (n - 1) as f64;
    if (a.re() - b.re()).abs() < 1e-12 * (1.0 + a.re().abs()) {
        let (la, lb) = (a.im().ln(), b.im().ln());
        return (0..n)
            .map(|i| {
                let s = frac(i);
                let re = a.re() * (1.0 - s) + b.re() * s;
                point(C64::new(re, (la * (1.0 - s) + lb * s).exp()))
            })
            .collect();
    }
    let centre = (a.tau().norm_sqr() - b.tau().norm_sqr()) / (2.0 * (a.re() - b.re()));
    let radius = (a.tau() - centre).norm();
    let arc = |p: TeichPoint| ((p.tau() - centre).arg() / 2.0).tan().ln();
    let (sa, sb) = (arc(a), arc(b));
    let mut out: Path = (0..n)
        .map(|i| {
            let s = sa * (1.0 - frac(i)) + sb * frac(i);
            let phi = 2.0 * s.exp().atan();
            point(C64::new(centre, 0.0) + C64::from_polar(radius, phi))
        })
        .collect();
    out[0] = a;
    out[n - 1] = b;
    out
}

/// `p` followed by `q`; the shared endpoint is kept once.
pub fn concat(p: &[TeichPoint], q: &[TeichPoint]) -> Path {
    let mut out = p.to_vec();
    let skip = usize::from(matches!((p.last(), q.first()), (Some(x), Some(y)) if x == y));
    out.extend_from_slice(&q[skip.min(q.len())..]);
    out
}

/// The same samples in reverse order.
pub fn reverse(p: &[TeichPoint]) -> Path {
    p.iter().rev().copied().collect()
}
