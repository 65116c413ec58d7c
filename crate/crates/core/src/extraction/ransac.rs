use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point2, ReflectionSurface, MIN_SURFACE_LENGTH_M};

use super::ExtractionConfig;

/// Infinite line through `origin` with unit direction `dir`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Line {
    pub origin: Point2,
    pub dir: Point2,
}

impl Line {
    fn through(a: Point2, b: Point2) -> Option<Self> {
        let d = b - a;
        let n = d.norm();
        (n > 1e-9).then(|| Self { origin: a, dir: d * (1.0 / n) })
    }

    pub fn distance(&self, p: Point2) -> f64 {
        self.dir.cross(p - self.origin).abs()
    }

    pub fn project(&self, p: Point2) -> f64 {
        self.dir.dot(p - self.origin)
    }
}

/// Total-least-squares line through `points`, or `None` for fewer than two distinct points.
pub(crate) fn fit_tls(points: &[Point2]) -> Option<Line> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.x, b + p.y));
    let c = Point2::new(sx / n, sy / n);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in points {
        let d = *p - c;
        sxx += d.x * d.x;
        syy += d.y * d.y;
        sxy += d.x * d.y;
    }
    if sxx + syy <= 1e-18 {
        return None;
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    Some(Line { origin: c, dir: Point2::new(theta.cos(), theta.sin()) })
}

fn inliers(points: &[Point2], line: &Line, thr: f64) -> Vec<Point2> {
    points.iter().copied().filter(|p| line.distance(*p) <= thr).collect()
}

/// Sequential RANSAC: extracts one line at a time, refits it by total least
/// squares, clips it to its inlier extent and removes the points it explains.
pub fn ransac_line_segments(points: &[Point2], cfg: &ExtractionConfig) -> Vec<ReflectionSurface> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let thr = cfg.inlier_threshold_m;
    let mut remaining: Vec<Point2> = points.to_vec();
    let mut out = Vec::new();

    while remaining.len() >= cfg.min_inliers.max(2) {
        let n = remaining.len();
        let mut best: Option<(usize, Line)> = None;
        for _ in 0..cfg.ransac_iterations {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n - 1);
            let j = if j >= i { j + 1 } else { j };
            let Some(line) = Line::through(remaining[i], remaining[j]) else { continue };
            let count = remaining.iter().filter(|p| line.distance(**p) <= thr).count();
            if best.as_ref().is_none_or(|(c, _)| count > *c) {
                best = Some((count, line));
            }
        }
        let Some((count, line)) = best else { break };
        if count < cfg.min_inliers {
            break;
        }

        let mut line = line;
        let mut support = inliers(&remaining, &line, thr);
        for _ in 0..2 {
            let Some(refit) = fit_tls(&support) else { break };
            let s = inliers(&remaining, &refit, thr);
            if s.len() < cfg.min_inliers {
                break;
            }
            line = refit;
            support = s;
        }

        let (lo, hi) = support.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            let t = line.project(*p);
            (lo.min(t), hi.max(t))
        });
        // Points near the line but beyond the inlier band are mostly noise of
        // the same structure; leaving them would seed spurious short segments.
        let band = 2.0 * thr;
        let before = remaining.len();
        remaining.retain(|p| {
            let t = line.project(*p);
            !(line.distance(*p) <= band && t >= lo - band && t <= hi + band)
        });
        if remaining.len() == before {
            break;
        }

        let length = hi - lo;
        if length >= cfg.min_segment_length_m && length > MIN_SURFACE_LENGTH_M {
            let p0 = line.origin + line.dir * lo;
            let p1 = line.origin + line.dir * hi;
            if let Ok(s) = ReflectionSurface::new(p0, p1) {
                out.push(s);
            }
        }
    }
    out
}
