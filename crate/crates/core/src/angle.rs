//! Angle wrapping and interval arithmetic on the circle.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Wraps `theta` into `[-π, π)`.
pub fn wrap_angle(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::Domain("angle must be finite"));
    }
    Ok(wrap(theta))
}

/// Infallible wrap for values already known to be finite.
#[inline]
pub(crate) fn wrap(theta: f64) -> f64 {
    let mut r = (theta + PI) % TAU;
    if r < 0.0 {
        r += TAU;
    }
    let w = r - PI;
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// Signed smallest difference `a - b` on the circle.
#[inline]
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap(a - b)
}

/// Closed arc `[start, start + width]` on the circle, `start` wrapped to `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AngularInterval {
    start: f64,
    width: f64,
}

impl AngularInterval {
    /// Arc from `lo` counterclockwise to `hi`, where `hi >= lo` in unwrapped terms.
    /// Widths of `2π` or more collapse to the full circle.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain("interval bounds must be finite"));
        }
        if hi < lo {
            return Err(Error::Domain("interval upper bound below lower bound"));
        }
        Ok(Self::from_start_width(lo, hi - lo))
    }

    pub fn singleton(theta: f64) -> Self {
        Self::from_start_width(theta, 0.0)
    }

    pub fn full() -> Self {
        Self { start: -PI, width: TAU }
    }

    fn from_start_width(start: f64, width: f64) -> Self {
        if width >= TAU {
            Self::full()
        } else {
            Self { start: wrap(start), width }
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    /// Unwrapped end, `start + width`; may exceed π.
    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.width >= TAU
    }

    pub fn contains(&self, theta: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let mut offset = wrap(theta) - self.start;
        if offset < 0.0 {
            offset += TAU;
        }
        offset <= self.width
    }

    /// Intersection with another arc: zero, one or two pieces.
    pub fn intersect(&self, other: &AngularInterval) -> Vec<AngularInterval> {
        let mut out = Vec::new();
        if self.is_full() {
            out.push(*other);
            return out;
        }
        if other.is_full() {
            out.push(*self);
            return out;
        }
        // Work in coordinates relative to self.start, self = [0, wa].
        let wa = self.width;
        let mut t = other.start - self.start;
        if t < 0.0 {
            t += TAU;
        }
        for shift in [t, t - TAU] {
            let lo = shift.max(0.0);
            let hi = (shift + other.width).min(wa);
            if hi >= lo {
                out.push(Self::from_start_width(self.start + lo, hi - lo));
            }
        }
        // Both pieces can coincide when one touches the other at 0 and 2π.
        if out.len() == 2 && out[0].width == 0.0 && out[1].width == 0.0 {
            let d = angle_diff(out[0].start, out[1].start);
            if d.abs() < 1e-15 {
                out.pop();
            }
        }
        out
    }
}

/// Union of arcs. Pieces are kept as given; they need not be disjoint.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AngularSet {
    pieces: Vec<AngularInterval>,
}

impl AngularSet {
    pub fn empty() -> Self {
        Self { pieces: Vec::new() }
    }

    pub fn from_intervals(pieces: impl IntoIterator<Item = AngularInterval>) -> Self {
        Self { pieces: pieces.into_iter().collect() }
    }

    pub fn pieces(&self) -> &[AngularInterval] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.pieces.iter().any(|p| p.contains(theta))
    }

    pub fn intersect(&self, other: &AngularSet) -> AngularSet {
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                pieces.extend(a.intersect(b));
            }
        }
        AngularSet { pieces }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference wrap by repeated ±2π steps.
    fn wrap_by_steps(mut x: f64) -> f64 {
        while x >= PI {
            x -= TAU;
        }
        while x < -PI {
            x += TAU;
        }
        x
    }

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap_angle(0.0).unwrap(), 0.0);
        assert!((wrap_angle(3.0 * PI).unwrap() + PI).abs() < 1e-12);
        let w = wrap_angle(-PI - 1e-9).unwrap();
        assert!((w - wrap_by_steps(-PI - 1e-9)).abs() < 1e-12);
        assert!((w - (PI - 1e-9)).abs() < 1e-12);
        assert!(w < PI);
    }

    #[test]
    fn wrap_rejects_non_finite() {
        assert!(wrap_angle(f64::NAN).is_err());
        assert!(wrap_angle(f64::INFINITY).is_err());
    }

    #[test]
    fn wrap_matches_stepping_reference() {
        for i in -400..400 {
            let x = i as f64 * 0.173;
            assert!((wrap(x) - wrap_by_steps(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn interval_contains_across_wrap() {
        let iv = AngularInterval::new(PI - 0.3, PI + 0.3).unwrap();
        assert!(iv.contains(PI - 0.1));
        assert!(iv.contains(-PI + 0.1));
        assert!(!iv.contains(0.0));
    }

    #[test]
    fn intersect_straddling_wrap() {
        let a = AngularInterval::new(PI - 0.5, PI + 0.5).unwrap();
        let b = AngularInterval::new(-PI + 0.2, -PI + 1.0).unwrap();
        let c = a.intersect(&b);
        assert_eq!(c.len(), 1);
        assert!((c[0].start() - (-PI + 0.2)).abs() < 1e-12);
        assert!((c[0].width() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn intersect_two_pieces() {
        // Two wide arcs overlapping at both ends.
        let a = AngularInterval::new(-2.0, 2.0).unwrap();
        let b = AngularInterval::new(1.5, 1.5 + 4.0).unwrap();
        let c = a.intersect(&b);
        assert_eq!(c.len(), 2);
        // [1.5, 2] and [-2, 5.5 - 2π]
        let total: f64 = c.iter().map(|p| p.width()).sum();
        assert!((total - (0.5 + (5.5 - TAU + 2.0))).abs() < 1e-12);
        for p in &c {
            assert!(a.contains(p.start()) && b.contains(p.start()));
            assert!(a.contains(p.end()) && b.contains(p.end()));
        }
    }

    #[test]
    fn disjoint_arcs_do_not_intersect() {
        let a = AngularInterval::new(0.0, 0.5).unwrap();
        let b = AngularInterval::new(1.0, 1.5).unwrap();
        assert!(a.intersect(&b).is_empty());
    }

    #[test]
    fn singleton_intersection() {
        let a = AngularInterval::singleton(0.0);
        let b = AngularInterval::new(-0.1, 0.1).unwrap();
        let c = a.intersect(&b);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].width(), 0.0);
    }
}
