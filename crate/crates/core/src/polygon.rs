//! Convex lattice polygons: Newton polygons of integer polynomials and
//! Hodge polygons built from slope multisets.

use num_rational::Ratio;

use crate::arith::modular::ord_p;
use crate::arith::IntPolynomial;

/// Vertices from `(0, 0)` with non-decreasing slopes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon {
    vertices: Vec<(i64, i64)>,
}

impl Polygon {
    pub fn new(vertices: Vec<(i64, i64)>) -> Self {
        Polygon { vertices }
    }

    /// One unit-width segment per slope, slopes sorted increasingly.
    pub fn from_slopes(slopes: &[i64]) -> Self {
        let mut s = slopes.to_vec();
        s.sort_unstable();
        let mut v = vec![(0, 0)];
        for (i, &m) in s.iter().enumerate() {
            let y = v[i].1 + m;
            v.push((i as i64 + 1, y));
        }
        Polygon { vertices: v }
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    pub fn endpoint(&self) -> (i64, i64) {
        *self.vertices.last().unwrap_or(&(0, 0))
    }

    pub fn width(&self) -> i64 {
        self.endpoint().0
    }

    pub fn segments(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn slopes(&self) -> Vec<Ratio<i64>> {
        self.vertices
            .windows(2)
            .map(|w| Ratio::new(w[1].1 - w[0].1, w[1].0 - w[0].0))
            .collect()
    }

    pub fn is_convex(&self) -> bool {
        self.slopes().windows(2).all(|w| w[0] <= w[1])
    }

    /// Height at abscissa `x` (linear interpolation), `None` outside.
    pub fn value_at(&self, x: i64) -> Option<Ratio<i64>> {
        let v = &self.vertices;
        if v.is_empty() || x < v[0].0 || x > v[v.len() - 1].0 {
            return None;
        }
        for w in v.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x0 <= x && x <= x1 {
                return Some(Ratio::from_integer(y0) + Ratio::new((y1 - y0) * (x - x0), x1 - x0));
            }
        }
        Some(Ratio::from_integer(v[0].1))
    }

    /// `self >= other` at every common integer abscissa.
    pub fn lies_on_or_above(&self, other: &Polygon) -> bool {
        let end = self.width().min(other.width());
        (0..=end).all(|x| match (self.value_at(x), other.value_at(x)) {
            (Some(a), Some(b)) => a >= b,
            _ => true,
        })
    }
}

/// Lower convex hull of `(n, ord_p c_n)` over the nonzero coefficients.
pub fn newton_polygon(poly: &IntPolynomial, p: u64) -> Polygon {
    let pts: Vec<(i64, i64)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(n, c)| ord_p(c, p).map(|v| (n as i64, v as i64)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly below the chord a -> pt
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    Polygon { vertices: hull }
}
