use num_rational::Ratio;
use serde_json::{json, Value};

use super::{vp_int, PadicError, Valuation};
use crate::poly::IntPolynomial;

/// One edge of a Newton polygon. Slopes are read left to right; the roots
/// attached to the edge have valuation `-slope`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub slope: Ratio<i64>,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
    /// Order of vanishing at 0; those roots are not represented by segments.
    pub zero_roots: usize,
}

impl NewtonPolygon {
    /// `(valuation, multiplicity)` of the nonzero roots, ascending in valuation.
    pub fn root_valuations(&self) -> Vec<(Ratio<i64>, usize)> {
        self.segments
            .iter()
            .rev()
            .map(|s| (-s.slope, s.length))
            .collect()
    }

    /// Sum of `-v(alpha)` over roots with negative valuation.
    pub fn negative_valuation_mass(&self) -> Ratio<i64> {
        self.segments
            .iter()
            .filter(|s| s.slope > Ratio::from_integer(0))
            .map(|s| s.slope * s.length as i64)
            .sum()
    }

    /// Debug dump: `{"vertices": [[i, v]...], "segments": [{"slope": "a/b", "length": n}...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|&(i, v)| json!([i, v])).collect::<Vec<_>>(),
            "segments": self.segments.iter().map(|s| json!({
                "slope": format!("{}/{}", s.slope.numer(), s.slope.denom()),
                "length": s.length,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Lower convex hull of `{(i, v_p(a_i)) : a_i != 0}`.
pub fn newton_polygon(f: &IntPolynomial, p: u64) -> Result<NewtonPolygon, PadicError> {
    match f.degree() {
        None => return Err(PadicError::ZeroPolynomial),
        Some(0) => return Err(PadicError::NoRoots),
        _ => {}
    }
    let points: Vec<(usize, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match vp_int(c, p) {
            Valuation::Finite(v) => Some((i, v)),
            Valuation::Infinite => None,
        })
        .collect();

    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly below the chord a -> pt
            let cross = (b.0 as i64 - a.0 as i64) * (pt.1 - a.1)
                - (b.1 - a.1) * (pt.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }

    let segments = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            Segment {
                slope: Ratio::new(w[1].1 - w[0].1, len as i64),
                length: len,
            }
        })
        .collect();

    Ok(NewtonPolygon {
        zero_roots: hull[0].0,
        vertices: hull,
        segments,
    })
}
