use super::space::{MetricSpace, Site};
use crate::error::{GeomError, Result};
use crate::tolerances::TOL_EXACT;

/// Finite discrete path with arclength parametrization and shortness slack.
///
/// On graphs consecutive vertices must be adjacent and increments are edge
/// weights; in explicit spaces increments are planar distances.
#[derive(Clone, Debug, PartialEq)]
pub struct PathRec {
    vertices: Vec<Site>,
    cum_len: Vec<f64>,
    slack: f64,
}

impl PathRec {
    /// Builds a path and measures its slack, `length - d(first, last)`.
    pub fn from_sites(space: &MetricSpace, vertices: Vec<Site>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(GeomError::Invalid("a path needs at least one vertex".into()));
        }
        for &v in &vertices {
            space.check_site(v)?;
        }
        let mut cum_len = Vec::with_capacity(vertices.len());
        cum_len.push(0.0);
        let mut total = 0.0;
        for w in vertices.windows(2) {
            let step = if space.is_graph() {
                let (a, b) = (w[0].vertex().unwrap_or(0), w[1].vertex().unwrap_or(0));
                if a == b {
                    0.0
                } else {
                    space
                        .neighbors(a)
                        .iter()
                        .find(|e| e.0 == b)
                        .map(|e| e.1)
                        .ok_or_else(|| {
                            GeomError::Invalid(format!("path step {a} -> {b} is not an edge"))
                        })?
                }
            } else {
                space.dist(w[0], w[1])?
            };
            total += step;
            cum_len.push(total);
        }
        let chord = space.dist(vertices[0], *vertices.last().expect("nonempty"))?;
        let slack = (total - chord).max(0.0);
        Ok(PathRec {
            vertices,
            cum_len,
            slack,
        })
    }

    pub fn vertices(&self) -> &[Site] {
        &self.vertices
    }

    pub fn cum_len(&self) -> &[f64] {
        &self.cum_len
    }

    /// The h for which the path is h-short: length minus endpoint distance.
    pub fn slack(&self) -> f64 {
        self.slack
    }

    pub fn length(&self) -> f64 {
        *self.cum_len.last().expect("nonempty")
    }

    pub fn start(&self) -> Site {
        self.vertices[0]
    }

    pub fn end(&self) -> Site {
        *self.vertices.last().expect("nonempty")
    }

    /// Index of the vertex whose arclength is nearest `t`; ties go to the
    /// earlier vertex.
    pub fn index_near(&self, t: f64) -> usize {
        let i = self.cum_len.partition_point(|&c| c < t);
        if i == 0 {
            return 0;
        }
        if i >= self.cum_len.len() {
            return self.cum_len.len() - 1;
        }
        // First vertex carrying the nearer arclength value.
        let (before, after) = (t - self.cum_len[i - 1], self.cum_len[i] - t);
        let j = if before <= after { i - 1 } else { i };
        let v = self.cum_len[j];
        self.cum_len.partition_point(|&c| c < v)
    }

    /// Restriction to `[0, len]`. Graph paths stop at the last vertex not
    /// beyond `len`; explicit paths end at the interpolated location.
    pub fn truncate(&self, space: &MetricSpace, len: f64) -> Result<PathRec> {
        if !(len >= 0.0) {
            return Err(GeomError::OutOfRange {
                what: "truncation length",
                value: len,
                lo: 0.0,
                hi: self.length(),
            });
        }
        if len >= self.length() {
            return Ok(self.clone());
        }
        let tol = TOL_EXACT * (1.0 + len);
        let keep = self.cum_len.partition_point(|&c| c <= len + tol).max(1);
        let mut sites = self.vertices[..keep].to_vec();
        if !space.is_graph() && self.cum_len[keep - 1] < len - tol {
            sites.push(space.locate(self, len)?);
        }
        PathRec::from_sites(space, sites)
    }

    /// The same path traversed backwards.
    pub fn reversed(&self, space: &MetricSpace) -> Result<PathRec> {
        let mut v = self.vertices.clone();
        v.reverse();
        PathRec::from_sites(space, v)
    }

    /// Checks the stored invariants against the space: increments are the
    /// distances of consecutive vertices and length ≤ chord + slack.
    pub fn check(&self, space: &MetricSpace) -> Result<()> {
        let tol = space.tolerance() * (1.0 + self.length());
        for (i, w) in self.vertices.windows(2).enumerate() {
            let step = self.cum_len[i + 1] - self.cum_len[i];
            let d = space.dist(w[0], w[1])?;
            if (step - d).abs() > tol {
                return Err(GeomError::Invalid(format!(
                    "increment {step} at step {i} differs from distance {d}"
                )));
            }
        }
        let chord = space.dist(self.start(), self.end())?;
        if self.length() > chord + self.slack + tol {
            return Err(GeomError::Invalid(format!(
                "length {} exceeds chord {chord} + slack {}",
                self.length(),
                self.slack
            )));
        }
        Ok(())
    }
}

/// Vertex nearest arclength `t` (ties to the earlier vertex).
pub fn point_at(path: &PathRec, t: f64) -> Result<Site> {
    let len = path.length();
    let tol = TOL_EXACT * (1.0 + len);
    if !(t >= -tol && t <= len + tol) {
        return Err(GeomError::OutOfRange {
            what: "arclength",
            value: t,
            lo: 0.0,
            hi: len,
        });
    }
    Ok(path.vertices()[path.index_near(t)])
}
