//! Lattice nets of planar pieces glued along shared vertices.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{GeomError, Result};
use crate::metric::{MetricSpace, PointId};

/// Integer lattice key inside one piece.
pub(crate) type Key = (i64, i64);

/// Edge weight between two planar positions.
pub(crate) type Weight = fn([f64; 2], [f64; 2]) -> f64;

pub(crate) fn euclidean_weight(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Half-plane length element |dz|/y evaluated at the segment midpoint.
pub(crate) fn halfplane_weight(a: [f64; 2], b: [f64; 2]) -> f64 {
    euclidean_weight(a, b) / (0.5 * (a[1] + b[1]))
}

/// Accumulates pieces; vertices are numbered in insertion order, and a key
/// may be aliased to a vertex created by an earlier piece.
pub(crate) struct NetBuilder {
    coords: Vec<[f64; 2]>,
    pieces: Vec<BTreeMap<Key, PointId>>,
    edges: Vec<(PointId, PointId, f64)>,
    weight: Weight,
}

impl NetBuilder {
    pub(crate) fn new(weight: Weight) -> Self {
        NetBuilder {
            coords: Vec::new(),
            pieces: Vec::new(),
            edges: Vec::new(),
            weight,
        }
    }

    /// Opens a new piece and returns its index.
    pub(crate) fn piece(&mut self) -> usize {
        self.pieces.push(BTreeMap::new());
        self.pieces.len() - 1
    }

    pub(crate) fn add(&mut self, piece: usize, key: Key, xy: [f64; 2]) -> PointId {
        if let Some(&id) = self.pieces[piece].get(&key) {
            return id;
        }
        let id = self.coords.len();
        self.coords.push(xy);
        self.pieces[piece].insert(key, id);
        id
    }

    pub(crate) fn alias(&mut self, piece: usize, key: Key, id: PointId) {
        self.pieces[piece].insert(key, id);
    }

    pub(crate) fn lookup(&self, piece: usize, key: Key) -> Option<PointId> {
        self.pieces[piece].get(&key).copied()
    }

    /// King-move edges inside every piece.
    fn connect(&mut self) {
        const FORWARD: [Key; 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];
        for piece in &self.pieces {
            for (&(i, j), &a) in piece {
                for (di, dj) in FORWARD {
                    if let Some(&b) = piece.get(&(i + di, j + dj)) {
                        if a != b {
                            let w = (self.weight)(self.coords[a], self.coords[b]);
                            self.edges.push((a, b, w));
                        }
                    }
                }
            }
        }
    }

    pub(crate) fn finish(mut self, eps: f64, basepoint: PointId) -> Result<MetricSpace> {
        if self.coords.is_empty() {
            return Err(GeomError::Invalid("region is empty at this eps/extent".into()));
        }
        self.connect();
        let coords = self.coords.into_iter().map(Some).collect();
        let space = MetricSpace::graph(coords, self.edges, eps, basepoint)?;
        ensure_connected(&space)?;
        Ok(space)
    }
}

pub(crate) fn ensure_connected(space: &MetricSpace) -> Result<()> {
    let n = space.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([space.basepoint()]);
    seen[space.basepoint()] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &(v, _) in space.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    if count == n {
        Ok(())
    } else {
        Err(GeomError::Resolution(format!(
            "net is disconnected: {count} of {n} vertices reachable from the basepoint"
        )))
    }
}

/// Number of lattice steps of size `eps` that fit in `len`.
pub(crate) fn steps(len: f64, eps: f64) -> i64 {
    (len / eps + 1e-9).floor() as i64
}

/// `len / eps` as an integer, or an error if the lattice does not hit it.
pub(crate) fn aligned_steps(len: f64, eps: f64, what: &str) -> Result<i64> {
    let r = len / eps;
    if (r - r.round()).abs() > 1e-9 {
        return Err(GeomError::Invalid(format!(
            "eps = {eps} does not divide {what} = {len}"
        )));
    }
    Ok(r.round() as i64)
}
