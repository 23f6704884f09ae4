//! Closed-form point sequences in the Euclidean plane.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::metric::{MetricSpace, Site};
use crate::sequences::{KindClaim, SeqRec};

/// Largest index n for which 4ⁿ is still represented with room to spare.
pub const MAX_EXAMPLE_INDEX: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleName {
    /// x_n = 4ⁿ + 2ⁿi and its conjugate y_n = 4ⁿ − 2ⁿi.
    ConjugatePair,
    /// x_n = 4ⁿ + 2ⁿ·t·i.
    Parabola(f64),
}

/// An explicit space with the origin as point 0, plus the requested
/// sequences whose points are stored as further vertices.
#[derive(Clone, Debug)]
pub struct ExamplePoints {
    pub space: MetricSpace,
    pub sequences: Vec<SeqRec>,
}

/// Builds one explicit-euclidean space holding every requested sequence for
/// n = 1..=n_max. `ConjugatePair` contributes two sequences, `Parabola` one.
pub fn explicit_example_points(names: &[ExampleName], n_max: usize) -> Result<ExamplePoints> {
    if n_max == 0 || n_max > MAX_EXAMPLE_INDEX {
        return Err(GeomError::OutOfRange {
            what: "n_max",
            value: n_max as f64,
            lo: 1.0,
            hi: MAX_EXAMPLE_INDEX as f64,
        });
    }
    let mut coords = vec![[0.0, 0.0]];
    let mut ranges = Vec::new();
    let mut push = |coords: &mut Vec<[f64; 2]>, t: f64| {
        let start = coords.len();
        for n in 1..=n_max as i32 {
            coords.push([4f64.powi(n), 2f64.powi(n) * t]);
        }
        ranges.push(start..coords.len());
    };
    for name in names {
        match *name {
            ExampleName::ConjugatePair => {
                push(&mut coords, 1.0);
                push(&mut coords, -1.0);
            }
            ExampleName::Parabola(t) => {
                if !t.is_finite() {
                    return Err(GeomError::Invalid(format!("t = {t} is not finite")));
                }
                push(&mut coords, t);
            }
        }
    }
    let space = MetricSpace::euclidean(coords, 0)?;
    let sequences = ranges
        .into_iter()
        .map(|r| SeqRec::new(r.map(Site::Vertex).collect(), KindClaim::Unclassified))
        .collect();
    Ok(ExamplePoints { space, sequences })
}
