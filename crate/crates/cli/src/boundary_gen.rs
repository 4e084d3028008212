//! Boundary-data generation from a [`BoundarySpec`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use broadwell_core::{BoundaryTrace, Grid};

use crate::config::BoundarySpec;

#[derive(Deserialize)]
struct TraceFile {
    traces: [Vec<f64>; 4],
}

/// Samples the requested profile at the face cell centers. The seed only
/// matters for [`BoundarySpec::Random`]; equal seeds reproduce equal
/// traces exactly.
pub fn make_boundary(
    spec: &BoundarySpec,
    grid: Grid,
    seed: u64,
) -> Result<BoundaryTrace, String> {
    let n = grid.n_cells();
    let traces: [Vec<f64>; 4] = match spec {
        BoundarySpec::Constant { values } => {
            std::array::from_fn(|i| vec![values[i]; n])
        }
        BoundarySpec::Step { low, high, split } => std::array::from_fn(|_| {
            (0..n)
                .map(|i| if grid.center(i) < *split { *low } else { *high })
                .collect()
        }),
        BoundarySpec::Power { exponent, scale } => std::array::from_fn(|_| {
            (0..n)
                .map(|i| scale * grid.center(i).powf(*exponent))
                .collect()
        }),
        BoundarySpec::Random { mass } => {
            if *mass < 0.0 {
                return Err("random boundary mass must be nonnegative".into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut traces: [Vec<f64>; 4] =
                std::array::from_fn(|_| (0..n).map(|_| rng.gen::<f64>()).collect());
            let raw_mass = traces.iter().flatten().sum::<f64>() / n as f64;
            if raw_mass > 0.0 {
                let scale = mass / raw_mass;
                for t in &mut traces {
                    for v in t {
                        *v *= scale;
                    }
                }
            }
            traces
        }
        BoundarySpec::File { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read boundary file {}: {e}", path.display()))?;
            let file: TraceFile = serde_json::from_str(&text)
                .map_err(|e| format!("boundary file {}: {e}", path.display()))?;
            file.traces
        }
    };

    for (i, t) in traces.iter().enumerate() {
        if t.len() != n {
            return Err(format!(
                "boundary trace {} has {} samples, grid needs {n}",
                i + 1,
                t.len()
            ));
        }
        if t.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(format!(
                "boundary trace {} contains a negative or non-finite sample",
                i + 1
            ));
        }
    }
    Ok(BoundaryTrace::new(grid, traces))
}
