//! Shared workloads for the solver benchmarks.

use picard_core::{lookup, CatalogEntry, DomainTube, Params};

/// A catalog system with a fixed starting point.
pub struct Workload {
    pub entry: CatalogEntry,
    pub tube: DomainTube,
}

pub fn workload(system: &str, y0: Vec<f64>, eta: Vec<f64>, b: f64) -> Workload {
    let entry = lookup(system, &Params::new()).expect("catalog system");
    let tube = DomainTube::new(y0, eta, 0.0, b).expect("valid tube");
    Workload { entry, tube }
}

/// Scalar pendulum plus two bodies in space.
pub fn standard() -> Vec<Workload> {
    vec![
        workload("pendulum", vec![0.5], vec![0.3], 1.0),
        workload(
            "nbody",
            vec![0.5, 0.0, -0.5, 0.0, 0.0, 0.5],
            vec![0.0, 0.3, 0.0, -0.3, 0.0, 0.0],
            0.25,
        ),
    ]
}
