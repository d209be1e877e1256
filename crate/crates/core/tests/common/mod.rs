#![allow(dead_code)]

use graph_ascent::graph::{barabasi_albert, er_connectivity_p, erdos_renyi, grid_graph};
use graph_ascent::seed::{derive_seed, rng_from_seed};
use graph_ascent::spectral::{coherence_profile, synth_perturbed, PositivityMargin};
use graph_ascent::{CoherenceProfile, Graph, GraphFunction, SpectralBasis, WalkKernel};
use rand::seq::IndexedRandom;
use rand::Rng;

/// A random graph with a random (approximately) smooth positive function.
pub struct Instance {
    pub label: String,
    pub graph: Graph,
    pub basis: SpectralBasis,
    pub diameter: usize,
    pub k: usize,
    pub gamma: f64,
    pub eps: f64,
    pub f: GraphFunction,
    pub coherence: CoherenceProfile,
}

pub fn random_graph(seed: u64, n_min: usize, n_max: usize) -> (String, Graph) {
    let mut rng = rng_from_seed(seed);
    match rng.random_range(0..3) {
        0 => loop {
            let rows = rng.random_range(2..=n_max / 2);
            let cols = rng.random_range(2..=n_max / rows);
            if (n_min..=n_max).contains(&(rows * cols)) {
                return (format!("grid{rows}x{cols}"), grid_graph(rows, cols).unwrap());
            }
        },
        1 => {
            let n = rng.random_range(n_min..=n_max);
            (format!("er{n}"), erdos_renyi(n, er_connectivity_p(n), rng.random()).unwrap())
        }
        _ => {
            let n = rng.random_range(n_min..=n_max);
            let m = rng.random_range(1..=3.min(n - 1));
            (format!("ba{n}m{m}"), barabasi_albert(n, m, rng.random()).unwrap())
        }
    }
}

pub fn random_instance(seed: u64, n_max: usize) -> Instance {
    let (name, graph) = random_graph(derive_seed(seed, &[0]), 6, n_max);
    let mut rng = rng_from_seed(derive_seed(seed, &[1]));
    let basis = SpectralBasis::of_graph(&graph).unwrap();
    let k = rng.random_range(1..=8.min(graph.n()));
    let gamma = *[0.0, 0.5, 1.0].choose(&mut rng).unwrap();
    let eps = *[0.0, 0.05].choose(&mut rng).unwrap();
    let f = synth_perturbed(&basis, k, rng.random(), eps, PositivityMargin::default()).unwrap();
    let coherence = coherence_profile(&basis, k).unwrap();
    let diameter = graph.diameter().unwrap();
    let label = format!("{name} k={k} gamma={gamma} eps={eps}");
    Instance { label, graph, basis, diameter, k, gamma, eps, f, coherence }
}

impl Instance {
    pub fn exponential(&self) -> WalkKernel<'_> {
        WalkKernel::exponential(&self.graph, &self.f, self.gamma).unwrap()
    }

    /// Laplacian walk; the ε-weighted proposal when the instance is perturbed.
    pub fn laplacian(&self) -> WalkKernel<'_> {
        if self.eps == 0.0 {
            WalkKernel::laplacian(&self.graph, &self.f, &self.coherence).unwrap()
        } else {
            WalkKernel::laplacian_eps(&self.graph, &self.f, &self.coherence, self.eps).unwrap()
        }
    }

    pub fn vanilla(&self) -> WalkKernel<'_> {
        WalkKernel::vanilla(&self.graph, &self.f).unwrap()
    }

    pub fn mh_kernels(&self) -> Vec<WalkKernel<'_>> {
        vec![self.exponential(), self.laplacian()]
    }
}
