//! Fixtures shared by the criterion benches.

use kronred_core::synth::{random_network, random_removal, random_state, GenOptions};
use kronred_core::{Model, StoichiometryView};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible all-reversible network with a removal and a state.
pub fn fixture(seed: u64) -> (Model, Vec<usize>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = GenOptions { reversible: 1.0, boundary: 0.3, ..GenOptions::default() };
    loop {
        let net = random_network(&mut rng, &opts);
        let view = StoichiometryView::new(&net);
        let removed = random_removal(&mut rng, view.linkage_classes().0);
        if removed.is_empty() {
            continue;
        }
        let x = random_state(&mut rng, net.num_species(), 0.1, 10.0);
        return (Model::new(net), removed, x);
    }
}
