use crate::network::Network;
use crate::stoichiometry::StoichiometryView;

/// A network together with its derived stoichiometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    network: Network,
    view: StoichiometryView,
}

impl Model {
    pub fn new(network: Network) -> Self {
        let view = StoichiometryView::new(&network);
        Model { network, view }
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn view(&self) -> &StoichiometryView {
        &self.view
    }

    pub fn num_species(&self) -> usize {
        self.network.num_species()
    }

    pub fn num_complexes(&self) -> usize {
        self.network.num_complexes()
    }
}

impl From<Network> for Model {
    fn from(network: Network) -> Self {
        Model::new(network)
    }
}
