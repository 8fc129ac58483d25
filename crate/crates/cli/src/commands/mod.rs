mod cutoff;
mod gen;
mod mix;
mod nb;
mod spectra;
mod tree_calc;
mod verify;

pub use cutoff::run as cutoff;
pub use gen::run as gen;
pub use mix::run as mix;
pub use nb::run as nb;
pub use spectra::run as spectra;
pub use tree_calc::run as tree_calc;
pub use verify::run as verify;
