//! Grounding over a finite domain and exact weighted model counting of the
//! resulting propositional problem.

mod brute;
mod cnf;
mod dpll;
mod herbrand;

use num_rational::BigRational;
use thiserror::Error;

pub use brute::{brute_force_cap, wmc_bruteforce, wmc_bruteforce_capped, DEFAULT_MAX_ATOMS};
pub use cnf::{ground_tseitin, to_dimacs, GroundCnf};
pub use dpll::wmc_dpll;
pub use herbrand::{
    ground, groundings, herbrand_base, GroundAtom, GroundFormula, GroundProblem, HerbrandBase,
    MAX_GROUND_NODES, MAX_HERBRAND_ATOMS,
};

use crate::logic::{Count, Domain, LogicError, Mode, Scalar, WeightError, WeightedTheory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(
        "{atoms} ground atoms exceed the brute-force cap of {cap}; use the dpll engine or raise WFOMC_MAX_ATOMS"
    )]
    TooManyAtoms { atoms: usize, cap: usize },
    #[error("{0} is too large to build")]
    TooLarge(&'static str),
}

impl CountError {
    /// Whether the input was valid but exceeded a size limit.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            CountError::TooManyAtoms { .. } | CountError::TooLarge(_)
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Engine {
    /// Enumerates every assignment of the Herbrand base.
    Brute,
    /// Counts the ground Tseitin CNF by component-caching DPLL.
    Dpll,
    /// Brute force for small bases, DPLL otherwise.
    #[default]
    Auto,
}

/// Largest Herbrand base the automatic engine enumerates directly.
const AUTO_BRUTE_ATOMS: usize = 12;

/// Weighted first-order model count of `t` over `d`.
pub fn wfomc<S: Scalar>(t: &WeightedTheory, d: &Domain, engine: Engine) -> Result<S, CountError> {
    let g = ground(t, d)?;
    let brute = match engine {
        Engine::Brute => true,
        Engine::Dpll => false,
        Engine::Auto => g.base.len() <= AUTO_BRUTE_ATOMS,
    };
    if brute {
        wmc_bruteforce(&g)
    } else {
        wmc_dpll(&ground_tseitin(&g)?)
    }
}

/// [`wfomc`] in the requested arithmetic.
pub fn count(
    t: &WeightedTheory,
    d: &Domain,
    engine: Engine,
    mode: Mode,
) -> Result<Count, CountError> {
    Ok(match mode {
        Mode::Exact => Count::Exact(wfomc::<BigRational>(t, d, engine)?),
        Mode::Float => Count::Float(wfomc::<f64>(t, d, engine)?),
    })
}
