//! Normal-form conversions, Skolemization and unit propagation.

mod cnf;
mod namer;
mod nnf;
mod skolem;
mod unit;

use thiserror::Error;

use crate::logic::NormalForm;

pub use cnf::{to_cnf_distribute, to_cnf_tseitin, Clause, MAX_DISTRIBUTED_CLAUSES};
pub use namer::FreshNamer;
pub use nnf::{to_nnf, to_prenex};
pub use skolem::{
    eliminate_one, innermost_site, internal_quantifiers, ladder_step, skolemize,
    skolemize_prenex_shortcut, skolemize_with, ElimSite, LadderStage, SkolemConfig, SkolemStats,
};
pub use unit::unit_propagate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("elimination site no longer matches the theory")]
    StaleSite,
    #[error("site is not an existential preceded only by universal quantifiers")]
    NotShortcutSite,
    #[error("sentence {0} is not in prenex form; use full Skolemization")]
    NotPrenex(usize),
    #[error("theory is in {0} form; Skolem normal form is required")]
    NotSkolem(NormalForm),
    #[error("conversion would exceed {limit} clauses")]
    TooLarge { limit: usize },
}
