use thiserror::Error;

/// Errors shared by the word, canonical-system and fork layers.
///
/// Rewrites on abstract systems have their own error type
/// ([`crate::systems::RewriteError`]) because rewrite rejections are part of
/// that module's normal control flow rather than exceptional conditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid symbol {0:?}: the alphabet is {{a, b}}")]
    InvalidSymbol(char),

    #[error("period is empty")]
    EmptyPeriod,

    #[error("period is a proper power")]
    NonPrimitivePeriod,

    #[error("operation needs a period containing both letters")]
    SingleLetterPeriod,

    #[error("{0:?} is not a factor of the word")]
    NotAFactor(String),

    #[error("fork table has not been classified")]
    UnclassifiedTable,

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A structural claim that should hold for every periodic word failed on a
    /// concrete instance. This is a hard error: it means either the
    /// implementation or the claim itself is wrong, and silently continuing
    /// would make every downstream result meaningless.
    #[error("structural check failed: {0}")]
    Falsified(String),
}
