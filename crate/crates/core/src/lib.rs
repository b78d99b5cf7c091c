//! Exact commutator length in free groups and cyclic block-interchange
//! distance between cyclic words.
//!
//! * [`words`]: letters, free and cyclic reduction, chains.
//! * [`genus`]: commutator length of chains by pairing search, and the
//!   linear-time certificate check.
//! * [`fi`]: interchange decompositions, explicit commutator factorizations
//!   and the fixed-`k` decision procedure.
//! * [`cbi`]: block-interchange moves, the distance via commutator length,
//!   optimal move sequences and a breadth-first oracle.
//! * [`certify`]: the cyclic 2-gram counter `ν` and lower bounds from it.
//! * [`reduce`]: instance encoders and witness decoders for the hardness
//!   reductions.

pub mod cbi;
pub mod certify;
pub mod error;
pub mod fi;
pub mod genus;
pub mod reduce;
pub mod words;

pub use error::{CbiError, CertifyError, FiError, GenusError, ReduceError, WordError};
pub use genus::{GenusCertificate, Pairing, SearchOptions};
pub use words::{Alphabet, Chain, CyclicWord, Letter, Word};
