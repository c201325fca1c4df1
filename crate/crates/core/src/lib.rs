//! Exact computation in the reduced imaginary Verma module setting: Cartan
//! data and the g-table, ordered monomials, the twisted star product with
//! straightening, the operators x̃ and Ω̃, the bilinear form, and the crystal
//! lattice and basis checks.
//!
//! ```
//! use imcrystal::{build_cartan, Element, Engine, Family, LaurentQ, OmegaVariant, Word};
//!
//! let a1 = build_cartan(Family::A, 1).unwrap();
//! let engine = Engine::new(&a1);
//! let w = Element::from_word(Word::from_pairs(&[(1, 1), (1, 0)]));
//! let out = engine.omega(OmegaVariant::Twisted, 1, 0, &w, &mut Default::default()).unwrap();
//! assert_eq!(out, Element::term(Word::from_pairs(&[(1, 1)]), LaurentQ::q(2)));
//! ```

pub mod cartan;
pub mod crystal;
pub mod engine;
pub mod error;
pub mod omega;
pub mod ordx;
pub mod pairing;
pub mod qcoeff;
pub mod report;
pub mod star;
pub mod words;

pub use cartan::{build_cartan, resolve_family, CartanData, Family};
pub use crystal::{classify, CrystalWindow, HighestWeight, ModQClass, Operator};
pub use engine::{Diagnostics, Engine, EngineOptions};
pub use error::{Error, Result};
pub use omega::{min_struct_support, OmegaVariant};
pub use qcoeff::{Coeff, LaurentQ};
pub use star::{star_case, StarCaseId};
pub use words::{
    enumerate_ordered, enumerate_window, parse_generator, parse_word, Element, Generator, Weight, Word, WordWindow,
};
