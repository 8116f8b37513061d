//! Finite commutative monoids, finite categories and functors between them.

pub mod category;
pub mod functor;
pub mod monoid;

pub use category::{opposite_category, validate_category, CategoryBuilder, FinCategory, Morphism};
pub use functor::{find_isomorphism, CatFunctor};
pub use monoid::{compose_homs, homomorphisms, validate_monoid, FinCommMonoid, MonoidHom};
