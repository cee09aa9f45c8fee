//! Worked sentences used throughout the tests and the command line tool.

/// A GAF sentence outside GBSR.
pub const PHI1: &str = "exists U. forall X. exists V. forall Z. exists Y1. exists Y2. \
((~p(U,X) | (q(X,V) & r(U,Z,Y1))) & (p(U,X) | (~q(X,V) & ~r(U,Z,Y2))))";

/// A sentence equivalent to [`PHI1`] with no existential depending on two
/// universals.
pub const PHI1_PRIME: &str = "exists U. ( \
(forall X. (~p(U,X) | (exists V. q(X,V)))) \
& ((forall X. ~p(U,X)) | (forall Z. exists Y1. r(U,Z,Y1))) \
& (forall X. ((exists V. ~q(X,V)) | p(U,X))) \
& ((forall X. exists V. ~q(X,V)) | (forall Z. exists Y1. r(U,Z,Y1))) \
& ((forall Z. exists Y2. ~r(U,Z,Y2)) | (forall X. p(U,X))) \
& ((forall Z. exists Y2. ~r(U,Z,Y2)) | (forall X. exists V. q(X,V))) \
& ((forall Z. exists Y2. ~r(U,Z,Y2)) | (forall Z. exists Y1. r(U,Z,Y1))))";

/// A sentence in both GBSR and GAF but in none of the classical fragments.
pub const PHI2: &str = "exists U. forall X. exists Y. forall Z. ((p(U,Z) & q(U,X)) | (p(Y,Z) & q(U,Y)))";

/// An `∃*∀*` sentence equivalent to [`PHI2`].
pub const PHI2_PRIME: &str = "exists U Y. forall X Z V. ( \
((p(U,X) | p(Y,X)) & p(U,X) & q(U,X)) \
| ((p(U,Z) | p(Y,Z)) & q(U,Y) & q(U,Z)) \
| ((p(U,V) | p(Y,V)) & q(U,Y) & p(Y,V)))";
