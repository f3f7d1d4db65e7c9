//! Width calculus for links presented as Morse event sequences.
//!
//! The crate computes level profiles (gap counts, thin and thick levels,
//! the width ladder), rewrites presentations with width-changing moves,
//! searches the move graph for thinner presentations, checks the width
//! inequalities of thin position exhaustively on a two-sided strand model, and
//! audits compressing-disk certificates for thin level spheres.

pub mod certs;
pub mod morse;
pub mod moves;
pub mod search;
pub mod text;
pub mod twoside;

mod union_find;

use serde::{Deserialize, Serialize};

pub use morse::{EventKind, GapIndex, LevelProfile, MorseEvent, MorsePresentation};

/// Which side of a level sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::Above => Side::Below,
            Side::Below => Side::Above,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Above => "above",
            Side::Below => "below",
        }
    }
}
