//! Measurements on polytopes and prismatoids.

pub mod hirsch;
pub mod monotone;
pub mod neighbourly;
pub mod pca;
pub mod prismatoid;
pub mod report;
pub mod width;

pub use hirsch::{hirsch_report, HirschReport};
pub use monotone::{dual_monotone_length_exact, dual_monotone_length_float, monotone_path_length, TieBreak};
pub use neighbourly::{neighbourliness, Neighbourliness};
pub use pca::{pca_scale_profile, ScaleProfile};
pub use prismatoid::{decks_by_last_coordinate, detect_prismatoid, detect_prismatoid_with, Deck, DeckGraph, Prismatoid};
pub use report::{verify_polytope, VerificationReport, VerifyOptions};
pub use width::{average_width, defect, width, DefectConvention, WidthHeuristic};
