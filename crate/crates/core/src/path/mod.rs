//! Explicit paths between p-th roots.

pub mod connect;
pub mod family;
pub mod lift;
pub mod section;
pub mod segment;

pub use connect::{
    connect_roots, construct_root, verify, verify_with_cap, Certificate, Endpoints, RootPath, SampleRecord,
    SegmentCertification,
};
pub use family::{basic_family, basic_family_similarity};
pub use lift::{lift_family, LiftChart, LiftedFamily, VerifyMode};
pub use section::{conjugation_section, section_eval, section_setup, ConjugationSection, SectionData};
pub use segment::{adjacency_segment, centralizer_segment, AdjacencySegment, CentralizerSegment, PathSegment};
