//! Coxeter diagrams, their parabolic subsystems, and a decision procedure for
//! strong solidity of the associated group von Neumann algebra.

pub mod classify;
pub mod corpus;
pub mod diagram;
pub mod family;
pub mod fixtures;
pub mod random;
pub mod solidity;
pub mod tits;

pub use classify::{Analysis, SubsetClassification};
pub use diagram::{
    parse_diagram, parse_diagram_with_warnings, CoxeterDiagram, DiagramBuilder, DiagramError,
    Label, ParseError, ParseErrorKind, ParseWarning, VertexSet, MAX_VERTICES,
};
pub use family::{build_family, recognize_irreducible, FamilyError, FamilyName, FamilyVerdict};
pub use solidity::{
    classify_report, classify_report_with_oracle, decide_caprace, decide_direct, verify_witness,
    ClassificationReport, Decision, EngineError, Method, Witness, WitnessViolation,
};
pub use tits::{hunt_infinite_order, InfiniteOrderCertificate, OracleSummary, Signature};
