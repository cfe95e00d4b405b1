//! Field delineation for bibliometric corpora.
//!
//! Journal sets for a research field are built three ways (subject
//! category, micro-cluster overlap, and a lexical query followed by
//! citation scree tests), compared as a Venn partition, and scored with
//! scope-based precision, expert-ballot precision, recall and Fleiss's kappa.

pub mod breakpoint;
pub mod citestats;
pub mod corpus;
pub mod evalkit;
pub mod graphout;
pub mod lexquery;
pub mod pipelines;
pub mod reproduce;
pub mod synth;
