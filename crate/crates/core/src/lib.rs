pub mod datalog;
pub mod dd;
pub mod fixtures;
pub mod horn;
pub mod logic;
pub mod ontology;
pub mod oracle;
pub mod pipeline;
pub mod syntax;
pub mod trace;
pub mod transitivity;
