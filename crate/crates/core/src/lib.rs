pub mod corpus;
pub mod encoding;
pub mod engine;
pub mod report;
pub mod rules;
pub mod verify;
