pub mod acceptance;
pub mod report;
