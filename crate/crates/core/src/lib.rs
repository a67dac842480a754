pub mod discovery;
pub mod eventlog;
pub mod labour;
pub mod model;
pub mod queue;
pub mod report;
