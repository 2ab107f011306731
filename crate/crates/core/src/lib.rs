pub mod action;
pub mod amalgam;
pub mod census;
pub mod cli;
pub mod cone;
pub mod conrad;
pub mod error;
pub mod freeprod;
pub mod group;
pub mod json;
pub mod ses;
pub mod surd;
pub mod word;
