//! Exact growth series for the groups `G_m = Z^m *_{g -> g^3}`.

pub mod group;
pub mod series;
pub mod normal_form;
pub mod gfsa;
pub mod formulas;
pub mod bfs;
pub mod appendix;
pub mod verify;
