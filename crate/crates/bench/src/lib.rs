//! Fixture loading for the benchmarks.

use std::path::PathBuf;
use std::sync::Arc;

use mml_core::provider::{DirDts, ProviderEnv};
use mml_core::world::MemoryWorld;
use mml_core::WorldSnapshot;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn world() -> Arc<WorldSnapshot> {
    Arc::new(WorldSnapshot::load(&fixtures().join("world.json")).expect("fixture world"))
}

pub fn env() -> ProviderEnv {
    ProviderEnv::new(Arc::new(MemoryWorld(world())), Arc::new(DirDts(fixtures().join("dts"))))
}

pub fn program(name: &str) -> String {
    std::fs::read_to_string(fixtures().join("programs").join(format!("{name}.mml"))).expect("fixture program")
}
