//! Name-keyed registry of normalization variants. Config and CLI select a
//! layer by its registered name; adding a variant means adding one row.

use crate::bn::BnLayer;
use crate::error::NormError;
use crate::layer::NormLayer;
use crate::sn::SnLayer;

struct NormFactory {
    name: &'static str,
    build: fn(usize) -> Box<dyn NormLayer>,
}

static FACTORIES: &[NormFactory] = &[
    NormFactory { name: "bn", build: |c| Box::new(BnLayer::new(c)) },
    NormFactory { name: "sn", build: |c| Box::new(SnLayer::new(c)) },
];

pub fn available_norms() -> Vec<&'static str> {
    FACTORIES.iter().map(|f| f.name).collect()
}

pub fn create_norm(kind: &str, channels: usize) -> Result<Box<dyn NormLayer>, NormError> {
    FACTORIES
        .iter()
        .find(|f| f.name.eq_ignore_ascii_case(kind))
        .map(|f| (f.build)(channels))
        .ok_or_else(|| NormError::UnknownKind(kind.to_string()))
}
