//! Hard instance distributions: parameters, sampler, property audit, file format.

pub mod format;
pub mod instance;
pub mod params;
pub mod properties;

pub use format::{parse_misr, write_misr, GenConfig, LoadedInstance, ParamMode};
pub use instance::{
    assemble, base_instance_from_bits, sample_base_instance, sample_instance, Hierarchy, Instance,
    LevelPlan, Node, Side, SpecialSubgraph, ToyParams,
};
pub use params::{compute_parameters, LevelParams, ParamTable};
pub use properties::check_properties;
