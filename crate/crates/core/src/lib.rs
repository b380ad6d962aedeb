//! Certified rigid families of finite valuated trees, their encoding as free
//! modules with distinguished submodules, and exact computation of the
//! resulting Hom and End spaces.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`valtrees`] generates and certifies pools of valuated trees with no
//!    valuated homomorphisms between distinct members.
//! 2. [`encoder`] unfolds a pool into a basis index set and a module with
//!    distinguished submodules.
//! 3. [`homsolver`] computes Hom spaces as exact linear systems and recovers a
//!    tree homomorphism from any non-scalar endomorphism.
//! 4. [`rigidsys`] checks fully rigid systems indexed by subsets and the
//!    passage to torsion-free ℤ-modules via prime-divisibility hulls.
//!
//! [`pipeline`] strings the stages together and [`artifacts`] defines the JSON
//! files exchanged between them.

pub mod artifacts;
pub mod config;
pub mod digest;
pub mod encoder;
pub mod exactlin;
pub mod homsolver;
pub mod pipeline;
pub mod rigidsys;
pub mod valtrees;
