//! Higher-order averaging for planar polynomial perturbations of centers.
//!
//! The pipeline turns a perturbed system `ẋ = P + p`, `ẏ = Q + q` into the
//! polar normal form `dr/dθ = Σ εⁱ Fᵢ(θ, r)`, solves the unperturbed equation
//! in closed form for separable `F₀ = g(θ) rᵐ`, builds the averaged functions
//! `f_k(z) = y_k(2π, z)/k!` and counts their simple zeros.

pub mod averaging;
pub mod expr;
pub mod normal_form;
pub mod roots;
pub mod runner;
pub mod unperturbed;
