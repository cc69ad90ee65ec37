//! Convex approximations of nonnegative matrix factorization.
//!
//! Symmetric NMF asks for `A ~ U U^T` with `U >= 0`; the matrices that
//! admit such a factorization exactly are the completely positive (CP)
//! matrices, and optimizing over them is NP-hard. This crate solves convex
//! *restrictions* instead: after the change of variables `A_ij = exp(X_ij)`,
//! requiring `X` positive semidefinite guarantees `exp_H(X)` is completely
//! positive, and the resulting problems (KL or squaredloss) are convex
//! in `X`. A projected gradient method solves them, a dual feasible point
//! certifies optimality for the KL path, and a constructive factorization
//! turns `exp_H(X)` back into an explicit nonnegative `U`.
//!
//! What lives where:
//!
//! | module | contents |
//! |--------|----------|
//! | [`matrix`] | dense symmetric / rectangular / nonnegative-factor types, Hadamard ops |
//! | [`eigen`] | cyclic Jacobi eigensolver, PSD cone projection |
//! | [`objectives`] | KL and squared losses, gradients, dual objective, duality gap |
//! | [`solver`] | projected gradient descent, Dykstra projection onto intersections |
//! | [`factorize`] | CP factorization of `exp_H(X)`, rank-two factorizer, cp-rank bound |
//! | [`decompose`] | end-to-end solves: symmetric KL/MSE, sparse low-rank, recursive, nonsymmetric |
//! | [`graph`] | block-graph generator, NMF and spectral partitioners, benchmark sweep |
//! | [`baselines`] | multiplicative updates and alternating least squares |
//! | [`io`] | MatrixMarket files, CSV outputs, run summaries |
//! | [`cli`] | the `cpnmf` command-line driver |
//!
//! All solvers are deterministic: identical inputs (and seeds) produce
//! bit-identical outputs.

pub mod baselines;
pub mod cli;
pub mod decompose;
pub mod eigen;
pub mod error;
pub mod factorize;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod objectives;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, FactorMatrix, SymMatrix};
