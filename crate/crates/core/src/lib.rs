//! Exact compilation of `2^n x 2^n` unitaries into circuits of fully
//! controlled single-qubit and controlled-X gates.
//!
//! The pipeline is: pick an [`OrderArray`] (conventional or palindromic),
//! factor the unitary into two-level matrices with [`two_level_decompose`],
//! turn each factor into a Gray-code palindromic subcircuit with
//! [`construct_circuit`], then cancel adjacent X gates with [`cancel_pass`].
//! [`verify`] rebuilds the circuit's unitary by state-vector simulation.
//!
//! ```
//! use tlqc_core::{cancel_pass, construct_circuit, random_unitary, two_level_decompose, verify, OrderArray};
//!
//! let u = random_unitary(3, 42).unwrap();
//! let d = two_level_decompose(&u, &OrderArray::poa(3).unwrap()).unwrap();
//! let circuit = cancel_pass(&construct_circuit(&d, false).unwrap());
//! assert_eq!(circuit.len(), 50);
//! assert!(verify(&u, &circuit, 1e-9).unwrap().pass);
//! ```

pub mod decompose;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod ordering;
pub mod palindrome;
pub mod sim;
pub mod synth;

pub use decompose::{decompose_with, progress_invariant_check, two_level_decompose, Decomposition, Update};
pub use error::{Error, Result};
pub use linalg::{random_unitary, Complex, ComponentMatrix, Matrix, TwoLevelMatrix};
pub use optimize::{cancel_pass, count_structural, GateCounts};
pub use ordering::{OrderArray, OrderKind};
pub use palindrome::{build_trie, overlap, GateSymbol, PalindromeTrie};
pub use sim::{circuit_to_matrix, verify, StateVector, VerificationReport};
pub use synth::{
    build_subcircuit, construct_circuit, gray_code, Circuit, ControlledGate, GateOp, GrayCode, PalindromicSubcircuit,
};
