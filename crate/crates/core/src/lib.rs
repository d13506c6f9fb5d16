//! Minimal-transaction debt clearing.
//!
//! A group of `n` entities has borrowed money among itself. Clearing all debts
//! with the fewest transfers is equivalent to partitioning the entities into the
//! largest number of disjoint zero-sum blocks of net balances: each block of
//! size `k` settles with `k - 1` transfers, so `n - blocks` transfers suffice.
//!
//! The crate provides
//!
//! * the domain model and the greedy settler ([`debt`], [`settle`]),
//! * an exact bitmask oracle for small instances ([`oracle`]),
//! * a permutation-encoded genetic algorithm and a random-search baseline
//!   ([`evolve`]),
//! * generators for large instances with known optima ([`generate`]),
//! * text file formats and an experiment harness ([`format`], [`experiment`]).
//!
//! ```
//! use debtclear::{BorrowingLedger, settle};
//!
//! // Entities are 0-based here; files use 1-based labels.
//! let ledger = BorrowingLedger::new(
//!     5,
//!     vec![(0, 2, 4), (2, 3, 7), (3, 1, 2), (1, 0, 2), (0, 4, 1), (2, 4, 1), (4, 3, 2)],
//! )
//! .unwrap();
//! let d = ledger.debt_vector().unwrap();
//! assert_eq!(d.values(), &[3, 0, 4, -7, 0]);
//!
//! let plan = settle::greedy_settle(&d);
//! assert_eq!(plan.len(), 2);
//! assert!(settle::verify_clearing(&d, &plan));
//! ```

pub mod debt;
pub mod error;
pub mod evolve;
pub mod experiment;
pub mod format;
pub mod generate;
pub mod oracle;
pub mod par;
pub mod settle;

pub use debt::{BorrowingLedger, DebtVector, Partition, TransactionPlan, Transfer};
pub use error::{Error, Result};
