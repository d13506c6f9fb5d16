//! Domain types: borrowing ledgers, net debt vectors, zero-sum partitions and
//! transaction plans.
//!
//! Entity indices are 0-based throughout the Rust API. The text formats in
//! [`crate::format`] use 1-based indices.
//!
//! Sign convention: a borrowing `(borrower, lender, w)` means the borrower must
//! pay `w` to the lender, so it adds `w` to the borrower's net debt and
//! subtracts `w` from the lender's. A positive value is a net payer.

use crate::error::{Error, Result};

/// Largest accepted entity count.
pub const MAX_ENTITIES: usize = 1_000_000;

/// Largest accepted magnitude of a single amount or net debt value.
///
/// Together with [`MAX_ENTITIES`] this keeps every partial sum of any
/// reordering of a debt vector below `10^18`, well inside `i64`.
pub const MAX_MAGNITUDE: i64 = 1_000_000_000_000;

fn check_entity_count(n: usize) -> Result<()> {
    if n > MAX_ENTITIES {
        return Err(Error::Overflow(format!("entity count {n} exceeds the limit of {MAX_ENTITIES}")));
    }
    Ok(())
}

fn check_magnitude(what: &str, value: i64) -> Result<()> {
    if value.checked_abs().is_none_or(|v| v > MAX_MAGNITUDE) {
        return Err(Error::Overflow(format!("{what} {value} exceeds the magnitude bound {MAX_MAGNITUDE}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Borrowing {
    pub borrower: usize,
    pub lender: usize,
    pub amount: i64,
}

/// Raw list of borrowings among `n` entities (a loop-free weighted multigraph).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorrowingLedger {
    n: usize,
    records: Vec<Borrowing>,
}

impl BorrowingLedger {
    /// Builds a ledger from 0-based `(borrower, lender, amount)` triples.
    pub fn new(n: usize, records: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLedger("entity count must be positive".into()));
        }
        check_entity_count(n)?;
        let records = records
            .into_iter()
            .enumerate()
            .map(|(k, (borrower, lender, amount))| {
                if borrower >= n || lender >= n {
                    return Err(Error::InvalidLedger(format!("record {k}: entity index out of range for n = {n}")));
                }
                if borrower == lender {
                    return Err(Error::InvalidLedger(format!("record {k}: entity {borrower} borrows from itself")));
                }
                if amount <= 0 {
                    return Err(Error::InvalidLedger(format!("record {k}: amount {amount} is not positive")));
                }
                check_magnitude("amount", amount)?;
                Ok(Borrowing { borrower, lender, amount })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, records })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn records(&self) -> &[Borrowing] {
        &self.records
    }

    /// Net debt of every entity: amounts borrowed minus amounts lent.
    pub fn debt_vector(&self) -> Result<DebtVector> {
        let mut d = vec![0i64; self.n];
        for r in &self.records {
            d[r.borrower] = d[r.borrower]
                .checked_add(r.amount)
                .filter(|v| v.abs() <= MAX_MAGNITUDE)
                .ok_or_else(|| Error::Overflow(format!("net debt of entity {} leaves the bound", r.borrower)))?;
            d[r.lender] = d[r.lender]
                .checked_sub(r.amount)
                .filter(|v| v.abs() <= MAX_MAGNITUDE)
                .ok_or_else(|| Error::Overflow(format!("net debt of entity {} leaves the bound", r.lender)))?;
        }
        DebtVector::new(d)
    }
}

/// Net debt per entity. Always sums to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DebtVector(Vec<i64>);

impl DebtVector {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        check_entity_count(values.len())?;
        let mut total: i128 = 0;
        for &v in &values {
            check_magnitude("debt value", v)?;
            total += i128::from(v);
        }
        if total != 0 {
            return Err(Error::NonZeroSum(total));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|&&v| v != 0).count()
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

impl std::ops::Index<usize> for DebtVector {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// Disjoint zero-sum blocks of entity indices covering every entity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates that `blocks` is a zero-sum partition of the entities of `d`.
    pub fn new(d: &DebtVector, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; d.len()];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            let mut sum = 0i64;
            for &e in block {
                if e >= d.len() {
                    return Err(Error::InvalidPartition(format!("entity {e} out of range")));
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(Error::InvalidPartition(format!("entity {e} appears twice")));
                }
                sum += d[e];
            }
            if sum != 0 {
                return Err(Error::InvalidPartition(format!("block {b} sums to {sum}")));
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPartition(format!("entity {missing} is not covered")));
        }
        Ok(Self { blocks })
    }

    pub(crate) fn from_blocks_unchecked(blocks: Vec<Vec<usize>>) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn into_blocks(self) -> Vec<Vec<usize>> {
        self.blocks
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transfer {
    pub from: usize,
    pub to: usize,
    pub amount: i64,
}

/// A list of money transfers. Every amount is positive and no entity pays itself.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransactionPlan {
    transfers: Vec<Transfer>,
}

impl TransactionPlan {
    pub fn new(transfers: Vec<Transfer>) -> Result<Self> {
        for t in &transfers {
            if t.amount <= 0 {
                return Err(Error::InvalidTransfer(format!(
                    "{} -> {} has non-positive amount {}",
                    t.from, t.to, t.amount
                )));
            }
            if t.from == t.to {
                return Err(Error::InvalidTransfer(format!("entity {} pays itself", t.from)));
            }
        }
        Ok(Self { transfers })
    }

    pub(crate) fn push(&mut self, transfer: Transfer) {
        debug_assert!(transfer.amount > 0 && transfer.from != transfer.to);
        self.transfers.push(transfer);
    }

    pub(crate) fn extend(&mut self, other: TransactionPlan) {
        self.transfers.extend(other.transfers);
    }

    pub fn transfers(&self) -> &[Transfer] {
        &self.transfers
    }

    pub fn len(&self) -> usize {
        self.transfers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transfers.is_empty()
    }
}
