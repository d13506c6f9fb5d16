//! Plain-text instance and solution files. Entities are 1-indexed on disk.
//!
//! Ledger file:
//!
//! ```text
//! 5 7          # n m
//! 1 3 4        # borrower lender amount, m lines
//! ...
//! ```
//!
//! Debt file: a `D n` header followed by `n` whitespace-separated integers,
//! on any number of lines.
//!
//! Solution file: the transfer count, then one `sender receiver amount` line
//! per transfer.
//!
//! Lines starting with `#` are comments. Comments of the form `# key: value`
//! before the header carry instance metadata (`method`, `claimed_optimum`,
//! `optimum_kind`, `seed`, `params`).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::debt::{BorrowingLedger, DebtVector, TransactionPlan, Transfer};
use crate::error::{Error, Result};
use crate::generate::{GeneratedInstance, OptimumKind};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstanceMeta {
    pub method: Option<u8>,
    pub claimed_optimum: Option<usize>,
    pub optimum_kind: Option<OptimumKind>,
    pub seed: Option<u64>,
    pub params: Option<String>,
}

impl From<&GeneratedInstance> for InstanceMeta {
    fn from(g: &GeneratedInstance) -> Self {
        Self {
            method: Some(g.method),
            claimed_optimum: Some(g.claimed_optimum),
            optimum_kind: Some(g.optimum_kind),
            seed: Some(g.seed),
            params: Some(g.params.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Ledger(BorrowingLedger),
    Debts(DebtVector),
}

impl Instance {
    pub fn debt_vector(&self) -> Result<DebtVector> {
        match self {
            Instance::Ledger(l) => l.debt_vector(),
            Instance::Debts(d) => Ok(d.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedInstance {
    pub instance: Instance,
    pub meta: InstanceMeta,
}

/// A whitespace-separated token with its 1-based line number.
struct Token<'a> {
    text: &'a str,
    line: usize,
}

fn parse_int(tok: &Token<'_>) -> Result<i64> {
    let normalized = tok.text.replace('\u{2212}', "-");
    normalized.parse::<i64>().map_err(|e| match e.kind() {
        std::num::IntErrorKind::PosOverflow | std::num::IntErrorKind::NegOverflow => {
            Error::Overflow(format!("line {}: `{}` does not fit in 64 bits", tok.line, tok.text))
        }
        _ => Error::parse(tok.line, format!("expected an integer, found `{}`", tok.text)),
    })
}

fn parse_count(tok: &Token<'_>, what: &str) -> Result<usize> {
    let v = parse_int(tok)?;
    usize::try_from(v).map_err(|_| Error::parse(tok.line, format!("{what} must be non-negative, found {v}")))
}

fn parse_meta_line(meta: &mut InstanceMeta, line_no: usize, comment: &str) -> Result<()> {
    let Some((key, value)) = comment.split_once(':') else {
        return Ok(());
    };
    let value = value.trim();
    let bad = |what: &str| Error::parse(line_no, format!("invalid {what} `{value}`"));
    match key.trim() {
        "method" => meta.method = Some(value.parse().map_err(|_| bad("method"))?),
        "claimed_optimum" => meta.claimed_optimum = Some(value.parse().map_err(|_| bad("claimed optimum"))?),
        "optimum_kind" => meta.optimum_kind = Some(value.parse().map_err(|_| bad("optimum kind"))?),
        "seed" => meta.seed = Some(value.parse().map_err(|_| bad("seed"))?),
        "params" => meta.params = Some(value.to_string()),
        _ => {}
    }
    Ok(())
}

/// Splits `text` into tokens, collecting metadata from comments that precede
/// the first data line.
fn tokenize(text: &str) -> Result<(Vec<Token<'_>>, InstanceMeta)> {
    let mut tokens = Vec::new();
    let mut meta = InstanceMeta::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if tokens.is_empty() {
                parse_meta_line(&mut meta, line_no, comment)?;
            }
            continue;
        }
        let data = trimmed.split('#').next().unwrap_or("");
        tokens.extend(data.split_whitespace().map(|text| Token { text, line: line_no }));
    }
    Ok((tokens, meta))
}

pub fn parse_instance_str(text: &str) -> Result<ParsedInstance> {
    let (tokens, meta) = tokenize(text)?;
    let Some(first) = tokens.first() else {
        return Err(Error::parse(text.lines().count().max(1), "missing header"));
    };
    let instance = if first.text == "D" { parse_debts(&tokens)? } else { parse_ledger(&tokens)? };
    Ok(ParsedInstance { instance, meta })
}

pub fn parse_instance(path: impl AsRef<Path>) -> Result<ParsedInstance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::File { path: path.to_path_buf(), source })?;
    parse_instance_str(&text)
}

fn parse_debts(tokens: &[Token<'_>]) -> Result<Instance> {
    let header_line = tokens[0].line;
    let count = tokens
        .get(1)
        .filter(|t| t.line == header_line)
        .ok_or_else(|| Error::parse(header_line, "debt header must be `D n`"))?;
    let n = parse_count(count, "entity count")?;
    let body = &tokens[2..];
    if body.len() != n {
        let line = body.get(n).or(body.last()).map_or(header_line, |t| t.line);
        return Err(Error::parse(line, format!("expected {n} debt values, found {}", body.len())));
    }
    let values = body.iter().map(parse_int).collect::<Result<Vec<_>>>()?;
    Ok(Instance::Debts(DebtVector::new(values)?))
}

fn parse_ledger(tokens: &[Token<'_>]) -> Result<Instance> {
    let header_line = tokens[0].line;
    let header: Vec<&Token<'_>> = tokens.iter().take_while(|t| t.line == header_line).collect();
    if header.len() != 2 {
        return Err(Error::parse(header_line, "ledger header must be `n m`"));
    }
    let n = parse_count(header[0], "entity count")?;
    let m = parse_count(header[1], "record count")?;
    if n == 0 {
        return Err(Error::parse(header_line, "entity count must be positive"));
    }

    let body = &tokens[2..];
    let mut records = Vec::with_capacity(m);
    let mut at = 0;
    while at < body.len() {
        let line = body[at].line;
        let fields: Vec<&Token<'_>> = body[at..].iter().take_while(|t| t.line == line).collect();
        at += fields.len();
        if fields.len() != 3 {
            return Err(Error::parse(line, "record must be `borrower lender amount`"));
        }
        let entity = |t: &Token<'_>| -> Result<usize> {
            let v = parse_int(t)?;
            if v < 1 || v as u64 > n as u64 {
                return Err(Error::parse(t.line, format!("entity {v} outside 1..={n}")));
            }
            Ok(v as usize - 1)
        };
        let (borrower, lender) = (entity(fields[0])?, entity(fields[1])?);
        let amount = parse_int(fields[2])?;
        if borrower == lender {
            return Err(Error::parse(line, "an entity cannot borrow from itself"));
        }
        if amount <= 0 {
            return Err(Error::parse(line, format!("amount {amount} is not positive")));
        }
        records.push((borrower, lender, amount));
    }
    if records.len() != m {
        return Err(Error::parse(
            body.last().map_or(header_line, |t| t.line),
            format!("expected {m} records, found {}", records.len()),
        ));
    }
    Ok(Instance::Ledger(BorrowingLedger::new(n, records)?))
}

fn write_meta(out: &mut String, meta: &InstanceMeta) {
    if let Some(m) = meta.method {
        let _ = writeln!(out, "# method: {m}");
    }
    if let Some(c) = meta.claimed_optimum {
        let _ = writeln!(out, "# claimed_optimum: {c}");
    }
    if let Some(k) = meta.optimum_kind {
        let _ = writeln!(out, "# optimum_kind: {k}");
    }
    if let Some(s) = meta.seed {
        let _ = writeln!(out, "# seed: {s}");
    }
    if let Some(p) = &meta.params {
        let _ = writeln!(out, "# params: {p}");
    }
}

/// Debt file text, 20 values per line.
pub fn debts_to_string(d: &DebtVector, meta: &InstanceMeta) -> String {
    let mut out = String::new();
    write_meta(&mut out, meta);
    let _ = writeln!(out, "D {}", d.len());
    for chunk in d.values().chunks(20) {
        let line: Vec<String> = chunk.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn ledger_to_string(ledger: &BorrowingLedger, meta: &InstanceMeta) -> String {
    let mut out = String::new();
    write_meta(&mut out, meta);
    let _ = writeln!(out, "{} {}", ledger.n(), ledger.records().len());
    for r in ledger.records() {
        let _ = writeln!(out, "{} {} {}", r.borrower + 1, r.lender + 1, r.amount);
    }
    out
}

pub fn write_debts(path: impl AsRef<Path>, d: &DebtVector, meta: &InstanceMeta) -> Result<()> {
    Ok(fs::write(path, debts_to_string(d, meta))?)
}

pub fn solution_to_string(plan: &TransactionPlan) -> String {
    let mut out = format!("{}\n", plan.len());
    for t in plan.transfers() {
        let _ = writeln!(out, "{} {} {}", t.from + 1, t.to + 1, t.amount);
    }
    out
}

pub fn write_solution(path: impl AsRef<Path>, plan: &TransactionPlan) -> Result<()> {
    Ok(fs::write(path, solution_to_string(plan))?)
}

/// Parses a solution file for an instance of `n` entities.
pub fn parse_solution_str(text: &str, n: usize) -> Result<TransactionPlan> {
    let (tokens, _) = tokenize(text)?;
    let first = tokens.first().ok_or_else(|| Error::parse(1, "missing transfer count"))?;
    let count = parse_count(first, "transfer count")?;
    let body = &tokens[1..];
    if body.len() != 3 * count {
        return Err(Error::parse(
            body.last().map_or(first.line, |t| t.line),
            format!("expected {count} transfers of three fields each"),
        ));
    }
    let entity = |t: &Token<'_>| -> Result<usize> {
        let v = parse_int(t)?;
        if v < 1 || v as u64 > n as u64 {
            return Err(Error::parse(t.line, format!("entity {v} outside 1..={n}")));
        }
        Ok(v as usize - 1)
    };
    let transfers = body
        .chunks(3)
        .map(|f| Ok(Transfer { from: entity(&f[0])?, to: entity(&f[1])?, amount: parse_int(&f[2])? }))
        .collect::<Result<Vec<_>>>()?;
    TransactionPlan::new(transfers)
}
