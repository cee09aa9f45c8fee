//! Exhaustive enumeration of structures over a fixed universe.
//!
//! The enumeration is an odometer over every relation bit and every function
//! table entry, relation bits first, so the order is deterministic.

use core::ops::ControlFlow;

use alloc::vec::Vec;

use super::{pow, FiniteStructure, ModelError, Signature};

/// Number of structures of the given size, `None` if it does not fit in u128.
pub fn structure_count(sig: &Signature, size: usize) -> Option<u128> {
    let mut total: u128 = 1;
    for (_, k) in &sig.predicates {
        let bits = u32::try_from(size.checked_pow(*k as u32)?).ok()?;
        total = total.checked_mul(2u128.checked_pow(bits)?)?;
    }
    for (_, k) in &sig.functions {
        let entries = u32::try_from(size.checked_pow(*k as u32)?).ok()?;
        total = total.checked_mul((size as u128).checked_pow(entries)?)?;
    }
    Some(total)
}

#[derive(Clone, Copy)]
enum Digit {
    Bit(usize, usize),
    Entry(usize, usize),
}

fn digits(sig: &Signature, size: usize) -> Vec<Digit> {
    let mut out = Vec::new();
    for (i, (_, k)) in sig.predicates.iter().enumerate() {
        out.extend((0..pow(size, *k)).map(|t| Digit::Bit(i, t)));
    }
    for (i, (_, k)) in sig.functions.iter().enumerate() {
        out.extend((0..pow(size, *k)).map(|t| Digit::Entry(i, t)));
    }
    out
}

/// Advance to the next structure; false after the last one (which wraps to
/// the first).
fn step(a: &mut FiniteStructure, digits: &[Digit]) -> bool {
    for d in digits {
        match *d {
            Digit::Bit(i, t) => {
                let b = &mut a.relations[i][t];
                *b = !*b;
                if *b {
                    return true;
                }
            }
            Digit::Entry(i, t) => {
                let v = &mut a.tables[i][t];
                *v += 1;
                if *v < a.size {
                    return true;
                }
                *v = 0;
            }
        }
    }
    false
}

fn check_budget(sig: &Signature, size: usize, budget: u128) -> Result<(), ModelError> {
    match structure_count(sig, size) {
        Some(c) if c <= budget => Ok(()),
        _ => Err(ModelError::BudgetExceeded(budget)),
    }
}

/// Visit every structure of the given size. Returns `Ok(true)` when the
/// visitor broke early.
pub fn for_each_structure<F>(sig: &Signature, size: usize, budget: u128, mut visit: F) -> Result<bool, ModelError>
where
    F: FnMut(&FiniteStructure) -> ControlFlow<()>,
{
    check_budget(sig, size, budget)?;
    let ds = digits(sig, size);
    let mut a = FiniteStructure::new(sig.clone(), size);
    loop {
        if visit(&a).is_break() {
            return Ok(true);
        }
        if !step(&mut a, &ds) {
            return Ok(false);
        }
    }
}

/// Every structure of the given size exactly once.
pub fn enumerate_structures(
    sig: &Signature,
    size: usize,
    budget: u128,
) -> Result<impl Iterator<Item = FiniteStructure>, ModelError> {
    check_budget(sig, size, budget)?;
    let ds = digits(sig, size);
    let mut next = Some(FiniteStructure::new(sig.clone(), size));
    Ok(core::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        if step(&mut succ, &ds) {
            next = Some(succ);
        }
        Some(cur)
    }))
}
