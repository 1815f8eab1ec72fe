use std::collections::{BTreeMap, BTreeSet, HashMap};

use ordered_float::OrderedFloat;

/// A bidder's hold on part of a lot: `(bidder; bid price, quantity)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Claim {
    pub bidder: usize,
    pub price: f64,
    pub quantity: f64,
    /// Position of the supply this claim holds; equal-priced claims are
    /// evicted in ascending slot order.
    pub slot: u64,
}

type Key = (OrderedFloat<f64>, u64, u64);

/// Claims on one lot, ordered by bid price with a per-bidder index.
#[derive(Debug, Clone, Default)]
pub struct ClaimList {
    claims: BTreeMap<Key, Claim>,
    by_bidder: HashMap<usize, BTreeSet<Key>>,
    total: f64,
    next_seq: u64,
    next_slot: u64,
}

impl ClaimList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    /// Sum of claimed quantities.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn min_price(&self) -> Option<f64> {
        self.lowest().map(|c| c.price)
    }

    pub fn lowest(&self) -> Option<&Claim> {
        self.claims.values().next()
    }

    /// Claims in eviction order.
    pub fn iter(&self) -> impl Iterator<Item = &Claim> {
        self.claims.values()
    }

    pub fn claims_by(&self, bidder: usize) -> impl Iterator<Item = &Claim> {
        self.by_bidder
            .get(&bidder)
            .into_iter()
            .flatten()
            .map(|k| &self.claims[k])
    }

    pub fn quantity_held_by(&self, bidder: usize) -> f64 {
        self.claims_by(bidder).map(|c| c.quantity).sum()
    }

    /// A slot not yet used on this lot, for claims on previously unclaimed supply.
    pub fn fresh_slot(&mut self) -> u64 {
        let s = self.next_slot;
        self.next_slot += 1;
        s
    }

    pub fn insert(&mut self, bidder: usize, price: f64, quantity: f64, slot: u64) {
        debug_assert!(quantity > 0.0);
        let key = (OrderedFloat(price), slot, self.next_seq);
        self.next_seq += 1;
        self.claims.insert(
            key,
            Claim {
                bidder,
                price,
                quantity,
                slot,
            },
        );
        self.by_bidder.entry(bidder).or_default().insert(key);
        self.total += quantity;
    }

    /// Removes up to `amount` from the lowest claim; the whole claim goes when
    /// its remainder would be at most `dust`. Returns the claim as it was and
    /// the quantity actually removed.
    pub fn take_from_lowest(&mut self, amount: f64, dust: f64) -> Option<(Claim, f64)> {
        let mut entry = self.claims.first_entry()?;
        let before = *entry.get();
        if before.quantity - amount <= dust {
            let key = *entry.key();
            entry.remove();
            let keys = self
                .by_bidder
                .get_mut(&before.bidder)
                .expect("indexed bidder");
            keys.remove(&key);
            if keys.is_empty() {
                self.by_bidder.remove(&before.bidder);
            }
            self.total -= before.quantity;
            Some((before, before.quantity))
        } else {
            entry.get_mut().quantity -= amount;
            self.total -= amount;
            Some((before, amount))
        }
    }

    pub fn clear(&mut self) {
        *self = Self::default();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_price_then_slot() {
        let mut list = ClaimList::new();
        list.insert(3, 2.0, 1.0, 0);
        list.insert(1, 1.0, 0.5, 5);
        list.insert(2, 1.0, 0.5, 4);
        assert_eq!(list.lowest().unwrap().bidder, 2);
        assert_eq!(list.min_price(), Some(1.0));
        assert_eq!(list.total(), 2.0);
    }

    #[test]
    fn partial_and_whole_removal() {
        let mut list = ClaimList::new();
        list.insert(1, 1.0, 1.0, 0);
        let (c, q) = list.take_from_lowest(0.25, 1e-12).unwrap();
        assert_eq!((c.quantity, q), (1.0, 0.25));
        assert_eq!(list.quantity_held_by(1), 0.75);
        let (_, q) = list.take_from_lowest(0.75 - 1e-14, 1e-12).unwrap();
        assert_eq!(q, 0.75);
        assert!(list.is_empty());
        assert_eq!(list.claims_by(1).count(), 0);
    }
}
