//! Small internal helpers.

/// Total order on finite f64 (panics on NaN). Used for heaps and argmax.
#[derive(Debug, PartialEq, PartialOrd, Clone, Copy)]
pub(crate) struct OrdF64(pub f64);

impl Eq for OrdF64 {}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&other.0).expect("finite value")
    }
}
