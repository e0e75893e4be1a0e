use serde::{Deserialize, Serialize};

/// The constants `delta`, `M`, `n` and `l` that scale every search radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub delta: u32,
    #[serde(rename = "M")]
    pub m: u64,
    pub n: usize,
    pub l: u64,
}

/// `ceil(delta * (log2(12n - 6) + 1))`.
pub fn l_constant(delta: u32, n: usize) -> u64 {
    if delta == 0 {
        return 0;
    }
    let x = delta as f64 * (((12 * n - 6) as f64).log2() + 1.0);
    (x - 1e-9).ceil() as u64
}

impl BoundConstants {
    pub fn new(delta: u32, m: u64, n: usize) -> Self {
        BoundConstants { delta, m, n, l: l_constant(delta, n) }
    }

    /// Constants of the free group: `delta = 0`, `M = 1`.
    pub fn free(n: usize) -> Self {
        BoundConstants::new(0, 1, n)
    }

    /// `12l + M + 4`, the cap on short edges.
    pub fn edge_cap(&self) -> u64 {
        12 * self.l + self.m + 4
    }

    /// `2(12n - 6)(12l + M + 4)`.
    pub fn extension_length_cap(&self) -> u64 {
        2 * (12 * self.n as u64 - 6) * self.edge_cap()
    }

    /// Twice `59l + 8M + 28 + 2 delta + |h| / 2`, kept integral.
    pub fn twice_conjugator_bound(&self, h_geodesic: usize) -> u64 {
        2 * (59 * self.l + 8 * self.m + 28 + 2 * self.delta as u64) + h_geodesic as u64
    }

    pub fn conjugator_bound_ok(&self, r_len: usize, h_geodesic: usize) -> bool {
        2 * r_len as u64 <= self.twice_conjugator_bound(h_geodesic)
    }

    /// `K + L/2 + M + 2 delta` rounded down.
    pub fn search_radius(&self, k: u64, l_len: u64) -> u64 {
        k + l_len / 2 + self.m + 2 * self.delta as u64
    }
}

/// `floor((|h1| + |h2|) / 2) + M + 1`.
pub fn conjugator_length_bound(h1: usize, h2: usize, m: u64) -> u64 {
    ((h1 + h2) / 2) as u64 + m + 1
}

/// `delta (log2 n + 1)` for a polygon with `n` sides after `gamma_0`.
pub fn companion_bound(delta: u32, n: usize) -> f64 {
    delta as f64 * ((n.max(1) as f64).log2() + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_constants() {
        let c = BoundConstants::free(1);
        assert_eq!((c.l, c.edge_cap(), c.extension_length_cap()), (0, 5, 60));
        assert_eq!(c.twice_conjugator_bound(0), 72);
        assert_eq!(BoundConstants::free(3).extension_length_cap(), 300);
    }

    #[test]
    fn l_values() {
        assert_eq!(l_constant(1, 1), 4);
        assert_eq!(l_constant(2, 1), 8);
        assert_eq!(l_constant(1, 2), 6);
    }

    #[test]
    fn lemma_bound() {
        assert_eq!(conjugator_length_bound(2, 2, 1), 4);
        assert_eq!(conjugator_length_bound(5, 4, 1), 6);
    }
}
