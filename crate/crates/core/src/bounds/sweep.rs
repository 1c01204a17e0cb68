//! Certified running products over the prime ideals of a field, driven by a
//! segmented sieve over rational primes.
//!
//! Two products are tracked, both rounded upward:
//!
//! * `G(z) = ∏_{N𝔮 <= z} (1 + (6N𝔮 − 2)/(N𝔮 − 1)²)`, the second-moment
//!   prefix factor;
//! * `W(z) = ∏_{N𝔮 <= z} (1 − N𝔮^{−1/2})^{−1}`, the Rankin product.

use std::collections::BTreeMap;

use super::certified::{add_up, div_up, mul_down, sqrt_down, sub_down, ScaledUp};
use crate::arith::{kronecker, primes_up_to};
use crate::ring::FieldSpec;

const SEGMENT: usize = 1 << 18;

/// Call `f(p)` for every prime `p` in `[lo, hi]`, in increasing order.
pub fn for_each_prime(lo: u64, hi: u64, mut f: impl FnMut(u64)) {
    if hi < 2 || lo > hi {
        return;
    }
    if lo <= 2 {
        f(2);
    }
    let root = (hi as f64).sqrt() as u64 + 2;
    let base: Vec<u64> = primes_up_to(root).into_iter().skip(1).collect();
    // window of odd numbers start + 2i, start odd
    let mut start = lo.max(3) | 1;
    let mut buf = vec![false; SEGMENT];
    while start <= hi {
        let span = ((hi - start) / 2 + 1).min(SEGMENT as u64) as usize;
        let end = start + 2 * (span as u64 - 1);
        let seg = &mut buf[..span];
        seg.fill(false);
        for &p in &base {
            if p * p > end {
                break;
            }
            let mut m = p * p;
            if m < start {
                m = start.div_ceil(p) * p;
                if m % 2 == 0 {
                    m += p;
                }
            }
            if m > end {
                continue;
            }
            let first = ((m - start) / 2) as usize;
            for c in seg[first..].iter_mut().step_by(p as usize) {
                *c = true;
            }
        }
        for (i, &composite) in seg.iter().enumerate() {
            if !composite {
                let n = start + 2 * i as u64;
                if n > 1 {
                    f(n);
                }
            }
        }
        start = end + 2;
    }
}

/// The `G` factor for a prime of norm `q`, rounded up.
#[inline]
pub fn g_factor(q: f64) -> f64 {
    let den = mul_down(q - 1.0, q - 1.0);
    add_up(1.0, div_up(6.0 * q - 2.0, den))
}

/// `(1 − q^{−1/2})^{−1} = √q/(√q − 1) <= L/(L − 1)` for `L <= √q`, rounded up.
#[inline]
pub fn w_factor(q: f64) -> f64 {
    let l = sqrt_down(q);
    div_up(l, sub_down(l, 1.0))
}

/// Values at one cutoff `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Snapshot {
    pub z: u64,
    pub g: ScaledUp,
    pub w: ScaledUp,
    /// Number of prime ideals with norm `<= z`.
    pub count: u64,
}

/// Splitting type of a rational prime, read off a Kronecker table.
#[derive(Clone, Debug)]
struct SplitTable {
    rational: bool,
    disc: i64,
    period: u64,
    table: Vec<i8>,
}

impl SplitTable {
    fn new(field: &FieldSpec) -> Self {
        if field.is_rational() {
            return SplitTable { rational: true, disc: 1, period: 1, table: vec![1] };
        }
        let disc = field.discriminant();
        let period = disc.unsigned_abs();
        // n ↦ (D/n) is a character mod |D| for a fundamental discriminant
        let table = (0..period).map(|r| if r == 0 { 0 } else { kronecker(disc, r) as i8 }).collect();
        SplitTable { rational: false, disc, period, table }
    }

    /// Number of degree-one primes above `p` (0 means inert).
    #[inline]
    fn degree_one(&self, p: u64) -> u32 {
        if self.rational {
            return 1;
        }
        let k = if p <= 3 || self.period % p == 0 {
            kronecker(self.disc, p)
        } else {
            self.table[(p % self.period) as usize] as i32
        };
        match k {
            1 => 2,
            0 => 1,
            _ => 0,
        }
    }
}

/// Lazily extended sweep; snapshots are recorded at requested cutoffs.
#[derive(Clone, Debug)]
pub struct Sweep {
    split: SplitTable,
    reached: u64,
    g1: ScaledUp,
    w1: ScaledUp,
    count1: u64,
    inert: Vec<u64>,
    snapshots: BTreeMap<u64, Snapshot>,
}

/// Inert primes are kept while `p <= INERT_KEEP` so that `p² <= z` can be
/// resolved for every cutoff `z <= INERT_KEEP²`.
const INERT_KEEP: u64 = 1 << 24;

impl Sweep {
    pub fn new(field: &FieldSpec) -> Self {
        Sweep {
            split: SplitTable::new(field),
            reached: 1,
            g1: ScaledUp::one(),
            w1: ScaledUp::one(),
            count1: 0,
            inert: Vec::new(),
            snapshots: BTreeMap::new(),
        }
    }

    pub fn reached(&self) -> u64 {
        self.reached
    }

    pub fn snapshot(&self, z: u64) -> Option<&Snapshot> {
        self.snapshots.get(&z)
    }

    /// Process primes up to `max(points)`, recording a snapshot at each
    /// point. Every point must be at least the current reach.
    pub fn extend(&mut self, points: &[u64]) {
        let mut pts: Vec<u64> = points.iter().copied().filter(|&z| !self.snapshots.contains_key(&z)).collect();
        pts.sort_unstable();
        pts.dedup();
        let Some(&top) = pts.last() else { return };
        assert!(pts[0] >= self.reached, "sweep cannot move backwards");
        assert!(top <= INERT_KEEP.saturating_mul(INERT_KEEP), "cutoff too large");
        let mut next = 0;
        while next < pts.len() && pts[next] < self.reached + 1 {
            self.record(pts[next]);
            next += 1;
        }
        let lo = self.reached + 1;
        // split borrow: run the sieve with local accumulators
        let (mut g1, mut w1, mut count1) = (self.g1, self.w1, self.count1);
        let mut inert = std::mem::take(&mut self.inert);
        let mut pending: Vec<(u64, ScaledUp, ScaledUp, u64)> = Vec::new();
        let split = self.split.clone();
        for_each_prime(lo, top, |p| {
            while next < pts.len() && pts[next] < p {
                pending.push((pts[next], g1, w1, count1));
                next += 1;
            }
            let k = split.degree_one(p);
            if k == 0 {
                if p <= INERT_KEEP {
                    inert.push(p);
                }
                return;
            }
            let q = p as f64;
            let (gf, wf) = (g_factor(q), w_factor(q));
            for _ in 0..k {
                g1 = g1.mul_up(gf);
                w1 = w1.mul_up(wf);
            }
            count1 += k as u64;
        });
        while next < pts.len() {
            pending.push((pts[next], g1, w1, count1));
            next += 1;
        }
        self.g1 = g1;
        self.w1 = w1;
        self.count1 = count1;
        self.inert = inert;
        self.reached = top;
        for (z, g, w, c) in pending {
            let snap = self.with_inert(z, g, w, c);
            self.snapshots.insert(z, snap);
        }
    }

    fn record(&mut self, z: u64) {
        let snap = self.with_inert(z, self.g1, self.w1, self.count1);
        self.snapshots.insert(z, snap);
    }

    fn with_inert(&self, z: u64, mut g: ScaledUp, mut w: ScaledUp, mut count: u64) -> Snapshot {
        for &p in &self.inert {
            let q = p as u128 * p as u128;
            if q > z as u128 {
                break;
            }
            let qf = q as f64;
            g = g.mul_up(g_factor(qf));
            w = w.mul_up(div_up(p as f64, p as f64 - 1.0));
            count += 1;
        }
        Snapshot { z, g, w, count }
    }
}
