//! Generator-slice reduction for the 2-cocycle system.
//!
//! A normalized 2-cocycle is determined by its values gamma(s, k) for s in a
//! generating set: every element factors along a breadth-first spanning tree
//! as x = s * y, and the cocycle identity at (s, y, k) rewrites gamma(x, k)
//! as gamma(y, k) + gamma(s, yk) - gamma(s, y). Conversely, if a slice
//! satisfies every identity anchored at a generator, the propagated table
//! satisfies all of them: writing L_g for the affine map (b, h) -> (b +
//! gamma(g, h), gh), the anchored identities say L_s L_h = shift L_{sh}, and
//! induction along the tree extends this to every g. This cuts the variable
//! count from (|G|-1)^2 to |S|(|G|-1) while keeping the constraint set
//! complete.

use crate::linalg::modm::{add_mod, sub_mod, Echelon};
use crate::table::GroupTable;

/// Spanning-tree data over the element table: each nonidentity element
/// factors as gens[pos] * parent.
pub(crate) struct SliceTree {
    /// Generator element indices (the slice rows).
    pub gens: Vec<u32>,
    /// Variable count: gens.len() * (n - 1).
    pub vars: usize,
    /// For x != 0: (generator position, parent element index).
    parent: Vec<(u32, u32)>,
    /// Full ancestor chains: chains[x] lists (pos, y) pairs from x down to
    /// the identity, so gamma(x, k) = sum over the chain of
    /// gamma(s_pos, y*k) - gamma(s_pos, y).
    chains: Vec<Vec<(u32, u32)>>,
    /// Breadth-first discovery order, identity first.
    bfs_order: Vec<u32>,
}

#[inline]
pub(crate) fn var(pos: usize, k: usize, n: usize) -> usize {
    pos * (n - 1) + (k - 1)
}

impl SliceTree {
    pub fn build(table: &GroupTable) -> SliceTree {
        let n = table.n();
        let gens: Vec<u32> = table.generator_indices().to_vec();
        let mut parent = vec![(u32::MAX, u32::MAX); n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[0] = true;
        order.push(0u32);
        let mut qi = 0;
        while qi < order.len() {
            let y = order[qi];
            qi += 1;
            for (pos, &s) in gens.iter().enumerate() {
                let x = table.mul(s, y);
                if !seen[x as usize] {
                    seen[x as usize] = true;
                    parent[x as usize] = (pos as u32, y);
                    order.push(x);
                }
            }
        }
        debug_assert_eq!(order.len(), n, "generators must generate the group");
        let mut chains: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for &x in &order {
            if x == 0 {
                continue;
            }
            let (pos, y) = parent[x as usize];
            let mut c = Vec::with_capacity(chains[y as usize].len() + 1);
            c.push((pos, y));
            c.extend_from_slice(&chains[y as usize]);
            chains[x as usize] = c;
        }
        SliceTree {
            vars: gens.len() * (n.saturating_sub(1)),
            gens,
            parent,
            chains,
            bfs_order: order,
        }
    }

    /// Feeds every generator-anchored cocycle identity, expanded into slice
    /// coordinates, to each echelon (one per prime power). Rows are built
    /// once as small signed integers and reduced per modulus.
    pub fn stream_rows(&self, table: &GroupTable, echelons: &mut [Echelon]) {
        let n = table.n();
        if n <= 1 || self.gens.is_empty() {
            return;
        }
        let mut base = vec![0i64; self.vars];
        let mut row = vec![0i64; self.vars];
        for (spos, &s) in self.gens.iter().enumerate() {
            for h in 1..n {
                let sh = table.mul(s, h as u32) as usize;
                // k-independent part: +gamma(s,h), -sum over chains[sh] of
                // gamma(pos,y), +sum over chains[h] of gamma(pos,y).
                for x in base.iter_mut() {
                    *x = 0;
                }
                base[var(spos, h, n)] += 1;
                for &(pos, y) in &self.chains[sh] {
                    if y != 0 {
                        base[var(pos as usize, y as usize, n)] -= 1;
                    }
                }
                for &(pos, y) in &self.chains[h] {
                    if y != 0 {
                        base[var(pos as usize, y as usize, n)] += 1;
                    }
                }
                for k in 1..n {
                    row.copy_from_slice(&base);
                    let hk = table.mul(h as u32, k as u32) as usize;
                    if hk != 0 {
                        row[var(spos, hk, n)] -= 1;
                    }
                    for &(pos, y) in &self.chains[sh] {
                        let yk = table.mul(y, k as u32) as usize;
                        if yk != 0 {
                            row[var(pos as usize, yk, n)] += 1;
                        }
                    }
                    for &(pos, y) in &self.chains[h] {
                        let yk = table.mul(y, k as u32) as usize;
                        if yk != 0 {
                            row[var(pos as usize, yk, n)] -= 1;
                        }
                    }
                    for ech in echelons.iter_mut() {
                        let q = ech.q as i64;
                        let reduced: Vec<u64> = row
                            .iter()
                            .map(|&x| if x == 0 { 0 } else { x.rem_euclid(q) as u64 })
                            .collect();
                        ech.add_row(reduced);
                    }
                }
            }
        }
    }

    /// Expands a slice into the full cocycle table modulo q by walking the
    /// tree in discovery order.
    pub fn propagate(&self, table: &GroupTable, slice: &[u64], q: u64) -> Vec<u64> {
        let n = table.n();
        debug_assert_eq!(slice.len(), self.vars);
        let mut values = vec![0u64; n * n];
        for &x in &self.bfs_order {
            if x == 0 {
                continue;
            }
            let x = x as usize;
            let (pos, y) = self.parent[x];
            let (pos, y) = (pos as usize, y as usize);
            let base = if y != 0 {
                slice[var(pos, y, n)] % q
            } else {
                0
            };
            for k in 1..n {
                let yk = table.mul(y as u32, k as u32) as usize;
                let mut v = values[y * n + k];
                if yk != 0 {
                    v = add_mod(v, slice[var(pos, yk, n)] % q, q);
                }
                values[x * n + k] = sub_mod(v, base, q);
            }
        }
        values
    }

    /// Extracts the slice (generator rows) of a full value table.
    pub fn slice_of(&self, values: &[u64], n: usize, q: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.vars];
        for (pos, &s) in self.gens.iter().enumerate() {
            for k in 1..n {
                out[var(pos, k, n)] = values[s as usize * n + k] % q;
            }
        }
        out
    }

    /// Extends generator images to an index map on the whole table along the
    /// tree: sigma(s * y) = img[pos(s)] * sigma(y). The caller must check
    /// that the result is a bijective homomorphism.
    pub fn extend_by_images(&self, table: &GroupTable, img: &[u32]) -> Vec<u32> {
        debug_assert_eq!(img.len(), self.gens.len());
        let mut sigma = vec![0u32; table.n()];
        for &x in &self.bfs_order {
            if x == 0 {
                continue;
            }
            let (pos, y) = self.parent[x as usize];
            sigma[x as usize] = table.mul(img[pos as usize], sigma[y as usize]);
        }
        sigma
    }

    /// Slice of the coboundary of the indicator 1-cochain of element x.
    pub fn coboundary_slice(&self, table: &GroupTable, x: u32, q: u64) -> Vec<u64> {
        let n = table.n();
        let mut out = vec![0u64; self.vars];
        for (pos, &s) in self.gens.iter().enumerate() {
            for k in 1..n {
                let mut v: i64 = 0;
                if s == x {
                    v += 1;
                }
                if k as u32 == x {
                    v += 1;
                }
                if table.mul(s, k as u32) == x {
                    v -= 1;
                }
                out[var(pos, k, n)] = v.rem_euclid(q as i64) as u64;
            }
        }
        out
    }
}
