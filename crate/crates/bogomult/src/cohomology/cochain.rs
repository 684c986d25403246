//! Normalized 2-cochains with values in Z/m, indexed by the deterministic
//! element order of a group table.

use crate::error::{Error, Result};
use crate::linalg::modm::{add_mod, sub_mod};
use crate::table::GroupTable;

/// A normalized 2-cochain: a full table of values gamma(g, h) in Z/m over
/// element indices, with gamma(e, .) = gamma(., e) = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain2 {
    modulus: u64,
    n: usize,
    /// Row-major: values[g * n + h].
    values: Vec<u64>,
}

impl Cochain2 {
    pub fn zero(n: usize, modulus: u64) -> Self {
        Cochain2 {
            modulus,
            n,
            values: vec![0; n * n],
        }
    }

    /// Wraps a dense value table; reduces entries and checks normalization.
    pub fn from_values(n: usize, modulus: u64, mut values: Vec<u64>) -> Result<Self> {
        if values.len() != n * n || modulus < 2 {
            return Err(Error::Unsupported(
                "cochain table has wrong shape or modulus".into(),
            ));
        }
        for v in values.iter_mut() {
            *v %= modulus;
        }
        let c = Cochain2 { modulus, n, values };
        c.check_normalized()?;
        Ok(c)
    }

    fn check_normalized(&self) -> Result<()> {
        for g in 0..self.n {
            if self.value(g, 0) != 0 || self.value(0, g) != 0 {
                return Err(Error::Unsupported(
                    "cochain is not normalized at the identity".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn group_order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn value(&self, g: usize, h: usize) -> u64 {
        self.values[g * self.n + h]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// self += c * other (pointwise, mod m).
    pub fn add_scaled(&mut self, other: &Cochain2, c: u64) -> Result<()> {
        if other.n != self.n || other.modulus != self.modulus {
            return Err(Error::Unsupported("cochain shape mismatch".into()));
        }
        let m = self.modulus;
        let c = c % m;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a = add_mod(*a, (c as u128 * *b as u128 % m as u128) as u64, m);
        }
        Ok(())
    }

    /// Reduces the table into Z/q (q must divide the modulus).
    pub fn reduce_mod(&self, q: u64) -> Cochain2 {
        debug_assert_eq!(self.modulus % q, 0);
        Cochain2 {
            modulus: q,
            n: self.n,
            values: self.values.iter().map(|&v| v % q).collect(),
        }
    }

    /// Checks the cocycle identity on every triple:
    /// gamma(g,h) + gamma(gh,k) = gamma(h,k) + gamma(g,hk).
    pub fn verify_cocycle(&self, table: &GroupTable) -> Result<()> {
        if table.n() != self.n {
            return Err(Error::Unsupported(
                "cochain and table have different orders".into(),
            ));
        }
        self.check_normalized()?;
        let n = self.n;
        let m = self.modulus;
        for g in 1..n {
            for h in 1..n {
                let gh = table.mul(g as u32, h as u32) as usize;
                let vgh = self.value(g, h);
                for k in 1..n {
                    let hk = table.mul(h as u32, k as u32) as usize;
                    let lhs = add_mod(vgh, self.value(gh, k), m);
                    let rhs = add_mod(self.value(h, k), self.value(g, hk), m);
                    if lhs != rhs {
                        return Err(Error::NotCocycle(g as u32, h as u32, k as u32));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pullback along an index map: (g, h) -> value(sigma(g), sigma(h)).
    pub fn pullback(&self, sigma: &[u32]) -> Result<Cochain2> {
        if sigma.len() != self.n {
            return Err(Error::Unsupported("index map has wrong length".into()));
        }
        let n = self.n;
        let mut values = vec![0u64; n * n];
        for g in 0..n {
            let sg = sigma[g] as usize;
            for h in 0..n {
                values[g * n + h] = self.value(sg, sigma[h] as usize);
            }
        }
        Cochain2::from_values(n, self.modulus, values)
    }

    /// The coboundary of a 1-cochain phi (phi[0] must be 0):
    /// (d phi)(g, h) = phi(g) + phi(h) - phi(gh).
    pub fn coboundary(table: &GroupTable, modulus: u64, phi: &[u64]) -> Result<Cochain2> {
        let n = table.n();
        if phi.len() != n || phi[0] % modulus != 0 {
            return Err(Error::Unsupported(
                "1-cochain must be normalized with one value per element".into(),
            ));
        }
        let mut values = vec![0u64; n * n];
        for g in 0..n {
            for h in 0..n {
                let gh = table.mul(g as u32, h as u32) as usize;
                let s = add_mod(phi[g] % modulus, phi[h] % modulus, modulus);
                values[g * n + h] = sub_mod(s, phi[gh] % modulus, modulus);
            }
        }
        Cochain2::from_values(n, modulus, values)
    }

    /// JSON form `{"modulus": m, "entries": [[i, j, v], ...]}` listing only
    /// nonzero values against the deterministic element order.
    pub fn to_json_string(&self) -> String {
        let mut entries = Vec::new();
        for g in 0..self.n {
            for h in 0..self.n {
                let v = self.value(g, h);
                if v != 0 {
                    entries.push(serde_json::json!([g, h, v]));
                }
            }
        }
        serde_json::json!({"modulus": self.modulus, "entries": entries}).to_string()
    }

    /// Parses the JSON form; `n` comes from the group the cochain is for.
    pub fn from_json_str(s: &str, n: usize) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("cochain JSON must be an object".into()))?;
        for key in obj.keys() {
            if key != "modulus" && key != "entries" {
                return Err(Error::Json(format!("unknown cochain field {key}")));
            }
        }
        let modulus = obj
            .get("modulus")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Json("missing modulus".into()))?;
        if !(2..1 << 31).contains(&modulus) {
            return Err(Error::Json("cochain modulus out of range".into()));
        }
        let raw = obj
            .get("entries")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Json("missing entries".into()))?;
        let mut values = vec![0u64; n * n];
        for e in raw {
            let t = e
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::Json("entry must be [i, j, v]".into()))?;
            let i = t[0].as_u64().ok_or_else(|| Error::Json("bad index".into()))? as usize;
            let j = t[1].as_u64().ok_or_else(|| Error::Json("bad index".into()))? as usize;
            let val = t[2]
                .as_u64()
                .ok_or_else(|| Error::Json("bad value".into()))?;
            if i >= n || j >= n {
                return Err(Error::Json(format!("cochain index ({i}, {j}) out of range")));
            }
            if val >= modulus {
                return Err(Error::Json(format!("cochain value {val} not reduced")));
            }
            values[i * n + j] = val;
        }
        Cochain2::from_values(n, modulus, values)
    }
}
