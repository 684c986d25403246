//! Small finite fields with precomputed operation tables. Prime fields are
//! built from modular arithmetic; the extension fields of order 4, 8 and 9
//! come from fixed irreducible polynomials. Elements are integers below q;
//! 0 and 1 are the additive and multiplicative identities, and for
//! extensions the element p encodes the adjoined root.

use crate::error::{Error, Result};
use crate::linalg::modm::factorize;

/// Largest supported field size (tables are q*q bytes).
pub const MAX_FIELD: u64 = 16;

/// Monic irreducible polynomials, low degree first, for the supported
/// extension fields.
fn irreducible(p: u64, f: u32) -> Option<&'static [u64]> {
    match (p, f) {
        (2, 2) => Some(&[1, 1, 1]),    // x^2 + x + 1
        (2, 3) => Some(&[1, 1, 0, 1]), // x^3 + x + 1
        (3, 2) => Some(&[1, 0, 1]),    // x^2 + 1
        _ => None,
    }
}

#[derive(Clone)]
pub struct Gf {
    q: u64,
    p: u64,
    f: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

fn digits(mut x: u64, p: u64, f: u32) -> Vec<u64> {
    let mut d = Vec::with_capacity(f as usize);
    for _ in 0..f {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl Gf {
    pub fn new(q: u64) -> Result<Gf> {
        if q < 2 || q > MAX_FIELD {
            return Err(Error::Unsupported(format!(
                "field size {q} outside 2..={MAX_FIELD}"
            )));
        }
        let factors = factorize(q);
        if factors.len() != 1 {
            return Err(Error::Unsupported(format!(
                "field size {q} is not a prime power"
            )));
        }
        let (p, f) = factors[0];
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        if f == 1 {
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = ((a + b) % p) as u8;
                    mul[(a * q + b) as usize] = ((a * b) % p) as u8;
                }
            }
        } else {
            let irr = irreducible(p, f).ok_or_else(|| {
                Error::Unsupported(format!("no irreducible polynomial stored for {p}^{f}"))
            })?;
            for a in 0..q {
                let da = digits(a, p, f);
                for b in 0..q {
                    let db = digits(b, p, f);
                    let sum: Vec<u64> =
                        da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    add[(a * q + b) as usize] = undigits(&sum, p) as u8;
                    // Polynomial product followed by remainder mod irr.
                    let mut prod = vec![0u64; 2 * f as usize - 1];
                    for (i, &x) in da.iter().enumerate() {
                        for (j, &y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    for k in (f as usize..prod.len()).rev() {
                        let c = prod[k];
                        if c == 0 {
                            continue;
                        }
                        prod[k] = 0;
                        for (i, &coef) in irr.iter().enumerate().take(f as usize) {
                            let pos = k - f as usize + i;
                            prod[pos] = (prod[pos] + p * p - (c * coef) % p) % p;
                        }
                    }
                    mul[(a * q + b) as usize] = undigits(&prod[..f as usize], p) as u8;
                }
            }
        }
        let mut inv = vec![0u8; n];
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u8;
                    break;
                }
            }
            if inv[a as usize] == 0 {
                return Err(Error::Unsupported(format!(
                    "element {a} has no inverse; {q} is not a field size"
                )));
            }
        }
        Ok(Gf { q, p, f, add, mul, inv })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.q + b) as usize] as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.mul[(a * self.q + b) as usize] as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        for b in 0..self.q {
            if self.add(a, b) == 0 {
                return b;
            }
        }
        unreachable!("additive inverse exists")
    }

    /// Multiplicative inverse; a must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert_ne!(a, 0);
        self.inv[a as usize] as u64
    }

    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> u64 {
        'cand: for a in 2..self.q {
            let mut x = a;
            for _ in 1..self.q - 2 {
                if x == 1 {
                    continue 'cand;
                }
                x = self.mul(x, a);
            }
            if x != 1 {
                return a;
            }
        }
        // Only F2 has no element besides 1.
        1
    }
}
