//! Classical matrix groups of small rank as permutation groups: the
//! two-dimensional special, projective special, and projective general
//! linear families over fields of at most 13 elements, and the
//! three-dimensional projective special linear group over the field of
//! four elements. Orders are verified against the closed formulas at
//! construction time, so a bad generator set cannot escape.

use super::gf::Gf;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// Largest field size for the matrix families.
pub const MAX_MATRIX_Q: u64 = 13;

fn check_q(q: u64) -> Result<Gf> {
    if q > MAX_MATRIX_Q {
        return Err(Error::Unsupported(format!(
            "field size {q} exceeds the matrix-family bound {MAX_MATRIX_Q}"
        )));
    }
    Gf::new(q)
}

type Mat2 = [[u64; 2]; 2];

fn det2(gf: &Gf, m: &Mat2) -> u64 {
    let ad = gf.mul(m[0][0], m[1][1]);
    let bc = gf.mul(m[0][1], m[1][0]);
    gf.add(ad, gf.neg(bc))
}

/// Additive generators of the field: 1 and the powers of the adjoined root,
/// one per digit. Sums of these reach every field element.
fn additive_basis(gf: &Gf) -> Vec<u64> {
    (0..gf.f()).map(|i| gf.p().pow(i)).collect()
}

/// The permutation of the nonzero row vectors of F_q^2 induced by right
/// multiplication with `m`.
fn vector_perm(gf: &Gf, m: &Mat2) -> Result<Perm> {
    let q = gf.q();
    let degree = (q * q - 1) as u16;
    let mut images = vec![0u16; degree as usize];
    for x in 0..q {
        for y in 0..q {
            if x == 0 && y == 0 {
                continue;
            }
            let xi = gf.add(gf.mul(x, m[0][0]), gf.mul(y, m[1][0]));
            let yi = gf.add(gf.mul(x, m[0][1]), gf.mul(y, m[1][1]));
            images[(x * q + y - 1) as usize] = (xi * q + yi - 1) as u16;
        }
    }
    Perm::from_images(images)
}

/// The permutation of the projective line induced by right multiplication:
/// points 0..q are [1 : x], point q is [0 : 1].
fn projective_perm(gf: &Gf, m: &Mat2) -> Result<Perm> {
    let q = gf.q();
    let mut images = vec![0u16; (q + 1) as usize];
    for pt in 0..=q {
        let (u, v) = if pt < q { (1, pt) } else { (0, 1) };
        let ui = gf.add(gf.mul(u, m[0][0]), gf.mul(v, m[1][0]));
        let vi = gf.add(gf.mul(u, m[0][1]), gf.mul(v, m[1][1]));
        images[pt as usize] = if ui != 0 {
            gf.mul(vi, gf.inv(ui)) as u16
        } else {
            q as u16
        };
    }
    Perm::from_images(images)
}

fn transvection_mats(gf: &Gf) -> Vec<Mat2> {
    let mut mats = Vec::new();
    for a in additive_basis(gf) {
        mats.push([[1, a], [0, 1]]);
        mats.push([[1, 0], [a, 1]]);
    }
    mats
}

fn checked_order(g: PermGroup, expect: u64, what: &str) -> Result<PermGroup> {
    let got = g.order_u64()?;
    if got != expect {
        return Err(Error::HypothesisViolated(format!(
            "{what}: constructed order {got}, expected {expect}"
        )));
    }
    Ok(g)
}

/// SL(2, q) acting on the q^2 - 1 nonzero vectors.
pub fn sl2(q: u64) -> Result<PermGroup> {
    let gf = check_q(q)?;
    let gens = transvection_mats(&gf)
        .iter()
        .map(|m| {
            debug_assert_eq!(det2(&gf, m), 1);
            vector_perm(&gf, m)
        })
        .collect::<Result<Vec<_>>>()?;
    let g = PermGroup::new((q * q - 1) as u16, gens)?;
    checked_order(g, q * (q * q - 1), "sl2")
}

/// PSL(2, q) acting on the q + 1 projective points.
pub fn psl2(q: u64) -> Result<PermGroup> {
    let gf = check_q(q)?;
    let gens = transvection_mats(&gf)
        .iter()
        .map(|m| projective_perm(&gf, m))
        .collect::<Result<Vec<_>>>()?;
    let g = PermGroup::new((q + 1) as u16, gens)?;
    let d = if q % 2 == 1 { 2 } else { 1 };
    checked_order(g, q * (q * q - 1) / d, "psl2")
}

/// PGL(2, q) acting on the q + 1 projective points: PSL(2, q) together
/// with the image of a diagonal matrix carrying a primitive element.
pub fn pgl2(q: u64) -> Result<PermGroup> {
    let gf = check_q(q)?;
    let mut mats = transvection_mats(&gf);
    mats.push([[gf.primitive(), 0], [0, 1]]);
    let gens = mats
        .iter()
        .map(|m| projective_perm(&gf, m))
        .collect::<Result<Vec<_>>>()?;
    let g = PermGroup::new((q + 1) as u16, gens)?;
    checked_order(g, q * (q * q - 1), "pgl2")
}

type Mat3 = [[u64; 3]; 3];

/// The permutation of the 21 points of the projective plane over the
/// four-element field induced by right multiplication. Point codes:
/// [1:x:y] -> 4x + y, [0:1:z] -> 16 + z, [0:0:1] -> 20.
fn plane_perm(gf: &Gf, m: &Mat3) -> Result<Perm> {
    let q = gf.q();
    let encode = |v: [u64; 3]| -> u16 {
        if v[0] != 0 {
            let s = gf.inv(v[0]);
            (q * gf.mul(v[1], s) + gf.mul(v[2], s)) as u16
        } else if v[1] != 0 {
            let s = gf.inv(v[1]);
            (q * q + gf.mul(v[2], s)) as u16
        } else {
            (q * q + q) as u16
        }
    };
    let decode = |pt: u64| -> [u64; 3] {
        if pt < q * q {
            [1, pt / q, pt % q]
        } else if pt < q * q + q {
            [0, 1, pt - q * q]
        } else {
            [0, 0, 1]
        }
    };
    let degree = (q * q + q + 1) as usize;
    let mut images = vec![0u16; degree];
    for pt in 0..degree as u64 {
        let v = decode(pt);
        let mut w = [0u64; 3];
        for (j, slot) in w.iter_mut().enumerate() {
            for (i, &vi) in v.iter().enumerate() {
                *slot = gf.add(*slot, gf.mul(vi, m[i][j]));
            }
        }
        images[pt as usize] = encode(w);
    }
    Perm::from_images(images)
}

/// PSL(3, 4) acting on the 21 points of the projective plane over the
/// four-element field, generated by elementary transvections.
pub fn psl3_4() -> Result<PermGroup> {
    let gf = Gf::new(4)?;
    let mut gens = Vec::new();
    for a in additive_basis(&gf) {
        let positions: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];
        for (i, j) in positions {
            let mut m: Mat3 = [[0; 3]; 3];
            for (d, row) in m.iter_mut().enumerate() {
                row[d] = 1;
            }
            m[i][j] = a;
            gens.push(plane_perm(&gf, &m)?);
        }
    }
    let g = PermGroup::new(21, gens)?;
    checked_order(g, 20_160, "psl3_4")
}
