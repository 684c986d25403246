//! Certificate schema and the independent replayer.
//!
//! A certificate pins a group by the hash of its canonical JSON, states the
//! computed multipliers, and carries witnesses for every fact the verdict
//! rests on. The replayer checks each witness from first principles: it
//! rebuilds element sets by plain permutation multiplication, re-derives
//! homomorphism spaces and carry tables by linear algebra mod m, and
//! re-solves coboundary systems. It never calls the cohomology engine.
//!
//! Trust boundary: a verified witness proves the stated fact about concrete
//! permutations and value tables. The replayer validates the premises of
//! each reduction rule (Sylow orders, commutativity, coset covers, the
//! unsolvability of coboundary systems); the rules themselves are the
//! trusted theory base. [`ReplayReport::fully_grounded`] records whether the
//! headline vanishing claim is carried entirely by verified witnesses or
//! partly by emitter-side computation.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::linalg::modm::factorize;
use crate::linalg::{kernel_mod, solve_mod, SparseIntMatrix};
use crate::perm::Perm;

/// Schema version accepted by this replayer.
pub const CERT_VERSION: u32 = 1;

/// Ceilings applied while replaying untrusted certificates.
const REPLAY_ELEMENT_CAP: usize = 262_144;
const REPLAY_SUBGROUP_CAP: usize = 128;
const REPLAY_WITNESS_CAP: usize = 512;
const REPLAY_SUBREPORT_CAP: usize = 64;
const REPLAY_DEPTH_CAP: usize = 4;
const REPLAY_GENERATOR_CAP: usize = 64;

/// How many prime-order classes a trivial-kernel claim may require before
/// the emitter is allowed to truncate coverage with an explicit note.
pub const COVERAGE_CAP: usize = 64;

/// A permutation group as plain data: degree plus generator image tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupData {
    pub degree: u16,
    pub generators: Vec<Vec<u16>>,
}

impl GroupData {
    pub fn from_group(g: &PermGroup) -> Self {
        GroupData {
            degree: g.degree(),
            generators: g
                .generators()
                .iter()
                .map(|p| p.images().to_vec())
                .collect(),
        }
    }

    pub fn to_group(&self) -> Result<PermGroup> {
        let gens = self
            .generators
            .iter()
            .map(|im| Perm::from_images(im.clone()))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(self.degree, gens)
    }
}

/// A replayable record of a multiplier computation or theorem check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub version: u32,
    /// Hex SHA-256 of the group's canonical JSON; must match `group_data`.
    pub group: String,
    pub group_data: GroupData,
    /// The route that produced the verdict: "abelian", "cyclic_by_abelian",
    /// "sylow", "direct", "quasisimple", or "inconclusive".
    pub strategy: String,
    /// Invariant factors of the Schur multiplier, when computed directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<Vec<u64>>,
    /// Invariant factors of the Bogomolov multiplier, when decided.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_reports: Vec<SubReport>,
}

/// A labeled nested certificate (for example the vanishing report of a
/// central quotient).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubReport {
    pub label: String,
    pub certificate: Certificate,
}

/// One checkable fact supporting a certificate's verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    /// The group's generators commute pairwise.
    #[serde(rename = "abelian_group")]
    AbelianGroup(AbelianGroupWitness),
    /// A normal abelian subgroup whose cosets are covered by the powers of
    /// one element.
    #[serde(rename = "cyclic_by_abelian")]
    CyclicByAbelian(CyclicByAbelianWitness),
    /// An abelian subgroup whose order is the full p-part of the group.
    #[serde(rename = "abelian_sylow")]
    AbelianSylow(AbelianSylowWitness),
    /// A subgroup of full p-part order together with a certificate that its
    /// own kernel vanishes.
    #[serde(rename = "sylow_b0")]
    SylowB0(SylowB0Witness),
    /// A cohomology class whose restriction to a two-generator abelian
    /// subgroup admits no expression as a coboundary plus carry tables.
    #[serde(rename = "bicyclic_nonvanishing")]
    BicyclicNonvanishing(BicyclicWitness),
    /// A class that restricts to zero on every listed subgroup; structure
    /// claims about it are emitter-side.
    #[serde(rename = "in_kernel")]
    InKernel(InKernelNote),
    /// A central element written as a single commutator.
    #[serde(rename = "group_commutator")]
    GroupCommutator(GroupCommutatorWitness),
    /// An explicit gap the emitter could not witness.
    #[serde(rename = "unresolved")]
    Unresolved(UnresolvedNote),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianGroupWitness {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclicByAbelianWitness {
    /// Generators of the normal abelian subgroup, as image tables.
    pub normal_generators: Vec<Vec<u16>>,
    /// An element whose powers cover every coset of that subgroup.
    pub quotient_generator: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianSylowWitness {
    pub prime: u64,
    pub generators: Vec<Vec<u16>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SylowB0Witness {
    pub prime: u64,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicyclicWitness {
    /// Class coordinates in the certificate's multiplier presentation.
    pub class: Vec<u64>,
    /// Coefficient modulus shared by the cocycle and the solver run.
    pub modulus: u64,
    /// Every element of the subgroup, identity first; index fields below
    /// refer to positions in this list.
    pub elements: Vec<Vec<u16>>,
    /// Positions of a commuting pair that generates the subgroup.
    pub pair: [usize; 2],
    /// Nonzero values of the restricted cocycle as strictly sorted
    /// (row, column, value) triples; rows and columns index `elements`.
    pub cocycle: Vec<(usize, usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InKernelNote {
    pub class: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupCommutatorWitness {
    pub central: Vec<u16>,
    pub left: Vec<u16>,
    pub right: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnresolvedNote {
    pub note: String,
}

impl Certificate {
    /// Compact canonical JSON; serialization order is the declaration order
    /// of the fields, so equal certificates serialize to equal bytes.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(Error::from)
    }

    pub fn from_json_slice(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(Error::from)
    }
}

/// Outcome of replaying one certificate tree.
#[derive(Clone, Debug)]
pub struct ReplayReport {
    /// Witnesses checked, including those in nested certificates.
    pub witnesses_checked: usize,
    /// True when every vanishing claim in the tree is carried by verified
    /// witnesses alone.
    pub fully_grounded: bool,
    /// One line per certificate or notable check.
    pub notes: Vec<String>,
}

/// Replays a certificate tree; any failed check aborts with
/// [`Error::ReplayFailed`].
pub fn replay(cert: &Certificate) -> Result<ReplayReport> {
    let mut report = ReplayReport {
        witnesses_checked: 0,
        fully_grounded: true,
        notes: Vec::new(),
    };
    let grounded = replay_into(cert, 0, "root", &mut report)?;
    report.fully_grounded = grounded && report.fully_grounded;
    Ok(report)
}

fn fail<T>(label: &str, msg: impl Into<String>) -> Result<T> {
    Err(Error::ReplayFailed(format!("{label}: {}", msg.into())))
}

/// Closure of `gens` under multiplication, starting from the identity.
/// Proves the returned list is a group: it is finite, closed, and every
/// element has finite order, so inverses are inside.
fn close_elements(degree: u16, gens: &[Perm], cap: usize, label: &str) -> Result<Vec<Perm>> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut list = vec![id];
    let mut i = 0;
    while i < list.len() {
        for g in gens {
            if g.degree() != degree {
                return fail(label, "generator degree mismatch");
            }
            let y = list[i].mul(g);
            if !seen.contains(&y) {
                if list.len() >= cap {
                    return fail(label, format!("element closure exceeds replay cap {cap}"));
                }
                seen.insert(y.clone());
                list.push(y);
            }
        }
        i += 1;
    }
    Ok(list)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn p_part(mut n: u64, p: u64) -> u64 {
    let mut q = 1;
    while n % p == 0 {
        n /= p;
        q *= p;
    }
    q
}

/// All nonzero prime-order coordinate vectors of the group with the given
/// invariant factors, or None when there are more than `cap`.
pub fn prime_order_classes(factors: &[u64], cap: usize) -> Option<Vec<Vec<u64>>> {
    let mut primes: Vec<u64> = Vec::new();
    for &d in factors {
        for (p, _) in factorize(d) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();
    let mut out: Vec<Vec<u64>> = Vec::new();
    for p in primes {
        // Coordinates of p-torsion elements: multiples of d_j / p where p
        // divides d_j, zero elsewhere.
        let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
        for &d in factors {
            let choices: Vec<u64> = if d % p == 0 {
                (0..p).map(|t| t * (d / p)).collect()
            } else {
                vec![0]
            };
            let mut next = Vec::new();
            for c in &combos {
                for &x in &choices {
                    let mut v = c.clone();
                    v.push(x);
                    next.push(v);
                }
                if next.len() > cap + 1 {
                    return None;
                }
            }
            combos = next;
        }
        for v in combos {
            if v.iter().any(|&x| x != 0) {
                if out.len() >= cap {
                    return None;
                }
                out.push(v);
            }
        }
    }
    Some(out)
}

/// Parsed group plus a lazily built multiplication-closure element set.
struct ReplayCtx {
    group: PermGroup,
    elems: Option<HashSet<Perm>>,
}

impl ReplayCtx {
    fn new(group: PermGroup) -> Self {
        ReplayCtx { group, elems: None }
    }

    fn ensure_elements(&mut self, label: &str) -> Result<&HashSet<Perm>> {
        if self.elems.is_none() {
            let list = close_elements(
                self.group.degree(),
                self.group.generators(),
                REPLAY_ELEMENT_CAP,
                label,
            )?;
            self.elems = Some(list.into_iter().collect());
        }
        Ok(self.elems.as_ref().unwrap())
    }

    fn order(&mut self, label: &str) -> Result<u64> {
        Ok(self.ensure_elements(label)?.len() as u64)
    }

    fn contains(&mut self, p: &Perm, label: &str) -> Result<bool> {
        if p.degree() != self.group.degree() {
            return Ok(false);
        }
        Ok(self.ensure_elements(label)?.contains(p))
    }
}

fn parse_perm(images: &[u16], degree: u16, label: &str, what: &str) -> Result<Perm> {
    let p = Perm::from_images(images.to_vec())
        .map_err(|e| Error::ReplayFailed(format!("{label}: bad {what}: {e}")))?;
    if p.degree() != degree {
        return fail(label, format!("{what} degree mismatch"));
    }
    Ok(p)
}

/// Replays one certificate into `out`; returns whether this certificate's
/// own vanishing claims are fully carried by verified witnesses.
fn replay_into(
    cert: &Certificate,
    depth: usize,
    label: &str,
    out: &mut ReplayReport,
) -> Result<bool> {
    if depth > REPLAY_DEPTH_CAP {
        return fail(label, "certificates nest too deeply");
    }
    if cert.version != CERT_VERSION {
        return fail(label, format!("unsupported version {}", cert.version));
    }
    if cert.witnesses.len() > REPLAY_WITNESS_CAP {
        return fail(label, "too many witnesses");
    }
    if cert.sub_reports.len() > REPLAY_SUBREPORT_CAP {
        return fail(label, "too many sub-reports");
    }
    if cert.group_data.generators.len() > REPLAY_GENERATOR_CAP {
        return fail(label, "too many generators");
    }
    let group = cert
        .group_data
        .to_group()
        .map_err(|e| Error::ReplayFailed(format!("{label}: bad group data: {e}")))?;
    if group.hash() != cert.group {
        return fail(label, "group hash does not match group data");
    }
    let mut ctx = ReplayCtx::new(group);

    let b0_trivial = matches!(&cert.b0, Some(f) if f.is_empty());
    let mut grounded = true;
    let mut abelian_seen = false;
    let mut cba_seen = false;
    let mut sylow_primes: BTreeMap<u64, bool> = BTreeMap::new();
    let mut excluded_classes: Vec<Vec<u64>> = Vec::new();
    let mut kernel_classes: Vec<Vec<u64>> = Vec::new();
    let mut commutator_centrals: HashSet<Perm> = HashSet::new();
    let mut unresolved = 0usize;

    for w in &cert.witnesses {
        out.witnesses_checked += 1;
        match w {
            Witness::AbelianGroup(_) => {
                check_kind_allowed(&cert.strategy, "abelian_group", &["abelian"], label)?;
                check_abelian_gens(ctx.group.generators(), label)?;
                abelian_seen = true;
            }
            Witness::CyclicByAbelian(cw) => {
                check_kind_allowed(
                    &cert.strategy,
                    "cyclic_by_abelian",
                    &["cyclic_by_abelian"],
                    label,
                )?;
                check_cyclic_by_abelian(&mut ctx, cw, label)?;
                cba_seen = true;
            }
            Witness::AbelianSylow(sw) => {
                check_kind_allowed(
                    &cert.strategy,
                    "abelian_sylow",
                    &["sylow", "inconclusive"],
                    label,
                )?;
                check_abelian_sylow(&mut ctx, sw, label)?;
                sylow_primes.insert(sw.prime, true);
            }
            Witness::SylowB0(sw) => {
                check_kind_allowed(&cert.strategy, "sylow_b0", &["sylow", "inconclusive"], label)?;
                let sub_grounded = check_sylow_b0(&mut ctx, sw, depth, label, out)?;
                sylow_primes.insert(sw.prime, sub_grounded);
            }
            Witness::BicyclicNonvanishing(bw) => {
                check_kind_allowed(
                    &cert.strategy,
                    "bicyclic_nonvanishing",
                    &["direct"],
                    label,
                )?;
                check_class_shape(&bw.class, cert.multiplier.as_deref(), true, label)?;
                check_bicyclic(&mut ctx, bw, label)?;
                excluded_classes.push(bw.class.clone());
            }
            Witness::InKernel(k) => {
                check_kind_allowed(&cert.strategy, "in_kernel", &["direct"], label)?;
                check_class_shape(&k.class, cert.multiplier.as_deref(), true, label)?;
                if b0_trivial {
                    return fail(label, "kernel note contradicts a trivial-kernel claim");
                }
                kernel_classes.push(k.class.clone());
            }
            Witness::GroupCommutator(gw) => {
                check_kind_allowed(
                    &cert.strategy,
                    "group_commutator",
                    &["quasisimple"],
                    label,
                )?;
                let z = check_group_commutator(&mut ctx, gw, label)?;
                commutator_centrals.insert(z);
            }
            Witness::Unresolved(u) => {
                check_kind_allowed(
                    &cert.strategy,
                    "unresolved",
                    &["direct", "sylow", "inconclusive"],
                    label,
                )?;
                out.notes
                    .push(format!("{label}: unresolved: {}", u.note));
                unresolved += 1;
                grounded = false;
            }
        }
    }

    match cert.strategy.as_str() {
        "abelian" => {
            if !abelian_seen {
                return fail(label, "abelian strategy without an abelian witness");
            }
            if !b0_trivial {
                return fail(label, "abelian strategy must claim a trivial kernel");
            }
        }
        "cyclic_by_abelian" => {
            if !cba_seen {
                return fail(label, "missing the normal-subgroup witness");
            }
            if !b0_trivial {
                return fail(label, "strategy must claim a trivial kernel");
            }
        }
        "sylow" => {
            if !b0_trivial {
                return fail(label, "sylow strategy must claim a trivial kernel");
            }
            let order = ctx.order(label)?;
            for (p, _) in factorize(order) {
                match sylow_primes.get(&p) {
                    None => {
                        return fail(
                            label,
                            format!("no witness covers the prime {p} dividing the order"),
                        )
                    }
                    Some(false) => grounded = false,
                    Some(true) => {}
                }
            }
        }
        "direct" => {
            let m = match &cert.multiplier {
                Some(m) => m,
                None => return fail(label, "direct strategy must state the multiplier"),
            };
            if cert.b0.is_none() {
                return fail(label, "direct strategy must state the kernel structure");
            }
            if b0_trivial && !m.is_empty() {
                // A trivial kernel is grounded when every prime-order class
                // is excluded by a verified witness.
                match prime_order_classes(m, COVERAGE_CAP) {
                    Some(required) => {
                        let missing: Vec<_> = required
                            .iter()
                            .filter(|c| !excluded_classes.contains(c))
                            .collect();
                        if !missing.is_empty() {
                            if unresolved == 0 {
                                return fail(
                                    label,
                                    format!(
                                        "trivial-kernel claim leaves {} prime-order classes \
                                         unwitnessed and no gap is declared",
                                        missing.len()
                                    ),
                                );
                            }
                            grounded = false;
                        }
                    }
                    None => {
                        if unresolved == 0 {
                            return fail(
                                label,
                                "coverage too large to replay and no gap is declared",
                            );
                        }
                        grounded = false;
                    }
                }
            }
            if !b0_trivial && cert.b0.is_some() {
                // Nonvanishing kernels carry per-generator evidence only;
                // the kernel structure itself is emitter-computed.
                grounded = false;
                out.notes.push(format!(
                    "{label}: kernel structure claim is emitter-computed"
                ));
            }
            let _ = kernel_classes;
        }
        "quasisimple" => {
            // Every nontrivial central element of prime-power order must be
            // witnessed as a single commutator, and both vanishing
            // sub-reports must be present.
            let gens = ctx.group.generators().to_vec();
            let degree = ctx.group.degree();
            let elems = ctx.ensure_elements(label)?;
            let mut required: Vec<Perm> = elems
                .iter()
                .filter(|z| !z.is_identity() && gens.iter().all(|g| z.mul(g) == g.mul(z)))
                .filter(|z| factorize(z.order()).len() == 1)
                .cloned()
                .collect();
            required.sort();
            let _ = degree;
            for z in &required {
                if !commutator_centrals.contains(z) {
                    return fail(
                        label,
                        "a prime-power-order central element has no commutator witness",
                    );
                }
            }
            let own = find_sub_report(cert, "b0(group)", label)?;
            if own.certificate.group != cert.group {
                return fail(label, "b0(group) sub-report pins a different group");
            }
            if !matches!(&own.certificate.b0, Some(f) if f.is_empty()) {
                return fail(label, "b0(group) sub-report does not claim vanishing");
            }
            let quot = find_sub_report(cert, "b0(central_quotient)", label)?;
            if !matches!(&quot.certificate.b0, Some(f) if f.is_empty()) {
                return fail(
                    label,
                    "b0(central_quotient) sub-report does not claim vanishing",
                );
            }
            out.notes.push(format!(
                "{label}: quasisimple hypothesis and quotient identification are \
                 emitter-checked"
            ));
        }
        "inconclusive" => {
            if cert.b0.is_some() {
                return fail(label, "inconclusive strategy cannot claim a kernel");
            }
            grounded = false;
        }
        other => return fail(label, format!("unknown strategy {other:?}")),
    }

    for sr in &cert.sub_reports {
        let sub = replay_into(
            &sr.certificate,
            depth + 1,
            &format!("{label}/{}", sr.label),
            out,
        )?;
        grounded = grounded && sub;
    }

    out.notes.push(format!(
        "{label}: strategy {} verified ({} witnesses)",
        cert.strategy,
        cert.witnesses.len()
    ));
    Ok(grounded)
}

fn check_kind_allowed(
    strategy: &str,
    kind: &str,
    allowed: &[&str],
    label: &str,
) -> Result<()> {
    if allowed.contains(&strategy) {
        Ok(())
    } else {
        fail(
            label,
            format!("witness kind {kind} is not allowed under strategy {strategy}"),
        )
    }
}

fn check_class_shape(
    class: &[u64],
    multiplier: Option<&[u64]>,
    nonzero: bool,
    label: &str,
) -> Result<()> {
    let m = match multiplier {
        Some(m) => m,
        None => return fail(label, "class witness without a multiplier claim"),
    };
    if class.len() != m.len() {
        return fail(label, "class coordinate count does not match the multiplier");
    }
    for (x, d) in class.iter().zip(m) {
        if *d == 0 || x >= d {
            return fail(label, "class coordinate out of range");
        }
    }
    if nonzero && class.iter().all(|&x| x == 0) {
        return fail(label, "witness claims exclusion of the zero class");
    }
    Ok(())
}

fn check_abelian_gens(gens: &[Perm], label: &str) -> Result<()> {
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if a.mul(b) != b.mul(a) {
                return fail(label, "generators do not commute");
            }
        }
    }
    Ok(())
}

fn check_cyclic_by_abelian(
    ctx: &mut ReplayCtx,
    w: &CyclicByAbelianWitness,
    label: &str,
) -> Result<()> {
    let degree = ctx.group.degree();
    let v_gens = w
        .normal_generators
        .iter()
        .map(|im| parse_perm(im, degree, label, "normal generator"))
        .collect::<Result<Vec<_>>>()?;
    if v_gens.len() > REPLAY_GENERATOR_CAP {
        return fail(label, "too many normal generators");
    }
    check_abelian_gens(&v_gens, label)?;
    let c = parse_perm(&w.quotient_generator, degree, label, "quotient generator")?;
    let g_order = ctx.order(label)? as usize;
    for p in v_gens.iter().chain(std::iter::once(&c)) {
        if !ctx.contains(p, label)? {
            return fail(label, "witness element lies outside the group");
        }
    }
    // The subgroup generated by pairwise commuting elements is abelian.
    let v = close_elements(degree, &v_gens, REPLAY_ELEMENT_CAP, label)?;
    let v_set: HashSet<Perm> = v.iter().cloned().collect();
    // Normality: conjugates of subgroup generators by group generators stay
    // inside, so the whole conjugated subgroup does.
    for g in ctx.group.generators() {
        let gi = g.inverse();
        for x in &v_gens {
            if !v_set.contains(&gi.mul(x).mul(g)) {
                return fail(label, "subgroup is not normal");
            }
        }
    }
    if g_order % v.len() != 0 {
        return fail(label, "subgroup order does not divide the group order");
    }
    let index = g_order / v.len();
    // The products v * c^k must cover the group without repetition; that
    // pins the quotient as cyclic, generated by the coset of c.
    let mut seen: HashSet<Perm> = HashSet::with_capacity(g_order);
    let mut ck = Perm::identity(degree);
    for k in 0..index {
        if k > 0 {
            ck = ck.mul(&c);
        }
        for x in &v {
            if !seen.insert(x.mul(&ck)) {
                return fail(label, "coset powers overlap");
            }
        }
    }
    if seen.len() != g_order {
        return fail(label, "coset powers do not cover the group");
    }
    Ok(())
}

fn check_abelian_sylow(
    ctx: &mut ReplayCtx,
    w: &AbelianSylowWitness,
    label: &str,
) -> Result<()> {
    if !is_prime(w.prime) {
        return fail(label, "stated prime is not prime");
    }
    let degree = ctx.group.degree();
    let gens = w
        .generators
        .iter()
        .map(|im| parse_perm(im, degree, label, "subgroup generator"))
        .collect::<Result<Vec<_>>>()?;
    if gens.len() > REPLAY_GENERATOR_CAP {
        return fail(label, "too many subgroup generators");
    }
    check_abelian_gens(&gens, label)?;
    for p in &gens {
        if !ctx.contains(p, label)? {
            return fail(label, "subgroup generator lies outside the group");
        }
    }
    let order = ctx.order(label)?;
    if order % w.prime != 0 {
        return fail(label, "prime does not divide the group order");
    }
    let s = close_elements(degree, &gens, REPLAY_ELEMENT_CAP, label)?;
    if s.len() as u64 != p_part(order, w.prime) {
        return fail(label, "subgroup order is not the full prime part");
    }
    Ok(())
}

fn check_sylow_b0(
    ctx: &mut ReplayCtx,
    w: &SylowB0Witness,
    depth: usize,
    label: &str,
    out: &mut ReplayReport,
) -> Result<bool> {
    if !is_prime(w.prime) {
        return fail(label, "stated prime is not prime");
    }
    let degree = ctx.group.degree();
    let nested = &w.certificate;
    if nested.group_data.degree != degree {
        return fail(label, "nested subgroup acts on different points");
    }
    let gens = nested
        .group_data
        .generators
        .iter()
        .map(|im| parse_perm(im, degree, label, "subgroup generator"))
        .collect::<Result<Vec<_>>>()?;
    for p in &gens {
        if !ctx.contains(p, label)? {
            return fail(label, "subgroup generator lies outside the group");
        }
    }
    let order = ctx.order(label)?;
    if order % w.prime != 0 {
        return fail(label, "prime does not divide the group order");
    }
    let s = close_elements(degree, &gens, REPLAY_ELEMENT_CAP, label)?;
    if s.len() as u64 != p_part(order, w.prime) {
        return fail(label, "subgroup order is not the full prime part");
    }
    if !matches!(&nested.b0, Some(f) if f.is_empty()) {
        return fail(label, "nested certificate does not claim vanishing");
    }
    replay_into(nested, depth + 1, &format!("{label}/p={}", w.prime), out)
}

fn check_group_commutator(
    ctx: &mut ReplayCtx,
    w: &GroupCommutatorWitness,
    label: &str,
) -> Result<Perm> {
    let degree = ctx.group.degree();
    let z = parse_perm(&w.central, degree, label, "central element")?;
    let a = parse_perm(&w.left, degree, label, "left element")?;
    let b = parse_perm(&w.right, degree, label, "right element")?;
    for g in ctx.group.generators() {
        if z.mul(g) != g.mul(&z) {
            return fail(label, "claimed central element is not central");
        }
    }
    if !(ctx.contains(&a, label)? && ctx.contains(&b, label)?) {
        return fail(label, "commutator entries lie outside the group");
    }
    let comm = a.inverse().mul(&b.inverse()).mul(&a).mul(&b);
    if comm != z {
        return fail(label, "claimed commutator does not evaluate to the element");
    }
    Ok(z)
}

/// Checks that the witness cocycle's class cannot be written as a
/// coboundary plus lifted-homomorphism carry tables on the given subgroup,
/// which pins its restriction as nonzero in the subgroup's multiplier.
fn check_bicyclic(ctx: &mut ReplayCtx, w: &BicyclicWitness, label: &str) -> Result<()> {
    let m = w.modulus;
    if m < 2 || m >= 1 << 31 {
        return fail(label, "bad modulus");
    }
    let degree = ctx.group.degree();
    let n = w.elements.len();
    if n < 2 || n > REPLAY_SUBGROUP_CAP {
        return fail(label, "subgroup size out of replay range");
    }
    let elems = w
        .elements
        .iter()
        .map(|im| parse_perm(im, degree, label, "subgroup element"))
        .collect::<Result<Vec<_>>>()?;
    if !elems[0].is_identity() {
        return fail(label, "subgroup list must start with the identity");
    }
    let mut index: HashMap<&Perm, usize> = HashMap::with_capacity(n);
    for (i, p) in elems.iter().enumerate() {
        if index.insert(p, i).is_some() {
            return fail(label, "subgroup list contains duplicates");
        }
    }
    for p in &elems {
        if !ctx.contains(p, label)? {
            return fail(label, "subgroup element lies outside the group");
        }
    }
    // Multiplication table; closure makes the list a group.
    let mut mul = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let prod = elems[i].mul(&elems[j]);
            match index.get(&prod) {
                Some(&k) => mul[i * n + j] = k as u32,
                None => return fail(label, "subgroup list is not closed"),
            }
        }
    }
    let [pa, pb] = w.pair;
    if pa >= n || pb >= n {
        return fail(label, "generator pair out of range");
    }
    if mul[pa * n + pb] != mul[pb * n + pa] {
        return fail(label, "generator pair does not commute");
    }
    // The pair must generate the whole list.
    {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in &[pa, pb] {
                let y = mul[x * n + g] as usize;
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return fail(label, "pair does not generate the subgroup");
        }
    }
    // Dense cocycle table from the sorted sparse entries.
    let mut c = vec![0u64; n * n];
    let mut last: Option<(usize, usize)> = None;
    for &(i, j, v) in &w.cocycle {
        if i == 0 || j == 0 || i >= n || j >= n {
            return fail(label, "cocycle entry out of range or not normalized");
        }
        if v == 0 || v >= m {
            return fail(label, "cocycle value out of range");
        }
        if let Some(prev) = last {
            if (i, j) <= prev {
                return fail(label, "cocycle entries are not strictly sorted");
            }
        }
        last = Some((i, j));
        c[i * n + j] = v;
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let xy = mul[x * n + y] as usize;
                let yz = mul[y * n + z] as usize;
                let lhs = (c[x * n + y] + c[xy * n + z]) % m;
                let rhs = (c[y * n + z] + c[x * n + yz]) % m;
                if lhs != rhs {
                    return fail(label, "table violates the cocycle identity");
                }
            }
        }
    }
    // Basis of Hom(subgroup, Z/m): solutions of h(x) + h(y) = h(xy) with
    // h(identity) pinned to zero.
    let homs = {
        let vars = n - 1;
        let mut entries: Vec<(usize, usize, i64)> = Vec::new();
        let mut row = 0usize;
        for x in 1..n {
            for y in 1..n {
                let xy = mul[x * n + y] as usize;
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                *acc.entry(x - 1).or_insert(0) += 1;
                *acc.entry(y - 1).or_insert(0) += 1;
                if xy != 0 {
                    *acc.entry(xy - 1).or_insert(0) -= 1;
                }
                for (col, coef) in acc {
                    if coef != 0 {
                        entries.push((row, col, coef));
                    }
                }
                row += 1;
            }
        }
        let entries_big = entries
            .into_iter()
            .map(|(r, cidx, v)| (r, cidx, num_bigint::BigInt::from(v)))
            .collect();
        let mat = SparseIntMatrix::new(row.max(1), vars, entries_big)
            .map_err(|e| Error::ReplayFailed(format!("{label}: hom system: {e}")))?;
        kernel_mod(&mat, m).map_err(|e| Error::ReplayFailed(format!("{label}: hom kernel: {e}")))?
    };
    // Carry table of each homomorphism: the integer overflow bits of h.
    let mut carries: Vec<Vec<u64>> = Vec::with_capacity(homs.len());
    for h in &homs {
        let val = |i: usize| -> u64 {
            if i == 0 {
                0
            } else {
                h[i - 1] % m
            }
        };
        let mut table = vec![0u64; n * n];
        for x in 0..n {
            for y in 0..n {
                let sum = val(x) + val(y);
                let xy = mul[x * n + y] as usize;
                let num = sum as i64 - val(xy) as i64;
                if num.rem_euclid(m as i64) != 0 {
                    return fail(label, "hom basis fails the homomorphism law");
                }
                table[x * n + y] = (num / m as i64) as u64 % m;
            }
        }
        carries.push(table);
    }
    // Solve: coboundary of phi plus a combination of carry tables equals the
    // cocycle. Unsolvable means the class survives in the multiplier.
    let vars = (n - 1) + carries.len();
    let mut entries: Vec<(usize, usize, num_bigint::BigInt)> = Vec::new();
    let mut rhs: Vec<u64> = Vec::new();
    let mut row = 0usize;
    for x in 1..n {
        for y in 1..n {
            let xy = mul[x * n + y] as usize;
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            *acc.entry(x - 1).or_insert(0) += 1;
            *acc.entry(y - 1).or_insert(0) += 1;
            if xy != 0 {
                *acc.entry(xy - 1).or_insert(0) -= 1;
            }
            for (k, table) in carries.iter().enumerate() {
                let coef = table[x * n + y] as i64;
                if coef != 0 {
                    *acc.entry(n - 1 + k).or_insert(0) += coef;
                }
            }
            for (col, coef) in acc {
                if coef != 0 {
                    entries.push((row, col, num_bigint::BigInt::from(coef)));
                }
            }
            rhs.push(c[x * n + y]);
            row += 1;
        }
    }
    let mat = SparseIntMatrix::new(row.max(1), vars, entries)
        .map_err(|e| Error::ReplayFailed(format!("{label}: solve system: {e}")))?;
    match solve_mod(&mat, &rhs, m)
        .map_err(|e| Error::ReplayFailed(format!("{label}: solver: {e}")))?
    {
        None => Ok(()),
        Some(_) => fail(label, "restriction is a coboundary plus carries: class is zero"),
    }
}

fn find_sub_report<'a>(
    cert: &'a Certificate,
    wanted: &str,
    label: &str,
) -> Result<&'a SubReport> {
    cert.sub_reports
        .iter()
        .find(|sr| sr.label == wanted)
        .ok_or_else(|| Error::ReplayFailed(format!("{label}: missing sub-report {wanted}")))
}
