//! Finite subgroups of PGL2(F_q): closure, invariants, Sylow subgroups,
//! normalizers, conjugacy with witnesses and recognition of the
//! isomorphism type.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::addsub::{homothety_canonical, span, AdditiveSubgroup};
use crate::error::{Error, Result};
use crate::gf::{is_prime, Field, FieldElement};
use crate::pgl2::{DetClass, Pgl2, ProjMatrix, ProjPoint};

/// A finite subgroup, kept both as a generator list and as its sorted
/// element list.
#[derive(Clone)]
pub struct Subgroup {
    ambient: Pgl2,
    generators: Vec<ProjMatrix>,
    elements: Vec<ProjMatrix>,
    orders: OnceLock<Vec<u64>>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("ambient", &self.ambient)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

/// Breadth-first product closure of `generators`. `cap` defaults to the
/// order of PGL2(F_q).
pub fn closure(ambient: &Pgl2, generators: &[ProjMatrix], cap: Option<usize>) -> Result<Subgroup> {
    let cap = cap.unwrap_or(ambient.group_order() as usize);
    let gens: Vec<ProjMatrix> = generators
        .iter()
        .copied()
        .filter(|g| !g.is_identity())
        .collect();
    let mut seen: HashSet<ProjMatrix> = HashSet::new();
    seen.insert(ProjMatrix::IDENTITY);
    let mut queue = VecDeque::from([ProjMatrix::IDENTITY]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = ambient.mul(&x, g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<ProjMatrix> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(Subgroup {
        ambient: ambient.clone(),
        generators: gens,
        elements,
        orders: OnceLock::new(),
    })
}

impl Subgroup {
    /// Wraps a sorted, closed element list, choosing generators greedily in
    /// canonical order.
    pub fn from_elements(ambient: &Pgl2, mut elements: Vec<ProjMatrix>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        let mut gens = Vec::new();
        let mut current: Vec<ProjMatrix> = vec![ProjMatrix::IDENTITY];
        for x in &elements {
            if current.binary_search(x).is_err() {
                gens.push(*x);
                current = closure(ambient, &gens, None)
                    .expect("closure inside PGL2 stays within its order")
                    .elements;
            }
        }
        debug_assert_eq!(current, elements, "element list must be closed");
        Subgroup {
            ambient: ambient.clone(),
            generators: gens,
            elements,
            orders: OnceLock::new(),
        }
    }

    /// The whole group PGL2(F_q).
    pub fn full(ambient: &Pgl2) -> Subgroup {
        Self::from_elements(ambient, ambient.elements())
    }

    pub fn ambient(&self) -> &Pgl2 {
        &self.ambient
    }

    pub fn field(&self) -> &Field {
        self.ambient.field()
    }

    pub fn generators(&self) -> &[ProjMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[ProjMatrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &ProjMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    /// Element orders, aligned with [`Subgroup::elements`].
    pub fn element_orders(&self) -> &[u64] {
        self.orders
            .get_or_init(|| self.elements.iter().map(|m| self.ambient.order(m)).collect())
    }

    /// Multiset of element orders.
    pub fn order_profile(&self) -> BTreeMap<u64, usize> {
        let mut out = BTreeMap::new();
        for &o in self.element_orders() {
            *out.entry(o).or_insert(0) += 1;
        }
        out
    }

    /// Multiset of determinant classes.
    pub fn det_profile(&self) -> BTreeMap<DetClass, usize> {
        let mut out = BTreeMap::new();
        for m in &self.elements {
            *out.entry(self.ambient.det_class(m)).or_insert(0) += 1;
        }
        out
    }

    /// Multiset of (order, det class) pairs, a conjugation invariant that
    /// separates classes the two profiles above cannot.
    pub fn order_det_profile(&self) -> BTreeMap<(u64, DetClass), usize> {
        let mut out = BTreeMap::new();
        for (m, &o) in self.elements.iter().zip(self.element_orders()) {
            *out.entry((o, self.ambient.det_class(m))).or_insert(0) += 1;
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        let a = &self.ambient;
        self.generators.iter().enumerate().all(|(i, x)| {
            self.generators[i + 1..]
                .iter()
                .all(|y| a.mul(x, y) == a.mul(y, x))
        })
    }

    /// u G u^-1.
    pub fn conjugate_by(&self, u: &ProjMatrix) -> Subgroup {
        let a = &self.ambient;
        let uinv = a.inverse(u);
        let conj = |m: &ProjMatrix| a.mul(&a.mul(u, m), &uinv);
        let mut elements: Vec<ProjMatrix> = self.elements.iter().map(conj).collect();
        elements.sort_unstable();
        Subgroup {
            ambient: a.clone(),
            generators: self.generators.iter().map(conj).collect(),
            elements,
            orders: OnceLock::new(),
        }
    }

    /// Whether u G u^-1 is contained in `target`, checked on generators.
    pub fn conjugates_into(&self, u: &ProjMatrix, target: &Subgroup) -> bool {
        let a = &self.ambient;
        let uinv = a.inverse(u);
        self.generators
            .iter()
            .all(|g| target.contains(&a.mul(&a.mul(u, g), &uinv)))
    }

    /// Image in PGL2 of an extension field.
    pub fn embed_into(
        &self,
        target: &Pgl2,
        embedding: &crate::gf::SubfieldEmbedding,
    ) -> Result<Subgroup> {
        let gens: Vec<ProjMatrix> = self
            .generators
            .iter()
            .map(|g| self.ambient.embed_into(target, embedding, g))
            .collect();
        closure(target, &gens, None)
    }
}

/// Order profile as a list of (order, count) pairs.
pub fn order_profile(g: &Subgroup) -> Vec<(u64, usize)> {
    g.order_profile().into_iter().collect()
}

/// {g in ambient : g H g^-1 = H}.
pub fn normalizer(ambient: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
    if !h.is_subgroup_of(ambient) {
        return Err(Error::NotContained);
    }
    let elements = ambient
        .elements
        .iter()
        .copied()
        .filter(|u| h.conjugates_into(u, h))
        .collect();
    Ok(Subgroup::from_elements(&ambient.ambient, elements))
}

/// {g in ambient : g x = x g for all x in H}.
pub fn centralizer(ambient: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
    if !h.is_subgroup_of(ambient) {
        return Err(Error::NotContained);
    }
    let a = &ambient.ambient;
    let elements = ambient
        .elements
        .iter()
        .copied()
        .filter(|u| h.generators.iter().all(|x| a.mul(u, x) == a.mul(x, u)))
        .collect();
    Ok(Subgroup::from_elements(a, elements))
}

/// |N(H)| with N taken in the whole of PGL2(F_q).
pub fn normalizer_order_in_full(h: &Subgroup, full_elements: &[ProjMatrix]) -> usize {
    full_elements
        .iter()
        .filter(|u| h.conjugates_into(u, h))
        .count()
}

/// A Sylow `l`-subgroup, grown from the least element of `l`-power order by
/// repeatedly adjoining the least `l`-element that normalizes the current
/// `l`-group.
pub fn sylow(g: &Subgroup, l: u64) -> Result<Subgroup> {
    let n = g.order();
    if !is_prime(l) || !(n as u64).is_multiple_of(l) {
        return Err(Error::NotADivisor { prime: l, order: n });
    }
    let mut target = 1usize;
    while n.is_multiple_of(target * l as usize) {
        target *= l as usize;
    }
    let is_l_power = |mut k: u64| {
        while k.is_multiple_of(l) {
            k /= l;
        }
        k == 1
    };
    let candidates: Vec<ProjMatrix> = g
        .elements
        .iter()
        .zip(g.element_orders())
        .filter(|(m, &o)| !m.is_identity() && is_l_power(o))
        .map(|(m, _)| *m)
        .collect();
    let mut p = closure(&g.ambient, &candidates[..1], None)?;
    while p.order() < target {
        let next = candidates
            .iter()
            .find(|x| !p.contains(x) && p.conjugates_into(x, &p))
            .ok_or_else(|| Error::Internal("Sylow growth stalled".into()))?;
        let mut gens = p.generators.clone();
        gens.push(*next);
        p = closure(&g.ambient, &gens, None)?;
    }
    Ok(p)
}

/// Searches for u with u G1 u^-1 = G2.
///
/// After comparing orders and the (order, det class) profile, one
/// generator g of G1 is tried against every h in G2 with the same Tr^2/det
/// and det class. For each such h, the candidates u solve the linear system
/// u g = c h u (c^2 = det g / det h); each invertible solution is checked on
/// the remaining generators. The first witness in canonical scan order is
/// returned.
pub fn are_conjugate(g1: &Subgroup, g2: &Subgroup) -> Option<ProjMatrix> {
    let a = &g1.ambient;
    if g1.ambient != g2.ambient || g1.order() != g2.order() {
        return None;
    }
    if g1.order() == 1 {
        return Some(ProjMatrix::IDENTITY);
    }
    if g1.order_det_profile() != g2.order_det_profile() {
        return None;
    }
    let key = |m: &ProjMatrix| (a.trace_ratio(m), a.det_class(m));
    let pivot = *g1
        .generators
        .iter()
        .min_by_key(|gen| {
            let k = key(gen);
            g2.elements.iter().filter(|h| key(h) == k).count()
        })
        .expect("nontrivial group has a generator");
    let pivot_key = key(&pivot);
    let f = a.field();
    for h in g2.elements.iter().filter(|h| key(h) == pivot_key) {
        let ratio = f.div(a.det(&pivot), a.det(h)).expect("invertible");
        let Some(root) = f.sqrt(ratio) else {
            continue;
        };
        let mut scalars = vec![root, f.neg(root)];
        scalars.sort_unstable();
        scalars.dedup();
        for c in scalars {
            for u in intertwiners(a, &pivot, h, c) {
                if g1.conjugates_into(&u, g2) {
                    return Some(u);
                }
            }
        }
    }
    None
}

/// Invertible solutions u of u g = c h u, canonicalized and sorted.
fn intertwiners(a: &Pgl2, g: &ProjMatrix, h: &ProjMatrix, c: FieldElement) -> Vec<ProjMatrix> {
    let f = a.field();
    let [ga, gb, gc, gd] = g.entries();
    let [ha, hb, hc, hd] = h.entries();
    let z = FieldElement::ZERO;
    let ch = |x: FieldElement| f.mul(c, x);
    let rows = [
        [f.sub(ga, ch(ha)), gc, f.neg(ch(hb)), z],
        [gb, f.sub(gd, ch(ha)), z, f.neg(ch(hb))],
        [f.neg(ch(hc)), z, f.sub(ga, ch(hd)), gc],
        [z, f.neg(ch(hc)), gb, f.sub(gd, ch(hd))],
    ];
    let basis = nullspace(f, rows);
    let k = basis.len();
    if k == 0 {
        return Vec::new();
    }
    let q = f.q() as u64;
    let mut out = BTreeSet::new();
    for t in 1..q.pow(k as u32) {
        let mut coeffs = Vec::with_capacity(k);
        let mut x = t;
        for _ in 0..k {
            coeffs.push(FieldElement::from_encoding_unchecked((x % q) as u32));
            x /= q;
        }
        // projective: first nonzero coefficient is 1
        if coeffs.iter().find(|c| !c.is_zero()) != Some(&FieldElement::ONE) {
            continue;
        }
        let mut u = [z; 4];
        for (coef, v) in coeffs.iter().zip(&basis) {
            for i in 0..4 {
                u[i] = f.add(u[i], f.mul(*coef, v[i]));
            }
        }
        if let Ok(m) = a.canonicalize([[u[0], u[1]], [u[2], u[3]]]) {
            out.insert(m);
        }
    }
    out.into_iter().collect()
}

/// Basis of the right null space of a 4x4 matrix.
fn nullspace(f: &Field, mut rows: [[FieldElement; 4]; 4]) -> Vec<[FieldElement; 4]> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..4 {
        let Some(pr) = (rank..4).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let s = f.inv(rows[rank][col]).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, s);
        }
        let prow = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let c = row[col];
                for j in 0..4 {
                    row[j] = f.sub(row[j], f.mul(c, prow[j]));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = [FieldElement::ZERO; 4];
            v[fc] = FieldElement::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[i][fc]);
            }
            v
        })
        .collect()
}

/// Isomorphism-type label of a finite subgroup.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "family")]
pub enum Family {
    Trivial,
    Cyclic { n: u64 },
    Dihedral { n: u64 },
    /// Order p^m * n with unipotent part conjugate to [[1, gamma], [0, 1]];
    /// `gamma` is the homothety-canonical echelon basis.
    SemiElementary { m: u32, n: u64, gamma: Vec<u32> },
    Tetrahedral,
    Octahedral,
    Icosahedral,
    #[serde(rename = "PSL")]
    Psl { s: u32 },
    #[serde(rename = "PGL")]
    Pgl { s: u32 },
}

impl Family {
    /// Rank in the fixed label precedence, 0 being the strongest:
    /// PGL > PSL > Icosahedral > Octahedral > Tetrahedral > SemiElementary >
    /// Dihedral > Cyclic > Trivial.
    pub fn precedence(&self) -> u8 {
        match self {
            Family::Pgl { .. } => 0,
            Family::Psl { .. } => 1,
            Family::Icosahedral => 2,
            Family::Octahedral => 3,
            Family::Tetrahedral => 4,
            Family::SemiElementary { .. } => 5,
            Family::Dihedral { .. } => 6,
            Family::Cyclic { .. } => 7,
            Family::Trivial => 8,
        }
    }

    /// Whether two labels name the same family, ignoring the gamma class.
    pub fn same_shape(&self, other: &Family) -> bool {
        match (self, other) {
            (
                Family::SemiElementary { m, n, .. },
                Family::SemiElementary { m: m2, n: n2, .. },
            ) => m == m2 && n == n2,
            _ => self == other,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Trivial => f.write_str("Trivial"),
            Family::Cyclic { n } => write!(f, "Cyclic({n})"),
            Family::Dihedral { n } => write!(f, "Dihedral({n})"),
            Family::SemiElementary { m, n, gamma } => {
                let g: Vec<String> = gamma.iter().map(u32::to_string).collect();
                write!(f, "SemiElementary({m},{n},[{}])", g.join(","))
            }
            Family::Tetrahedral => f.write_str("Tetrahedral"),
            Family::Octahedral => f.write_str("Octahedral"),
            Family::Icosahedral => f.write_str("Icosahedral"),
            Family::Psl { s } => write!(f, "PSL({s})"),
            Family::Pgl { s } => write!(f, "PGL({s})"),
        }
    }
}

/// A family label plus the other labels that name the same group at the
/// small-order coincidences (A4 = B(F_4) in characteristic 2 and so on).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassLabel {
    pub family: Family,
    pub aliases: Vec<Family>,
}

impl ClassLabel {
    fn new(family: Family, aliases: Vec<Family>) -> ClassLabel {
        ClassLabel { family, aliases }
    }

    /// Every label, primary first.
    pub fn all(&self) -> impl Iterator<Item = &Family> {
        std::iter::once(&self.family).chain(&self.aliases)
    }

    pub fn names(&self, family: &Family) -> bool {
        self.all().any(|f| f == family)
    }

    /// The same labels with the highest-precedence one promoted to primary.
    pub fn by_precedence(&self) -> ClassLabel {
        let mut all: Vec<Family> = self.all().cloned().collect();
        all.sort_by_key(|f| (f.precedence(), f.clone()));
        all.dedup();
        let family = all.remove(0);
        ClassLabel::new(family, all)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        for a in &self.aliases {
            write!(f, " = {a}")?;
        }
        Ok(())
    }
}

const A4_PROFILE: [(u64, usize); 3] = [(1, 1), (2, 3), (3, 8)];
const S4_PROFILE: [(u64, usize); 4] = [(1, 1), (2, 9), (3, 8), (4, 6)];
const A5_PROFILE: [(u64, usize); 4] = [(1, 1), (2, 15), (3, 20), (5, 24)];

fn profile_is(profile: &BTreeMap<u64, usize>, expected: &[(u64, usize)]) -> bool {
    profile.len() == expected.len() && expected.iter().all(|(k, v)| profile.get(k) == Some(v))
}

/// Reads off the isomorphism type.
///
/// p-regular groups are told apart by order and element-order data;
/// p-irregular ones by whether the Sylow p-subgroup is normal with cyclic
/// quotient (semi-elementary, with the gamma class read after moving the
/// common fixed point to infinity), by the orders of PSL2/PGL2 over
/// subfields, and by the dihedral and icosahedral exceptions in
/// characteristics 2 and 3.
pub fn recognize(g: &Subgroup) -> Result<ClassLabel> {
    let n = g.order() as u64;
    let p = g.ambient.p() as u64;
    let profile = g.order_profile();
    let count = |k: u64| profile.get(&k).copied().unwrap_or(0) as u64;
    let violated = |why: &str| {
        Err(Error::ClassificationViolated(format!(
            "order {n} group over F_{} ({why}), profile {profile:?}",
            g.ambient.q()
        )))
    };
    if n == 1 {
        return Ok(ClassLabel::new(Family::Trivial, vec![]));
    }
    if !n.is_multiple_of(p) {
        if count(n) > 0 {
            return Ok(ClassLabel::new(Family::Cyclic { n }, vec![]));
        }
        if n == 4 && count(2) == 3 {
            return Ok(ClassLabel::new(Family::Dihedral { n: 2 }, vec![]));
        }
        if n.is_multiple_of(2) && n / 2 >= 3 && count(n / 2) > 0 && count(2) >= n / 2 {
            return Ok(ClassLabel::new(Family::Dihedral { n: n / 2 }, vec![]));
        }
        if n == 12 && profile_is(&profile, &A4_PROFILE) && has_normal_klein(g) {
            return Ok(ClassLabel::new(Family::Tetrahedral, vec![]));
        }
        if n == 24 && profile_is(&profile, &S4_PROFILE) {
            return Ok(ClassLabel::new(Family::Octahedral, vec![]));
        }
        if n == 60 && profile_is(&profile, &A5_PROFILE) {
            return Ok(ClassLabel::new(Family::Icosahedral, vec![]));
        }
        return violated("p-regular but not cyclic, dihedral, A4, S4 or A5");
    }

    let mut pm = 1u64;
    let mut m = 0u32;
    while n.is_multiple_of(pm * p) {
        pm *= p;
        m += 1;
    }
    let k = n / pm;
    if 1 + count(p) == pm && (k == 1 || count(k) > 0) {
        let gamma = unipotent_gamma_class(g)?;
        let family = Family::SemiElementary { m, n: k, gamma };
        let mut aliases = Vec::new();
        if m == 1 && k == 1 {
            aliases.push(Family::Cyclic { n: p });
        }
        if p == 2 && m == 2 && k == 1 {
            aliases.push(Family::Dihedral { n: 2 });
        }
        if p == 2 && m == 2 && k == 3 {
            aliases.push(Family::Tetrahedral);
        }
        if p != 2 && m == 1 && k == 2 {
            aliases.push(Family::Dihedral { n: p });
        }
        return Ok(ClassLabel::new(family, aliases));
    }
    let s = m;
    if n == pm * (pm * pm - 1) {
        let mut aliases = Vec::new();
        if p == 2 {
            aliases.push(Family::Psl { s });
            if s == 1 {
                aliases.push(Family::Dihedral { n: 3 });
            }
            if s == 2 {
                aliases.push(Family::Icosahedral);
            }
        }
        if p == 3 && s == 1 {
            aliases.push(Family::Octahedral);
        }
        return Ok(ClassLabel::new(Family::Pgl { s }, aliases));
    }
    if p != 2 && n == pm * (pm * pm - 1) / 2 {
        let mut aliases = Vec::new();
        if p == 3 && s == 1 {
            aliases.push(Family::Tetrahedral);
        }
        if p == 5 && s == 1 {
            aliases.push(Family::Icosahedral);
        }
        return Ok(ClassLabel::new(Family::Psl { s }, aliases));
    }
    if p == 2 && pm == 2 && k % 2 == 1 && count(k) > 0 && count(2) == k {
        return Ok(ClassLabel::new(Family::Dihedral { n: k }, vec![]));
    }
    if p == 3 && n == 60 && profile_is(&profile, &A5_PROFILE) {
        return Ok(ClassLabel::new(Family::Icosahedral, vec![]));
    }
    violated("p-irregular but not semi-elementary, PSL2, PGL2, dihedral or A5")
}

/// Involutions plus identity form a normal subgroup of order 4.
fn has_normal_klein(g: &Subgroup) -> bool {
    let a = &g.ambient;
    let inv: Vec<ProjMatrix> = g
        .elements
        .iter()
        .zip(g.element_orders())
        .filter(|(_, &o)| o <= 2)
        .map(|(m, _)| *m)
        .collect();
    if inv.len() != 4 {
        return false;
    }
    let set: BTreeSet<ProjMatrix> = inv.iter().copied().collect();
    inv.iter()
        .all(|x| inv.iter().all(|y| set.contains(&a.mul(x, y))))
        && g.elements
            .iter()
            .all(|u| inv.iter().all(|x| set.contains(&a.conjugate(u, x))))
}

/// Homothety class of gamma for a group with normal Sylow p-subgroup:
/// conjugate the common fixed point to infinity so the p-part becomes
/// [[1, gamma], [0, 1]].
fn unipotent_gamma_class(g: &Subgroup) -> Result<Vec<u32>> {
    let a = &g.ambient;
    let f = a.field();
    let p = a.p() as u64;
    let unipotents: Vec<ProjMatrix> = g
        .elements
        .iter()
        .zip(g.element_orders())
        .filter(|(_, &o)| o == p)
        .map(|(m, _)| *m)
        .collect();
    let first = unipotents
        .first()
        .ok_or_else(|| Error::Internal("semi-elementary group without unipotents".into()))?;
    let fixed = a.fixed_points(first)?.rational;
    let u = match fixed.as_slice() {
        [ProjPoint::Infinity] => ProjMatrix::IDENTITY,
        [ProjPoint::Finite(z)] => a.canonicalize([
            [FieldElement::ZERO, FieldElement::ONE],
            [FieldElement::ONE, f.neg(*z)],
        ])?,
        _ => {
            return Err(Error::ClassificationViolated(
                "unipotent element without a unique rational fixed point".into(),
            ))
        }
    };
    let mut translations = Vec::with_capacity(unipotents.len());
    for x in &unipotents {
        let [one, b, c, d] = a.conjugate(&u, x).entries();
        if one != FieldElement::ONE || !c.is_zero() || d != FieldElement::ONE {
            return Err(Error::ClassificationViolated(
                "Sylow p-subgroup does not share a fixed point".into(),
            ));
        }
        translations.push(b);
    }
    let gamma: AdditiveSubgroup = span(f, &translations);
    Ok(homothety_canonical(f, &gamma)?
        .basis()
        .iter()
        .map(|x| x.encoding())
        .collect())
}

/// (d_i, f_i) per conjugacy class of maximal cyclic subgroups of a p-regular
/// group: d_i is the order, f_i the index of the subgroup in its normalizer.
pub fn maximal_cyclic_data(g: &Subgroup) -> Result<Vec<(u64, u64)>> {
    let n = g.order();
    let p = g.ambient.p() as usize;
    if n.is_multiple_of(p) {
        return Err(Error::NotPRegular(n));
    }
    if n == 1 {
        return Err(Error::Internal("trivial group has no maximal cyclic subgroups".into()));
    }
    let a = &g.ambient;
    let cyclics: BTreeSet<Vec<ProjMatrix>> = g
        .elements
        .iter()
        .filter(|m| !m.is_identity())
        .map(|m| {
            let mut powers = vec![ProjMatrix::IDENTITY];
            let mut x = *m;
            while !x.is_identity() {
                powers.push(x);
                x = a.mul(&x, m);
            }
            powers.sort_unstable();
            powers
        })
        .collect();
    let maximal: Vec<&Vec<ProjMatrix>> = cyclics
        .iter()
        .filter(|c| {
            !cyclics.iter().any(|d| {
                d.len() > c.len() && c.iter().all(|x| d.binary_search(x).is_ok())
            })
        })
        .collect();
    let mut assigned: BTreeSet<&Vec<ProjMatrix>> = BTreeSet::new();
    let mut out = Vec::new();
    for c in &maximal {
        if assigned.contains(*c) {
            continue;
        }
        let mut stabilizer = 0u64;
        for u in &g.elements {
            let mut conj: Vec<ProjMatrix> = c.iter().map(|x| a.conjugate(u, x)).collect();
            conj.sort_unstable();
            if conj == **c {
                stabilizer += 1;
            }
            if let Some(member) = maximal.iter().find(|d| ***d == conj) {
                assigned.insert(member);
            }
        }
        let d = c.len() as u64;
        out.push((d, stabilizer / d));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u32, r: u32) -> Pgl2 {
        Pgl2::new(p, r).unwrap()
    }

    #[test]
    fn closure_examples() {
        let g5 = g(5, 1);
        let t = g5.matrix([[1, 1], [0, 1]]).unwrap();
        assert_eq!(closure(&g5, &[t], None).unwrap().order(), 5);
        let g3 = g(3, 1);
        let triv = closure(&g3, &[], None).unwrap();
        assert_eq!(triv.elements(), &[ProjMatrix::IDENTITY]);
        assert_eq!(
            closure(&g5, &[t, g5.matrix([[0, 1], [1, 0]]).unwrap()], Some(10)).unwrap_err(),
            Error::CapExceeded { cap: 10 }
        );
    }

    #[test]
    fn klein_profile() {
        let g5 = g(5, 1);
        let k = closure(
            &g5,
            &[g5.matrix_int([[-1, 0], [0, 1]]).unwrap(), g5.matrix([[0, 1], [1, 0]]).unwrap()],
            None,
        )
        .unwrap();
        assert_eq!(order_profile(&k), vec![(1, 1), (2, 3)]);
        assert_eq!(recognize(&k).unwrap().family, Family::Dihedral { n: 2 });
    }

    #[test]
    fn full_group_has_expected_order() {
        let g4 = g(2, 2);
        let full = Subgroup::full(&g4);
        assert_eq!(full.order(), 60);
        assert!(full.generators().len() <= 4);
        let label = recognize(&full).unwrap();
        assert_eq!(label.family, Family::Pgl { s: 2 });
        assert!(label.names(&Family::Icosahedral));
        assert_eq!(label.by_precedence().family, Family::Pgl { s: 2 });
    }

    #[test]
    fn sylow_examples() {
        let g4 = g(2, 2);
        let full = Subgroup::full(&g4);
        let s = sylow(&full, 2).unwrap();
        assert_eq!(s.order(), 4);
        assert!(s
            .elements()
            .iter()
            .filter(|m| !m.is_identity())
            .all(|m| g4.order_criterion(m, 2).unwrap()));
        assert!(matches!(sylow(&full, 7), Err(Error::NotADivisor { .. })));
        assert!(sylow(&full, 4).is_err());
    }

    #[test]
    fn normalizer_of_sylow_p_in_full_group() {
        for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let gr = g(p, r);
            let full = Subgroup::full(&gr);
            let s = sylow(&full, p as u64).unwrap();
            let q = gr.q() as usize;
            assert_eq!(normalizer(&full, &s).unwrap().order(), q * (q - 1));
            let c = centralizer(&full, &closure(&gr, &[], None).unwrap()).unwrap();
            assert_eq!(c.order(), full.order());
        }
    }

    #[test]
    fn normalizer_rejects_non_subgroup() {
        let g5 = g(5, 1);
        let a = closure(&g5, &[g5.matrix([[1, 1], [0, 1]]).unwrap()], None).unwrap();
        let b = closure(&g5, &[g5.matrix([[0, 1], [1, 0]]).unwrap()], None).unwrap();
        assert_eq!(normalizer(&a, &b).unwrap_err(), Error::NotContained);
        assert_eq!(centralizer(&a, &b).unwrap_err(), Error::NotContained);
    }

    /// Oracle: conjugacy by scanning every element of the ambient group.
    fn conjugate_by_scan(g1: &Subgroup, g2: &Subgroup) -> bool {
        g1.order() == g2.order()
            && g1
                .ambient()
                .elements()
                .iter()
                .any(|u| g1.conjugates_into(u, g2))
    }

    #[test]
    fn conjugacy_examples() {
        let g3 = g(3, 1);
        let d = closure(&g3, &[g3.matrix([[2, 0], [0, 1]]).unwrap()], None).unwrap();
        let x = closure(&g3, &[g3.matrix([[0, 2], [1, 0]]).unwrap()], None).unwrap();
        let w = closure(&g3, &[g3.matrix([[0, 1], [1, 0]]).unwrap()], None).unwrap();
        assert_eq!(are_conjugate(&d, &x), None);
        assert!(!conjugate_by_scan(&d, &x));
        let u = are_conjugate(&d, &w).unwrap();
        assert_eq!(d.conjugate_by(&u), w);
        assert!(conjugate_by_scan(&d, &w));
    }

    #[test]
    fn sylow_p_subgroups_are_conjugate() {
        let g9 = g(3, 2);
        let full = Subgroup::full(&g9);
        let s = sylow(&full, 3).unwrap();
        let w = g9.matrix([[0, 1], [1, 0]]).unwrap();
        let lower = s.conjugate_by(&w);
        assert_ne!(s, lower);
        let u = are_conjugate(&s, &lower).unwrap();
        assert_eq!(s.conjugate_by(&u), lower);
    }

    #[test]
    fn are_conjugate_agrees_with_scan_on_cyclic_subgroups() {
        for (p, r) in [(2, 2), (3, 1), (5, 1), (7, 1)] {
            let gr = g(p, r);
            let subs: BTreeSet<Vec<ProjMatrix>> = gr
                .elements()
                .iter()
                .map(|m| closure(&gr, &[*m], None).unwrap().elements().to_vec())
                .collect();
            let subs: Vec<Subgroup> = subs
                .into_iter()
                .map(|e| Subgroup::from_elements(&gr, e))
                .collect();
            for a in subs.iter().step_by(3) {
                for b in subs.iter().step_by(2) {
                    let fast = are_conjugate(a, b);
                    assert_eq!(fast.is_some(), conjugate_by_scan(a, b));
                    if let Some(u) = fast {
                        assert_eq!(a.conjugate_by(&u), *b);
                    }
                }
            }
        }
    }

    #[test]
    fn recognize_examples() {
        let g7 = g(7, 1);
        let c6 = closure(&g7, &[g7.matrix([[3, 0], [0, 1]]).unwrap()], None).unwrap();
        assert_eq!(recognize(&c6).unwrap(), ClassLabel::new(Family::Cyclic { n: 6 }, vec![]));
        let g3 = g(3, 1);
        let full = Subgroup::full(&g3);
        let label = recognize(&full).unwrap();
        assert_eq!(label.family, Family::Pgl { s: 1 });
        assert_eq!(label.aliases, vec![Family::Octahedral]);
        let g4 = g(2, 2);
        let f = g4.field();
        let b = closure(
            &g4,
            &[
                g4.matrix([[1, 1], [0, 1]]).unwrap(),
                g4.matrix([[1, 2], [0, 1]]).unwrap(),
                g4.diag(f.primitive_element()).unwrap(),
            ],
            None,
        )
        .unwrap();
        assert_eq!(b.order(), 12);
        assert_eq!(order_profile(&b), vec![(1, 1), (2, 3), (3, 8)]);
        let label = recognize(&b).unwrap();
        assert_eq!(
            label.family,
            Family::SemiElementary { m: 2, n: 3, gamma: vec![1, 2] }
        );
        assert_eq!(label.aliases, vec![Family::Tetrahedral]);
        assert_eq!(label.by_precedence().family, Family::Tetrahedral);
    }

    #[test]
    fn maximal_cyclic_examples() {
        let g7 = g(7, 1);
        let c6 = closure(&g7, &[g7.matrix([[3, 0], [0, 1]]).unwrap()], None).unwrap();
        assert_eq!(maximal_cyclic_data(&c6).unwrap(), vec![(6, 1)]);
        let g5 = g(5, 1);
        let k = closure(
            &g5,
            &[g5.matrix_int([[-1, 0], [0, 1]]).unwrap(), g5.matrix([[0, 1], [1, 0]]).unwrap()],
            None,
        )
        .unwrap();
        assert_eq!(maximal_cyclic_data(&k).unwrap(), vec![(2, 2), (2, 2), (2, 2)]);
        let t = closure(&g5, &[g5.matrix([[1, 1], [0, 1]]).unwrap()], None).unwrap();
        assert_eq!(maximal_cyclic_data(&t).unwrap_err(), Error::NotPRegular(5));
    }
}
