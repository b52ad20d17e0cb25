//! Conjugacy classes of subgroups of PGL2(F_q): the predicted list, an
//! independent brute-force enumeration and the harness comparing them.

use std::collections::HashSet;

use num_rational::Ratio;
use serde::Serialize;

use crate::addsub::semi_elementary_classes;
use crate::construct::{self, FamilyParams};
use crate::error::{Error, Result};
use crate::gf::{divisors, gcd, subfield_embedding};
use crate::groups::{
    are_conjugate, closure, maximal_cyclic_data, normalizer_order_in_full, recognize, ClassLabel,
    Family, Subgroup,
};
use crate::pgl2::{DetClass, Pgl2, ProjMatrix};

/// Default bound on |PGL2(F_q)| for the brute-force oracle (q <= 9).
pub const DEFAULT_ORACLE_CAP: u64 = 720;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Predicted,
    BruteForce,
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct ClassDescriptor {
    pub label: ClassLabel,
    pub representative: Subgroup,
    /// Number of subgroups in the class.
    pub class_size: u64,
    pub source: Source,
}

impl ClassDescriptor {
    fn new(label: ClassLabel, representative: Subgroup, source: Source, full: &[ProjMatrix]) -> Self {
        let order = representative.ambient().group_order();
        let class_size = order / normalizer_order_in_full(&representative, full) as u64;
        ClassDescriptor { label, representative, class_size, source }
    }

    pub fn order(&self) -> usize {
        self.representative.order()
    }
}

fn same_invariants(a: &Subgroup, b: &Subgroup) -> bool {
    a.order() == b.order() && a.order_det_profile() == b.order_det_profile()
}

fn find_conjugate(classes: &[ClassDescriptor], h: &Subgroup) -> Option<usize> {
    classes.iter().position(|c| {
        same_invariants(&c.representative, h) && are_conjugate(&c.representative, h).is_some()
    })
}

/// Family candidates in emission order.
fn predicted_candidates(g: &Pgl2) -> Result<Vec<(Family, FamilyParams)>> {
    let f = g.field();
    let (p, r, q) = (f.p() as u64, f.r(), f.q() as u64);
    let mut out = vec![(Family::Trivial, FamilyParams::Trivial)];
    let mut ns: Vec<u64> = divisors(q - 1)
        .into_iter()
        .chain(divisors(q + 1))
        .filter(|&n| n >= 3 || (n == 2 && p != 2))
        .collect();
    ns.sort_unstable();
    ns.dedup();
    for &n in &ns {
        out.push((Family::Cyclic { n }, FamilyParams::Cyclic { n }));
        out.push((Family::Dihedral { n }, FamilyParams::Dihedral { n, tau: None }));
    }
    if p != 2 || r % 2 == 0 {
        out.push((Family::Tetrahedral, FamilyParams::Tetrahedral));
    }
    if p != 2 {
        out.push((Family::Octahedral, FamilyParams::Octahedral));
    }
    if [0, 1, 4].contains(&(q % 5)) {
        out.push((Family::Icosahedral, FamilyParams::Icosahedral));
    }
    for s in divisors(r as u64) {
        let s = s as u32;
        out.push((Family::Psl { s }, FamilyParams::Psl { s }));
        out.push((Family::Pgl { s }, FamilyParams::Pgl { s }));
    }
    for m in 1..=r {
        let top = p.pow(gcd(r as u64, m as u64) as u32) - 1;
        for n in divisors(top) {
            for gamma in semi_elementary_classes(f, m as usize, n)? {
                let family = Family::SemiElementary {
                    m,
                    n,
                    gamma: gamma.basis().iter().map(|x| x.encoding()).collect(),
                };
                out.push((family, FamilyParams::SemiElementary { gamma, n }));
            }
        }
    }
    Ok(out)
}

fn merge_label(label: &mut ClassLabel, extra: &ClassLabel) {
    let mut all: Vec<Family> = label.all().chain(extra.all()).cloned().collect();
    all.sort_by_key(|f| (f.precedence(), f.clone()));
    all.dedup_by(|a, b| a.same_shape(b));
    let family = all.remove(0);
    *label = ClassLabel { family, aliases: all };
}

/// The classes predicted by the classification, one per conjugacy class
/// after merging coincident families.
pub fn predicted_atlas(g: &Pgl2) -> Result<Vec<ClassDescriptor>> {
    let full = g.elements();
    let mut classes: Vec<ClassDescriptor> = Vec::new();
    for (family, params) in predicted_candidates(g)? {
        let rep = construct::build(g, &params)?;
        let recognized = recognize(&rep)?;
        let mut label = recognized.clone();
        if !label.all().any(|f| f.same_shape(&family)) {
            label.aliases.push(family);
        }
        match find_conjugate(&classes, &rep) {
            Some(i) => merge_label(&mut classes[i].label, &label),
            None => {
                let label = label.by_precedence();
                classes.push(ClassDescriptor::new(label, rep, Source::Predicted, &full));
            }
        }
    }
    Ok(classes)
}

/// Every conjugacy class of subgroups, found by enumeration alone: all
/// cyclic subgroups first, then repeated one-element extensions of each
/// class representative until nothing new appears.
pub fn brute_force_atlas(g: &Pgl2, cap: u64) -> Result<Vec<ClassDescriptor>> {
    let order = g.group_order();
    if order > cap {
        return Err(Error::OracleCapExceeded { q: g.q() as u64, order, cap });
    }
    let full = g.elements();
    let mut seen: HashSet<Vec<ProjMatrix>> = HashSet::new();
    let mut reps: Vec<Subgroup> = Vec::new();
    let mut offer = |h: Subgroup, reps: &mut Vec<Subgroup>| {
        if seen.insert(h.elements().to_vec())
            && !reps
                .iter()
                .any(|r| same_invariants(r, &h) && are_conjugate(r, &h).is_some())
        {
            reps.push(h);
        }
    };
    offer(closure(g, &[], None)?, &mut reps);
    for x in &full {
        offer(closure(g, &[*x], None)?, &mut reps);
    }
    let mut i = 0;
    while i < reps.len() {
        let h = reps[i].clone();
        // <H, g> depends only on the coset H g
        let mut covered: HashSet<ProjMatrix> = h.elements().iter().copied().collect();
        for x in &full {
            if covered.contains(x) {
                continue;
            }
            for y in h.elements() {
                covered.insert(g.mul(y, x));
            }
            let mut gens = h.generators().to_vec();
            gens.push(*x);
            offer(closure(g, &gens, None)?, &mut reps);
        }
        i += 1;
    }
    let mut classes = Vec::with_capacity(reps.len());
    for rep in reps {
        let label = recognize(&rep)?.by_precedence();
        classes.push(ClassDescriptor::new(label, rep, Source::BruteForce, &full));
    }
    classes.sort_by(|a, b| {
        (a.order(), &a.label.family, a.representative.elements())
            .cmp(&(b.order(), &b.label.family, b.representative.elements()))
    });
    Ok(classes)
}

/// A predicted class paired with the brute-force class it is conjugate to.
#[derive(Clone, Debug)]
pub struct MatchedPair {
    pub predicted: ClassDescriptor,
    pub brute_force: ClassDescriptor,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub q: u64,
    pub matched: Vec<MatchedPair>,
    pub predicted_only: Vec<ClassDescriptor>,
    pub brute_only: Vec<ClassDescriptor>,
    /// Brute-only classes explained as a determinant-class splitting of the
    /// involutions in a matched class.
    pub residual_notes: Vec<String>,
    /// Brute-only classes with no such explanation.
    pub unexplained: Vec<String>,
}

impl VerificationReport {
    /// No predicted class is missing from the enumeration.
    pub fn passed(&self) -> bool {
        self.predicted_only.is_empty()
    }

    /// Every class matches and nothing needed explaining.
    pub fn perfect(&self) -> bool {
        self.passed() && self.brute_only.is_empty()
    }
}

fn involution_det_profile(h: &Subgroup) -> (usize, usize) {
    let a = h.ambient();
    let mut out = (0, 0);
    for (m, &o) in h.elements().iter().zip(h.element_orders()) {
        if o == 2 {
            match a.det_class(m) {
                DetClass::Square => out.0 += 1,
                DetClass::Nonsquare => out.1 += 1,
            }
        }
    }
    out
}

/// Compares the prediction with the oracle.
pub fn verify(g: &Pgl2, cap: u64) -> Result<VerificationReport> {
    let predicted = predicted_atlas(g)?;
    let brute = brute_force_atlas(g, cap)?;
    let mut taken = vec![false; brute.len()];
    let mut matched = Vec::new();
    let mut predicted_only = Vec::new();
    for pc in predicted {
        let hit = brute.iter().enumerate().position(|(i, b)| {
            !taken[i]
                && same_invariants(&b.representative, &pc.representative)
                && are_conjugate(&pc.representative, &b.representative).is_some()
        });
        match hit {
            Some(i) => {
                taken[i] = true;
                matched.push(MatchedPair { predicted: pc, brute_force: brute[i].clone() });
            }
            None => predicted_only.push(pc),
        }
    }
    let mut brute_only = Vec::new();
    let mut residual_notes = Vec::new();
    let mut unexplained = Vec::new();
    let odd = g.p() != 2;
    for (b, _) in brute.iter().zip(&taken).filter(|(_, t)| !**t) {
        let twin = matched.iter().find(|mp| {
            mp.brute_force.order() == b.order()
                && mp.brute_force.label.family == b.label.family
                && involution_det_profile(&mp.brute_force.representative)
                    != involution_det_profile(&b.representative)
        });
        match twin.filter(|_| odd) {
            Some(mp) => {
                let (sq, ns) = involution_det_profile(&b.representative);
                let (tsq, tns) = involution_det_profile(&mp.brute_force.representative);
                residual_notes.push(format!(
                    "{}: second class with {sq} square-det and {ns} nonsquare-det involutions \
                     (predicted class has {tsq} and {tns})",
                    b.label.family
                ));
            }
            None => unexplained.push(format!(
                "{} of order {} has no predicted counterpart",
                b.label,
                b.order()
            )),
        }
        brute_only.push(b.clone());
    }
    Ok(VerificationReport {
        q: g.q() as u64,
        matched,
        predicted_only,
        brute_only,
        residual_notes,
        unexplained,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MassFormulaReport {
    pub q: u64,
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Checks 1/|G| = 1 - sum_i (1/f_i)(1 - 1/d_i) and d_i f_i <= |G| for every
/// nontrivial p-regular class representative.
pub fn mass_formula_suite(g: &Pgl2, cap: u64) -> Result<MassFormulaReport> {
    let p = g.p() as usize;
    let mut report = MassFormulaReport { q: g.q() as u64, checked: 0, failures: Vec::new() };
    for class in brute_force_atlas(g, cap)? {
        let h = &class.representative;
        let n = h.order();
        if n == 1 || n % p == 0 {
            continue;
        }
        report.checked += 1;
        let data = maximal_cyclic_data(h)?;
        let one = Ratio::from_integer(1i64);
        let rhs = data.iter().fold(one, |acc, &(d, f)| {
            acc - Ratio::new(1, f as i64) * (one - Ratio::new(1, d as i64))
        });
        if rhs != Ratio::new(1, n as i64) {
            report.failures.push(format!("{}: 1/{n} != {rhs} from {data:?}", class.label));
        }
        for &(d, f) in &data {
            if d * f > n as u64 {
                report.failures.push(format!("{}: d*f = {d}*{f} exceeds {n}", class.label));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub q: u64,
    pub representatives: usize,
    pub pairs_checked: usize,
    pub violations: Vec<String>,
}

/// Embeds the p-irregular class representatives into PGL2(F_{q^2}) and
/// checks that distinct classes stay non-conjugate there.
pub fn descent_suite(g: &Pgl2, cap: u64) -> Result<DescentReport> {
    let f = g.field();
    let p = f.p() as usize;
    let big = Pgl2::new(f.p(), 2 * f.r())?;
    let emb = subfield_embedding(f, big.field())?;
    let classes: Vec<ClassDescriptor> = brute_force_atlas(g, cap)?
        .into_iter()
        .filter(|c| c.order() % p == 0)
        .collect();
    let lifted: Vec<Subgroup> = classes
        .iter()
        .map(|c| c.representative.embed_into(&big, &emb))
        .collect::<Result<_>>()?;
    let mut report = DescentReport {
        q: f.q() as u64,
        representatives: classes.len(),
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for i in 0..lifted.len() {
        for j in i + 1..lifted.len() {
            report.pairs_checked += 1;
            if let Some(u) = are_conjugate(&lifted[i], &lifted[j]) {
                report.violations.push(format!(
                    "{} and {} become conjugate over F_{} via {u}",
                    classes[i].label,
                    classes[j].label,
                    big.q()
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u32, r: u32) -> Pgl2 {
        Pgl2::new(p, r).unwrap()
    }

    fn labels(classes: &[ClassDescriptor]) -> Vec<String> {
        classes.iter().map(|c| c.label.family.to_string()).collect()
    }

    #[test]
    fn predicted_small_fields() {
        let p2 = predicted_atlas(&g(2, 1)).unwrap();
        assert_eq!(
            labels(&p2),
            ["Trivial", "Cyclic(3)", "PGL(1)", "SemiElementary(1,1,[1])"]
        );
        assert!(p2[2].label.names(&Family::Dihedral { n: 3 }));
        assert!(p2[3].label.names(&Family::Cyclic { n: 2 }));
        assert_eq!(predicted_atlas(&g(2, 2)).unwrap().len(), 9);
    }

    #[test]
    fn brute_force_small_fields() {
        assert_eq!(brute_force_atlas(&g(2, 1), DEFAULT_ORACLE_CAP).unwrap().len(), 4);
        assert_eq!(brute_force_atlas(&g(3, 1), DEFAULT_ORACLE_CAP).unwrap().len(), 11);
        assert_eq!(brute_force_atlas(&g(2, 2), DEFAULT_ORACLE_CAP).unwrap().len(), 9);
        assert!(matches!(
            brute_force_atlas(&g(11, 1), DEFAULT_ORACLE_CAP),
            Err(Error::OracleCapExceeded { .. })
        ));
    }

    #[test]
    fn class_sizes_sum_over_cyclic_subgroups() {
        // every element lies in exactly one cyclic subgroup as a generator,
        // so sum over cyclic classes of size * phi(order) = |G|
        let gr = g(3, 1);
        let atlas = brute_force_atlas(&gr, DEFAULT_ORACLE_CAP).unwrap();
        let total: u64 = atlas
            .iter()
            .filter(|c| c.label.family == Family::Trivial || c.label.all().any(|f| matches!(f, Family::Cyclic { .. })))
            .map(|c| {
                let n = c.order() as u64;
                let phi = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
                c.class_size * phi
            })
            .sum();
        assert_eq!(total, 24);
    }

    #[test]
    fn verify_small_fields() {
        let r2 = verify(&g(2, 1), DEFAULT_ORACLE_CAP).unwrap();
        assert!(r2.perfect() && r2.residual_notes.is_empty());
        let r3 = verify(&g(3, 1), DEFAULT_ORACLE_CAP).unwrap();
        assert!(r3.passed());
        assert_eq!(r3.matched.len(), 9);
        assert_eq!(r3.brute_only.len(), 2);
        assert!(r3.unexplained.is_empty());
    }

    #[test]
    fn mass_and_descent_small() {
        let m = mass_formula_suite(&g(3, 1), DEFAULT_ORACLE_CAP).unwrap();
        assert!(m.checked > 0 && m.failures.is_empty());
        let d = descent_suite(&g(2, 1), DEFAULT_ORACLE_CAP).unwrap();
        assert!(d.violations.is_empty());
    }
}
