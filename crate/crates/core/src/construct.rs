//! Explicit generators for every family of finite subgroups.
//!
//! Where the textbook matrices are rational over F_q they are used as is;
//! otherwise the missing element is found by a deterministic scan of
//! PGL2(F_q) in canonical order. Existence is guaranteed by the
//! classification, so a failed scan is an internal error.

use crate::addsub::{span, stabilizer_field, AdditiveSubgroup};
use crate::error::{Error, Result};
use crate::gf::{gcd, subfield_embedding, Field, FieldElement};
use crate::groups::{closure, Subgroup};
use crate::pgl2::{Pgl2, ProjMatrix};

/// A family together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyParams {
    Trivial,
    Cyclic { n: u64 },
    Dihedral { n: u64, tau: Option<FieldElement> },
    SemiElementary { gamma: AdditiveSubgroup, n: u64 },
    Borel { s: u32 },
    Tetrahedral,
    Octahedral,
    Icosahedral,
    Psl { s: u32 },
    Pgl { s: u32 },
}

/// Dispatches to the matching constructor.
pub fn build(g: &Pgl2, params: &FamilyParams) -> Result<Subgroup> {
    match params {
        FamilyParams::Trivial => closure(g, &[], None),
        FamilyParams::Cyclic { n } => cyclic(g, *n),
        FamilyParams::Dihedral { n, tau } => dihedral(g, *n, *tau),
        FamilyParams::SemiElementary { gamma, n } => semi_elementary(g, gamma, *n),
        FamilyParams::Borel { s } => borel(g, *s),
        FamilyParams::Tetrahedral => tetrahedral(g),
        FamilyParams::Octahedral => octahedral(g),
        FamilyParams::Icosahedral => icosahedral(g),
        FamilyParams::Psl { s } => psl2_subfield(g, *s),
        FamilyParams::Pgl { s } => pgl2_subfield(g, *s),
    }
}

fn raw(g: &Pgl2, rows: [[FieldElement; 2]; 2]) -> ProjMatrix {
    g.canonicalize(rows).expect("constructor matrices are invertible")
}

fn checked(group: Subgroup, expected: u64, what: &str) -> Result<Subgroup> {
    if group.order() as u64 == expected {
        Ok(group)
    } else {
        Err(Error::Internal(format!(
            "{what} closed to order {} instead of {expected}",
            group.order()
        )))
    }
}

/// Generator of a cyclic subgroup of order n, or `NoCyclic`.
pub fn cyclic_generator(g: &Pgl2, n: u64) -> Result<ProjMatrix> {
    let f = g.field();
    let q = f.q() as u64;
    let p = f.p() as u64;
    let (one, zero) = (FieldElement::ONE, FieldElement::ZERO);
    if n == 0 {
        return Err(Error::NoCyclic { n, q });
    }
    if (q - 1).is_multiple_of(n) {
        return g.diag(f.root_of_unity(n)?);
    }
    if n == p {
        return Ok(raw(g, [[one, one], [zero, one]]));
    }
    if (q + 1).is_multiple_of(n) {
        // eps of order n lives in F_{q^2}; eps + eps^-1 = eps + eps^q is in F_q
        let ext = g.quadratic_extension();
        let big = &ext.field;
        let eps = big.root_of_unity(n)?;
        let lambda_big = big.add(eps, big.inv(eps)?);
        let lambda = ext
            .embedding
            .preimage(lambda_big)
            .ok_or_else(|| Error::Internal("eps + eps^q not rational".into()))?;
        return Ok(raw(g, [[f.add(lambda, one), f.neg(one)], [one, one]]));
    }
    Err(Error::NoCyclic { n, q })
}

pub fn cyclic(g: &Pgl2, n: u64) -> Result<Subgroup> {
    let gen = cyclic_generator(g, n)?;
    checked(closure(g, &[gen], None)?, n, "cyclic group")
}

/// Cyclic part plus an inverting involution: antidiag(tau, 1) when the
/// cyclic part is diagonal, [[0,1],[1,0]] when it is non-split.
pub fn dihedral(g: &Pgl2, n: u64, tau: Option<FieldElement>) -> Result<Subgroup> {
    let f = g.field();
    let q = f.q() as u64;
    let p = f.p() as u64;
    if n == 0 || n.is_multiple_of(p) {
        return Err(Error::EmptyFamily(format!(
            "dihedral order 2*{n} with p = {p} dividing n is semi-elementary"
        )));
    }
    let tau = tau.unwrap_or(FieldElement::ONE);
    if tau.is_zero() {
        return Err(Error::ZeroInverse);
    }
    let (one, zero) = (FieldElement::ONE, FieldElement::ZERO);
    let mut gens = Vec::new();
    let involution = if (q - 1).is_multiple_of(n) {
        if n > 1 {
            gens.push(cyclic_generator(g, n)?);
        }
        raw(g, [[zero, tau], [one, zero]])
    } else {
        gens.push(cyclic_generator(g, n)?);
        raw(g, [[zero, one], [one, zero]])
    };
    gens.push(involution);
    checked(closure(g, &gens, None)?, 2 * n, "dihedral group")
}

/// [[1, gamma], [0, 1]] extended by diag(mu_n, 1).
pub fn semi_elementary(g: &Pgl2, gamma: &AdditiveSubgroup, n: u64) -> Result<Subgroup> {
    let f = g.field();
    let p = f.p() as u64;
    if n == 0 || n.is_multiple_of(p) {
        return Err(Error::EmptyFamily(format!("n = {n} must be prime to p = {p}")));
    }
    let stab = stabilizer_field(f, gamma)?;
    if (p.pow(stab.degree) - 1) % n != 0 {
        return Err(Error::NotClosed { n });
    }
    let (one, zero) = (FieldElement::ONE, FieldElement::ZERO);
    let mut gens: Vec<ProjMatrix> = gamma
        .basis()
        .iter()
        .map(|&b| raw(g, [[one, b], [zero, one]]))
        .collect();
    if n > 1 {
        gens.push(g.diag(f.root_of_unity(n)?)?);
    }
    checked(
        closure(g, &gens, None)?,
        gamma.order(f) * n,
        "semi-elementary group",
    )
}

fn require_divisor(f: &Field, s: u32) -> Result<()> {
    if s == 0 || !f.r().is_multiple_of(s) {
        Err(Error::EmptyFamily(format!("s = {s} does not divide r = {}", f.r())))
    } else {
        Ok(())
    }
}

/// Upper-triangular group over the subfield F_{p^s}.
pub fn borel(g: &Pgl2, s: u32) -> Result<Subgroup> {
    let f = g.field();
    require_divisor(f, s)?;
    let small = Field::new(f.p(), s)?;
    let emb = subfield_embedding(&small, f)?;
    let gamma = span(f, emb.image());
    semi_elementary(g, &gamma, (f.p() as u64).pow(s) - 1)
}

/// Generators of the Klein group normalized by the tetrahedral group.
///
/// With sqrt(-1) rational this is {I, diag(-1,1), antidiag(1,1),
/// antidiag(-1,1)}. Otherwise diag(-1,1) has non-square determinant and
/// cannot lie in A4, so the Klein group <[[0,-1],[1,0]], [[a,b],[b,-a]]>
/// with a^2 + b^2 = -1 is used instead; both generators have square
/// determinant.
fn tetrahedral_klein(g: &Pgl2) -> Vec<ProjMatrix> {
    let f = g.field();
    let (one, zero) = (FieldElement::ONE, FieldElement::ZERO);
    let m1 = f.neg(one);
    if f.sqrt(m1).is_some() {
        return vec![
            raw(g, [[m1, zero], [zero, one]]),
            raw(g, [[zero, one], [one, zero]]),
        ];
    }
    let (a, b) = f
        .elements()
        .find_map(|a| {
            let rest = f.sub(m1, f.mul(a, a));
            f.sqrt(rest).map(|b| (a, b))
        })
        .expect("every element of a finite field is a sum of two squares");
    vec![
        raw(g, [[zero, m1], [one, zero]]),
        raw(g, [[a, b], [b, f.neg(a)]]),
    ]
}

/// First element of PGL2(F_q), in canonical order, passing `pred`.
fn scan(g: &Pgl2, what: &str, pred: impl Fn(&ProjMatrix) -> bool) -> Result<ProjMatrix> {
    g.elements()
        .into_iter()
        .find(|m| pred(m))
        .ok_or_else(|| Error::Internal(format!("bounded search for {what} found nothing")))
}

pub fn tetrahedral(g: &Pgl2) -> Result<Subgroup> {
    let f = g.field();
    let q = f.q() as u64;
    if f.p() == 2 {
        if f.r() % 2 == 1 {
            return Err(Error::NoSuchSubgroup { family: "tetrahedral", q });
        }
        return borel(g, 2);
    }
    let mut gens = tetrahedral_klein(g);
    let klein = closure(g, &gens, None)?;
    let one = FieldElement::ONE;
    let third = match f.sqrt(f.neg(one)) {
        Some(i) => raw(g, [[one, i], [one, f.neg(i)]]),
        None => scan(g, "an order-3 element normalizing the Klein group", |c| {
            !c.is_identity()
                && g.order_criterion(c, 3).unwrap_or(false)
                && klein.conjugates_into(c, &klein)
        })?,
    };
    gens.push(third);
    checked(closure(g, &gens, None)?, 12, "tetrahedral group")
}

pub fn octahedral(g: &Pgl2) -> Result<Subgroup> {
    let f = g.field();
    if f.p() == 2 {
        return Err(Error::NoSuchSubgroup { family: "octahedral", q: f.q() as u64 });
    }
    let t = tetrahedral(g)?;
    let klein = closure(g, &tetrahedral_klein(g), None)?;
    let extra = match f.sqrt(f.neg(FieldElement::ONE)) {
        Some(i) => g.diag(i)?,
        None => scan(g, "an order-4 element normalizing the tetrahedral group", |m| {
            g.order(m) == 4 && klein.contains(&g.mul(m, m)) && t.conjugates_into(m, &t)
        })?,
    };
    let mut gens = t.generators().to_vec();
    gens.push(extra);
    checked(closure(g, &gens, None)?, 24, "octahedral group")
}

/// A5 with generators [s, t] satisfying s^5 = t^2 = (st)^3 = I.
pub fn icosahedral(g: &Pgl2) -> Result<Subgroup> {
    let f = g.field();
    let q = f.q() as u64;
    if ![0, 1, 4].contains(&(q % 5)) {
        return Err(Error::NoSuchSubgroup { family: "icosahedral", q });
    }
    let (one, zero) = (FieldElement::ONE, FieldElement::ZERO);
    let m1 = f.neg(one);
    let presents = |s: &ProjMatrix, t: &ProjMatrix| {
        !t.is_identity()
            && g.pow(s, 5).is_identity()
            && g.mul(t, t).is_identity()
            && g.pow(&g.mul(s, t), 3).is_identity()
    };
    let (s, t) = if f.p() == 5 {
        (raw(g, [[one, one], [zero, one]]), raw(g, [[zero, m1], [one, zero]]))
    } else {
        let textbook = if (q - 1).is_multiple_of(5) {
            // smallest primitive fifth root of unity
            let z = f.roots_of_unity(5)?[1];
            let corner = f.sub(f.sub(one, z), f.inv(z)?);
            Some((g.diag(z)?, raw(g, [[one, corner], [one, m1]])))
        } else {
            None
        };
        let s = match textbook {
            Some((s, _)) => s,
            None => cyclic_generator(g, 5)?,
        };
        let textbook = textbook.map(|(_, t)| t);
        let t = match textbook.filter(|t| presents(&s, t)) {
            Some(t) => t,
            // any nontrivial quotient of the presentation is A5 itself
            None => scan(g, "an involution completing the A5 presentation", |t| {
                g.trace(t).is_zero() && presents(&s, t)
            })?,
        };
        (s, t)
    };
    if !presents(&s, &t) {
        return Err(Error::Internal("icosahedral generators fail the presentation".into()));
    }
    checked(closure(g, &[s, t], None)?, 60, "icosahedral group")
}

/// Image of PGL2(F_{p^s}).
pub fn pgl2_subfield(g: &Pgl2, s: u32) -> Result<Subgroup> {
    let f = g.field();
    require_divisor(f, s)?;
    let small_g = Pgl2::new(f.p(), s)?;
    let small = small_g.field();
    let emb = subfield_embedding(small, f)?;
    let (one, zero) = (FieldElement::ONE, FieldElement::ZERO);
    let gens: Vec<ProjMatrix> = [
        small_g.diag(small.primitive_element())?,
        raw(&small_g, [[one, one], [zero, one]]),
        raw(&small_g, [[zero, one], [one, zero]]),
    ]
    .iter()
    .map(|m| small_g.embed_into(g, &emb, m))
    .collect();
    let ps = small.q() as u64;
    checked(closure(g, &gens, None)?, ps * (ps * ps - 1), "PGL2 of a subfield")
}

/// Image of PSL2(F_{p^s}), generated by elementary transvections.
pub fn psl2_subfield(g: &Pgl2, s: u32) -> Result<Subgroup> {
    let f = g.field();
    require_divisor(f, s)?;
    let small_g = Pgl2::new(f.p(), s)?;
    let small = small_g.field();
    let emb = subfield_embedding(small, f)?;
    let (one, zero) = (FieldElement::ONE, FieldElement::ZERO);
    let prim = small.primitive_element();
    let mut gens = Vec::new();
    for k in 0..s {
        let b = small.pow(prim, k as u64);
        gens.push(raw(&small_g, [[one, b], [zero, one]]));
        gens.push(raw(&small_g, [[one, zero], [b, one]]));
    }
    let gens: Vec<ProjMatrix> = gens.iter().map(|m| small_g.embed_into(g, &emb, m)).collect();
    let ps = small.q() as u64;
    let expected = ps * (ps * ps - 1) / gcd(2, ps - 1);
    checked(closure(g, &gens, None)?, expected, "PSL2 of a subfield")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{are_conjugate, order_profile, recognize, Family};
    use crate::pgl2::ProjPoint;

    fn g(p: u32, r: u32) -> Pgl2 {
        Pgl2::new(p, r).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        let g5 = g(5, 1);
        assert_eq!(cyclic(&g5, 4).unwrap().generators(), &[g5.matrix([[2, 0], [0, 1]]).unwrap()]);
        let g3 = g(3, 1);
        assert_eq!(cyclic(&g3, 4).unwrap().generators(), &[g3.matrix([[1, 2], [1, 1]]).unwrap()]);
        let g4 = g(2, 2);
        assert_eq!(cyclic(&g4, 2).unwrap().generators(), &[g4.matrix([[1, 1], [0, 1]]).unwrap()]);
        assert_eq!(cyclic(&g5, 7).unwrap_err(), Error::NoCyclic { n: 7, q: 5 });
        assert_eq!(cyclic(&g5, 1).unwrap().order(), 1);
    }

    #[test]
    fn dihedral_examples() {
        let g5 = g(5, 1);
        let k = dihedral(&g5, 2, None).unwrap();
        assert_eq!(order_profile(&k), vec![(1, 1), (2, 3)]);
        let g3 = g(3, 1);
        let d4 = dihedral(&g3, 4, None).unwrap();
        assert_eq!(recognize(&d4).unwrap().family, Family::Dihedral { n: 4 });
        let g4 = g(2, 2);
        let d3 = dihedral(&g4, 3, None).unwrap();
        assert_eq!(d3.order(), 6);
        assert!(recognize(&d3).unwrap().names(&Family::Pgl { s: 1 }));
        assert!(dihedral(&g3, 3, None).is_err());
        assert_eq!(dihedral(&g5, 1, None).unwrap().order(), 2);
    }

    #[test]
    fn semi_elementary_examples() {
        let g4 = g(2, 2);
        let f4 = g4.field();
        let b = semi_elementary(&g4, &crate::addsub::full_field(f4), 3).unwrap();
        assert_eq!(b.order(), 12);
        let g9 = g(3, 2);
        let se = semi_elementary(&g9, &span(g9.field(), &[FieldElement::ONE]), 2).unwrap();
        assert_eq!(se.order(), 6);
        assert!(recognize(&se).unwrap().names(&Family::Dihedral { n: 3 }));
        let g8 = g(2, 3);
        let f8 = g8.field();
        let gamma = span(f8, &[FieldElement::ONE, f8.primitive_element()]);
        let klein = semi_elementary(&g8, &gamma, 1).unwrap();
        assert_eq!(order_profile(&klein), vec![(1, 1), (2, 3)]);
        // F_Gamma = F_2 here, so mu_7 does not act
        assert_eq!(semi_elementary(&g8, &gamma, 7).unwrap_err(), Error::NotClosed { n: 7 });
    }

    #[test]
    fn semi_elementary_fixes_only_infinity() {
        let g9 = g(3, 2);
        let b = borel(&g9, 2).unwrap();
        for m in b.elements().iter().filter(|m| g9.order(m) == 3) {
            assert_eq!(g9.fixed_points(m).unwrap().quadratic, vec![ProjPoint::Infinity]);
        }
    }

    #[test]
    fn borel_orders() {
        assert_eq!(borel(&g(2, 2), 2).unwrap().order(), 12);
        assert_eq!(borel(&g(3, 2), 1).unwrap().order(), 6);
        assert_eq!(borel(&g(2, 3), 3).unwrap().order(), 56);
        assert!(borel(&g(2, 3), 2).is_err());
    }

    #[test]
    fn exceptional_examples() {
        let g5 = g(5, 1);
        let t = tetrahedral(&g5).unwrap();
        assert!(t.generators().contains(&g5.matrix([[1, 2], [1, 3]]).unwrap()));
        assert_eq!(order_profile(&t), vec![(1, 1), (2, 3), (3, 8)]);
        assert!(recognize(&tetrahedral(&g(3, 1)).unwrap()).unwrap().names(&Family::Psl { s: 1 }));
        assert!(tetrahedral(&g(2, 3)).is_err());
        assert_eq!(octahedral(&g5).unwrap().order(), 24);
        assert_eq!(octahedral(&g(3, 1)).unwrap().order(), 24);
        assert!(octahedral(&g(2, 2)).is_err());
        let g11 = g(11, 1);
        let i = icosahedral(&g11).unwrap();
        assert_eq!(
            i.generators(),
            &[g11.matrix([[3, 0], [0, 1]]).unwrap(), g11.matrix([[1, 5], [1, 10]]).unwrap()]
        );
        assert_eq!(icosahedral(&g(3, 2)).unwrap().order(), 60);
        assert!(icosahedral(&g(7, 1)).is_err());
    }

    #[test]
    fn subfield_groups() {
        assert_eq!(pgl2_subfield(&g(2, 2), 1).unwrap().order(), 6);
        assert_eq!(psl2_subfield(&g(3, 2), 1).unwrap().order(), 12);
        assert_eq!(pgl2_subfield(&g(3, 2), 2).unwrap().order(), 720);
        assert!(psl2_subfield(&g(3, 2), 3).is_err());
    }

    #[test]
    fn split_and_nonsplit_cyclics_agree() {
        // [[lambda+1, -1], [1, 1]] also works when n | q-1, n >= 3
        for (p, r, n) in [(7, 1, 3), (13, 1, 4), (11, 1, 5), (2, 4, 5)] {
            let gr = g(p, r);
            let f = gr.field();
            let split = cyclic(&gr, n).unwrap();
            let z = f.root_of_unity(n).unwrap();
            let lambda = f.add(z, f.inv(z).unwrap());
            let one = FieldElement::ONE;
            let alt = raw(&gr, [[f.add(lambda, one), f.neg(one)], [one, one]]);
            let alt = closure(&gr, &[alt], None).unwrap();
            assert_eq!(alt.order() as u64, n);
            assert!(are_conjugate(&split, &alt).is_some());
        }
    }
}
