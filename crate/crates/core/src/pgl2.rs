//! Projective 2x2 matrices over GF(p^r) and their action on the projective
//! line.
//!
//! A [`ProjMatrix`] is always stored in canonical form: the first nonzero
//! entry in the order (a, b, c, d) is 1. Two invertible matrices represent
//! the same element of PGL2 exactly when their canonical forms agree, so
//! derived `Eq`/`Ord`/`Hash` are the group's equality and the lexicographic
//! total order on entry encodings.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gf::{subfield_embedding, Field, FieldElement, SubfieldEmbedding};

/// Canonical representative of an element of PGL2(F_q), entries row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjMatrix([FieldElement; 4]);

impl ProjMatrix {
    pub const IDENTITY: ProjMatrix = ProjMatrix([
        FieldElement::ONE,
        FieldElement::ZERO,
        FieldElement::ZERO,
        FieldElement::ONE,
    ]);

    pub fn entries(&self) -> [FieldElement; 4] {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Entry encodings as `[[a, b], [c, d]]`.
    pub fn to_rows(&self) -> [[u32; 2]; 2] {
        let [a, b, c, d] = self.0.map(FieldElement::encoding);
        [[a, b], [c, d]]
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.to_rows();
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// A point of P^1(F_q). Finite points sort by encoding, infinity last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    Finite(FieldElement),
    Infinity,
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(z) => write!(f, "{z}"),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Image of the determinant in k^x / (k^x)^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DetClass {
    Square,
    Nonsquare,
}

/// Fixed points of a nontrivial element, over F_q and over F_{q^2}.
///
/// Points over F_{q^2} are encoded in the quadratic extension returned by
/// [`Pgl2::quadratic_extension`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoints {
    pub rational: Vec<ProjPoint>,
    pub quadratic: Vec<ProjPoint>,
}

/// The quadratic extension F_{q^2} together with the embedding of F_q.
#[derive(Debug)]
pub struct QuadraticExtension {
    pub field: Field,
    pub embedding: SubfieldEmbedding,
}

struct Inner {
    field: Field,
    quadratic: OnceLock<QuadraticExtension>,
}

/// The group PGL2(F_q). Cheap to clone; all clones share one field.
#[derive(Clone)]
pub struct Pgl2 {
    inner: Arc<Inner>,
}

impl fmt::Debug for Pgl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PGL2(F_{})", self.q())
    }
}

impl PartialEq for Pgl2 {
    fn eq(&self, other: &Self) -> bool {
        self.inner.field == other.inner.field
    }
}

impl Eq for Pgl2 {}

impl Pgl2 {
    pub fn new(p: u32, r: u32) -> Result<Pgl2> {
        Ok(Self::over(Field::new(p, r)?))
    }

    pub fn over(field: Field) -> Pgl2 {
        Pgl2 {
            inner: Arc::new(Inner {
                field,
                quadratic: OnceLock::new(),
            }),
        }
    }

    pub fn field(&self) -> &Field {
        &self.inner.field
    }

    pub fn p(&self) -> u32 {
        self.field().p()
    }

    pub fn q(&self) -> u32 {
        self.field().q()
    }

    /// |PGL2(F_q)| = q^3 - q.
    pub fn group_order(&self) -> u64 {
        let q = self.q() as u64;
        q * q * q - q
    }

    /// F_{q^2}, built on first use.
    pub fn quadratic_extension(&self) -> &QuadraticExtension {
        self.inner.quadratic.get_or_init(|| {
            let f = self.field();
            let field = Field::new(f.p(), 2 * f.r()).expect("quadratic extension within cap");
            let embedding = subfield_embedding(f, &field).expect("degree divides");
            QuadraticExtension { field, embedding }
        })
    }

    pub fn identity(&self) -> ProjMatrix {
        ProjMatrix::IDENTITY
    }

    /// Scales a raw invertible matrix so its first nonzero entry is 1.
    pub fn canonicalize(&self, raw: [[FieldElement; 2]; 2]) -> Result<ProjMatrix> {
        let f = self.field();
        let [[a, b], [c, d]] = raw;
        let det = f.sub(f.mul(a, d), f.mul(b, c));
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.scale_to_canonical([a, b, c, d]))
    }

    /// Like [`Pgl2::canonicalize`] but from integer encodings, with range
    /// checks.
    pub fn matrix(&self, rows: [[u64; 2]; 2]) -> Result<ProjMatrix> {
        let f = self.field();
        let [[a, b], [c, d]] = rows;
        self.canonicalize([[f.element(a)?, f.element(b)?], [f.element(c)?, f.element(d)?]])
    }

    /// Matrix from prime-field integers (negative values allowed).
    pub fn matrix_int(&self, rows: [[i64; 2]; 2]) -> Result<ProjMatrix> {
        let f = self.field();
        let [[a, b], [c, d]] = rows;
        self.canonicalize([
            [f.from_int(a), f.from_int(b)],
            [f.from_int(c), f.from_int(d)],
        ])
    }

    fn scale_to_canonical(&self, e: [FieldElement; 4]) -> ProjMatrix {
        let f = self.field();
        let lead = *e.iter().find(|x| !x.is_zero()).expect("nonsingular");
        if lead == FieldElement::ONE {
            return ProjMatrix(e);
        }
        let s = f.inv(lead).expect("nonzero");
        ProjMatrix(e.map(|x| f.mul(x, s)))
    }

    /// diag(x, 1).
    pub fn diag(&self, x: FieldElement) -> Result<ProjMatrix> {
        self.canonicalize([[x, FieldElement::ZERO], [FieldElement::ZERO, FieldElement::ONE]])
    }

    pub fn mul(&self, m1: &ProjMatrix, m2: &ProjMatrix) -> ProjMatrix {
        let f = self.field();
        let [a, b, c, d] = m1.0;
        let [e, g, h, k] = m2.0;
        let out = [
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        ];
        self.scale_to_canonical(out)
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self, m: &ProjMatrix) -> ProjMatrix {
        let f = self.field();
        let [a, b, c, d] = m.0;
        self.scale_to_canonical([d, f.neg(b), f.neg(c), a])
    }

    pub fn pow(&self, m: &ProjMatrix, mut e: u64) -> ProjMatrix {
        let mut result = ProjMatrix::IDENTITY;
        let mut base = *m;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// u m u^-1.
    pub fn conjugate(&self, u: &ProjMatrix, m: &ProjMatrix) -> ProjMatrix {
        self.mul(&self.mul(u, m), &self.inverse(u))
    }

    /// Fractional-linear action z -> (az + b) / (cz + d).
    pub fn apply(&self, m: &ProjMatrix, pt: ProjPoint) -> ProjPoint {
        let f = self.field();
        let [a, b, c, d] = m.0;
        let (num, den) = match pt {
            ProjPoint::Infinity => (a, c),
            ProjPoint::Finite(z) => (f.add(f.mul(a, z), b), f.add(f.mul(c, z), d)),
        };
        if den.is_zero() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(f.div(num, den).expect("nonzero"))
        }
    }

    /// All q + 1 points, finite ones by encoding, then infinity.
    pub fn points(&self) -> Vec<ProjPoint> {
        self.field()
            .elements()
            .map(ProjPoint::Finite)
            .chain(std::iter::once(ProjPoint::Infinity))
            .collect()
    }

    /// Trace of the canonical representative.
    pub fn trace(&self, m: &ProjMatrix) -> FieldElement {
        self.field().add(m.0[0], m.0[3])
    }

    /// Determinant of the canonical representative.
    pub fn det(&self, m: &ProjMatrix) -> FieldElement {
        let f = self.field();
        let [a, b, c, d] = m.0;
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    /// Tr^2 / det, a complete conjugacy invariant of non-identity elements
    /// up to the unipotent/semisimple distinction at 4.
    pub fn trace_ratio(&self, m: &ProjMatrix) -> FieldElement {
        let f = self.field();
        let t = self.trace(m);
        f.div(f.mul(t, t), self.det(m)).expect("invertible")
    }

    /// Least n >= 1 with m^n = I, by iterated multiplication.
    pub fn order(&self, m: &ProjMatrix) -> u64 {
        let cap = self.q() as u64 + 1;
        let mut x = *m;
        let mut n = 1;
        while !x.is_identity() {
            x = self.mul(&x, m);
            n += 1;
            debug_assert!(n <= cap, "element order exceeds q + 1");
        }
        n
    }

    /// Trace/determinant test for order 2, 3, 5 or p.
    ///
    /// Target p checks Tr^2 = 4 det; targets 2, 3 and 5 check Tr = 0,
    /// Tr^2 = det and Tr^4 - 3 Tr^2 det + det^2 = 0.
    pub fn order_criterion(&self, m: &ProjMatrix, target: u32) -> Result<bool> {
        if m.is_identity() {
            return Err(Error::IdentityInput("order criterion"));
        }
        let f = self.field();
        let t = self.trace(m);
        let d = self.det(m);
        let t2 = f.mul(t, t);
        if target == self.p() {
            return Ok(t2 == f.mul(f.from_int(4), d));
        }
        match target {
            2 => Ok(t.is_zero()),
            3 => Ok(t2 == d),
            5 => {
                let quartic = f.add(
                    f.sub(f.mul(t2, t2), f.mul(f.from_int(3), f.mul(t2, d))),
                    f.mul(d, d),
                );
                Ok(quartic.is_zero())
            }
            other => Err(Error::UnsupportedOrderTarget(other)),
        }
    }

    /// Solutions of c z^2 + (d - a) z - b = 0 on P^1(F_q) and P^1(F_{q^2}),
    /// each list in increasing encoding with infinity last.
    pub fn fixed_points(&self, m: &ProjMatrix) -> Result<FixedPoints> {
        if m.is_identity() {
            return Err(Error::IdentityInput("fixed point set"));
        }
        let ext = self.quadratic_extension();
        let big = &ext.field;
        let [a, b, c, d] = m.0.map(|x| ext.embedding.apply(x));
        let lin = big.sub(d, a);
        let cst = big.neg(b);
        let mut roots: Vec<ProjPoint> = Vec::with_capacity(2);
        if c.is_zero() {
            roots.push(ProjPoint::Infinity);
            if !lin.is_zero() {
                let z = big.div(b, lin).expect("nonzero");
                roots.push(ProjPoint::Finite(z));
            }
        } else if big.p() != 2 {
            // z = (a - d +- sqrt(disc)) / 2c; disc lies in F_q so it is a
            // square in F_{q^2}.
            let disc = big.add(big.mul(lin, lin), big.mul(big.from_int(4), big.mul(b, c)));
            let root = big.sqrt(disc).expect("elements of F_q are squares in F_{q^2}");
            let two_c = big.mul(big.from_int(2), c);
            let minus_lin = big.neg(lin);
            for s in [root, big.neg(root)] {
                let z = big.div(big.add(minus_lin, s), two_c).expect("nonzero");
                roots.push(ProjPoint::Finite(z));
            }
        } else {
            for z in big.elements() {
                let val = big.add(big.mul(big.add(big.mul(c, z), lin), z), cst);
                if val.is_zero() {
                    roots.push(ProjPoint::Finite(z));
                }
            }
        }
        roots.sort_unstable();
        roots.dedup();
        let rational = roots
            .iter()
            .filter_map(|pt| match pt {
                ProjPoint::Infinity => Some(ProjPoint::Infinity),
                ProjPoint::Finite(z) => ext.embedding.preimage(*z).map(ProjPoint::Finite),
            })
            .collect::<Vec<_>>();
        let mut rational = rational;
        rational.sort_unstable();
        Ok(FixedPoints {
            rational,
            quadratic: roots,
        })
    }

    pub fn det_class(&self, m: &ProjMatrix) -> DetClass {
        if self.field().is_square(self.det(m)).expect("nonzero det") {
            DetClass::Square
        } else {
            DetClass::Nonsquare
        }
    }

    /// Every element of PGL2(F_q) in canonical order.
    pub fn elements(&self) -> Vec<ProjMatrix> {
        let f = self.field();
        let q = f.q();
        let mut out = Vec::with_capacity(self.group_order() as usize);
        let one = FieldElement::ONE;
        let zero = FieldElement::ZERO;
        // (0, 0, ...) rows are singular, so the leading entry is a or b.
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let e = [one, FieldElement::from_encoding_unchecked(b), FieldElement::from_encoding_unchecked(c), FieldElement::from_encoding_unchecked(d)];
                    if !f.sub(f.mul(e[0], e[3]), f.mul(e[1], e[2])).is_zero() {
                        out.push(ProjMatrix(e));
                    }
                }
            }
        }
        for c in 1..q {
            for d in 0..q {
                out.push(ProjMatrix([
                    zero,
                    one,
                    FieldElement::from_encoding_unchecked(c),
                    FieldElement::from_encoding_unchecked(d),
                ]));
            }
        }
        out.sort_unstable();
        out
    }

    /// Maps a matrix of this group into PGL2 of an extension field.
    pub fn embed_into(
        &self,
        target: &Pgl2,
        embedding: &SubfieldEmbedding,
        m: &ProjMatrix,
    ) -> ProjMatrix {
        let e = m.0.map(|x| embedding.apply(x));
        target.scale_to_canonical(e)
    }

    /// Parses `[[a,b],[c,d]]` with integer-encoded entries.
    pub fn parse_matrix(&self, text: &str) -> Result<ProjMatrix> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("expected [[a,b],[c,d]], got {text:?}"));
        let inner = cleaned
            .strip_prefix("[[")
            .and_then(|s| s.strip_suffix("]]"))
            .ok_or_else(bad)?;
        let (top, bottom) = inner.split_once("],[").ok_or_else(bad)?;
        let row = |s: &str| -> Result<[u64; 2]> {
            let (x, y) = s.split_once(',').ok_or_else(bad)?;
            Ok([x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?])
        };
        self.matrix([row(top)?, row(bottom)?])
    }

    /// Parses an integer encoding or `inf`.
    pub fn parse_point(&self, text: &str) -> Result<ProjPoint> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") {
            return Ok(ProjPoint::Infinity);
        }
        let v: u64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("expected integer or inf, got {text:?}")))?;
        Ok(ProjPoint::Finite(self.field().element(v)?))
    }
}
