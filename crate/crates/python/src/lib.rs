//! Python bindings. Matrices cross the boundary as nested lists
//! `[[a, b], [c, d]]` of integer-encoded field elements.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pgl2_core::addsub::AdditiveSubgroup;
use pgl2_core::atlas::{self, ClassDescriptor, DEFAULT_ORACLE_CAP};
use pgl2_core::construct::{self, FamilyParams};
use pgl2_core::groups::{self, are_conjugate, recognize};
use pgl2_core::{Error, FieldElement, Pgl2 as CoreGroup, ProjMatrix, ProjPoint};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Rows = [[u64; 2]; 2];

// None marks the point at infinity
type Points = Vec<Option<u32>>;

fn rows(m: &ProjMatrix) -> Rows {
    m.to_rows().map(|r| r.map(u64::from))
}

/// GF(p^r) with its canonical modulus.
#[pyclass(frozen, module = "pgl2")]
struct Field {
    inner: pgl2_core::Field,
}

impl Field {
    fn el(&self, x: u64) -> PyResult<FieldElement> {
        self.inner.element(x).map_err(err)
    }
}

#[pymethods]
impl Field {
    #[new]
    fn new(p: u32, r: u32) -> PyResult<Self> {
        Ok(Field { inner: pgl2_core::Field::new(p, r).map_err(err)? })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn r(&self) -> u32 {
        self.inner.r()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    #[getter]
    fn primitive_element(&self) -> u32 {
        self.inner.primitive_element().encoding()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.inner.add(self.el(a)?, self.el(b)?).encoding())
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.inner.sub(self.el(a)?, self.el(b)?).encoding())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.inner.mul(self.el(a)?, self.el(b)?).encoding())
    }

    fn inv(&self, a: u64) -> PyResult<u32> {
        Ok(self.inner.inv(self.el(a)?).map_err(err)?.encoding())
    }

    fn pow(&self, a: u64, e: u64) -> PyResult<u32> {
        Ok(self.inner.pow(self.el(a)?, e).encoding())
    }

    fn frobenius(&self, a: u64) -> PyResult<u32> {
        Ok(self.inner.frobenius(self.el(a)?).encoding())
    }

    fn roots_of_unity(&self, n: u64) -> PyResult<Vec<u32>> {
        let roots = self.inner.roots_of_unity(n).map_err(err)?;
        Ok(roots.into_iter().map(|x| x.encoding()).collect())
    }

    fn is_square(&self, a: u64) -> PyResult<bool> {
        self.inner.is_square(self.el(a)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Field({}, {})", self.inner.p(), self.inner.r())
    }
}

/// A finite subgroup of PGL2(F_q).
#[pyclass(frozen, module = "pgl2")]
struct Subgroup {
    inner: groups::Subgroup,
}

#[pymethods]
impl Subgroup {
    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn generators(&self) -> Vec<Rows> {
        self.inner.generators().iter().map(rows).collect()
    }

    #[getter]
    fn elements(&self) -> Vec<Rows> {
        self.inner.elements().iter().map(rows).collect()
    }

    /// Element order -> count.
    fn order_profile(&self) -> Vec<(u64, usize)> {
        self.inner.order_profile().into_iter().collect()
    }

    /// (label, aliases) as display strings.
    fn label(&self) -> PyResult<(String, Vec<String>)> {
        let l = recognize(&self.inner).map_err(err)?;
        Ok((l.family.to_string(), l.aliases.iter().map(|a| a.to_string()).collect()))
    }

    /// A witness u with u G u^-1 = other, or None.
    fn conjugate_to(&self, other: &Subgroup) -> Option<Rows> {
        are_conjugate(&self.inner, &other.inner).map(|u| rows(&u))
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Subgroup(order={}, q={})", self.inner.order(), self.inner.ambient().q())
    }
}

/// PGL2(F_q).
#[pyclass(frozen, module = "pgl2")]
struct Pgl2 {
    inner: CoreGroup,
}

impl Pgl2 {
    fn m(&self, r: Rows) -> PyResult<ProjMatrix> {
        self.inner.matrix(r).map_err(err)
    }
}

#[pymethods]
impl Pgl2 {
    #[new]
    fn new(p: u32, r: u32) -> PyResult<Self> {
        Ok(Pgl2 { inner: CoreGroup::new(p, r).map_err(err)? })
    }

    /// Builds the group from `"p^r"` notation.
    #[staticmethod]
    fn parse(q: &str) -> PyResult<Self> {
        let (p, r) = pgl2_core::Field::parse_order(q).map_err(err)?;
        Self::new(p, r)
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn field(&self) -> Field {
        Field { inner: self.inner.field().clone() }
    }

    fn group_order(&self) -> u64 {
        self.inner.group_order()
    }

    fn canonicalize(&self, m: Rows) -> PyResult<Rows> {
        Ok(rows(&self.m(m)?))
    }

    fn mul(&self, a: Rows, b: Rows) -> PyResult<Rows> {
        Ok(rows(&self.inner.mul(&self.m(a)?, &self.m(b)?)))
    }

    fn inverse(&self, a: Rows) -> PyResult<Rows> {
        Ok(rows(&self.inner.inverse(&self.m(a)?)))
    }

    fn order(&self, m: Rows) -> PyResult<u64> {
        Ok(self.inner.order(&self.m(m)?))
    }

    fn order_criterion(&self, m: Rows, target: u32) -> PyResult<bool> {
        self.inner.order_criterion(&self.m(m)?, target).map_err(err)
    }

    /// "square" or "nonsquare".
    fn det_class(&self, m: Rows) -> PyResult<&'static str> {
        Ok(match self.inner.det_class(&self.m(m)?) {
            pgl2_core::DetClass::Square => "square",
            pgl2_core::DetClass::Nonsquare => "nonsquare",
        })
    }

    /// Fixed points over F_q and over F_{q^2}.
    fn fixed_points(&self, m: Rows) -> PyResult<(Points, Points)> {
        let fp = self.inner.fixed_points(&self.m(m)?).map_err(err)?;
        let conv = |pts: Vec<ProjPoint>| {
            pts.into_iter()
                .map(|pt| match pt {
                    ProjPoint::Finite(z) => Some(z.encoding()),
                    ProjPoint::Infinity => None,
                })
                .collect()
        };
        Ok((conv(fp.rational), conv(fp.quadratic)))
    }

    fn closure(&self, gens: Vec<Rows>) -> PyResult<Subgroup> {
        let gens: Vec<ProjMatrix> = gens.into_iter().map(|g| self.m(g)).collect::<PyResult<_>>()?;
        let inner = groups::closure(&self.inner, &gens, None).map_err(err)?;
        Ok(Subgroup { inner })
    }

    /// Builds a subgroup of the named family.
    #[pyo3(signature = (family, n=None, gamma=None, tau=None, s=None))]
    fn construct(
        &self,
        family: &str,
        n: Option<u64>,
        gamma: Option<Vec<u64>>,
        tau: Option<u64>,
        s: Option<u32>,
    ) -> PyResult<Subgroup> {
        let f = self.inner.field();
        let need = |v: Option<u64>, name: &str| {
            v.ok_or_else(|| PyValueError::new_err(format!("{family} needs {name}")))
        };
        let need_s = || s.ok_or_else(|| PyValueError::new_err(format!("{family} needs s")));
        let params = match family {
            "trivial" => FamilyParams::Trivial,
            "cyclic" => FamilyParams::Cyclic { n: need(n, "n")? },
            "dihedral" => FamilyParams::Dihedral {
                n: need(n, "n")?,
                tau: tau.map(|t| f.element(t)).transpose().map_err(err)?,
            },
            "semi-elementary" => {
                let basis: Vec<FieldElement> = gamma
                    .ok_or_else(|| PyValueError::new_err("semi-elementary needs gamma"))?
                    .into_iter()
                    .map(|x| f.element(x))
                    .collect::<Result<_, _>>()
                    .map_err(err)?;
                FamilyParams::SemiElementary {
                    gamma: pgl2_core::addsub::span(f, &basis),
                    n: n.unwrap_or(1),
                }
            }
            "borel" => FamilyParams::Borel { s: need_s()? },
            "tetrahedral" => FamilyParams::Tetrahedral,
            "octahedral" => FamilyParams::Octahedral,
            "icosahedral" => FamilyParams::Icosahedral,
            "psl" => FamilyParams::Psl { s: need_s()? },
            "pgl" => FamilyParams::Pgl { s: need_s()? },
            other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
        };
        let inner = construct::build(&self.inner, &params).map_err(err)?;
        Ok(Subgroup { inner })
    }

    /// Predicted conjugacy classes of subgroups.
    fn predicted_atlas<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let classes = atlas::predicted_atlas(&self.inner).map_err(err)?;
        classes.iter().map(|c| class_dict(py, c)).collect()
    }

    /// Conjugacy classes found by exhaustive enumeration.
    #[pyo3(signature = (cap=DEFAULT_ORACLE_CAP))]
    fn brute_force_atlas<'py>(&self, py: Python<'py>, cap: u64) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let classes = atlas::brute_force_atlas(&self.inner, cap).map_err(err)?;
        classes.iter().map(|c| class_dict(py, c)).collect()
    }

    /// Prediction against enumeration.
    #[pyo3(signature = (cap=DEFAULT_ORACLE_CAP))]
    fn verify<'py>(&self, py: Python<'py>, cap: u64) -> PyResult<Bound<'py, PyDict>> {
        let report = atlas::verify(&self.inner, cap).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("q", report.q)?;
        d.set_item("matched", report.matched.len())?;
        let labels = |cs: &[ClassDescriptor]| -> Vec<String> {
            cs.iter().map(|c| c.label.family.to_string()).collect()
        };
        d.set_item("predicted_only", labels(&report.predicted_only))?;
        d.set_item("brute_only", labels(&report.brute_only))?;
        d.set_item("residual_notes", report.residual_notes.clone())?;
        d.set_item("unexplained", report.unexplained.clone())?;
        d.set_item("passed", report.passed())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Pgl2(q={})", self.inner.q())
    }
}

fn class_dict<'py>(py: Python<'py>, c: &ClassDescriptor) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("label", c.label.family.to_string())?;
    let aliases: Vec<String> = c.label.aliases.iter().map(|a| a.to_string()).collect();
    d.set_item("aliases", aliases)?;
    d.set_item("order", c.order())?;
    d.set_item("class_size", c.class_size)?;
    let gens: Vec<Rows> = c.representative.generators().iter().map(rows).collect();
    d.set_item("generators", gens)?;
    Ok(d)
}

/// Homothety-class representatives of rank-m additive subgroups for the
/// semi-elementary family with cyclic part of order n.
#[pyfunction]
fn semi_elementary_classes(p: u32, r: u32, m: usize, n: u64) -> PyResult<Vec<Vec<u32>>> {
    let f = pgl2_core::Field::new(p, r).map_err(err)?;
    let classes = pgl2_core::addsub::semi_elementary_classes(&f, m, n).map_err(err)?;
    Ok(classes
        .iter()
        .map(|g: &AdditiveSubgroup| g.basis().iter().map(|x| x.encoding()).collect())
        .collect())
}

/// Runs the command line in-process; returns (exit status, stdout, stderr).
#[pyfunction]
fn cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let argv = std::iter::once("pgl2".to_string()).chain(args);
    let code = pgl2_core::cli::run(argv, &mut out, &mut errs);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&errs).into_owned(),
    )
}

#[pymodule]
fn pgl2(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Pgl2>()?;
    m.add_class::<Subgroup>()?;
    m.add_function(wrap_pyfunction!(semi_elementary_classes, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
