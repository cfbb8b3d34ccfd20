//! Runtime values of the expression language.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::json;

use crate::algebra::rational::to_canonical;
use crate::algebra::tuple::sort_sign;
use crate::algebra::{MultiIndex, PiecewisePoly, Rational, TensorDensity};
use crate::derham::Form;
use crate::dual::{Density, DualForm};
use crate::formal::{DiffOp, FormalFunction, Jet, PointDistribution, Space};
use crate::morphisms::Morphism;
use crate::{Error, Result};

/// One summand `w · Π_i p_i(x_i) · (y*)^L` of a density expression.
#[derive(Clone, Debug, PartialEq)]
pub struct PreTerm {
    pub weight: Rational,
    /// Axis (0-based) to its one-variable factor.
    pub factors: BTreeMap<usize, PiecewisePoly>,
    pub l: MultiIndex,
}

/// A density expression whose axes are checked only by `density(...)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pre {
    pub space: Space,
    pub terms: Vec<PreTerm>,
}

impl Pre {
    pub fn scalar(space: Space, c: Rational) -> Pre {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![PreTerm { weight: c, factors: BTreeMap::new(), l: MultiIndex::zero(space.k) }]
        };
        Pre { space, terms }
    }

    pub fn factor(space: Space, axis: usize, p: PiecewisePoly) -> Pre {
        let mut factors = BTreeMap::new();
        factors.insert(axis, p);
        Pre { space, terms: vec![PreTerm { weight: Rational::one(), factors, l: MultiIndex::zero(space.k) }] }
    }

    pub fn ystar(space: Space, j: usize) -> Pre {
        Pre {
            space,
            terms: vec![PreTerm { weight: Rational::one(), factors: BTreeMap::new(), l: MultiIndex::unit(space.k, j) }],
        }
    }

    pub fn add(&self, other: &Pre) -> Result<Pre> {
        self.space.check_compatible(&other.space)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Pre { space: self.space.meet(&other.space), terms })
    }

    pub fn scale(&self, c: &Rational) -> Pre {
        if c.is_zero() {
            return Pre { space: self.space, terms: Vec::new() };
        }
        let terms = self
            .terms
            .iter()
            .map(|t| PreTerm { weight: &t.weight * c, ..t.clone() })
            .collect();
        Pre { space: self.space, terms }
    }

    pub fn mul(&self, other: &Pre) -> Result<Pre> {
        self.space.check_compatible(&other.space)?;
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = a.factors.clone();
                for (axis, p) in &b.factors {
                    let merged = match factors.remove(axis) {
                        Some(q) => q.mul(p),
                        None => p.clone(),
                    };
                    factors.insert(*axis, merged);
                }
                terms.push(PreTerm { weight: &a.weight * &b.weight, factors, l: a.l.add(&b.l) });
            }
        }
        Ok(Pre { space: self.space.meet(&other.space), terms })
    }

    /// The density `Σ (w · ⊗_i p_i) (y*)^L`; every term needs a factor on
    /// every axis.
    pub fn density(&self) -> Result<Density> {
        let n = self.space.n;
        let mut out = Density::zero(self.space);
        for t in &self.terms {
            if t.factors.len() != n {
                let missing: Vec<String> = (0..n)
                    .filter(|i| !t.factors.contains_key(i))
                    .map(|i| format!("x{}", i + 1))
                    .collect();
                return Err(Error::NotCompactlySupported(format!(
                    "a term has no compactly supported factor along {}",
                    missing.join(", ")
                )));
            }
            let tau = TensorDensity::product(t.weight.clone(), t.factors.values().cloned().collect());
            out = out.add(&Density::term(self.space, tau, t.l.clone())?)?;
        }
        Ok(out)
    }

    /// The single one-axis profile `w · p`, as `cs_homotopy` expects.
    pub fn profile(&self) -> Result<(usize, PiecewisePoly)> {
        match self.terms.as_slice() {
            [t] if t.factors.len() == 1 && t.l.is_zero() => {
                let (axis, p) = t.factors.iter().next().expect("one factor");
                Ok((*axis, p.scale(&t.weight)))
            }
            _ => Err(Error::InvalidArgument("a profile must be a single one-axis bump".into())),
        }
    }
}

impl fmt::Display for Pre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut s = to_canonical(&t.weight);
                for (axis, p) in &t.factors {
                    s.push('*');
                    s.push_str(&p.display_with(&format!("x{}", axis + 1)));
                }
                for (j, &e) in t.l.exponents().iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*ystar{}", j + 1)),
                        _ => s.push_str(&format!("*ystar{}^{e}", j + 1)),
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A wedge of star atoms in the order written, by 1-based joint index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub space: Space,
    pub indices: Vec<usize>,
}

impl Star {
    /// `η · dz*_{indices}` after sorting the indices.
    pub fn attach(&self, eta: &Density) -> Result<DualForm> {
        eta.space().check_compatible(&self.space)?;
        let nv = self.space.nvars();
        match sort_sign(&self.indices) {
            Some((sign, tuple)) => DualForm::term(eta.scale(&Rational::from_integer(sign.into())), tuple),
            None => Ok(DualForm::zero(eta.space(), nv - self.indices.len())),
        }
    }
}

impl fmt::Display for Star {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return f.write_str("star()");
        }
        let n = self.space.n;
        let parts: Vec<String> = self
            .indices
            .iter()
            .map(|&i| if i <= n { format!("dxstar{i}") } else { format!("dystar{}", i - n) })
            .collect();
        f.write_str(&parts.join("^^"))
    }
}

#[derive(Clone, Debug)]
pub enum Value {
    Scalar(Rational),
    Bool(bool),
    List(Vec<Rational>),
    Function(FormalFunction),
    Form(Form),
    Star(Star),
    Pre(Pre),
    Density(Density),
    Dual(DualForm),
    Morphism(Morphism),
    DiffOp(DiffOp),
    Distribution(PointDistribution),
    Jet(Jet),
}

impl Value {
    /// A stable name for the value's sort, used in reports.
    pub fn sort(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Bool(_) => "bool",
            Value::List(_) => "list",
            Value::Function(_) => "function",
            Value::Form(_) => "form",
            Value::Star(_) => "star",
            Value::Pre(_) => "density-expression",
            Value::Density(_) => "density",
            Value::Dual(_) => "dualform",
            Value::Morphism(_) => "morphism",
            Value::DiffOp(_) => "diffop",
            Value::Distribution(_) => "distribution",
            Value::Jet(_) => "jet",
        }
    }

    /// Canonical JSON: exact numbers as strings, library objects through
    /// their own serializers.
    pub fn to_json(&self) -> serde_json::Value {
        let ser = |r: std::result::Result<serde_json::Value, serde_json::Error>| {
            r.unwrap_or_else(|e| json!({ "error": e.to_string() }))
        };
        match self {
            Value::Scalar(q) => json!(to_canonical(q)),
            Value::Bool(b) => json!(b),
            Value::List(v) => json!(v.iter().map(to_canonical).collect::<Vec<_>>()),
            Value::Function(f) => ser(serde_json::to_value(f)),
            Value::Form(f) => ser(serde_json::to_value(f)),
            Value::Density(d) => ser(serde_json::to_value(d)),
            Value::Dual(d) => ser(serde_json::to_value(d)),
            Value::Morphism(m) => ser(serde_json::to_value(m)),
            Value::DiffOp(d) => ser(serde_json::to_value(d)),
            Value::Jet(j) => ser(serde_json::to_value(j)),
            Value::Star(s) => json!({ "space": s.space, "indices": s.indices }),
            Value::Pre(p) => json!({ "space": p.space, "text": p.to_string() }),
            Value::Distribution(d) => {
                let terms: Vec<(String, String)> =
                    d.terms().iter().map(|(m, c)| (m.to_string(), to_canonical(c))).collect();
                json!({
                    "space": d.space(),
                    "basepoint": d.basepoint().iter().map(to_canonical).collect::<Vec<_>>(),
                    "terms": terms,
                })
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(q) => f.write_str(&to_canonical(q)),
            Value::Bool(b) => write!(f, "{b}"),
            Value::List(v) => {
                let parts: Vec<String> = v.iter().map(to_canonical).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            Value::Function(x) => write!(f, "{x}"),
            Value::Form(x) => write!(f, "{x}"),
            Value::Star(x) => write!(f, "{x}"),
            Value::Pre(x) => write!(f, "{x}"),
            Value::Density(x) => write!(f, "density({x})"),
            Value::Dual(x) => write!(f, "{x}"),
            Value::Morphism(x) => write!(f, "{x}"),
            Value::DiffOp(x) => write!(f, "{x}"),
            Value::Distribution(x) => write!(f, "{x}"),
            Value::Jet(x) => write!(f, "{x}"),
        }
    }
}
