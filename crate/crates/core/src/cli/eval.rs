//! Statement execution on top of the static checker.

use std::collections::HashMap;
use std::time::Instant;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ast::{BinOp, Expr, ExprKind, MorphismDef, Script, Stmt, StmtKind};
use super::parser::parse;
use super::printer::print_stmt;
use super::report::{Outcome, Report, StmtResult};
use super::suites::{self, SuiteSpec};
use super::types::{self, atom, Atom, Checker};
use super::value::{Pre, Star, Value};
use super::{Config, Diagnostic, Pos};
use crate::algebra::{MultiIndex, OrderedTuple, PiecewisePoly, Poly, Rational};
use crate::derham::Form;
use crate::formal::{DiffOp, FormalFunction, Jet, PointDistribution, Space};
use crate::morphisms::Morphism;
use crate::{gen, homotopy, Error, ErrorCode};

type Eval<T> = Result<T, Diagnostic>;

fn lib<T>(r: crate::Result<T>, pos: Pos) -> Eval<T> {
    r.map_err(|e| Diagnostic::at(e, pos))
}

fn internal(what: &str, pos: Pos) -> Diagnostic {
    Diagnostic::new(ErrorCode::Internal, format!("ill-typed value reached evaluation: {what}"), Some(pos))
}

fn invalid(msg: impl Into<String>, pos: Pos) -> Diagnostic {
    Diagnostic::at(Error::InvalidArgument(msg.into()), pos)
}

/// Executes statements one at a time; used for whole scripts and the REPL.
pub struct Session {
    cfg: Config,
    checker: Checker,
    space: Option<Space>,
    values: HashMap<String, Value>,
    count: usize,
}

pub fn run(script: &Script, cfg: &Config) -> Report {
    let mut checker = Checker::new(*cfg);
    for (i, stmt) in script.stmts.iter().enumerate() {
        if let Err(d) = checker.stmt(stmt) {
            return Report::rejected(cfg.seed, i + 1, print_stmt(stmt), d);
        }
    }
    let mut session = Session::new(*cfg);
    let results = script.stmts.iter().filter_map(|s| session.execute(s)).collect();
    Report::new(cfg.seed, results)
}

pub fn run_source(text: &str, cfg: &Config) -> Report {
    match parse(text) {
        Ok(script) => run(&script, cfg),
        Err(d) => Report::rejected(cfg.seed, 0, String::new(), d),
    }
}

impl Session {
    pub fn new(cfg: Config) -> Session {
        Session { cfg, checker: Checker::new(cfg), space: None, values: HashMap::new(), count: 0 }
    }

    pub fn space(&self) -> Option<Space> {
        self.space
    }

    /// Checks and runs one statement. Space declarations and successful
    /// bindings produce no result.
    pub fn execute(&mut self, stmt: &Stmt) -> Option<StmtResult> {
        self.count += 1;
        let started = Instant::now();
        let outcome = match self.checker.stmt(stmt) {
            Err(error) => Some(Outcome::Error { error }),
            Ok(kind) => self.run_stmt(stmt, kind),
        };
        let wall_ms = self.cfg.timing.then(|| started.elapsed().as_secs_f64() * 1e3);
        outcome.map(|outcome| StmtResult {
            statement: self.count,
            pos: stmt.pos,
            source: print_stmt(stmt),
            outcome,
            wall_ms,
        })
    }

    fn run_stmt(&mut self, stmt: &Stmt, kind: Option<types::Kind>) -> Option<Outcome> {
        match &stmt.kind {
            StmtKind::Space(lit) => {
                self.space = Some(types::space_of(lit, &self.cfg));
                None
            }
            StmtKind::Let { name, value } => match self.eval(value, self.space) {
                Ok(v) => {
                    self.values.insert(name.clone(), v);
                    None
                }
                Err(error) => {
                    self.values.remove(name);
                    Some(Outcome::Error { error })
                }
            },
            StmtKind::Show(e) => Some(match self.eval(e, self.space) {
                Ok(v) => Outcome::Value {
                    kind: kind.map(|k| k.to_string()).unwrap_or_else(|| v.sort().to_string()),
                    text: v.to_string(),
                    value: v.to_json(),
                },
                Err(error) => Outcome::Error { error },
            }),
            StmtKind::Check { suite, sub, params } => {
                let result = SuiteSpec::from_statement(suite, sub.as_deref(), params, &self.cfg)
                    .and_then(|spec| suites::run(&spec));
                Some(match result {
                    Ok(report) => Outcome::Check { report },
                    Err(e) => Outcome::Error { error: Diagnostic::at(e, stmt.pos) },
                })
            }
        }
    }

    pub fn eval(&mut self, e: &Expr, ctx: Option<Space>) -> Eval<Value> {
        let pos = e.pos;
        match &e.kind {
            ExprKind::Int(n) => Ok(Value::Scalar(Rational::from_integer(n.clone()))),
            ExprKind::Var(name) => self.var(name, ctx, pos),
            ExprKind::Neg(inner) => {
                let v = self.eval(inner, ctx)?;
                scale(v, &-Rational::one(), pos)
            }
            ExprKind::Binary(op, l, r) => {
                let a = self.eval(l, ctx)?;
                let b = self.eval(r, ctx)?;
                binary(*op, a, b, pos)
            }
            ExprKind::Pow(base, n) => {
                let v = self.eval(base, ctx)?;
                power(v, *n, pos)
            }
            ExprKind::List(items) => {
                let mut out = Vec::new();
                for it in items {
                    match self.eval(it, ctx)? {
                        Value::Scalar(q) => out.push(q),
                        _ => return Err(internal("list entry", it.pos)),
                    }
                }
                Ok(Value::List(out))
            }
            ExprKind::Pullback(phi, arg) => {
                let m = self.eval(phi, ctx)?;
                let g = self.eval(arg, ctx)?;
                pullback(m, g, pos)
            }
            ExprKind::Morphism(def) => self.morphism(def, pos),
            ExprKind::Call(name, args) => self.call(name, args, ctx, pos),
        }
    }

    fn var(&self, name: &str, ctx: Option<Space>, pos: Pos) -> Eval<Value> {
        if let Some(v) = self.values.get(name) {
            return Ok(v.clone());
        }
        if self.checker.env.contains_key(name) {
            return Err(Diagnostic::new(
                ErrorCode::UnboundIdentifier,
                format!("'{name}' has no value because its definition failed"),
                Some(pos),
            ));
        }
        let Some(a) = atom(name) else {
            return Err(Diagnostic::new(ErrorCode::UnboundIdentifier, format!("unbound identifier '{name}'"), Some(pos)));
        };
        let s = ctx.ok_or_else(|| Diagnostic::new(ErrorCode::MissingConfiguration, "no space declared", Some(pos)))?;
        types::atom_kind(a, s, name, pos)?;
        Ok(match a {
            Atom::X(i) => Value::Function(FormalFunction::x(s, i - 1)),
            Atom::Y(j) => Value::Function(FormalFunction::y(s, j - 1)),
            Atom::Dx(i) => Value::Form(Form::dx(s, i)),
            Atom::Dy(j) => Value::Form(Form::dy(s, j)),
            Atom::YStar(j) => Value::Pre(Pre::ystar(s, j - 1)),
            Atom::DxStar(i) => Value::Star(Star { space: s, indices: vec![i] }),
            Atom::DyStar(j) => Value::Star(Star { space: s, indices: vec![s.n + j] }),
            Atom::DelX(i) => Value::DiffOp(DiffOp::partial(s, i - 1)),
            Atom::DelY(j) => Value::DiffOp(DiffOp::partial(s, s.n + j - 1)),
        })
    }

    fn morphism(&mut self, def: &MorphismDef, pos: Pos) -> Eval<Value> {
        let (src, dst) = self.checker.morphism_spaces(def);
        let mut slots: Vec<Option<FormalFunction>> = vec![None; dst.nvars()];
        for (name, e) in &def.maps {
            let slot = types::target_slot(name, dst).ok_or_else(|| internal("morphism slot", e.pos))?;
            let v = self.eval(e, Some(src))?;
            slots[slot] = Some(as_function(v, src, e.pos)?);
        }
        let mut all = slots.into_iter().map(|f| f.ok_or_else(|| internal("missing slot", pos)));
        let xs = all.by_ref().take(dst.n).collect::<Eval<Vec<_>>>()?;
        let ys = all.collect::<Eval<Vec<_>>>()?;
        lib(Morphism::new(src, dst, xs, ys), pos).map(Value::Morphism)
    }

    fn call(&mut self, name: &str, args: &[Expr], ctx: Option<Space>, pos: Pos) -> Eval<Value> {
        match name {
            "bump" => return self.bump(args, ctx, pos),
            "pp" => return self.pp(args, ctx, pos),
            "star" => {
                let s = ctx.ok_or_else(|| internal("star without a space", pos))?;
                let mut indices = Vec::new();
                for a in args {
                    let q = scalar(self.eval(a, ctx)?, a.pos)?;
                    let i = natural(&q, a.pos)? as usize;
                    if i == 0 || i > s.nvars() {
                        return Err(invalid(format!("star index {i} outside 1..{}", s.nvars()), a.pos));
                    }
                    indices.push(i);
                }
                return Ok(Value::Star(Star { space: s, indices }));
            }
            _ => {}
        }
        let vals = args.iter().map(|a| self.eval(a, ctx)).collect::<Eval<Vec<Value>>>()?;
        let seed = self.cfg.seed ^ (self.count as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        apply_builtin(name, vals, ctx, pos, seed)
    }

    fn bump(&mut self, args: &[Expr], ctx: Option<Space>, pos: Pos) -> Eval<Value> {
        let (s, axis, normalized) = self.checker.bump(args, ctx, pos)?;
        let (_, ends, _) = types::split_bump_args(args);
        let a = scalar(self.eval(&ends[0], ctx)?, ends[0].pos)?;
        let b = scalar(self.eval(&ends[1], ctx)?, ends[1].pos)?;
        let p = lib(crate::algebra::bump(&a, &b, normalized), pos)?;
        Ok(Value::Pre(Pre::factor(s, axis, p)))
    }

    fn pp(&mut self, args: &[Expr], ctx: Option<Space>, pos: Pos) -> Eval<Value> {
        let (s, axis) = self.checker.pp(args, ctx, pos)?;
        let Value::List(bps) = self.eval(&args[1], ctx)? else {
            return Err(internal("breakpoints", args[1].pos));
        };
        let ExprKind::List(items) = &args[2].kind else {
            return Err(internal("pieces", args[2].pos));
        };
        let mut pieces = Vec::new();
        for it in items {
            let f = as_function(self.eval(it, ctx)?, s, it.pos)?;
            pieces.push(univariate(&f, axis, it.pos)?);
        }
        let p = lib(PiecewisePoly::new(bps, pieces), pos)?;
        Ok(Value::Pre(Pre::factor(s, axis, p)))
    }
}

/// `f` as a polynomial in its `axis`-th variable alone.
fn univariate(f: &FormalFunction, axis: usize, pos: Pos) -> Eval<Poly> {
    let mut terms = Vec::new();
    for (m, c) in f.poly().terms() {
        let e = m.exponents();
        if e.iter().enumerate().any(|(i, &x)| i != axis && x > 0) {
            return Err(invalid(format!("piece {f} depends on more than x{}", axis + 1), pos));
        }
        terms.push((MultiIndex::new(vec![e[axis]]), c.clone()));
    }
    Ok(Poly::from_terms(1, terms))
}

fn scalar(v: Value, pos: Pos) -> Eval<Rational> {
    match v {
        Value::Scalar(q) => Ok(q),
        _ => Err(internal("scalar", pos)),
    }
}

fn natural(q: &Rational, pos: Pos) -> Eval<u32> {
    if q.is_integer() && !q.is_negative() {
        q.to_integer().to_u32().ok_or_else(|| invalid(format!("{q} is too large"), pos))
    } else {
        Err(invalid(format!("expected a natural number, found {q}"), pos))
    }
}

fn as_function(v: Value, hint: Space, pos: Pos) -> Eval<FormalFunction> {
    match v {
        Value::Scalar(q) => Ok(FormalFunction::constant(hint, q)),
        Value::Function(f) => Ok(f),
        Value::Form(w) if w.degree() == 0 => Ok(w.coefficient(&OrderedTuple::empty())),
        _ => Err(internal("function", pos)),
    }
}

fn as_form(v: Value, hint: Space, pos: Pos) -> Eval<Form> {
    match v {
        Value::Form(w) => Ok(w),
        other => as_function(other, hint, pos).map(Form::function),
    }
}

fn as_diffop(v: Value, hint: Space, pos: Pos) -> Eval<DiffOp> {
    match v {
        Value::DiffOp(d) => Ok(d),
        other => as_function(other, hint, pos).map(DiffOp::multiplication),
    }
}

fn as_pre(v: Value, hint: Space, pos: Pos) -> Eval<Pre> {
    match v {
        Value::Pre(p) => Ok(p),
        Value::Scalar(q) => Ok(Pre::scalar(hint, q)),
        _ => Err(internal("density expression", pos)),
    }
}

/// The space carried by a value, if any.
fn space_of(v: &Value) -> Option<Space> {
    match v {
        Value::Scalar(_) | Value::Bool(_) | Value::List(_) => None,
        Value::Function(f) => Some(f.space()),
        Value::Form(w) => Some(w.space()),
        Value::Star(s) => Some(s.space),
        Value::Pre(p) => Some(p.space),
        Value::Density(d) => Some(d.space()),
        Value::Dual(d) => Some(d.space()),
        Value::Morphism(m) => Some(m.source()),
        Value::DiffOp(d) => Some(d.space()),
        Value::Distribution(d) => Some(d.space()),
        Value::Jet(j) => Some(j.space()),
    }
}

fn scale(v: Value, c: &Rational, pos: Pos) -> Eval<Value> {
    Ok(match v {
        Value::Scalar(q) => Value::Scalar(q * c),
        Value::Function(f) => Value::Function(f.scale(c)),
        Value::Form(w) => Value::Form(w.scale(c)),
        Value::Pre(p) => Value::Pre(p.scale(c)),
        Value::Density(d) => Value::Density(d.scale(c)),
        Value::Dual(d) => Value::Dual(d.scale(c)),
        Value::DiffOp(d) => Value::DiffOp(d.scale(c)),
        Value::Distribution(d) => {
            let terms = d.terms().iter().map(|(m, q)| (m.clone(), q * c));
            Value::Distribution(lib(PointDistribution::new(d.space(), d.basepoint().to_vec(), terms), pos)?)
        }
        _ => return Err(internal("scaling", pos)),
    })
}

fn add(a: Value, b: Value, pos: Pos) -> Eval<Value> {
    use Value as V;
    let hint = space_of(&a).or_else(|| space_of(&b));
    Ok(match (a, b) {
        (V::Scalar(p), V::Scalar(q)) => V::Scalar(p + q),
        (V::Density(x), V::Density(y)) => V::Density(lib(x.add(&y), pos)?),
        (V::Dual(x), V::Dual(y)) => V::Dual(lib(x.add(&y), pos)?),
        (V::Distribution(x), V::Distribution(y)) => {
            if x.basepoint() != y.basepoint() {
                return Err(invalid("point distributions at different basepoints", pos));
            }
            let terms = x.terms().iter().chain(y.terms()).map(|(m, c)| (m.clone(), c.clone()));
            V::Distribution(lib(PointDistribution::new(x.space().meet(&y.space()), x.basepoint().to_vec(), terms), pos)?)
        }
        (a @ V::Pre(_), b) | (b, a @ V::Pre(_)) => {
            let s = hint.expect("a density expression has a space");
            V::Pre(lib(as_pre(a, s, pos)?.add(&as_pre(b, s, pos)?), pos)?)
        }
        (a @ V::DiffOp(_), b) | (b, a @ V::DiffOp(_)) => {
            let s = hint.expect("an operator has a space");
            V::DiffOp(lib(as_diffop(a, s, pos)?.add(&as_diffop(b, s, pos)?), pos)?)
        }
        (a @ V::Form(_), b) | (b, a @ V::Form(_)) => {
            let s = hint.expect("a form has a space");
            V::Form(lib(as_form(a, s, pos)?.add(&as_form(b, s, pos)?), pos)?)
        }
        (a @ V::Function(_), b) | (b, a @ V::Function(_)) => {
            let s = hint.expect("a function has a space");
            V::Function(lib(as_function(a, s, pos)?.add(&as_function(b, s, pos)?), pos)?)
        }
        _ => return Err(internal("addition", pos)),
    })
}

fn multiply(a: Value, b: Value, pos: Pos) -> Eval<Value> {
    use Value as V;
    Ok(match (a, b) {
        (V::Scalar(p), V::Scalar(q)) => V::Scalar(p * q),
        (V::Scalar(c), x) | (x, V::Scalar(c)) => return scale(x, &c, pos),
        (V::Function(f), V::Function(g)) => V::Function(lib(f.mul(&g), pos)?),
        (V::Function(f), V::Form(w)) | (V::Form(w), V::Function(f)) => V::Form(lib(w.mul_fn(&f), pos)?),
        (V::Function(f), V::DiffOp(d)) => V::DiffOp(lib(d.left_mul(&f), pos)?),
        (V::DiffOp(d), V::Function(f)) => V::DiffOp(lib(d.compose(&DiffOp::multiplication(f)), pos)?),
        (V::DiffOp(d), V::DiffOp(e)) => V::DiffOp(lib(d.compose(&e), pos)?),
        (V::Pre(p), V::Pre(q)) => V::Pre(lib(p.mul(&q), pos)?),
        (V::Pre(p), V::Star(s)) => V::Dual(lib(s.attach(&lib(p.density(), pos)?), pos)?),
        (V::Density(d), V::Star(s)) => V::Dual(lib(s.attach(&d), pos)?),
        _ => return Err(internal("multiplication", pos)),
    })
}

fn wedge(a: Value, b: Value, pos: Pos) -> Eval<Value> {
    use Value as V;
    Ok(match (a, b) {
        (V::Star(s), V::Star(t)) => {
            let mut indices = s.indices;
            indices.extend(t.indices);
            V::Star(Star { space: s.space.meet(&t.space), indices })
        }
        (x, y) if matches!(x, V::Form(_)) || matches!(y, V::Form(_)) => {
            let s = space_of(&x).or_else(|| space_of(&y)).expect("a form has a space");
            V::Form(lib(as_form(x, s, pos)?.wedge(&as_form(y, s, pos)?), pos)?)
        }
        (a, b) => return multiply(a, b, pos),
    })
}

fn binary(op: BinOp, a: Value, b: Value, pos: Pos) -> Eval<Value> {
    match op {
        BinOp::Add => add(a, b, pos),
        BinOp::Sub => {
            let nb = scale(b, &-Rational::one(), pos)?;
            add(a, nb, pos)
        }
        BinOp::Mul => multiply(a, b, pos),
        BinOp::Div => {
            let c = scalar(b, pos)?;
            if c.is_zero() {
                return Err(invalid("division by zero", pos));
            }
            scale(a, &c.recip(), pos)
        }
        BinOp::Wedge => wedge(a, b, pos),
    }
}

fn power(v: Value, n: u32, pos: Pos) -> Eval<Value> {
    Ok(match v {
        Value::Scalar(q) => {
            let mut acc = Rational::one();
            for _ in 0..n {
                acc *= &q;
            }
            Value::Scalar(acc)
        }
        Value::Function(f) => Value::Function(lib(f.pow(n), pos)?),
        Value::DiffOp(d) => {
            let mut acc = DiffOp::identity(d.space());
            for _ in 0..n {
                acc = lib(acc.compose(&d), pos)?;
            }
            Value::DiffOp(acc)
        }
        Value::Pre(p) => {
            let mut acc = Pre::scalar(p.space, Rational::one());
            for _ in 0..n {
                acc = lib(acc.mul(&p), pos)?;
            }
            Value::Pre(acc)
        }
        _ => return Err(internal("power", pos)),
    })
}

fn pullback(m: Value, g: Value, pos: Pos) -> Eval<Value> {
    let Value::Morphism(phi) = m else {
        return Err(internal("pullback", pos));
    };
    Ok(match g {
        Value::Form(w) => Value::Form(lib(w.pullback(&phi), pos)?),
        other => {
            let f = as_function(other, phi.target(), pos)?;
            Value::Function(lib(phi.pullback(&f), pos)?)
        }
    })
}

fn list(v: Value, pos: Pos) -> Eval<Vec<Rational>> {
    match v {
        Value::List(items) => Ok(items),
        _ => Err(internal("list", pos)),
    }
}

fn apply_builtin(name: &str, vals: Vec<Value>, ctx: Option<Space>, pos: Pos, seed: u64) -> Eval<Value> {
    use Value as V;
    let mut it = vals.into_iter();
    let mut next = || it.next().ok_or_else(|| internal("argument count", pos));
    let hint = |v: &Value| space_of(v).or(ctx).ok_or_else(|| internal("no space", pos));
    Ok(match name {
        "d" => match next()? {
            V::Dual(e) => V::Dual(lib(e.d(), pos)?),
            v => {
                let s = hint(&v)?;
                V::Form(lib(as_form(v, s, pos)?.d(), pos)?)
            }
        },
        "pair" => {
            let (a, b) = (next()?, next()?);
            let (dual, other) = match (a, b) {
                (x @ (V::Density(_) | V::Distribution(_) | V::Dual(_)), y) => (x, y),
                (y, x) => (x, y),
            };
            let s = hint(&dual)?;
            match dual {
                V::Density(d) => V::Scalar(lib(d.pair(&as_function(other, s, pos)?), pos)?),
                V::Distribution(d) => V::Scalar(lib(d.pair(&as_function(other, s, pos)?), pos)?),
                V::Dual(d) => V::Scalar(lib(d.pair(&as_form(other, s, pos)?), pos)?),
                _ => return Err(internal("pair", pos)),
            }
        }
        "kunneth" => {
            let (a, b) = (next()?, next()?);
            let (sa, sb) = (hint(&a)?, hint(&b)?);
            V::Form(as_form(a, sa, pos)?.kunneth(&as_form(b, sb, pos)?))
        }
        "boxtimes" => match (next()?, next()?) {
            (V::Dual(a), V::Dual(b)) => V::Dual(a.boxtimes(&b)),
            _ => return Err(internal("boxtimes", pos)),
        },
        "jet" | "invert" => {
            let f = next()?;
            let s = hint(&f)?;
            let f = as_function(f, s, pos)?;
            let a = list(next()?, pos)?;
            let r = natural(&scalar(next()?, pos)?, pos)?;
            if name == "jet" {
                V::Jet(lib(Jet::of(&f, &a, r), pos)?)
            } else {
                V::Function(lib(f.invert(&a, r), pos)?)
            }
        }
        "value" => {
            let f = next()?;
            let s = hint(&f)?;
            let f = as_function(f, s, pos)?;
            V::Scalar(lib(f.value(&list(next()?, pos)?), pos)?)
        }
        "pullback" => {
            let (m, g) = (next()?, next()?);
            return pullback(m, g, pos);
        }
        "compose" => match (next()?, next()?) {
            (V::Morphism(psi), V::Morphism(phi)) => V::Morphism(lib(psi.compose(&phi), pos)?),
            _ => return Err(internal("compose", pos)),
        },
        "ev" => {
            let s = ctx.ok_or_else(|| internal("ev without a space", pos))?;
            let a = list(next()?, pos)?;
            match it.next() {
                None => V::Distribution(lib(PointDistribution::dirac(s, a), pos)?),
                Some(k) => {
                    let k = list(k, pos)?.iter().map(|q| natural(q, pos)).collect::<Eval<Vec<u32>>>()?;
                    V::Distribution(lib(PointDistribution::derivative(s, a, MultiIndex::new(k)), pos)?)
                }
            }
        }
        "apply" | "comm" => {
            let V::DiffOp(d) = next()? else {
                return Err(internal(name, pos));
            };
            let f = as_function(next()?, d.space(), pos)?;
            if name == "apply" {
                V::Function(lib(d.apply(&f), pos)?)
            } else {
                V::DiffOp(lib(d.commutator_with_fn(&f), pos)?)
            }
        }
        "order" => match next()? {
            V::DiffOp(d) => V::Scalar(Rational::from_integer(d.order().unwrap_or(0).into())),
            _ => return Err(internal("order", pos)),
        },
        "order_check" => {
            let V::DiffOp(d) = next()? else {
                return Err(internal("order_check", pos));
            };
            let r = natural(&scalar(next()?, pos)?, pos)?;
            let mut rng = gen::rng(seed);
            V::Bool(lib(d.order_certificate(r, 8, &mut rng), pos)?)
        }
        "radial" | "homotopy" | "formal_homotopy" => {
            let w = next()?;
            let s = hint(&w)?;
            let w = as_form(w, s, pos)?;
            let out = if name == "formal_homotopy" {
                homotopy::formal_homotopy(&w)
            } else {
                homotopy::radial_homotopy(&w)
            };
            V::Form(lib(out, pos)?)
        }
        "cs_homotopy" => {
            let V::Dual(eta) = next()? else {
                return Err(internal("cs_homotopy", pos));
            };
            let mut bumps = Vec::new();
            for (i, v) in it.enumerate() {
                let V::Pre(p) = v else {
                    return Err(internal("profile", pos));
                };
                let (axis, g) = lib(p.profile(), pos)?;
                if axis != i {
                    return Err(invalid(format!("profile {} lies along x{}, expected x{}", i + 1, axis + 1, i + 1), pos));
                }
                bumps.push(g);
            }
            V::Dual(lib(homotopy::cs_homotopy(&eta, &bumps), pos)?)
        }
        "zeta" => match next()? {
            V::Dual(e) => V::Scalar(lib(e.zeta(), pos)?),
            _ => return Err(internal("zeta", pos)),
        },
        "density" => match next()? {
            V::Density(d) => V::Density(d),
            v => {
                let s = hint(&v)?;
                V::Density(lib(as_pre(v, s, pos)?.density(), pos)?)
            }
        },
        "top" => match next()? {
            V::Density(d) => V::Dual(crate::dual::DualForm::top(d)),
            _ => return Err(internal("top", pos)),
        },
        other => return Err(Diagnostic::new(ErrorCode::UnboundIdentifier, format!("unknown function '{other}'"), Some(pos))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::report::Outcome;

    fn texts(src: &str) -> Vec<String> {
        let r = run_source(src, &Config::default());
        r.results
            .iter()
            .map(|x| match &x.outcome {
                Outcome::Value { text, .. } => text.clone(),
                Outcome::Error { error } => error.code.as_str().to_string(),
                Outcome::Check { report } => report.summary(),
            })
            .collect()
    }

    #[test]
    fn bindings_only() {
        let r = run_source("space (1,1,3); let f = x1^2*y1;", &Config::default());
        assert!(r.results.is_empty());
        assert_eq!(r.exit_code, 0);
    }

    #[test]
    fn coboundary_of_a_function() {
        assert_eq!(texts("space (1,1,3); let f = x1^2*y1; d(f)"), texts("space (1,1,3); 2*x1*y1*dx1 + x1^2*dy1"));
    }

    #[test]
    fn density_pairing() {
        assert_eq!(texts("space (1,1,3); pair(3*y1^2, density(bump(0,1,norm)*ystar1^2))"), vec!["6"]);
    }

    #[test]
    fn errors_are_reported_per_statement() {
        let r = run_source("space (1,1,0); let f = x1; d(f); 1 + 1", &Config::default());
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.results.len(), 2);
        let out = texts("space (1,1,0); d(x1); 1 + 1");
        assert_eq!(out, vec!["E007-known-order-exhausted".to_string(), "2".to_string()]);
        let r = run_source("d(f", &Config::default());
        assert_eq!(r.exit_code, 2);
    }

    #[test]
    fn morphisms_and_pullbacks() {
        let src = "space (1,0); let phi = morphism src=(1,1,3) dst=(1,0) { x'1 = x1 + y1; }; phi#(x1^2)";
        assert_eq!(texts(src), texts("space (1,1,3); x1^2 + 2*x1*y1 + y1^2"));
    }

    #[test]
    fn stars_and_dual_forms() {
        let out = texts("space (2,0); zeta(density(bump(x1,0,1,norm)*bump(x2,0,1,norm))*dxstar2^^dxstar1)");
        assert_eq!(out, vec!["-1"]);
        let out = texts("space (1,0); let eta = density(bump(0,1,norm))*star(); pair(dx1, eta)");
        assert_eq!(out, vec!["1"]);
    }

    #[test]
    fn operators() {
        assert_eq!(texts("space (1,1,3); apply(del_y1, y1^2)"), texts("space (1,1,3); 2*y1"));
        assert_eq!(texts("space (1,0); order(comm(del_x1^2, x1))"), vec!["1"]);
        assert_eq!(texts("space (1,1,3); order_check(del_x1*del_y1, 1)"), vec!["false"]);
        assert_eq!(texts("space (1,1,3); value(1 + x1 + 3*y1 + x1*y1^2, [2])"), vec!["3"]);
        assert_eq!(texts("space (0,1,4); formal_homotopy(y1^2*dy1)"), vec!["(1/3*y1^3)"]);
    }

    #[test]
    fn missing_profile_is_a_configuration_error() {
        let out = texts("space (1,0); cs_homotopy(density(bump(0,1))*star())");
        assert_eq!(out, vec!["E012-missing-configuration"]);
    }
}
