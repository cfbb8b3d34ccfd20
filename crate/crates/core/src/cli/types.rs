//! Static kinds: every expression's kind, space and degree are determined
//! before anything is evaluated.

use std::collections::HashMap;
use std::fmt;

use super::ast::{BinOp, Expr, ExprKind, MorphismDef, Script, SpaceLit, Stmt, StmtKind};
use super::{suites, Config, Diagnostic, Pos};
use crate::formal::Space;
use crate::ErrorCode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Scalar,
    Bool,
    List(usize),
    Function(Space),
    Form(Space, usize),
    /// A wedge of `dxstar`/`dystar` atoms with this many factors.
    Star(Space, usize),
    /// A density expression before its axes are checked.
    Pre(Space),
    Density(Space),
    Dual(Space, usize),
    Morphism(Space, Space),
    DiffOp(Space),
    Distribution(Space),
    Jet(Space),
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Scalar => f.write_str("scalar"),
            Kind::Bool => f.write_str("bool"),
            Kind::List(n) => write!(f, "list[{n}]"),
            Kind::Function(s) => write!(f, "function{s}"),
            Kind::Form(s, r) => write!(f, "form[{r}]{s}"),
            Kind::Star(s, r) => write!(f, "star[{r}]{s}"),
            Kind::Pre(s) => write!(f, "density-expression{s}"),
            Kind::Density(s) => write!(f, "density{s}"),
            Kind::Dual(s, r) => write!(f, "dualform[{r}]{s}"),
            Kind::Morphism(a, b) => write!(f, "morphism{a}->{b}"),
            Kind::DiffOp(s) => write!(f, "diffop{s}"),
            Kind::Distribution(s) => write!(f, "distribution{s}"),
            Kind::Jet(s) => write!(f, "jet{s}"),
        }
    }
}

impl Kind {
    fn is_linear(&self) -> bool {
        matches!(
            self,
            Kind::Scalar
                | Kind::Function(_)
                | Kind::Form(..)
                | Kind::Pre(_)
                | Kind::Density(_)
                | Kind::Dual(..)
                | Kind::DiffOp(_)
                | Kind::Distribution(_)
        )
    }
}

/// Built-in coordinate atoms, with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    X(usize),
    Y(usize),
    Dx(usize),
    Dy(usize),
    YStar(usize),
    DxStar(usize),
    DyStar(usize),
    DelX(usize),
    DelY(usize),
}

pub fn atom(name: &str) -> Option<Atom> {
    const PREFIXES: [(&str, fn(usize) -> Atom); 9] = [
        ("del_x", Atom::DelX),
        ("del_y", Atom::DelY),
        ("dxstar", Atom::DxStar),
        ("dystar", Atom::DyStar),
        ("ystar", Atom::YStar),
        ("dx", Atom::Dx),
        ("dy", Atom::Dy),
        ("x", Atom::X),
        ("y", Atom::Y),
    ];
    for (p, make) in PREFIXES {
        if let Some(rest) = name.strip_prefix(p) {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) && !rest.starts_with('0') {
                return rest.parse().ok().map(make);
            }
        }
    }
    None
}

pub const BUILTINS: [&str; 25] = [
    "d",
    "pair",
    "kunneth",
    "boxtimes",
    "jet",
    "value",
    "invert",
    "pullback",
    "compose",
    "ev",
    "apply",
    "comm",
    "order",
    "order_check",
    "radial",
    "homotopy",
    "formal_homotopy",
    "cs_homotopy",
    "zeta",
    "bump",
    "pp",
    "density",
    "top",
    "star",
    "norm",
];

pub fn is_reserved(name: &str) -> bool {
    atom(name).is_some() || BUILTINS.contains(&name)
}

fn err(code: ErrorCode, msg: impl Into<String>, pos: Pos) -> Diagnostic {
    Diagnostic::new(code, msg, Some(pos))
}

fn mismatch(msg: impl Into<String>, pos: Pos) -> Diagnostic {
    err(ErrorCode::TypeMismatch, msg, pos)
}

pub(crate) fn meet(s: &Space, t: &Space, pos: Pos) -> Result<Space, Diagnostic> {
    if s.compatible(t) {
        Ok(s.meet(t))
    } else {
        Err(err(ErrorCode::SpaceMismatch, format!("space mismatch: {s} vs {t}"), pos))
    }
}

fn same_degree(r: usize, q: usize, pos: Pos) -> Result<(), Diagnostic> {
    if r == q {
        Ok(())
    } else {
        Err(err(ErrorCode::DegreeMismatch, format!("degree mismatch: {r} vs {q}"), pos))
    }
}

/// Resolves a declared space literal with the configured default order.
pub fn space_of(lit: &SpaceLit, cfg: &Config) -> Space {
    Space::new(lit.n, lit.k, lit.order.unwrap_or(cfg.order))
}

/// Kind of an atom in the space `ctx`.
pub fn atom_kind(a: Atom, ctx: Space, name: &str, pos: Pos) -> Result<Kind, Diagnostic> {
    let (limit, kind) = match a {
        Atom::X(i) => (i <= ctx.n, Kind::Function(ctx)),
        Atom::Y(j) => (j <= ctx.k, Kind::Function(ctx)),
        Atom::Dx(i) => (i <= ctx.n, Kind::Form(ctx, 1)),
        Atom::Dy(j) => (j <= ctx.k, Kind::Form(ctx, 1)),
        Atom::YStar(j) => (j <= ctx.k, Kind::Pre(ctx)),
        Atom::DxStar(i) => (i <= ctx.n, Kind::Star(ctx, 1)),
        Atom::DyStar(j) => (j <= ctx.k, Kind::Star(ctx, 1)),
        Atom::DelX(i) => (i <= ctx.n, Kind::DiffOp(ctx)),
        Atom::DelY(j) => (j <= ctx.k, Kind::DiffOp(ctx)),
    };
    if limit {
        Ok(kind)
    } else {
        Err(err(ErrorCode::UnboundIdentifier, format!("'{name}' is not a coordinate of {ctx}"), pos))
    }
}

pub fn binary(op: BinOp, a: &Kind, b: &Kind, pos: Pos) -> Result<Kind, Diagnostic> {
    use Kind::*;
    let out = match (op, a, b) {
        (BinOp::Add | BinOp::Sub, _, _) => match (a, b) {
            (Scalar, Scalar) => Scalar,
            (Function(s), Function(t)) => Function(meet(s, t, pos)?),
            (Function(s), Scalar) | (Scalar, Function(s)) => Function(*s),
            (Form(s, r), Form(t, q)) => {
                same_degree(*r, *q, pos)?;
                Form(meet(s, t, pos)?, *r)
            }
            (Form(s, r), Function(t)) | (Function(t), Form(s, r)) => {
                same_degree(*r, 0, pos)?;
                Form(meet(s, t, pos)?, 0)
            }
            (Form(s, r), Scalar) | (Scalar, Form(s, r)) => {
                same_degree(*r, 0, pos)?;
                Form(*s, 0)
            }
            (Pre(s), Pre(t)) => Pre(meet(s, t, pos)?),
            (Pre(s), Scalar) | (Scalar, Pre(s)) => Pre(*s),
            (Density(s), Density(t)) => Density(meet(s, t, pos)?),
            (Dual(s, r), Dual(t, q)) => {
                same_degree(*r, *q, pos)?;
                Dual(meet(s, t, pos)?, *r)
            }
            (DiffOp(s), DiffOp(t)) => DiffOp(meet(s, t, pos)?),
            (DiffOp(s), Function(t)) | (Function(t), DiffOp(s)) => DiffOp(meet(s, t, pos)?),
            (DiffOp(s), Scalar) | (Scalar, DiffOp(s)) => DiffOp(*s),
            (Distribution(s), Distribution(t)) => Distribution(meet(s, t, pos)?),
            _ => return Err(mismatch(format!("cannot add {a} and {b}"), pos)),
        },
        (BinOp::Mul, Scalar, x) | (BinOp::Mul, x, Scalar) if x.is_linear() => x.clone(),
        (BinOp::Mul, Function(s), Function(t)) => Function(meet(s, t, pos)?),
        (BinOp::Mul, Function(s), Form(t, r)) | (BinOp::Mul, Form(t, r), Function(s)) => Form(meet(s, t, pos)?, *r),
        (BinOp::Mul, Function(s), DiffOp(t))
        | (BinOp::Mul, DiffOp(t), Function(s))
        | (BinOp::Mul, DiffOp(s), DiffOp(t)) => DiffOp(meet(s, t, pos)?),
        (BinOp::Mul, Pre(s), Pre(t)) => Pre(meet(s, t, pos)?),
        (BinOp::Mul, Density(s) | Pre(s), Star(t, len)) => {
            let sp = meet(s, t, pos)?;
            if *len > sp.nvars() {
                return Err(err(ErrorCode::DegreeMismatch, format!("{len} star factors on {sp}"), pos));
            }
            Dual(sp, sp.nvars() - len)
        }
        (BinOp::Mul, Form(..), Form(..)) => return Err(mismatch("forms multiply with '^^'", pos)),
        (BinOp::Div, x, Scalar) if x.is_linear() => x.clone(),
        (BinOp::Wedge, Star(s, l1), Star(t, l2)) => Star(meet(s, t, pos)?, l1 + l2),
        (BinOp::Wedge, _, _) => {
            let degree = |k: &Kind| match k {
                Scalar | Function(_) => Some(0),
                Form(_, r) => Some(*r),
                _ => None,
            };
            let (Some(r), Some(q)) = (degree(a), degree(b)) else {
                return Err(mismatch(format!("cannot wedge {a} and {b}"), pos));
            };
            match (a, b) {
                (Scalar, Scalar) => Scalar,
                (Function(s) | Form(s, _), Scalar) | (Scalar, Function(s) | Form(s, _)) => {
                    if matches!((a, b), (Function(_), _) | (_, Function(_))) {
                        Function(*s)
                    } else {
                        Form(*s, r + q)
                    }
                }
                (Function(s), Function(t)) => Function(meet(s, t, pos)?),
                (Function(s) | Form(s, _), Function(t) | Form(t, _)) => Form(meet(s, t, pos)?, r + q),
                _ => unreachable!("degrees exist only for scalars, functions and forms"),
            }
        }
        _ => {
            let sym = match op {
                BinOp::Mul => "multiply",
                BinOp::Div => "divide",
                _ => "combine",
            };
            return Err(mismatch(format!("cannot {sym} {a} and {b}"), pos));
        }
    };
    Ok(out)
}

/// Kinds of the values bound so far, plus the ambient space.
#[derive(Clone, Debug, Default)]
pub struct Checker {
    pub cfg: Config,
    pub space: Option<Space>,
    pub env: HashMap<String, Kind>,
}

impl Checker {
    pub fn new(cfg: Config) -> Self {
        Checker { cfg, space: None, env: HashMap::new() }
    }

    pub fn check_script(&mut self, script: &Script) -> Result<(), Diagnostic> {
        for s in &script.stmts {
            self.stmt(s)?;
        }
        Ok(())
    }

    /// Checks one statement and records its effect on the environment.
    pub fn stmt(&mut self, stmt: &Stmt) -> Result<Option<Kind>, Diagnostic> {
        match &stmt.kind {
            StmtKind::Space(lit) => {
                self.space = Some(space_of(lit, &self.cfg));
                Ok(None)
            }
            StmtKind::Let { name, value } => {
                let k = self.expr(value, self.space)?;
                self.env.insert(name.clone(), k.clone());
                Ok(Some(k))
            }
            StmtKind::Show(e) => self.expr(e, self.space).map(Some),
            StmtKind::Check { suite, sub, params } => {
                suites::SuiteSpec::from_statement(suite, sub.as_deref(), params, &self.cfg)
                    .map_err(|e| Diagnostic::at(e, stmt.pos))?;
                Ok(None)
            }
        }
    }

    fn ambient(ctx: Option<Space>, pos: Pos) -> Result<Space, Diagnostic> {
        ctx.ok_or_else(|| err(ErrorCode::MissingConfiguration, "no space declared; add 'space (n,k,order);'", pos))
    }

    pub fn expr(&self, e: &Expr, ctx: Option<Space>) -> Result<Kind, Diagnostic> {
        let pos = e.pos;
        match &e.kind {
            ExprKind::Int(_) => Ok(Kind::Scalar),
            ExprKind::Var(name) => {
                if let Some(k) = self.env.get(name) {
                    return Ok(k.clone());
                }
                match atom(name) {
                    Some(a) => atom_kind(a, Self::ambient(ctx, pos)?, name, pos),
                    None => Err(err(ErrorCode::UnboundIdentifier, format!("unbound identifier '{name}'"), pos)),
                }
            }
            ExprKind::Neg(inner) => {
                let k = self.expr(inner, ctx)?;
                if k.is_linear() {
                    Ok(k)
                } else {
                    Err(mismatch(format!("cannot negate {k}"), pos))
                }
            }
            ExprKind::Binary(op, l, r) => {
                let a = self.expr(l, ctx)?;
                let b = self.expr(r, ctx)?;
                binary(*op, &a, &b, pos)
            }
            ExprKind::Pow(base, _) => {
                let k = self.expr(base, ctx)?;
                match k {
                    Kind::Scalar | Kind::Function(_) | Kind::DiffOp(_) | Kind::Pre(_) => Ok(k),
                    _ => Err(mismatch(format!("cannot raise {k} to a power"), pos)),
                }
            }
            ExprKind::List(items) => {
                for it in items {
                    let k = self.expr(it, ctx)?;
                    if k != Kind::Scalar {
                        return Err(mismatch(format!("list entries must be scalars, found {k}"), it.pos));
                    }
                }
                Ok(Kind::List(items.len()))
            }
            ExprKind::Pullback(phi, arg) => {
                let m = self.expr(phi, ctx)?;
                let g = self.expr(arg, ctx)?;
                pullback_kind(&m, &g, pos)
            }
            ExprKind::Morphism(def) => self.morphism(def, pos),
            ExprKind::Call(name, args) => self.call(name, args, ctx, pos),
        }
    }

    pub fn morphism_spaces(&self, def: &MorphismDef) -> (Space, Space) {
        let src = space_of(&def.src, &self.cfg);
        (src, Space::new(def.dst.0, def.dst.1, src.order))
    }

    fn morphism(&self, def: &MorphismDef, pos: Pos) -> Result<Kind, Diagnostic> {
        let (src, dst) = self.morphism_spaces(def);
        let mut seen = Vec::new();
        for (name, e) in &def.maps {
            let slot = target_slot(name, dst).ok_or_else(|| {
                err(ErrorCode::UnboundIdentifier, format!("'{name}' is not a coordinate of the target {dst}"), e.pos)
            })?;
            if seen.contains(&slot) {
                return Err(err(ErrorCode::InvalidArgument, format!("'{name}' assigned twice"), e.pos));
            }
            seen.push(slot);
            match self.expr(e, Some(src))? {
                Kind::Scalar => {}
                Kind::Function(s) => {
                    meet(&s, &src, e.pos)?;
                }
                k => return Err(mismatch(format!("'{name}' must be a function, found {k}"), e.pos)),
            }
        }
        if seen.len() != dst.nvars() {
            return Err(err(
                ErrorCode::DimensionMismatch,
                format!("morphism assigns {} of {} target coordinates", seen.len(), dst.nvars()),
                pos,
            ));
        }
        Ok(Kind::Morphism(src, dst))
    }

    fn call(&self, name: &str, args: &[Expr], ctx: Option<Space>, pos: Pos) -> Result<Kind, Diagnostic> {
        match name {
            "bump" => return self.bump(args, ctx, pos).map(|(s, ..)| Kind::Pre(s)),
            "pp" => return self.pp(args, ctx, pos).map(|(s, _)| Kind::Pre(s)),
            "star" => {
                let s = Self::ambient(ctx, pos)?;
                for a in args {
                    if !matches!(a.kind, ExprKind::Int(_)) {
                        return Err(mismatch("star takes joint index literals", a.pos));
                    }
                }
                if args.len() > s.nvars() {
                    return Err(err(ErrorCode::DegreeMismatch, format!("{} star factors on {s}", args.len()), pos));
                }
                return Ok(Kind::Star(s, args.len()));
            }
            _ => {}
        }
        let kinds: Vec<Kind> = args.iter().map(|a| self.expr(a, ctx)).collect::<Result<_, _>>()?;
        call_kind(name, &kinds, ctx, pos)
    }

    /// `bump([xi,] a, b[, norm])`: ambient space, axis (0-based) and
    /// whether the profile is normalized.
    pub fn bump(&self, args: &[Expr], ctx: Option<Space>, pos: Pos) -> Result<(Space, usize, bool), Diagnostic> {
        let s = Self::ambient(ctx, pos)?;
        let (axis, ends, normalized) = split_bump_args(args);
        let axis = match axis {
            Some((i, e)) => {
                let ExprKind::Var(v) = &e.kind else { unreachable!("axis is a variable") };
                atom_kind(Atom::X(i + 1), s, v, e.pos)?;
                i
            }
            None => 0,
        };
        if ends.len() != 2 {
            return Err(mismatch("bump takes ([x_i,] a, b [, norm])", pos));
        }
        for a in ends {
            let k = self.expr(a, ctx)?;
            if k != Kind::Scalar {
                return Err(mismatch(format!("bump endpoints must be scalars, found {k}"), a.pos));
            }
        }
        if s.n == 0 {
            return Err(err(ErrorCode::DimensionMismatch, format!("{s} has no x axis for a bump"), pos));
        }
        Ok((s, axis, normalized))
    }

    /// `pp(xi, [breakpoints], [pieces])`: ambient space and axis (0-based).
    pub fn pp(&self, args: &[Expr], ctx: Option<Space>, pos: Pos) -> Result<(Space, usize), Diagnostic> {
        let s = Self::ambient(ctx, pos)?;
        let [Expr { kind: ExprKind::Var(v), pos: vpos }, bps, pieces] = args else {
            return Err(mismatch("pp takes (x_i, [breakpoints], [pieces])", pos));
        };
        let Some(Atom::X(i)) = atom(v) else {
            return Err(mismatch("pp needs an x coordinate as its first argument", *vpos));
        };
        atom_kind(Atom::X(i), s, v, *vpos)?;
        let Kind::List(nb) = self.expr(bps, ctx)? else {
            return Err(mismatch("pp breakpoints must be a list", bps.pos));
        };
        let ExprKind::List(items) = &pieces.kind else {
            return Err(mismatch("pp pieces must be a list", pieces.pos));
        };
        for it in items {
            match self.expr(it, ctx)? {
                Kind::Scalar | Kind::Function(_) => {}
                k => return Err(mismatch(format!("pp pieces must be polynomials, found {k}"), it.pos)),
            }
        }
        if nb != 0 && items.len() + 1 != nb {
            return Err(err(
                ErrorCode::DimensionMismatch,
                format!("{nb} breakpoints need {} pieces, found {}", nb - 1, items.len()),
                pieces.pos,
            ));
        }
        Ok((s, i - 1))
    }
}

/// Splits `bump` arguments into the optional axis (0-based, with its
/// expression), the endpoints and the `norm` flag.
pub fn split_bump_args(args: &[Expr]) -> (Option<(usize, &Expr)>, &[Expr], bool) {
    let mut rest = args;
    let mut axis = None;
    if let Some(first @ Expr { kind: ExprKind::Var(v), .. }) = rest.first() {
        if let Some(Atom::X(i)) = atom(v) {
            axis = Some((i - 1, first));
            rest = &rest[1..];
        }
    }
    let mut normalized = false;
    if let Some(Expr { kind: ExprKind::Var(v), .. }) = rest.last() {
        if v == "norm" {
            normalized = true;
            rest = &rest[..rest.len() - 1];
        }
    }
    (axis, rest, normalized)
}

/// The slot (0-based joint index) of a target coordinate name `x'i`/`y'j`.
pub fn target_slot(name: &str, dst: Space) -> Option<usize> {
    let (prefix, rest) = name.split_at(name.find('\'')? + 1);
    let i: usize = rest.parse().ok()?;
    match prefix {
        "x'" if (1..=dst.n).contains(&i) => Some(i - 1),
        "y'" if (1..=dst.k).contains(&i) => Some(dst.n + i - 1),
        _ => None,
    }
}

fn pullback_kind(m: &Kind, g: &Kind, pos: Pos) -> Result<Kind, Diagnostic> {
    let Kind::Morphism(src, dst) = m else {
        return Err(mismatch(format!("'#' needs a morphism, found {m}"), pos));
    };
    match g {
        Kind::Scalar => Ok(Kind::Function(*src)),
        Kind::Function(t) => {
            meet(dst, t, pos)?;
            Ok(Kind::Function(*src))
        }
        Kind::Form(t, r) => {
            meet(dst, t, pos)?;
            Ok(Kind::Form(*src, *r))
        }
        k => Err(mismatch(format!("cannot pull back {k}"), pos)),
    }
}

fn arity(name: &str, kinds: &[Kind], allowed: &[usize], pos: Pos) -> Result<(), Diagnostic> {
    if allowed.contains(&kinds.len()) {
        Ok(())
    } else {
        Err(mismatch(format!("{name} takes {allowed:?} arguments, found {}", kinds.len()), pos))
    }
}

fn list_len(k: &Kind, len: usize, what: &str, pos: Pos) -> Result<(), Diagnostic> {
    match k {
        Kind::List(n) if *n == len => Ok(()),
        Kind::List(n) => Err(err(ErrorCode::DimensionMismatch, format!("{what} needs {len} entries, found {n}"), pos)),
        other => Err(mismatch(format!("{what} must be a list, found {other}"), pos)),
    }
}

fn scalar(k: &Kind, what: &str, pos: Pos) -> Result<(), Diagnostic> {
    if *k == Kind::Scalar {
        Ok(())
    } else {
        Err(mismatch(format!("{what} must be a scalar, found {k}"), pos))
    }
}

fn function_space(k: &Kind) -> Option<Space> {
    match k {
        Kind::Function(s) | Kind::Form(s, 0) => Some(*s),
        _ => None,
    }
}

fn form_of(k: &Kind) -> Option<(Space, usize)> {
    match k {
        Kind::Function(s) => Some((*s, 0)),
        Kind::Form(s, r) => Some((*s, *r)),
        _ => None,
    }
}

pub fn call_kind(name: &str, k: &[Kind], ctx: Option<Space>, pos: Pos) -> Result<Kind, Diagnostic> {
    use Kind::*;
    let bad = |what: &str| mismatch(format!("{name}: {what}"), pos);
    match name {
        "d" => {
            arity(name, k, &[1], pos)?;
            match &k[0] {
                Function(s) => Ok(Form(*s, 1)),
                Form(s, r) => Ok(Form(*s, r + 1)),
                Dual(s, r) => Ok(Dual(*s, r.saturating_sub(1))),
                other => Err(bad(&format!("no coboundary on {other}"))),
            }
        }
        "pair" => {
            arity(name, k, &[2], pos)?;
            let (a, b) = (&k[0], &k[1]);
            let ok = |s: &Space, t: &Space| meet(s, t, pos).map(|_| Scalar);
            match (a, b) {
                (Density(t), Scalar) | (Scalar, Density(t)) | (Distribution(t), Scalar) | (Scalar, Distribution(t)) => {
                    let _ = t;
                    Ok(Scalar)
                }
                (Density(t), f) | (f, Density(t)) if function_space(f).is_some() => {
                    ok(&function_space(f).expect("checked"), t)
                }
                (Distribution(t), f) | (f, Distribution(t)) if function_space(f).is_some() => {
                    ok(&function_space(f).expect("checked"), t)
                }
                (Dual(_, q), Scalar) | (Scalar, Dual(_, q)) => {
                    same_degree(0, *q, pos)?;
                    Ok(Scalar)
                }
                (Dual(t, q), f) | (f, Dual(t, q)) if form_of(f).is_some() => {
                    let (s, r) = form_of(f).expect("checked");
                    same_degree(r, *q, pos)?;
                    ok(&s, t)
                }
                _ => Err(bad(&format!("cannot pair {a} with {b}"))),
            }
        }
        "kunneth" => {
            arity(name, k, &[2], pos)?;
            match (form_of(&k[0]), form_of(&k[1])) {
                (Some((s, r)), Some((t, q))) => Ok(Form(s.product(&t), r + q)),
                _ => Err(bad("needs two forms")),
            }
        }
        "boxtimes" => {
            arity(name, k, &[2], pos)?;
            match (&k[0], &k[1]) {
                (Dual(s, r), Dual(t, q)) => Ok(Dual(s.product(t), r + q)),
                _ => Err(bad("needs two dual forms")),
            }
        }
        "jet" | "invert" => {
            arity(name, k, &[3], pos)?;
            let s = function_space(&k[0]).ok_or_else(|| bad("needs a function"))?;
            list_len(&k[1], s.n, "basepoint", pos)?;
            scalar(&k[2], "order", pos)?;
            Ok(if name == "jet" { Jet(s) } else { Function(s) })
        }
        "value" => {
            arity(name, k, &[2], pos)?;
            let s = function_space(&k[0]).ok_or_else(|| bad("needs a function"))?;
            list_len(&k[1], s.n, "point", pos)?;
            Ok(Scalar)
        }
        "pullback" => {
            arity(name, k, &[2], pos)?;
            pullback_kind(&k[0], &k[1], pos)
        }
        "compose" => {
            arity(name, k, &[2], pos)?;
            match (&k[0], &k[1]) {
                (Morphism(b, c), Morphism(a, b2)) => {
                    meet(b, b2, pos)?;
                    Ok(Morphism(*a, *c))
                }
                _ => Err(bad("needs two morphisms")),
            }
        }
        "ev" => {
            arity(name, k, &[1, 2], pos)?;
            let s = Checker::ambient(ctx, pos)?;
            list_len(&k[0], s.n, "basepoint", pos)?;
            if let Some(idx) = k.get(1) {
                list_len(idx, s.nvars(), "multi-index", pos)?;
            }
            Ok(Distribution(s))
        }
        "apply" | "comm" => {
            arity(name, k, &[2], pos)?;
            match (&k[0], &k[1]) {
                (DiffOp(s), f) if function_space(f).is_some() || *f == Scalar => {
                    if let Some(t) = function_space(f) {
                        meet(s, &t, pos)?;
                    }
                    Ok(if name == "apply" { Function(*s) } else { DiffOp(*s) })
                }
                _ => Err(bad("needs a differential operator and a function")),
            }
        }
        "order" => {
            arity(name, k, &[1], pos)?;
            match &k[0] {
                DiffOp(_) => Ok(Scalar),
                _ => Err(bad("needs a differential operator")),
            }
        }
        "order_check" => {
            arity(name, k, &[2], pos)?;
            match &k[0] {
                DiffOp(_) => {
                    scalar(&k[1], "bound", pos)?;
                    Ok(Bool)
                }
                _ => Err(bad("needs a differential operator")),
            }
        }
        "radial" | "homotopy" => {
            arity(name, k, &[1], pos)?;
            match form_of(&k[0]) {
                Some((s, r)) => Ok(Form(s, r.saturating_sub(1))),
                None => Err(bad("needs a form")),
            }
        }
        "formal_homotopy" => {
            arity(name, k, &[1], pos)?;
            match form_of(&k[0]) {
                Some((s, r)) if s.n == 0 && s.k == 1 => Ok(Form(s, r.saturating_sub(1))),
                Some((s, _)) => Err(err(ErrorCode::SpaceMismatch, format!("formal_homotopy needs (0,1), found {s}"), pos)),
                None => Err(bad("needs a form")),
            }
        }
        "cs_homotopy" => {
            if k.is_empty() {
                return Err(bad("needs a dual form"));
            }
            let Dual(s, r) = &k[0] else {
                return Err(bad("needs a dual form"));
            };
            for g in &k[1..] {
                if !matches!(g, Pre(_)) {
                    return Err(bad(&format!("profiles must be bumps, found {g}")));
                }
            }
            Ok(Dual(*s, if *r < s.nvars() { r + 1 } else { *r }))
        }
        "zeta" => {
            arity(name, k, &[1], pos)?;
            match &k[0] {
                Dual(_, 0) => Ok(Scalar),
                Dual(_, r) => Err(err(ErrorCode::DegreeMismatch, format!("zeta needs degree 0, found {r}"), pos)),
                other => Err(bad(&format!("needs a dual form, found {other}"))),
            }
        }
        "density" => {
            arity(name, k, &[1], pos)?;
            match &k[0] {
                Pre(s) | Density(s) => Ok(Density(*s)),
                Scalar => Ok(Density(Checker::ambient(ctx, pos)?)),
                other => Err(bad(&format!("needs a density expression, found {other}"))),
            }
        }
        "top" => {
            arity(name, k, &[1], pos)?;
            match &k[0] {
                Density(s) => Ok(Dual(*s, 0)),
                other => Err(bad(&format!("needs a density, found {other}"))),
            }
        }
        "norm" => Err(bad("'norm' is only meaningful inside bump(...)")),
        _ => Err(err(ErrorCode::UnboundIdentifier, format!("unknown function '{name}'"), pos)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse;
    use super::*;

    fn check(src: &str) -> Result<(), Diagnostic> {
        Checker::new(Config::default()).check_script(&parse(src).unwrap())
    }

    #[test]
    fn atoms() {
        assert_eq!(atom("x12"), Some(Atom::X(12)));
        assert_eq!(atom("dystar2"), Some(Atom::DyStar(2)));
        assert_eq!(atom("del_y1"), Some(Atom::DelY(1)));
        assert_eq!(atom("x0"), None);
        assert_eq!(atom("xy"), None);
    }

    #[test]
    fn kinds_are_static() {
        let mut c = Checker::new(Config::default());
        c.check_script(&parse("space (2,1,3); let f = x1^2*y1; let w = d(f)").unwrap()).unwrap();
        assert_eq!(c.env["f"], Kind::Function(Space::new(2, 1, 3)));
        assert_eq!(c.env["w"], Kind::Form(Space::new(2, 1, 3), 1));
    }

    #[test]
    fn error_codes() {
        assert_eq!(check("x1").unwrap_err().code, ErrorCode::MissingConfiguration);
        assert_eq!(check("space (1,0); g").unwrap_err().code, ErrorCode::UnboundIdentifier);
        assert_eq!(check("space (1,0); y1").unwrap_err().code, ErrorCode::UnboundIdentifier);
        assert_eq!(check("space (1,1); dx1 + x1").unwrap_err().code, ErrorCode::DegreeMismatch);
        assert_eq!(check("space (1,1); dx1 * dy1").unwrap_err().code, ErrorCode::TypeMismatch);
        assert_eq!(
            check("space (1,1); let f = x1; space (2,0); f + x1").unwrap_err().code,
            ErrorCode::SpaceMismatch
        );
        assert_eq!(check("space (1,1); value(x1, [1, 2])").unwrap_err().code, ErrorCode::DimensionMismatch);
        assert_eq!(check("check nope").unwrap_err().code, ErrorCode::InvalidArgument);
    }

    #[test]
    fn target_slots() {
        let t = Space::new(2, 1, 3);
        assert_eq!(target_slot("x'2", t), Some(1));
        assert_eq!(target_slot("y'1", t), Some(2));
        assert_eq!(target_slot("y'2", t), None);
        assert_eq!(target_slot("z'1", t), None);
    }
}
