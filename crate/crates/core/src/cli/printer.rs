//! Canonical text for scripts: one statement per line, minimal parentheses.

use super::ast::{BinOp, Expr, ExprKind, Param, Script, SpaceLit, Stmt, StmtKind};

pub fn print_script(script: &Script) -> String {
    let mut out = String::new();
    for s in &script.stmts {
        out.push_str(&print_stmt(s));
        out.push('\n');
    }
    out
}

pub fn print_stmt(stmt: &Stmt) -> String {
    match &stmt.kind {
        StmtKind::Space(s) => format!("space {};", space_lit(s)),
        StmtKind::Let { name, value } => format!("let {name} = {};", print_expr(value)),
        StmtKind::Show(e) => format!("{};", print_expr(e)),
        StmtKind::Check { suite, sub, params } => {
            let mut s = format!("check {suite}");
            if let Some(sub) = sub {
                s.push(' ');
                s.push_str(sub);
            }
            for (k, v) in params {
                s.push_str(&format!(" {k}={}", param(v)));
            }
            s.push(';');
            s
        }
    }
}

fn param(p: &Param) -> String {
    match p {
        Param::Int(n) => n.to_string(),
        Param::Word(w) => w.clone(),
        Param::Tuple(items) => {
            let parts: Vec<String> = items.iter().map(u64::to_string).collect();
            format!("({})", parts.join(","))
        }
    }
}

fn space_lit(s: &SpaceLit) -> String {
    match s.order {
        Some(o) => format!("({},{},{})", s.n, s.k, o),
        None => format!("({},{})", s.n, s.k),
    }
}

const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const WEDGE: u8 = 4;
const POW: u8 = 5;
const POSTFIX: u8 = 6;
const ATOM: u8 = 7;

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => ADD,
        ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => MUL,
        ExprKind::Neg(_) => NEG,
        ExprKind::Binary(BinOp::Wedge, ..) => WEDGE,
        ExprKind::Pow(..) => POW,
        ExprKind::Pullback(..) => POSTFIX,
        _ => ATOM,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    let s = print_expr(e);
    if precedence(e) < min {
        format!("({s})")
    } else {
        s
    }
}

pub fn print_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Int(n) => n.to_string(),
        ExprKind::Var(v) => v.clone(),
        ExprKind::Neg(inner) => format!("-{}", wrap(inner, NEG)),
        ExprKind::Binary(op, l, r) => {
            let (p, sym) = match op {
                BinOp::Add => (ADD, " + "),
                BinOp::Sub => (ADD, " - "),
                BinOp::Mul => (MUL, "*"),
                BinOp::Div => (MUL, "/"),
                BinOp::Wedge => (WEDGE, "^^"),
            };
            let right_min = if p == WEDGE { POW } else { p + 1 };
            format!("{}{sym}{}", wrap(l, p), wrap(r, right_min))
        }
        ExprKind::Pow(base, n) => format!("{}^{n}", wrap(base, POSTFIX)),
        ExprKind::Pullback(phi, arg) => format!("{}#({})", wrap(phi, POSTFIX), print_expr(arg)),
        ExprKind::Call(name, args) => format!("{name}({})", list(args)),
        ExprKind::List(items) => format!("[{}]", list(items)),
        ExprKind::Morphism(m) => {
            let maps: Vec<String> = m.maps.iter().map(|(k, v)| format!("{k} = {};", print_expr(v))).collect();
            format!(
                "morphism src={} dst=({},{}) {{ {} }}",
                space_lit(&m.src),
                m.dst.0,
                m.dst.1,
                maps.join(" ")
            )
        }
    }
}

fn list(items: &[Expr]) -> String {
    items.iter().map(print_expr).collect::<Vec<_>>().join(", ")
}
