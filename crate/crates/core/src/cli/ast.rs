use num_bigint::BigInt;

use super::Pos;

#[derive(Clone, Debug, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub enum StmtKind {
    /// `space (n,k[,order]);` sets the ambient space of later atoms.
    Space(SpaceLit),
    Let { name: String, value: Expr },
    /// A bare expression whose value is reported.
    Show(Expr),
    Check { suite: String, sub: Option<String>, params: Vec<(String, Param)> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceLit {
    pub n: usize,
    pub k: usize,
    pub order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Int(u64),
    Tuple(Vec<u64>),
    Word(String),
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Wedge,
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(String, Vec<Expr>),
    /// `phi#(g)`.
    Pullback(Box<Expr>, Box<Expr>),
    List(Vec<Expr>),
    Morphism(MorphismDef),
}

#[derive(Clone, Debug)]
pub struct MorphismDef {
    pub src: SpaceLit,
    pub dst: (usize, usize),
    /// Assignments `x'i = ...` and `y'j = ...` in source variables.
    pub maps: Vec<(String, Expr)>,
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }
}
