use num_traits::ToPrimitive;

use super::ast::{BinOp, Expr, ExprKind, MorphismDef, Param, Script, SpaceLit, Stmt, StmtKind};
use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, Pos};
use crate::ErrorCode;

const KEYWORDS: [&str; 4] = ["space", "let", "check", "morphism"];

pub fn parse(src: &str) -> Result<Script, Diagnostic> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, at: 0 };
    p.script()
}

/// Parses a single expression (used by the REPL and the C ABI).
pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, at: 0 };
    p.skip_newlines();
    let e = p.expr()?;
    p.skip_newlines();
    if !matches!(p.peek(), Tok::Eof | Tok::Semi) {
        return Err(p.unexpected("end of expression"));
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

fn syntax(msg: impl Into<String>, pos: Pos) -> Diagnostic {
    Diagnostic::new(ErrorCode::Syntax, msg, Some(pos))
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.at + k).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        syntax(format!("expected {wanted}, found {}", self.peek().describe()), self.pos())
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Pos, Diagnostic> {
        if self.peek() == &tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    /// Expects the closing bracket of a group opened at `open`.
    fn close(&mut self, tok: Tok, open: Pos, text: &str) -> Result<(), Diagnostic> {
        if self.eat(&tok) {
            return Ok(());
        }
        if self.peek() == &Tok::Eof {
            return Err(syntax(format!("unclosed '{text}'"), open));
        }
        Err(self.unexpected(&format!("closing for '{text}' opened at {open}")))
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Semi) {
            self.bump();
        }
    }

    fn ident(&mut self, wanted: &str) -> Result<(String, Pos), Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.bump().pos;
                Ok((s, pos))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn natural(&mut self) -> Result<u64, Diagnostic> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let pos = self.bump().pos;
                n.to_u64().ok_or_else(|| syntax("number too large", pos))
            }
            _ => Err(self.unexpected("a natural number")),
        }
    }

    fn script(&mut self) -> Result<Script, Diagnostic> {
        let mut stmts = Vec::new();
        loop {
            self.skip_newlines();
            if self.peek() == &Tok::Eof {
                return Ok(Script { stmts });
            }
            stmts.push(self.stmt()?);
            match self.peek() {
                Tok::Semi | Tok::Newline | Tok::Eof => {}
                _ => return Err(self.unexpected("';' or end of line")),
            }
        }
    }

    fn stmt(&mut self) -> Result<Stmt, Diagnostic> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Ident(w) if w == "space" && self.peek_at(1) == &Tok::LParen => {
                self.bump();
                StmtKind::Space(self.space_lit(true)?)
            }
            Tok::Ident(w) if w == "let" => {
                self.bump();
                let (name, npos) = self.ident("a name")?;
                if KEYWORDS.contains(&name.as_str()) || super::types::is_reserved(&name) {
                    return Err(syntax(format!("'{name}' is reserved"), npos));
                }
                self.expect(Tok::Eq, "'='")?;
                StmtKind::Let { name, value: self.expr()? }
            }
            Tok::Ident(w) if w == "check" => {
                self.bump();
                self.check()?
            }
            _ => StmtKind::Show(self.expr()?),
        };
        Ok(Stmt { kind, pos })
    }

    fn check(&mut self) -> Result<StmtKind, Diagnostic> {
        let (suite, _) = self.ident("a suite name")?;
        let mut sub = None;
        if let Tok::Ident(_) = self.peek() {
            if self.peek_at(1) != &Tok::Eq {
                sub = Some(self.ident("a sub-suite")?.0);
            }
        }
        let mut params = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            let (key, _) = self.ident("a parameter")?;
            self.expect(Tok::Eq, "'='")?;
            let value = match self.peek().clone() {
                Tok::Int(_) => Param::Int(self.natural()?),
                Tok::Ident(w) => {
                    self.bump();
                    Param::Word(w)
                }
                Tok::LParen => {
                    let open = self.bump().pos;
                    let mut items = vec![self.natural()?];
                    while self.eat(&Tok::Comma) {
                        items.push(self.natural()?);
                    }
                    self.close(Tok::RParen, open, "(")?;
                    Param::Tuple(items)
                }
                _ => return Err(self.unexpected("a parameter value")),
            };
            params.push((key, value));
        }
        Ok(StmtKind::Check { suite, sub, params })
    }

    /// `(n,k[,order])`; the order is allowed only when `with_order`.
    fn space_lit(&mut self, with_order: bool) -> Result<SpaceLit, Diagnostic> {
        let open = self.expect(Tok::LParen, "'('")?;
        let n = self.natural()? as usize;
        self.expect(Tok::Comma, "','")?;
        let k = self.natural()? as usize;
        let mut order = None;
        if with_order && self.eat(&Tok::Comma) {
            order = Some(self.natural()? as u32);
        }
        self.close(Tok::RParen, open, "(")?;
        Ok(SpaceLit { n, k, order })
    }

    pub fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.bump().pos;
            let rhs = self.term()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let pos = self.bump().pos;
            let rhs = self.unary()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        if self.peek() == &Tok::Minus {
            let pos = self.bump().pos;
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), pos));
        }
        self.wedge()
    }

    fn wedge(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.power()?;
        while matches!(self.peek(), Tok::Wedge | Tok::Caret) {
            let pos = self.bump().pos;
            let rhs = self.power()?;
            lhs = Expr::new(ExprKind::Binary(BinOp::Wedge, Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let mut base = self.postfix()?;
        while self.peek() == &Tok::Caret && matches!(self.peek_at(1), Tok::Int(_)) {
            let pos = self.bump().pos;
            let e = self.natural()?;
            let e = u32::try_from(e).map_err(|_| syntax("exponent too large", pos))?;
            base = Expr::new(ExprKind::Pow(Box::new(base), e), pos);
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr, Diagnostic> {
        let mut e = self.primary()?;
        while self.peek() == &Tok::Hash {
            let pos = self.bump().pos;
            let open = self.expect(Tok::LParen, "'(' after '#'")?;
            let arg = self.expr()?;
            self.close(Tok::RParen, open, "(")?;
            e = Expr::new(ExprKind::Pullback(Box::new(e), Box::new(arg)), pos);
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::new(ExprKind::Int(n), pos))
            }
            Tok::Ident(name) if name == "morphism" => {
                self.bump();
                self.morphism(pos)
            }
            Tok::Ident(name) => {
                self.bump();
                if self.peek() == &Tok::LParen {
                    let open = self.bump().pos;
                    let args = self.args(Tok::RParen, open, "(")?;
                    Ok(Expr::new(ExprKind::Call(name, args), pos))
                } else {
                    Ok(Expr::new(ExprKind::Var(name), pos))
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.close(Tok::RParen, pos, "(")?;
                Ok(e)
            }
            Tok::LBracket => {
                self.bump();
                let items = self.args(Tok::RBracket, pos, "[")?;
                Ok(Expr::new(ExprKind::List(items), pos))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn args(&mut self, close: Tok, open: Pos, text: &str) -> Result<Vec<Expr>, Diagnostic> {
        let mut out = Vec::new();
        if self.eat(&close) {
            return Ok(out);
        }
        loop {
            if self.peek() == &Tok::Eof {
                return Err(syntax(format!("unclosed '{text}'"), open));
            }
            out.push(self.expr()?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.close(close, open, text)?;
            return Ok(out);
        }
    }

    fn morphism(&mut self, pos: Pos) -> Result<Expr, Diagnostic> {
        let mut src = None;
        let mut dst = None;
        for _ in 0..2 {
            let (key, kpos) = self.ident("'src' or 'dst'")?;
            self.expect(Tok::Eq, "'='")?;
            match key.as_str() {
                "src" if src.is_none() => src = Some(self.space_lit(true)?),
                "dst" if dst.is_none() => {
                    let d = self.space_lit(false)?;
                    dst = Some((d.n, d.k));
                }
                _ => return Err(syntax(format!("unexpected morphism field '{key}'"), kpos)),
            }
        }
        let open = self.expect(Tok::LBrace, "'{'")?;
        let mut maps = Vec::new();
        loop {
            while self.eat(&Tok::Semi) {}
            if self.eat(&Tok::RBrace) {
                break;
            }
            if self.peek() == &Tok::Eof {
                return Err(syntax("unclosed '{'", open));
            }
            let (name, _) = self.ident("an assignment such as x'1 = ...")?;
            self.expect(Tok::Eq, "'='")?;
            maps.push((name, self.expr()?));
            if !matches!(self.peek(), Tok::Semi | Tok::RBrace) {
                return Err(self.unexpected("';' or '}'"));
            }
        }
        let (src, dst) = (src.expect("two fields"), dst.expect("two fields"));
        Ok(Expr::new(ExprKind::Morphism(MorphismDef { src, dst, maps }), pos))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unclosed_paren_points_at_the_paren() {
        let err = parse("let f = x1^2 * y1;\nd(f").unwrap_err();
        assert_eq!(err.code, ErrorCode::Syntax);
        assert_eq!(err.pos, Some(Pos { line: 2, col: 2 }));
    }

    #[test]
    fn caret_is_power_before_integers_and_wedge_otherwise() {
        let s = parse("x1^2; dx1^dy1").unwrap();
        assert!(matches!(&s.stmts[0].kind, StmtKind::Show(Expr { kind: ExprKind::Pow(..), .. })));
        assert!(matches!(
            &s.stmts[1].kind,
            StmtKind::Show(Expr { kind: ExprKind::Binary(BinOp::Wedge, ..), .. })
        ));
    }

    #[test]
    fn check_statement() {
        let s = parse("check poincare omega space=(2,1) order=3 samples=50").unwrap();
        match &s.stmts[0].kind {
            StmtKind::Check { suite, sub, params } => {
                assert_eq!(suite, "poincare");
                assert_eq!(sub.as_deref(), Some("omega"));
                assert_eq!(params[0], ("space".to_string(), Param::Tuple(vec![2, 1])));
                assert_eq!(params[2], ("samples".to_string(), Param::Int(50)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn morphism_literal() {
        let s = parse("let phi = morphism src=(1,1,3) dst=(1,1) { x'1 = x1 + y1^2; y'1 = 2*y1 }").unwrap();
        match &s.stmts[0].kind {
            StmtKind::Let { value: Expr { kind: ExprKind::Morphism(m), .. }, .. } => {
                assert_eq!(m.src.order, Some(3));
                assert_eq!(m.maps.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reserved_names() {
        assert_eq!(parse("let x1 = 3").unwrap_err().code, ErrorCode::Syntax);
        assert_eq!(parse("let d = 3").unwrap_err().code, ErrorCode::Syntax);
    }
}
