//! The subset of Graphviz DOT written by the diagram exporter: one digraph
//! whose body holds `key="value"` attributes, nodes and edges, all with
//! quoted identifiers.

use std::fmt::Write as _;

use crate::CliError;

pub type Attrs = Vec<(String, String)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DotStmt {
    Attr(String, String),
    Node(String, Attrs),
    Edge(String, String, Attrs),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotGraph {
    pub name: String,
    pub stmts: Vec<DotStmt>,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn render_attrs(attrs: &Attrs) -> String {
    let parts: Vec<String> = attrs
        .iter()
        .map(|(k, v)| format!("{k}={}", quote(v)))
        .collect();
    parts.join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Id(String),
    Arrow,
    Open,
    Close,
    LBracket,
    RBracket,
    Equals,
    Comma,
    Semi,
}

fn tokenize(s: &str) -> Result<Vec<Token>, CliError> {
    let bad = |m: String| CliError::Input(format!("invalid DOT: {m}"));
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '{' => out.push(Token::Open),
            '}' => out.push(Token::Close),
            '[' => out.push(Token::LBracket),
            ']' => out.push(Token::RBracket),
            '=' => out.push(Token::Equals),
            ',' => out.push(Token::Comma),
            ';' => out.push(Token::Semi),
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                out.push(Token::Arrow);
            }
            '"' => {
                let mut id = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some(e) => id.push(e),
                            None => return Err(bad("unterminated escape".into())),
                        },
                        Some('"') => break,
                        Some(ch) => id.push(ch),
                        None => return Err(bad("unterminated string".into())),
                    }
                }
                out.push(Token::Id(id));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut id = c.to_string();
                while let Some(&n) = chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' || n == '.' {
                        id.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Id(id));
            }
            other => return Err(bad(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<(), CliError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            got => Err(CliError::Input(format!(
                "invalid DOT: expected {want:?}, found {got:?}"
            ))),
        }
    }

    fn id(&mut self) -> Result<String, CliError> {
        match self.next() {
            Some(Token::Id(s)) => Ok(s),
            got => Err(CliError::Input(format!(
                "invalid DOT: expected identifier, found {got:?}"
            ))),
        }
    }

    fn attrs(&mut self) -> Result<Attrs, CliError> {
        let mut out = Vec::new();
        if self.peek() != Some(&Token::LBracket) {
            return Ok(out);
        }
        self.next();
        while self.peek() != Some(&Token::RBracket) {
            let k = self.id()?;
            self.expect(Token::Equals)?;
            out.push((k, self.id()?));
            if self.peek() == Some(&Token::Comma) {
                self.next();
            }
        }
        self.next();
        Ok(out)
    }
}

impl DotGraph {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", quote(&self.name));
        for stmt in &self.stmts {
            let _ = match stmt {
                DotStmt::Attr(k, v) => writeln!(out, "  {k}={};", quote(v)),
                DotStmt::Node(id, attrs) => {
                    writeln!(out, "  {} [{}];", quote(id), render_attrs(attrs))
                }
                DotStmt::Edge(a, b, attrs) => writeln!(
                    out,
                    "  {} -> {} [{}];",
                    quote(a),
                    quote(b),
                    render_attrs(attrs)
                ),
            };
        }
        out.push_str("}\n");
        out
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        let mut p = Parser {
            tokens: tokenize(s)?,
            pos: 0,
        };
        match p.id()?.as_str() {
            "digraph" => {}
            other => {
                return Err(CliError::Input(format!(
                    "invalid DOT: expected digraph, found {other}"
                )))
            }
        }
        let name = match p.peek() {
            Some(Token::Id(_)) => p.id()?,
            _ => String::new(),
        };
        p.expect(Token::Open)?;
        let mut stmts = Vec::new();
        loop {
            match p.peek() {
                Some(Token::Close) => {
                    p.next();
                    break;
                }
                Some(Token::Semi) => {
                    p.next();
                }
                Some(Token::Id(_)) => {
                    let a = p.id()?;
                    match p.peek() {
                        Some(Token::Equals) => {
                            p.next();
                            stmts.push(DotStmt::Attr(a, p.id()?));
                        }
                        Some(Token::Arrow) => {
                            p.next();
                            let b = p.id()?;
                            stmts.push(DotStmt::Edge(a, b, p.attrs()?));
                        }
                        _ => stmts.push(DotStmt::Node(a, p.attrs()?)),
                    }
                }
                other => {
                    return Err(CliError::Input(format!(
                        "invalid DOT: unexpected {other:?}"
                    )))
                }
            }
        }
        if p.peek().is_some() {
            return Err(CliError::Input("invalid DOT: trailing input".into()));
        }
        Ok(DotGraph { name, stmts })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_what_it_renders() {
        let g = DotGraph {
            name: "verma-point".into(),
            stmts: vec![
                DotStmt::Attr("t".into(), "2".into()),
                DotStmt::Node("b0".into(), vec![("label".into(), "m_0".into())]),
                DotStmt::Node("b-1".into(), vec![("label".into(), "a \"q\"".into())]),
                DotStmt::Edge(
                    "b1".into(),
                    "b0".into(),
                    vec![("op".into(), "E".into()), ("coeff".into(), "-3/2".into())],
                ),
            ],
        };
        let text = g.render();
        assert_eq!(DotGraph::parse(&text).unwrap(), g);
    }

    #[test]
    fn accepts_unquoted_ids_and_rejects_garbage() {
        let g = DotGraph::parse("digraph g { b0 [label=m_0]; b0 -> b1 [op=F, coeff=1] }").unwrap();
        assert_eq!(g.stmts.len(), 2);
        assert!(DotGraph::parse("graph g { }").is_err());
        assert!(DotGraph::parse("digraph g { b0 -> }").is_err());
        assert!(DotGraph::parse("digraph g { \"b0 }").is_err());
    }
}
