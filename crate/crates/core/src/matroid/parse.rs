//! Text format for matroid expressions.
//!
//! ```text
//! (dual (graphic "g1.graph" (contract-class v0 v1 v2)))
//! (partition (block e1 e2 : 1) (block e3 : 1))
//! (uniform 2 (e1 e2 e3 e4))
//! (free (e1 e2))
//! (loops (e5))
//! (dsum M1 M2)
//! (delete M (e1))
//! (contract M (e2))
//! (mode cofinitary M)
//! ```
//!
//! `;` starts a comment running to the end of the line.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{Block, GraphicMatroid, MatroidExpr, Node};
use crate::element::{ElementSet, GroundSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matroid::Mode;

/// Resolves a graph file name to its contents.
pub type GraphLoader<'a> = dyn FnMut(&str) -> Result<String> + 'a;

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug)]
enum Sx {
    Atom(String, Pos),
    Str(String, Pos),
    List(Vec<Sx>, Pos),
}

impl Sx {
    fn pos(&self) -> Pos {
        match self {
            Sx::Atom(_, p) | Sx::Str(_, p) | Sx::List(_, p) => *p,
        }
    }
}

fn err(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_space(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn parse(&mut self) -> Result<Sx> {
        self.skip_space();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => Err(err(start, "unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_space();
                    match self.chars.peek() {
                        None => return Err(err(start, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sx::List(items, start));
                        }
                        Some(_) => items.push(self.parse()?),
                    }
                }
            }
            Some(')') => Err(err(start, "unexpected `)`")),
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(err(start, "unterminated string")),
                        Some('"') => return Ok(Sx::Str(s, start)),
                        Some(c) => s.push(c),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' || c == '"' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sx::Atom(s, start))
            }
        }
    }
}

struct Builder<'a, 'b> {
    ground: &'a mut GroundSet,
    loader: &'a mut GraphLoader<'b>,
}

impl Builder<'_, '_> {
    fn element_list(&mut self, sx: &Sx) -> Result<ElementSet> {
        let Sx::List(items, _) = sx else {
            return Err(err(sx.pos(), "expected a parenthesised element list"));
        };
        let mut set = ElementSet::new();
        for item in items {
            match item {
                Sx::Atom(a, _) if a != ":" => {
                    set.insert(self.ground.intern(a));
                }
                other => return Err(err(other.pos(), "expected an element label")),
            }
        }
        Ok(set)
    }

    fn expr(&mut self, sx: &Sx) -> Result<MatroidExpr> {
        let Sx::List(items, pos) = sx else {
            return Err(err(sx.pos(), "expected `(`"));
        };
        let pos = *pos;
        let Some(Sx::Atom(head, _)) = items.first() else {
            return Err(err(pos, "expected a matroid constructor name"));
        };
        let args = &items[1..];
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(pos, format!("`{head}` takes {n} argument(s), got {}", args.len())))
            }
        };
        let at = |e: Error| match e {
            Error::Parse { .. } => e,
            other => err(pos, other.to_string()),
        };
        match head.as_str() {
            "graphic" => {
                let Some(Sx::Str(file, fpos)) = args.first() else {
                    return Err(err(pos, "`graphic` expects a quoted graph file name"));
                };
                let text = (self.loader)(file).map_err(|e| err(*fpos, format!("cannot load `{file}`: {e}")))?;
                let graph = Graph::parse(&text, self.ground).map_err(|e| match e {
                    Error::Parse { line, column, message } => {
                        err(*fpos, format!("in `{file}` at {line}:{column}: {message}"))
                    }
                    other => err(*fpos, other.to_string()),
                })?;
                let mut classes = Vec::new();
                for arg in &args[1..] {
                    let Sx::List(cls, cpos) = arg else {
                        return Err(err(arg.pos(), "expected `(contract-class v ...)`"));
                    };
                    match cls.first() {
                        Some(Sx::Atom(h, _)) if h == "contract-class" => {}
                        _ => return Err(err(*cpos, "expected `(contract-class v ...)`")),
                    }
                    let mut class = Vec::new();
                    for v in &cls[1..] {
                        let Sx::Atom(label, vpos) = v else {
                            return Err(err(v.pos(), "expected a vertex label"));
                        };
                        let vertex = graph
                            .vertex_by_label(label)
                            .ok_or_else(|| err(*vpos, format!("unknown vertex `{label}` in `{file}`")))?;
                        class.push(vertex);
                    }
                    classes.push(class);
                }
                MatroidExpr::graphic(Arc::new(graph), classes).map_err(at)
            }
            "partition" => {
                let mut blocks = Vec::new();
                for arg in args {
                    let Sx::List(parts, bpos) = arg else {
                        return Err(err(arg.pos(), "expected `(block e ... : capacity)`"));
                    };
                    let bad = || err(*bpos, "expected `(block e ... : capacity)`");
                    match parts.first() {
                        Some(Sx::Atom(h, _)) if h == "block" => {}
                        _ => return Err(bad()),
                    }
                    let n = parts.len();
                    if n < 3 {
                        return Err(bad());
                    }
                    match (&parts[n - 2], &parts[n - 1]) {
                        (Sx::Atom(colon, _), Sx::Atom(cap, cpos)) if colon == ":" => {
                            let capacity = cap
                                .parse()
                                .map_err(|_| err(*cpos, format!("bad capacity `{cap}`")))?;
                            let mut elements = ElementSet::new();
                            for p in &parts[1..n - 2] {
                                match p {
                                    Sx::Atom(a, _) if a != ":" => {
                                        elements.insert(self.ground.intern(a));
                                    }
                                    other => return Err(err(other.pos(), "expected an element label")),
                                }
                            }
                            blocks.push(Block { elements, capacity });
                        }
                        _ => return Err(bad()),
                    }
                }
                MatroidExpr::partition(blocks).map_err(at)
            }
            "uniform" => {
                arity(2)?;
                let Sx::Atom(k, kpos) = &args[0] else {
                    return Err(err(args[0].pos(), "expected a rank"));
                };
                let k = k.parse().map_err(|_| err(*kpos, format!("bad rank `{k}`")))?;
                Ok(MatroidExpr::uniform(k, self.element_list(&args[1])?))
            }
            "free" => {
                arity(1)?;
                Ok(MatroidExpr::free(self.element_list(&args[0])?))
            }
            "loops" => {
                arity(1)?;
                Ok(MatroidExpr::loops(self.element_list(&args[0])?))
            }
            "dual" => {
                arity(1)?;
                Ok(self.expr(&args[0])?.dual())
            }
            "dsum" => {
                let children = args.iter().map(|a| self.expr(a)).collect::<Result<Vec<_>>>()?;
                MatroidExpr::direct_sum(children).map_err(at)
            }
            "delete" | "contract" => {
                arity(2)?;
                let child = self.expr(&args[0])?;
                let x = self.element_list(&args[1])?;
                if head == "delete" {
                    child.delete(&x).map_err(at)
                } else {
                    child.contract(&x).map_err(at)
                }
            }
            "mode" => {
                arity(2)?;
                let mode = match &args[0] {
                    Sx::Atom(m, _) if m == "finitary" => Mode::Finitary,
                    Sx::Atom(m, _) if m == "cofinitary" => Mode::Cofinitary,
                    other => return Err(err(other.pos(), "expected `finitary` or `cofinitary`")),
                };
                Ok(self.expr(&args[1])?.with_mode(mode))
            }
            other => Err(err(pos, format!("unknown matroid constructor `{other}`"))),
        }
    }
}

/// Parses one matroid expression, registering element labels in `ground`.
/// Graph files named by `graphic` nodes are read through `loader`.
pub fn parse_matroid(text: &str, ground: &mut GroundSet, loader: &mut GraphLoader<'_>) -> Result<MatroidExpr> {
    let mut lexer = Lexer {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, column: 1 },
    };
    let sx = lexer.parse()?;
    lexer.skip_space();
    if lexer.chars.peek().is_some() {
        return Err(err(lexer.pos, "trailing input after the expression"));
    }
    Builder { ground, loader }.expr(&sx)
}

/// Writes `m` in the text format. `graph_name` chooses the file name for
/// each graphic leaf; the caller is responsible for writing those files.
pub fn to_text(m: &MatroidExpr, ground: &GroundSet, graph_name: &mut dyn FnMut(&GraphicMatroid) -> String) -> String {
    let mut out = String::new();
    write_expr(&mut out, m, ground, graph_name);
    out
}

fn write_list(out: &mut String, set: &ElementSet, ground: &GroundSet) {
    let _ = write!(out, "({})", ground.format_set(set));
}

fn write_expr(out: &mut String, m: &MatroidExpr, ground: &GroundSet, graph_name: &mut dyn FnMut(&GraphicMatroid) -> String) {
    if let Some(mode) = m.mode_override() {
        let _ = write!(out, "(mode {mode} ");
    }
    match m.node() {
        Node::Graphic(g) => {
            let _ = write!(out, "(graphic \"{}\"", graph_name(g));
            for class in g.classes() {
                out.push_str(" (contract-class");
                for &v in class {
                    let _ = write!(out, " {}", g.graph().vertex_label(v));
                }
                out.push(')');
            }
            out.push(')');
        }
        Node::Partition(blocks) => {
            out.push_str("(partition");
            for b in blocks {
                let _ = write!(out, " (block {} : {})", ground.format_set(&b.elements), b.capacity);
            }
            out.push(')');
        }
        Node::Uniform(k) => {
            let _ = write!(out, "(uniform {k} ");
            write_list(out, m.ground(), ground);
            out.push(')');
        }
        Node::Free | Node::Loops => {
            out.push_str(if matches!(m.node(), Node::Free) { "(free " } else { "(loops " });
            write_list(out, m.ground(), ground);
            out.push(')');
        }
        Node::Dual(c) => {
            out.push_str("(dual ");
            write_expr(out, c, ground, graph_name);
            out.push(')');
        }
        Node::Delete(c, x) | Node::Contract(c, x) => {
            out.push_str(if matches!(m.node(), Node::Delete(..)) { "(delete " } else { "(contract " });
            write_expr(out, c, ground, graph_name);
            out.push(' ');
            write_list(out, x, ground);
            out.push(')');
        }
        Node::DirectSum(cs) => {
            out.push_str("(dsum");
            for c in cs {
                out.push(' ');
                write_expr(out, c, ground, graph_name);
            }
            out.push(')');
        }
    }
    if m.mode_override().is_some() {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G1: &str = "p edge 3 3\ne v0 v1 a\ne v1 v2 b\ne v2 v0 c\n";

    fn load(name: &str) -> Result<String> {
        match name {
            "g1.graph" => Ok(G1.to_string()),
            _ => Err(Error::Input(format!("no such file {name}"))),
        }
    }

    fn parse(text: &str) -> Result<(MatroidExpr, GroundSet)> {
        let mut ground = GroundSet::new();
        let m = parse_matroid(text, &mut ground, &mut load)?;
        Ok((m, ground))
    }

    #[test]
    fn parses_every_constructor() {
        let (m, g) = parse("(dual (graphic \"g1.graph\"))").unwrap();
        assert_eq!(m.full_rank(), 1);
        assert_eq!(g.len(), 3);

        let (m, g) = parse("(graphic \"g1.graph\" (contract-class v0 v1))").unwrap();
        let a = g.get("a").unwrap();
        assert!(m.is_circuit(&ElementSet::singleton(a)));

        let (m, g) = parse("(partition (block e1 e2 : 1) (block e3 : 1))").unwrap();
        assert_eq!(m.full_rank(), 2);
        assert!(!m.independent(&g.parse_set("e1 e2").unwrap()));

        let (m, _) = parse("(uniform 2 (e1 e2 e3 e4)) ; comment").unwrap();
        assert_eq!(m.full_rank(), 2);

        let (m, g) = parse("(dsum (free (e1 e2)) (loops (e3)))").unwrap();
        assert_eq!(m.full_rank(), 2);
        assert_eq!(g.len(), 3);

        let (m, g) = parse("(contract (delete (uniform 2 (a b c d)) (a)) (b))").unwrap();
        assert_eq!(m.ground(), &g.parse_set("c d").unwrap());
        assert_eq!(m.full_rank(), 1);

        let (m, _) = parse("(mode cofinitary (free (x)))").unwrap();
        assert_eq!(m.declared_mode(), Mode::Cofinitary);
    }

    #[test]
    fn errors_report_position() {
        let e = parse("(uniform 2\n  (e1 e2)").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, column: 1, .. }), "{e}");
        let e = parse("(free (e1))\n(free (e2))").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse("(delete (free (a)) (b))").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, column: 1, .. }), "{e}");
        let e = parse("(graphic \"missing.graph\")").unwrap_err();
        assert!(matches!(e, Error::Parse { column: 10, .. }), "{e}");
        let e = parse("(frob (a))").unwrap_err();
        assert!(e.to_string().contains("frob"));
    }

    #[test]
    fn text_round_trip() {
        let src = "(mode finitary (dsum (dual (graphic \"g1.graph\" (contract-class v0 v2))) (partition (block x y : 1)) (contract (uniform 2 (p q r)) (p))))";
        let (m, g) = parse(src).unwrap();
        let text = to_text(&m, &g, &mut |_| "g1.graph".to_string());
        let (m2, g2) = parse(&text).unwrap();
        assert_eq!(text, to_text(&m2, &g2, &mut |_| "g1.graph".to_string()));
        for x in m.ground().subsets() {
            assert_eq!(m.independent(&x), m2.independent(&x));
        }
    }
}
