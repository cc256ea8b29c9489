//! The algebra file format (see `FORMATS.md`) and the text renderings of
//! tables and Hopf algebras.

use std::collections::HashMap;
use std::fmt::Write as _;

use tannaka_core::bar::TableRow;
use tannaka_core::dga::{is_identifier, parse_expr, AugmentedDGA, DgaError, ExprTerm, Generator, Poly, Presentation, StructBuilder};
use tannaka_core::hopf::{HopfAlgebra, HopfReport, Tensor2};
use tannaka_core::{Rat, SparseVec};
use thiserror::Error;

/// A problem in an algebra file, located at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

/// A parsed algebra together with the source lines of its declarations.
#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub algebra: AugmentedDGA,
    declared: HashMap<String, usize>,
    differential: HashMap<String, usize>,
    header: usize,
}

impl AlgebraFile {
    /// The line best describing `name`: its differential if `prefer_d`, else its declaration.
    pub fn line_of(&self, name: &str, prefer_d: bool) -> usize {
        let d = prefer_d.then(|| self.differential.get(name)).flatten();
        d.or_else(|| self.declared.get(name)).copied().unwrap_or(self.header)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Free,
    Struct,
}

/// One token with its 1-based column.
struct Tok<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain([(line.len(), ' ')]) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { text: &line[s..i], column: line[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

struct Statement {
    line: usize,
    column: usize,
    name: String,
    terms: Vec<ExprTerm>,
}

struct Decl {
    keyword: &'static str,
    line: usize,
    name: String,
    degree: i64,
    weight: i64,
}

/// Parses an algebra file. Every error carries the line and column where it was found.
pub fn parse_algebra(src: &str) -> Result<AlgebraFile, ParseError> {
    let mut name: Option<(String, usize)> = None;
    let mut kind: Option<(Kind, usize)> = None;
    let mut mixed_tate = false;
    let mut decls: Vec<Decl> = Vec::new();
    let mut unit: Option<(String, usize, usize)> = None;
    let mut diffs: Vec<Statement> = Vec::new();
    let mut augs: Vec<(usize, usize, String, Rat)> = Vec::new();
    let mut muls: Vec<(Statement, String, usize)> = Vec::new();

    for (ln, raw) in src.lines().enumerate() {
        let ln = ln + 1;
        let text = raw.split('#').next().unwrap_or("");
        let toks = tokens(text);
        let Some(head) = toks.first() else { continue };
        let col_after = |t: &Tok| t.column + t.text.chars().count();
        // `name [name] = expr`, with the expression located in the raw line
        let equation = |count: usize| -> Result<(Vec<&Tok>, Vec<ExprTerm>, usize), ParseError> {
            let eq = text.find('=').ok_or(()).or_else(|_| err(ln, col_after(toks.last().unwrap()), "expected `=`"))?;
            let lhs: Vec<&Tok> = toks[1..].iter().take_while(|t| t.column <= text[..eq].chars().count()).collect();
            if lhs.len() != count {
                let at = lhs.get(count).map_or(head.column, |t| t.column);
                return err(ln, at, format!("expected {count} name(s) before `=`"));
            }
            let expr_col = text[..eq + 1].chars().count() + 1;
            let terms = parse_expr(&text[eq + 1..]).or_else(|e| {
                let col = expr_col + text[eq + 1..][..e.column.min(text.len() - eq - 1)].chars().count();
                err(ln, col, e.message)
            })?;
            Ok((lhs, terms, expr_col))
        };
        let int = |t: Option<&Tok>, what: &str, default: Option<i64>| -> Result<i64, ParseError> {
            match (t, default) {
                (Some(t), _) => t.text.parse().or_else(|_| err(ln, t.column, format!("expected an integer {what}, found `{}`", t.text))),
                (None, Some(d)) => Ok(d),
                (None, None) => err(ln, col_after(toks.last().unwrap()), format!("missing {what}")),
            }
        };
        match head.text {
            "algebra" => {
                let rest = text.trim_start()["algebra".len()..].trim();
                if rest.is_empty() {
                    return err(ln, col_after(head), "missing algebra name");
                }
                if name.is_some() {
                    return err(ln, head.column, "duplicate `algebra` line");
                }
                name = Some((rest.to_string(), ln));
            }
            "kind" => {
                let k = match toks.get(1).map(|t| t.text) {
                    Some("free") => Kind::Free,
                    Some("struct") => Kind::Struct,
                    _ => return err(ln, toks.get(1).map_or(col_after(head), |t| t.column), "kind must be `free` or `struct`"),
                };
                if toks.len() > 2 {
                    return err(ln, toks[2].column, "unexpected text after the kind");
                }
                kind = Some((k, ln));
            }
            "flags" => {
                for t in &toks[1..] {
                    match t.text {
                        "mixed-tate" => mixed_tate = true,
                        other => return err(ln, t.column, format!("unknown flag `{other}`")),
                    }
                }
            }
            "gen" | "basis" | "unit" => {
                let Some(n) = toks.get(1) else { return err(ln, col_after(head), "missing name") };
                if !(is_identifier(n.text) || (head.text == "unit" && n.text == "1")) {
                    return err(ln, n.column, format!("`{}` is not a valid name", n.text));
                }
                if decls.iter().any(|d| d.name == n.text) {
                    return err(ln, n.column, format!("duplicate name `{}`", n.text));
                }
                let (degree, weight) = if head.text == "unit" {
                    if unit.is_some() {
                        return err(ln, head.column, "duplicate `unit` line");
                    }
                    unit = Some((n.text.to_string(), ln, n.column));
                    (0, 0)
                } else {
                    (int(toks.get(2), "degree", None)?, int(toks.get(3), "weight", Some(0))?)
                };
                let extra = if head.text == "unit" { 2 } else { 4 };
                if let Some(t) = toks.get(extra) {
                    return err(ln, t.column, "unexpected text after the declaration");
                }
                let keyword = match head.text {
                    "gen" => "gen",
                    "basis" => "basis",
                    _ => "unit",
                };
                decls.push(Decl { keyword, line: ln, name: n.text.to_string(), degree, weight });
            }
            "d" => {
                let (lhs, terms, _) = equation(1)?;
                if diffs.iter().any(|s| s.name == lhs[0].text) {
                    return err(ln, lhs[0].column, format!("differential of `{}` given twice", lhs[0].text));
                }
                diffs.push(Statement { line: ln, column: lhs[0].column, name: lhs[0].text.to_string(), terms });
            }
            "aug" => {
                let (lhs, terms, col) = equation(1)?;
                let value = match terms.as_slice() {
                    [] => Rat::zero(),
                    [(c, f)] if f.is_empty() => c.clone(),
                    _ => return err(ln, col, "an augmentation value must be a rational number"),
                };
                augs.push((ln, lhs[0].column, lhs[0].text.to_string(), value));
            }
            "mul" => {
                let (lhs, terms, _) = equation(2)?;
                muls.push((
                    Statement { line: ln, column: lhs[0].column, name: lhs[0].text.to_string(), terms },
                    lhs[1].text.to_string(),
                    lhs[1].column,
                ));
            }
            other => return err(ln, head.column, format!("unknown keyword `{other}`")),
        }
    }

    let Some((name, header)) = name else { return err(1, 1, "missing `algebra NAME` line") };
    let Some((kind, kind_line)) = kind else { return err(header, 1, "missing `kind free` or `kind struct` line") };
    let wrong = if kind == Kind::Free { "basis" } else { "gen" };
    if let Some(d) = decls.iter().find(|d| d.keyword == wrong) {
        let right = if kind == Kind::Free { "gen" } else { "basis" };
        return err(d.line, 1, format!("`{wrong}` lines belong to the other kind; use `{right}`"));
    }
    let known = |n: &str, line: usize, col: usize| -> Result<(), ParseError> {
        if decls.iter().any(|d| d.name == n) {
            Ok(())
        } else {
            err(line, col, format!("unknown name `{n}`"))
        }
    };
    for s in &diffs {
        known(&s.name, s.line, s.column)?;
    }
    for (line, col, n, _) in &augs {
        known(n, *line, *col)?;
    }
    let declared: HashMap<String, usize> = decls.iter().map(|d| (d.name.clone(), d.line)).collect();
    let differential: HashMap<String, usize> = diffs.iter().map(|s| (s.name.clone(), s.line)).collect();
    let dga_err = |line: usize, col: usize| move |e: DgaError| ParseError { line, column: col, message: e.to_string() };

    let algebra = match kind {
        Kind::Free => {
            if let Some((_, line, col)) = unit {
                return err(line, col, "`unit` lines belong to `kind struct` files");
            }
            if let Some((s, _, _)) = muls.first() {
                return err(s.line, 1, "`mul` lines belong to `kind struct` files");
            }
            let gens: Vec<Generator> = decls.iter().map(|d| Generator::new(d.name.clone(), d.degree, d.weight)).collect();
            let zero = vec![Poly::zero(); gens.len()];
            let mut aug = vec![Rat::zero(); gens.len()];
            for (_, _, n, v) in &augs {
                aug[decls.iter().position(|d| &d.name == n).expect("known")] = v.clone();
            }
            let skeleton = AugmentedDGA::free(name.clone(), gens.clone(), zero.clone(), aug.clone()).map_err(dga_err(header, 1))?;
            let free = skeleton.as_free().expect("free");
            let mut polys = zero;
            for s in &diffs {
                let i = decls.iter().position(|d| d.name == s.name).expect("known");
                polys[i] = free.poly_from_expr(&s.terms).map_err(dga_err(s.line, s.column))?;
            }
            AugmentedDGA::free(name, gens, polys, aug).map_err(dga_err(header, 1))?
        }
        Kind::Struct => {
            let Some((unit_name, ..)) = unit.clone() else { return err(kind_line, 1, "a `kind struct` file needs a `unit NAME` line") };
            let linear = |s: &Statement| -> Result<Vec<(String, Rat)>, ParseError> {
                s.terms
                    .iter()
                    .map(|(c, f)| match f.as_slice() {
                        [] => Ok((unit_name.clone(), c.clone())),
                        [(n, 1)] => known(n, s.line, s.column).map(|_| (n.clone(), c.clone())),
                        _ => err(s.line, s.column, "structure constants must be linear combinations of basis names"),
                    })
                    .collect()
            };
            let mut b = StructBuilder::new(name);
            b.mixed_tate(mixed_tate);
            for d in &decls {
                if d.name == unit_name {
                    b.unit(&d.name);
                } else {
                    b.element(&d.name, d.degree, d.weight, Rat::zero());
                }
            }
            for (_, _, n, v) in &augs {
                b.set_augmentation(n, v.clone());
            }
            for s in &diffs {
                b.differential(&s.name, linear(s)?);
            }
            for (s, other, col) in &muls {
                known(&s.name, s.line, s.column)?;
                known(other, s.line, *col)?;
                b.product(&s.name, other, linear(s)?);
            }
            b.build().map_err(dga_err(header, 1))?
        }
    };
    Ok(AlgebraFile { algebra: algebra.with_mixed_tate(mixed_tate), declared, differential, header })
}

/// Renders an algebra in the file format; [`parse_algebra`] reads it back.
pub fn write_algebra(a: &AugmentedDGA) -> String {
    let mut s = String::new();
    writeln!(s, "algebra {}", a.name()).unwrap();
    match a.presentation() {
        Presentation::Free(f) => {
            writeln!(s, "kind free").unwrap();
            if a.is_mixed_tate() {
                writeln!(s, "flags mixed-tate").unwrap();
            }
            for g in f.generators() {
                writeln!(s, "gen {} {} {}", g.name, g.degree, g.weight).unwrap();
            }
            for (g, p) in f.generators().iter().zip(f.differentials()) {
                if !p.is_zero() {
                    writeln!(s, "d {} = {}", g.name, p.display(f.names())).unwrap();
                }
            }
            for (g, v) in f.generators().iter().zip(f.augmentation_values()) {
                if !v.is_zero() {
                    writeln!(s, "aug {} = {v}", g.name).unwrap();
                }
            }
        }
        Presentation::StructConst(c) => {
            writeln!(s, "kind struct").unwrap();
            if a.is_mixed_tate() {
                writeln!(s, "flags mixed-tate").unwrap();
            }
            let names: Vec<String> = c.basis().iter().map(|b| b.name.clone()).collect();
            let lin = |v: &SparseVec| linear_combination(v, &names);
            for (i, b) in c.basis().iter().enumerate() {
                if i == c.unit_index() {
                    writeln!(s, "unit {}", b.name).unwrap();
                } else {
                    writeln!(s, "basis {} {} {}", b.name, b.degree, b.weight).unwrap();
                }
            }
            let d = c.differential();
            for (i, b) in c.basis().iter().enumerate() {
                if !d.column(i).is_zero() {
                    writeln!(s, "d {} = {}", b.name, lin(d.column(i))).unwrap();
                }
            }
            for (i, b) in c.basis().iter().enumerate() {
                let v = &c.augmentation_values()[i];
                if i != c.unit_index() && !v.is_zero() {
                    writeln!(s, "aug {} = {v}", b.name).unwrap();
                }
            }
            for i in 0..c.dim() {
                for j in i..c.dim() {
                    let p = c.product(i, j);
                    if i != c.unit_index() && j != c.unit_index() && !p.is_zero() {
                        writeln!(s, "mul {} {} = {}", names[i], names[j], lin(p)).unwrap();
                    }
                }
            }
        }
    }
    s
}

fn signed_terms<'a>(terms: impl Iterator<Item = (String, &'a Rat)>) -> String {
    let mut s = String::new();
    for (k, (name, c)) in terms.enumerate() {
        let a = c.abs();
        match (k, c.is_negative()) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if a.is_one() {
            s.push_str(&name);
        } else {
            write!(s, "{a}*{name}").unwrap();
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// `2*a - 1/2*b`, or `0`.
pub fn linear_combination(v: &SparseVec, names: &[String]) -> String {
    signed_terms(v.iter().map(|(i, c)| (names[i].clone(), c)))
}

fn tensor_combination(t: &Tensor2, names: &[String]) -> String {
    signed_terms(t.iter().map(|(&(i, j), c)| (format!("{}|{}", names[i], names[j]), c)))
}

/// `weight degree dim` rows, one per line.
pub fn write_table(rows: &[TableRow]) -> String {
    let mut s = String::new();
    for r in rows {
        writeln!(s, "{} {} {}", r.weight, r.degree, r.dim).unwrap();
    }
    s
}

/// The Hopf presentation: basis with weights and representatives, then the
/// unit, counit, products, coproducts and antipode.
pub fn write_hopf(h: &HopfAlgebra) -> String {
    let names: Vec<String> = (0..h.dim()).map(|i| h.label(i).to_string()).collect();
    let mut s = String::new();
    writeln!(s, "hopf {}", h.name()).unwrap();
    match h.bound() {
        Some(b) => writeln!(s, "bound {b}").unwrap(),
        None => writeln!(s, "bound none").unwrap(),
    }
    for i in 0..h.dim() {
        writeln!(s, "basis {} {} {} {}", names[i], h.weight(i), h.grade(i), h.description(i)).unwrap();
    }
    writeln!(s, "unit = {}", linear_combination(h.unit(), &names)).unwrap();
    for i in 0..h.dim() {
        writeln!(s, "counit {} = {}", names[i], h.counit()[i]).unwrap();
    }
    for i in 0..h.dim() {
        for j in i..h.dim() {
            if let Some(p) = h.product(i, j) {
                writeln!(s, "mul {} {} = {}", names[i], names[j], linear_combination(p, &names)).unwrap();
            }
        }
    }
    for i in 0..h.dim() {
        writeln!(s, "comul {} = {}", names[i], tensor_combination(h.coproduct(i), &names)).unwrap();
    }
    for i in 0..h.dim() {
        writeln!(s, "antipode {} = {}", names[i], linear_combination(h.antipode().column(i), &names)).unwrap();
    }
    s
}

/// Summary line plus one line per violation.
pub fn write_hopf_report(r: &HopfReport) -> String {
    let mut s = String::new();
    let verdict = if r.passes() { "PASS" } else { "FAIL" };
    writeln!(s, "# hopf-validate {verdict}: {} identities checked, {} beyond the bound", r.checked, r.skipped).unwrap();
    for v in &r.violations {
        writeln!(s, "# violation: {v}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn error_at(src: &str) -> (usize, usize) {
        let e = parse_algebra(src).unwrap_err();
        (e.line, e.column)
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(error_at(""), (1, 1));
        assert_eq!(error_at("algebra a\nkind free\nfoo x\n"), (3, 1));
        assert_eq!(error_at("algebra a\nkind free\ngen x 0\ngen x 1\n"), (4, 5));
        assert_eq!(error_at("algebra a\nkind free\ngen x zero\n"), (3, 7));
        assert_eq!(error_at("algebra a\nkind free\ngen x 1\nd y = 0\n"), (4, 3));
        assert_eq!(error_at("algebra a\nkind free\ngen x 1\ngen y 2\nd y = x ** x\n"), (5, 10));
        assert_eq!(error_at("algebra a\nkind bogus\n"), (2, 6));
        assert_eq!(error_at("algebra a\nkind free\nbasis x 0\n"), (3, 1));
        assert_eq!(error_at("algebra a\nkind struct\nunit 1\nbasis x 0\nmul x x = x*x\n"), (5, 5));
    }

    #[test]
    fn free_files() {
        let f = parse_algebra(
            "# a comment\nalgebra heis\nkind free\nflags mixed-tate\ngen x 1 1\ngen y 1 1\ngen z 1 2 # trailing\nd z = x*y\n",
        )
        .unwrap();
        let a = &f.algebra;
        assert_eq!(a.name(), "heis");
        assert!(a.is_mixed_tate());
        assert_eq!(f.line_of("z", true), 8);
        assert_eq!(f.line_of("z", false), 7);
        let g = a.as_free().unwrap().generators();
        assert_eq!((g[2].degree, g[2].weight), (1, 2));
        assert!(write_algebra(a).contains("d z = "));
    }

    #[test]
    fn struct_files() {
        let src = "algebra k x k\nkind struct\nunit 1\nbasis y 0\naug y = 1\nmul y y = y\n";
        let a = parse_algebra(src).unwrap().algebra;
        let s = a.as_struct().unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(a.name(), "k x k");
        let y = s.index_of("y").unwrap();
        assert_eq!(s.augmentation_values()[y], Rat::one());
        let again = parse_algebra(&write_algebra(&a)).unwrap().algebra;
        assert_eq!(write_algebra(&again), write_algebra(&a));
    }

    #[test]
    fn linear_combinations_print_signs_and_fractions() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let v = SparseVec::from_entries(vec![(0, Rat::one()), (1, Rat::new(-1, 2)), (2, Rat::from_int(-1))]);
        assert_eq!(linear_combination(&v, &names), "a - 1/2*b - c");
        assert_eq!(linear_combination(&SparseVec::new(), &names), "0");
    }
}
