//! Presentation files.
//!
//! ```text
//! group S3
//! gens g1 g2
//! pow g1^2 := id
//! pow g2^3 := id
//! conj g2^g1 := g2^2
//! end
//! ```
//!
//! The JSON mirror carries the same fields with 1-based `[index, exponent]`
//! pairs for words.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{PcBuilder, PcPresentation, Word};
use crate::{Error, Int, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Caret,
    Assign,
    Star,
    Colon,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    line: usize,
}

impl Lexed {
    fn err(&self, col: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: col,
            message: message.into(),
        }
    }
}

fn lex(line_no: usize, text: &str) -> Result<Lexed> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.')
            {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            toks.push((Tok::Int(chars[start..i].iter().collect()), col));
        } else if c == '^' {
            toks.push((Tok::Caret, col));
            i += 1;
        } else if c == '*' {
            toks.push((Tok::Star, col));
            i += 1;
        } else if c == ':' && chars.get(i + 1) == Some(&'=') {
            toks.push((Tok::Assign, col));
            i += 2;
        } else if c == ':' {
            toks.push((Tok::Colon, col));
            i += 1;
        } else {
            return Err(Error::Syntax {
                line: line_no,
                column: col,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(Lexed {
        toks,
        line: line_no,
    })
}

struct Cursor<'a> {
    lx: &'a Lexed,
    pos: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.lx
            .toks
            .get(self.pos)
            .map(|t| t.1)
            .unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.lx.toks.get(self.pos).map(|t| &t.0);
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.lx.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let col = self.col();
        match self.next() {
            Some(t) if *t == want => Ok(()),
            _ => Err(self.lx.err(col, format!("expected {what}"))),
        }
    }

    fn ident(&mut self) -> Result<(&'a str, usize)> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => Ok((s, col)),
            _ => Err(self.lx.err(col, "expected generator name")),
        }
    }

    fn int<T: Int>(&mut self) -> Result<T> {
        let col = self.col();
        match self.next() {
            Some(Tok::Int(s)) => s.parse::<T>().map_err(|_| self.lx.err(col, "bad integer")),
            _ => Err(self.lx.err(col, "expected integer")),
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos < self.lx.toks.len() {
            Err(self.lx.err(self.col(), "unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

fn gen_index(index: &HashMap<String, usize>, name: &str, lx: &Lexed, col: usize) -> Result<usize> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| lx.err(col, format!("unknown generator '{name}'")))
}

fn parse_word<T: Int>(
    cur: &mut Cursor,
    index: &HashMap<String, usize>,
) -> Result<(Word<T>, usize)> {
    let start_col = cur.col();
    if let Some(Tok::Ident(s)) = cur.peek() {
        if s == "id" {
            cur.next();
            return Ok((Word::identity(), start_col));
        }
    }
    let mut w = Word::identity();
    loop {
        let (name, col) = cur.ident()?;
        let g = gen_index(index, name, cur.lx, col)?;
        let e = if cur.peek() == Some(&Tok::Caret) {
            cur.next();
            let ecol = cur.col();
            let e: T = cur.int()?;
            if e.is_zero() {
                return Err(cur.lx.err(ecol, "exponent must be nonzero"));
            }
            e
        } else {
            T::one()
        };
        w.push(g, e);
        if cur.peek() == Some(&Tok::Star) {
            cur.next();
        } else {
            break;
        }
    }
    Ok((w, start_col))
}

/// Parses the text presentation format.
pub fn parse_presentation<T: Int>(text: &str) -> Result<PcPresentation<T>> {
    let mut name = String::new();
    let mut builder: Option<PcBuilder<T>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut seen: BTreeSet<(String, usize, usize)> = BTreeSet::new();
    let mut tails = Vec::new();
    let mut ended = false;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let lx = lex(line_no, raw)?;
        if lx.toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            lx: &lx,
            pos: 0,
            end_col: raw.chars().count() + 1,
        };
        if ended {
            return Err(lx.err(lx.toks[0].1, "content after 'end'"));
        }
        let (kw, kcol) = cur.ident()?;
        let need_gens = |b: &Option<PcBuilder<T>>| {
            if b.is_none() {
                Err(lx.err(kcol, "'gens' must come before relations"))
            } else {
                Ok(())
            }
        };
        match kw {
            "group" => {
                let (n, _) = cur.ident()?;
                name = n.to_string();
                cur.done()?;
            }
            "gens" => {
                if builder.is_some() {
                    return Err(Error::DuplicateRelation {
                        line: line_no,
                        message: "gens".into(),
                    });
                }
                let mut names = Vec::new();
                while cur.peek().is_some() {
                    let (g, col) = cur.ident()?;
                    if g == "id" {
                        return Err(lx.err(col, "'id' is reserved"));
                    }
                    if index.insert(g.to_string(), names.len()).is_some() {
                        return Err(lx.err(col, format!("generator '{g}' declared twice")));
                    }
                    names.push(g.to_string());
                }
                builder = Some(PcBuilder::new(names));
            }
            "pow" => {
                need_gens(&builder)?;
                let (g, gcol) = cur.ident()?;
                let i = gen_index(&index, g, &lx, gcol)?;
                cur.expect(Tok::Caret, "'^'")?;
                let ecol = cur.col();
                let e: T = cur.int()?;
                if !e.is_positive() {
                    return Err(lx.err(ecol, "relative order must be at least 1"));
                }
                cur.expect(Tok::Assign, "':='")?;
                let (w, wcol) = parse_word::<T>(&mut cur, &index)?;
                cur.done()?;
                if !seen.insert(("pow".into(), i, i)) {
                    return Err(Error::DuplicateRelation {
                        line: line_no,
                        message: format!("pow {g}"),
                    });
                }
                if w.min_gen().is_some_and(|m| m <= i) {
                    return Err(Error::IndexOrdering {
                        line: line_no,
                        message: format!(
                            "power of {g} may only use later generators (column {wcol})"
                        ),
                    });
                }
                builder = builder.map(|b| b.power(i, e, w));
            }
            "conj" | "cinv" => {
                need_gens(&builder)?;
                let (g, gcol) = cur.ident()?;
                let i = gen_index(&index, g, &lx, gcol)?;
                cur.expect(Tok::Caret, "'^'")?;
                let (h, hcol) = cur.ident()?;
                let j = gen_index(&index, h, &lx, hcol)?;
                cur.expect(Tok::Assign, "':='")?;
                let (w, _) = parse_word::<T>(&mut cur, &index)?;
                cur.done()?;
                if j >= i {
                    return Err(Error::IndexOrdering {
                        line: line_no,
                        message: format!(
                            "{kw} {g}^{h}: the conjugator must precede the conjugated generator"
                        ),
                    });
                }
                if w.min_gen().is_some_and(|m| m <= j) {
                    return Err(Error::IndexOrdering {
                        line: line_no,
                        message: format!("{kw} {g}^{h} may only use generators after {h}"),
                    });
                }
                if !seen.insert((kw.to_string(), i, j)) {
                    return Err(Error::DuplicateRelation {
                        line: line_no,
                        message: format!("{kw} {g}^{h}"),
                    });
                }
                builder = builder.map(|b| {
                    if kw == "conj" {
                        b.conj(i, j, w)
                    } else {
                        b.cinv(i, j, w)
                    }
                });
            }
            "tails" => {
                need_gens(&builder)?;
                while cur.peek().is_some() {
                    let (t, tcol) = cur.ident()?;
                    let i = gen_index(&index, t, &lx, tcol)?;
                    cur.expect(Tok::Colon, "':'")?;
                    let d: T = cur.int()?;
                    tails.push((i, d));
                }
            }
            "end" => {
                cur.done()?;
                ended = true;
            }
            other => return Err(lx.err(kcol, format!("unknown declaration '{other}'"))),
        }
    }
    let b = builder.unwrap_or_else(|| PcBuilder::new(Vec::<String>::new()));
    let mut p = b.name(name).tails(tails).build()?;
    if p.name.is_empty() {
        p.name = "G".into();
    }
    Ok(p)
}

/// Renders the text format; trivial conjugates are left implicit.
pub fn to_text<T: Int>(p: &PcPresentation<T>) -> String {
    let names = p.names();
    let mut out = String::new();
    out.push_str(&format!(
        "group {}\n",
        if p.name().is_empty() { "G" } else { p.name() }
    ));
    out.push_str("gens");
    for n in names {
        out.push(' ');
        out.push_str(n);
    }
    out.push('\n');
    for i in 0..p.ngens() {
        if let Some(e) = p.rel_order(i) {
            out.push_str(&format!(
                "pow {}^{} := {}\n",
                names[i],
                e,
                p.power_rhs(i).display_with(names)
            ));
        }
    }
    for i in 0..p.ngens() {
        for j in 0..i {
            let w = p.conj_rhs(i, j);
            if *w != Word::gen(i) {
                out.push_str(&format!(
                    "conj {}^{} := {}\n",
                    names[i],
                    names[j],
                    w.display_with(names)
                ));
            }
        }
    }
    for i in 0..p.ngens() {
        for j in 0..i {
            if let Some(w) = p.cinv_rhs(i, j) {
                if *w != Word::gen(i) {
                    out.push_str(&format!(
                        "cinv {}^{} := {}\n",
                        names[i],
                        names[j],
                        w.display_with(names)
                    ));
                }
            }
        }
    }
    if !p.tails().is_empty() {
        out.push_str("tails");
        for (t, d) in p.tails() {
            out.push_str(&format!(" {}:{}", names[*t], d));
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
enum JsonInt {
    Num(i64),
    Str(String),
}

impl JsonInt {
    fn from_int<T: Int>(v: &T) -> Self {
        match v.to_i64() {
            Some(x) => JsonInt::Num(x),
            None => JsonInt::Str(v.to_string()),
        }
    }

    fn to_int<T: Int>(&self) -> Result<T> {
        match self {
            JsonInt::Num(x) => {
                T::from_i64(*x).ok_or_else(|| Error::Json(format!("{x} out of range")))
            }
            JsonInt::Str(s) => s
                .parse()
                .map_err(|_| Error::Json(format!("bad integer '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct JsonPow {
    gen: usize,
    exp: JsonInt,
    rhs: Vec<(usize, JsonInt)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct JsonConj {
    gen: usize,
    by: usize,
    rhs: Vec<(usize, JsonInt)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct JsonTail {
    gen: usize,
    order: JsonInt,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct JsonPresentation {
    group: String,
    gens: Vec<String>,
    #[serde(default)]
    pows: Vec<JsonPow>,
    #[serde(default)]
    conjs: Vec<JsonConj>,
    #[serde(default)]
    cinvs: Vec<JsonConj>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tails: Option<Vec<JsonTail>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    provenance: Vec<String>,
}

fn word_to_json<T: Int>(w: &Word<T>) -> Vec<(usize, JsonInt)> {
    w.letters()
        .iter()
        .map(|(g, e)| (g + 1, JsonInt::from_int(e)))
        .collect()
}

fn word_from_json<T: Int>(pairs: &[(usize, JsonInt)], n: usize) -> Result<Word<T>> {
    let mut w = Word::identity();
    for (g, e) in pairs {
        if *g == 0 || *g > n {
            return Err(Error::Json(format!(
                "generator index {g} out of range 1..={n}"
            )));
        }
        w.push(g - 1, e.to_int()?);
    }
    Ok(w)
}

pub fn to_json_value<T: Int>(p: &PcPresentation<T>) -> serde_json::Value {
    let mut jp = JsonPresentation {
        group: p.name().to_string(),
        gens: p.names().to_vec(),
        pows: Vec::new(),
        conjs: Vec::new(),
        cinvs: Vec::new(),
        tails: None,
        provenance: p.provenance().to_vec(),
    };
    for i in 0..p.ngens() {
        if let Some(e) = p.rel_order(i) {
            jp.pows.push(JsonPow {
                gen: i + 1,
                exp: JsonInt::from_int(e),
                rhs: word_to_json(p.power_rhs(i)),
            });
        }
        for j in 0..i {
            if *p.conj_rhs(i, j) != Word::gen(i) {
                jp.conjs.push(JsonConj {
                    gen: i + 1,
                    by: j + 1,
                    rhs: word_to_json(p.conj_rhs(i, j)),
                });
            }
            if let Some(w) = p.cinv_rhs(i, j) {
                if *w != Word::gen(i) {
                    jp.cinvs.push(JsonConj {
                        gen: i + 1,
                        by: j + 1,
                        rhs: word_to_json(w),
                    });
                }
            }
        }
    }
    if !p.tails().is_empty() {
        jp.tails = Some(
            p.tails()
                .iter()
                .map(|(g, d)| JsonTail {
                    gen: g + 1,
                    order: JsonInt::from_int(d),
                })
                .collect(),
        );
    }
    serde_json::to_value(jp).expect("presentation serializes")
}

pub fn to_json<T: Int>(p: &PcPresentation<T>) -> String {
    serde_json::to_string_pretty(&to_json_value(p)).expect("presentation serializes")
}

pub fn parse_json<T: Int>(text: &str) -> Result<PcPresentation<T>> {
    let jp: JsonPresentation =
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let n = jp.gens.len();
    let mut b = PcBuilder::new(jp.gens.clone()).name(jp.group.clone());
    let check = |g: usize| {
        if g == 0 || g > n {
            Err(Error::Json(format!(
                "generator index {g} out of range 1..={n}"
            )))
        } else {
            Ok(g - 1)
        }
    };
    for pw in &jp.pows {
        let i = check(pw.gen)?;
        if b.has_power(i) {
            return Err(Error::Json(format!(
                "duplicate power for generator {}",
                pw.gen
            )));
        }
        b = b.power(i, pw.exp.to_int()?, word_from_json(&pw.rhs, n)?);
    }
    for (cinv, list) in [(false, &jp.conjs), (true, &jp.cinvs)] {
        for c in list {
            let (i, j) = (check(c.gen)?, check(c.by)?);
            if j >= i {
                return Err(Error::Json(format!(
                    "conjugator {} must precede {}",
                    c.by, c.gen
                )));
            }
            let w = word_from_json(&c.rhs, n)?;
            if cinv {
                if b.has_cinv(i, j) {
                    return Err(Error::Json(format!("duplicate cinv ({}, {})", c.gen, c.by)));
                }
                b = b.cinv(i, j, w);
            } else {
                if b.has_conj(i, j) {
                    return Err(Error::Json(format!("duplicate conj ({}, {})", c.gen, c.by)));
                }
                b = b.conj(i, j, w);
            }
        }
    }
    if let Some(ts) = &jp.tails {
        let mut tails = Vec::new();
        for t in ts {
            tails.push((check(t.gen)?, t.order.to_int()?));
        }
        b = b.tails(tails);
    }
    b = b.provenance(jp.provenance.clone());
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: &str = "group S3\ngens g1 g2\npow g1^2:=id\npow g2^3:=id\nconj g2^g1:=g2^2\nend\n";

    #[test]
    fn parses_s3() {
        let p: PcPresentation<i64> = parse_presentation(S3).unwrap();
        assert_eq!(p.ngens(), 2);
        assert_eq!(p.rel_order(0), Some(&2));
        assert_eq!(p.rel_order(1), Some(&3));
        assert_eq!(p.conj_rhs(1, 0), &Word::gen_pow(1, 2));
        assert_eq!(p.name(), "S3");
    }

    #[test]
    fn empty_gens_is_trivial() {
        let p: PcPresentation<i64> = parse_presentation("group T\ngens\nend\n").unwrap();
        assert_eq!(p.ngens(), 0);
    }

    #[test]
    fn conjugator_order_error() {
        let e = parse_presentation::<i64>("gens g1 g2\nconj g1^g2 := g2\n").unwrap_err();
        assert!(matches!(e, Error::IndexOrdering { line: 2, .. }), "{e:?}");
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_presentation::<i64>("gens g1 g2\npow g1 2 := id\n").unwrap_err();
        assert_eq!(
            e,
            Error::Syntax {
                line: 2,
                column: 8,
                message: "expected '^'".into()
            }
        );
        let e = parse_presentation::<i64>("gens a\npow b^2 := id\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Syntax {
                    line: 2,
                    column: 5,
                    ..
                }
            ),
            "{e:?}"
        );
    }

    #[test]
    fn duplicate_relation() {
        let e = parse_presentation::<i64>("gens a b\npow a^2:=id\npow a ^ 2 := b\n").unwrap_err();
        assert!(matches!(e, Error::DuplicateRelation { line: 3, .. }));
    }

    #[test]
    fn text_and_json_round_trip() {
        let p: PcPresentation<i64> = parse_presentation(S3).unwrap();
        let again: PcPresentation<i64> = parse_presentation(&to_text(&p)).unwrap();
        assert_eq!(p, again);
        let j: PcPresentation<i64> = parse_json(&to_json(&p)).unwrap();
        assert_eq!(p, j);
    }

    #[test]
    fn negative_exponents_and_comments() {
        let text = "# infinite dihedral\ngroup Dinf\ngens a b  # two\npow a^2 := id\nconj b^a := b^-1\nend";
        let p: PcPresentation<i64> = parse_presentation(text).unwrap();
        assert_eq!(p.conj_rhs(1, 0), &Word::gen_pow(1, -1));
        assert!(!p.is_finite_gen(1));
    }
}
