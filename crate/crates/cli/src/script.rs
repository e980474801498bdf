//! Operation scripts: parsing and replay against an engine.

use std::collections::HashMap;
use std::fmt::Write as _;

use sole::semigroup::Add;
use sole::{Dist, FacilityId, Graph, Sole};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Add { v: usize, f: String, w: i64, d: Dist },
    Remove { v: usize, f: String },
    Sum { v: usize, d: Dist },
    Top { v: usize, k: usize, d: Dist },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub line: usize,
    pub cmd: Command,
}

/// Error with the script line it belongs to.
#[derive(Debug)]
pub struct ScriptError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for ScriptError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "script line {}: {}", self.line, self.msg)
    }
}

fn int<T: std::str::FromStr>(tok: &str, what: &str, line: usize) -> Result<T, ScriptError> {
    tok.parse().map_err(|_| ScriptError {
        line,
        msg: format!("bad {what} `{tok}`"),
    })
}

pub fn parse(text: &str, g: &Graph) -> Result<Vec<Line>, ScriptError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let vertex = |name: &str| {
            g.vertex(name).map_err(|e| ScriptError { line, msg: e.to_string() })
        };
        let radius = |tok: Option<&&str>| -> Result<Dist, ScriptError> {
            tok.map_or(Ok(0), |t| int(t, "radius", line))
        };
        let cmd = match toks.as_slice() {
            [] => continue,
            ["add", v, f, w, d] => Command::Add {
                v: vertex(v)?,
                f: f.to_string(),
                w: int(w, "weight", line)?,
                d: int(d, "radius", line)?,
            },
            ["remove", v, f] => Command::Remove {
                v: vertex(v)?,
                f: f.to_string(),
            },
            ["sum", v, rest @ ..] if rest.len() <= 1 => Command::Sum {
                v: vertex(v)?,
                d: radius(rest.first())?,
            },
            ["top", v, k, rest @ ..] if rest.len() <= 1 => Command::Top {
                v: vertex(v)?,
                k: int(k, "count", line)?,
                d: radius(rest.first())?,
            },
            _ => {
                return Err(ScriptError {
                    line,
                    msg: format!("unrecognised command `{}`", raw.trim()),
                })
            }
        };
        out.push(Line { line, cmd });
    }
    Ok(out)
}

/// Renders a command back into script syntax.
pub fn render(g: &Graph, cmd: &Command) -> String {
    match cmd {
        Command::Add { v, f, w, d } => format!("add {} {f} {w} {d}", g.name(*v)),
        Command::Remove { v, f } => format!("remove {} {f}", g.name(*v)),
        Command::Sum { v, d } => format!("sum {} {d}", g.name(*v)),
        Command::Top { v, k, d } => format!("top {} {k} {d}", g.name(*v)),
    }
}

/// Maps script facility names to ids. A name may be reused once removed.
#[derive(Default)]
pub struct Names {
    live: HashMap<String, FacilityId>,
    names: HashMap<FacilityId, String>,
    next: u64,
}

impl Names {
    fn fresh(&mut self, name: &str) -> Option<FacilityId> {
        if self.live.contains_key(name) {
            return None;
        }
        let f = FacilityId(self.next);
        self.next += 1;
        self.live.insert(name.to_string(), f);
        self.names.insert(f, name.to_string());
        Some(f)
    }
}

/// Applies one command. Queries return their output line.
pub fn step(
    engine: &mut dyn Sole<Add>,
    g: &Graph,
    names: &mut Names,
    cmd: &Command,
) -> Result<Option<String>, String> {
    match cmd {
        Command::Add { v, f, w, d } => {
            let id = names
                .fresh(f)
                .ok_or_else(|| format!("facility `{f}` is already placed"))?;
            if let Err(e) = engine.add(*v, id, Add(*w), *d) {
                names.live.remove(f);
                return Err(e.to_string());
            }
            Ok(None)
        }
        Command::Remove { v, f } => {
            let id = *names
                .live
                .get(f)
                .ok_or_else(|| format!("facility `{f}` is not placed"))?;
            engine.remove(*v, id).map_err(|e| match e {
                sole::Error::WrongHome { .. } => {
                    format!("facility `{f}` is not placed on vertex `{}`", g.name(*v))
                }
                e => e.to_string(),
            })?;
            names.live.remove(f);
            Ok(None)
        }
        Command::Sum { v, d } => {
            let s = engine.sum(*v, *d).map_err(|e| e.to_string())?;
            let val = s.map_or("EMPTY".to_string(), |w| w.0.to_string());
            Ok(Some(format!("sum {} = {val}", g.name(*v))))
        }
        Command::Top { v, k, d } => {
            let top = engine.top(*v, *k, *d).map_err(|e| e.to_string())?;
            let mut s = format!("top {} = ", g.name(*v));
            if top.is_empty() {
                s.push_str("EMPTY");
            }
            for (i, (f, w)) in top.iter().enumerate() {
                let sep = if i > 0 { "," } else { "" };
                let _ = write!(s, "{sep}{}:{}", names.names[f], w.0);
            }
            Ok(Some(s))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sole::NaiveSole;

    fn path() -> Graph {
        Graph::parse("v a\nv b\nv c\ne a b 2\ne b c 3\n").unwrap()
    }

    fn replay(text: &str) -> Result<Vec<String>, String> {
        let g = path();
        let mut engine: NaiveSole<Add> = NaiveSole::new(g.clone());
        let mut names = Names::default();
        let mut out = Vec::new();
        for l in parse(text, &g).map_err(|e| e.to_string())? {
            out.extend(step(&mut engine, &g, &mut names, &l.cmd)?);
        }
        Ok(out)
    }

    #[test]
    fn path_example() {
        let out = replay("add a f1 10 4\nsum b\nsum c\ntop b 2\n").unwrap();
        assert_eq!(out, ["sum b = 10", "sum c = EMPTY", "top b = f1:10"]);
    }

    #[test]
    fn names_can_be_reused_after_removal() {
        let out = replay("add a f 1 0\nremove a f\nadd c f 2 0\ntop c 1\n").unwrap();
        assert_eq!(out, ["top c = f:2"]);
        assert!(replay("add a f 1 0\nadd b f 1 0\n").is_err());
        assert!(replay("add a f 1 0\nremove b f\n").is_err());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let g = path();
        let err = parse("sum a\nsum q\n", &g).unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse("add a f x 1\n", &g).unwrap_err();
        assert_eq!((err.line, err.msg.as_str()), (1, "bad weight `x`"));
        assert!(parse("frob a\n", &g).is_err());
    }

    #[test]
    fn render_round_trips() {
        let g = path();
        let lines = parse("add a f1 10 4\nremove a f1\nsum b 3\ntop c 2 1\n", &g).unwrap();
        let text: Vec<String> = lines.iter().map(|l| render(&g, &l.cmd)).collect();
        assert_eq!(parse(&text.join("\n"), &g).unwrap().len(), 4);
        assert_eq!(text[2], "sum b 3");
    }
}
