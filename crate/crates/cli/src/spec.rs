//! Spec files: a variable prelude plus program, precondition and
//! postcondition, split into `[section]`s.
//!
//! ```text
//! # factorial
//! [vars]
//! i: int 0..7
//! n: int 0..7
//! f: int {0, 1, 2, 6, 24}
//!
//! [program]
//! while (i <= n) { f *= i; i++; }
//!
//! [pre]
//! i == 2 && n == 4 && f == 1
//!
//! [post]
//! f == 24
//!
//! [options]
//! mode = total
//! unroll = 3
//! ```
//!
//! Lines starting with `#` are comments everywhere; `//` starts a comment
//! anywhere except inside `[program]`, where the lexer handles it. `[pre]`
//! and `[post]` default to `true`. `program_file` in `[options]` names a
//! file, relative to the spec, to use instead of `[program]`.

use std::fs;
use std::path::{Path, PathBuf};

use scalc_core::syntax::{parse_pred, parse_program_with_prelude, VarType};
use scalc_core::{Domain, Mode, PredExpr, StateSpace, Stmt, VarUniverse};

use crate::CliError;

/// A block of source text and where its first line sits in a file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Section {
    pub text: String,
    pub origin: String,
    pub first_line: usize,
}

impl Section {
    fn is_blank(&self) -> bool {
        self.text.trim().is_empty()
    }

    /// Moves a position inside the section's text to its file position.
    fn locate(&self, err: scalc_core::Error) -> CliError {
        use scalc_core::Error as E;
        match err {
            E::Syntax { span, message } => CliError::Located {
                origin: self.origin.clone(),
                line: span.line + self.first_line - 1,
                column: span.column,
                message: format!("syntax error: {message}"),
            },
            E::UndeclaredVariable { name, span } => CliError::Located {
                origin: self.origin.clone(),
                line: span.line + self.first_line - 1,
                column: span.column,
                message: format!("variable `{name}` used before declaration"),
            },
            other => CliError::Spec {
                origin: self.origin.clone(),
                line: self.first_line,
                message: other.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub ty: VarType,
    pub domain: Domain,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub path: PathBuf,
    pub vars: Vec<VarSpec>,
    pub program: Section,
    pub pre: Option<Section>,
    pub post: Option<Section>,
    pub mode: Option<Mode>,
    pub unroll: Option<usize>,
}

/// Everything a command needs, resolved against the state space.
#[derive(Clone, Debug)]
pub struct Model {
    pub space: StateSpace,
    pub program: Stmt,
    pub pre: PredExpr,
    pub post: PredExpr,
}

/// Name, header line, and numbered body lines.
type RawSection<'a> = (String, usize, Vec<(usize, &'a str)>);

const SECTIONS: [&str; 5] = ["vars", "program", "pre", "post", "options"];

fn strip_comment(line: &str) -> &str {
    match line.find("//") {
        Some(k) => &line[..k],
        None => line,
    }
}

fn default_domain(ty: VarType) -> Domain {
    match ty {
        VarType::Int => Domain::int(),
        VarType::Bool => Domain::boolean(),
    }
}

fn parse_int(text: &str) -> Option<i64> {
    text.trim().parse().ok()
}

fn parse_domain(ty: VarType, text: &str) -> Result<Domain, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(default_domain(ty));
    }
    if ty == VarType::Bool {
        return Err("bool variables take no explicit domain".into());
    }
    if let Some(inner) = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        let mut values = inner
            .split(',')
            .map(|v| parse_int(v).ok_or_else(|| format!("bad domain value `{}`", v.trim())))
            .collect::<Result<Vec<i64>, _>>()?;
        values.sort_unstable();
        if values.windows(2).any(|w| w[0] == w[1]) {
            return Err("domain lists a value twice".into());
        }
        return Domain::new("int", values).map_err(|e| e.to_string());
    }
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected `lo..hi` or `{{v, ...}}`, found `{text}`"))?;
    let lo = parse_int(lo).ok_or_else(|| format!("bad lower bound `{}`", lo.trim()))?;
    let hi = parse_int(hi).ok_or_else(|| format!("bad upper bound `{}`", hi.trim()))?;
    Domain::range("int", lo, hi).map_err(|e| e.to_string())
}

fn parse_var(line: &str) -> Result<(String, VarType, Domain), String> {
    let (name, rest) = line.split_once(':').ok_or("expected `name: type [domain]`")?;
    let name = name.trim();
    let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err(format!("bad variable name `{name}`"));
    }
    let rest = rest.trim_start();
    let split = rest.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len());
    let ty = match &rest[..split] {
        "int" => VarType::Int,
        "bool" => VarType::Bool,
        other => return Err(format!("unknown type `{other}`")),
    };
    Ok((name.to_string(), ty, parse_domain(ty, &rest[split..])?))
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<SpecFile, CliError> {
        let read = |p: &Path| {
            fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })
        };
        let mut raw = SpecFile::parse(&read(path)?, &path.display().to_string())?;
        if let Some((file, line)) = raw.program_file.take() {
            if !raw.program.is_blank() {
                return Err(CliError::Spec {
                    origin: raw.origin,
                    line,
                    message: "both [program] and program_file given".into(),
                });
            }
            let target = path.parent().unwrap_or(Path::new(".")).join(file);
            raw.program = Section {
                text: read(&target)?,
                origin: target.display().to_string(),
                first_line: 1,
            };
        }
        Ok(raw.into_spec())
    }

    /// Parses spec text; `origin` is used in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<RawSpec, CliError> {
        let err = |line: usize, message: String| CliError::Spec {
            origin: origin.to_string(),
            line,
            message,
        };
        let mut sections: Vec<RawSection> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let trimmed = raw.trim();
            if let Some(name) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                let name = name.trim().to_ascii_lowercase();
                if !SECTIONS.contains(&name.as_str()) {
                    return Err(err(line_no, format!("unknown section `[{name}]`")));
                }
                if sections.iter().any(|(n, _, _)| *n == name) {
                    return Err(err(line_no, format!("section `[{name}]` given twice")));
                }
                sections.push((name, line_no, Vec::new()));
                continue;
            }
            let comment = trimmed.starts_with('#');
            match sections.last_mut() {
                Some((_, _, lines)) => lines.push((line_no, if comment { "" } else { raw })),
                None if trimmed.is_empty() || comment => {}
                None => return Err(err(line_no, "text before the first section".into())),
            }
        }

        let mut raw = RawSpec {
            origin: origin.to_string(),
            ..RawSpec::default()
        };
        for (name, header, lines) in sections {
            let section = |lines: &[(usize, &str)], strip: bool| Section {
                text: lines
                    .iter()
                    .map(|(_, l)| if strip { strip_comment(l) } else { l })
                    .collect::<Vec<_>>()
                    .join("\n"),
                origin: origin.to_string(),
                first_line: header + 1,
            };
            match name.as_str() {
                "vars" => {
                    for &(line_no, l) in &lines {
                        let l = strip_comment(l).trim();
                        if l.is_empty() {
                            continue;
                        }
                        let (name, ty, domain) = parse_var(l).map_err(|m| err(line_no, m))?;
                        if raw.vars.iter().any(|v| v.name == name) {
                            return Err(err(line_no, format!("variable `{name}` listed twice")));
                        }
                        raw.vars.push(VarSpec {
                            name,
                            ty,
                            domain,
                            line: line_no,
                        });
                    }
                }
                "program" => raw.program = section(&lines, false),
                "pre" => raw.pre = Some(section(&lines, true)),
                "post" => raw.post = Some(section(&lines, true)),
                _ => {
                    for &(line_no, l) in &lines {
                        let l = strip_comment(l).trim();
                        if l.is_empty() {
                            continue;
                        }
                        let (key, value) = l
                            .split_once('=')
                            .map(|(k, v)| (k.trim(), v.trim()))
                            .ok_or_else(|| err(line_no, "expected `key = value`".into()))?;
                        match key {
                            "mode" => raw.mode = Some(value.parse().map_err(|m: String| err(line_no, m))?),
                            "unroll" => {
                                raw.unroll = Some(
                                    value
                                        .parse()
                                        .map_err(|_| err(line_no, format!("bad unroll bound `{value}`")))?,
                                )
                            }
                            "program_file" => raw.program_file = Some((value.to_string(), line_no)),
                            other => return Err(err(line_no, format!("unknown option `{other}`"))),
                        }
                    }
                }
            }
        }
        Ok(raw)
    }

    /// Builds the state space and parses program and predicates.
    ///
    /// Variables come in prelude order, followed by variables the program
    /// declares itself, which get the default domain of their type.
    pub fn model(&self, max_states: usize) -> Result<Model, CliError> {
        let origin = self.path.display().to_string();
        let prelude: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
        let program = parse_program_with_prelude(&self.program.text, prelude.iter().copied())
            .map_err(|e| self.program.locate(e))?;
        let mut vars: Vec<(String, Domain)> = self.vars.iter().map(|v| (v.name.clone(), v.domain.clone())).collect();
        for (name, ty) in program.declarations() {
            if !vars.iter().any(|(n, _)| n == name) {
                vars.push((name.to_string(), default_domain(ty)));
            }
        }
        let universe = VarUniverse::new(vars).map_err(|e| CliError::Spec {
            origin: origin.clone(),
            line: 1,
            message: e.to_string(),
        })?;
        let space = StateSpace::with_limit(universe, max_states)?;
        let pred = |section: &Option<Section>| -> Result<PredExpr, CliError> {
            let Some(s) = section else { return Ok(PredExpr::True) };
            if s.is_blank() {
                return Ok(PredExpr::True);
            }
            let p = parse_pred(&s.text).map_err(|e| s.locate(e))?;
            if let Some(v) = p.variables().into_iter().find(|v| space.universe().position(v).is_none()) {
                return Err(CliError::Spec {
                    origin: s.origin.clone(),
                    line: s.first_line,
                    message: format!("unknown variable `{v}`"),
                });
            }
            Ok(p)
        };
        Ok(Model {
            pre: pred(&self.pre)?,
            post: pred(&self.post)?,
            program,
            space,
        })
    }
}

/// Result of [`SpecFile::parse`], before `program_file` is resolved.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawSpec {
    pub origin: String,
    pub vars: Vec<VarSpec>,
    pub program: Section,
    pub pre: Option<Section>,
    pub post: Option<Section>,
    pub mode: Option<Mode>,
    pub unroll: Option<usize>,
    pub program_file: Option<(String, usize)>,
}

impl RawSpec {
    pub fn into_spec(self) -> SpecFile {
        SpecFile {
            path: PathBuf::from(self.origin),
            vars: self.vars,
            program: self.program,
            pre: self.pre,
            post: self.post,
            mode: self.mode,
            unroll: self.unroll,
        }
    }
}
