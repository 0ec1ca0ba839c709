//! The batch job text format: parsing, replay, report formatting, and
//! threshold verification.
//!
//! A script is a sequence of backslash commands. `\P` lines and `%`-to-end-
//! of-line text are comments anywhere; inside a constraint block `\w` and `;`
//! also start comments running to the end of the line, and parenthesized
//! tokens are case labels, recorded but never interpreted as constraints.
//! Constraint tokens are exactly five characters `x∘y=z`. Parsing stops at
//! `\enddata`; the rest of the file is never processed.

use crate::algebra::{
    count_subuniverses, AlgebraError, Constraint, PartialAlgebra, Universe,
};
use crate::dyadic::DyadicValue;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("line {line}, column {col}: {kind}")]
    Parse { line: usize, col: usize, kind: ParseErrorKind },
    #[error("job \"{job}\": {source}")]
    JobFailed { job: String, source: AlgebraError },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("declared size {declared} does not match element count {actual}")]
    SizeMismatch { declared: usize, actual: usize },
    #[error("constraint uses undeclared element '{0}'")]
    UnknownLabel(char),
    #[error("malformed constraint token \"{0}\" (expected five characters x∘y=z)")]
    MalformedConstraint(String),
    #[error("job is missing \\endofjob")]
    UnterminatedJob,
    #[error("unknown command \"\\{0}\"")]
    UnknownCommand(String),
    #[error("\\{0} has no value")]
    MissingValue(String),
    #[error("\\{command} before {needed}")]
    OutOfOrder { command: String, needed: String },
    #[error("invalid element line: {0}")]
    BadElements(AlgebraError),
    #[error("invalid setting value \"{0}\"")]
    BadSetting(String),
    #[error("unbalanced case label parenthesis")]
    UnbalancedParen,
}

/// Script-wide settings taken from the header commands.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub verbose: bool,
    pub subtrahend: i64,
    pub op_symbols: Vec<char>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { verbose: false, subtrahend: 8, op_symbols: vec!['+', '*'] }
    }
}

/// One job: a named partial algebra plus the case labels seen in its
/// constraint block.
#[derive(Debug, Clone, Serialize)]
pub struct Job {
    pub name: String,
    pub declared_size: usize,
    pub elements: Universe,
    pub constraints: Vec<Constraint>,
    pub case_labels: Vec<String>,
    /// 1-based first and last line of the job in the source text.
    pub source_span: (usize, usize),
}

impl Job {
    pub fn algebra(&self, settings: &Settings) -> PartialAlgebra {
        PartialAlgebra::new(
            self.elements.clone(),
            self.constraints.clone(),
            settings.op_symbols.clone(),
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Script {
    pub settings: Settings,
    pub jobs: Vec<Job>,
}

/// Result of one job, with the report block already rendered.
#[derive(Debug, Clone, Serialize)]
pub struct JobResult {
    pub job_name: String,
    pub n: usize,
    pub sub_count: u64,
    pub sigma: DyadicValue,
    #[serde(skip)]
    pub formatted: String,
}

/// Outcome of checking every job's sigma against a threshold.
#[derive(Debug, Clone)]
pub struct VerificationSummary {
    pub job_count: usize,
    pub max_sigma: Option<DyadicValue>,
    pub all_excluded: bool,
    pub offenders: Vec<String>,
}

struct Parser<'a> {
    ops: Vec<char>,
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

/// Strips a `%` comment: everything from the first `%` to the end of the
/// line is discarded, wherever it appears.
fn strip_percent(line: &str) -> &str {
    match line.find('%') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn err(line: usize, col: usize, kind: ParseErrorKind) -> ScriptError {
    ScriptError::Parse { line: line + 1, col: col + 1, kind }
}

impl<'a> Parser<'a> {
    /// Command word of a line starting with `\`, without the backslash.
    fn command_of(trimmed: &str) -> Option<(&str, &str)> {
        let rest = trimmed.strip_prefix('\\')?;
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '=')
            .unwrap_or(rest.len());
        Some((&rest[..end], rest[end..].trim_start_matches('=')))
    }

    /// The value of a header command like `\name`: the rest of its own line
    /// if nonempty, otherwise the next nonblank non-comment line. Values are
    /// trimmed; names may contain spaces, parentheses, and slashes.
    fn take_value(&mut self, same_line: &str, command: &str, at: usize) -> Result<String, ScriptError> {
        let inline = same_line.trim();
        if !inline.is_empty() {
            return Ok(inline.to_string());
        }
        while let Some(&(num, raw)) = self.lines.peek() {
            let line = strip_percent(raw);
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with("\\P") {
                self.lines.next();
                continue;
            }
            if trimmed.starts_with('\\') {
                return Err(err(num, 0, ParseErrorKind::MissingValue(command.to_string())));
            }
            self.lines.next();
            return Ok(trimmed.to_string());
        }
        Err(err(at, 0, ParseErrorKind::MissingValue(command.to_string())))
    }
}

/// Tokenizes one line of a constraint block. Appends constraint tokens and
/// case labels; `;` and `\w` comments have already been cut by the caller.
fn scan_constraint_line(
    line: &str,
    line_no: usize,
    elements: &Universe,
    ops: &[char],
    constraints: &mut Vec<Constraint>,
    case_labels: &mut Vec<String>,
) -> Result<(), ScriptError> {
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() || ch == ',' {
            i += 1;
        } else if ch == '(' {
            let close = chars[i + 1..]
                .iter()
                .position(|&c| c == ')')
                .ok_or_else(|| err(line_no, i, ParseErrorKind::UnbalancedParen))?;
            case_labels.push(chars[i + 1..i + 1 + close].iter().collect());
            i += close + 2;
        } else {
            let start = i;
            while i < chars.len()
                && !chars[i].is_whitespace()
                && !matches!(chars[i], ',' | '(' | ')' | ';')
            {
                i += 1;
            }
            let token: String = chars[start..i].iter().collect();
            let t: Vec<char> = token.chars().collect();
            if t.len() != 5 || t[3] != '=' || !ops.contains(&t[1]) {
                return Err(err(line_no, start, ParseErrorKind::MalformedConstraint(token)));
            }
            let index = |ch: char, at: usize| {
                elements
                    .index_of(ch)
                    .ok_or_else(|| err(line_no, at, ParseErrorKind::UnknownLabel(ch)))
            };
            constraints.push(Constraint {
                x: index(t[0], start)?,
                op: t[1],
                y: index(t[2], start + 2)?,
                z: index(t[4], start + 4)?,
            });
        }
    }
    Ok(())
}

/// Parses a script. Stops at `\enddata`; anything after is ignored.
pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let mut settings = Settings::default();
    let mut jobs = Vec::new();
    let mut parser = Parser {
        ops: settings.op_symbols.clone(),
        lines: text.lines().enumerate().peekable(),
    };

    while let Some((num, raw)) = parser.lines.next() {
        let line = strip_percent(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let Some((command, rest)) = Parser::command_of(trimmed) else {
            return Err(err(num, 0, ParseErrorKind::UnknownCommand(trimmed.chars().take(20).collect())));
        };
        match command {
            "P" | "" => {} // comment line ("\P free text"; a bare "\" is tolerated)
            "enddata" => break,
            "verbose" => {
                settings.verbose = match rest.trim() {
                    "true" => true,
                    "false" => false,
                    other => return Err(err(num, 0, ParseErrorKind::BadSetting(other.to_string()))),
                };
            }
            "subtrahend-in-exponent" => {
                settings.subtrahend = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(num, 0, ParseErrorKind::BadSetting(rest.trim().to_string())))?;
            }
            "operationsymbols" => {
                let ops: Vec<char> = rest.trim().chars().collect();
                if ops.is_empty() {
                    return Err(err(num, 0, ParseErrorKind::BadSetting(String::new())));
                }
                settings.op_symbols = ops.clone();
                parser.ops = ops;
            }
            "beginjob" => {
                let job = parse_job(&mut parser, num)?;
                jobs.push(job);
            }
            other => {
                return Err(err(num, 0, ParseErrorKind::UnknownCommand(other.to_string())));
            }
        }
    }
    Ok(Script { settings, jobs })
}

fn parse_job(parser: &mut Parser, begin_line: usize) -> Result<Job, ScriptError> {
    let mut name: Option<String> = None;
    let mut declared_size: Option<usize> = None;
    let mut elements: Option<Universe> = None;
    let mut constraints = Vec::new();
    let mut case_labels = Vec::new();
    let mut in_constraints = false;
    let mut last_line = begin_line;

    while let Some((num, raw)) = parser.lines.next() {
        last_line = num;
        let line = strip_percent(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some((command, rest)) = Parser::command_of(trimmed) {
            match command {
                "P" | "" => continue,
                "w" => continue, // explanation comment to end of line
                "endofjob" => {
                    let name = name
                        .ok_or_else(|| err(num, 0, ParseErrorKind::MissingValue("name".into())))?;
                    let elements = elements
                        .ok_or_else(|| err(num, 0, ParseErrorKind::MissingValue("elements".into())))?;
                    let declared = declared_size
                        .ok_or_else(|| err(num, 0, ParseErrorKind::MissingValue("size".into())))?;
                    if declared != elements.n() {
                        return Err(err(
                            num,
                            0,
                            ParseErrorKind::SizeMismatch { declared, actual: elements.n() },
                        ));
                    }
                    return Ok(Job {
                        name,
                        declared_size: declared,
                        elements,
                        constraints,
                        case_labels,
                        source_span: (begin_line + 1, num + 1),
                    });
                }
                "name" => {
                    name = Some(parser.take_value(rest, "name", num)?);
                    in_constraints = false;
                }
                "size" => {
                    let value = parser.take_value(rest, "size", num)?;
                    declared_size = Some(value.parse().map_err(|_| {
                        err(num, 0, ParseErrorKind::BadSetting(value.clone()))
                    })?);
                    in_constraints = false;
                }
                "elements" => {
                    let value = parser.take_value(rest, "elements", num)?;
                    elements = Some(
                        Universe::new(value.chars().collect(), &parser.ops)
                            .map_err(|e| err(num, 0, ParseErrorKind::BadElements(e)))?,
                    );
                    in_constraints = false;
                }
                "constraints" => {
                    if elements.is_none() {
                        return Err(err(
                            num,
                            0,
                            ParseErrorKind::OutOfOrder {
                                command: "constraints".into(),
                                needed: "\\elements".into(),
                            },
                        ));
                    }
                    in_constraints = true;
                    // Constraints may start on the same line as the command.
                    if !rest.trim().is_empty() {
                        scan_block_line(
                            rest,
                            num,
                            elements.as_ref().unwrap(),
                            &parser.ops,
                            &mut constraints,
                            &mut case_labels,
                        )?;
                    }
                }
                "beginjob" | "enddata" => {
                    return Err(err(num, 0, ParseErrorKind::UnterminatedJob));
                }
                other => {
                    return Err(err(num, 0, ParseErrorKind::UnknownCommand(other.to_string())));
                }
            }
        } else {
            if !in_constraints {
                return Err(err(num, 0, ParseErrorKind::UnknownCommand(trimmed.chars().take(20).collect())));
            }
            scan_block_line(
                line,
                num,
                elements.as_ref().unwrap(),
                &parser.ops,
                &mut constraints,
                &mut case_labels,
            )?;
        }
    }
    Err(err(last_line, 0, ParseErrorKind::UnterminatedJob))
}

/// One line inside a constraint block: cut `;` and `\w` comments, then scan.
fn scan_block_line(
    line: &str,
    line_no: usize,
    elements: &Universe,
    ops: &[char],
    constraints: &mut Vec<Constraint>,
    case_labels: &mut Vec<String>,
) -> Result<(), ScriptError> {
    let mut content = line;
    if let Some(pos) = content.find(';') {
        content = &content[..pos];
    }
    if let Some(pos) = content.find("\\w") {
        content = &content[..pos];
    }
    scan_constraint_line(content, line_no, elements, ops, constraints, case_labels)
}

/// Renders a script back to the text format. Output is canonical (header,
/// then one job per block with constraints one per line); parsing it again
/// reproduces the same settings and jobs.
pub fn render_script(script: &Script) -> String {
    let mut out = String::new();
    out.push_str(&format!("\\verbose={}\n", script.settings.verbose));
    out.push_str(&format!("\\subtrahend-in-exponent={}\n", script.settings.subtrahend));
    out.push_str(&format!(
        "\\operationsymbols={}\n",
        script.settings.op_symbols.iter().collect::<String>()
    ));
    for job in &script.jobs {
        out.push_str("\n\\beginjob\n\\name\n");
        out.push_str(&job.name);
        out.push_str("\n\\size\n");
        out.push_str(&job.declared_size.to_string());
        out.push_str("\n\\elements\n");
        out.push_str(&job.elements.labels().iter().collect::<String>());
        out.push_str("\n\\constraints\n");
        for label in &job.case_labels {
            out.push_str(&format!("({})\n", label));
        }
        for c in &job.constraints {
            let e = &job.elements;
            out.push_str(&format!(
                "{}{}{}={}\n",
                e.label(c.x),
                c.op,
                e.label(c.y),
                e.label(c.z)
            ));
        }
        out.push_str("\\endofjob\n");
    }
    out.push_str("\n\\enddata\n");
    out
}

/// Runs every job in order. Jobs are independent, so they are evaluated
/// concurrently, but results always come back in input order.
pub fn run_script(script: &Script) -> Result<Vec<JobResult>, ScriptError> {
    script
        .jobs
        .par_iter()
        .map(|job| {
            let alg = job.algebra(&script.settings);
            let sub_count = count_subuniverses(&alg)
                .map_err(|source| ScriptError::JobFailed { job: job.name.clone(), source })?;
            let sigma = DyadicValue::from_count(
                sub_count,
                script.settings.subtrahend - job.elements.n() as i64,
            );
            let mut result = JobResult {
                job_name: job.name.clone(),
                n: job.elements.n(),
                sub_count,
                sigma,
                formatted: String::new(),
            };
            result.formatted = format_result(&result, &script.settings);
            Ok(result)
        })
        .collect()
}

/// The two-line report block, byte-identical to the published convention:
/// two spaces after the name's colon, two spaces before the decimal, one
/// space before the final period, and at least 16 fractional digits.
pub fn format_result(result: &JobResult, settings: &Settings) -> String {
    format!(
        "Result for A={}:  |Sub(A)| = {}, that is,\nsigma(A) = |Sub(A)|*2^({}-|A|) =  {} .\n",
        result.job_name,
        result.sub_count,
        settings.subtrahend,
        result.sigma.to_decimal(16)
    )
}

/// Checks already-computed results against the threshold `num/den`.
/// A job is excluded when its sigma is at most the threshold; offenders are
/// the jobs whose sigma exceeds it.
pub fn summarize_results(
    results: &[JobResult],
    num: &num_bigint::BigUint,
    den: &num_bigint::BigUint,
) -> VerificationSummary {
    let mut offenders = Vec::new();
    let mut max_sigma: Option<DyadicValue> = None;
    for r in results {
        if r.sigma.cmp_ratio(num, den) == std::cmp::Ordering::Greater {
            offenders.push(r.job_name.clone());
        }
        if max_sigma.as_ref().map_or(true, |m| r.sigma > *m) {
            max_sigma = Some(r.sigma.clone());
        }
    }
    VerificationSummary {
        job_count: results.len(),
        max_sigma,
        all_excluded: offenders.is_empty(),
        offenders,
    }
}

/// Runs all jobs, then checks every sigma against the threshold `num/den`.
pub fn verify_script(
    script: &Script,
    num: &num_bigint::BigUint,
    den: &num_bigint::BigUint,
) -> Result<VerificationSummary, ScriptError> {
    Ok(summarize_results(&run_script(script)?, num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    const SMALL: &str = "\
\\P demo script\n\
\\verbose=false\n\
\\subtrahend-in-exponent=8\n\
\\operationsymbols=+*\n\
\\beginjob\n\
\\name\n\
N_5  \n\
\\size\n\
 5  \n\
\\elements\n\
01abc   \n\
\\constraints \n\
(Case-name1)  a*b=0,  a+b=1 \\w Explanation to be ignored \n\
 (Subcase-name) c*b=0  \\w more prose \n\
  (Sub-subcase-name)   c+b=1 \n\
\\endofjob\n\
\\enddata\n\
ignored tail, never parsed\n";

    #[test]
    fn parses_header_and_one_job() {
        let script = parse_script(SMALL).unwrap();
        assert!(!script.settings.verbose);
        assert_eq!(script.settings.subtrahend, 8);
        assert_eq!(script.settings.op_symbols, vec!['+', '*']);
        assert_eq!(script.jobs.len(), 1);
        let job = &script.jobs[0];
        assert_eq!(job.name, "N_5");
        assert_eq!(job.declared_size, 5);
        assert_eq!(job.elements.labels(), &['0', '1', 'a', 'b', 'c']);
        assert_eq!(job.constraints.len(), 4);
        assert_eq!(
            job.case_labels,
            vec!["Case-name1", "Subcase-name", "Sub-subcase-name"]
        );
    }

    #[test]
    fn text_after_enddata_is_never_processed() {
        // The tail is not valid syntax, so reaching it would be an error.
        assert!(parse_script(SMALL).is_ok());
    }

    #[test]
    fn empty_file_gives_default_settings_and_no_jobs() {
        let script = parse_script("").unwrap();
        assert_eq!(script.jobs.len(), 0);
        assert_eq!(script.settings.subtrahend, 8);
    }

    #[test]
    fn size_mismatch_is_reported() {
        let text = "\\beginjob\n\\name\nX\n\\size\n5\n\\elements\nabcd\n\\constraints\n\\endofjob\n";
        match parse_script(text) {
            Err(ScriptError::Parse { kind: ParseErrorKind::SizeMismatch { declared: 5, actual: 4 }, .. }) => {}
            other => panic!("expected size mismatch, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn unknown_label_and_malformed_token_are_reported() {
        let text = "\\beginjob\n\\name\nX\n\\size\n2\n\\elements\nab\n\\constraints\na+q=b\n\\endofjob\n";
        assert!(matches!(
            parse_script(text),
            Err(ScriptError::Parse { kind: ParseErrorKind::UnknownLabel('q'), .. })
        ));
        let text = "\\beginjob\n\\name\nX\n\\size\n2\n\\elements\nab\n\\constraints\na+b\n\\endofjob\n";
        assert!(matches!(
            parse_script(text),
            Err(ScriptError::Parse { kind: ParseErrorKind::MalformedConstraint(_), .. })
        ));
        // An operation symbol that was never declared is malformed too.
        let text = "\\beginjob\n\\name\nX\n\\size\n2\n\\elements\nab\n\\constraints\nafa=b\n\\endofjob\n";
        assert!(matches!(
            parse_script(text),
            Err(ScriptError::Parse { kind: ParseErrorKind::MalformedConstraint(_), .. })
        ));
    }

    #[test]
    fn missing_endofjob_is_reported() {
        let text = "\\beginjob\n\\name\nX\n\\size\n1\n\\elements\na\n\\constraints\n";
        assert!(matches!(
            parse_script(text),
            Err(ScriptError::Parse { kind: ParseErrorKind::UnterminatedJob, .. })
        ));
    }

    #[test]
    fn percent_comments_vanish_anywhere() {
        let text = "\\beginjob % start\n\\name\nX % not part of the name\n\\size\n1\n\\elements\na\n\\constraints\na+a=a % fine\n\\endofjob\n";
        let script = parse_script(text).unwrap();
        assert_eq!(script.jobs[0].name, "X");
        assert_eq!(script.jobs[0].constraints.len(), 1);
    }

    #[test]
    fn semicolon_comments_and_adjacent_case_labels() {
        let text = "\\beginjob\n\\name\nX\n\\size\n4\n\\elements\nabcd\n\\constraints\n(C1)a+b=d  c*d=a;(stray note) b+c=a\n\\endofjob\n";
        let script = parse_script(text).unwrap();
        let job = &script.jobs[0];
        // b+c=a sits after the ';' and must be ignored.
        assert_eq!(job.constraints.len(), 2);
        assert_eq!(job.case_labels, vec!["C1"]);
    }

    #[test]
    fn case_labels_may_contain_spaces() {
        let text = "\\beginjob\n\\name\nX\n\\size\n2\n\\elements\nab\n\\constraints\n(instead of always) a+b=a\n\\endofjob\n";
        let script = parse_script(text).unwrap();
        assert_eq!(script.jobs[0].case_labels, vec!["instead of always"]);
    }

    #[test]
    fn multi_valued_constraints_are_kept_in_order() {
        let text = "\\beginjob\n\\name\nX\n\\size\n3\n\\elements\nabc\n\\constraints\na+a=b a+a=c\n\\endofjob\n";
        let script = parse_script(text).unwrap();
        assert_eq!(script.jobs[0].constraints.len(), 2);
    }

    #[test]
    fn run_reports_counts_and_formats() {
        let script = parse_script(SMALL).unwrap();
        let results = run_script(&script).unwrap();
        assert_eq!(results.len(), 1);
        assert_eq!(results[0].sub_count, 23);
        assert_eq!(
            results[0].formatted,
            "Result for A=N_5:  |Sub(A)| = 23, that is,\n\
             sigma(A) = |Sub(A)|*2^(8-|A|) =  184.0000000000000000 .\n"
        );
    }

    #[test]
    fn zero_constraint_job_counts_all_subsets() {
        let text = "\\beginjob\n\\name\nfree\n\\size\n8\n\\elements\nabcdefgh\n\\constraints\n\\endofjob\n";
        let results = run_script(&parse_script(text).unwrap()).unwrap();
        assert_eq!(results[0].sub_count, 256);
    }

    #[test]
    fn verify_flags_offenders() {
        let script = parse_script(SMALL).unwrap();
        let n83 = BigUint::from(83u32);
        let one = BigUint::from(1u32);
        let summary = verify_script(&script, &n83, &one).unwrap();
        assert_eq!(summary.job_count, 1);
        assert!(!summary.all_excluded);
        assert_eq!(summary.offenders, vec!["N_5"]);
        assert_eq!(summary.max_sigma.unwrap(), DyadicValue::from_integer(184));
        // With a generous threshold the same script verifies.
        let summary = verify_script(&script, &BigUint::from(200u32), &one).unwrap();
        assert!(summary.all_excluded);
    }

    #[test]
    fn render_parse_round_trip_preserves_jobs() {
        let script = parse_script(SMALL).unwrap();
        let again = parse_script(&render_script(&script)).unwrap();
        assert_eq!(again.jobs.len(), script.jobs.len());
        for (a, b) in script.jobs.iter().zip(again.jobs.iter()) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.declared_size, b.declared_size);
            assert_eq!(a.elements.labels(), b.elements.labels());
            assert_eq!(a.constraints, b.constraints);
        }
    }
}
