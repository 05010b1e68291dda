//! Parameter-sweep engine: JSON config schema with derived-parameter rules,
//! grid evaluation of the full steady-state → pair-matrix pipeline, the
//! dressed-state saturation scan, and deterministic CSV serialization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{build_basis, Polarization};
use crate::dressed::{
    cubic_shifts, diagonalize_manifolds, find, transition_table, DressedLabel,
};
use crate::error::{Error, Result};
use crate::lindblad::{
    build_liouvillian, collapse_channels, shell_population, steady_state, SHELL_WARN_THRESHOLD,
};
use crate::model::{rotating_frame_hamiltonian, ModelParams};
use crate::pairs::{
    build_transition_operators, concurrence, pair_density_matrix, photon_frequencies,
    CascadeBranch,
};

/// Largest supported photon-number truncation. Beyond this the dense
/// Liouvillian (`16·d⁴` bytes, `d = 4(n_max+1)²`) no longer fits in ordinary
/// memory.
pub const MAX_N_MAX: usize = 4;

fn default_n_max() -> usize {
    2
}

/// One linearly spaced axis over a named model parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    /// Model parameter name (see [`ModelParams::set`]).
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    /// The `i`-th grid value (endpoints included; `count = 1` pins `start`).
    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }

    /// All grid values in order.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }

    fn validate(&self, which: &str) -> Result<()> {
        let mut scratch = ModelParams::default();
        scratch.set(&self.name, scratch.get(&self.name)?)?;
        if self.count < 1 {
            return Err(Error::InvalidParams(format!("{which}: count must be >= 1")));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidParams(format!("{which}: bounds must be finite")));
        }
        if self.start > self.stop {
            return Err(Error::InvalidParams(format!("{which}: start must be <= stop")));
        }
        Ok(())
    }
}

/// `axes` config section: a sweep uses both axes, a dressed scan only the
/// first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxesSection {
    pub axis1: Axis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis2: Option<Axis>,
}

/// `output` config section.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// CSV destination; CLI `--out` overrides, `point` runs may omit it.
    pub path: Option<String>,
    /// Also write `<path>.meta.json` with the fully resolved config.
    pub meta: bool,
}

/// Sweep/scan configuration (JSON sections `model`, `axes`, `rules`,
/// `output`, plus `branch` and `n_max`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub model: ModelParams,
    pub axes: AxesSection,
    /// Derived-parameter rules like `"omega_l_det = -g"`, evaluated in order
    /// at every grid point after the axis values are applied.
    #[serde(default)]
    pub rules: Vec<String>,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub branch: CascadeBranch,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Free-form description; carried into the metadata sidecar.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub comment: String,
}

impl SweepConfig {
    /// Parse and validate a JSON config document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParams(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Validate the model template, axes, rules and truncation order.
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.axes.axis1.validate("axes.axis1")?;
        if let Some(axis2) = &self.axes.axis2 {
            axis2.validate("axes.axis2")?;
            if axis2.name == self.axes.axis1.name {
                return Err(Error::InvalidParams(
                    "axes.axis1 and axes.axis2 sweep the same parameter".into(),
                ));
            }
        }
        for rule in self.compiled_rules()? {
            if rule.target == self.axes.axis1.name
                || Some(&rule.target) == self.axes.axis2.as_ref().map(|a| &a.name)
            {
                return Err(Error::InvalidParams(format!(
                    "rule overwrites swept axis parameter `{}`",
                    rule.target
                )));
            }
        }
        if self.n_max < 2 {
            return Err(Error::InvalidParams(
                "n_max must be >= 2 (the cascade needs the two-excitation manifold)".into(),
            ));
        }
        if self.n_max > MAX_N_MAX {
            return Err(Error::InvalidParams(format!(
                "n_max = {} not supported: the dense Liouvillian needs 16·d⁴ bytes \
                 (d = 4(n_max+1)²); the practical limit is {MAX_N_MAX}",
                self.n_max
            )));
        }
        Ok(())
    }

    /// Parse the `rules` strings.
    pub fn compiled_rules(&self) -> Result<Vec<Rule>> {
        self.rules.iter().map(|s| Rule::parse(s)).collect()
    }

    /// Model parameters at one grid point: axis values applied, then the
    /// derived rules in order.
    pub fn resolve_point(&self, i1: usize, i2: usize, rules: &[Rule]) -> Result<ModelParams> {
        let mut p = self.model.clone();
        p.set(&self.axes.axis1.name, self.axes.axis1.value(i1))?;
        if let Some(axis2) = &self.axes.axis2 {
            p.set(&axis2.name, axis2.value(i2))?;
        }
        for rule in rules {
            let v = rule.eval(&p)?;
            p.set(&rule.target, v)?;
        }
        Ok(p)
    }
}

/// A derived-parameter rule `target = expression`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub target: String,
    expr: Expr,
}

impl Rule {
    /// Parse `"name = expr"`, checking the target is a model parameter and
    /// the expression references only model parameters.
    pub fn parse(text: &str) -> Result<Rule> {
        let bad = |msg: &str| Error::BadExpression {
            expr: text.to_string(),
            msg: msg.to_string(),
        };
        let (target, rhs) = text.split_once('=').ok_or_else(|| bad("missing `=`"))?;
        if rhs.contains('=') {
            return Err(bad("more than one `=`"));
        }
        let target = target.trim().to_string();
        let mut scratch = ModelParams::default();
        let current = scratch
            .get(&target)
            .map_err(|_| bad("left side is not a model parameter"))?;
        scratch.set(&target, current)?;
        let expr = Expr::parse(rhs).map_err(|msg| bad(&msg))?;
        for var in expr.variables() {
            if scratch.get(&var).is_err() {
                return Err(bad(&format!("unknown parameter `{var}` on right side")));
            }
        }
        Ok(Rule { target, expr })
    }

    /// Evaluate the right-hand side against the given parameters.
    pub fn eval(&self, params: &ModelParams) -> Result<f64> {
        self.expr.eval(params)
    }
}

/// Arithmetic expression over model-parameter names: `+ - * /`, unary minus,
/// parentheses, decimal literals.
#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
}

impl Expr {
    fn parse(text: &str) -> std::result::Result<Expr, String> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(format!("unexpected trailing input at token {}", p.pos));
        }
        Ok(e)
    }

    fn variables(&self) -> Vec<String> {
        match self {
            Expr::Num(_) => vec![],
            Expr::Var(v) => vec![v.clone()],
            Expr::Neg(e) => e.variables(),
            Expr::Bin(_, a, b) => {
                let mut v = a.variables();
                v.extend(b.variables());
                v
            }
        }
    }

    fn eval(&self, params: &ModelParams) -> Result<f64> {
        Ok(match self {
            Expr::Num(x) => *x,
            Expr::Var(name) => params.get(name)?,
            Expr::Neg(e) => -e.eval(params)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(params)?, b.eval(params)?);
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    '/' => a / b,
                    _ => unreachable!("parser only emits + - * /"),
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> std::result::Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' | '-' | '*' | '/' => {
                tokens.push(Token::Op(c));
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                let num = lit.parse::<f64>().map_err(|_| format!("bad number `{lit}`"))?;
                tokens.push(Token::Num(num));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> std::result::Result<Expr, String> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek() {
            let op = *op;
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> std::result::Result<Expr, String> {
        let mut lhs = self.factor()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek() {
            let op = *op;
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> std::result::Result<Expr, String> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.factor()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> std::result::Result<Expr, String> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(x)) => {
                self.pos += 1;
                Ok(Expr::Num(x))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err("missing `)`".into()),
                }
            }
            other => Err(format!("expected a value, found {other:?}")),
        }
    }
}

/// How a grid-point evaluation ended.
#[derive(Debug, Clone, PartialEq)]
pub enum PointStatus {
    Ok,
    /// Steady state carries no two-excitation weight (e.g. zero drive);
    /// EoF/concurrence are emitted as `NaN` sentinels.
    ZeroFlux,
    /// Pipeline failure (message retained); all observables are `NaN`.
    Failed(String),
}

impl PointStatus {
    /// CSV form: `ok`, `zero_flux`, or `error: <message>` with separators
    /// sanitized out of the message.
    pub fn as_csv_field(&self) -> String {
        match self {
            PointStatus::Ok => "ok".into(),
            PointStatus::ZeroFlux => "zero_flux".into(),
            PointStatus::Failed(msg) => format!(
                "error: {}",
                msg.replace([',', '\n', '\r'], ";")
            ),
        }
    }
}

/// Observables of one grid point (`NaN` marks sentinel values).
#[derive(Debug, Clone)]
pub struct PointRecord {
    pub eof: f64,
    pub concurrence: f64,
    /// Pair-matrix diagonal `(p_LR, p_RL, p_LL, p_RR)`.
    pub diag: [f64; 4],
    /// Liouvillian residual of the steady-state solve.
    pub residual: f64,
    /// Steady-state population on the truncation shell.
    pub shell_population: f64,
    /// `shell_population > 1e-4`: raise `n_max`.
    pub shell_warn: bool,
    pub status: PointStatus,
}

impl PointRecord {
    fn failed(message: String) -> PointRecord {
        PointRecord {
            eof: f64::NAN,
            concurrence: f64::NAN,
            diag: [f64::NAN; 4],
            residual: f64::NAN,
            shell_population: f64::NAN,
            shell_warn: false,
            status: PointStatus::Failed(message),
        }
    }
}

/// Full artifacts of one grid-point evaluation.
#[derive(Debug, Clone)]
pub struct PointDetail {
    pub record: PointRecord,
    /// `None` when the point has zero pair flux.
    pub pair: Option<crate::pairs::PairDensityMatrix>,
    /// Steady-state density matrix.
    pub rho: crate::basis::Operator,
}

/// Run the full pipeline (basis → Hamiltonian → Liouvillian steady state →
/// dressed cascade → pair matrix → EoF) at a single parameter point.
/// Failures are captured in the record, never panicked or propagated.
pub fn evaluate_point(params: &ModelParams, n_max: usize, branch: CascadeBranch) -> PointRecord {
    match evaluate_point_detailed(params, n_max, branch) {
        Ok(detail) => detail.record,
        Err(e) => PointRecord::failed(e.to_string()),
    }
}

/// [`evaluate_point`] keeping the steady state and pair matrix. Unlike the
/// record-only wrapper this propagates pipeline failures (zero pair flux is
/// not a failure: it yields a `ZeroFlux` record with `pair = None`).
pub fn evaluate_point_detailed(
    params: &ModelParams,
    n_max: usize,
    branch: CascadeBranch,
) -> Result<PointDetail> {
    params.validate()?;
    let basis = build_basis(n_max)?;
    let h = rotating_frame_hamiltonian(&basis, params)?;
    let liou = build_liouvillian(&h, &collapse_channels(&basis, params));
    let ss = steady_state(&liou)?;
    let shell = shell_population(&basis, &ss.rho);
    let dressed = diagonalize_manifolds(&basis, params)?;
    let table = transition_table(&basis, &dressed);
    let ops = build_transition_operators(&table, &dressed, branch);
    let (omega1, omega2) = photon_frequencies(params, branch);
    let base = PointRecord {
        eof: f64::NAN,
        concurrence: f64::NAN,
        diag: [f64::NAN; 4],
        residual: ss.residual,
        shell_population: shell,
        shell_warn: shell > SHELL_WARN_THRESHOLD,
        status: PointStatus::ZeroFlux,
    };
    match pair_density_matrix(&ss.rho, &ops, omega1, omega2) {
        Ok(pair) => {
            let c = concurrence(&pair);
            Ok(PointDetail {
                record: PointRecord {
                    eof: crate::pairs::eof_from_concurrence(c),
                    concurrence: c,
                    diag: pair.diagonal(),
                    status: PointStatus::Ok,
                    ..base
                },
                pair: Some(pair),
                rho: ss.rho,
            })
        }
        Err(Error::ZeroPairFlux) => Ok(PointDetail {
            record: base,
            pair: None,
            rho: ss.rho,
        }),
        Err(e) => Err(e),
    }
}

/// Grid results in row-major order (`axis1` outer, `axis2` inner).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis1: Axis,
    pub axis2: Axis,
    pub records: Vec<PointRecord>,
}

impl SweepResult {
    pub fn record(&self, i1: usize, i2: usize) -> &PointRecord {
        &self.records[i1 * self.axis2.count + i2]
    }

    /// Highest finite EoF and its axis location.
    pub fn max_eof(&self) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for i1 in 0..self.axis1.count {
            for i2 in 0..self.axis2.count {
                let e = self.record(i1, i2).eof;
                if e.is_finite() && best.map_or(true, |(b, _, _)| e > b) {
                    best = Some((e, self.axis1.value(i1), self.axis2.value(i2)));
                }
            }
        }
        best
    }
}

/// Evaluate the config's full grid. Points are independent and run on the
/// current rayon pool; record order is grid order regardless of scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let axis1 = cfg.axes.axis1.clone();
    let axis2 = cfg
        .axes
        .axis2
        .clone()
        .ok_or_else(|| Error::InvalidParams("sweep requires axes.axis2".into()))?;
    let rules = cfg.compiled_rules()?;
    let n2 = axis2.count;
    let records: Vec<PointRecord> = (0..axis1.count * n2)
        .into_par_iter()
        .map(|k| match cfg.resolve_point(k / n2, k % n2, &rules) {
            Ok(params) => evaluate_point(&params, cfg.n_max, cfg.branch),
            Err(e) => PointRecord::failed(e.to_string()),
        })
        .collect();
    Ok(SweepResult {
        axis1,
        axis2,
        records,
    })
}

/// Format a float with 17 significant digits (shortest exact scientific
/// form would not be diff-stable across widths); `NaN` stays literal.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write sweep results as CSV: header then one row per grid point in grid
/// order. Byte-deterministic for a given config and build.
pub fn write_sweep_csv<W: std::io::Write>(result: &SweepResult, w: &mut W) -> std::io::Result<()> {
    writeln!(
        w,
        "{},{},eof,concurrence,p_lr,p_rl,p_ll,p_rr,residual,shell_population,shell_warn,status",
        result.axis1.name, result.axis2.name
    )?;
    for i1 in 0..result.axis1.count {
        for i2 in 0..result.axis2.count {
            let r = result.record(i1, i2);
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                fmt_f64(result.axis1.value(i1)),
                fmt_f64(result.axis2.value(i2)),
                fmt_f64(r.eof),
                fmt_f64(r.concurrence),
                fmt_f64(r.diag[0]),
                fmt_f64(r.diag[1]),
                fmt_f64(r.diag[2]),
                fmt_f64(r.diag[3]),
                fmt_f64(r.residual),
                fmt_f64(r.shell_population),
                u8::from(r.shell_warn),
                r.status.as_csv_field()
            )?;
        }
    }
    Ok(())
}

/// One record of the dressed-state scan over `Δ_B`.
#[derive(Debug, Clone)]
pub struct DressedScanRecord {
    pub delta_b: f64,
    /// Analytic cubic shifts `a₁ < a₂ < a₃`.
    pub a: [f64; 3],
    /// `|γ|` of the two-excitation → polariton steps,
    /// `[intermediate ∈ (R+, L+)][upper ∈ (T1, T2, T3, S)]`.
    pub gamma_abs: [[f64; 4]; 2],
}

/// Columns of the dressed-scan CSV after `delta_b,a1,a2,a3`.
pub const DRESSED_SCAN_GAMMA_COLUMNS: [&str; 8] = [
    "gamma_rp_t1",
    "gamma_rp_t2",
    "gamma_rp_t3",
    "gamma_rp_s",
    "gamma_lp_t1",
    "gamma_lp_t2",
    "gamma_lp_t3",
    "gamma_lp_s",
];

/// Scan the dressed-state structure along `axis1` (which must sweep
/// `delta_b`): analytic shifts and the cascade transition amplitudes into
/// the upper polaritons. Purely spectral; no steady states are solved.
pub fn dressed_scan(cfg: &SweepConfig) -> Result<Vec<DressedScanRecord>> {
    cfg.validate()?;
    if cfg.axes.axis1.name != "delta_b" {
        return Err(Error::InvalidParams(format!(
            "dressed scan sweeps `delta_b`, got axis1 = `{}`",
            cfg.axes.axis1.name
        )));
    }
    if cfg.axes.axis2.is_some() {
        return Err(Error::InvalidParams(
            "dressed scan uses a single axis; remove axes.axis2".into(),
        ));
    }
    let rules = cfg.compiled_rules()?;
    let basis = build_basis(cfg.n_max)?;
    let mut out = Vec::with_capacity(cfg.axes.axis1.count);
    for i in 0..cfg.axes.axis1.count {
        let params = cfg.resolve_point(i, 0, &rules)?;
        params.validate()?;
        let a = cubic_shifts(params.g, params.g_b, params.delta_b);
        let dressed = diagonalize_manifolds(&basis, &params)?;
        // cross-check the analytic roots against the numerical shifts
        for (j, label) in [DressedLabel::T1, DressedLabel::T2, DressedLabel::T3]
            .into_iter()
            .enumerate()
        {
            let shift = find(&dressed, label).energy_shift;
            let defect = (shift + a[j]).abs();
            if defect > 1e-8 * params.delta_b.max(1.0) {
                return Err(Error::InternalInconsistency(format!(
                    "cubic root a{} = {} vs numerical shift {} (Δ_B = {})",
                    j + 1,
                    a[j],
                    shift,
                    params.delta_b
                )));
            }
        }
        let table = transition_table(&basis, &dressed);
        let uppers = [
            DressedLabel::T1,
            DressedLabel::T2,
            DressedLabel::T3,
            DressedLabel::S,
        ];
        let mut gamma_abs = [[0.0f64; 4]; 2];
        for (k, (inter, pol)) in [
            (DressedLabel::RPlus, Polarization::L),
            (DressedLabel::LPlus, Polarization::R),
        ]
        .into_iter()
        .enumerate()
        {
            for (u, upper) in uppers.into_iter().enumerate() {
                gamma_abs[k][u] = table.amplitude(inter, upper, pol).norm();
            }
        }
        out.push(DressedScanRecord {
            delta_b: params.delta_b,
            a,
            gamma_abs,
        });
    }
    Ok(out)
}

/// Write dressed-scan records as CSV (same float conventions as sweeps).
pub fn write_dressed_scan_csv<W: std::io::Write>(
    records: &[DressedScanRecord],
    w: &mut W,
) -> std::io::Result<()> {
    writeln!(
        w,
        "delta_b,a1,a2,a3,{}",
        DRESSED_SCAN_GAMMA_COLUMNS.join(",")
    )?;
    for r in records {
        let gammas: Vec<String> = r
            .gamma_abs
            .iter()
            .flatten()
            .map(|&g| fmt_f64(g))
            .collect();
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(r.delta_b),
            fmt_f64(r.a[0]),
            fmt_f64(r.a[1]),
            fmt_f64(r.a[2]),
            gammas.join(",")
        )?;
    }
    Ok(())
}

/// Model parameters of a single-point run: the config's model template with
/// the derived rules applied (axes are ignored).
pub fn resolve_model(cfg: &SweepConfig) -> Result<ModelParams> {
    cfg.validate()?;
    let mut params = cfg.model.clone();
    for rule in &cfg.compiled_rules()? {
        let v = rule.eval(&params)?;
        params.set(&rule.target, v)?;
    }
    Ok(params)
}
