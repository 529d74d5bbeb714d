use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::Instant;

use crate::derivation::{Context, ContextKind, Dir};
use crate::symkernel::{
    lower, parse_expr, ratio_eq, solve_linear_2x2, ExprAst, Poly, Ratio, SymError, VarId,
};

use super::schema::{
    is_reserved_input, CheckReport, CheckSpec, CheckStatus, Procedure, Script, ScriptError,
};
use super::scripts;

/// Result of replaying one theorem script.
#[derive(Clone, Debug)]
pub struct TheoremOutcome {
    pub name: String,
    pub reports: Vec<CheckReport>,
}

impl TheoremOutcome {
    pub fn all_passed(&self) -> bool {
        self.reports
            .iter()
            .all(|r| r.status == CheckStatus::Pass)
    }

    pub fn counts(&self) -> (usize, usize, usize, usize) {
        let mut c = (0, 0, 0, 0);
        for r in &self.reports {
            match r.status {
                CheckStatus::Pass => c.0 += 1,
                CheckStatus::Fail => c.1 += 1,
                CheckStatus::Error => c.2 += 1,
                CheckStatus::Skipped => c.3 += 1,
            }
        }
        c
    }
}

/// Load a script from a file (or the shipped script when `expected` is
/// `None`) and run every check in order.
pub fn run_theorem(name: &str, expected: Option<&Path>) -> Result<TheoremOutcome, ScriptError> {
    let text = match expected {
        Some(path) => std::fs::read_to_string(path)?,
        None => scripts::embedded(name)
            .ok_or_else(|| ScriptError::UnknownTheorem(name.to_string()))?
            .to_string(),
    };
    let script: Script = serde_json::from_str(&text)?;
    script.validate()?;
    if script.name != name {
        return Err(ScriptError::Validation(format!(
            "script file is for theorem `{}`, not `{name}`",
            script.name
        )));
    }
    Ok(run_script(&script))
}

/// Execute a validated script.
pub fn run_script(script: &Script) -> TheoremOutcome {
    let mut state = RunState {
        bindings: BTreeMap::new(),
        poisoned: BTreeSet::new(),
        builtins: BTreeMap::new(),
    };
    let reports = script
        .checks
        .iter()
        .map(|check| state.run_check(check))
        .collect();
    TheoremOutcome {
        name: script.name.clone(),
        reports,
    }
}

const BUILTIN_NAMES: [&str; 4] = ["omega1", "omega2", "gauss_residual", "commutator"];

struct RunState {
    bindings: BTreeMap<String, Ratio>,
    /// Binding names owned by checks that errored or were skipped.
    poisoned: BTreeSet<String>,
    builtins: BTreeMap<(ContextKind, &'static str), Ratio>,
}

enum CheckFailure {
    /// Comparison mismatch: residual DSL plus a message.
    Mismatch { residual: String, message: String },
    /// The check could not run at all.
    Error(String),
    /// A referenced binding comes from an errored or skipped check.
    Skipped(String),
}

type CheckResult<T> = Result<T, CheckFailure>;

impl From<SymError> for CheckFailure {
    fn from(e: SymError) -> Self {
        CheckFailure::Error(e.to_string())
    }
}

impl From<crate::derivation::DeriveError> for CheckFailure {
    fn from(e: crate::derivation::DeriveError) -> Self {
        CheckFailure::Error(e.to_string())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CompareMode {
    Exact,
    Factor,
}

impl RunState {
    fn run_check(&mut self, spec: &CheckSpec) -> CheckReport {
        let start = Instant::now();
        let (status, residual, message) = match self.execute(spec) {
            Ok(message) => (CheckStatus::Pass, String::new(), message),
            Err(CheckFailure::Mismatch { residual, message }) => {
                (CheckStatus::Fail, residual, message)
            }
            Err(CheckFailure::Error(message)) => (CheckStatus::Error, String::new(), message),
            Err(CheckFailure::Skipped(message)) => (CheckStatus::Skipped, String::new(), message),
        };
        if matches!(status, CheckStatus::Error | CheckStatus::Skipped) {
            // poison every name this check would have bound
            self.poisoned.insert(spec.id.clone());
            for key in spec.inputs.keys().chain(spec.expected.keys()) {
                self.poisoned.insert(format!("{}_{}", spec.id, key));
            }
            self.poisoned.insert(format!("{}_x", spec.id));
            self.poisoned.insert(format!("{}_y", spec.id));
        }
        CheckReport {
            id: spec.id.clone(),
            status,
            residual,
            elapsed_ms: start.elapsed().as_millis() as u64,
            message,
        }
    }

    fn builtin(&mut self, ctx: &'static Context, name: &str) -> CheckResult<Option<Ratio>> {
        let canonical = match BUILTIN_NAMES.iter().find(|b| **b == name) {
            Some(b) => *b,
            None => return Ok(None),
        };
        if let Some(hit) = self.builtins.get(&(ctx.kind(), canonical)) {
            return Ok(Some(hit.clone()));
        }
        let value = match canonical {
            "omega1" => ctx.codazzi_omegas()?.0,
            "omega2" => ctx.codazzi_omegas()?.1,
            "gauss_residual" => ctx.gauss_residual()?,
            "commutator" => ctx.mixed_second_derivative_gap()?,
            _ => unreachable!(),
        };
        self.builtins
            .insert((ctx.kind(), canonical), value.clone());
        Ok(Some(value))
    }

    /// Resolve every non-reserved input of the check to a value, allowing
    /// inputs to reference each other (in any order), earlier bindings,
    /// context builtins and the variable universe.
    fn resolve_locals(
        &mut self,
        spec: &CheckSpec,
        ctx: &'static Context,
    ) -> CheckResult<BTreeMap<String, Ratio>> {
        let mut pending: BTreeMap<String, ExprAst> = BTreeMap::new();
        for (key, text) in &spec.inputs {
            if is_reserved_input(key) {
                continue;
            }
            let ast = parse_expr(text).map_err(|e| {
                CheckFailure::Error(format!("input `{key}` does not parse: {e}"))
            })?;
            pending.insert(key.clone(), ast);
        }
        let mut locals: BTreeMap<String, Ratio> = BTreeMap::new();
        loop {
            let mut progressed = false;
            let keys: Vec<String> = pending.keys().cloned().collect();
            for key in keys {
                let ast = &pending[&key];
                match self.lower_ast(ast, ctx, &locals) {
                    Ok(value) => {
                        locals.insert(key.clone(), value);
                        pending.remove(&key);
                        progressed = true;
                    }
                    Err(CheckFailure::Error(_)) if self.has_unresolved_local(ast, &pending) => {
                        // wait for a sibling input to resolve first
                    }
                    Err(other) => return Err(other),
                }
            }
            if pending.is_empty() {
                return Ok(locals);
            }
            if !progressed {
                let names: Vec<&str> = pending.keys().map(String::as_str).collect();
                return Err(CheckFailure::Error(format!(
                    "unresolved input references among {names:?}"
                )));
            }
        }
    }

    fn has_unresolved_local(&self, ast: &ExprAst, pending: &BTreeMap<String, ExprAst>) -> bool {
        fn names<'a>(ast: &'a ExprAst, out: &mut Vec<&'a str>) {
            match ast {
                ExprAst::Name(n) => out.push(n),
                ExprAst::Neg(x) | ExprAst::Pow(x, _) => names(x, out),
                ExprAst::Add(x, y)
                | ExprAst::Sub(x, y)
                | ExprAst::Mul(x, y)
                | ExprAst::Div(x, y) => {
                    names(x, out);
                    names(y, out);
                }
                ExprAst::Int(_) => {}
            }
        }
        let mut out = Vec::new();
        names(ast, &mut out);
        out.into_iter().any(|n| pending.contains_key(n))
    }

    fn lower_ast(
        &mut self,
        ast: &ExprAst,
        ctx: &'static Context,
        locals: &BTreeMap<String, Ratio>,
    ) -> CheckResult<Ratio> {
        // pre-compute any builtins the expression mentions so their errors
        // surface loudly instead of reading as unknown names
        let mut builtin_cache: BTreeMap<String, Ratio> = BTreeMap::new();
        for name in BUILTIN_NAMES {
            if ast_mentions(ast, name) {
                if let Some(v) = self.builtin(ctx, name)? {
                    builtin_cache.insert(name.to_string(), v);
                }
            }
        }
        let value = lower(ast, &|name: &str| {
            if let Some(v) = VarId::from_name(name) {
                return Some(Ratio::var(v));
            }
            if let Some(v) = locals.get(name) {
                return Some(v.clone());
            }
            if let Some(v) = self.bindings.get(name) {
                return Some(v.clone());
            }
            builtin_cache.get(name).cloned()
        });
        match value {
            // every expression is interpreted in its check's context, so
            // defined symbols expand right away
            Ok(v) => Ok(ctx.expand(&v)?),
            Err(SymError::UnknownName(name)) => {
                if self.poisoned.contains(&name) {
                    Err(CheckFailure::Skipped(format!(
                        "depends on `{name}` from an errored check"
                    )))
                } else {
                    Err(CheckFailure::Error(format!("unknown name `{name}`")))
                }
            }
            Err(e) => Err(e.into()),
        }
    }

    fn lower_text(
        &mut self,
        text: &str,
        ctx: &'static Context,
        locals: &BTreeMap<String, Ratio>,
    ) -> CheckResult<Ratio> {
        let ast =
            parse_expr(text).map_err(|e| CheckFailure::Error(format!("parse error: {e}")))?;
        self.lower_ast(&ast, ctx, locals)
    }

    fn execute(&mut self, spec: &CheckSpec) -> CheckResult<String> {
        let kind = ContextKind::from_name(&spec.context)
            .ok_or_else(|| CheckFailure::Error(format!("unknown context `{}`", spec.context)))?;
        let ctx = Context::shared(kind);
        let locals = self.resolve_locals(spec, ctx)?;
        let mode = match spec.inputs.get("mode").map(String::as_str) {
            None | Some("exact") => CompareMode::Exact,
            Some("factor") => CompareMode::Factor,
            Some(other) => {
                return Err(CheckFailure::Error(format!("unknown mode `{other}`")));
            }
        };

        // Comparison mismatches are deferred so that a failing check still
        // exports its computed bindings; hard errors abort immediately.
        let mut verdict: Result<(), CheckFailure> = Ok(());
        let mut note = |v: Result<(), CheckFailure>| -> CheckResult<()> {
            match v {
                Ok(()) => Ok(()),
                Err(m @ CheckFailure::Mismatch { .. }) => {
                    if verdict.is_ok() {
                        verdict = Err(m);
                    }
                    Ok(())
                }
                Err(other) => Err(other),
            }
        };

        let mut message = String::new();
        let mut computed_exports: Vec<(String, Ratio)> = Vec::new();
        let principal: Ratio;
        match spec.procedure {
            Procedure::DeriveAndCompare => {
                let expr = self.required_expr(spec, ctx, &locals)?;
                let dir = self.required_dir(spec)?;
                let value = ctx.derive(dir, &expr)?;
                if let Some(text) = spec.expected.get("value") {
                    let want = self.lower_text(text, ctx, &locals)?;
                    let r = self.compare(mode, &value, &want, &mut message);
                    note(r)?;
                } else {
                    message.push_str("bound only");
                }
                principal = value;
            }
            Procedure::SubstituteAndCompare => {
                let expr = self.required_expr(spec, ctx, &locals)?;
                let mut map = BTreeMap::new();
                for (key, text) in &spec.inputs {
                    if let Some(var) = key.strip_prefix("at:") {
                        let v = VarId::from_name(var).ok_or_else(|| {
                            CheckFailure::Error(format!("unknown substitution variable `{var}`"))
                        })?;
                        map.insert(v, self.lower_text(text, ctx, &locals)?);
                    }
                }
                let value = expr.substitute(&map)?;
                if let Some(text) = spec.expected.get("value") {
                    let want = self.lower_text(text, ctx, &locals)?;
                    let r = self.compare(mode, &value, &want, &mut message);
                    note(r)?;
                } else {
                    message.push_str("bound only");
                }
                principal = value;
            }
            Procedure::EquateTwoExpressions => {
                let lhs = self.named_input(&locals, "lhs")?;
                let rhs = self.named_input(&locals, "rhs")?;
                match mode {
                    CompareMode::Exact => {
                        let diff = ctx.expand(&lhs)?.sub(&ctx.expand(&rhs)?)?;
                        let want = match spec.expected.get("residual") {
                            Some(text) => self.lower_text(text, ctx, &locals)?,
                            None => Ratio::zero(),
                        };
                        if ratio_eq(&diff, &want)? {
                            if !want.is_zero() {
                                message = format!(
                                    "matched the recorded non-zero residual {}",
                                    want.to_dsl()
                                );
                            }
                        } else {
                            let res = diff.sub(&want)?;
                            note(Err(CheckFailure::Mismatch {
                                residual: res.to_dsl(),
                                message: "difference does not match the expected residual".into(),
                            }))?;
                        }
                        principal = diff;
                    }
                    CompareMode::Factor => {
                        let lhs = ctx.expand(&lhs)?;
                        let rhs = ctx.expand(&rhs)?;
                        let r = self.compare(CompareMode::Factor, &lhs, &rhs, &mut message);
                        note(r)?;
                        principal = lhs;
                    }
                }
            }
            Procedure::Solve2x2AndCompare => {
                let p1 = self.named_input(&locals, "p1")?;
                let q1 = self.named_input(&locals, "q1")?;
                let r1 = self.named_input(&locals, "r1")?;
                let p2 = self.named_input(&locals, "p2")?;
                let q2 = self.named_input(&locals, "q2")?;
                let r2 = self.named_input(&locals, "r2")?;
                let (x, y) = solve_linear_2x2(&p1, &q1, &r1, &p2, &q2, &r2)?;
                if let Some(text) = spec.expected.get("x") {
                    let want = self.lower_text(text, ctx, &locals)?;
                    let r = self.compare(mode, &x, &want, &mut message);
                    note(r)?;
                }
                if let Some(text) = spec.expected.get("y") {
                    let want = self.lower_text(text, ctx, &locals)?;
                    let r = self.compare(mode, &y, &want, &mut message);
                    note(r)?;
                }
                computed_exports.push(("x".to_string(), x.clone()));
                computed_exports.push(("y".to_string(), y));
                principal = x;
            }
            Procedure::CollectAndCompare => {
                let expr = self.required_expr(spec, ctx, &locals)?;
                let var_name = spec
                    .inputs
                    .get("var")
                    .ok_or_else(|| CheckFailure::Error("missing `var` input".into()))?;
                let var = VarId::from_name(var_name).ok_or_else(|| {
                    CheckFailure::Error(format!("unknown collect variable `{var_name}`"))
                })?;
                let num = ctx.expand(&expr)?;
                let clearing = num.den()?;
                let coeffs = num.num().collect_coefficients(var);
                message = format!(
                    "degree {} in {}; clearing multiplier {}",
                    coeffs.len().saturating_sub(1),
                    var_name,
                    clearing.to_dsl()
                );
                let r = self.compare_coefficients(spec, ctx, &locals, var_name, &coeffs, &mut message);
                note(r)?;
                principal = Ratio::from_poly(num.num().clone());
            }
        }

        // export bindings: locals, then expected texts, then computed
        // values (which win any name collision), then the principal
        for (key, value) in &locals {
            self.bindings
                .insert(format!("{}_{}", spec.id, key), value.clone());
        }
        for (key, text) in &spec.expected {
            if computed_exports.iter().any(|(k, _)| k == key) {
                continue;
            }
            if let Ok(v) = self.lower_text(text, ctx, &locals) {
                self.bindings.insert(format!("{}_{}", spec.id, key), v);
            }
        }
        for (key, value) in computed_exports {
            self.bindings.insert(format!("{}_{}", spec.id, key), value);
        }
        self.bindings.insert(spec.id.clone(), principal);
        verdict.map(|()| message)
    }

    fn required_expr(
        &mut self,
        spec: &CheckSpec,
        ctx: &'static Context,
        locals: &BTreeMap<String, Ratio>,
    ) -> CheckResult<Ratio> {
        let text = spec
            .inputs
            .get("expr")
            .ok_or_else(|| CheckFailure::Error("missing `expr` input".into()))?;
        self.lower_text(text, ctx, locals)
    }

    fn named_input(&self, locals: &BTreeMap<String, Ratio>, name: &str) -> CheckResult<Ratio> {
        match locals.get(name) {
            Some(v) => Ok(v.clone()),
            None => Err(CheckFailure::Error(format!("missing `{name}` input"))),
        }
    }

    fn required_dir(&self, spec: &CheckSpec) -> CheckResult<Dir> {
        let text = spec
            .inputs
            .get("dir")
            .ok_or_else(|| CheckFailure::Error("missing `dir` input".into()))?;
        text.parse::<u8>()
            .ok()
            .and_then(Dir::from_number)
            .ok_or_else(|| CheckFailure::Error(format!("invalid direction `{text}`")))
    }

    fn compare(
        &mut self,
        mode: CompareMode,
        computed: &Ratio,
        expected: &Ratio,
        message: &mut String,
    ) -> CheckResult<()> {
        match mode {
            CompareMode::Exact => {
                if ratio_eq(computed, expected)? {
                    Ok(())
                } else {
                    let res = computed.sub(expected)?;
                    Err(CheckFailure::Mismatch {
                        residual: res.to_dsl(),
                        message: "computed value does not match the expected expression".into(),
                    })
                }
            }
            CompareMode::Factor => {
                let target = primitive_poly(expected)?;
                if target.is_zero() {
                    return Err(CheckFailure::Error(
                        "factor mode requires a non-zero polynomial expectation".into(),
                    ));
                }
                match computed.num().div_exact(&target) {
                    Some(cofactor) => {
                        if !message.is_empty() {
                            message.push_str("; ");
                        }
                        message.push_str(&format!(
                            "expected polynomial divides the computed value; cofactor has {} terms",
                            cofactor.num_terms()
                        ));
                        Ok(())
                    }
                    None => Err(CheckFailure::Mismatch {
                        residual: computed.to_dsl(),
                        message: "expected polynomial does not divide the computed value".into(),
                    }),
                }
            }
        }
    }

    fn compare_coefficients(
        &mut self,
        spec: &CheckSpec,
        ctx: &'static Context,
        locals: &BTreeMap<String, Ratio>,
        var_name: &str,
        coeffs: &[Poly],
        message: &mut String,
    ) -> CheckResult<()> {
        let expected_degree = spec
            .expected
            .keys()
            .filter_map(|k| k.strip_prefix('c').and_then(|n| n.parse::<usize>().ok()))
            .max();
        let Some(degree) = expected_degree else {
            message.push_str("; bound only");
            return Ok(());
        };
        if coeffs.len() != degree + 1 {
            return Err(CheckFailure::Mismatch {
                residual: String::new(),
                message: format!(
                    "degree mismatch: computed {} but expected {degree}",
                    coeffs.len().saturating_sub(1)
                ),
            });
        }
        for i in 0..=degree {
            let key = format!("c{i}");
            let text = spec.expected.get(&key).ok_or_else(|| {
                CheckFailure::Error(format!("missing expected coefficient `{key}`"))
            })?;
            let want = self.lower_text(text, ctx, locals)?;
            let got = Ratio::from_poly(coeffs[i].clone());
            if !ratio_eq(&got, &want)? {
                let res = got.sub(&want)?;
                return Err(CheckFailure::Mismatch {
                    residual: res.to_dsl(),
                    message: format!("coefficient {key} of {var_name}^{i} does not match"),
                });
            }
        }
        if let Some(support_list) = spec.inputs.get("support") {
            let allowed: BTreeSet<VarId> = support_list
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    VarId::from_name(s.trim()).ok_or_else(|| {
                        CheckFailure::Error(format!("unknown support variable `{s}`"))
                    })
                })
                .collect::<CheckResult<_>>()?;
            let witness = coeffs.iter().enumerate().find(|(_, c)| {
                !c.is_zero() && c.support().iter().all(|v| allowed.contains(v))
            });
            match witness {
                Some((i, _)) => {
                    message.push_str(&format!(
                        "; coefficient c{i} is non-zero over {{{support_list}}}, forcing the contradiction"
                    ));
                }
                None => {
                    return Err(CheckFailure::Mismatch {
                        residual: String::new(),
                        message: format!(
                            "no non-zero coefficient supported on {{{support_list}}} alone"
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

fn ast_mentions(ast: &ExprAst, name: &str) -> bool {
    match ast {
        ExprAst::Name(n) => n == name,
        ExprAst::Neg(x) | ExprAst::Pow(x, _) => ast_mentions(x, name),
        ExprAst::Add(x, y) | ExprAst::Sub(x, y) | ExprAst::Mul(x, y) | ExprAst::Div(x, y) => {
            ast_mentions(x, name) || ast_mentions(y, name)
        }
        ExprAst::Int(_) => false,
    }
}

/// The expectation of a factor-mode comparison as an integer-primitive
/// polynomial (the denominator must be constant).
fn primitive_poly(value: &Ratio) -> CheckResult<Poly> {
    if value.den()?.as_constant().is_none() {
        return Err(CheckFailure::Error(
            "factor mode requires a polynomial expectation".into(),
        ));
    }
    let content = value.num().content();
    if content == num_rational::BigRational::from_integer(0.into()) {
        return Ok(Poly::zero());
    }
    Ok(value.num().mul_scalar(&content.recip()))
}
