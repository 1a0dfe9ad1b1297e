//! Closed-form expressions for sampling grids and for custom N-functions.
//!
//! Grid expressions see the variables `x1, ..., xn` (cell center
//! coordinates) and `r = |x|`; scalar expressions see a single variable.
//! Parsing and evaluation are delegated to `meval`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::grid::{sample, Domain, GridFunction};

type Bound = Rc<dyn Fn(&[f64]) -> f64>;

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

/// `bindn` ties the closure to the lifetime of the name list, so name lists
/// are interned for the life of the process. Only a handful ever exist.
fn interned(vars: &[String]) -> &'static [&'static str] {
    static TABLE: Mutex<Vec<&'static [&'static str]>> = Mutex::new(Vec::new());
    let mut table = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(found) = table.iter().find(|t| t.iter().eq(vars.iter())) {
        return found;
    }
    let names: Vec<&'static str> = vars.iter().map(|v| &*Box::leak(v.clone().into_boxed_str())).collect();
    let leaked: &'static [&'static str] = Box::leak(names.into_boxed_slice());
    table.push(leaked);
    leaked
}

thread_local! {
    // meval's bound closures are not Send, so each thread binds its own copy.
    static BOUND: RefCell<HashMap<u64, Bound>> = RefCell::new(HashMap::new());
}

/// A parsed expression in named variables.
#[derive(Clone)]
pub struct Expression {
    text: String,
    vars: Vec<String>,
    expr: meval::Expr,
    id: u64,
}

impl std::fmt::Debug for Expression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Expression")
            .field("text", &self.text)
            .field("vars", &self.vars)
            .finish()
    }
}

impl Expression {
    pub fn parse(text: &str, vars: &[&str]) -> Result<Self> {
        let expr: meval::Expr = text
            .parse()
            .map_err(|e: meval::Error| Error::Expression(format!("{text}: {e}")))?;
        // bind once up front so unknown variables are reported here
        let _ = expr
            .clone()
            .bindn(vars)
            .map_err(|e| Error::Expression(format!("{text}: {e}")))?;
        Ok(Expression {
            text: text.to_string(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            expr,
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        })
    }

    /// Expression in the single variable `var`.
    pub fn scalar(text: &str, var: &str) -> Result<Self> {
        Expression::parse(text, &[var])
    }

    /// Expression over a point of `dim` dimensions (`x1..xn` and `r`).
    pub fn spatial(text: &str, dim: usize) -> Result<Self> {
        let names: Vec<String> = (1..=dim).map(|i| format!("x{i}")).chain(["r".to_string()]).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Expression::parse(text, &refs)
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn eval(&self, args: &[f64]) -> f64 {
        let f = BOUND.with(|cache| {
            cache
                .borrow_mut()
                .entry(self.id)
                .or_insert_with(|| {
                    let f = self
                        .expr
                        .clone()
                        .bindn(interned(&self.vars))
                        .expect("checked at parse time");
                    Rc::new(f)
                })
                .clone()
        });
        f(args)
    }

    pub fn eval1(&self, t: f64) -> f64 {
        self.eval(&[t])
    }

    /// The expression as a shareable scalar closure.
    pub fn into_scalar_fn(self) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
        Arc::new(move |t| self.eval1(t))
    }
}

/// Samples a spatial expression on `domain`.
pub fn sample_expression(domain: &Arc<Domain>, text: &str) -> Result<GridFunction> {
    let e = Expression::spatial(text, domain.dim())?;
    sample(domain, |x| {
        let mut args = x.to_vec();
        args.push(x.iter().map(|c| c * c).sum::<f64>().sqrt());
        e.eval(&args)
    })
}
