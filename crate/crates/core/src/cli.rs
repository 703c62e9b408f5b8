//! Command-line front end: argument parsing, dispatch and report rendering.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frobenius::{cp1, spin3};
use crate::named::{named_series, sample_phi_points, verify_identities, SeriesTag};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::report::{all_passed, Check, Mismatch};
use crate::strata::{enumerate_stable_graphs, StableGraph};
use crate::{airy, closed, fz, kontsevich, open, pixton, strata};

#[derive(Parser, Debug)]
#[command(name = "tautrel", version, about = "Exact series, descendent potentials and tautological relations")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for random rational specializations.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients of a named series.
    Series {
        /// A, B, calA, calB, H0, H1, D, Stirling or Phi.
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 10)]
        order: usize,
        /// Equivariant parameter for Phi.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Value of z for Phi.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Airy function against its asymptotic expansion.
    Airy {
        #[arg(long)]
        x: String,
        /// Number of asymptotic terms after the leading one.
        #[arg(long, default_value_t = 3)]
        terms: u64,
        /// Use Ai' instead of Ai.
        #[arg(long)]
        prime: bool,
        #[arg(long, default_value_t = 256)]
        bits: usize,
    },
    /// Descendent integrals and potentials.
    #[command(subcommand)]
    Descendents(Descendents),
    /// Faber-Zagier relations.
    Fz(FzArgs),
    /// Stable graphs.
    #[command(subcommand)]
    Strata(Strata),
    /// Pixton's relation R^d_{g,A} as a strata element.
    Pixton {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated entries of A, each 0 or 1.
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        d: u32,
    },
    /// Frobenius manifold data.
    #[command(subcommand)]
    Frobenius(Frobenius),
    /// Verification suites.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Subcommand, Debug)]
pub enum Descendents {
    /// One bracket <tau_k1 ... tau_kn>.
    Closed {
        /// Comma-separated indices.
        #[arg(long)]
        ks: String,
    },
    /// Nonzero coefficients of the open potential.
    Open {
        #[arg(long, default_value_t = 6)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = OpenMethod::Kdv)]
        method: OpenMethod,
    },
    /// All nonzero brackets up to a genus and weighted degree.
    Table {
        #[arg(long, default_value_t = 2)]
        gmax: u32,
        #[arg(long, default_value_t = 9)]
        degmax: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OpenMethod {
    Kdv,
    Explicit,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct FzArgs {
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    /// Parts of sigma, comma separated, none congruent to 2 mod 3.
    #[arg(long, default_value = "")]
    sigma: String,
    #[command(subcommand)]
    table: Option<FzTable>,
}

#[derive(Subcommand, Debug)]
pub enum FzTable {
    /// All valid relations up to the given bounds.
    Table {
        #[arg(long, default_value_t = 4)]
        gmax: u32,
        #[arg(long, default_value_t = 2)]
        rmax: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum Strata {
    /// All stable graphs of type (g, n).
    Enumerate {
        #[arg(long)]
        g: u32,
        #[arg(long, default_value_t = 0)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    #[value(name = "3spin")]
    Spin3,
    Cp1,
}

#[derive(Subcommand, Debug)]
pub enum Frobenius {
    /// The R-matrix series.
    RMatrix {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Identities among the named series.
    Series {
        #[arg(long, default_value_t = 30)]
        order: usize,
    },
    /// Virasoro, KdV and matrix-model identities of the closed potential.
    Descendents {
        #[arg(long, default_value_t = 3)]
        genus: u32,
        /// Monomial length of the truncation.
        #[arg(long, default_value_t = 12)]
        length: u32,
    },
    /// Open KdV against the explicit formula, with Virasoro constraints.
    Open {
        #[arg(long, default_value_t = 8)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
    },
    /// Open Virasoro constraints on the open KdV solution.
    OpenVirasoro {
        #[arg(long, default_value_t = 8)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
    },
    /// Stable graph census and automorphism orders.
    Strata,
    /// Zero pairings of Pixton's relations.
    PixtonPairings,
    /// Flatness equations and R-matrix checks.
    Flatness {
        #[arg(long, value_enum, default_value_t = Model::Spin3)]
        model: Model,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Every suite in dependency order.
    All,
}

/// Rows for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Self { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Everything a command reports.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub anchor: String,
    pub seed: u64,
    pub orders: BTreeMap<String, i64>,
    pub wall_time_ms: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Report {
    fn new(command: &str, anchor: &str, seed: u64) -> Self {
        Report {
            command: command.into(),
            anchor: anchor.into(),
            seed,
            orders: BTreeMap::new(),
            wall_time_ms: 0.0,
            passed: true,
            checks: Vec::new(),
            result: Value::Null,
            text: String::new(),
            table: None,
        }
    }

    fn order(mut self, key: &str, v: impl Into<i64>) -> Self {
        self.orders.insert(key.into(), v.into());
        self
    }

    fn with_checks(mut self, checks: Vec<Check>) -> Self {
        self.passed = all_passed(&checks);
        self.checks = checks;
        self
    }

    /// Renders in the requested format.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Text => self.render_text(),
            Format::Csv => self.render_csv(),
        }
    }

    fn orders_string(&self) -> String {
        self.orders.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }

    fn render_text(&self) -> String {
        let mut s = format!(
            "# {} [{}] seed={} {} wall_time={:.1}ms\n",
            self.command,
            self.anchor,
            self.seed,
            self.orders_string(),
            self.wall_time_ms
        );
        if !self.text.is_empty() {
            s.push_str(&self.text);
            if !self.text.ends_with('\n') {
                s.push('\n');
            }
        }
        for c in &self.checks {
            s.push_str(&format!("{} {} [{}]: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.anchor, c.detail));
            if let Some(m) = &c.mismatch {
                s.push_str(&format!("    at {}: expected {}, computed {}\n", m.location, m.expected, m.computed));
            }
        }
        if !self.checks.is_empty() {
            let failed = self.checks.iter().filter(|c| !c.passed).count();
            s.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        }
        s
    }

    fn render_csv(&self) -> String {
        let table = match &self.table {
            Some(t) => t.clone(),
            None => checks_table(&self.checks),
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut out = format!(
            "# {} [{}] seed={} {} wall_time={:.1}ms\n",
            self.command,
            self.anchor,
            self.seed,
            self.orders_string(),
            self.wall_time_ms
        );
        w.write_record(&table.headers).expect("in-memory write");
        for row in &table.rows {
            w.write_record(row).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
        out
    }
}

fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["name", "anchor", "passed", "detail", "location", "expected", "computed"]);
    for c in checks {
        let m = c.mismatch.clone().unwrap_or(Mismatch { location: String::new(), expected: String::new(), computed: String::new() });
        t.push(vec![c.name.clone(), c.anchor.clone(), c.passed.to_string(), c.detail.clone(), m.location, m.expected, m.computed]);
    }
    t
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|_| Error::Parse(format!("malformed {what} entry {p:?}"))))
        .collect()
}

fn opt_rational(s: &Option<String>, name: &str) -> Result<Rational> {
    match s {
        Some(v) => parse_rational(v),
        None => Err(Error::Parse(format!("Phi needs --{name}"))),
    }
}

fn cmd_series(seed: u64, name: &str, order: usize, lambda: &Option<String>, z: &Option<String>) -> Result<Report> {
    let tag: SeriesTag = name.parse()?;
    let s = if tag == SeriesTag::Phi {
        let (l, zz) = (opt_rational(lambda, "lambda")?, opt_rational(z, "z")?);
        named_series(tag, order, Some((&l, &zz)))?
    } else {
        named_series(tag, order, None)?
    };
    let mut r = Report::new("series", "named series", seed).order("order", order as i64);
    let mut t = Table::new(&["k", "coeff"]);
    for (k, c) in s.coeffs().iter().enumerate() {
        t.push(vec![k.to_string(), format_rational(c)]);
    }
    r.text = format!("{tag}({}) = {}", tag.var(), s.display_in(tag.var()));
    r.result = serde_json::to_value(s.to_json(tag.var())).expect("series serializes");
    r.table = Some(t);
    Ok(r)
}

fn cmd_airy(seed: u64, x: &str, terms: u64, prime: bool, bits: usize) -> Result<Report> {
    let xv = airy::parse_x(x)?;
    let rep = airy::asymptotic_report(&xv, terms, prime, bits)?;
    let mut r = Report::new("airy", "Airy asymptotic expansion", seed).order("terms", terms as i64).order("bits", bits as i64);
    let checks = vec![
        if rep.envelope_ok {
            Check::pass("asymptotic envelope", "Airy asymptotic expansion", "|numeric - truncation| <= 2 |first omitted term|")
        } else {
            Check::fail(
                "asymptotic envelope",
                "Airy asymptotic expansion",
                "|numeric - truncation| <= 2 |first omitted term|",
                Some(Mismatch { location: format!("x = {x}"), expected: format!("<= 2*{}", rep.first_omitted_term), computed: rep.abs_error.clone() }),
            )
        },
        if rep.oracle_agreement_digits >= 10.0 {
            Check::pass("numeric oracles agree", "Airy asymptotic expansion", format!("{:.1} digits", rep.oracle_agreement_digits))
        } else {
            Check::fail("numeric oracles agree", "Airy asymptotic expansion", format!("{:.1} digits", rep.oracle_agreement_digits), None)
        },
    ];
    let value = serde_json::to_value(&rep).expect("report serializes");
    let mut t = Table::new(&["field", "value"]);
    let mut text = String::new();
    if let Value::Object(map) = &value {
        for (k, v) in map {
            let shown = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
            text.push_str(&format!("{k}: {shown}\n"));
            t.push(vec![k.clone(), shown]);
        }
    }
    r.text = text;
    r.result = value;
    r.table = Some(t);
    Ok(r.with_checks(checks))
}

fn cmd_descendents(seed: u64, d: &Descendents) -> Result<Report> {
    match d {
        Descendents::Closed { ks } => {
            let ks: Vec<u32> = parse_list(ks, "index")?;
            if ks.is_empty() {
                return Err(Error::Parse("--ks needs at least one index".into()));
            }
            let g = closed::implied_genus(&ks);
            let v = match g {
                Some(g) => closed::Descendents::global().bracket_at(g, &ks)?,
                None => Rational::from_integer(0.into()),
            };
            let mut r = Report::new("descendents closed", "descendent brackets", seed).order("n", ks.len() as i64);
            let label = ks.iter().map(|k| format!("tau_{k}")).collect::<Vec<_>>().join(" ");
            r.text = match g {
                Some(g) => format!("<{label}>_{g} = {}", format_rational(&v)),
                None => format!("<{label}> = 0 (no genus satisfies the dimension constraint)"),
            };
            r.result = json!({ "ks": ks, "g": g, "value": format_rational(&v) });
            let mut t = Table::new(&["g", "ks", "value"]);
            t.push(vec![g.map(|g| g.to_string()).unwrap_or_default(), format!("{ks:?}"), format_rational(&v)]);
            r.table = Some(t);
            Ok(r)
        }
        Descendents::Open { degree, method } => {
            let pot = match method {
                OpenMethod::Kdv => open::solve_open_kdv(*degree)?,
                OpenMethod::Explicit => open::explicit_formula(*degree)?,
            };
            let mut r = Report::new("descendents open", "open potential", seed).order("degree", *degree);
            let mut t = Table::new(&["monomial", "coeff"]);
            let mut terms = Vec::new();
            for (e, c) in pot.fo.terms() {
                let m = pot.fo.format_monomial(e);
                terms.push(json!({ "monomial": m, "coeff": format_rational(c) }));
                t.push(vec![m, format_rational(c)]);
            }
            r.text = format!("F^o = {}", pot.fo);
            r.result = json!({ "method": format!("{method:?}").to_lowercase(), "terms": terms });
            r.table = Some(t);
            Ok(r)
        }
        Descendents::Table { gmax, degmax } => {
            let rows = closed::bracket_table(*gmax, *degmax);
            let mut r = Report::new("descendents table", "descendent brackets", seed).order("gmax", *gmax).order("degmax", *degmax);
            let mut t = Table::new(&["g", "ks", "value"]);
            let mut text = String::new();
            for row in &rows {
                let ks = row.ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ");
                text.push_str(&format!("g={} <{}> = {}\n", row.g, ks, format_rational(&row.value)));
                t.push(vec![row.g.to_string(), ks, format_rational(&row.value)]);
            }
            r.text = text;
            r.result = serde_json::to_value(&rows).expect("rows serialize");
            r.table = Some(t);
            Ok(r)
        }
    }
}

fn cmd_fz(seed: u64, a: &FzArgs) -> Result<Report> {
    if let Some(FzTable::Table { gmax, rmax }) = &a.table {
        let rows = fz::fz_table(*gmax, *rmax)?;
        let mut r = Report::new("fz table", "Faber-Zagier relations", seed).order("gmax", *gmax).order("rmax", *rmax);
        let mut t = Table::new(&["g", "r", "sigma", "relation"]);
        let mut text = String::new();
        for row in &rows {
            let sigma = row.sigma.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
            text.push_str(&format!("g={} r={} sigma=({}): {}\n", row.g, row.r, sigma, row.display));
            t.push(vec![row.g.to_string(), row.r.to_string(), sigma, row.display.clone()]);
        }
        r.text = text;
        r.result = serde_json::to_value(&rows).expect("rows serialize");
        r.table = Some(t);
        return Ok(r);
    }
    let (Some(g), Some(rr)) = (a.g, a.r) else {
        return Err(Error::Parse("fz needs --g and --r, or the table subcommand".into()));
    };
    let sigma: fz::FzPartition = a.sigma.parse()?;
    let rel = fz::fz_relation(g, rr, &sigma)?;
    let mut r = Report::new("fz", "Faber-Zagier relations", seed).order("g", g).order("r", rr);
    let mut t = Table::new(&["kappa", "coeff"]);
    for term in rel.to_json() {
        t.push(vec![crate::kappa::format_kappa_monomial(&term.kappa), term.coeff.clone()]);
    }
    r.text = format!("R(g={g}, r={rr}, sigma={sigma}) = {rel} = 0");
    r.result = json!({ "g": g, "r": rr, "sigma": sigma.parts(), "relation": rel.to_json() });
    r.table = Some(t);
    Ok(r)
}

fn graph_text(graph: &StableGraph) -> String {
    format!("genera={:?} legs={:?} edges={:?} |Aut|={}", graph.genera(), graph.legs(), graph.edges(), graph.automorphism_order())
}

fn cmd_strata(seed: u64, s: &Strata) -> Result<Report> {
    let Strata::Enumerate { g, n } = s;
    let graphs = enumerate_stable_graphs(*g, *n)?;
    let mut r = Report::new("strata enumerate", "stable graph census", seed).order("g", *g).order("n", *n as i64);
    let mut t = Table::new(&["index", "genera", "legs", "edges", "automorphisms"]);
    let mut text = format!("{} stable graphs of type ({g},{n})\n", graphs.len());
    let mut items = Vec::new();
    for (i, graph) in graphs.iter().enumerate() {
        text.push_str(&format!("{i}: {}\n", graph_text(graph)));
        t.push(vec![
            i.to_string(),
            format!("{:?}", graph.genera()),
            format!("{:?}", graph.legs()),
            format!("{:?}", graph.edges()),
            graph.automorphism_order().to_string(),
        ]);
        items.push(json!({ "graph": graph.to_json(), "automorphisms": graph.automorphism_order() }));
    }
    r.text = text;
    r.result = json!({ "count": graphs.len(), "graphs": items });
    r.table = Some(t);
    Ok(r)
}

fn cmd_pixton(seed: u64, g: u32, n: Option<usize>, a: &Option<String>, d: u32) -> Result<Report> {
    let a: Vec<u8> = match (a, n) {
        (Some(s), _) => parse_list(s, "A")?,
        (None, Some(n)) => vec![0; n],
        (None, None) => Vec::new(),
    };
    if let Some(n) = n {
        if n != a.len() {
            return Err(Error::Parse(format!("--n {n} does not match {} entries of --a", a.len())));
        }
    }
    let input = pixton::PixtonInput::new(g, a.clone(), d)?;
    let class = pixton::pixton_class(&input)?;
    let mut r = Report::new("pixton", "Pixton relations", seed).order("g", g).order("n", a.len() as i64).order("d", d);
    let mut t = Table::new(&["genera", "legs", "edges", "kappa", "psi", "coeff"]);
    let mut text = format!("R^{d}_({g},{a:?}): {} terms\n", class.len());
    let terms = class.to_json();
    for ((graph, deco), c) in class.terms() {
        text.push_str(&format!("{} kappa={:?} psi={:?}: {}\n", graph_text(graph), deco.kappa, deco.psi, format_rational(c)));
        t.push(vec![
            format!("{:?}", graph.genera()),
            format!("{:?}", graph.legs()),
            format!("{:?}", graph.edges()),
            format!("{:?}", deco.kappa),
            format!("{:?}", deco.psi),
            format_rational(c),
        ]);
    }
    r.text = text;
    r.result = json!({ "g": g, "n": a.len(), "a": a, "d": d, "terms": terms });
    r.table = Some(t);
    Ok(r)
}

fn y_series(s: &crate::series::PowerSeries) -> String {
    let mut parts = Vec::new();
    for (k, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        parts.push(match k {
            0 => format_rational(c),
            _ => format!("({})*y^{k}", format_rational(c)),
        });
    }
    if parts.is_empty() {
        parts.push("0".into());
    }
    format!("{} + O(y^{})", parts.join(" + "), s.order() + 1)
}

fn phi_entry_json(e: &spin3::PhiSeries) -> Value {
    json!({
        "phi_power": format_rational(&e.power),
        "coeffs": e.series.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
    })
}

fn cmd_frobenius(seed: u64, f: &Frobenius) -> Result<Report> {
    let Frobenius::RMatrix { model, order } = f;
    match model {
        Model::Spin3 => {
            let m = spin3::solve_r(*order)?;
            let mut r = Report::new("frobenius r-matrix", "3-spin R-matrix", seed).order("order", *order as i64);
            let mut t = Table::new(&["row", "col", "phi_power", "k", "coeff"]);
            let mut text = String::from("R(z) in the basis e0, e1; entry = phi^p * sum_k c_k y^k with y = z phi^(-3/2)\n");
            let mut entries = Vec::new();
            for (i, row) in m.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    text.push_str(&format!("R[{i}][{j}] = phi^({}) * ({})\n", format_rational(&e.power), y_series(&e.series)));
                    for (k, c) in e.series.coeffs().iter().enumerate() {
                        t.push(vec![i.to_string(), j.to_string(), format_rational(&e.power), k.to_string(), format_rational(c)]);
                    }
                    entries.push(json!({ "row": i, "col": j, "entry": phi_entry_json(e) }));
                }
            }
            r.text = text;
            r.result = json!({ "model": "3spin", "variable": "y = z phi^(-3/2)", "entries": entries });
            r.table = Some(t);
            Ok(r)
        }
        Model::Cp1 => {
            let s = cp1::cp1_leading_limit(*order);
            let mut r = Report::new("frobenius r-matrix", "CP1 leading-order limit", seed).order("order", *order as i64);
            let mut t = Table::new(&["k", "coeff"]);
            for (k, c) in s.coeffs().iter().enumerate() {
                t.push(vec![k.to_string(), format_rational(c)]);
            }
            r.text = format!(
                "lowest-phi part of R for mu = 1, as a series in X = -+ z lambda^2 / (8 phi^(3/2)):\n{s}"
            );
            r.result = json!({ "model": "cp1", "variable": "X = -+ z lambda^2 / (8 phi^(3/2))", "series": s.to_json("X") });
            r.table = Some(t);
            Ok(r)
        }
    }
}

fn suite_series(seed: u64, order: usize) -> Result<Report> {
    let pts = sample_phi_points(seed, 5, order.min(15));
    let checks = verify_identities(order, &pts);
    Ok(Report::new("verify series", "named series identities", seed).order("order", order as i64).with_checks(checks))
}

fn anchor_check(name: &str, got: Rational, want: Rational) -> Check {
    Check::from_mismatch(
        name,
        "descendent brackets",
        "emerges from the recursion",
        (got != want).then(|| Mismatch { location: name.into(), expected: format_rational(&want), computed: format_rational(&got) }),
    )
}

fn suite_descendents(seed: u64, genus: u32, length: u32) -> Result<Report> {
    let pot = closed::ClosedPotential::by_length(genus, length);
    let mut checks = closed::verify_virasoro(&pot, 4);
    checks.extend(closed::verify_kdv(&pot));
    let table = closed::Descendents::global();
    checks.push(anchor_check("<tau_0^3>_0 = 1", table.bracket(&[0, 0, 0]), Rational::from_integer(1.into())));
    checks.push(anchor_check("<tau_1>_1 = 1/24", table.bracket(&[1]), crate::rational::rat(1, 24)));
    checks.extend(kontsevich::verify(12, 8));
    Ok(Report::new("verify descendents", "Virasoro, KdV and matrix model", seed)
        .order("genus", genus)
        .order("length", length)
        .with_checks(checks))
}

fn suite_open(seed: u64, degree: u32, n_max: u32) -> Result<Report> {
    let checks = open::verify_open(degree, n_max)?;
    Ok(Report::new("verify open", "open potential", seed).order("degree", degree).order("n_max", n_max).with_checks(checks))
}

fn suite_open_virasoro(seed: u64, degree: u32, n_max: u32) -> Result<Report> {
    let pot = open::solve_open_kdv(open::degree_for_virasoro(degree, n_max))?;
    let checks = open::virasoro_checks("open KdV", &pot, n_max as i64, degree as i64);
    Ok(Report::new("verify open-virasoro", "open Virasoro constraints", seed)
        .order("degree", degree)
        .order("n_max", n_max)
        .with_checks(checks))
}

fn suite_strata(seed: u64) -> Result<Report> {
    Ok(Report::new("verify strata", "stable graph census", seed).with_checks(strata::census::verify()?))
}

fn suite_pixton(seed: u64) -> Result<Report> {
    Ok(Report::new("verify pixton-pairings", "Pixton relations", seed).with_checks(pixton::verify()?))
}

fn suite_flatness(seed: u64, model: Model, order: usize) -> Result<Report> {
    let checks = match model {
        Model::Spin3 => spin3::verify(order)?,
        Model::Cp1 => cp1::verify(seed, 5, 15, order)?,
    };
    let anchor = match model {
        Model::Spin3 => "3-spin flatness",
        Model::Cp1 => "CP1 flatness",
    };
    let name = match model {
        Model::Spin3 => "verify flatness --model 3spin",
        Model::Cp1 => "verify flatness --model cp1",
    };
    Ok(Report::new(name, anchor, seed).order("order", order as i64).with_checks(checks))
}

fn suite_all(seed: u64) -> Result<Report> {
    type Suite = Box<dyn Fn(u64) -> Result<Report>>;
    let suites: Vec<Suite> = vec![
        Box::new(|s| suite_series(s, 30)),
        Box::new(|s| suite_descendents(s, 3, 12)),
        Box::new(|s| suite_open(s, 8, 3)),
        Box::new(suite_strata),
        Box::new(suite_pixton),
        Box::new(|s| suite_flatness(s, Model::Spin3, 6)),
        Box::new(|s| suite_flatness(s, Model::Cp1, 6)),
    ];
    let mut checks = Vec::new();
    let mut text = String::new();
    for suite in suites {
        match suite(seed) {
            Ok(r) => {
                let failed = r.checks.iter().filter(|c| !c.passed).count();
                text.push_str(&format!("{}: {} checks, {} failed\n", r.command, r.checks.len(), failed));
                checks.extend(r.checks);
            }
            Err(e) => {
                text.push_str(&format!("stopped: {e}\n"));
                checks.push(Check::fail("suite error", "verify all", e.to_string(), None));
                break;
            }
        }
    }
    let mut r = Report::new("verify all", "all suites", seed).with_checks(checks);
    r.text = text;
    Ok(r)
}

/// Runs one parsed command.
pub fn dispatch(cli: &Cli) -> Result<Report> {
    let seed = cli.seed;
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Series { name, order, lambda, z } => cmd_series(seed, name, *order, lambda, z),
        Command::Airy { x, terms, prime, bits } => cmd_airy(seed, x, *terms, *prime, *bits),
        Command::Descendents(d) => cmd_descendents(seed, d),
        Command::Fz(a) => cmd_fz(seed, a),
        Command::Strata(s) => cmd_strata(seed, s),
        Command::Pixton { g, n, a, d } => cmd_pixton(seed, *g, *n, a, *d),
        Command::Frobenius(f) => cmd_frobenius(seed, f),
        Command::Verify(v) => match v {
            Verify::Series { order } => suite_series(seed, *order),
            Verify::Descendents { genus, length } => suite_descendents(seed, *genus, *length),
            Verify::Open { degree, n_max } => suite_open(seed, *degree, *n_max),
            Verify::OpenVirasoro { degree, n_max } => suite_open_virasoro(seed, *degree, *n_max),
            Verify::Strata => suite_strata(seed),
            Verify::PixtonPairings => suite_pixton(seed),
            Verify::Flatness { model, order } => suite_flatness(seed, *model, *order),
            Verify::All => suite_all(seed),
        },
    }?;
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(report)
}

/// Exit code for an error: 2 for malformed or unstable input, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Unstable { .. } => 2,
        _ => 1,
    }
}

/// Message printed for an error.
pub fn error_message(e: &Error) -> String {
    match e {
        Error::NotARelation(m) => format!("validity: {m}"),
        other => other.to_string(),
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var("TAUTREL_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("TAUTREL_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("TAUTREL_THREADS must be positive".into());
    }
    // A second call in the same process fails harmlessly.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Entry point shared by the binary and the tests: returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    if let Err(m) = configure_threads() {
        let _ = writeln!(stderr, "error: {m}");
        return 2;
    }
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", error_message(&e));
            return exit_code(&e);
        }
    };
    let body = report.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => {
            let _ = stdout.write_all(body.as_bytes());
        }
    }
    if report.passed {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("tautrel").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn series_text() {
        let (code, out, _) = run_args(&["series", "--name", "A", "--order", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("5/24"), "{out}");
        assert!(out.contains("seed=1"));
    }

    #[test]
    fn invalid_fz_exits_one() {
        let (code, _, err) = run_args(&["fz", "--g", "4", "--r", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("validity: g - 1 + |sigma| < 3r fails"), "{err}");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["nonsense"]).0, 2);
        assert_eq!(run_args(&["series", "--name", "Q"]).0, 2);
        assert_eq!(run_args(&["strata", "enumerate", "--g", "0", "--n", "2"]).0, 2);
        assert_eq!(run_args(&["series", "--name", "Phi", "--lambda", "1/x", "--z", "1"]).0, 2);
    }

    #[test]
    fn csv_has_header() {
        let (code, out, _) = run_args(&["strata", "enumerate", "--g", "1", "--n", "1", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert!(lines[0].starts_with('#'));
        assert_eq!(lines[1], "index,genera,legs,edges,automorphisms");
        assert_eq!(lines.len(), 4);
    }
}
