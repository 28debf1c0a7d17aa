//! JSON tower definitions, the experiment pipeline and its reports.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::fixtures::{PullbackData, TowerDefinition};
use crate::fuchsian::FuchsianOperator;
use crate::maps::geometric_count;
use crate::modular::modular_limits;
use crate::place::Place;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::tower::{
    divisor_degrees_vanish, enumerate_level, level1_kummer_genus, minimal_splitting_field, optimality_report, resolve,
    splitting_set, totally_branched_witness, Disjointness, SplittingDegree,
};

pub const SCHEMA_VERSION: &str = "1";

fn parse_int_list(s: &str, what: &str) -> Result<Vec<i64>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("{}: expected a coefficient list `[c0,c1,...]`, found `{}`", what, t)))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut pos = t.find('[').unwrap_or(0) + 1;
    inner
        .split(',')
        .map(|c| {
            let here = pos;
            pos += c.len() + 1;
            c.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("{}: bad coefficient `{}` at character {}", what, c.trim(), here)))
        })
        .collect()
}

/// Parses `"[n0,n1,...]/[d0,d1,...]"`; the denominator may be omitted.
pub fn parse_ratfunc(field: &Field, s: &str, what: &str) -> Result<RatFunc> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (parse_int_list(n, what)?, parse_int_list(d, what)?),
        None => (parse_int_list(s, what)?, vec![1]),
    };
    RatFunc::from_ints(field, &n, &d).map_err(|_| Error::Parse(format!("{}: zero denominator in `{}`", what, s)))
}

fn poly_ints(p: &Poly) -> Vec<i64> {
    let f = p.field();
    p.coeffs().iter().map(|&c| f.signed(c).unwrap_or(c.code() as i64)).collect()
}

fn int_list(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn fmt_ratfunc(r: &RatFunc) -> String {
    format!("{}/{}", int_list(&poly_ints(r.num())), int_list(&poly_ints(r.den())))
}

/// `"inf"`, an integer, or the coefficient list of a monic irreducible polynomial.
pub fn parse_place(field: &Field, s: &str, what: &str) -> Result<Place> {
    let t = s.trim();
    if t == "inf" {
        return Ok(Place::Infinity);
    }
    if t.starts_with('[') {
        let p = Poly::from_ints(field, &parse_int_list(t, what)?);
        if !p.is_monic() || !p.is_irreducible() {
            return Err(Error::Parse(format!("{}: `{}` is not monic irreducible", what, t)));
        }
        return Ok(Place::Finite(p));
    }
    let v: i64 = t.parse().map_err(|_| Error::Parse(format!("{}: bad point `{}`", what, t)))?;
    Ok(Place::rational(field, field.from_int(v)))
}

pub fn fmt_place(pl: &Place) -> String {
    match pl {
        Place::Finite(p) if p.degree() != Some(1) => int_list(&poly_ints(p)),
        _ => pl.label(),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct OperatorSpec {
    pub a1: String,
    pub a2: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PullbackSpec {
    pub f: String,
    /// Rows are coefficients of `a^i`, each a list of coefficients in `b`.
    pub component: Vec<Vec<i64>>,
    pub g_tilde: String,
    pub h_tilde: String,
    pub phi_map: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct TowerFile {
    #[serde(default)]
    pub name: Option<String>,
    pub p: u64,
    #[serde(default)]
    pub k: Option<u32>,
    pub g: String,
    pub h: String,
    #[serde(rename = "S")]
    pub s: Vec<String>,
    pub operator: OperatorSpec,
    pub phi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullback: Option<PullbackSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modular_level: Option<u64>,
}

pub fn parse_tower_definition(text: &str) -> Result<TowerDefinition> {
    let file: TowerFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e)))?;
    let f = Field::prime(file.p).map_err(|e| Error::Parse(format!("p: {}", e)))?;
    let operator = FuchsianOperator::new(
        parse_ratfunc(&f, &file.operator.a1, "operator.a1")?,
        parse_ratfunc(&f, &file.operator.a2, "operator.a2")?,
    )?;
    let s =
        file.s.iter().enumerate().map(|(i, x)| parse_place(&f, x, &format!("S[{}]", i))).collect::<Result<Vec<_>>>()?;
    let pullback = match &file.pullback {
        None => None,
        Some(pb) => Some(PullbackData {
            f: parse_ratfunc(&f, &pb.f, "pullback.f")?,
            component: BiPoly::from_nested(&f, &pb.component),
            g_tilde: parse_ratfunc(&f, &pb.g_tilde, "pullback.g_tilde")?,
            h_tilde: parse_ratfunc(&f, &pb.h_tilde, "pullback.h_tilde")?,
            phi_map: parse_ratfunc(&f, &pb.phi_map, "pullback.phi_map")?,
        }),
    };
    Ok(TowerDefinition {
        name: file.name.unwrap_or_else(|| "file".into()),
        p: file.p,
        k: file.k.unwrap_or(2),
        g: parse_ratfunc(&f, &file.g, "g")?,
        h: parse_ratfunc(&f, &file.h, "h")?,
        s,
        operator,
        phi: parse_ratfunc(&f, &file.phi, "phi")?,
        pullback,
        modular_level: file.modular_level,
    })
}

fn nested_ints(b: &BiPoly) -> Vec<Vec<i64>> {
    b.rows().iter().map(poly_ints).collect()
}

pub fn tower_definition_to_json(def: &TowerDefinition) -> String {
    let file = TowerFile {
        name: Some(def.name.clone()),
        p: def.p,
        k: Some(def.k),
        g: fmt_ratfunc(&def.g),
        h: fmt_ratfunc(&def.h),
        s: def.s.iter().map(fmt_place).collect(),
        operator: OperatorSpec { a1: fmt_ratfunc(def.operator.a1()), a2: fmt_ratfunc(def.operator.a2()) },
        phi: fmt_ratfunc(&def.phi),
        pullback: def.pullback.as_ref().map(|pb| PullbackSpec {
            f: fmt_ratfunc(&pb.f),
            component: nested_ints(&pb.component),
            g_tilde: fmt_ratfunc(&pb.g_tilde),
            h_tilde: fmt_ratfunc(&pb.h_tilde),
            phi_map: fmt_ratfunc(&pb.phi_map),
        }),
        modular_level: def.modular_level,
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub levels: RangeInclusive<usize>,
    /// Extension degree for the levels; defaults to the minimal splitting degree.
    pub k: Option<u32>,
    pub guard: u64,
    pub ext_bound: usize,
    pub k_max: u32,
    pub seed: u64,
    pub witness_depth: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            levels: 0..=3,
            k: None,
            guard: crate::tower::DEFAULT_ENUMERATION_GUARD,
            ext_bound: crate::tower::DEFAULT_EXT_BOUND,
            k_max: 6,
            seed: crate::tower::DEFAULT_SEED,
            witness_depth: 16,
        }
    }
}

fn ratio(r: Ratio<i64>) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct TowerSection {
    pub name: String,
    pub p: u64,
    pub g: String,
    pub h: String,
    #[serde(rename = "S")]
    pub s: Vec<String>,
    pub delta: usize,
    pub s_frak: Vec<String>,
    pub s_frak_count: usize,
    pub operator: OperatorSpec,
    pub phi: String,
    pub pulled_back: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct PullbackSection {
    pub component_divides: bool,
    pub component_vanishes: bool,
    pub diagram_commutes: bool,
    pub adapted: bool,
    pub twist: Option<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct AssumptionSection {
    pub degrees_equal: bool,
    pub preimages_agree: bool,
    pub tame: bool,
    pub solution: bool,
    pub adapted: bool,
    pub twist: String,
    pub disjointness: String,
    pub witness: Vec<String>,
    pub witness_vacuous: bool,
    pub witness_depth: usize,
    pub irreducibility_certified: bool,
    pub divisor_degrees_zero: bool,
    pub pullback: Option<PullbackSection>,
}

#[derive(Serialize, Debug, Clone)]
pub struct SplittingSection {
    pub t_frak: Vec<String>,
    pub t: Vec<String>,
    pub count: usize,
    pub minimal_degree: Option<u32>,
    /// Set when no splitting degree up to this bound was found.
    pub minimal_degree_above: Option<u32>,
    pub certificate: Option<u32>,
    pub degree_one: Option<bool>,
    pub genus_bound: String,
    pub level1_genus: Option<i64>,
}

#[derive(Serialize, Debug, Clone)]
pub struct LevelSection {
    pub m: usize,
    pub k: u32,
    pub q: u64,
    pub count: u64,
    pub split_count: u64,
    pub expected_split: u64,
    pub above_s: u64,
    pub split_fibers_full: bool,
    pub s_closure: bool,
    pub t_closure: bool,
    pub branch_confined: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct ModularSection {
    pub level: u64,
    pub mu: u64,
    pub genus_limit: String,
    pub split_bound: String,
    pub lambda_bound: String,
    pub meets_dv_bound: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct VerdictSection {
    pub good: bool,
    pub good_hypothesis: bool,
    pub optimal: bool,
    pub q: Option<u64>,
    pub nu_lower: u64,
    pub lambda_lower: Option<String>,
    pub summary: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct GuardSection {
    pub enumeration: u64,
    pub ext_bound: usize,
    pub k_max: u32,
    pub extension_degrees: Vec<u32>,
}

#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub schema_version: &'static str,
    pub tower: TowerSection,
    pub assumptions: AssumptionSection,
    pub splitting: SplittingSection,
    pub levels: Vec<LevelSection>,
    pub modular: Option<ModularSection>,
    pub verdict: VerdictSection,
    pub failures: Vec<String>,
    pub guards: GuardSection,
    pub seed: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,m,k,q,count,split_count,expected_split,above_s\n");
        for l in &self.levels {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                self.tower.p, l.m, l.k, l.q, l.count, l.split_count, l.expected_split, l.above_s
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let t = &self.tower;
        let _ = writeln!(out, "tower {}  p = {}  delta = {}", t.name, t.p, t.delta);
        let _ = writeln!(out, "  g = {}", t.g);
        let _ = writeln!(out, "  h = {}", t.h);
        let _ = writeln!(out, "  S = {{{}}}  #S-frak = {}", t.s.join(", "), t.s_frak_count);
        let sp = &self.splitting;
        let _ = writeln!(out, "  #T-frak = {}  T = {{{}}}", sp.count, sp.t.join(", "));
        let k = match (sp.minimal_degree, sp.minimal_degree_above) {
            (Some(k), _) => k.to_string(),
            (None, Some(b)) => format!("> {}", b),
            _ => "?".into(),
        };
        let _ = writeln!(out, "  minimal splitting degree = {}  genus bound = {}", k, sp.genus_bound);
        if let Some(m) = &self.modular {
            let _ = writeln!(
                out,
                "  X_0({}): genus limit = {}  split bound = {}  ratio = {}",
                m.level, m.genus_limit, m.split_bound, m.lambda_bound
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:>3} {:>3} {:>10} {:>12} {:>12} {:>12} {:>10}",
            "m", "k", "q", "count", "split", "expected", "above S"
        );
        for l in &self.levels {
            let _ = writeln!(
                out,
                "{:>3} {:>3} {:>10} {:>12} {:>12} {:>12} {:>10}",
                l.m, l.k, l.q, l.count, l.split_count, l.expected_split, l.above_s
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "verdict: {}", self.verdict.summary);
        for f in &self.failures {
            let _ = writeln!(out, "FAILED: {}", f);
        }
        out
    }
}

/// Validates, computes the splitting data and enumerates the requested levels.
pub fn run_experiment(def: &TowerDefinition, cfg: &RunConfig) -> Result<Report> {
    let (c, pullback) = resolve(def, cfg.ext_bound)?;
    let split = splitting_set(&c)?;
    let minimal = minimal_splitting_field(&c, &split, cfg.k_max, cfg.seed)?;
    let opt = optimality_report(&c, &split, &minimal)?;
    let witness = totally_branched_witness(&c, cfg.witness_depth)?;
    let mut failures = Vec::new();
    let divisor_degrees_zero = divisor_degrees_vanish(&c)?;
    if !divisor_degrees_zero {
        failures.push("a principal divisor has nonzero degree".to_string());
    }
    let k_min = match minimal.degree {
        SplittingDegree::Exact(k) => Some(k),
        SplittingDegree::Above(_) => None,
    };
    let k = cfg.k.or(k_min).unwrap_or(def.k);
    let over_splitting_field = k_min.is_some_and(|km| k.is_multiple_of(km));
    let mut levels = Vec::new();
    for m in cfg.levels.clone() {
        let l = enumerate_level(&c, &split, m, k, cfg.guard)?;
        let expected = split.count as u64 * (c.delta as u64).pow(m as u32);
        if !l.invariants.s_closure {
            failures.push(format!("level {}: S-closure fails", m));
        }
        if !l.invariants.t_closure {
            failures.push(format!("level {}: T-closure fails", m));
        }
        if !l.invariants.branch_confined {
            failures.push(format!("level {}: ramification outside S-frak", m));
        }
        if over_splitting_field && (l.split_count != expected || !l.split_fibers_full) {
            failures.push(format!("level {}: {} split points, expected {}", m, l.split_count, expected));
        }
        levels.push(LevelSection {
            m,
            k,
            q: l.q,
            count: l.count,
            split_count: l.split_count,
            expected_split: expected,
            above_s: l.above_s,
            split_fibers_full: l.split_fibers_full,
            s_closure: l.invariants.s_closure,
            t_closure: l.invariants.t_closure,
            branch_confined: l.invariants.branch_confined,
        });
    }
    let modular = match def.modular_level {
        Some(level) => {
            let ml = modular_limits(level, def.p)?;
            Some(ModularSection {
                level,
                mu: ml.mu,
                genus_limit: ratio(ml.genus_limit),
                split_bound: ratio(ml.split_bound),
                lambda_bound: ratio(ml.lambda_bound),
                meets_dv_bound: ml.meets_dv_bound,
            })
        }
        None => None,
    };
    let summary = if opt.optimal {
        "optimal criterion satisfied".to_string()
    } else if opt.good {
        "good; optimality not certified".to_string()
    } else {
        "not certified good".to_string()
    };
    let mut extension_degrees: Vec<u32> = vec![k];
    if let Some(km) = k_min {
        extension_degrees.push(km);
    }
    extension_degrees.sort();
    extension_degrees.dedup();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tower: TowerSection {
            name: def.name.clone(),
            p: def.p,
            g: fmt_ratfunc(&c.g),
            h: fmt_ratfunc(&c.h),
            s: c.s.iter().map(fmt_place).collect(),
            delta: c.delta,
            s_frak: c.s_frak.iter().map(fmt_place).collect(),
            s_frak_count: geometric_count(&c.s_frak),
            operator: OperatorSpec { a1: fmt_ratfunc(c.operator.a1()), a2: fmt_ratfunc(c.operator.a2()) },
            phi: fmt_ratfunc(&c.phi),
            pulled_back: pullback.is_some(),
        },
        assumptions: AssumptionSection {
            degrees_equal: true,
            preimages_agree: true,
            tame: true,
            solution: true,
            adapted: true,
            twist: fmt_ratfunc(&c.twist),
            disjointness: match c.disjointness {
                Disjointness::NoCommonFactorFound => "no common left factor found (Mobius search over F_p)".into(),
                Disjointness::NotSearched => "not searched (p^3 above the guard)".into(),
            },
            witness: witness.places.iter().map(fmt_place).collect(),
            witness_vacuous: witness.vacuous,
            witness_depth: witness.depth,
            irreducibility_certified: witness.found(),
            divisor_degrees_zero,
            pullback: pullback.map(|r| PullbackSection {
                component_divides: r.component_divides,
                component_vanishes: r.component_vanishes,
                diagram_commutes: r.diagram_commutes,
                adapted: r.adapted,
                twist: r.twist.as_ref().map(fmt_ratfunc),
            }),
        },
        splitting: SplittingSection {
            t_frak: split.t_frak.iter().map(fmt_place).collect(),
            t: split.t.iter().map(fmt_place).collect(),
            count: split.count,
            minimal_degree: k_min,
            minimal_degree_above: match minimal.degree {
                SplittingDegree::Above(b) => Some(b),
                SplittingDegree::Exact(_) => None,
            },
            certificate: minimal.certificate,
            degree_one: minimal.degree_one.as_ref().map(|d| d.holds()),
            genus_bound: ratio(opt.genus_bound),
            level1_genus: level1_kummer_genus(&c).ok(),
        },
        levels,
        modular,
        verdict: VerdictSection {
            good: opt.good,
            good_hypothesis: opt.good_hypothesis,
            optimal: opt.optimal,
            q: opt.q,
            nu_lower: opt.nu_lower,
            lambda_lower: opt.lambda_lower.map(ratio),
            summary,
        },
        failures,
        guards: GuardSection { enumeration: cfg.guard, ext_bound: cfg.ext_bound, k_max: cfg.k_max, extension_degrees },
        seed: cfg.seed,
    })
}
