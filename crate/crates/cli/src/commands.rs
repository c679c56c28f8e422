use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hloc_core::cohomology::{proposition23_check, Prop23Verdict};
use hloc_core::counterexample::{build, scan_orders, verify};
use hloc_core::criteria::{
    corollary12_check, theorem2_check, theorem5_group_check, Conclusion, CriterionReport, ItemStatus,
};
use hloc_core::grouptheory::{decompose_generators, element_order, DEFAULT_CAP};
use hloc_core::symplectic::{eigenvalue_pairing_check, gsp4_order, gsp_generators, SymplecticSpace};
use hloc_core::{AbelianStructure, Cohomology, Error, GModule, Mat, MatGroup, ModuleSpec};

use crate::format::parse_group;
use crate::{EXIT_CAP, EXIT_INPUT, EXIT_INTERNAL, EXIT_NEGATIVE, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "hloc", version, about = "First and local cohomology of finite matrix groups over Z/p^n")]
pub struct Cli {
    /// Emit a JSON report on stdout instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Maximum number of group elements to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// H^1(G, M) for the natural module; exit 1 when nontrivial.
    H1 { file: PathBuf },
    /// H^1_loc(G, M); exit 1 when nontrivial.
    H1loc { file: PathBuf },
    /// Run the vanishing criteria; exit 0 when one of them certifies.
    Criteria { file: PathBuf },
    /// Build and verify the order-3 counterexample modulo p^2.
    Counterexample {
        #[arg(long)]
        p: u64,
        /// Also tabulate H^1_loc of <g^j, H_2> and of a comparison group.
        #[arg(long)]
        scan: bool,
    },
    /// Order formula and eigenvalue pairing for GSp_4(F_p).
    Gsp4 {
        #[arg(long)]
        p: u64,
        /// Enumerate the whole group and check every element.
        #[arg(long)]
        enumerate: bool,
    },
    /// Decompose H = <generators 2..> under conjugation by generator 1.
    Decompose { file: PathBuf },
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn new(code: i32, text: String, json: Value) -> Self {
        Outcome { code, text, json }
    }

    fn error(code: i32, kind: &str, message: String) -> Self {
        Outcome {
            code,
            text: format!("error: {message}\n"),
            json: json!({ "error": { "kind": kind, "message": message } }),
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_) | Error::Dimension { .. } => Outcome::error(EXIT_INPUT, "input", e.to_string()),
            Error::CapExceeded { .. } => Outcome::error(EXIT_CAP, "cap_exceeded", e.to_string()),
            Error::Precondition(_) => Outcome::error(EXIT_NEGATIVE, "precondition", e.to_string()),
            Error::Internal(_) => Outcome::error(EXIT_INTERNAL, "internal", e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Outcome>;

fn load(path: &PathBuf, cap: usize) -> Res<(ModuleSpec, MatGroup)> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Outcome::error(EXIT_INPUT, "input", format!("{}: {e}", path.display())))?;
    let desc = parse_group(&text).map_err(|e| Outcome::error(EXIT_INPUT, "parse", format!("{}: {e}", path.display())))?;
    let spec = desc.spec();
    let group = MatGroup::close(spec, &desc.matrices(), cap)?;
    Ok((spec, group))
}

fn structure_text(s: &AbelianStructure) -> String {
    if s.is_trivial() {
        return "0".into();
    }
    let parts: Vec<String> = s.invariant_factors().iter().map(|f| format!("Z/{f}")).collect();
    parts.join(" x ")
}

fn header_json(spec: ModuleSpec, group: &MatGroup) -> Value {
    json!({ "p": spec.p, "n": spec.n, "rank": spec.rank, "group_order": group.order() })
}

fn cohomology(path: &PathBuf, cap: usize, local: bool) -> Res<Outcome> {
    let (spec, group) = load(path, cap)?;
    let module = GModule::natural(&group);
    let c = Cohomology::new(&module)?;
    let h = if local { c.h1_loc()? } else { c.h1()? };
    let name = if local { "H1_loc" } else { "H1" };
    let mut text = format!("|G| = {}\n{name}(G, M) = {}\n", group.order(), structure_text(&h.structure));
    let mut reps = Vec::new();
    for (k, (rep, order)) in h.representatives.iter().zip(h.structure.invariant_factors()).enumerate() {
        let values: Vec<Vec<u64>> = c
            .generator_values(rep)
            .chunks(spec.rank)
            .map(<[u64]>::to_vec)
            .collect();
        let shown: Vec<String> = values.iter().enumerate().map(|(i, v)| format!("g{} -> {v:?}", i + 1)).collect();
        let _ = writeln!(text, "  class {} of order {order}: {}", k + 1, shown.join(", "));
        reps.push(json!({ "order": order, "generator_values": values }));
    }
    let mut out = header_json(spec, &group);
    out["command"] = json!(if local { "h1loc" } else { "h1" });
    out["invariant_factors"] = json!(h.structure.invariant_factors());
    out["trivial"] = json!(h.is_trivial());
    out["representatives"] = json!(reps);
    let code = if h.is_trivial() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome::new(code, text, out))
}

fn report_text(r: &CriterionReport, text: &mut String) {
    let verdict = match r.conclusion {
        Conclusion::Certified => "certified",
        Conclusion::NotApplicable => "not applicable",
        Conclusion::Inconclusive => "inconclusive",
    };
    let _ = writeln!(text, "{}: {verdict}", r.criterion);
    for h in &r.hypotheses {
        let mark = match h.status {
            ItemStatus::Satisfied => "ok",
            ItemStatus::Failed => "no",
            ItemStatus::Inconclusive => "??",
        };
        let _ = write!(text, "  [{mark}] {}", h.name);
        if let Some(w) = &h.witness {
            let _ = write!(text, " ({w})");
        }
        text.push('\n');
    }
    if let Some(c) = &r.cross_check {
        let _ = writeln!(text, "  direct H1_loc = {}", structure_text(c));
    }
}

fn criteria(path: &PathBuf, cap: usize) -> Res<Outcome> {
    let (spec, group) = load(path, cap)?;
    let mut reports = Vec::new();
    if spec.n == 1 {
        reports.push(theorem2_check(&group, None)?);
    } else {
        reports.push(theorem2_check(&group.reduce(1)?, Some(&group))?);
    }
    reports.push(corollary12_check(&group)?);
    if spec.n == 1 && spec.rank % 2 == 0 && spec.p > 2 {
        reports.push(theorem5_group_check(&group)?);
    }
    let verdict = proposition23_check(&group)?;

    let mut text = format!("|G| = {}\n", group.order());
    for r in &reports {
        report_text(r, &mut text);
    }
    let _ = match &verdict {
        Prop23Verdict::Certified { degree, .. } => {
            writeln!(text, "eigenvalue ratios: certified (eigenvalues in degree {degree})")
        }
        Prop23Verdict::HypothesisFails { reason } => writeln!(text, "eigenvalue ratios: not applicable ({reason})"),
        Prop23Verdict::Inconclusive { reason } => writeln!(text, "eigenvalue ratios: inconclusive ({reason})"),
    };
    let certified = reports.iter().any(CriterionReport::is_certified)
        || matches!(verdict, Prop23Verdict::Certified { .. });
    let mut out = header_json(spec, &group);
    out["command"] = json!("criteria");
    out["reports"] = serde_json::to_value(&reports).expect("serializable");
    out["eigenvalue_ratios"] = serde_json::to_value(&verdict).expect("serializable");
    out["certified"] = json!(certified);
    Ok(Outcome::new(if certified { EXIT_OK } else { EXIT_NEGATIVE }, text, out))
}

fn counterexample(p: u64, scan: bool) -> Res<Outcome> {
    let inst = build(p)?;
    let rep = verify(&inst)?;
    let mut text = format!("G2 = <g, H2> acting on (Z/{}^2)^2, |G2| = {}\n", p, inst.g2.order());
    for c in &rep.checks {
        let _ = writeln!(text, "  [{}] {}: {}", if c.passed { "ok" } else { "FAILED" }, c.name, c.detail);
    }
    if rep.all_passed() {
        let _ = writeln!(
            text,
            "H1_loc nontrivial: {} (class of Z has order {})",
            structure_text(&rep.h1_loc),
            rep.class_order
        );
    }
    for w in &rep.witnesses {
        let _ = writeln!(
            text,
            "witness at h({},{}): (x, y) = {:?} mod {p}, lift {:?} mod {}",
            w.a,
            w.b,
            w.witness.iter().map(|x| x % p).collect::<Vec<_>>(),
            w.witness,
            p * p
        );
    }
    let mut out = json!({
        "command": "counterexample",
        "p": p,
        "group_order": inst.g2.order(),
        "checks": rep.checks,
        "witnesses": rep.witnesses,
        "h1_loc": rep.h1_loc.invariant_factors(),
        "class_order": rep.class_order,
        "hom_group_order": rep.hom_group_order,
        "all_passed": rep.all_passed(),
    });
    if scan {
        let rows = scan_orders(p)?;
        text.push_str("scan:\n");
        for r in &rows {
            let _ = writeln!(
                text,
                "  {:<22} |G| = {:<6} top order mod p = {:<3} H1_loc = {}",
                r.label,
                r.group_order,
                r.top_order_mod_p,
                structure_text(&r.h1_loc)
            );
        }
        out["scan"] = json!(rows
            .iter()
            .map(|r| json!({
                "label": r.label,
                "group_order": r.group_order,
                "top_order_mod_p": r.top_order_mod_p,
                "divides_p_minus_1": r.divides_p_minus_1,
                "h1_loc": r.h1_loc.invariant_factors(),
                "vanishes": r.vanishes,
            }))
            .collect::<Vec<_>>());
    }
    let code = if rep.all_passed() { EXIT_NEGATIVE } else { EXIT_INTERNAL };
    Ok(Outcome::new(code, text, out))
}

fn gsp4(p: u64, enumerate: bool, cap: usize) -> Res<Outcome> {
    let formula = gsp4_order(p)?;
    let space = SymplecticSpace::new(ModuleSpec::new(p, 1, 4)?)?;
    let gens = gsp_generators(&space);
    let mut text = format!("|GSp4(F_{p})| = {formula} by formula\n");
    let group = if enumerate {
        Some(MatGroup::close(space.spec(), &gens, cap)?)
    } else {
        None
    };
    let checked: &[Mat] = group.as_ref().map_or(&gens, |g| g.elements());
    let mut pairing_ok = 0usize;
    for x in checked {
        pairing_ok += eigenvalue_pairing_check(x, &space)? as usize;
    }
    let order_ok = group.as_ref().map_or(true, |g| g.order() as u128 == formula);
    if let Some(g) = &group {
        let _ = writeln!(text, "enumerated order {}", g.order());
    }
    let what = if enumerate { "elements" } else { "generators" };
    let _ = writeln!(text, "eigenvalue pairing holds on {pairing_ok}/{} {what}", checked.len());
    let all_ok = order_ok && pairing_ok == checked.len();
    let out = json!({
        "command": "gsp4",
        "p": p,
        "formula_order": formula,
        "enumerated_order": group.as_ref().map(MatGroup::order),
        "pairing_checked": checked.len(),
        "pairing_ok": pairing_ok,
        "consistent": all_ok,
    });
    Ok(Outcome::new(if all_ok { EXIT_OK } else { EXIT_NEGATIVE }, text, out))
}

fn decompose(path: &PathBuf, cap: usize) -> Res<Outcome> {
    let (spec, group) = load(path, cap)?;
    let gens = group.generators();
    if gens.len() < 2 {
        return Err(Outcome::error(EXIT_INPUT, "input", "decompose needs g followed by generators of H".into()));
    }
    let g = &gens[0];
    let h = group.subgroup(&gens[1..])?;
    let dec = decompose_generators(g, &h)?;
    let ring = spec.ring();
    let mut text = format!(
        "g of order {}, |H| = {}, {} generators\n",
        element_order(g, &ring),
        h.order(),
        dec.pairs.len()
    );
    for (x, l) in &dec.pairs {
        let _ = writeln!(text, "  h = {:?}, g h g^-1 = h^{l}", x.row_vecs());
    }
    let out = json!({
        "command": "decompose",
        "p": spec.p,
        "n": spec.n,
        "rank": spec.rank,
        "g_order": element_order(g, &ring),
        "h_order": h.order(),
        "pairs": dec.pairs.iter().map(|(x, l)| json!({ "h": x, "lambda": l })).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(EXIT_OK, text, out))
}

pub fn run(cli: &Cli) -> Outcome {
    let res = match &cli.command {
        Command::H1 { file } => cohomology(file, cli.cap, false),
        Command::H1loc { file } => cohomology(file, cli.cap, true),
        Command::Criteria { file } => criteria(file, cli.cap),
        Command::Counterexample { p, scan } => counterexample(*p, *scan),
        Command::Gsp4 { p, enumerate } => gsp4(*p, *enumerate, cli.cap),
        Command::Decompose { file } => decompose(file, cli.cap),
    };
    res.unwrap_or_else(|o| o)
}
