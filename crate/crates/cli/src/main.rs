//! Command-line driver for the 3d-index engine.
//!
//! Truncation orders are always given in half-units: `--order 18` requests
//! coefficients of q^{h/2} for all h < 18, i.e. the series through q^8
//! plus its O(q^9) marker.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tindex_core::indexer::{
    check_quotient_relations, dgg_index, index_element, IndexResult, SummationOptions,
};
use tindex_core::pachner::{build_move_map, verify_index_compatibility, MoveDescriptor};
use tindex_core::qtorus::TorusElement;
use tindex_core::tetindex::{j_index, tet_index, Charges, Triple};
use tindex_core::{expr, HalfExp, QSeries, Triangulation};

const FIG8_JSON: &str = include_str!("../fixtures/fig8.json");
const KB_EXPR: &str = "-q^(-1/2)*Z1^-1*Zpp2 - q^(-1/2)*Zpp1*Z2^-1 - q^(-1/2)*Zpp1*Zpp2";

#[derive(Parser)]
#[command(
    name = "tindex",
    version,
    about = "3d-index of ideally triangulated cusped 3-manifolds, as exact q^{1/2}-series",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tetrahedron index I(m,e) as a truncated series
    #[command(name = "tet-index", allow_negative_numbers = true)]
    TetIndex {
        m: i64,
        e: i64,
        /// truncation order in half-units of q^{1/2}
        #[arg(long)]
        order: HalfExp,
    },
    /// Symmetric tetrahedron index J(a,b,c)
    #[command(name = "j-index", allow_negative_numbers = true)]
    JIndex {
        a: i64,
        b: i64,
        c: i64,
        #[arg(long)]
        order: HalfExp,
    },
    /// Index of a quantum-torus element over a triangulation
    Index {
        /// triangulation JSON file
        tri: PathBuf,
        /// element in the expression language, e.g. "-q^(-1/2)*Zpp1*Zpp2"
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        order: HalfExp,
        /// consecutive empty shells required to stop
        #[arg(long, default_value_t = 3)]
        shell_window: u32,
        /// hard cap on the shell radius
        #[arg(long, default_value_t = 200)]
        max_radius: u32,
        /// emit JSON with the coefficient list and summation report
        #[arg(long)]
        json: bool,
    },
    /// DGG peripheral index at charges (m, e)
    Dgg {
        tri: PathBuf,
        #[arg(long, default_value_t = 0)]
        cusp: usize,
        /// magnetic charge; integers or half-integers like 1/2, -3/2
        #[arg(short = 'm', allow_hyphen_values = true)]
        m: String,
        /// electric charge
        #[arg(short = 'e', allow_hyphen_values = true)]
        e: i64,
        #[arg(long)]
        order: HalfExp,
    },
    /// Verify the quotient relations at a Weyl monomial
    #[command(name = "check-relations")]
    CheckRelations {
        tri: PathBuf,
        /// single Weyl monomial, e.g. "Zpp1*Zpp2"
        #[arg(long, allow_hyphen_values = true)]
        monomial: String,
        #[arg(long)]
        order: HalfExp,
    },
    /// Verify index compatibility across a 3-2 or 2-0 move
    #[command(name = "pachner-check")]
    PachnerCheck {
        /// move descriptor JSON file
        move_file: PathBuf,
        #[arg(long)]
        order: HalfExp,
        /// extra sample element over the source triangulation
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
    },
    /// Validate a triangulation file and print its symplectic report
    Validate { tri: PathBuf },
    /// Bundled worked examples
    Example {
        /// example name (fig8-kb)
        name: String,
        #[arg(long, default_value_t = 18)]
        order: HalfExp,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_triangulation(path: &Path) -> Result<Triangulation, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Triangulation::load_and_validate(&text).map_err(|e| e.to_string())
}

fn parse_half_integer(s: &str) -> Result<i64, String> {
    // value in half-units: "3" -> 6, "-1/2" -> -1
    if let Some((num, den)) = s.split_once('/') {
        if den.trim() != "2" {
            return Err(format!("bad half-integer {s:?}: only /2 denominators"));
        }
        num.trim().parse::<i64>().map_err(|e| format!("bad half-integer {s:?}: {e}"))
    } else {
        let n: i64 = s.trim().parse().map_err(|e| format!("bad integer {s:?}: {e}"))?;
        Ok(2 * n)
    }
}

fn print_result(r: &IndexResult, json: bool) {
    if json {
        let terms: Vec<String> = r
            .series
            .iter_terms()
            .map(|(h, c)| format!(r#"[{h},"{c}"]"#))
            .collect();
        let order = r.series.order().expect("index series are truncated");
        println!(
            r#"{{"terms":[{}],"order":{},"radius":{},"contributing":{},"termination":"{}"}}"#,
            terms.join(","),
            order,
            r.info.radius,
            r.info.contributing,
            r.info.termination
        );
    } else {
        println!("{}", r.series);
        println!(
            "# radius={} contributing={} termination={}",
            r.info.radius, r.info.contributing, r.info.termination
        );
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, String> {
    match cmd {
        Cmd::TetIndex { m, e, order } => {
            println!("{}", tet_index(Charges { m, e }, order));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::JIndex { a, b, c, order } => {
            println!("{}", j_index(Triple::new(a, b, c), order));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Index { tri, element, order, shell_window, max_radius, json } => {
            let t = load_triangulation(&tri)?;
            let u = expr::parse_element(&element, t.n_tets).map_err(|e| e.to_string())?;
            let opts = SummationOptions { order, shell_window, max_radius };
            let r = index_element(&t, &u, &opts).map_err(|e| e.to_string())?;
            print_result(&r, json);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dgg { tri, cusp, m, e, order } => {
            let t = load_triangulation(&tri)?;
            let m_twice = parse_half_integer(&m)?;
            let opts = SummationOptions::with_order(order);
            let r = dgg_index(&t, cusp, m_twice, e, &opts).map_err(|e| e.to_string())?;
            print_result(&r, false);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::CheckRelations { tri, monomial, order } => {
            let t = load_triangulation(&tri)?;
            let s0 = expr::parse_monomial(&monomial, t.n_tets).map_err(|e| e.to_string())?;
            let opts = SummationOptions::with_order(order);
            let report = check_quotient_relations(&t, &s0, &opts).map_err(|e| e.to_string())?;
            for c in &report.checks {
                match (c.pass, c.first_difference) {
                    (true, _) => println!("{}: PASS", c.label),
                    (false, Some(h)) => {
                        println!("{}: FAIL (first difference at q^({h}/2))", c.label)
                    }
                    (false, None) => println!("{}: FAIL", c.label),
                }
            }
            if report.all_pass() {
                println!("all relations hold to q^({order}/2)");
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Cmd::PachnerCheck { move_file, order, element } => {
            let desc = MoveDescriptor::from_file(&move_file).map_err(|e| e.to_string())?;
            let map = build_move_map(&desc).map_err(|e| e.to_string())?;
            println!(
                "move map ok: omega preserved on all {} generator pairs",
                (3 * desc.source.n_tets) * (3 * desc.source.n_tets)
            );
            let mut samples =
                vec![("unit".to_string(), TorusElement::unit(desc.source.n_tets))];
            if let Some(src) = element {
                let u = expr::parse_element(&src, desc.source.n_tets)
                    .map_err(|e| e.to_string())?;
                samples.push((src, u));
            }
            let opts = SummationOptions::with_order(order);
            let report = verify_index_compatibility(&desc, &map, &samples, &opts)
                .map_err(|e| e.to_string())?;
            for c in &report.checks {
                match (c.pass, c.first_difference) {
                    (true, _) => println!("index({}) matches across the move: PASS", c.label),
                    (false, Some(h)) => println!(
                        "index({}) differs across the move at q^({h}/2): FAIL",
                        c.label
                    ),
                    (false, None) => println!("index({}): FAIL", c.label),
                }
            }
            Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Validate { tri } => {
            let t = load_triangulation(&tri)?;
            println!(
                "ok: {} with {} tetrahedra, {} cusp(s)",
                t.name, t.n_tets, t.n_cusps
            );
            println!("edge rows nonnegative, quad columns sum to 2");
            println!("symplectic pairings: edges and peripherals orthogonal, omega(L,M)=2 per cusp");
            println!(
                "independent edges (rank {} mod tetrahedra): {:?}",
                t.independent_edges.len(),
                t.independent_edges
            );
            println!("one_efficient flag: {}", t.one_efficient);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Example { name, order } => {
            if name != "fig8-kb" {
                return Err(format!("unknown example {name:?} (available: fig8-kb)"));
            }
            let t = Triangulation::load_and_validate(FIG8_JSON).expect("bundled fixture");
            let u = expr::parse_element(KB_EXPR, 2).expect("bundled expression");
            println!("triangulation: {} ({} tetrahedra)", t.name, t.n_tets);
            println!("qtr(K_b) = {KB_EXPR}");

            let r1 = index_element(&t, &u, &SummationOptions::with_order(order - 1))
                .map_err(|e| e.to_string())?;
            let s1 = r1.series.mul(&QSeries::exact_monomial((-1).into(), 1));
            println!("-q^(1/2)*I(K_b) = {s1}");

            let v = u.iota().expect("polynomial coefficients");
            let r2 = index_element(&t, &v, &SummationOptions::with_order(order + 1))
                .map_err(|e| e.to_string())?;
            let s2 = r2.series.mul(&QSeries::exact_monomial((-1).into(), -1));
            println!("-q^(-1/2)*I(iota K_b) = {s2}");
            Ok(ExitCode::SUCCESS)
        }
    }
}
