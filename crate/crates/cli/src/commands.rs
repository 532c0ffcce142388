use std::fmt::Write as _;

use logmono_core::ball::{decimal_directed, exact_decimal, parse_decimal, Ball, Round};
use logmono_core::certify::{
    certify_d2_log_theta, f_at_3k, kth_deriv_log_theta, kth_sign_tangent, kth_sign_threshold, paper_bound_terms,
    tail_bound_report, CertStatus, CertifyOptions, SignFlag, TangentVariant,
};
use logmono_core::exactnum::{bernoulli_table, tangent, tangent_oracle};
use logmono_core::logmono::{default_prec_cap, scan_infinite_logmono, sun_conjecture_check, SequenceHandle, VerdictTag};
use logmono_core::special::{zeta_deriv_enclosure, zeta_enclosure, ZetaEnclosureParams};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::config::{Range, RunConfig};
use crate::CliError;

pub const TABLE_CAP: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Ok,
    Undecided,
    Fails,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Fails => 1,
            Outcome::Undecided => 2,
        }
    }
}

pub struct Report {
    pub outcome: Outcome,
    pub text: String,
    pub json: Value,
    pub csv: String,
}

/// `"m ± r"` split into its two columns.
fn ball_cols(b: &Ball) -> (String, String) {
    let s = b.to_string();
    match s.split_once(" ± ") {
        Some((m, r)) => (m.to_string(), r.to_string()),
        None => (s, "0".to_string()),
    }
}

fn rational_arg(s: &str) -> Result<BigRational, CliError> {
    parse_decimal(s).ok_or_else(|| CliError::Usage(format!("{s:?} is not a decimal number")))
}

fn table_size(cfg: &RunConfig) -> Result<u64, CliError> {
    let n = cfg.n_max.unwrap_or(20);
    if n > TABLE_CAP {
        return Err(CliError::Usage(format!("n-max {n} exceeds the table cap {TABLE_CAP}")));
    }
    Ok(n)
}

pub fn bernoulli(cfg: &RunConfig) -> Result<Report, CliError> {
    let n_max = table_size(cfg)?;
    let table = bernoulli_table(n_max);
    let mut text = String::new();
    let mut csv = String::from("n,B_n\n");
    let mut rows = Vec::new();
    for (n, b) in table.iter().enumerate() {
        writeln!(text, "{n}\t{b}").unwrap();
        writeln!(csv, "{n},{b}").unwrap();
        rows.push(json!({"n": n, "value": b.to_string()}));
    }
    Ok(Report {
        outcome: Outcome::Ok,
        text,
        json: json!({"command": "bernoulli", "rows": rows}),
        csv,
    })
}

pub fn tangent_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let n_max = table_size(cfg)?;
    let mut outcome = Outcome::Ok;
    let mut text = String::new();
    let mut csv = String::from("n,T_n,oracle\n");
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let t = tangent(n)?;
        let oracle = if n <= 200 {
            if tangent_oracle(n) == t {
                "ok"
            } else {
                outcome = Outcome::Fails;
                "MISMATCH"
            }
        } else {
            "-"
        };
        writeln!(text, "{n}\t{t}\t{oracle}").unwrap();
        writeln!(csv, "{n},{t},{oracle}").unwrap();
        rows.push(json!({"n": n, "value": t.to_string(), "oracle": oracle}));
    }
    Ok(Report {
        outcome,
        text,
        json: json!({"command": "tangent", "rows": rows}),
        csv,
    })
}

pub fn zeta(cfg: &RunConfig, x: &str, deriv: u32) -> Result<Report, CliError> {
    let xb = Ball::from_rational(&rational_arg(x)?, cfg.precision);
    let params = ZetaEnclosureParams::with_prec(cfg.precision);
    let v = if deriv == 0 {
        zeta_enclosure(&xb, &params)?
    } else {
        zeta_deriv_enclosure(&xb, deriv, &params)?
    };
    let (mid, rad) = ball_cols(&v);
    let label = if deriv == 0 {
        format!("zeta({x})")
    } else {
        format!("zeta^({deriv})({x})")
    };
    Ok(Report {
        outcome: Outcome::Ok,
        text: format!("{label} = {v}\n"),
        json: json!({"command": "zeta", "x": x, "deriv": deriv, "precision_bits": cfg.precision, "value": v}),
        csv: format!("x,deriv,mid,radius\n{x},{deriv},{mid},{rad}\n"),
    })
}

pub fn verify_theta(cfg: &RunConfig) -> Result<Report, CliError> {
    let range = match &cfg.range {
        Some(r) => r.clone(),
        None => Range::parse("6.001:100")?,
    };
    if range.lo <= BigRational::from_integer(6.into()) {
        return Err(CliError::Usage("verify-theta needs a range with LO > 6".into()));
    }
    let opts = CertifyOptions {
        max_depth: cfg.depth.unwrap_or(40),
        prec: cfg.precision,
        prec_cap: default_prec_cap().max(cfg.precision),
        ..CertifyOptions::default()
    };
    let cert = certify_d2_log_theta(&range.lo, &range.hi, &opts)?;
    let tail = tail_bound_report(&Ball::from_rational(&range.hi, cfg.precision))?;
    let outcome = if cert.status == CertStatus::Certified && tail.certified_negative {
        Outcome::Ok
    } else {
        Outcome::Undecided
    };
    let mut text = String::new();
    writeln!(text, "(log theta)'' < 0 on [{}, {}]", cert.interval[0], cert.interval[1]).unwrap();
    writeln!(text, "status: {:?}", cert.status).unwrap();
    writeln!(text, "leaves: {}", cert.leaves.len()).unwrap();
    writeln!(text, "max upper bound: {}", cert.max_upper).unwrap();
    writeln!(text, "precision bits: {}", cert.precision_bits).unwrap();
    writeln!(text, "tail from {}:", range.text.1).unwrap();
    writeln!(text, "  2log2 term  {}", tail.breakdown.term_log2).unwrap();
    writeln!(text, "  zeta term   {}", tail.breakdown.term_zeta).unwrap();
    writeln!(text, "  gamma term  {}", tail.breakdown.term_gamma).unwrap();
    writeln!(text, "  total       {}", tail.breakdown.total).unwrap();
    writeln!(
        text,
        "  decreasing: f0 {} f1 {}; negative for all larger x: {}",
        tail.f0_decreasing, tail.f1_decreasing, tail.certified_negative
    )
    .unwrap();
    let mut csv = String::from("lo,hi,upper_bound,precision_bits\n");
    for l in &cert.leaves {
        writeln!(csv, "{},{},{},{}", l.lo, l.hi, l.upper_bound_decimal, l.precision_bits).unwrap();
    }
    Ok(Report {
        outcome,
        text,
        json: json!({"certificate": cert, "tail": tail}),
        csv,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KthVariant {
    /// `(log theta)^(k)`, expected sign of `(-1)^k (.)`: negative
    Theta,
    /// `(log t)^(k)`, expected sign of `(-1)^k (.)`: positive
    T,
    /// `(log t^(-1/x))^(k)`, expected sign of `(-1)^k (.)`: positive
    InvRootT,
}

fn grid(range: &Range, points: u64) -> Vec<BigRational> {
    let points = points.max(2);
    let step = (&range.hi - &range.lo) / BigRational::from_integer((points - 1).into());
    (0..points)
        .map(|i| &range.lo + &step * BigRational::from_integer(i.into()))
        .collect()
}

pub fn verify_kth(cfg: &RunConfig, k: u32, variant: KthVariant) -> Result<Report, CliError> {
    if k < 2 {
        return Err(CliError::Usage("k must be at least 2".into()));
    }
    let mut outcome = Outcome::Ok;
    let mut text = String::new();
    let expected = match variant {
        KthVariant::Theta => SignFlag::Negative,
        _ => SignFlag::Positive,
    };
    writeln!(text, "{variant:?} k = {k}: sign of (-1)^k times the k-th log derivative, expected {expected:?}").unwrap();
    // The theta signs are only claimed beyond X(k), so the default grid
    // starts there.
    let mut lo_default = (k + 4) as f64;
    let threshold = if variant == KthVariant::Theta {
        match kth_sign_threshold(k, 1e4, cfg.precision) {
            Ok(t) => {
                writeln!(
                    text,
                    "threshold X({k}) = {} ({}), bound {}, monotone evidence {}",
                    t.threshold, t.method, t.bound, t.monotone_evidence
                )
                .unwrap();
                if !t.monotone_evidence {
                    outcome = outcome.max(Outcome::Undecided);
                }
                lo_default = lo_default.max(t.threshold);
                serde_json::to_value(&t).map_err(CliError::Json)?
            }
            Err(e) => {
                writeln!(text, "threshold search: {e}").unwrap();
                outcome = outcome.max(Outcome::Undecided);
                Value::Null
            }
        }
    } else {
        Value::Null
    };
    let range = match &cfg.range {
        Some(r) => r.clone(),
        None => Range::parse(&format!("{lo_default}:{}", 100 + 10 * k))?,
    };
    if range.lo <= BigRational::from_integer((k + 3).into()) {
        return Err(CliError::Usage(format!("verify-kth needs a range with LO > {}", k + 3)));
    }
    let mut csv = String::from("x,mid,radius,sign\n");
    let mut rows = Vec::new();
    for x in grid(&range, cfg.n_max.unwrap_or(8)) {
        let xb = Ball::from_rational(&x, cfg.precision);
        let v = match variant {
            KthVariant::Theta => {
                let d = kth_deriv_log_theta(&xb, k)?;
                if k % 2 == 1 { d.neg() } else { d }
            }
            KthVariant::T => kth_sign_tangent(TangentVariant::T, &xb, k)?.value,
            KthVariant::InvRootT => kth_sign_tangent(TangentVariant::InvXthRootT, &xb, k)?.value,
        };
        let flag = SignFlag::of(&v);
        if flag == SignFlag::Undecided {
            outcome = outcome.max(Outcome::Undecided);
        } else if flag != expected {
            outcome = Outcome::Fails;
        }
        let xs = exact_decimal(&x);
        let (mid, rad) = ball_cols(&v);
        writeln!(text, "  x = {xs}: {v} {flag:?}").unwrap();
        writeln!(csv, "{xs},{mid},{rad},{flag:?}").unwrap();
        rows.push(json!({"x": xs, "value": v, "sign": flag}));
    }
    Ok(Report {
        outcome,
        text,
        json: json!({"variant": format!("{variant:?}"), "k": k, "points": rows, "threshold": threshold}),
        csv,
    })
}

fn tag_outcome(t: VerdictTag) -> Outcome {
    match t {
        VerdictTag::Holds => Outcome::Ok,
        VerdictTag::Fails => Outcome::Fails,
        VerdictTag::Undecided => Outcome::Undecided,
    }
}

pub fn logmono(cfg: &RunConfig, name: &str) -> Result<Report, CliError> {
    let seq = SequenceHandle::named(name.parse()?)?;
    let (lo, hi) = match &cfg.range {
        Some(r) => r.integers()?,
        None => (1, cfg.n_max.unwrap_or(100)),
    };
    let depth = cfg.depth.unwrap_or(3);
    let rep = scan_infinite_logmono(&seq, depth, (lo, hi), cfg.strict, default_prec_cap().max(cfg.precision))?;
    let mut text = String::new();
    writeln!(
        text,
        "{} over n = {}..{} (strict: {}), depths 0..{}",
        rep.sequence, rep.range[0], rep.range[1], rep.strict, rep.depth
    )
    .unwrap();
    let mut csv = String::from("r,shape,n,verdict\n");
    for m in &rep.reports {
        writeln!(
            text,
            "r = {} ({:?}): checked {}..{}, N = {}, violations {:?}, undecided {:?}",
            m.r, m.shape, m.checked[0], m.checked[1], m.threshold, m.violations, m.undecided
        )
        .unwrap();
        for (v, n) in m.verdicts.iter().zip(m.checked[0]..) {
            writeln!(csv, "{},{:?},{},{:?}", m.r, m.shape, n, v).unwrap();
        }
    }
    Ok(Report {
        outcome: tag_outcome(rep.worst()),
        text,
        json: serde_json::to_value(&rep).map_err(CliError::Json)?,
        csv,
    })
}

pub fn sun(cfg: &RunConfig) -> Result<Report, CliError> {
    let n_max = cfg.n_max.unwrap_or(100);
    let rep = sun_conjecture_check(n_max, default_prec_cap().max(cfg.precision))?;
    let outcome = if rep.fails > 0 {
        Outcome::Fails
    } else if rep.undecided > 0 {
        Outcome::Undecided
    } else {
        Outcome::Ok
    };
    let mut csv = String::from("part,n,verdict\n");
    for (v, n) in rep.increasing.iter().zip(1..) {
        writeln!(csv, "increasing,{n},{v:?}").unwrap();
    }
    for (v, n) in rep.ratio_decreasing.iter().zip(2..) {
        writeln!(csv, "ratio_decreasing,{n},{v:?}").unwrap();
    }
    let text = format!(
        "|B_2n|^(1/n): increasing for n = 1..{}, ratios decreasing for n = 2..{}\nfails {}, undecided {}\n",
        n_max - 1,
        n_max - 2,
        rep.fails,
        rep.undecided
    );
    Ok(Report {
        outcome,
        text,
        json: serde_json::to_value(&rep).map_err(CliError::Json)?,
        csv,
    })
}

const TOLERANCE: f64 = 5e-4;

pub fn bounds(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.precision;
    let mut outcome = Outcome::Ok;
    let mut rows = Vec::new();
    let six = paper_bound_terms(&Ball::from_int(6, p))?;
    let tail = tail_bound_report(&Ball::from_int(6, p))?;
    let mut constant = |name: &str, printed: f64, v: &Ball, documented: bool| {
        let status = if (v.mid_f64() - printed).abs() <= TOLERANCE && !documented {
            "ok"
        } else if documented {
            "documented discrepancy"
        } else {
            outcome = Outcome::Fails;
            "MISMATCH"
        };
        rows.push((name.to_string(), format!("{printed}"), v.clone(), status.to_string()));
    };
    constant("2log2", 1.386, &six.term_log2, false);
    constant("zeta-part@6", 2.1545, &six.term_zeta, false);
    constant("f1(6)", -3.787, &six.term_gamma, false);
    constant("total@6", tail.printed_total, &six.total, tail.discrepancy_flag);
    if !six.total.is_negative() {
        outcome = Outcome::Fails;
    }
    let k_max = cfg.depth.unwrap_or(8).max(2);
    for k in 2..=k_max {
        let (f, cap) = f_at_3k(k, p)?;
        let status = if f.upper() <= cap.lower() {
            "ok"
        } else {
            outcome = Outcome::Fails;
            "MISMATCH"
        };
        let printed = format!("<= {}", decimal_directed(&cap.lower(), 8, Round::Down));
        rows.push((format!("f({k},{})", 3 * k), printed, f, status.to_string()));
    }
    if let Some(r) = &cfg.range {
        for x in grid(r, cfg.n_max.unwrap_or(5)) {
            let xs = exact_decimal(&x);
            let t = paper_bound_terms(&Ball::from_rational(&x, p))?;
            let status = if t.total.is_negative() { "ok" } else { "MISMATCH" };
            if status != "ok" {
                outcome = Outcome::Fails;
            }
            rows.push((format!("total@{xs}"), "< 0".into(), t.total, status.to_string()));
        }
    }
    let mut text = String::new();
    let mut csv = String::from("name,printed,mid,radius,status\n");
    let mut json_rows = Vec::new();
    for (name, printed, v, status) in &rows {
        writeln!(text, "{name:<14} printed {printed:<16} computed {v:.10}  {status}").unwrap();
        let (mid, rad) = ball_cols(v);
        writeln!(csv, "{name},{printed},{mid},{rad},{status}").unwrap();
        json_rows.push(json!({"name": name, "printed": printed, "computed": v, "status": status}));
    }
    Ok(Report {
        outcome,
        text,
        json: json!({"command": "bounds", "rows": json_rows}),
        csv,
    })
}
