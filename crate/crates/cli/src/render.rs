//! Markdown and CSV views of stage output.

use prymcusp::cuspgeom::GeometryPair;
use prymcusp::origami::CandidateReport;
use prymcusp::solver::RelationSolution;

pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Table { title: title.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn markdown(&self) -> String {
        let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
        let mut s = format!("### {}\n\n", self.title);
        s += &line(&self.headers);
        s += &line(&vec!["---".to_string(); self.headers.len()]);
        for r in &self.rows {
            s += &line(r);
        }
        s
    }

    pub fn csv(&self) -> String {
        let line = |cells: &[String]| cells.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",") + "\n";
        let mut s = line(&self.headers);
        for r in &self.rows {
            s += &line(r);
        }
        s
    }
}

pub fn solutions(sols: &[RelationSolution]) -> Table {
    let title = sols.first().map_or("solutions".to_string(), |s| format!("Solutions, Prym({})", s.stratum));
    let mut t = Table::new(title, &["N", "eXY", "eU", "r", "N(r)", "representative"]);
    for s in sols {
        t.rows.push(vec![
            s.n.to_string(),
            s.e_xy.to_string(),
            s.e_u.to_string(),
            s.r.to_string(),
            s.r.norm().to_string(),
            if s.is_representative() { "yes" } else { "no" }.to_string(),
        ]);
    }
    t
}

pub fn geometries(geoms: &[GeometryPair]) -> Table {
    let mut t = Table::new("Cusp geometries", &["M^red", "D0", "r2", "w(Z1)", "w(Z2)", "h(Z1)", "h(Z2)", "crossing"]);
    for g in geoms {
        t.rows.push(vec![
            g.mred.to_string(),
            g.d0().to_string(),
            g.r2().to_string(),
            g.w_z1.to_string(),
            g.w_z2.to_string(),
            g.h_z1.to_string(),
            g.h_z2.to_string(),
            format!("{:?}", g.crossing),
        ]);
    }
    t
}

/// Prototypes on the worked diagram, one row per candidate.
pub fn sd4(report: &CandidateReport) -> Table {
    let sd4 = report.diagrams.iter().position(|d| d.is_sd4_analog());
    let mut t = Table::new(
        format!("Prototypes on diagram d{}", sd4.map_or("-".into(), |i| i.to_string())),
        &["M^red", "D0", "arithmetic", "admissible", "(w,h,t,e)", "slit", "D", "lambda", "twist zero", "kept"],
    );
    let Some(sd4) = sd4 else { return t };
    for (mr, d0) in &report.matrices {
        let Some(cell) = report.cell(mr, sd4) else { continue };
        let cands: Vec<_> = report.candidates.iter().filter(|c| c.diagram == sd4 && c.matrix == *mr).collect();
        let head = [mr.to_string(), d0.to_string(), cell.arithmetic.to_string(), cell.admissible.to_string()];
        if cands.is_empty() {
            t.rows.push(head.iter().cloned().chain(["-"; 6].map(String::from)).collect());
        }
        for c in cands {
            let (proto, slit, d, lambda) = match &c.prototype {
                Some(p) => (format!("({},{},{},{})", p.w, p.h, p.t, p.e), p.slit.0.to_string(), p.d.to_string(), p.lambda.0.to_string()),
                None => ("-".into(), "-".into(), "-".into(), "-".into()),
            };
            let yn = |b: bool| if b { "yes" } else { "no" }.to_string();
            t.rows.push(head.iter().cloned().chain([proto, slit, d, lambda, yn(c.twist_zero), yn(c.commensurable)]).collect());
        }
    }
    t
}

/// Arithmetic surfaces and candidates per (matrix, diagram); each cell
/// reads `arithmetic / candidates`.
pub fn algo(report: &CandidateReport) -> Table {
    let n = report.diagrams.len();
    let names: Vec<String> = (0..n)
        .map(|i| if report.diagrams[i].is_sd4_analog() { format!("d{i} (worked)") } else { format!("d{i}") })
        .collect();
    let mut headers = vec!["M^red", "D0"];
    headers.extend(names.iter().map(String::as_str));
    let mut t = Table::new(format!("Candidates per diagram, Prym({})", report.stratum), &headers);
    for (mr, d0) in &report.matrices {
        let mut row = vec![mr.to_string(), d0.to_string()];
        for i in 0..n {
            row.push(report.cell(mr, i).map_or("-".into(), |c| format!("{} / {}", c.arithmetic, c.candidates)));
        }
        t.rows.push(row);
    }
    let total = |label: &str, v: Vec<usize>, sum: usize| {
        let mut row = vec![label.to_string(), sum.to_string()];
        row.extend(v.iter().map(usize::to_string));
        row
    };
    let before = report.per_diagram_candidates();
    let after = report.per_diagram_after_filter();
    t.rows.push(total("candidates", before, report.total_candidates()));
    t.rows.push(total("after filter", after, report.final_candidates().len()));
    t
}
