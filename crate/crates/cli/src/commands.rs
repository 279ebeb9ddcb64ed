use std::fmt::Write as _;
use std::path::Path;

use hodge_corners::dec::base::mesh_for;
use hodge_corners::dec::{betti, build_cochain_complex, Mesh};
use hodge_corners::oracle::{indicial_ground_energy, ConvergenceRow, CONVERGENCE_CSV_HEADER};
use hodge_corners::recursion::{format_complex, hyperface_indicial_spectrum};
use hodge_corners::spectrum::CSV_HEADER;
use hodge_corners::{
    essential_threshold, full_spectrum, hyperfaces, is_compact, is_fredholm, min_spectrum, restrict,
    restrict_to_face, validate_complex, ComplexDocument, CornerComplex, Error, FaceId, IndicialCertificate,
    OperatorKind, OperatorQuery, Result,
};

use crate::{Command, Common, Format};

/// Output with a `# `-prefixed header.
struct Report {
    text: String,
}

impl Report {
    fn new(header: &[String]) -> Self {
        let mut text = String::new();
        for line in header {
            let _ = writeln!(text, "# {line}");
        }
        Report { text }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        e => e,
    }
}

fn read_document(path: &Path) -> Result<ComplexDocument> {
    ComplexDocument::from_path(path).map_err(|e| with_path(path, e))
}

fn load(path: &Path) -> Result<CornerComplex> {
    CornerComplex::try_from(read_document(path)?)
}

fn header(common: &Common, input: &Path, cc: Option<&CornerComplex>) -> Result<Vec<String>> {
    let mut h = common.header()?;
    h.insert(1, format!("input: {}", input.display()));
    if let Some(cc) = cc {
        if !cc.is_closed() {
            h.push("note: hyperface weights are recorded, thresholds use face geometry only".into());
        }
    }
    Ok(h)
}

pub fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::Validate { input } => validate(&input),
        Command::Spectrum { input, p, face, common } => spectrum(&input, p, face, &common),
        Command::Threshold { input, p, common } => threshold(&input, p, &common),
        Command::Fredholm { input, p, z, common } => {
            let cc = load(&input)?;
            let q = OperatorQuery { kind: OperatorKind::LaplacianShift { p, z }, complex: &cc };
            let (_, cert) = is_fredholm(&q, &common.options()?)?;
            certificate(&cert, &header(&common, &input, Some(&cc))?, common.format)
        }
        Command::Compactness { input, p, s, common } => {
            let cc = load(&input)?;
            let q = OperatorQuery { kind: OperatorKind::ResolventPower { p, s }, complex: &cc };
            let (_, cert) = is_compact(&q, &common.options()?)?;
            certificate(&cert, &header(&common, &input, Some(&cc))?, common.format)
        }
        Command::Betti { input, mesh, common } => betti_numbers(input.as_deref(), mesh.as_deref(), &common),
        Command::Oracle { input, p, length, grid, common } => oracle(&input, p, &length, grid, &common),
    }
}

fn validate(input: &Path) -> Result<String> {
    let doc = read_document(input)?;
    let report = validate_complex(&doc);
    if !report.is_valid() {
        return Err(Error::InvalidComplex(report));
    }
    let cc = CornerComplex::try_from(doc)?;
    Ok(format!(
        "valid: {} (dim {}, {} faces, {} hyperfaces)\n",
        cc.name(),
        cc.dim(),
        cc.faces().len(),
        hyperfaces(&cc).len()
    ))
}

fn spectrum(input: &Path, p: usize, face: Option<String>, common: &Common) -> Result<String> {
    let root = load(input)?;
    let cc = match &face {
        Some(f) => restrict_to_face(&root, &FaceId::from(f.as_str()))?,
        None => root,
    };
    let s = full_spectrum(&cc, p, &common.options()?)?;
    let mut r = Report::new(&header(common, input, Some(&cc))?);
    r.line(format!("# complex: {}", cc.name()));
    r.line(format!("# kernel_dim: {}", s.zero_multiplicity()));
    match common.format {
        Format::Csv => {
            r.line(CSV_HEADER);
            r.line(s.to_csv_row());
        }
        Format::Table => {
            r.line(format!("spectrum of Δ_{p}: {s}"));
            r.line(format!("kernel_dim: {}", s.zero_multiplicity()));
        }
    }
    Ok(r.text)
}

fn threshold(input: &Path, p: usize, common: &Common) -> Result<String> {
    let cc = load(input)?;
    let t = essential_threshold(&cc, p, &common.options()?)?;
    let mut r = Report::new(&header(common, input, Some(&cc))?);
    match common.format {
        Format::Csv => {
            r.line("p,essential_threshold,upper_bound_only");
            let m = t.value.map_or("none".to_string(), |m| m.to_string());
            r.line(format!("{p},{m},{}", t.upper_bound_only));
        }
        Format::Table => r.line(format!("essential threshold: {t}")),
    }
    Ok(r.text)
}

fn certificate(cert: &IndicialCertificate, header: &[String], format: Format) -> Result<String> {
    let mut r = Report::new(header);
    match format {
        Format::Csv => r.text.push_str(&cert.to_csv()),
        Format::Table => {
            let (label, shift) = match cert.operator {
                OperatorKind::LaplacianShift { z, .. } => ("fredholm", format!("z = {}", format_complex(z))),
                OperatorKind::ResolventPower { s, .. } => ("compact", format!("s = {s}")),
            };
            r.line(format!("operator: {}, {shift}", cert.operator));
            r.line(format!("elliptic: {}", cert.elliptic));
            if cert.entries.is_empty() {
                r.line("no boundary hyperfaces");
            } else {
                let width = cert.entries.iter().map(|e| e.face.as_str().len()).max().unwrap_or(0).max(9);
                r.line(format!("{:<width$}  degree  {:<17}  verdict", "hyperface", "indicial spectrum"));
                for e in &cert.entries {
                    r.line(format!(
                        "{:<width$}  {:<6}  {:<17}  {}",
                        e.face.as_str(),
                        e.degree,
                        e.indicial.to_string(),
                        e.verdict
                    ));
                }
            }
            r.line(format!("{label}: {}", cert.verdict));
        }
    }
    Ok(r.text)
}

fn betti_numbers(input: Option<&Path>, mesh_path: Option<&Path>, common: &Common) -> Result<String> {
    let res = common.resolution()?;
    let (mesh, source) = match (input, mesh_path) {
        (_, Some(m)) => (Mesh::from_off_path(m).map_err(|e| with_path(m, e))?, m),
        (Some(i), None) => {
            let cc = load(i)?;
            if !cc.is_closed() {
                return Err(Error::Unsupported(format!("`{}` has boundary; Betti numbers need a closed face", cc.name())));
            }
            let geometry = &cc.top().geometry;
            let mesh = mesh_for(geometry, &res)?
                .ok_or_else(|| Error::Unsupported(format!("no mesh generator for {geometry}")))?;
            (mesh, i)
        }
        (None, None) => unreachable!("clap requires --input or --mesh"),
    };
    let cx = build_cochain_complex(&mesh)?;
    let numbers = (0..=cx.dim()).map(|p| betti(&cx, p)).collect::<Result<Vec<_>>>()?;
    let mut h = common.header()?;
    h.insert(1, format!("input: {}", source.display()));
    h.push(format!("mesh: {} vertices, dim {}, {} duals", mesh.vertex_count(), mesh.dim(), cx.dual_kind()));
    let mut r = Report::new(&h);
    match common.format {
        Format::Csv => {
            r.line("p,betti");
            for (p, b) in numbers.iter().enumerate() {
                r.line(format!("{p},{b}"));
            }
        }
        Format::Table => {
            let list: Vec<String> = numbers.iter().map(usize::to_string).collect();
            r.line(format!("betti numbers: ({})", list.join(", ")));
        }
    }
    Ok(r.text)
}

fn oracle(input: &Path, p: usize, lengths: &[f64], grid: usize, common: &Common) -> Result<String> {
    let cc = load(input)?;
    let opts = common.options()?;
    let mut rows = Vec::new();
    for h in hyperfaces(&cc) {
        let sub = restrict(&cc, &h)?;
        if !sub.is_closed() {
            eprintln!("note: skipping hyperface `{h}`, which has boundary of its own");
            continue;
        }
        let threshold = min_spectrum(&hyperface_indicial_spectrum(&cc, &h, p, &opts)?)?;
        for &length in lengths {
            let energy = indicial_ground_energy(&sub.top().geometry, p, length, grid, &opts.base_resolution)?;
            rows.push((h.clone(), ConvergenceRow { length, grid_n: grid, energy, threshold }));
        }
    }
    if rows.is_empty() {
        return Err(Error::Unsupported(format!("`{}` has no closed boundary hyperface to model", cc.name())));
    }
    let mut r = Report::new(&header(common, input, Some(&cc))?);
    match common.format {
        Format::Csv => {
            r.line(format!("hyperface,{CONVERGENCE_CSV_HEADER}"));
            for (h, row) in &rows {
                r.line(format!("{h},{row}"));
            }
        }
        Format::Table => {
            r.line(format!(
                "{:<9}  {:>8}  {:>6}  {:>14}  {:>10}  {:>12}",
                "hyperface", "L", "grid", "ground energy", "threshold", "gap"
            ));
            for (h, row) in &rows {
                r.line(format!(
                    "{:<9}  {:>8}  {:>6}  {:>14.8}  {:>10}  {:>12.6e}",
                    h.as_str(),
                    row.length,
                    row.grid_n,
                    row.energy,
                    row.threshold,
                    row.gap()
                ));
            }
        }
    }
    Ok(r.text)
}
