use crate::record::ResultRecord;

const COLUMNS: [&str; 9] = [
    "experiment",
    "family",
    "d_f",
    "d_s",
    "d_m",
    "beta",
    "d_H",
    "d_P",
    "verdicts",
];

fn cell(value: Option<(f64, f64)>) -> String {
    value.map_or_else(String::new, |(v, s)| format!("{v:.3} ± {s:.3}"))
}

/// Markdown table, one row per record.
pub fn render(records: &[ResultRecord]) -> String {
    let mut out = format!(
        "| {} |\n|{}\n",
        COLUMNS.join(" | "),
        "---|".repeat(COLUMNS.len())
    );
    for r in records {
        let fit = |k: &str| cell(r.fits.get(k).map(|f| (f.slope, f.stderr)));
        let est = |k: &str| cell(r.estimates.get(k).and_then(|e| Some((e.value?, e.stderr?))));
        let verdicts: Vec<String> = r
            .verdicts
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect();
        let row = [
            r.name.clone(),
            r.family.clone(),
            fit("d_f"),
            fit("d_s"),
            fit("d_m"),
            fit("beta"),
            est("d_H"),
            est("d_P"),
            verdicts.join("; "),
        ];
        out.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    out
}
