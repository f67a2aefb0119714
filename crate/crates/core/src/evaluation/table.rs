use super::metrics::MetricsReport;

const HEADERS: [&str; 7] = [
    "Method",
    "AP@[0.3:0.95]",
    "AP@0.3",
    "AP@0.5",
    "GFLOPs",
    "Params (millions)",
    "Time (ms)",
];

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

/// Cost columns are shown only when every report of the group supplies them.
fn mean_opt<'a>(
    reports: &[&'a MetricsReport],
    f: impl Fn(&'a MetricsReport) -> Option<f64>,
) -> String {
    let vals: Option<Vec<f64>> = reports.iter().map(|r| f(r)).collect();
    match vals {
        Some(v) if !v.is_empty() => format!("{:.2}", mean(v.into_iter())),
        _ => "-".to_string(),
    }
}

/// Groups reports by detector (in first-seen order), averages each metric
/// across the group (typically the folds) and lays them out as a table.
pub fn render_table(reports: &[MetricsReport]) -> String {
    let mut groups: Vec<(&str, Vec<&MetricsReport>)> = Vec::new();
    for r in reports {
        match groups.iter_mut().find(|(d, _)| *d == r.detector) {
            Some((_, g)) => g.push(r),
            None => groups.push((&r.detector, vec![r])),
        }
    }
    let mut rows: Vec<[String; 7]> = vec![HEADERS.map(String::from)];
    for (name, g) in &groups {
        rows.push([
            name.to_string(),
            format!("{:.2}", mean(g.iter().map(|r| r.ap_range))),
            format!("{:.2}", mean(g.iter().map(|r| r.ap_03))),
            format!("{:.2}", mean(g.iter().map(|r| r.ap_05))),
            mean_opt(g, |r| r.gflops),
            mean_opt(g, |r| r.params_millions),
            mean_opt(g, |r| r.time_ms),
        ]);
    }
    let widths: Vec<usize> = (0..7)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| {
                if c == 0 {
                    format!("{s:<w$}", w = widths[c])
                } else {
                    format!("{s:>w$}", w = widths[c])
                }
            })
            .collect();
        out.push_str(cells.join(" | ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            out.push_str(&rule.join("-|-"));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn report(detector: &str, ap: f64, time: Option<f64>) -> MetricsReport {
        MetricsReport {
            detector: detector.into(),
            fold: None,
            images: 1,
            contributing_images: 1,
            ap_range: ap,
            ap_03: ap,
            ap_05: ap,
            per_threshold: BTreeMap::new(),
            gflops: None,
            params_millions: None,
            time_ms: time,
        }
    }

    #[test]
    fn averages_folds() {
        let t = render_table(&[
            report("a", 0.5, Some(2.0)),
            report("b", 0.1, None),
            report("a", 0.7, Some(4.0)),
        ]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("Method"));
        assert!(lines[0].contains("Params (millions)"));
        assert!(lines[2].starts_with("a "));
        assert!(lines[2].contains("0.60"));
        assert!(lines[2].ends_with("3.00"));
        assert!(lines[3].ends_with('-'));
    }
}
