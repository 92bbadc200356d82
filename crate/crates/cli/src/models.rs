//! Static description of the two model families.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ModelFamily {
    pub name: &'static str,
    pub base: &'static str,
    pub fiber_level: &'static str,
    pub invariant: &'static str,
    pub k: &'static str,
    pub mu: &'static str,
    pub sasakian_at: &'static str,
    pub invariant_range: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelTable {
    pub schema_version: u32,
    pub families: Vec<ModelFamily>,
    pub coverage: &'static str,
}

pub fn cmd_models() -> ModelTable {
    ModelTable {
        schema_version: crate::SCHEMA_VERSION,
        families: vec![
            ModelFamily {
                name: "unit tangent sphere bundle T1M",
                base: "riemannian space form of curvature c",
                fiber_level: "g(u,u) = +1",
                invariant: "(1+c)/|1−c|",
                k: "c(2−c)",
                mu: "−2c",
                sasakian_at: "c = 1",
                invariant_range: "(−1, ∞)",
            },
            ModelFamily {
                name: "tangent hyperquadric bundle T−1M",
                base: "lorentzian space form of curvature c",
                fiber_level: "g(u,u) = −1",
                invariant: "(c−1)/|c+1|",
                k: "1−(c+1)²",
                mu: "4−2c",
                sasakian_at: "c = −1",
                invariant_range: "(−∞, 1)",
            },
        ],
        coverage:
            "Lorentzian c ≤ 0, c ≠ −1 covers I ∈ (−∞, −1]; Riemannian c ≠ 1 covers I ∈ (−1, ∞)",
    }
}

/// Aligned plain-text rendering.
pub fn render_text(table: &ModelTable) -> String {
    let rows: Vec<[&str; 6]> = std::iter::once(["family", "I", "k", "mu", "sasakian", "I range"])
        .chain(table.families.iter().map(|f| {
            [
                f.name,
                f.invariant,
                f.k,
                f.mu,
                f.sasakian_at,
                f.invariant_range,
            ]
        }))
        .collect();
    let mut widths = [0usize; 6];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out.push_str("coverage: ");
    out.push_str(table.coverage);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_formulas_present() {
        let text = render_text(&cmd_models());
        assert!(text.contains("(1+c)/|1−c|"));
        assert!(text.contains("(c−1)/|c+1|"));
        assert!(text.contains("Lorentzian c ≤ 0, c ≠ −1 covers I ∈ (−∞, −1]"));
    }

    #[test]
    fn columns_line_up() {
        let text = render_text(&cmd_models());
        let lines: Vec<&str> = text.lines().take(3).collect();
        let col = |l: &str| l.chars().position(|c| c == '(').unwrap();
        assert_eq!(col(lines[1]), col(lines[2]));
    }
}
