//! Stats report assembly and serialization: one row per strategy, rendered
//! as an aligned text table or as JSON with stable key names.

use serde::Serialize;

use crate::search::{Answer, SearchStats, Strategy};

/// Seeds a report was produced under.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Seeds {
    pub edge_shuffle: Option<u64>,
    pub order_shuffle: Option<u64>,
}

/// One strategy's measurements.
#[derive(Clone, Debug, Serialize)]
pub struct StrategyRow {
    pub strategy: String,
    pub visited: u64,
    pub mistakes: u64,
    pub stored_max: u64,
    pub stored_final: u64,
    pub visited_ranking: u64,
    pub answer: String,
}

impl StrategyRow {
    pub fn new(strategy: Strategy, answer: Answer, stats: &SearchStats) -> StrategyRow {
        StrategyRow {
            strategy: strategy.name().to_string(),
            visited: stats.visited,
            mistakes: stats.mistakes,
            stored_max: stats.stored_max,
            stored_final: stats.stored_final,
            visited_ranking: stats.visited_ranking,
            answer: answer.to_string(),
        }
    }
}

/// Result of cross-checking runs against the enumeration oracle.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub oracle_answer: String,
    pub oracle_nodes: usize,
    pub answers_match: bool,
    pub coverage_ok: bool,
}

/// A full report: the model, the seeds, one row per strategy run, and the
/// optional oracle cross-check. Every row carries the same answer.
#[derive(Clone, Debug, Serialize)]
pub struct StatsReport {
    pub model: String,
    pub seeds: Seeds,
    pub rows: Vec<StrategyRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
}

impl StatsReport {
    pub fn new(model: String, seeds: Seeds, rows: Vec<StrategyRow>) -> StatsReport {
        debug_assert!(
            rows.windows(2).all(|w| w[0].answer == w[1].answer),
            "rows must agree on the answer"
        );
        StatsReport {
            model,
            seeds,
            rows,
            verify: None,
        }
    }

    pub fn with_verify(mut self, verify: VerifyReport) -> StatsReport {
        self.verify = Some(verify);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Renders an aligned table. Column widths grow with the values, so rows
    /// always line up under the header.
    pub fn to_table(&self) -> String {
        const HEADERS: [&str; 7] = [
            "strategy",
            "visited",
            "mistakes",
            "stored_max",
            "stored_final",
            "visited_ranking",
            "answer",
        ];
        let cells: Vec<[String; 7]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.strategy.clone(),
                    r.visited.to_string(),
                    r.mistakes.to_string(),
                    r.stored_max.to_string(),
                    r.stored_final.to_string(),
                    r.visited_ranking.to_string(),
                    r.answer.clone(),
                ]
            })
            .collect();
        let widths: Vec<usize> = HEADERS
            .iter()
            .enumerate()
            .map(|(i, h)| {
                cells
                    .iter()
                    .map(|row| row[i].len())
                    .chain([h.len()])
                    .max()
                    .unwrap()
            })
            .collect();
        let mut out = format!("model: {}", self.model);
        match (self.seeds.edge_shuffle, self.seeds.order_shuffle) {
            (None, None) => {}
            (edge, order) => {
                out.push_str(&format!(
                    " (edge seed: {}, order seed: {})",
                    edge.map_or("none".into(), |s| s.to_string()),
                    order.map_or("none".into(), |s| s.to_string())
                ));
            }
        }
        out.push('\n');
        let mut line = String::new();
        for (i, h) in HEADERS.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{h:<width$}", width = widths[i]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
        for row in &cells {
            let mut line = String::new();
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                line.push_str(&format!("{cell:<width$}", width = widths[i]));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        if let Some(v) = &self.verify {
            out.push_str(&format!(
                "oracle: {} ({} nodes), answers {}, coverage {}\n",
                v.oracle_answer,
                v.oracle_nodes,
                if v.answers_match { "ok" } else { "MISMATCH" },
                if v.coverage_ok { "ok" } else { "INCOMPLETE" }
            ));
        }
        out
    }
}
