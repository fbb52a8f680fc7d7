//! Two-sided Wilcoxon rank-sum tests and quartile summaries of dimension
//! scores.

mod compare;
mod summary;
mod wilcoxon;

pub use compare::{
    compare_groups, compare_samples, compare_score_columns, comparison_csv, format_p, GroupComparison, GroupPair, Grouping,
};
pub use summary::{quantile, summarize, SummaryStats};
pub use wilcoxon::{
    null_counts, w_statistic, wilcoxon_rank_sum, wilcoxon_rank_sum_with, Method, WilcoxonOptions,
    WilcoxonResult, DEFAULT_EXACT_LIMIT,
};
