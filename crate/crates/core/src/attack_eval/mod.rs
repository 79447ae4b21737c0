//! Empirical attack evaluation: visual re-identification through a
//! nearest-neighbour examiner, and class membership through Fano factors.

mod examiner;
mod histogram;
mod membership;
mod stats;

pub use examiner::{examiner_accuracy, train_examiner, visual_privacy, Examiner};
pub use histogram::{class_histogram, fano_factor, label_entropy, ClassHistogram};
pub use membership::{
    group_predictions, membership_attack_report, probe_groups, read_predictions_csv, AttackReport,
    ClassDispersion, ClassGroup, PopulationSummary, Verdict, PREDICTIONS_HEADER,
};
pub use stats::{student_t_two_sided, welch_t_test, TestResult};
