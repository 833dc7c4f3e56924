#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace commentlens::eval {

struct Scores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Zero denominators give zero rates; F1 is 0 when both rates are 0.
Scores precision_recall_f1(std::size_t tp, std::size_t predicted_pos, std::size_t actual_pos);

/// Square count matrix, rows = actual, columns = predicted.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<std::string> labels);

    /// Labels are collected from both lists, in first-seen order after
    /// `preferred` (labels listed there come first, in that order).
    static ConfusionMatrix from_pairs(const std::vector<std::pair<std::string, std::string>>& actual_predicted,
                                      const std::vector<std::string>& preferred = {});

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t index(const std::string& label) const;  // throws InvalidInput

    void add(const std::string& actual, const std::string& predicted, std::size_t n = 1);
    std::size_t at(std::size_t actual, std::size_t predicted) const { return counts_[actual * size() + predicted]; }
    std::size_t& at(std::size_t actual, std::size_t predicted) { return counts_[actual * size() + predicted]; }

    std::size_t total() const noexcept;
    std::size_t trace() const noexcept;
    std::size_t actual_total(std::size_t label) const;     // row sum
    std::size_t predicted_total(std::size_t label) const;  // column sum
    Scores scores(std::size_t label) const;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<std::size_t> counts_;
};

/// trace / total. Throws EmptyMatrix when total is 0.
double accuracy(const ConfusionMatrix& matrix);

/// Throws InvalidInput on an empty list and DegenerateAgreement when
/// chance agreement is 1 but observed agreement is not.
double cohens_kappa(const std::vector<std::pair<std::string, std::string>>& ratings);

/// items x categories rating counts, every row summing to the same n >= 2.
struct AgreementTable {
    std::vector<std::vector<std::size_t>> counts;

    std::size_t raters_per_item() const;  // throws InvalidInput when rows disagree
};

/// Builds the table from per-rater label lists over the same items.
AgreementTable agreement_table(const std::vector<std::vector<std::string>>& raters_by_item,
                               std::vector<std::string>* categories = nullptr);

double fleiss_kappa(const AgreementTable& table);

inline constexpr double default_smoothing = 0.5;

/// Normalizes counts after adding `alpha` to each. Throws
/// InvalidDistribution on negative mass or a zero total.
std::vector<double> smoothed_distribution(const std::vector<double>& counts, double alpha = default_smoothing);

/// Sum of p_i ln(p_i / q_i) over already normalized distributions; terms
/// with p_i = 0 contribute nothing. Throws InvalidDistribution when either
/// side is negative, does not sum to 1 within 1e-9, or q_i = 0 < p_i.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);

/// KL distance between two count vectors after smoothing both.
double kl_divergence_counts(const std::vector<double>& p_counts, const std::vector<double>& q_counts,
                            double alpha = default_smoothing);

/// Text table in the layout of a published confusion matrix: one row per
/// actual label with its total, a predicted-totals row, then P/R/F1 per
/// label with the raw fractions and the accuracy.
std::string format_report(const ConfusionMatrix& matrix);
/// The same content as a JSON document.
std::string report_json(const ConfusionMatrix& matrix);

}  // namespace commentlens::eval
