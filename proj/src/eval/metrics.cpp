#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "commentlens/error.hpp"
#include "commentlens/evaluation.hpp"

namespace commentlens::eval {

Scores precision_recall_f1(std::size_t tp, std::size_t predicted_pos, std::size_t actual_pos) {
    Scores s;
    s.precision = predicted_pos == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted_pos);
    s.recall = actual_pos == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(actual_pos);
    double sum = s.precision + s.recall;
    s.f1 = sum == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / sum;
    return s;
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), counts_(labels_.size() * labels_.size(), 0) {
    std::set<std::string> unique(labels_.begin(), labels_.end());
    if (unique.size() != labels_.size()) throw Error(ErrorCode::invalid_input, "duplicate label in confusion matrix");
}

ConfusionMatrix ConfusionMatrix::from_pairs(const std::vector<std::pair<std::string, std::string>>& actual_predicted,
                                            const std::vector<std::string>& preferred) {
    std::vector<std::string> labels;
    auto note = [&labels](const std::string& l) {
        if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    };
    for (const auto& l : preferred) note(l);
    for (const auto& [a, p] : actual_predicted) {
        note(a);
        note(p);
    }
    ConfusionMatrix m(std::move(labels));
    for (const auto& [a, p] : actual_predicted) m.add(a, p);
    return m;
}

std::size_t ConfusionMatrix::index(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw Error(ErrorCode::invalid_input, "label '" + label + "' not in confusion matrix");
    return static_cast<std::size_t>(it - labels_.begin());
}

void ConfusionMatrix::add(const std::string& actual, const std::string& predicted, std::size_t n) {
    at(index(actual), index(predicted)) += n;
}

std::size_t ConfusionMatrix::total() const noexcept {
    std::size_t t = 0;
    for (auto c : counts_) t += c;
    return t;
}

std::size_t ConfusionMatrix::trace() const noexcept {
    std::size_t t = 0;
    for (std::size_t i = 0; i < size(); ++i) t += at(i, i);
    return t;
}

std::size_t ConfusionMatrix::actual_total(std::size_t label) const {
    std::size_t t = 0;
    for (std::size_t j = 0; j < size(); ++j) t += at(label, j);
    return t;
}

std::size_t ConfusionMatrix::predicted_total(std::size_t label) const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < size(); ++i) t += at(i, label);
    return t;
}

Scores ConfusionMatrix::scores(std::size_t label) const {
    return precision_recall_f1(at(label, label), predicted_total(label), actual_total(label));
}

double accuracy(const ConfusionMatrix& matrix) {
    auto total = matrix.total();
    if (total == 0) throw Error(ErrorCode::empty_matrix, "accuracy of an empty confusion matrix");
    return static_cast<double>(matrix.trace()) / static_cast<double>(total);
}

namespace {

double kappa(double observed, double chance) {
    if (chance >= 1.0 - 1e-12) {
        if (observed >= 1.0 - 1e-12) return 1.0;
        throw Error(ErrorCode::degenerate_agreement, "chance agreement is 1 but observed agreement is not");
    }
    return (observed - chance) / (1.0 - chance);
}

}  // namespace

double cohens_kappa(const std::vector<std::pair<std::string, std::string>>& ratings) {
    if (ratings.empty()) throw Error(ErrorCode::invalid_input, "no rating pairs");
    std::map<std::string, double> a, b;
    double agree = 0;
    for (const auto& [x, y] : ratings) {
        a[x] += 1;
        b[y] += 1;
        agree += x == y ? 1 : 0;
    }
    double n = static_cast<double>(ratings.size());
    double chance = 0;
    for (const auto& [label, count] : a) {
        auto it = b.find(label);
        if (it != b.end()) chance += (count / n) * (it->second / n);
    }
    return kappa(agree / n, chance);
}

std::size_t AgreementTable::raters_per_item() const {
    if (counts.empty()) throw Error(ErrorCode::invalid_input, "agreement table has no items");
    std::size_t n = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        std::size_t row = 0;
        for (auto c : counts[i]) row += c;
        if (i == 0) n = row;
        if (row != n) throw Error(ErrorCode::invalid_input, "items have different numbers of ratings");
    }
    if (n < 2) throw Error(ErrorCode::invalid_input, "need at least two raters per item");
    return n;
}

AgreementTable agreement_table(const std::vector<std::vector<std::string>>& raters_by_item,
                               std::vector<std::string>* categories) {
    std::set<std::string> cats;
    for (const auto& item : raters_by_item) cats.insert(item.begin(), item.end());
    std::vector<std::string> order(cats.begin(), cats.end());
    AgreementTable t;
    for (const auto& item : raters_by_item) {
        std::vector<std::size_t> row(order.size(), 0);
        for (const auto& label : item) {
            row[static_cast<std::size_t>(std::lower_bound(order.begin(), order.end(), label) - order.begin())] += 1;
        }
        t.counts.push_back(std::move(row));
    }
    if (categories) *categories = order;
    return t;
}

double fleiss_kappa(const AgreementTable& table) {
    const double n = static_cast<double>(table.raters_per_item());
    const double items = static_cast<double>(table.counts.size());
    std::size_t k = 0;
    for (const auto& row : table.counts) k = std::max(k, row.size());
    std::vector<double> column(k, 0.0);
    double p_bar = 0;
    for (const auto& row : table.counts) {
        double agree = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            double c = static_cast<double>(row[j]);
            agree += c * (c - 1);
            column[j] += c;
        }
        p_bar += agree / (n * (n - 1));
    }
    p_bar /= items;
    double p_e = 0;
    for (double c : column) {
        double p = c / (items * n);
        p_e += p * p;
    }
    return kappa(p_bar, p_e);
}

std::vector<double> smoothed_distribution(const std::vector<double>& counts, double alpha) {
    double total = 0;
    for (double c : counts) {
        if (c < 0 || std::isnan(c)) throw Error(ErrorCode::invalid_distribution, "negative count");
        total += c + alpha;
    }
    if (total <= 0) throw Error(ErrorCode::invalid_distribution, "distribution has no mass");
    std::vector<double> out;
    out.reserve(counts.size());
    for (double c : counts) out.push_back((c + alpha) / total);
    return out;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw Error(ErrorCode::invalid_distribution, "distributions differ in length");
    double sp = 0, sq = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0 || q[i] < 0) throw Error(ErrorCode::invalid_distribution, "negative probability");
        sp += p[i];
        sq += q[i];
    }
    if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9) {
        throw Error(ErrorCode::invalid_distribution, "distribution does not sum to 1");
    }
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        if (q[i] == 0) throw Error(ErrorCode::invalid_distribution, "q has no mass where p does");
        d += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(0.0, d);
}

double kl_divergence_counts(const std::vector<double>& p_counts, const std::vector<double>& q_counts, double alpha) {
    return kl_divergence(smoothed_distribution(p_counts, alpha), smoothed_distribution(q_counts, alpha));
}

namespace {

std::string fixed(double v, int digits = 2) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string fraction(std::size_t num, std::size_t den) {
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace

std::string format_report(const ConfusionMatrix& m) {
    std::size_t width = 6;
    for (const auto& l : m.labels()) width = std::max(width, l.size());
    const int w = static_cast<int>(width) + 2;
    const int cell = w;
    std::ostringstream out;
    out << std::left << std::setw(w) << "Actual\\Pred";
    for (const auto& l : m.labels()) out << std::right << std::setw(cell) << l;
    out << std::right << std::setw(8) << "Total" << "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << std::left << std::setw(w) << m.labels()[i];
        for (std::size_t j = 0; j < m.size(); ++j) out << std::right << std::setw(cell) << m.at(i, j);
        out << std::right << std::setw(8) << m.actual_total(i) << "\n";
    }
    out << std::left << std::setw(w) << "Total";
    for (std::size_t j = 0; j < m.size(); ++j) out << std::right << std::setw(cell) << m.predicted_total(j);
    out << std::right << std::setw(8) << m.total() << "\n\n";

    out << std::left << std::setw(w) << "Label" << std::setw(18) << "Precision" << std::setw(18) << "Recall" << "F1\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto s = m.scores(i);
        auto tp = m.at(i, i);
        out << std::left << std::setw(w) << m.labels()[i]
            << std::setw(18) << (fixed(s.precision) + " (" + fraction(tp, m.predicted_total(i)) + ")")
            << std::setw(18) << (fixed(s.recall) + " (" + fraction(tp, m.actual_total(i)) + ")") << fixed(s.f1)
            << "\n";
    }
    out << "\nAccuracy " << (m.total() ? fixed(accuracy(m), 3) : std::string("n/a")) << " ("
        << fraction(m.trace(), m.total()) << ")\n";
    return out.str();
}

std::string report_json(const ConfusionMatrix& m) {
    nlohmann::ordered_json j;
    j["orientation"] = "rows=actual, columns=predicted";
    j["labels"] = m.labels();
    auto& rows = j["matrix"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m.at(i, k));
        rows.push_back(row);
    }
    auto& per = j["per_label"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto s = m.scores(i);
        per.push_back({{"label", m.labels()[i]},
                       {"tp", m.at(i, i)},
                       {"predicted", m.predicted_total(i)},
                       {"actual", m.actual_total(i)},
                       {"precision", s.precision},
                       {"recall", s.recall},
                       {"f1", s.f1}});
    }
    j["total"] = m.total();
    j["correct"] = m.trace();
    if (m.total()) j["accuracy"] = accuracy(m);
    else j["accuracy"] = nullptr;
    return j.dump(2);
}

}  // namespace commentlens::eval
