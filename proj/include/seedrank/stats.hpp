#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seedrank/detail/util.hpp"

namespace seedrank {

enum class Direction { kHigherIsBetter, kLowerIsBetter };

/// Methods x problems metric matrix with per-problem Friedman ranks:
/// rank 1 is the best value under `direction`, ties share averaged ranks,
/// and every rank row sums to k(k+1)/2.
struct RankMatrix {
    std::vector<std::string> methods;
    std::vector<std::string> problems;
    std::vector<std::vector<double>> values;  // [problem][method]
    std::vector<std::vector<double>> ranks;   // [problem][method]
    Direction direction = Direction::kHigherIsBetter;

    std::size_t method_count() const { return methods.size(); }
    std::size_t problem_count() const { return problems.size(); }
};

inline RankMatrix rank_rows(std::vector<std::string> methods, std::vector<std::string> problems,
                            std::vector<std::vector<double>> values, Direction direction) {
    if (methods.empty() || problems.empty() || values.empty())
        throw std::invalid_argument("rank matrix must not be empty");
    if (values.size() != problems.size())
        throw std::invalid_argument("one value row per problem required");

    RankMatrix rm;
    rm.methods = std::move(methods);
    rm.problems = std::move(problems);
    rm.values = std::move(values);
    rm.direction = direction;
    const std::size_t k = rm.methods.size();

    rm.ranks.resize(rm.values.size());
    std::vector<std::size_t> order(k);
    for (std::size_t row = 0; row < rm.values.size(); ++row) {
        if (rm.values[row].size() != k)
            throw std::invalid_argument("row width does not match method count");
        std::iota(order.begin(), order.end(), 0);
        const auto& vals = rm.values[row];
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (vals[a] != vals[b])
                return direction == Direction::kHigherIsBetter ? vals[a] > vals[b]
                                                               : vals[a] < vals[b];
            return a < b;
        });
        rm.ranks[row].assign(k, 0.0);
        std::size_t i = 0;
        while (i < k) {
            std::size_t j = i;
            while (j + 1 < k && vals[order[j + 1]] == vals[order[i]]) ++j;
            double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t t = i; t <= j; ++t) rm.ranks[row][order[t]] = avg;
            i = j + 1;
        }
    }
    return rm;
}

/// Friedman statistic from per-method average ranks over n problems.
inline double friedman_statistic(const std::vector<double>& avg_ranks, std::size_t n) {
    const double k = static_cast<double>(avg_ranks.size());
    double sum_sq = 0.0;
    for (double r : avg_ranks) sum_sq += r * r;
    return 12.0 * static_cast<double>(n) / (k * (k + 1.0)) *
           (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
}

struct FriedmanResult {
    std::vector<double> avg_ranks;
    double statistic = 0.0;        // chi-square with k-1 dof
    double iman_davenport = 0.0;   // F with (k-1, (n-1)(k-1)) dof
    bool saturated = false;        // denominator <= 0: all rows ranked identically
};

inline FriedmanResult friedman(const RankMatrix& rm) {
    const std::size_t k = rm.method_count();
    const std::size_t n = rm.problem_count();
    if (k < 2) throw std::invalid_argument("friedman needs at least 2 methods");
    if (n < 2) throw std::invalid_argument("friedman needs at least 2 problems");

    FriedmanResult result;
    result.avg_ranks.assign(k, 0.0);
    for (const auto& row : rm.ranks)
        for (std::size_t j = 0; j < k; ++j) result.avg_ranks[j] += row[j];
    for (auto& r : result.avg_ranks) r /= static_cast<double>(n);

    result.statistic = friedman_statistic(result.avg_ranks, n);
    double denom = static_cast<double>(n) * (static_cast<double>(k) - 1.0) - result.statistic;
    if (denom <= 0.0) {
        result.saturated = true;
        result.iman_davenport = std::numeric_limits<double>::infinity();
    } else {
        result.iman_davenport = (static_cast<double>(n) - 1.0) * result.statistic / denom;
    }
    return result;
}

/// Lower-tail standard normal probability via erfc; keeps full relative
/// accuracy far into the tail where the naive CDF would underflow.
inline double normal_lower_tail(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

/// Holm step-down adjustment: APV_i = min(max_{j<=i} (k-j) p_j, 1) for
/// ascending raw p-values of the k-1 control comparisons.
inline std::vector<double> holm_adjust(const std::vector<double>& raw_p, std::size_t method_count) {
    if (method_count < 2) throw std::invalid_argument("need at least 2 methods");
    if (raw_p.size() != method_count - 1)
        throw std::invalid_argument("expected one p-value per non-control method");
    if (!std::is_sorted(raw_p.begin(), raw_p.end()))
        throw std::invalid_argument("raw p-values must be sorted ascending");

    std::vector<double> adjusted(raw_p.size());
    double running_max = 0.0;
    for (std::size_t j = 0; j < raw_p.size(); ++j) {
        double scaled = (static_cast<double>(method_count) - static_cast<double>(j + 1)) * raw_p[j];
        running_max = std::max(running_max, scaled);
        adjusted[j] = std::min(running_max, 1.0);
    }
    return adjusted;
}

struct MethodComparison {
    std::string method;
    double avg_rank = 0.0;
    double z = 0.0;
    double p = 0.0;
    double adjusted_p = 0.0;
};

struct TestReport {
    std::string control;
    double alpha = 0.05;
    FriedmanResult friedman;
    std::size_t problem_count = 0;
    /// Non-control methods, raw p ascending. z < 0 means worse than control.
    std::vector<MethodComparison> comparisons;
};

/// Post-hoc comparison of every method against a control:
/// z_j = (R_control - R_j) / sqrt(k(k+1)/(6n)), one-sided normal p, Holm
/// adjustment across the k-1 comparisons.
inline TestReport compare_with_control(const RankMatrix& rm, const std::string& control,
                                       double alpha = 0.05) {
    auto it = std::find(rm.methods.begin(), rm.methods.end(), control);
    if (it == rm.methods.end())
        throw std::invalid_argument("control method '" + control + "' not in rank matrix");
    const std::size_t control_idx = static_cast<std::size_t>(it - rm.methods.begin());

    TestReport report;
    report.control = control;
    report.alpha = alpha;
    report.friedman = friedman(rm);
    report.problem_count = rm.problem_count();

    const double k = static_cast<double>(rm.method_count());
    const double n = static_cast<double>(rm.problem_count());
    const double se = std::sqrt(k * (k + 1.0) / (6.0 * n));

    for (std::size_t j = 0; j < rm.method_count(); ++j) {
        if (j == control_idx) continue;
        MethodComparison cmp;
        cmp.method = rm.methods[j];
        cmp.avg_rank = report.friedman.avg_ranks[j];
        cmp.z = (report.friedman.avg_ranks[control_idx] - report.friedman.avg_ranks[j]) / se;
        cmp.p = normal_lower_tail(cmp.z);
        report.comparisons.push_back(std::move(cmp));
    }
    std::stable_sort(report.comparisons.begin(), report.comparisons.end(),
                     [](const MethodComparison& a, const MethodComparison& b) { return a.p < b.p; });

    std::vector<double> raw;
    raw.reserve(report.comparisons.size());
    for (const auto& c : report.comparisons) raw.push_back(c.p);
    auto adjusted = holm_adjust(raw, rm.method_count());
    for (std::size_t j = 0; j < adjusted.size(); ++j)
        report.comparisons[j].adjusted_p = adjusted[j];
    return report;
}

/// Average-rank table (ascending, best first).
inline void write_rank_csv(std::ostream& out, const RankMatrix& rm, const FriedmanResult& fr,
                           std::size_t problem_count) {
    out << "# n=" << problem_count << ",k=" << rm.method_count()
        << ",friedman=" << detail::format_double(fr.statistic) << ",iman_davenport="
        << (fr.saturated ? std::string("saturated") : detail::format_double(fr.iman_davenport))
        << '\n';
    out << "position,method,avg_rank\n";
    std::vector<std::size_t> order(rm.method_count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (fr.avg_ranks[a] != fr.avg_ranks[b]) return fr.avg_ranks[a] < fr.avg_ranks[b];
        return rm.methods[a] < rm.methods[b];
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        out << pos + 1 << ',' << rm.methods[order[pos]] << ','
            << detail::format_double(fr.avg_ranks[order[pos]]) << '\n';
}

/// Control-vs-others table: z, raw p, Holm APV, raw p ascending.
inline void write_posthoc_csv(std::ostream& out, const TestReport& report) {
    out << "# control=" << report.control << ",alpha=" << detail::format_double(report.alpha)
        << ",n=" << report.problem_count << '\n';
    out << "method,avg_rank,z_score,p_value,apv\n";
    for (const auto& c : report.comparisons)
        out << c.method << ',' << detail::format_double(c.avg_rank) << ','
            << detail::format_double(c.z) << ',' << detail::format_double(c.p) << ','
            << detail::format_double(c.adjusted_p) << '\n';
}

}  // namespace seedrank
