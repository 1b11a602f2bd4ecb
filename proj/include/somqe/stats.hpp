#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace somqe {

struct StatResult {
    enum class Kind { t_test, anova };
    Kind kind = Kind::t_test;
    double statistic = 0.0;
    double df1 = 0.0;
    double df2 = 0.0;
    double p_value = 1.0;
};

inline double mean(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Unbiased (n-1) sample variance.
inline double sample_variance(std::span<const double> v) {
    const double m = mean(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

inline double sample_sd(std::span<const double> v) { return std::sqrt(sample_variance(v)); }

namespace detail {

inline double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for the regularized incomplete beta, evaluated with
// the modified Lentz algorithm. https://en.wikipedia.org/wiki/Beta_function
inline double beta_continued_fraction(double x, double a, double b) {
    constexpr double tol = 1e-12;
    constexpr double tiny = 1e-300;
    const auto numer = [&](int n) {
        if (n % 2 == 0) {
            const double m = n / 2;
            return m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
        }
        const double m = (n - 1) / 2;
        return -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
    };
    double ret = 1.0;  // denominators are all 1
    double c = ret;
    double d = 0.0;
    for (int n = 1; n < 100000; ++n) {
        const double num = numer(n);
        d = 1.0 + num * d;
        if (d == 0.0) d = tiny;
        c = 1.0 + num / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double mult = c * d;
        ret *= mult;
        if (std::fabs(mult - 1.0) <= tol) break;
    }
    return ret;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("regularized_incomplete_beta: a, b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("regularized_incomplete_beta: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - detail::log_beta(a, b));
    if (x <= (a + 1.0) / (a + b + 2.0)) return front / (a * detail::beta_continued_fraction(x, a, b));
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - detail::log_beta(a, b)) /
                     (b * detail::beta_continued_fraction(1.0 - x, b, a));
}

/// Two-sided p for Student t with df degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("student_t_two_sided_p: df must be positive");
    if (t == 0.0) return 1.0;
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5);
}

/// Upper-tail p for F with (df1, df2) degrees of freedom.
inline double f_upper_tail_p(double f, double df1, double df2) {
    if (!(df1 > 0.0 && df2 > 0.0)) throw std::invalid_argument("f_upper_tail_p: dfs must be positive");
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    return regularized_incomplete_beta(df2 / (df2 + df1 * f), df2 / 2.0, df1 / 2.0);
}

/// Two-sample t test. pooled = Student's equal-variance form with
/// df = n1 + n2 - 2 (the default); otherwise Welch. Identical degenerate
/// groups (zero variance, equal means) report t = 0.
inline StatResult two_sample_t(std::span<const double> a, std::span<const double> b, bool pooled = true) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("two_sample_t: each group needs >= 2 values");
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double m1 = mean(a), m2 = mean(b);
    const double v1 = sample_variance(a), v2 = sample_variance(b);

    double t, df;
    if (pooled) {
        const double sp2 = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / (n1 + n2 - 2.0);
        const double se = std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
        t = (m1 - m2) / se;
        df = n1 + n2 - 2.0;
    } else {
        const double se2 = v1 / n1 + v2 / n2;
        t = (m1 - m2) / std::sqrt(se2);
        df = se2 * se2 / (v1 * v1 / (n1 * n1 * (n1 - 1.0)) + v2 * v2 / (n2 * n2 * (n2 - 1.0)));
    }
    if (std::isnan(t)) t = 0.0;  // 0/0: equal means, both variances zero
    StatResult r;
    r.kind = StatResult::Kind::t_test;
    r.statistic = t;
    r.df1 = 1.0;
    r.df2 = df;
    r.p_value = std::isnan(df) ? 1.0 : student_t_two_sided_p(t, df);
    return r;
}

/// Classic one-way ANOVA between/within decomposition.
inline StatResult one_way_anova(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("one_way_anova: need >= 2 groups");
    double n_total = 0.0, grand_sum = 0.0;
    for (const auto& g : groups) {
        if (g.size() < 2) throw std::invalid_argument("one_way_anova: each group needs >= 2 values");
        n_total += static_cast<double>(g.size());
        for (const double x : g) grand_sum += x;
    }
    const double grand_mean = grand_sum / n_total;
    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        const double m = mean(g);
        ssb += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
        for (const double x : g) ssw += (x - m) * (x - m);
    }
    const double df1 = static_cast<double>(groups.size()) - 1.0;
    const double df2 = n_total - static_cast<double>(groups.size());
    double f = (ssb / df1) / (ssw / df2);
    if (std::isnan(f)) f = 0.0;  // all values identical
    StatResult r;
    r.kind = StatResult::Kind::anova;
    r.statistic = f;
    r.df1 = df1;
    r.df2 = df2;
    r.p_value = f_upper_tail_p(f, df1, df2);
    return r;
}

/// Hit rate corrected by guess rate (CP - FP, in percent). Negative values
/// mean performance at or below guessing.
inline double detectability(double cp, double fp) {
    if (cp < 0.0 || cp > 100.0 || fp < 0.0 || fp > 100.0)
        throw std::invalid_argument("detectability: rates must be percentages in [0,100]");
    return cp - fp;
}

/// CN/FN/FP/CP rates of a same-different response log, in percent.
struct ConfusionTable {
    double cn = 0.0;  // "same" to same-pairs
    double fn = 0.0;  // "same" to different-pairs
    double fp = 0.0;  // "different" to same-pairs
    double cp = 0.0;  // "different" to different-pairs
};

enum class PairKind { same, different };
enum class Response { same, different };

inline ConfusionTable confusion_from_log(const std::vector<std::pair<PairKind, Response>>& trials) {
    long n_same = 0, n_diff = 0, same_same = 0, diff_diff = 0;
    for (const auto& [pair, response] : trials) {
        if (pair == PairKind::same) {
            ++n_same;
            if (response == Response::same) ++same_same;
        } else {
            ++n_diff;
            if (response == Response::different) ++diff_diff;
        }
    }
    if (n_same == 0 || n_diff == 0)
        throw std::invalid_argument("confusion_from_log: need at least one trial of each pair kind");
    ConfusionTable t;
    t.cn = 100.0 * static_cast<double>(same_same) / static_cast<double>(n_same);
    t.fp = 100.0 * static_cast<double>(n_same - same_same) / static_cast<double>(n_same);
    t.cp = 100.0 * static_cast<double>(diff_diff) / static_cast<double>(n_diff);
    t.fn = 100.0 * static_cast<double>(n_diff - diff_diff) / static_cast<double>(n_diff);
    return t;
}

}  // namespace somqe
