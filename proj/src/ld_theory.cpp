#include "timp/ld_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "timp/errors.hpp"

namespace timp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long long choose2(long long k) { return k * (k - 1) / 2; }

// Compensated summation keeps the log-binomial anchors well under the
// 1e-10 relative-error contract at n = 10^4.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double get() const { return s_; }

private:
    double s_ = 0, c_ = 0;
};

} // namespace

const double kLowerTailDelta = std::exp(-1.0 / 6.0) / std::sqrt(2.0 * std::numbers::pi);

TheoryParams::TheoryParams(double p_) : p(p_), q(1.0 - p_), b(1.0 / (1.0 - p_)) {
    if (!(p > 0.0 && p < 1.0))
        throw ValidationError("edge probability must lie strictly inside (0,1), got " +
                              std::to_string(p_));
}

double TailBound::value() const { return std::exp(log_value); }

double lambda_star(double x, const TheoryParams& params) {
    if (x < 0.0 || x > 1.0) return kInf;
    if (x == 0.0) return -std::log(params.q);
    if (x == 1.0) return -std::log(params.p);
    return x * std::log(x / params.p) + (1.0 - x) * std::log((1.0 - x) / params.q);
}

double lchoose(long long n, long long k) {
    if (k < 0 || k > n) return -kInf;
    k = std::min(k, n - k);
    if (k == 0) return 0.0;
    if (n <= 64) {
        unsigned long long c = 1;
        for (long long i = 1; i <= k; ++i)
            c = static_cast<unsigned long long>(
                (static_cast<unsigned __int128>(c) * static_cast<unsigned long long>(n - k + i)) /
                static_cast<unsigned long long>(i));
        return std::log(static_cast<double>(c));
    }
    if (n <= 200000) {
        KahanSum s;
        for (long long i = 1; i <= k; ++i) {
            s.add(std::log(static_cast<double>(n - k + i)));
            s.add(-std::log(static_cast<double>(i)));
        }
        return s.get();
    }
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
}

TailBound binom_tail_exact(long long n, double p, double k) {
    if (n < 0) throw ValidationError("binomial size must be non-negative");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0,1]");
    double kf = std::floor(k);
    if (kf < 0) return {-kInf, BoundKind::exact};
    if (kf >= static_cast<double>(n)) return {0.0, BoundKind::exact};
    long long kk = static_cast<long long>(kf);
    if (p == 0.0) return {0.0, BoundKind::exact};          // X = 0 <= kk always here
    if (p == 1.0) return {-kInf, BoundKind::exact};        // X = n > kk here

    // Anchor the summation at the pmf maximum inside [0, kk]; both partial
    // sums then decay, so plain ratio recurrences in linear space stay
    // inside double range and keep ~1e-13 relative accuracy.
    double lp = std::log(p), lq = std::log(1.0 - p);
    long long mode = static_cast<long long>(std::floor((n + 1) * p));
    long long i0 = std::min(kk, std::max<long long>(mode, 0));
    double anchor = lchoose(n, i0) + static_cast<double>(i0) * lp +
                    static_cast<double>(n - i0) * lq;

    KahanSum sum;
    sum.add(1.0);
    double term = 1.0;
    for (long long i = i0; i >= 1; --i) { // descending side
        term *= (static_cast<double>(i) * (1.0 - p)) / (static_cast<double>(n - i + 1) * p);
        if (term < 1e-18) break;
        sum.add(term);
    }
    term = 1.0;
    for (long long i = i0 + 1; i <= kk; ++i) { // ascending side up to kk
        term *= (static_cast<double>(n - i + 1) * p) / (static_cast<double>(i) * (1.0 - p));
        if (term < 1e-18) break;
        sum.add(term);
    }
    return {anchor + std::log(sum.get()), BoundKind::exact};
}

TailBound bindev_upper(long long n, double p, double k) {
    TheoryParams params(p);
    if (k > static_cast<double>(n) * p) return {0.0, BoundKind::upper, true};
    return {-static_cast<double>(n) * lambda_star(k / static_cast<double>(n), params),
            BoundKind::upper};
}

TailBound bindev_lower(long long n, double p, long long k) {
    TheoryParams params(p);
    if (k < 1 || static_cast<double>(k) > static_cast<double>(n) * p + 1e-9)
        throw ValidationError("lower tail bound needs an integer 1 <= k <= np");
    double corr = std::max(-0.5 * std::log(static_cast<double>(k)),
                           -0.5 * std::log(static_cast<double>(n - k)));
    return {std::log(kLowerTailDelta) + corr -
                static_cast<double>(n) * lambda_star(static_cast<double>(k) / n, params),
            BoundKind::lower};
}

TailBound avgdeg_tail_upper(long long k, double p, double t) {
    TheoryParams params(p);
    if (k < 2 || t < 1.0 || t > p * static_cast<double>(k - 1) + 1e-9)
        return {0.0, BoundKind::upper, true};
    return {-static_cast<double>(choose2(k)) * lambda_star(t / static_cast<double>(k - 1), params),
            BoundKind::upper};
}

TailBound avgdeg_tail_lower(long long k, double p, double t) {
    TheoryParams params(p);
    if (k < 2 || t < 1.0 || t > p * static_cast<double>(k - 1) + 1e-9)
        throw ValidationError("average-degree lower bound outside the lemma regime");
    long long edge_budget = static_cast<long long>(std::floor(k * t / 2.0 + 1e-9));
    if (edge_budget < 1)
        throw ValidationError("average-degree lower bound needs edge budget >= 1");
    long long pairs = choose2(k);
    return {std::log(kLowerTailDelta) - 0.5 * std::log(static_cast<double>(edge_budget)) -
                static_cast<double>(pairs) *
                    lambda_star(static_cast<double>(edge_budget) / static_cast<double>(pairs),
                                params),
            BoundKind::lower};
}

TailBound mixedbin_tail_exact(int n1, int n2, double p, double x) {
    if (n1 < 0 || n2 < 0) throw ValidationError("binomial sizes must be non-negative");
    if (n1 + n2 > 64)
        throw CapExceededError("exact mixed-binomial convolution capped at n1+n2 <= 64, got " +
                               std::to_string(n1 + n2));
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0,1]");
    long long support = n1 + 2ll * n2;
    // The sum X + Y is integer-valued; absorb float fuzz in thresholds like
    // (n1+2n2) * p/4 that are mathematically integral.
    long long thr = static_cast<long long>(std::floor(static_cast<double>(support) * x + 1e-9));

    auto pmf = [p](int n, int i) {
        return std::exp(lchoose(n, i)) * std::pow(p, i) * std::pow(1.0 - p, n - i);
    };
    double total = 0.0;
    for (int j = 0; j <= n2; ++j) {
        long long budget = thr - 2ll * j;
        if (budget < 0) continue;
        double px = 0.0;
        for (int i = 0; i <= n1 && i <= budget; ++i) px += pmf(n1, i);
        total += pmf(n2, j) * px;
    }
    return {total > 0.0 ? std::log(total) : -kInf, BoundKind::exact};
}

TailBound mixedbin_upper(int n1, int n2, double p, double x) {
    TheoryParams params(p);
    if (x < 0.0 || x > p)
        throw ValidationError("mixed-binomial bound needs 0 <= x <= p");
    return {-0.5 * static_cast<double>(n1 + 2ll * n2) * lambda_star(x, params),
            BoundKind::upper};
}

namespace {

// Bisection with the invariant f(lo) < 0 < f(hi); f(lo) is never evaluated
// (at the left endpoint the defining functions tend to -1 but may be 0/0 in
// floating point, e.g. tau = 0).
template <class F>
double bisect_root(double lo, double hi_start, F f) {
    double hi = hi_start;
    int guard = 0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (++guard > 200) throw Error("root bracketing failed");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double kappa_p(double tau, const TheoryParams& params) {
    if (tau < 0.0) throw ValidationError("tau must be non-negative");
    auto f = [&](double kappa) {
        return 0.5 * kappa * lambda_star(tau / kappa, params) - 1.0;
    };
    double lo = tau / params.p * (1.0 + 1e-12);
    double hi = std::max(tau / params.p + 1.0, 4.0 / std::log(params.b));
    return bisect_root(lo, hi, f);
}

double kappa_sparse(double tau) {
    if (tau < 0.0) throw ValidationError("tau must be non-negative");
    auto g = [tau](double kappa) {
        double log_term = tau > 0.0 ? tau * std::log(kappa / tau) : 0.0;
        return 0.5 * (kappa - tau - log_term) - 1.0;
    };
    double lo = tau * (1.0 + 1e-12);
    double hi = std::max(tau + 1.0, 4.0);
    return bisect_root(lo, hi, g);
}

TailBound sparse_avgdeg_tail_upper(long long k, double p, double t) {
    TheoryParams params(p);
    if (k < 2 || !(t > 0.0) || t > p * static_cast<double>(k - 1) + 1e-9)
        throw ValidationError("sparse average-degree bound outside the lemma regime");
    double u = t / (p * static_cast<double>(k - 1));
    return {-static_cast<double>(choose2(k)) * p * (u * std::log(u) + 1.0 - u),
            BoundKind::upper};
}

DependentSetCountEstimate expected_dependent_sets_log(long long n, long long k, long long t,
                                                      const TheoryParams& params) {
    if (k < 2 || k > n)
        throw ValidationError("expected-count estimate needs 2 <= k <= n");
    if (t < 0) throw ValidationError("t must be non-negative");
    if (t >= 1 && static_cast<double>(t) > params.p * static_cast<double>(k - 1) + 1e-9)
        throw ValidationError("expected-count estimate needs t <= p(k-1)");

    double lnc = lchoose(n, k);
    DependentSetCountEstimate est{};
    est.n = n;
    est.k = k;
    est.t = t;
    est.p = params.p;
    if (t == 0) {
        // Exact: a 0-dependent set is edgeless, probability q^C(k,2).
        double v = lnc + static_cast<double>(choose2(k)) * std::log(params.q);
        est.log_upper = v;
        est.log_lower = v;
    } else {
        est.log_upper = lnc - static_cast<double>(choose2(k)) *
                                  lambda_star(static_cast<double>(t) / static_cast<double>(k - 1),
                                              params);
        est.log_lower = lnc + avgdeg_tail_lower(k, params.p, static_cast<double>(t)).log_value;
    }
    double ln_n = std::log(static_cast<double>(n));
    double tau = static_cast<double>(t) / ln_n;
    double kap = static_cast<double>(k) / ln_n;
    est.asymptotic_exponent =
        static_cast<double>(k) * ln_n * (1.0 - 0.5 * kap * lambda_star(tau / kap, params));
    return est;
}

std::optional<long long> first_moment_threshold_k(long long n, double p, long long t,
                                                  double eps) {
    TheoryParams params(p);
    if (t < 0) throw ValidationError("t must be non-negative");
    if (!(eps > 0.0 && eps <= 1.0))
        throw ValidationError("failure budget eps must lie in (0, 1]");
    double log_eps = std::log(eps);
    long long k_min = std::max<long long>(
        2, static_cast<long long>(std::ceil(static_cast<double>(t) / p + 1.0 - 1e-9)));
    for (long long k = k_min; k <= n; ++k) {
        double bound = lchoose(n, k) -
                       static_cast<double>(choose2(k)) *
                           lambda_star(static_cast<double>(t) / static_cast<double>(k - 1),
                                       params);
        if (bound <= log_eps) return k;
    }
    return std::nullopt;
}

} // namespace timp
