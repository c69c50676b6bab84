#pragma once

#include <optional>

namespace timp {

// Edge probability with its derived quantities q = 1-p and b = 1/q.
struct TheoryParams {
    double p;
    double q;
    double b;
    explicit TheoryParams(double p_);
};

enum class BoundKind { exact, upper, lower };

// A probability carried in log-space. `trivial` marks the bound-1 fallbacks
// returned outside a lemma's regime so sweeps can branch on it transparently.
struct TailBound {
    double log_value;
    BoundKind kind;
    bool trivial = false;

    double value() const;
};

// Stirling-corrected prefactor of the lower tail bound: (2*pi)^(-1/2) * e^(-1/6).
extern const double kLowerTailDelta;

// Rate function x ln(x/p) + (1-x) ln((1-x)/q) on [0,1], +infinity outside.
double lambda_star(double x, const TheoryParams& params);

// log C(n, k); exact integer arithmetic for n <= 64, compensated log sums
// for moderate n, lgamma beyond.
double lchoose(long long n, long long k);

// Exact Pr(Bin(n,p) <= floor(k)) by stable log-space summation.
TailBound binom_tail_exact(long long n, double p, double k);

// Pr(X <= k) <= exp(-n Lambda*(k/n)) for k <= np; trivial bound 1 above the
// mean so sweeps over k need not branch.
TailBound bindev_upper(long long n, double p, double k);

// delta * max{k^(-1/2), (n-k)^(-1/2)} * exp(-n Lambda*(k/n)), integer 1 <= k <= np.
TailBound bindev_lower(long long n, double p, long long k);

// Average-degree tail of G(k,p): Pr(avg deg <= t) <= exp(-C(k,2) Lambda*(t/(k-1))).
TailBound avgdeg_tail_upper(long long k, double p, double t);

// Lower counterpart via the binomial lower bound at edge budget floor(kt/2).
TailBound avgdeg_tail_lower(long long k, double p, double t);

// Pr(X + Y <= (n1+2n2)x) for X in Bin(n1,p), Y/2 in Bin(n2,p); exact
// convolution, capped at n1+n2 <= 64.
TailBound mixedbin_tail_exact(int n1, int n2, double p, double x);

// ... <= exp(-(1/2)(n1+2n2) Lambda*(x)) for 0 <= x <= p.
TailBound mixedbin_upper(int n1, int n2, double p, double x);

// Unique root kappa > tau/p of (kappa/2) Lambda*(tau/kappa) = 1.
double kappa_p(double tau, const TheoryParams& params);

// Sparse-regime analogue: root kappa > tau of (1/2)(kappa - tau - tau ln(kappa/tau)) = 1.
double kappa_sparse(double tau);

// Chernoff form: Pr(avg deg <= t) <= exp(-C(k,2) p (u ln u + 1 - u)), u = t/(p(k-1)).
TailBound sparse_avgdeg_tail_upper(long long k, double p, double t);

struct DependentSetCountEstimate {
    double log_upper;
    double log_lower;
    // k ln n (1 - (kappa/2) Lambda*(tau/kappa)) at tau = t/ln n, kappa = k/ln n.
    double asymptotic_exponent;
    long long n, k, t;
    double p;
};

// Log-space sandwich on E[number of t-dependent k-subsets of G(n,p)].
// t = 0 is exact (both bounds collapse to ln C(n,k) + C(k,2) ln q).
DependentSetCountEstimate expected_dependent_sets_log(long long n, long long k,
                                                      long long t,
                                                      const TheoryParams& params);

// Smallest k with t <= p(k-1) and ln C(n,k) - C(k,2) Lambda*(t/(k-1)) <= ln eps.
// Certificate semantics: Pr(alpha^t >= k*) <= eps. nullopt when no k <= n works.
std::optional<long long> first_moment_threshold_k(long long n, double p,
                                                  long long t, double eps);

} // namespace timp
