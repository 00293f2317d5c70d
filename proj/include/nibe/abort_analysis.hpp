#pragma once

// Executable abort-probability analysis: the indicator functions tau and
// tau', exact enumeration or Monte Carlo estimates of the non-abort
// probability, the k-uniqueness decomposition, and the pairwise-independence
// lemma behind the lower bound lambda = 1/(4 q 2^ell n).
//
// Everything here works on plain integers; trapdoor draws x', x_i live in
// [0, m) and the linear form values stay far below 2^63.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "nibe/errors.hpp"
#include "nibe/ibe.hpp"
#include "nibe/rng.hpp"

namespace nibe::abort_analysis {

inline mpq_class lambda_bound(std::uint64_t q, std::uint32_t ell, std::uint32_t n) {
    if (q == 0 || ell == 0 || n == 0) throw InvalidConfig("lambda: args must be positive");
    mpz_class denom = 4 * mpz_class(q) * n;
    mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), ell);
    mpq_class lam(1, denom);
    lam.canonicalize();
    return lam;
}

// x' + sum v_i x_i  (exact integer, no k term)
inline std::int64_t f_sum(std::int64_t x_prime, const std::vector<std::int64_t>& x,
                          const EncodedIdentity& v) {
    if (x.size() != v.v.size()) throw InvalidConfig("trapdoor/identity length mismatch");
    std::int64_t s = x_prime;
    for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<std::int64_t>(v.v[i]) * x[i];
    return s;
}

// 0 iff F(v*) = 0 over the integers (with the -m*k term) and every query has
// F != 0 (mod m); the simulator completes the game exactly in that case.
inline int tau(std::int64_t x_prime, const std::vector<std::int64_t>& x,
               const std::vector<EncodedIdentity>& queries, const EncodedIdentity& v_star,
               std::int64_t k, std::int64_t m) {
    if (f_sum(x_prime, x, v_star) - m * k != 0) return 1;
    for (const auto& v : queries)
        if (f_sum(x_prime, x, v) % m == 0) return 1;
    return 0;
}

// k-free variant: the challenge clause becomes F(v*) = 0 (mod m).
inline int tau_prime(std::int64_t x_prime, const std::vector<std::int64_t>& x,
                     const std::vector<EncodedIdentity>& queries, const EncodedIdentity& v_star,
                     std::int64_t m) {
    if (f_sum(x_prime, x, v_star) % m != 0) return 1;
    for (const auto& v : queries)
        if (f_sum(x_prime, x, v) % m == 0) return 1;
    return 0;
}

// When F(v*) = 0 (mod m), the unique k with F(v*) - m*k = 0 over the
// integers; the sum is always below m * n * 2^ell, so k < n * 2^ell.
inline std::optional<std::int64_t> k_uniqueness_check(std::int64_t x_prime,
                                                      const std::vector<std::int64_t>& x,
                                                      const EncodedIdentity& v_star,
                                                      std::int64_t m) {
    std::int64_t s = f_sum(x_prime, x, v_star);
    if (s % m != 0) return std::nullopt;
    return s / m;
}

struct AbortExperiment {
    std::uint64_t q = 1;
    std::uint32_t ell = 1;
    std::uint32_t n = 1;
    std::vector<EncodedIdentity> queries;  // at most q, all distinct from v_star
    EncodedIdentity v_star;
    std::uint64_t trials = 100000;

    std::int64_t m() const { return 2 * static_cast<std::int64_t>(q); }
    std::int64_t k_range() const { return static_cast<std::int64_t>(n) << ell; }

    void validate() const {
        if (q == 0 || ell == 0 || n == 0) throw InvalidConfig("q, ell, n must be positive");
        if (queries.size() > q) throw InvalidConfig("more queries than q");
        auto ok = [&](const EncodedIdentity& v) {
            if (v.v.size() != n) return false;
            for (std::uint32_t b : v.v)
                if (ell < 32 && (b >> ell) != 0) return false;
            return true;
        };
        if (!ok(v_star)) throw InvalidConfig("v_star invalid for (n, ell)");
        for (const auto& v : queries)
            if (!ok(v)) throw InvalidConfig("query identity invalid for (n, ell)");
    }

    // Full (x', x, k) state count, used to pick exact enumeration vs sampling.
    double state_space() const {
        return std::pow(static_cast<double>(m()), n + 1) * static_cast<double>(k_range());
    }
};

inline constexpr double kEnumerationFeasible = 1e7;

namespace detail {

// Visits every assignment of (x', x_1..x_n) in [0, m)^{n+1}.
template <typename Fn>
void enumerate_draws(std::int64_t m, std::uint32_t n, Fn&& fn) {
    std::vector<std::int64_t> x(n, 0);
    for (std::int64_t xp = 0; xp < m; ++xp) {
        for (;;) {
            fn(xp, x);
            std::uint32_t i = 0;
            for (; i < n; ++i) {
                if (++x[i] < m) break;
                x[i] = 0;
            }
            if (i == n) break;
        }
    }
}

inline void random_draw(std::int64_t m, std::uint32_t n, RandomSource& rng,
                        std::int64_t& x_prime, std::vector<std::int64_t>& x) {
    x_prime = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(m)));
    x.resize(n);
    for (auto& xi : x) xi = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(m)));
}

}  // namespace detail

struct Relation8Result {
    double lhs = 0;  // Pr_{X,k}[tau = 0]
    double rhs = 0;  // Pr_X[tau' = 0]
    bool exact = false;
    double scale() const { return rhs == 0 ? 0 : lhs / rhs; }  // should be 1/(2^ell n)
};

inline Relation8Result relation_8_check(const AbortExperiment& ex, RandomSource& rng) {
    ex.validate();
    const std::int64_t m = ex.m();
    const std::int64_t K = ex.k_range();
    Relation8Result res;
    if (ex.state_space() <= kEnumerationFeasible) {
        std::uint64_t count_tau = 0, count_tau_prime = 0, states = 0;
        detail::enumerate_draws(m, ex.n, [&](std::int64_t xp, const std::vector<std::int64_t>& x) {
            ++states;
            if (tau_prime(xp, x, ex.queries, ex.v_star, m) == 0) ++count_tau_prime;
            for (std::int64_t k = 0; k < K; ++k)
                if (tau(xp, x, ex.queries, ex.v_star, k, m) == 0) ++count_tau;
        });
        res.lhs = static_cast<double>(count_tau) / (static_cast<double>(states) * K);
        res.rhs = static_cast<double>(count_tau_prime) / static_cast<double>(states);
        res.exact = true;
        return res;
    }
    std::uint64_t count_tau = 0, count_tau_prime = 0;
    std::int64_t xp;
    std::vector<std::int64_t> x;
    for (std::uint64_t t = 0; t < ex.trials; ++t) {
        detail::random_draw(m, ex.n, rng, xp, x);
        std::int64_t k = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(K)));
        if (tau(xp, x, ex.queries, ex.v_star, k, m) == 0) ++count_tau;
        if (tau_prime(xp, x, ex.queries, ex.v_star, m) == 0) ++count_tau_prime;
    }
    res.lhs = static_cast<double>(count_tau) / static_cast<double>(ex.trials);
    res.rhs = static_cast<double>(count_tau_prime) / static_cast<double>(ex.trials);
    return res;
}

// Joint probability Pr[F(v) = a  and  F(v') = a' (mod m)] over uniform
// (x', x), by full enumeration.  The claimed value is 1/m^2; it provably
// holds when some coordinate difference of (v, v') is coprime to m, and the
// caller is expected to inspect deviations elsewhere.
inline mpq_class lemma1_exact(const EncodedIdentity& v, const EncodedIdentity& v_prime,
                              std::int64_t a, std::int64_t a_prime, std::int64_t m) {
    if (v.v.size() != v_prime.v.size()) throw InvalidConfig("identity length mismatch");
    if (v == v_prime) throw InvalidConfig("lemma 1 requires v != v'");
    const std::uint32_t n = static_cast<std::uint32_t>(v.v.size());
    double states = std::pow(static_cast<double>(m), n + 1);
    if (states > kEnumerationFeasible) throw InvalidConfig("enumeration infeasible: m^(n+1) too big");
    std::uint64_t hits = 0, total = 0;
    detail::enumerate_draws(m, n, [&](std::int64_t xp, const std::vector<std::int64_t>& x) {
        ++total;
        if (((f_sum(xp, x, v) % m + m) % m) == a && ((f_sum(xp, x, v_prime) % m + m) % m) == a_prime)
            ++hits;
    });
    mpq_class r(hits, total);
    r.canonicalize();
    return r;
}

inline bool lemma1_coprime_condition(const EncodedIdentity& v, const EncodedIdentity& v_prime,
                                     std::int64_t m) {
    for (std::size_t i = 0; i < v.v.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(v.v[i]) - static_cast<std::int64_t>(v_prime.v[i]);
        if (d != 0 && std::gcd(((d % m) + m) % m, m) == 1) return true;
    }
    return false;
}

struct BoundReport {
    double estimate = 0;  // Pr[tau = 0]
    double lambda = 0;
    double sigma = 0;  // 0 when exact
    bool exact = false;
    bool pass = false;
    double pr_b_prime = 0;                     // Pr[F(v*) = 0 (mod m)]
    std::vector<double> not_aj_given_bprime;   // per-query collision rate, claimed 1/m
};

inline BoundReport bound_check(const AbortExperiment& ex, RandomSource& rng) {
    ex.validate();
    const std::int64_t m = ex.m();
    const std::int64_t K = ex.k_range();
    BoundReport rep;
    rep.lambda = lambda_bound(ex.q, ex.ell, ex.n).get_d();

    std::uint64_t count_tau = 0, count_bprime = 0, total = 0;
    std::vector<std::uint64_t> coll(ex.queries.size(), 0);
    auto tally = [&](std::int64_t xp, const std::vector<std::int64_t>& x) {
        if (f_sum(xp, x, ex.v_star) % m == 0) {
            ++count_bprime;
            for (std::size_t j = 0; j < ex.queries.size(); ++j)
                if (f_sum(xp, x, ex.queries[j]) % m == 0) ++coll[j];
        }
    };

    if (ex.state_space() <= kEnumerationFeasible) {
        rep.exact = true;
        detail::enumerate_draws(m, ex.n, [&](std::int64_t xp, const std::vector<std::int64_t>& x) {
            ++total;
            tally(xp, x);
            for (std::int64_t k = 0; k < K; ++k)
                if (tau(xp, x, ex.queries, ex.v_star, k, m) == 0) ++count_tau;
        });
        rep.estimate = static_cast<double>(count_tau) / (static_cast<double>(total) * K);
    } else {
        std::int64_t xp;
        std::vector<std::int64_t> x;
        for (std::uint64_t t = 0; t < ex.trials; ++t) {
            ++total;
            detail::random_draw(m, ex.n, rng, xp, x);
            tally(xp, x);
            std::int64_t k = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(K)));
            if (tau(xp, x, ex.queries, ex.v_star, k, m) == 0) ++count_tau;
        }
        rep.estimate = static_cast<double>(count_tau) / static_cast<double>(ex.trials);
        rep.sigma = std::sqrt(rep.estimate * (1.0 - rep.estimate) /
                              static_cast<double>(ex.trials));
    }
    rep.pr_b_prime = static_cast<double>(count_bprime) / static_cast<double>(total);
    for (std::size_t j = 0; j < ex.queries.size(); ++j)
        rep.not_aj_given_bprime.push_back(
            count_bprime == 0 ? 0 : static_cast<double>(coll[j]) / static_cast<double>(count_bprime));
    rep.pass = rep.estimate >= rep.lambda - 3 * rep.sigma;
    return rep;
}

}  // namespace nibe::abort_analysis
