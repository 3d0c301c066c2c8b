#pragma once

#include <cstdint>
#include <optional>

#include "wmax/basis.hpp"
#include "wmax/budget.hpp"

namespace wmax {

/// L(x) = sqrt(log x * log log x). Throws domain_error for x < 3 (log log x
/// must be positive).
double scale_L(double x);

/// x * exp(-c * L(x)), the asymptotic envelope shape for a given constant c > 0.
/// w(x) tracks this curve with c near sqrt(2).
double envelope(double x, double c);

/// Largest e with q^e <= x, computed by integer exponentiation. This is the
/// exact value of floor(log x / log q); FP division misses it at exact powers.
/// pre: x >= 1, q >= 2.
std::uint64_t ilog(std::uint64_t x, std::uint64_t q);

struct UpperBound {
    std::uint64_t value;
    std::uint32_t argmax_q; // smallest q attaining the max
};

/// max over primes q <= x of Psi(x/q, q) * ilog(x, q). Dominates w(x): with
/// q = P+(y^w), every witness element is a q-friable multiple of q when it is
/// divisible by q at all, and each contributes at most ilog(x, q) to v_q.
/// Ties break to the smallest q. Deterministic for any thread count.
/// Throws domain_error for x < 2, capacity_error for x > basis.limit().
UpperBound rigorous_upper_bound(std::uint64_t x, const PrimeBasis& basis, unsigned threads = 1);

/// exp(L(x) / sqrt(2)), where the summand of the upper bound peaks
/// asymptotically. Throws domain_error for x < 3.
double predicted_argmax_q(double x);

struct BoundReport {
    std::uint64_t x = 0;
    std::uint64_t upper_bound = 0;
    std::uint32_t argmax_q = 0;
    // Asymptotic diagnostics; present only for x >= 3 where L(x) is defined.
    std::optional<double> predicted_q;
    std::optional<double> envelope_lo; // c = sqrt(2)
    std::optional<double> envelope_hi; // c = 1/sqrt(2)
    std::optional<std::uint64_t> exact_w;
    bool exact_budget_exhausted = false;
    // c_hat = -log(v/x) / L(x) with v = exact_w when available, else upper_bound.
    std::optional<double> c_hat;
};

/// Assembles the bound-side diagnostics for one x. with_exact runs the exact
/// solver (budgeted); on exhaustion the report is partial, never silently wrong:
/// exact_w stays empty and exact_budget_exhausted is set. The envelopes are
/// diagnostics; no ordering against upper_bound is promised at finite x.
BoundReport bound_report(std::uint64_t x, const PrimeBasis& basis, bool with_exact = false,
                         const Budget& budget = {}, unsigned threads = 1);

} // namespace wmax
