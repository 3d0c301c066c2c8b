#include "wmax/bounds.hpp"

#include <cmath>
#include <thread>

#include "wmax/errors.hpp"
#include "wmax/exact.hpp"
#include "wmax/smooth.hpp"

namespace wmax {

double scale_L(double x) {
    if (!(x >= 3.0)) throw domain_error("scale_L: requires x >= 3");
    return std::sqrt(std::log(x) * std::log(std::log(x)));
}

double envelope(double x, double c) {
    if (!(c > 0.0)) throw domain_error("envelope: c must be positive");
    return x * std::exp(-c * scale_L(x));
}

std::uint64_t ilog(std::uint64_t x, std::uint64_t q) {
    if (x < 1 || q < 2) throw domain_error("ilog: requires x >= 1, q >= 2");
    std::uint64_t e = 0;
    std::uint64_t acc = 1;
    while (acc <= x / q) {
        acc *= q;
        ++e;
    }
    return e;
}

namespace {

UpperBound scan_primes(std::uint64_t x, const PrimeBasis& basis, std::size_t lo, std::size_t hi) {
    UpperBound best{0, 0};
    const auto& primes = basis.primes();
    for (std::size_t i = lo; i < hi; ++i) {
        std::uint64_t q = primes[i];
        if (q > x) break;
        // q > sqrt(x): every m <= x/q is below q, hence q-friable.
        std::uint64_t count = (q * q > x) ? x / q : psi_sieve_floor(x / q, q, basis);
        std::uint64_t v = count * ilog(x, q);
        if (v > best.value) best = {v, static_cast<std::uint32_t>(q)};
    }
    return best;
}

// Smallest-q tie-break, applied identically whatever the partitioning.
UpperBound reduce(UpperBound a, UpperBound b) {
    if (b.value > a.value || (b.value == a.value && b.value > 0 && b.argmax_q < a.argmax_q))
        return b;
    return a;
}

} // namespace

UpperBound rigorous_upper_bound(std::uint64_t x, const PrimeBasis& basis, unsigned threads) {
    if (x < 2) throw domain_error("rigorous_upper_bound: requires x >= 2");
    if (x > basis.limit()) throw capacity_error("rigorous_upper_bound: x exceeds basis limit");
    std::size_t nq = basis.prime_count_leq(static_cast<double>(x));
    if (threads <= 1 || nq < 64) return scan_primes(x, basis, 0, nq);

    std::size_t nchunk = std::min<std::size_t>(threads, nq);
    std::vector<UpperBound> partial(nchunk);
    std::vector<std::thread> pool;
    pool.reserve(nchunk);
    for (std::size_t c = 0; c < nchunk; ++c) {
        std::size_t lo = nq * c / nchunk, hi = nq * (c + 1) / nchunk;
        pool.emplace_back([&, c, lo, hi] { partial[c] = scan_primes(x, basis, lo, hi); });
    }
    for (auto& t : pool) t.join();
    UpperBound best{0, 0};
    for (const auto& p : partial) best = reduce(best, p);
    return best;
}

double predicted_argmax_q(double x) {
    return std::exp(scale_L(x) / std::sqrt(2.0));
}

BoundReport bound_report(std::uint64_t x, const PrimeBasis& basis, bool with_exact,
                         const Budget& budget, unsigned threads) {
    if (x < 2) throw domain_error("bound_report: requires x >= 2");
    BoundReport r;
    r.x = x;
    UpperBound ub = rigorous_upper_bound(x, basis, threads);
    r.upper_bound = ub.value;
    r.argmax_q = ub.argmax_q;
    if (x >= 3) {
        double xd = static_cast<double>(x);
        r.predicted_q = predicted_argmax_q(xd);
        r.envelope_lo = envelope(xd, std::sqrt(2.0));
        r.envelope_hi = envelope(xd, 1.0 / std::sqrt(2.0));
    }
    if (with_exact) {
        SolveOutcome out = w_optimized(static_cast<std::uint32_t>(x), basis, budget);
        if (out.status == SolveOutcome::Status::solved)
            r.exact_w = out.result.w;
        else
            r.exact_budget_exhausted = true;
    }
    if (x >= 3) {
        double v = static_cast<double>(r.exact_w ? *r.exact_w : r.upper_bound);
        if (v > 0)
            r.c_hat = -std::log(v / static_cast<double>(x)) / scale_L(static_cast<double>(x));
    }
    return r;
}

} // namespace wmax
