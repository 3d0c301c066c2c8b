#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "wmax/budget.hpp"
#include "wmax/certificate.hpp"

namespace wmax {

enum class ExactMethod { brute_force, optimized };

struct ExactWResult {
    std::uint64_t x = 0;
    std::uint64_t w = 0; // equals witness.w
    WitnessCertificate witness;
    ExactMethod method = ExactMethod::brute_force;
};

/// Hard cap for exhaustive subset enumeration (2^25 masks at x = 26).
inline constexpr std::uint32_t kBruteForceMaxX = 26;

/// Canonical oracle: maximize gcd_of_exponents over the exponent sums of every
/// nonempty subset of {2..x}; ties break to the lexicographically smallest
/// element list. The mask space may be partitioned across threads; the reduction
/// applies the same tie-break, so results are schedule-independent.
/// Throws domain_error for x < 2, capacity_error for x > kBruteForceMaxX.
ExactWResult w_bruteforce(std::uint32_t x, const PrimeBasis& basis, unsigned threads = 1);

/// Exact-solver outcome. Budget exhaustion is a first-class result, not an
/// error: it carries the best certificate found (at least the power chain) and
/// the closed interval of candidate w values neither proven nor excluded.
struct SolveOutcome {
    enum class Status { solved, budget_exhausted };

    Status status = Status::solved;
    ExactWResult result;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> unresolved;
    std::uint64_t nodes_used = 0;
};

/// Exact w(x) without the x <= 26 cap. Candidate w values are scanned downward
/// from the rigorous upper bound; a candidate is feasible iff some nonempty
/// subset of the pruned pool has all exponent sums = 0 mod w, decided by a
/// reachable-residue table (flat array when the residue space is small, packed
/// keys when it fits two words, hashed vectors otherwise). The pool first
/// drops every element with a prime factor p > x/2 (such
/// an element is the only multiple of p below x, so its exponent sum at p would
/// be 1, indivisible by any w >= 2), then iteratively drops elements whose
/// prime's total valuation over the pool is below w. The first feasible
/// candidate is w(x); if none is, the power chain's w is.
/// Throws domain_error for x < 2, capacity_error for x > basis.limit().
SolveOutcome w_optimized(std::uint32_t x, const PrimeBasis& basis, const Budget& budget = {});

} // namespace wmax
