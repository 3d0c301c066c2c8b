#pragma once

#include <cstdint>
#include <optional>

#include "wmax/budget.hpp"
#include "wmax/certificate.hpp"

namespace wmax {

enum class Strategy { power_chains, prefix_pigeonhole, local_search, portfolio };

struct SearchConfig {
    std::uint32_t x = 0;
    std::optional<std::uint64_t> target_w; // pigeonhole target; absent = escalate
    Strategy strategy = Strategy::portfolio;
    Budget budget;
    std::uint64_t seed = 0;
};

/// {2, 4, ..., 2^k} with k = floor(log2 x): product 2^(k(k+1)/2), so
/// w = k(k+1)/2 and y = 2. The unconditional floor every search returns.
/// Throws domain_error for x < 2.
WitnessCertificate power_chain_witness(std::uint32_t x);

struct PigeonholeResult {
    std::optional<WitnessCertificate> certificate;
    std::uint64_t enumerated = 0; // z-friable elements consumed
    std::uint64_t table_size = 0; // distinct residue vectors seen
    bool budget_exhausted = false;
};

/// Enumerates z-friable n <= x in ascending order, tracking the running
/// exponent vector mod target_w in a table keyed by an exact canonical
/// serialization of the sparse residue vector. A repeated key yields a
/// consecutive block whose exponent sums are all = 0 mod target_w; the
/// certificate's w is the full gcd of those sums (>= target_w, possibly more).
/// The empty prefix seeds the table, so an all-zero prefix residue is itself a
/// hit. Returns no certificate if the enumeration ends without a repeat.
/// pre: target_w >= 2, z >= 2. Throws capacity_error for x > basis.limit().
PigeonholeResult pigeonhole_witness(std::uint32_t x, std::uint64_t target_w, double z,
                                    const PrimeBasis& basis, const Budget& budget = {});

struct SearchOutcome {
    WitnessCertificate best;
    std::uint64_t nodes_used = 0;
    bool budget_exhausted = false;
};

/// Best-effort witness search. The power chain is computed before any budget is
/// consumed, so best.w >= k(k+1)/2 always; a larger budget can only extend the
/// work sequence, never change its prefix, so the returned w is monotone in the
/// budget and identical across runs for a fixed seed. Pigeonhole targets default
/// to escalating from the incumbent; its z defaults to predicted_argmax_q(x).
/// local_search hill-climbs add/remove moves scored by the gcd of exponent
/// sums, restarting from strategy seeds and seeded random subsets.
SearchOutcome best_witness(const SearchConfig& config, const PrimeBasis& basis);

} // namespace wmax
