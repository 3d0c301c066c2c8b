#include "wmax/search.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "wmax/bounds.hpp"
#include "wmax/errors.hpp"

namespace wmax {

namespace {

WitnessCertificate make_certificate(std::uint64_t x, std::vector<std::uint32_t> elems,
                                    const PrimeBasis& basis) {
    WitnessCertificate cert;
    cert.x = x;
    cert.elements = std::move(elems);
    std::vector<ExponentVec> parts;
    parts.reserve(cert.elements.size());
    for (std::uint32_t n : cert.elements) parts.push_back(factorize(n, basis));
    ExponentVec sums = vec_sum(parts);
    cert.w = gcd_of_exponents(sums);
    cert.y = reconstruct_root(sums, cert.w);
    return cert;
}

// w descending, then element list lexicographically ascending.
bool better(const WitnessCertificate& a, const WitnessCertificate& b) {
    if (a.w != b.w) return a.w > b.w;
    return a.elements < b.elements;
}

} // namespace

WitnessCertificate power_chain_witness(std::uint32_t x) {
    if (x < 2) throw domain_error("power_chain_witness: requires x >= 2");
    std::uint64_t k = ilog(x, 2);
    WitnessCertificate cert;
    cert.x = x;
    for (std::uint64_t j = 1; j <= k; ++j)
        cert.elements.push_back(static_cast<std::uint32_t>(1ull << j));
    cert.w = k * (k + 1) / 2; // exponent of 2 in the product 2^1 * ... * 2^k
    cert.y = 2;
    return cert;
}

PigeonholeResult pigeonhole_witness(std::uint32_t x, std::uint64_t target_w, double z,
                                    const PrimeBasis& basis, const Budget& budget) {
    if (x < 2) throw domain_error("pigeonhole_witness: requires x >= 2");
    if (target_w < 2) throw domain_error("pigeonhole_witness: requires target_w >= 2");
    if (z < 2) throw domain_error("pigeonhole_witness: requires z >= 2");
    if (x > basis.limit()) throw capacity_error("pigeonhole_witness: x exceeds basis limit");

    BudgetMeter meter(budget);
    PigeonholeResult out;
    // Residue key of a prefix: (prime, nonzero exponent-sum mod target_w)
    // pairs, ascending. Equal keys at prefixes j < i make the block (j, i]
    // have every exponent sum divisible by target_w.
    using Key = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
    std::map<Key, std::uint32_t> table;
    table[Key{}] = 0;
    out.table_size = 1;
    std::map<std::uint32_t, std::uint32_t> res;
    std::vector<std::uint32_t> friables;

    for (std::uint32_t n = 2; n <= x; ++n) {
        if (!meter.tick()) {
            out.budget_exhausted = true;
            return out;
        }
        if (basis.gpf(n) > z) continue;
        friables.push_back(n);
        ++out.enumerated;
        for (auto [p, e] : factorize(n, basis).entries) {
            std::uint32_t r = static_cast<std::uint32_t>((res[p] + e) % target_w);
            if (r == 0)
                res.erase(p);
            else
                res[p] = r;
        }
        Key key(res.begin(), res.end());
        auto it = table.find(key);
        if (it != table.end()) {
            std::vector<std::uint32_t> block(friables.begin() + it->second, friables.end());
            out.certificate = make_certificate(x, std::move(block), basis);
            return out;
        }
        table.emplace(std::move(key), static_cast<std::uint32_t>(friables.size()));
        out.table_size = table.size();
    }
    return out;
}

namespace {

struct LocalSearchState {
    std::set<std::uint32_t> elems;
    std::map<std::uint32_t, std::uint64_t> sums;

    void toggle(std::uint32_t n, const PrimeBasis& basis) {
        bool removing = elems.count(n) > 0;
        if (removing)
            elems.erase(n);
        else
            elems.insert(n);
        for (auto [p, e] : factorize(n, basis).entries) {
            if (removing) {
                auto it = sums.find(p);
                it->second -= e;
                if (it->second == 0) sums.erase(it);
            } else {
                sums[p] += e;
            }
        }
    }

    std::uint64_t gcd_now() const {
        std::uint64_t g = 0;
        for (const auto& [p, e] : sums) {
            g = std::gcd(g, e);
            if (g == 1) break;
        }
        return g;
    }

    void assign(const std::vector<std::uint32_t>& from, const PrimeBasis& basis) {
        elems.clear();
        sums.clear();
        for (std::uint32_t n : from) toggle(n, basis);
    }
};

void local_search(std::uint32_t x, const PrimeBasis& basis, std::uint64_t seed,
                  BudgetMeter& meter, const std::vector<std::vector<std::uint32_t>>& seeds,
                  WitnessCertificate& best) {
    constexpr int kRestarts = 32;
    constexpr int kIters = 2000;
    std::mt19937_64 rng(seed);
    LocalSearchState st;
    for (int r = 0; r < kRestarts; ++r) {
        if (r < static_cast<int>(seeds.size())) {
            st.assign(seeds[r], basis);
        } else {
            st.elems.clear();
            st.sums.clear();
            for (int t = 0; t < 8; ++t) {
                std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % (x - 1));
                if (basis.is_prime(n) && 2ull * n > x) continue;
                if (!st.elems.count(n)) st.toggle(n, basis);
            }
            if (st.elems.empty()) st.toggle(2, basis);
        }
        std::uint64_t cur = st.gcd_now();
        for (int it = 0; it < kIters; ++it) {
            if (!meter.tick()) return;
            std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % (x - 1));
            // a prime occurring once in [2, x] pins the gcd to 1
            if (basis.is_prime(n) && 2ull * n > x && !st.elems.count(n)) continue;
            st.toggle(n, basis);
            std::uint64_t g = st.elems.empty() ? 0 : st.gcd_now();
            if (g >= cur && g > 0) {
                cur = g;
                if (g >= best.w) {
                    std::vector<std::uint32_t> elems(st.elems.begin(), st.elems.end());
                    if (g > best.w || elems < best.elements)
                        best = make_certificate(x, std::move(elems), basis);
                }
            } else {
                st.toggle(n, basis);
            }
        }
    }
}

} // namespace

SearchOutcome best_witness(const SearchConfig& config, const PrimeBasis& basis) {
    const std::uint32_t x = config.x;
    if (x < 2) throw domain_error("best_witness: requires x >= 2");
    if (x > basis.limit()) throw capacity_error("best_witness: x exceeds basis limit");

    BudgetMeter meter(config.budget);
    WitnessCertificate best = power_chain_witness(x); // floor before any budget draw
    std::vector<std::vector<std::uint32_t>> seeds{best.elements};

    bool run_pigeonhole = config.strategy == Strategy::prefix_pigeonhole ||
                          config.strategy == Strategy::portfolio;
    bool run_local =
        config.strategy == Strategy::local_search || config.strategy == Strategy::portfolio;

    if (run_pigeonhole && !meter.exhausted()) {
        double z = 2.0;
        if (x >= 3) z = std::min<double>(x, std::max(2.0, predicted_argmax_q(x)));
        if (config.target_w && *config.target_w >= 2) {
            // each pigeonhole pass scans at most x - 1 integers; charge it as a lump
            PigeonholeResult pr = pigeonhole_witness(x, *config.target_w, z, basis, Budget{});
            meter.tick(static_cast<std::uint64_t>(x) - 1);
            if (pr.certificate && better(*pr.certificate, best)) {
                best = *pr.certificate;
                seeds.push_back(best.elements);
            }
        } else {
            while (!meter.exhausted()) {
                PigeonholeResult pr = pigeonhole_witness(x, best.w + 1, z, basis, Budget{});
                meter.tick(static_cast<std::uint64_t>(x) - 1);
                if (!pr.certificate) break;
                if (!better(*pr.certificate, best)) break;
                best = *pr.certificate;
                seeds.push_back(best.elements);
            }
        }
    }
    if (run_local && !meter.exhausted()) local_search(x, basis, config.seed, meter, seeds, best);

    SearchOutcome out;
    out.best = std::move(best);
    out.nodes_used = meter.nodes_used();
    out.budget_exhausted = meter.exhausted();
    return out;
}

} // namespace wmax
