#include "wmax/exact.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "wmax/bounds.hpp"
#include "wmax/errors.hpp"
#include "wmax/search.hpp"
#include "wmax/smooth.hpp"

namespace wmax {

namespace {

// ---- brute force ----------------------------------------------------------

struct ElemFactors {
    // (prime index, exponent) pairs; prime index into the primes <= x list
    std::vector<std::pair<std::uint32_t, std::uint32_t>> f;
};

struct BruteBest {
    std::uint64_t w = 0; // 0 = nothing with gcd >= 2 seen
    std::uint32_t mask = 0;
};

// Lexicographic order on the sorted element lists encoded by bitmasks
// (bit i = element i+2). The list with the smaller element at the first
// differing slot wins; a proper prefix precedes its extensions.
bool lex_less_mask(std::uint32_t a, std::uint32_t b) {
    if (a == b) return false;
    std::uint32_t low = (a ^ b) & (~(a ^ b) + 1);
    if (a & low) return true;
    return (a >> std::countr_zero(low)) == 0;
}

void brute_consider(BruteBest& best, std::uint64_t g, std::uint32_t mask) {
    if (g > best.w || (g == best.w && lex_less_mask(mask, best.mask)))
        best = {g, mask};
}

BruteBest brute_scan(const std::vector<ElemFactors>& fac, std::size_t nprimes,
                     std::uint32_t lo, std::uint32_t hi) {
    std::uint64_t exps[16] = {};
    auto toggle_sign = [&](std::uint32_t mask) {
        // prepare exps for gray(lo)
        for (std::uint32_t i = 0; i < fac.size(); ++i)
            if (mask >> i & 1)
                for (auto [p, e] : fac[i].f) exps[p] += e;
    };
    std::uint32_t mask = lo ^ (lo >> 1);
    toggle_sign(mask);
    BruteBest best;
    for (std::uint32_t i = lo; i < hi; ++i) {
        std::uint64_t g = 0;
        for (std::size_t p = 0; p < nprimes; ++p) {
            if (exps[p]) {
                g = std::gcd(g, exps[p]);
                if (g == 1) break;
            }
        }
        if (g >= 2) brute_consider(best, g, mask);
        // flip one element to reach gray(i + 1)
        std::uint32_t flip = static_cast<std::uint32_t>(std::countr_zero(i + 1));
        if (flip < fac.size()) {
            bool removing = mask >> flip & 1;
            for (auto [p, e] : fac[flip].f) exps[p] += removing ? -std::uint64_t(e) : e;
            mask ^= 1u << flip;
        }
    }
    return best;
}

WitnessCertificate cert_from_elements(std::uint64_t x, std::vector<std::uint32_t> elems,
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

} // namespace

ExactWResult w_bruteforce(std::uint32_t x, const PrimeBasis& basis, unsigned threads) {
    if (x < 2) throw domain_error("w_bruteforce: requires x >= 2");
    if (x > kBruteForceMaxX)
        throw capacity_error("w_bruteforce: x exceeds the exhaustive-enumeration cap");
    if (x > basis.limit()) throw capacity_error("w_bruteforce: x exceeds basis limit");

    std::size_t nprimes = basis.prime_count_leq(x);
    std::vector<ElemFactors> fac(x - 1);
    for (std::uint32_t n = 2; n <= x; ++n) {
        for (auto [p, e] : factorize(n, basis).entries) {
            auto it = std::lower_bound(basis.primes().begin(), basis.primes().end(), p);
            fac[n - 2].f.emplace_back(
                static_cast<std::uint32_t>(it - basis.primes().begin()),
                static_cast<std::uint32_t>(e));
        }
    }

    std::uint32_t m = x - 1;
    std::uint32_t total = 1u << m;
    BruteBest best;
    unsigned nthreads = std::max(1u, threads);
    if (nthreads == 1 || total < (1u << 12)) {
        best = brute_scan(fac, nprimes, 1, total);
    } else {
        std::vector<BruteBest> partial(nthreads);
        std::vector<std::thread> pool;
        for (unsigned c = 0; c < nthreads; ++c) {
            std::uint32_t lo = 1 + static_cast<std::uint32_t>(
                                       (static_cast<std::uint64_t>(total) - 1) * c / nthreads);
            std::uint32_t hi = 1 + static_cast<std::uint32_t>(
                                       (static_cast<std::uint64_t>(total) - 1) * (c + 1) / nthreads);
            pool.emplace_back([&, c, lo, hi] { partial[c] = brute_scan(fac, nprimes, lo, hi); });
        }
        for (auto& t : pool) t.join();
        for (const auto& p : partial)
            if (p.w) brute_consider(best, p.w, p.mask);
    }

    std::vector<std::uint32_t> elems;
    if (best.w == 0) {
        elems = {2}; // nothing reaches gcd 2; {2} is the lex-least witness for w = 1
    } else {
        for (std::uint32_t i = 0; i < m; ++i)
            if (best.mask >> i & 1) elems.push_back(i + 2);
    }
    ExactWResult res;
    res.x = x;
    res.witness = cert_from_elements(x, std::move(elems), basis);
    res.w = res.witness.w;
    res.method = ExactMethod::brute_force;
    assert(best.w == 0 || res.w == best.w);
    return res;
}

// ---- optimized solver -----------------------------------------------------

namespace {

// Candidate pool for w >= 2: every n in [2, x] whose largest prime factor is
// <= x/2. A prime p > x/2 divides exactly one n <= x (p itself), so its
// exponent sum would be 1, indivisible by any w >= 2.
struct BasePool {
    std::vector<std::uint32_t> elems;  // ascending
    std::vector<std::uint32_t> primes; // primes <= x/2; entries refer to indices here
    std::vector<std::uint32_t> entry_off; // elems.size()+1 offsets into entries
    std::vector<std::pair<std::uint32_t, std::uint32_t>> entries; // (prime id, exp)
    std::vector<std::vector<std::uint32_t>> elems_of_prime;
};

bool build_base_pool(std::uint32_t x, const PrimeBasis& basis, BudgetMeter& meter,
                     BasePool& pool) {
    for (std::uint32_t p : basis.primes()) {
        if (2ull * p > x) break;
        pool.primes.push_back(p);
    }
    std::vector<std::uint32_t> prime_id(pool.primes.empty() ? 0 : pool.primes.back() + 1, 0);
    for (std::uint32_t i = 0; i < pool.primes.size(); ++i) prime_id[pool.primes[i]] = i;
    pool.elems_of_prime.resize(pool.primes.size());

    pool.entry_off.push_back(0);
    for (std::uint32_t n = 2; n <= x; ++n) {
        if (!meter.tick()) return false;
        std::uint32_t rem = n;
        bool ok = true;
        std::size_t first = pool.entries.size();
        while (rem > 1) {
            std::uint32_t p = basis.spf(rem);
            if (2ull * p > x) {
                ok = false;
                break;
            }
            std::uint32_t e = 0;
            do {
                rem /= p;
                ++e;
            } while (rem % p == 0);
            pool.entries.emplace_back(prime_id[p], e);
        }
        if (!ok) {
            pool.entries.resize(first);
            continue;
        }
        std::uint32_t eidx = static_cast<std::uint32_t>(pool.elems.size());
        for (std::size_t j = first; j < pool.entries.size(); ++j)
            pool.elems_of_prime[pool.entries[j].first].push_back(eidx);
        pool.elems.push_back(n);
        pool.entry_off.push_back(static_cast<std::uint32_t>(pool.entries.size()));
    }
    return true;
}

struct Pruned {
    std::vector<std::uint32_t> alive; // indices into pool.elems, ascending
    std::vector<std::uint32_t> kept;  // prime ids, ascending
};

// Iterated prune at candidate w: drop every prime whose total valuation over
// the surviving pool is < w (no subset can hit a nonzero multiple of w there),
// with cascading element removal. Worklist form, linear in the arena.
bool prune(const BasePool& pool, std::uint64_t w, BudgetMeter& meter, Pruned& out) {
    std::vector<std::uint64_t> total(pool.primes.size(), 0);
    for (const auto& [pid, e] : pool.entries) total[pid] += e;
    if (!meter.tick(pool.entries.size() + 1)) return false;

    std::vector<char> elem_dead(pool.elems.size(), 0);
    std::vector<char> prime_dead(pool.primes.size(), 0);
    std::vector<std::uint32_t> work;
    for (std::uint32_t pid = 0; pid < pool.primes.size(); ++pid)
        if (total[pid] < w) {
            prime_dead[pid] = 1;
            work.push_back(pid);
        }
    while (!work.empty()) {
        std::uint32_t pid = work.back();
        work.pop_back();
        for (std::uint32_t eidx : pool.elems_of_prime[pid]) {
            if (elem_dead[eidx]) continue;
            elem_dead[eidx] = 1;
            for (std::uint32_t j = pool.entry_off[eidx]; j < pool.entry_off[eidx + 1]; ++j) {
                auto [qid, e] = pool.entries[j];
                total[qid] -= e;
                if (!prime_dead[qid] && total[qid] < w) {
                    prime_dead[qid] = 1;
                    work.push_back(qid);
                }
            }
            if (!meter.tick()) return false;
        }
    }
    for (std::uint32_t i = 0; i < pool.elems.size(); ++i)
        if (!elem_dead[i]) out.alive.push_back(i);
    for (std::uint32_t pid = 0; pid < pool.primes.size(); ++pid)
        if (!prime_dead[pid]) out.kept.push_back(pid);
    return true;
}

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint32_t r : v) {
            h ^= r;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

enum class Feas { feasible, infeasible, unknown };

struct FeasResult {
    Feas feas = Feas::unknown;
    std::vector<std::uint32_t> subset; // alive-indices of a zero-residue subset
};

// Dense variant: residue vectors packed into one machine word, bits per prime,
// flat first-writer-wins trail arrays. Used when 2^(bits * r) is small.
constexpr std::uint32_t kDenseStateBits = 22;

FeasResult decide_feasible_dense(const BasePool& pool, const Pruned& pr, std::uint64_t w,
                                 std::uint32_t bits, BudgetMeter& meter) {
    FeasResult res;
    const std::size_t r = pr.kept.size();
    const std::uint64_t nstates = 1ull << (bits * r);
    const std::uint64_t digit_mask = (1ull << bits) - 1;
    constexpr std::uint32_t kStart = 0xFFFFFFFFu;

    std::vector<std::uint32_t> prime_slot(pool.primes.size(), ~0u);
    for (std::size_t i = 0; i < r; ++i) prime_slot[pr.kept[i]] = static_cast<std::uint32_t>(i);

    std::vector<std::uint32_t> elem_of(nstates, 0); // idx + 1; 0 = unreached
    std::vector<std::uint32_t> prev(nstates, 0);
    std::vector<std::uint32_t> digits(r);

    for (std::size_t a = 0; a < pr.alive.size(); ++a) {
        std::uint32_t eidx = pr.alive[a];
        std::fill(digits.begin(), digits.end(), 0);
        std::uint64_t sres = 0;
        for (std::uint32_t j = pool.entry_off[eidx]; j < pool.entry_off[eidx + 1]; ++j) {
            auto [pid, e] = pool.entries[j];
            std::uint32_t d = static_cast<std::uint32_t>(e % w);
            digits[prime_slot[pid]] = d;
            sres |= static_cast<std::uint64_t>(d) << (prime_slot[pid] * bits);
        }
        const std::uint32_t mark = static_cast<std::uint32_t>(a) + 1;
        if (sres == 0) { // the element is itself a perfect w-th power
            res.feas = Feas::feasible;
            res.subset = {static_cast<std::uint32_t>(a)};
            return res;
        }
        if (!meter.tick(nstates)) return res;
        if (!elem_of[sres]) {
            elem_of[sres] = mark;
            prev[sres] = kStart;
        }
        for (std::uint64_t s = 0; s < nstates; ++s) {
            if (!elem_of[s] || elem_of[s] == mark) continue;
            std::uint64_t t = 0;
            for (std::size_t i = 0; i < r; ++i) {
                std::uint64_t d = ((s >> (i * bits)) & digit_mask) + digits[i];
                if (d >= w) d -= w;
                t |= d << (i * bits);
            }
            if (!elem_of[t]) {
                elem_of[t] = mark;
                prev[t] = static_cast<std::uint32_t>(s);
            }
        }
        if (elem_of[0]) {
            res.feas = Feas::feasible;
            std::uint64_t cur = 0;
            while (true) {
                res.subset.push_back(elem_of[cur] - 1);
                if (prev[cur] == kStart) break;
                cur = prev[cur];
            }
            std::reverse(res.subset.begin(), res.subset.end());
            return res;
        }
    }
    res.feas = Feas::infeasible;
    return res;
}

// Exact residue vector packed into 128 bits, bits per prime slot, no slot
// crossing a word boundary. Covers every candidate the scan can realistically
// reach (bits <= 7 packs 18 primes); collisions remain impossible.
struct PackedKey {
    std::uint64_t w0 = 0;
    std::uint64_t w1 = 0;

    bool operator==(const PackedKey&) const = default;
    bool zero() const { return w0 == 0 && w1 == 0; }
};

struct PackedKeyHash {
    std::size_t operator()(const PackedKey& k) const {
        std::uint64_t h = k.w0 * 0x9E3779B97F4A7C15ull;
        h ^= h >> 32;
        h += k.w1 * 0xC2B2AE3D27D4EB4Full;
        h ^= h >> 29;
        return static_cast<std::size_t>(h);
    }
};

FeasResult decide_feasible_packed(const BasePool& pool, const Pruned& pr, std::uint64_t w,
                                  std::uint32_t bits, BudgetMeter& meter) {
    FeasResult res;
    const std::size_t r = pr.kept.size();
    const std::uint32_t spw = 64 / bits; // slots per word
    const std::uint64_t digit_mask = (1ull << bits) - 1;
    auto slot_ref = [&](PackedKey& k, std::size_t i) -> std::uint64_t& {
        return i < spw ? k.w0 : k.w1;
    };
    auto slot_shift = [&](std::size_t i) { return (i % spw) * bits; };

    std::vector<std::uint32_t> prime_slot(pool.primes.size(), ~0u);
    for (std::size_t i = 0; i < r; ++i) prime_slot[pr.kept[i]] = static_cast<std::uint32_t>(i);

    std::vector<std::vector<std::uint32_t>> digits(pr.alive.size());
    std::vector<PackedKey> packed(pr.alive.size());
    for (std::size_t a = 0; a < pr.alive.size(); ++a) {
        std::uint32_t eidx = pr.alive[a];
        digits[a].assign(r, 0);
        for (std::uint32_t j = pool.entry_off[eidx]; j < pool.entry_off[eidx + 1]; ++j) {
            auto [pid, e] = pool.entries[j];
            std::uint32_t slot = prime_slot[pid];
            std::uint32_t d = static_cast<std::uint32_t>(e % w);
            digits[a][slot] = d;
            slot_ref(packed[a], slot) |= static_cast<std::uint64_t>(d) << slot_shift(slot);
        }
        if (packed[a].zero()) {
            res.feas = Feas::feasible;
            res.subset = {static_cast<std::uint32_t>(a)};
            return res;
        }
    }

    struct Trail {
        PackedKey prev;
        std::uint32_t elem = 0;
        bool start = false;
    };
    std::unordered_map<PackedKey, Trail, PackedKeyHash> reach;
    std::vector<PackedKey> snapshot;
    for (std::size_t a = 0; a < pr.alive.size(); ++a) {
        snapshot.clear();
        snapshot.reserve(reach.size());
        for (const auto& kv : reach) snapshot.push_back(kv.first);
        const std::uint32_t elem = static_cast<std::uint32_t>(a);
        if (!meter.tick()) return res;
        reach.emplace(packed[a], Trail{PackedKey{}, elem, true});
        for (const PackedKey& s : snapshot) {
            if (!meter.tick()) return res;
            PackedKey t{};
            for (std::size_t i = 0; i < r; ++i) {
                std::uint64_t word = (i < spw) ? s.w0 : s.w1;
                std::uint64_t d = (word >> slot_shift(i)) & digit_mask;
                d += digits[a][i];
                if (d >= w) d -= w;
                slot_ref(t, i) |= d << slot_shift(i);
            }
            reach.emplace(t, Trail{s, elem, false});
        }
        auto hit = reach.find(PackedKey{});
        if (hit != reach.end()) {
            res.feas = Feas::feasible;
            PackedKey cur{};
            while (true) {
                const Trail& tr = reach.at(cur);
                res.subset.push_back(tr.elem);
                if (tr.start) break;
                cur = tr.prev;
            }
            std::reverse(res.subset.begin(), res.subset.end());
            return res;
        }
    }
    res.feas = Feas::infeasible;
    return res;
}

// Does a nonempty subset of the pruned pool have all exponent sums = 0 mod w?
// Residue-table DP over exact residue vectors; first-writer-wins trails keep
// the reconstruction deterministic. Exhaustive, so "no" is a proof. Sparse
// fallback for residue spaces too large to pack.
FeasResult decide_feasible_sparse(const BasePool& pool, const Pruned& pr, std::uint64_t w,
                                  BudgetMeter& meter) {
    FeasResult res;
    const std::size_t r = pr.kept.size();
    std::vector<std::uint32_t> prime_slot(pool.primes.size(), ~0u);
    for (std::size_t i = 0; i < r; ++i) prime_slot[pr.kept[i]] = static_cast<std::uint32_t>(i);

    std::vector<std::vector<std::uint32_t>> residue(pr.alive.size());
    for (std::size_t a = 0; a < pr.alive.size(); ++a) {
        std::uint32_t eidx = pr.alive[a];
        std::vector<std::uint32_t> v(r, 0);
        bool zero = true;
        for (std::uint32_t j = pool.entry_off[eidx]; j < pool.entry_off[eidx + 1]; ++j) {
            auto [pid, e] = pool.entries[j];
            v[prime_slot[pid]] = static_cast<std::uint32_t>(e % w);
            if (e % w) zero = false;
        }
        if (zero) { // the element is itself a perfect w-th power
            res.feas = Feas::feasible;
            res.subset = {static_cast<std::uint32_t>(a)};
            return res;
        }
        residue[a] = std::move(v);
    }

    using Key = std::vector<std::uint32_t>;
    struct Trail {
        std::uint32_t elem;
        Key prev; // empty = subset starts here
    };
    std::unordered_map<Key, Trail, VecHash> reach;
    const Key zero(r, 0);
    std::vector<Key> snapshot;
    for (std::size_t a = 0; a < pr.alive.size(); ++a) {
        snapshot.clear();
        snapshot.reserve(reach.size());
        for (const auto& kv : reach) snapshot.push_back(kv.first);
        auto add = [&](Key k, Key prev) -> bool {
            if (!meter.tick()) return false;
            reach.emplace(std::move(k), Trail{static_cast<std::uint32_t>(a), std::move(prev)});
            return true;
        };
        if (!add(residue[a], Key{})) return res;
        for (const auto& s : snapshot) {
            Key t(r);
            for (std::size_t i = 0; i < r; ++i) {
                std::uint64_t sum = s[i] + residue[a][i];
                t[i] = static_cast<std::uint32_t>(sum >= w ? sum - w : sum);
            }
            if (!add(std::move(t), s)) return res;
        }
        if (reach.count(zero)) {
            res.feas = Feas::feasible;
            Key cur = zero;
            while (true) {
                const Trail& tr = reach.at(cur);
                res.subset.push_back(tr.elem);
                if (tr.prev.empty()) break;
                cur = tr.prev;
            }
            std::reverse(res.subset.begin(), res.subset.end());
            return res;
        }
    }
    res.feas = Feas::infeasible;
    return res;
}

FeasResult decide_feasible(const BasePool& pool, const Pruned& pr, std::uint64_t w,
                           BudgetMeter& meter) {
    std::uint32_t bits = std::bit_width(w - 1);
    if (bits * pr.kept.size() <= kDenseStateBits)
        return decide_feasible_dense(pool, pr, w, bits, meter);
    if (pr.kept.size() <= 2ull * (64 / bits))
        return decide_feasible_packed(pool, pr, w, bits, meter);
    return decide_feasible_sparse(pool, pr, w, meter);
}

} // namespace

SolveOutcome w_optimized(std::uint32_t x, const PrimeBasis& basis, const Budget& budget) {
    if (x < 2) throw domain_error("w_optimized: requires x >= 2");
    if (x > basis.limit()) throw capacity_error("w_optimized: x exceeds basis limit");

    BudgetMeter meter(budget);
    WitnessCertificate chain = power_chain_witness(x);
    const std::uint64_t floor_w = chain.w;

    auto solved = [&](WitnessCertificate cert) {
        SolveOutcome o;
        o.status = SolveOutcome::Status::solved;
        o.result = {x, cert.w, std::move(cert), ExactMethod::optimized};
        o.nodes_used = meter.nodes_used();
        return o;
    };
    auto exhausted = [&](std::uint64_t hi) {
        SolveOutcome o;
        o.status = SolveOutcome::Status::budget_exhausted;
        o.result = {x, floor_w, chain, ExactMethod::optimized};
        o.unresolved = std::make_pair(floor_w + 1, hi);
        o.nodes_used = meter.nodes_used();
        return o;
    };
    // Certified fallback cap while U is unknown: every exponent sum is at most
    // sum_{n<=x} log2 n < x * (floor(log2 x) + 1).
    const std::uint64_t coarse_hi = static_cast<std::uint64_t>(x) * (ilog(x, 2) + 1);

    // Budgeted upper-bound scan (same max as rigorous_upper_bound).
    std::uint64_t ub = 0;
    for (std::uint32_t q : basis.primes()) {
        if (q > x) break;
        if (meter.exhausted()) return exhausted(coarse_hi);
        std::uint64_t count =
            (static_cast<std::uint64_t>(q) * q > x) ? x / q : psi_sieve_floor(x / q, q, basis);
        meter.tick(x / q + 1);
        ub = std::max(ub, count * ilog(x, q));
    }
    assert(ub >= floor_w);
    if (floor_w >= ub) return solved(chain);

    BasePool pool;
    if (!build_base_pool(x, basis, meter, pool)) return exhausted(ub);

    // Largest w whose pruned pool is nonempty; the prune is monotone in w, so
    // everything above is infeasible outright. pool(floor_w) is nonempty: the
    // powers of two alone give prime 2 a total of floor_w.
    std::uint64_t lo = floor_w, hi = ub;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo + 1) / 2;
        Pruned pr;
        if (!prune(pool, mid, meter, pr)) return exhausted(hi);
        if (pr.alive.empty())
            hi = mid - 1;
        else
            lo = mid;
    }

    for (std::uint64_t w = std::min(lo, ub); w > floor_w; --w) {
        Pruned pr;
        if (!prune(pool, w, meter, pr)) return exhausted(w);
        if (pr.alive.empty()) continue;
        FeasResult f = decide_feasible(pool, pr, w, meter);
        if (f.feas == Feas::unknown) return exhausted(w);
        if (f.feas == Feas::infeasible) continue;
        std::vector<std::uint32_t> elems;
        elems.reserve(f.subset.size());
        for (std::uint32_t a : f.subset) elems.push_back(pool.elems[pr.alive[a]]);
        WitnessCertificate cert = cert_from_elements(x, std::move(elems), basis);
        // Scanning downward, the first feasible candidate is exact: the full
        // gcd of the found subset is a feasible value >= w, and larger values
        // were already excluded.
        assert(cert.w == w);
        return solved(std::move(cert));
    }
    return solved(std::move(chain));
}

} // namespace wmax
