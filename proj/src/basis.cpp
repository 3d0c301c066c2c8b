#include "wmax/basis.hpp"

#include <algorithm>
#include <numeric>

#include "wmax/errors.hpp"

namespace wmax {

std::size_t PrimeBasis::prime_count_leq(double z) const {
    if (z < 2.0) return 0;
    if (z >= static_cast<double>(limit_))
        return primes_.size();
    auto zi = static_cast<std::uint32_t>(z);
    auto it = std::upper_bound(primes_.begin(), primes_.end(), zi);
    return static_cast<std::size_t>(it - primes_.begin());
}

std::uint32_t PrimeBasis::gpf(std::uint32_t n) const {
    std::uint32_t p = 0;
    while (n > 1) {
        p = spf_[n];
        do n /= p; while (n % p == 0);
    }
    return p;
}

PrimeBasis build_prime_basis(std::uint32_t limit) {
    if (limit < 2) throw domain_error("build_prime_basis: limit must be >= 2");
    PrimeBasis b;
    b.limit_ = limit;
    b.spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    // Linear sieve: each composite is struck exactly once, by spf(n) * (n / spf(n)).
    for (std::uint32_t n = 2; n <= limit; ++n) {
        if (b.spf_[n] == 0) {
            b.spf_[n] = n;
            b.primes_.push_back(n);
        }
        for (std::uint32_t p : b.primes_) {
            auto m = static_cast<std::uint64_t>(p) * n;
            if (p > b.spf_[n] || m > limit) break;
            b.spf_[m] = p;
        }
    }
    return b;
}

ExponentVec factorize(std::uint32_t n, const PrimeBasis& basis) {
    if (n == 0) throw domain_error("factorize: n must be >= 1");
    if (n > basis.limit()) throw capacity_error("factorize: n exceeds basis limit");
    ExponentVec v;
    while (n > 1) {
        std::uint32_t p = basis.spf(n);
        std::uint64_t e = 0;
        do {
            n /= p;
            ++e;
        } while (n % p == 0);
        v.entries.emplace_back(p, e); // spf chain emits primes in ascending order
    }
    return v;
}

std::optional<std::uint32_t> largest_prime_factor(const ExponentVec& v) {
    if (v.entries.empty()) return std::nullopt;
    return v.entries.back().first;
}

namespace {

bool is_prime_u32(std::uint32_t q) {
    if (q < 2) return false;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

} // namespace

std::uint64_t valuation(const ExponentVec& v, std::uint32_t q) {
    if (!is_prime_u32(q)) throw domain_error("valuation: q is not prime");
    for (const auto& [p, e] : v.entries)
        if (p == q) return e;
    return 0;
}

ExponentVec vec_sum(const std::vector<ExponentVec>& vs) {
    ExponentVec out;
    for (const auto& v : vs) {
        ExponentVec merged;
        merged.entries.reserve(out.entries.size() + v.entries.size());
        auto a = out.entries.begin();
        auto b = v.entries.begin();
        while (a != out.entries.end() || b != v.entries.end()) {
            if (b == v.entries.end() || (a != out.entries.end() && a->first < b->first))
                merged.entries.push_back(*a++);
            else if (a == out.entries.end() || b->first < a->first)
                merged.entries.push_back(*b++);
            else {
                merged.entries.emplace_back(a->first, a->second + b->second);
                ++a, ++b;
            }
        }
        out = std::move(merged);
    }
    return out;
}

std::uint64_t gcd_of_exponents(const ExponentVec& v) {
    std::uint64_t g = 0;
    for (const auto& [p, e] : v.entries) {
        g = std::gcd(g, e);
        if (g == 1) break;
    }
    return g;
}

mpz_class reconstruct_root(const ExponentVec& v, std::uint64_t w) {
    if (v.entries.empty())
        throw degenerate_product_error("reconstruct_root: empty product has no base");
    if (w == 0)
        throw certificate_error("reconstruct_root: w must be >= 1");
    for (const auto& [p, e] : v.entries)
        if (e % w != 0)
            throw certificate_error("reconstruct_root: w does not divide every exponent");
    mpz_class y = 1;
    mpz_class pw;
    for (const auto& [p, e] : v.entries) {
        mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(e / w));
        y *= pw;
    }
    return y;
}

} // namespace wmax
