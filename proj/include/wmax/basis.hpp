#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace wmax {

/// Sparse prime factorization: (prime, exponent) pairs with primes strictly
/// ascending and exponents strictly positive. The empty vector represents 1.
struct ExponentVec {
    std::vector<std::pair<std::uint32_t, std::uint64_t>> entries;

    bool empty() const { return entries.empty(); }

    bool operator==(const ExponentVec& other) const { return entries == other.entries; }
};

/// Immutable sieve tables up to a fixed limit: the primes <= limit and a
/// smallest-prime-factor table for every n in [2, limit]. All queries are
/// read-only and safe to share across threads.
class PrimeBasis {
public:
    std::uint32_t limit() const { return limit_; }
    const std::vector<std::uint32_t>& primes() const { return primes_; }

    /// Smallest prime factor of n. pre: 2 <= n <= limit.
    std::uint32_t spf(std::uint32_t n) const { return spf_[n]; }

    bool is_prime(std::uint32_t n) const { return n >= 2 && spf_[n] == n; }

    /// Number of primes <= z (z may exceed limit; the count saturates there).
    std::size_t prime_count_leq(double z) const;

    /// Largest prime factor of n via the spf chain. pre: 2 <= n <= limit.
    std::uint32_t gpf(std::uint32_t n) const;

private:
    friend PrimeBasis build_prime_basis(std::uint32_t limit);

    std::uint32_t limit_ = 0;
    std::vector<std::uint32_t> primes_;
    std::vector<std::uint32_t> spf_;
};

/// Builds the sieve tables with a linear sieve. Throws domain_error for limit < 2.
PrimeBasis build_prime_basis(std::uint32_t limit);

/// Exact factorization of n. factorize(1) is the empty vector.
/// Throws domain_error for n = 0 and capacity_error for n > basis.limit().
ExponentVec factorize(std::uint32_t n, const PrimeBasis& basis);

/// Largest prime of v; std::nullopt for an empty vector (P+(1) has no value).
std::optional<std::uint32_t> largest_prime_factor(const ExponentVec& v);

/// Exponent of prime q in v (0 if absent). Throws domain_error if q is not prime.
std::uint64_t valuation(const ExponentVec& v, std::uint32_t q);

/// Pointwise sum; the empty collection sums to the factorization of 1.
ExponentVec vec_sum(const std::vector<ExponentVec>& vs);

/// gcd of all exponents in v; 0 for the empty vector.
std::uint64_t gcd_of_exponents(const ExponentVec& v);

/// The w-th root of the product encoded by v, i.e. prod p^(e/w).
/// Throws certificate_error if w does not divide every exponent (or w = 0),
/// degenerate_product_error if v is empty.
mpz_class reconstruct_root(const ExponentVec& v, std::uint64_t w);

} // namespace wmax
