#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "wmax/basis.hpp"

namespace wmax {

/// A smoothness-count query. u = log x / log z is recomputed on construction,
/// never stored stale.
struct PsiQuery {
    double x;
    double z;
    double u;

    PsiQuery(double x_, double z_);
};

enum class PsiMethod { sieve, recursive };

struct PsiResult {
    std::uint64_t exact;
    std::optional<double> envelope; // defined only for x >= z >= 2
    PsiMethod method;
};

/// Psi(x, z): number of n <= x with largest prime factor <= z, counting n = 1.
/// Direct scan over [1, floor(x)]. Throws domain_error for x <= 0 or z < 2,
/// capacity_error if floor(x) exceeds basis.limit().
std::uint64_t psi_sieve(double x, double z, const PrimeBasis& basis);

/// Integer-argument form used where exactness of x/q matters.
std::uint64_t psi_sieve_floor(std::uint64_t n, std::uint64_t z, const PrimeBasis& basis);

/// Psi via the Buchstab identity Psi(x, p_k) = Psi(x, p_{k-1}) + Psi(x/p_k, p_k)
/// with Psi(x, z < 2) = 1 for x >= 1. Memoized on (floor(x), largest-prime-index).
/// The cache may be shared across threads; lookups and inserts are serialized and
/// duplicate inserts are idempotent.
class PsiRecursion {
public:
    explicit PsiRecursion(const PrimeBasis& basis) : basis_(basis) {}

    std::uint64_t count(double x, double z);
    std::uint64_t count_floor(std::uint64_t n, std::uint64_t z);

private:
    struct KeyHash {
        std::size_t operator()(std::uint64_t k) const {
            k ^= k >> 33;
            k *= 0xff51afd7ed558ccdULL;
            k ^= k >> 33;
            return static_cast<std::size_t>(k);
        }
    };

    std::uint64_t rec(std::uint64_t n, std::size_t k);
    std::optional<std::uint64_t> lookup(std::uint64_t key) const;
    void store(std::uint64_t key, std::uint64_t value);

    const PrimeBasis& basis_;
    mutable std::mutex mu_;
    std::unordered_map<std::uint64_t, std::uint64_t, KeyHash> memo_;
};

/// One-shot recursive count with a fresh cache.
std::uint64_t psi_recursive(double x, double z, const PrimeBasis& basis);

/// Classical diagnostic envelope x * u^(-u) + sqrt(x), u = log x / log z.
/// An estimate for eyeballing magnitudes, not a certified bound in either
/// direction. Throws domain_error unless x >= z >= 2.
double psi_envelope(double x, double z);

/// Count of n <= x divisible by q with largest prime factor <= q, by direct
/// enumeration of the multiples of q (equal to Psi(x/q, q) via m = n/q; kept as
/// an independent route so the identity stays testable). Throws domain_error if
/// q is not prime or x < q, capacity_error if floor(x) exceeds basis.limit().
std::uint64_t count_smooth_multiples(double x, std::uint32_t q, const PrimeBasis& basis);

} // namespace wmax
