#include "wmax/smooth.hpp"

#include <cmath>

#include "wmax/errors.hpp"

namespace wmax {

PsiQuery::PsiQuery(double x_, double z_) : x(x_), z(z_) {
    if (!(x > 0.0)) throw domain_error("PsiQuery: x must be positive");
    if (!(z >= 2.0)) throw domain_error("PsiQuery: z must be >= 2");
    u = std::log(x) / std::log(z);
}

namespace {

// Friability test via the spf chain; primes are divided out in ascending order.
bool is_friable(std::uint32_t n, std::uint64_t z, const PrimeBasis& basis) {
    while (n > 1) {
        std::uint32_t p = basis.spf(n);
        if (p > z) return false;
        do n /= p; while (n % p == 0);
    }
    return true;
}

std::uint64_t checked_floor(double x, const PrimeBasis& basis) {
    if (!(x > 0.0)) throw domain_error("psi: x must be positive");
    double fx = std::floor(x);
    if (fx > static_cast<double>(basis.limit()))
        throw capacity_error("psi: floor(x) exceeds basis limit");
    return static_cast<std::uint64_t>(fx);
}

} // namespace

std::uint64_t psi_sieve_floor(std::uint64_t n, std::uint64_t z, const PrimeBasis& basis) {
    if (z < 2) throw domain_error("psi_sieve: z must be >= 2");
    if (n > basis.limit()) throw capacity_error("psi_sieve: floor(x) exceeds basis limit");
    if (z >= n) return n; // every m <= n has P+(m) <= m <= z
    std::uint64_t count = 1; // n = 1
    for (std::uint64_t m = 2; m <= n; ++m)
        if (is_friable(static_cast<std::uint32_t>(m), z, basis)) ++count;
    return count;
}

std::uint64_t psi_sieve(double x, double z, const PrimeBasis& basis) {
    if (!(z >= 2.0)) throw domain_error("psi_sieve: z must be >= 2");
    std::uint64_t n = checked_floor(x, basis);
    auto zi = z >= static_cast<double>(basis.limit()) ? basis.limit()
                                                     : static_cast<std::uint64_t>(z);
    return psi_sieve_floor(n, zi, basis);
}

std::uint64_t PsiRecursion::count(double x, double z) {
    if (!(z >= 2.0)) throw domain_error("psi_recursive: z must be >= 2");
    std::uint64_t n = checked_floor(x, basis_);
    auto zi = z >= static_cast<double>(basis_.limit()) ? basis_.limit()
                                                       : static_cast<std::uint64_t>(z);
    return count_floor(n, zi);
}

std::uint64_t PsiRecursion::count_floor(std::uint64_t n, std::uint64_t z) {
    if (z < 2) throw domain_error("psi_recursive: z must be >= 2");
    if (n > basis_.limit()) throw capacity_error("psi_recursive: floor(x) exceeds basis limit");
    return rec(n, basis_.prime_count_leq(static_cast<double>(z)));
}

std::optional<std::uint64_t> PsiRecursion::lookup(std::uint64_t key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it == memo_.end()) return std::nullopt;
    return it->second;
}

void PsiRecursion::store(std::uint64_t key, std::uint64_t value) {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(key, value); // idempotent: recomputation yields the same value
}

std::uint64_t PsiRecursion::rec(std::uint64_t n, std::size_t k) {
    if (n == 0) return 0;
    if (k == 0) return 1; // no primes allowed: only n = 1
    const auto& primes = basis_.primes();
    // Every m <= n is friable once the largest allowed prime reaches n.
    if (primes[k - 1] >= n) return n;
    // Keys fit: n <= limit < 2^32 and k < 2^32.
    std::uint64_t key = (n << 32) | static_cast<std::uint64_t>(k);
    if (auto hit = lookup(key)) return *hit;
    // Telescoped Buchstab: Psi(n, p_k) = 1 + sum_{j<=k} Psi(n / p_j, p_j).
    std::uint64_t total = 1;
    for (std::size_t j = 1; j <= k; ++j)
        total += rec(n / primes[j - 1], j);
    store(key, total);
    return total;
}

std::uint64_t psi_recursive(double x, double z, const PrimeBasis& basis) {
    PsiRecursion r(basis);
    return r.count(x, z);
}

double psi_envelope(double x, double z) {
    if (!(z >= 2.0)) throw domain_error("psi_envelope: z must be >= 2");
    if (!(x >= z)) throw domain_error("psi_envelope: requires x >= z");
    double u = std::log(x) / std::log(z);
    return x * std::pow(u, -u) + std::sqrt(x);
}

std::uint64_t count_smooth_multiples(double x, std::uint32_t q, const PrimeBasis& basis) {
    std::uint64_t n = checked_floor(x, basis);
    if (!basis.is_prime(q)) throw domain_error("count_smooth_multiples: q is not prime");
    if (n < q) throw domain_error("count_smooth_multiples: requires x >= q");
    // n = q*m <= x with P+(n) <= q  <=>  m <= x/q with P+(m) <= q.
    std::uint64_t count = 0;
    std::uint64_t mmax = n / q;
    for (std::uint64_t m = 1; m <= mmax; ++m)
        if (is_friable(static_cast<std::uint32_t>(m), q, basis)) ++count;
    return count;
}

} // namespace wmax
