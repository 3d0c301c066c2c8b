#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "wmax/basis.hpp"

namespace wmax {

/// A verifiable witness that w(x) >= w: distinct elements of [2, x] whose
/// product is exactly y^w. y is arbitrary precision (power-chain products alone
/// overflow any machine word well before x = 10^6).
struct WitnessCertificate {
    std::uint64_t x = 0;
    std::vector<std::uint32_t> elements; // sorted ascending, distinct, in [2, x]
    std::uint64_t w = 0;                 // >= 1
    mpz_class y;                         // >= 2; y = 1 products are excluded by design
};

enum class VerifyFailure {
    none,
    empty_elements,
    element_out_of_range,
    elements_unsorted_or_duplicate,
    zero_w,
    exponent_not_divisible,
    root_mismatch,
    root_below_two,
};

struct VerifyResult {
    bool ok;
    VerifyFailure reason;

    explicit operator bool() const { return ok; }
};

const char* verify_failure_name(VerifyFailure f);

/// Recomputes every invariant from scratch: element range/order, the exponent
/// sums of the product, divisibility by w, and the reconstructed base, which
/// must equal cert.y and be >= 2. Throws capacity_error only if an element
/// exceeds basis.limit(); all certificate violations come back as a reason code.
VerifyResult verify_witness(const WitnessCertificate& cert, const PrimeBasis& basis);

/// Canonical interchange form: {"x": ..., "w": ..., "y": "<decimal>", "elements": [...]}.
/// y is a decimal string so consumers never need 64-bit-overflowing JSON numbers.
std::string certificate_to_json(const WitnessCertificate& cert, bool pretty = false);

/// Parses the canonical form. Throws certificate_error on malformed documents.
WitnessCertificate certificate_from_json(const std::string& text);

/// Exponent sums of the certificate product, recomputed from the elements.
ExponentVec certificate_exponents(const WitnessCertificate& cert, const PrimeBasis& basis);

} // namespace wmax
