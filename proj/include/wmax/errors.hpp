#pragma once

#include <stdexcept>
#include <string>

namespace wmax {

/// Argument outside an operation's documented domain (bad prime, x too small, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Request exceeds what the supplied PrimeBasis (or a hard algorithmic cap) can serve.
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Certificate data is internally inconsistent (e.g. w does not divide an exponent).
class certificate_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Empty product: there is no base to reconstruct.
class degenerate_product_error : public certificate_error {
public:
    using certificate_error::certificate_error;
};

} // namespace wmax
