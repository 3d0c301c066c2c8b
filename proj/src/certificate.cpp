#include "wmax/certificate.hpp"

#include <nlohmann/json.hpp>

#include "wmax/errors.hpp"

namespace wmax {

const char* verify_failure_name(VerifyFailure f) {
    switch (f) {
        case VerifyFailure::none: return "none";
        case VerifyFailure::empty_elements: return "empty_elements";
        case VerifyFailure::element_out_of_range: return "element_out_of_range";
        case VerifyFailure::elements_unsorted_or_duplicate: return "elements_unsorted_or_duplicate";
        case VerifyFailure::zero_w: return "zero_w";
        case VerifyFailure::exponent_not_divisible: return "exponent_not_divisible";
        case VerifyFailure::root_mismatch: return "root_mismatch";
        case VerifyFailure::root_below_two: return "root_below_two";
    }
    return "unknown";
}

ExponentVec certificate_exponents(const WitnessCertificate& cert, const PrimeBasis& basis) {
    std::vector<ExponentVec> parts;
    parts.reserve(cert.elements.size());
    for (std::uint32_t n : cert.elements) parts.push_back(factorize(n, basis));
    return vec_sum(parts);
}

VerifyResult verify_witness(const WitnessCertificate& cert, const PrimeBasis& basis) {
    auto fail = [](VerifyFailure f) { return VerifyResult{false, f}; };

    if (cert.elements.empty()) return fail(VerifyFailure::empty_elements);
    for (std::uint32_t n : cert.elements) {
        if (n < 2 || static_cast<std::uint64_t>(n) > cert.x)
            return fail(VerifyFailure::element_out_of_range);
        if (n > basis.limit())
            throw capacity_error("verify_witness: element exceeds basis limit");
    }
    for (std::size_t i = 1; i < cert.elements.size(); ++i)
        if (cert.elements[i] <= cert.elements[i - 1])
            return fail(VerifyFailure::elements_unsorted_or_duplicate);
    if (cert.w == 0) return fail(VerifyFailure::zero_w);

    ExponentVec sums = certificate_exponents(cert, basis);
    for (const auto& [p, e] : sums.entries)
        if (e % cert.w != 0) return fail(VerifyFailure::exponent_not_divisible);

    mpz_class y = reconstruct_root(sums, cert.w); // elements >= 2, so sums is nonempty
    if (y < 2) return fail(VerifyFailure::root_below_two);
    if (y != cert.y) return fail(VerifyFailure::root_mismatch);
    return VerifyResult{true, VerifyFailure::none};
}

std::string certificate_to_json(const WitnessCertificate& cert, bool pretty) {
    nlohmann::json j;
    j["x"] = cert.x;
    j["w"] = cert.w;
    j["y"] = cert.y.get_str();
    j["elements"] = cert.elements;
    return pretty ? j.dump(2) : j.dump();
}

WitnessCertificate certificate_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw certificate_error("certificate_from_json: not a JSON object");
    if (!j.contains("x") || !j.contains("w") || !j.contains("y") || !j.contains("elements"))
        throw certificate_error("certificate_from_json: missing required key");
    WitnessCertificate cert;
    try {
        cert.x = j.at("x").get<std::uint64_t>();
        cert.w = j.at("w").get<std::uint64_t>();
        cert.elements = j.at("elements").get<std::vector<std::uint32_t>>();
        cert.y = mpz_class(j.at("y").get<std::string>(), 10);
    } catch (const std::exception& e) {
        throw certificate_error(std::string("certificate_from_json: ") + e.what());
    }
    return cert;
}

} // namespace wmax
