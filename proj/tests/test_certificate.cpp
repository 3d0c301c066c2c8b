#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "wmax/certificate.hpp"
#include "wmax/errors.hpp"

using namespace wmax;

namespace {

WitnessCertificate make(std::uint64_t x, std::vector<std::uint32_t> elems,
                        std::uint64_t w, long y) {
    WitnessCertificate c;
    c.x = x;
    c.elements = std::move(elems);
    c.w = w;
    c.y = y;
    return c;
}

} // namespace

TEST_CASE("valid certificates verify") {
    PrimeBasis b = build_prime_basis(1000);
    CHECK(verify_witness(make(4, {2, 4}, 3, 2), b).ok);     // 2*4 = 2^3
    CHECK(verify_witness(make(8, {2, 4, 8}, 6, 2), b).ok);  // 2^6
    CHECK(verify_witness(make(8, {4}, 2, 2), b).ok);        // 4 = 2^2
    CHECK(verify_witness(make(6, {2, 3, 6}, 2, 6), b).ok);  // 36 = 6^2
    CHECK(verify_witness(make(1000, {3, 9, 27}, 6, 3), b).ok);
    VerifyResult r = verify_witness(make(8, {2, 4, 8}, 6, 2), b);
    CHECK(r.reason == VerifyFailure::none);
    CHECK(static_cast<bool>(r));
}

TEST_CASE("every rejection reason is reachable") {
    PrimeBasis b = build_prime_basis(1000);

    VerifyResult r = verify_witness(make(8, {}, 1, 2), b);
    CHECK_FALSE(r.ok);
    CHECK(r.reason == VerifyFailure::empty_elements);

    r = verify_witness(make(8, {2, 4, 16}, 6, 2), b); // 16 > x
    CHECK(r.reason == VerifyFailure::element_out_of_range);
    r = verify_witness(make(8, {1, 2}, 1, 2), b);     // 1 < 2
    CHECK(r.reason == VerifyFailure::element_out_of_range);

    r = verify_witness(make(8, {4, 2}, 3, 2), b);
    CHECK(r.reason == VerifyFailure::elements_unsorted_or_duplicate);
    r = verify_witness(make(8, {2, 2, 4}, 4, 2), b);
    CHECK(r.reason == VerifyFailure::elements_unsorted_or_duplicate);

    r = verify_witness(make(8, {2, 4}, 0, 2), b);
    CHECK(r.reason == VerifyFailure::zero_w);

    r = verify_witness(make(8, {2, 4}, 2, 2), b);     // 2^3, 3 not divisible by 2
    CHECK(r.reason == VerifyFailure::exponent_not_divisible);

    r = verify_witness(make(8, {2, 4}, 3, 3), b);     // root is 2, not 3
    CHECK(r.reason == VerifyFailure::root_mismatch);

    r = verify_witness(make(8, {2, 4}, 1, 4), b);     // w = 1 root is the product, 8
    CHECK(r.reason == VerifyFailure::root_mismatch);

    for (VerifyFailure f :
         {VerifyFailure::none, VerifyFailure::empty_elements,
          VerifyFailure::element_out_of_range,
          VerifyFailure::elements_unsorted_or_duplicate, VerifyFailure::zero_w,
          VerifyFailure::exponent_not_divisible, VerifyFailure::root_mismatch,
          VerifyFailure::root_below_two}) {
        CHECK(verify_failure_name(f) != nullptr);
        CHECK(std::string(verify_failure_name(f)).size() > 0);
    }
}

TEST_CASE("verification needs the basis to cover the elements") {
    PrimeBasis b = build_prime_basis(100);
    CHECK_THROWS_AS(verify_witness(make(200, {2, 150}, 1, 300), b), capacity_error);
}

TEST_CASE("json round-trip") {
    PrimeBasis b = build_prime_basis(1000);
    WitnessCertificate c = make(8, {2, 4, 8}, 6, 2);
    for (bool pretty : {false, true}) {
        std::string text = certificate_to_json(c, pretty);
        WitnessCertificate back = certificate_from_json(text);
        CHECK(back.x == c.x);
        CHECK(back.w == c.w);
        CHECK(back.y == c.y);
        CHECK(back.elements == c.elements);
        CHECK(verify_witness(back, b).ok);
    }
    // compact form has no newlines
    CHECK(certificate_to_json(c, false).find('\n') == std::string::npos);
}

TEST_CASE("json round-trip survives a huge y") {
    PrimeBasis b = build_prime_basis(100);
    WitnessCertificate c;
    c.x = 25;
    c.w = 1;
    mpz_class prod = 1;
    for (std::uint32_t n = 2; n <= 25; ++n) {
        c.elements.push_back(n);
        prod *= n;
    }
    c.y = prod; // 25!/1, far beyond 64 bits
    CHECK(verify_witness(c, b).ok);
    WitnessCertificate back = certificate_from_json(certificate_to_json(c, true));
    CHECK(back.y == c.y);
    CHECK(verify_witness(back, b).ok);
}

TEST_CASE("malformed json is rejected") {
    CHECK_THROWS_AS(certificate_from_json("not json"), certificate_error);
    CHECK_THROWS_AS(certificate_from_json("{}"), certificate_error);
    CHECK_THROWS_AS(certificate_from_json(R"({"x": 8, "w": 6, "y": "2"})"),
                    certificate_error); // elements missing
    CHECK_THROWS_AS(certificate_from_json(R"({"x": 8, "w": 6, "y": "q", "elements": [2]})"),
                    certificate_error); // y not a decimal string
    CHECK_THROWS_AS(certificate_from_json(R"({"x": 8, "w": 6, "y": 2, "elements": [2]})"),
                    certificate_error); // y must be a string
}

TEST_CASE("certificate exponent sums") {
    PrimeBasis b = build_prime_basis(100);
    WitnessCertificate c = make(8, {2, 4, 8}, 6, 2);
    ExponentVec v = certificate_exponents(c, b);
    REQUIRE(v.entries.size() == 1);
    CHECK(v.entries[0] == std::pair<std::uint32_t, std::uint64_t>{2, 6});

    WitnessCertificate d = make(10, {2, 3, 6, 8, 9}, 1, 2 * 3 * 6 * 8 * 9);
    ExponentVec dv = certificate_exponents(d, b);
    REQUIRE(dv.entries.size() == 2);
    CHECK(dv.entries[0] == std::pair<std::uint32_t, std::uint64_t>{2, 5});
    CHECK(dv.entries[1] == std::pair<std::uint32_t, std::uint64_t>{3, 4});
}
