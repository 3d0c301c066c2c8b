#include <doctest.h>

#include <cstdint>
#include <vector>

#include "wmax/bounds.hpp"
#include "wmax/errors.hpp"
#include "wmax/exact.hpp"
#include "wmax/search.hpp"

using namespace wmax;

TEST_CASE("power chain witness") {
    WitnessCertificate c2 = power_chain_witness(2);
    CHECK(c2.elements == std::vector<std::uint32_t>{2});
    CHECK(c2.w == 1);
    CHECK(c2.y == 2);

    WitnessCertificate c1000 = power_chain_witness(1000);
    CHECK(c1000.w == 45); // k = 9
    CHECK(c1000.elements.size() == 9);
    CHECK(c1000.elements.back() == 512);

    CHECK(power_chain_witness(1024).w == 55); // k = 10 exactly at the power

    PrimeBasis b = build_prime_basis(2048);
    CHECK(verify_witness(c1000, b).ok);
    CHECK(verify_witness(power_chain_witness(1024), b).ok);
    CHECK_THROWS_AS(power_chain_witness(1), domain_error);
}

TEST_CASE("pigeonhole finds the square at 8") {
    PrimeBasis b = build_prime_basis(64);
    PigeonholeResult r = pigeonhole_witness(8, 2, 3, b);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->w % 2 == 0);
    CHECK(verify_witness(*r.certificate, b).ok);
    CHECK(r.enumerated > 0);
    CHECK(r.table_size > 0);
    CHECK_FALSE(r.budget_exhausted);
}

TEST_CASE("pigeonhole can come up empty") {
    PrimeBasis b = build_prime_basis(64);
    // 2-friables up to 3: only {2}; residue vectors (), (1) never repeat mod 2
    PigeonholeResult r = pigeonhole_witness(3, 2, 2, b);
    CHECK_FALSE(r.certificate.has_value());
    CHECK_FALSE(r.budget_exhausted);
}

TEST_CASE("pigeonhole respects the target multiple") {
    PrimeBasis b = build_prime_basis(128);
    PigeonholeResult r = pigeonhole_witness(100, 3, 5, b);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->w >= 3);
    CHECK(r.certificate->w % 3 == 0);
    CHECK(verify_witness(*r.certificate, b).ok);
}

TEST_CASE("pigeonhole starves on a tiny budget") {
    PrimeBasis b = build_prime_basis(100000);
    Budget tiny;
    tiny.nodes = 5;
    PigeonholeResult r = pigeonhole_witness(100000, 50, 31, b, tiny);
    CHECK(r.budget_exhausted);
    CHECK_FALSE(r.certificate.has_value());
}

TEST_CASE("best witness never loses to the chain") {
    PrimeBasis b = build_prime_basis(100000);
    for (std::uint32_t x : {2u, 10u, 100u, 1000u, 65536u, 100000u}) {
        SearchConfig cfg;
        cfg.x = x;
        cfg.budget.nodes = 200000;
        SearchOutcome out = best_witness(cfg, b);
        std::uint64_t k = ilog(x, 2);
        CAPTURE(x);
        CHECK(out.best.w >= k * (k + 1) / 2);
        CHECK(verify_witness(out.best, b).ok);
    }
}

TEST_CASE("chain strategy returns exactly the chain") {
    PrimeBasis b = build_prime_basis(1024);
    SearchConfig cfg;
    cfg.x = 1000;
    cfg.strategy = Strategy::power_chains;
    SearchOutcome out = best_witness(cfg, b);
    CHECK(out.best.w == 45);
    CHECK(out.best.elements == power_chain_witness(1000).elements);
    CHECK_FALSE(out.budget_exhausted);
}

TEST_CASE("search matches the oracle on small x") {
    PrimeBasis b = build_prime_basis(64);
    for (std::uint32_t x = 2; x <= 22; ++x) {
        ExactWResult oracle = w_bruteforce(x, b, 2);
        SearchConfig cfg;
        cfg.x = x;
        cfg.seed = 5;
        cfg.budget.nodes = 500000;
        SearchOutcome out = best_witness(cfg, b);
        CAPTURE(x);
        CHECK(out.best.w == oracle.w); // <= by exactness, >= is the quality bar
        CHECK(verify_witness(out.best, b).ok);
    }
}

TEST_CASE("search is deterministic for a fixed seed") {
    PrimeBasis b = build_prime_basis(4096);
    SearchConfig cfg;
    cfg.x = 4000;
    cfg.seed = 42;
    cfg.budget.nodes = 100000;
    SearchOutcome a = best_witness(cfg, b);
    SearchOutcome c = best_witness(cfg, b);
    CHECK(a.best.w == c.best.w);
    CHECK(a.best.elements == c.best.elements);
    CHECK(a.nodes_used == c.nodes_used);
}

TEST_CASE("search quality is monotone in the budget") {
    PrimeBasis b = build_prime_basis(10000);
    SearchConfig cfg;
    cfg.x = 10000;
    cfg.seed = 3;
    std::uint64_t prev = 0;
    for (std::uint64_t nodes : {0ull, 1000ull, 20000ull, 400000ull}) {
        cfg.budget = {};
        cfg.budget.nodes = nodes;
        SearchOutcome out = best_witness(cfg, b);
        CAPTURE(nodes);
        CHECK(out.best.w >= prev);
        CHECK(verify_witness(out.best, b).ok);
        prev = out.best.w;
    }
}

TEST_CASE("targeted search reports whether it got there") {
    PrimeBasis b = build_prime_basis(64);
    SearchConfig hit;
    hit.x = 8;
    hit.target_w = 6;
    hit.budget.nodes = 100000;
    SearchOutcome out = best_witness(hit, b);
    CHECK(out.best.w >= 6);
    CHECK(verify_witness(out.best, b).ok);

    SearchConfig miss;
    miss.x = 3;
    miss.target_w = 2; // w(3) = 1, unreachable
    miss.budget.nodes = 100000;
    SearchOutcome far = best_witness(miss, b);
    CHECK(far.best.w == 1);
    CHECK(verify_witness(far.best, b).ok);
}
