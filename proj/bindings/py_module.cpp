#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>

#include "wmax/bounds.hpp"
#include "wmax/certificate.hpp"
#include "wmax/errors.hpp"
#include "wmax/exact.hpp"
#include "wmax/search.hpp"
#include "wmax/smooth.hpp"

#ifndef WMAX_VERSION
#define WMAX_VERSION "0.0.0"
#endif

namespace py = pybind11;

namespace {

constexpr std::uint64_t kMaxX = 20'000'000; // sieve memory cap, matches the CLI

std::uint32_t checked_x(std::uint64_t x) {
    if (x < 2) throw wmax::domain_error("x must be >= 2");
    if (x > kMaxX) throw wmax::capacity_error("x exceeds the sieve capacity cap of 2e7");
    return static_cast<std::uint32_t>(x);
}

py::object py_bigint(const mpz_class& v) {
    return py::module_::import("builtins").attr("int")(v.get_str());
}

py::dict cert_dict(const wmax::WitnessCertificate& c) {
    py::dict d;
    d["x"] = c.x;
    d["w"] = c.w;
    d["elements"] = c.elements;
    d["y"] = py_bigint(c.y);
    return d;
}

wmax::Budget nodes_budget(std::optional<std::uint64_t> nodes) {
    wmax::Budget b;
    b.nodes = nodes;
    return b;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact w(x), friable counts, rigorous bounds, and witness search";
    m.attr("__version__") = WMAX_VERSION;

    py::register_exception<wmax::domain_error>(m, "DomainError", PyExc_ValueError);
    py::register_exception<wmax::capacity_error>(m, "CapacityError", PyExc_OverflowError);
    py::register_exception<wmax::certificate_error>(m, "CertificateError", PyExc_ValueError);

    m.def(
        "w_exact",
        [](std::uint64_t x, const std::string& method,
           std::optional<std::uint64_t> budget_nodes) {
            std::uint32_t xi = checked_x(x);
            wmax::PrimeBasis basis = wmax::build_prime_basis(xi);
            wmax::SolveOutcome out;
            if (method == "brute" || (method == "auto" && xi <= wmax::kBruteForceMaxX)) {
                out.result = wmax::w_bruteforce(xi, basis);
            } else if (method == "optimized" || method == "auto") {
                out = wmax::w_optimized(xi, basis, nodes_budget(budget_nodes));
            } else {
                throw wmax::domain_error("method must be auto, brute, or optimized");
            }
            py::dict d;
            d["x"] = out.result.x;
            d["w"] = out.result.w;
            d["method"] = out.result.method == wmax::ExactMethod::brute_force ? "brute_force"
                                                                              : "optimized";
            d["status"] = out.status == wmax::SolveOutcome::Status::solved ? "solved"
                                                                           : "budget_exhausted";
            if (out.unresolved)
                d["unresolved"] = py::make_tuple(out.unresolved->first, out.unresolved->second);
            d["certificate"] = cert_dict(out.result.witness);
            return d;
        },
        py::arg("x"), py::arg("method") = "auto", py::arg("budget_nodes") = std::nullopt,
        "Exact w(x) with a witness certificate; budget exhaustion is reported in 'status'.");

    m.def(
        "psi",
        [](double x, double z, const std::string& method) {
            if (x < 1) throw wmax::domain_error("psi: x must be >= 1");
            if (x > static_cast<double>(kMaxX))
                throw wmax::capacity_error("x exceeds the sieve capacity cap of 2e7");
            wmax::PrimeBasis basis = wmax::build_prime_basis(
                std::max<std::uint32_t>(2, static_cast<std::uint32_t>(x)));
            if (method == "recursive") return wmax::psi_recursive(x, z, basis);
            if (method == "sieve") return wmax::psi_sieve(x, z, basis);
            throw wmax::domain_error("method must be sieve or recursive");
        },
        py::arg("x"), py::arg("z"), py::arg("method") = "sieve",
        "Count of z-friable integers n <= x, including n = 1.");

    m.def("psi_envelope", &wmax::psi_envelope, py::arg("x"), py::arg("z"),
          "Diagnostic envelope x * u^(-u) + sqrt(x).");

    m.def(
        "upper_bound",
        [](std::uint64_t x, unsigned threads) {
            std::uint32_t xi = checked_x(x);
            wmax::PrimeBasis basis = wmax::build_prime_basis(xi);
            wmax::UpperBound ub = wmax::rigorous_upper_bound(xi, basis, threads);
            return py::make_tuple(ub.value, ub.argmax_q);
        },
        py::arg("x"), py::arg("threads") = 1,
        "Rigorous upper bound on w(x): (value, argmax prime q).");

    m.def("scale_L", &wmax::scale_L, py::arg("x"), "sqrt(log x * log log x)");
    m.def("envelope", &wmax::envelope, py::arg("x"), py::arg("c"), "x * exp(-c * L(x))");
    m.def("predicted_argmax_q", &wmax::predicted_argmax_q, py::arg("x"),
          "exp(L(x) / sqrt(2)), the predicted peak of the bound's summand");

    m.def(
        "power_chain",
        [](std::uint64_t x) { return cert_dict(wmax::power_chain_witness(checked_x(x))); },
        py::arg("x"), "The {2, 4, ..., 2^k} witness with w = k(k+1)/2.");

    m.def(
        "best_witness",
        [](std::uint64_t x, std::optional<std::uint64_t> target_w, const std::string& strategy,
           std::uint64_t seed, std::optional<std::uint64_t> budget_nodes) {
            wmax::SearchConfig cfg;
            cfg.x = checked_x(x);
            cfg.target_w = target_w;
            cfg.seed = seed;
            cfg.budget = nodes_budget(budget_nodes);
            if (strategy == "chain")
                cfg.strategy = wmax::Strategy::power_chains;
            else if (strategy == "pigeonhole")
                cfg.strategy = wmax::Strategy::prefix_pigeonhole;
            else if (strategy == "local")
                cfg.strategy = wmax::Strategy::local_search;
            else if (strategy == "portfolio")
                cfg.strategy = wmax::Strategy::portfolio;
            else
                throw wmax::domain_error("strategy must be chain, pigeonhole, local, or portfolio");
            wmax::PrimeBasis basis = wmax::build_prime_basis(cfg.x);
            wmax::SearchOutcome out = wmax::best_witness(cfg, basis);
            py::dict d;
            d["w"] = out.best.w;
            d["nodes_used"] = out.nodes_used;
            d["budget_exhausted"] = out.budget_exhausted;
            d["certificate"] = cert_dict(out.best);
            return d;
        },
        py::arg("x"), py::arg("target_w") = std::nullopt, py::arg("strategy") = "portfolio",
        py::arg("seed") = 0, py::arg("budget_nodes") = std::nullopt,
        "Best-effort witness search; the result is always at least the power chain.");

    m.def(
        "verify_certificate",
        [](const std::string& json_text) {
            wmax::WitnessCertificate cert = wmax::certificate_from_json(json_text);
            std::uint32_t xi = checked_x(cert.x);
            wmax::PrimeBasis basis = wmax::build_prime_basis(xi);
            wmax::VerifyResult r = wmax::verify_witness(cert, basis);
            return py::make_tuple(r.ok, std::string(wmax::verify_failure_name(r.reason)));
        },
        py::arg("json_text"),
        "Re-derive every invariant of a serialized certificate: (ok, reason).");

    m.def(
        "certificate_json",
        [](std::uint64_t x) {
            std::uint32_t xi = checked_x(x);
            wmax::PrimeBasis basis = wmax::build_prime_basis(xi);
            wmax::SolveOutcome out = wmax::w_optimized(xi, basis);
            return wmax::certificate_to_json(out.result.witness, true);
        },
        py::arg("x"), "Canonical JSON certificate for the exact w(x).");
}
