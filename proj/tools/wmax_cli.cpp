// wmax: exact values, rigorous bounds, and witness search for the largest w
// such that a product of distinct integers in [2, x] is a perfect w-th power.
//
// Exit codes: 0 success, 2 domain error, 3 capacity error, 4 budget exhausted,
// 5 witness target not met. CLI11 parse errors use its own codes (>= 100).

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wmax/bounds.hpp"
#include "wmax/budget.hpp"
#include "wmax/certificate.hpp"
#include "wmax/errors.hpp"
#include "wmax/exact.hpp"
#include "wmax/search.hpp"
#include "wmax/smooth.hpp"

#ifndef WMAX_VERSION
#define WMAX_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;

constexpr std::uint64_t kMaxX = 20'000'000; // sieve memory cap (4 bytes per n)

constexpr int kExitDomain = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitBudget = 4;
constexpr int kExitNotFound = 5;

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

wmax::Budget parse_budget(const std::string& s) {
    wmax::Budget b;
    if (s.empty()) return b;
    std::size_t pos = 0;
    unsigned long long n = 0;
    try {
        n = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--budget", "expected <count>{ms|s|m|n}, got '" + s + "'");
    }
    std::string unit = s.substr(pos);
    if (unit == "ms")
        b.time = std::chrono::milliseconds(n);
    else if (unit == "s")
        b.time = std::chrono::seconds(n);
    else if (unit == "m")
        b.time = std::chrono::minutes(n);
    else if (unit == "n")
        b.nodes = n;
    else
        throw CLI::ValidationError("--budget", "unknown unit '" + unit + "' (use ms, s, m, or n)");
    return b;
}

struct GlobalOpts {
    unsigned threads = 1;
    std::uint64_t seed = 0;
    std::string budget_str;
    std::string format = "text";
    std::string output;
    std::string command_line;

    wmax::Budget budget() const { return parse_budget(budget_str); }

    json manifest() const {
        char stamp[32] = "";
        std::time_t t = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&t, &tm);
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return json{{"command", command_line},
                    {"seed", seed},
                    {"budget", budget_str.empty() ? "unlimited" : budget_str},
                    {"version", WMAX_VERSION},
                    {"timestamp", stamp}};
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint32_t checked_x(double x) {
    if (x < 2) throw wmax::domain_error("x must be >= 2");
    if (x > static_cast<double>(kMaxX))
        throw wmax::capacity_error("x exceeds the sieve capacity cap of 2e7");
    return static_cast<std::uint32_t>(x);
}

std::string elems_text(const std::vector<std::uint32_t>& v) {
    constexpr std::size_t kShow = 16;
    std::string s = "{";
    for (std::size_t i = 0; i < v.size() && i < kShow; ++i) {
        if (i) s += ", ";
        s += std::to_string(v[i]);
    }
    if (v.size() > kShow)
        s += ", ... (" + std::to_string(v.size()) + " elements)";
    s += "}";
    return s;
}

std::string y_text(const mpz_class& y) {
    std::string s = y.get_str();
    if (s.size() > 64)
        return s.substr(0, 24) + "..." + s.substr(s.size() - 8) + " (" +
               std::to_string(s.size()) + " digits)";
    return s;
}

// ---- w-exact --------------------------------------------------------------

int run_w_exact(const GlobalOpts& g, double xd, const std::string& method) {
    std::uint32_t x = checked_x(xd);
    wmax::PrimeBasis basis = wmax::build_prime_basis(x);

    wmax::SolveOutcome out;
    if (method == "brute" || (method == "auto" && x <= wmax::kBruteForceMaxX)) {
        wmax::ExactWResult r = wmax::w_bruteforce(x, basis, g.threads);
        out.status = wmax::SolveOutcome::Status::solved;
        out.result = std::move(r);
    } else {
        out = wmax::w_optimized(x, basis, g.budget());
    }
    bool exhausted = out.status == wmax::SolveOutcome::Status::budget_exhausted;
    const wmax::WitnessCertificate& cert = out.result.witness;

    if (!g.output.empty())
        write_file(g.output, wmax::certificate_to_json(cert, true) + "\n");

    if (g.format == "json") {
        json doc;
        doc["manifest"] = g.manifest();
        doc["x"] = out.result.x;
        doc["w"] = out.result.w;
        doc["method"] =
            out.result.method == wmax::ExactMethod::brute_force ? "brute_force" : "optimized";
        doc["status"] = exhausted ? "budget_exhausted" : "solved";
        if (out.unresolved)
            doc["unresolved"] = json::array({out.unresolved->first, out.unresolved->second});
        doc["nodes_used"] = out.nodes_used;
        doc["certificate"] = json::parse(wmax::certificate_to_json(cert));
        std::cout << doc.dump(2) << "\n";
    } else {
        if (exhausted) {
            std::cout << "budget exhausted: certified w(" << x << ") >= " << out.result.w << "\n";
            if (out.unresolved)
                std::cout << "unresolved w in [" << out.unresolved->first << ", "
                          << out.unresolved->second << "]\n";
        } else {
            std::cout << "w(" << x << ") = " << out.result.w << "\n";
        }
        std::cout << "witness: " << elems_text(cert.elements) << "\n";
        std::cout << "y = " << y_text(cert.y) << "\n";
        std::cout << "method: "
                  << (out.result.method == wmax::ExactMethod::brute_force ? "brute_force"
                                                                          : "optimized")
                  << "\n";
    }
    return exhausted ? kExitBudget : 0;
}

// ---- psi ------------------------------------------------------------------

int run_psi(const GlobalOpts& g, double x, double z, const std::string& method) {
    if (x < 1) throw wmax::domain_error("psi: x must be >= 1");
    if (x > static_cast<double>(kMaxX))
        throw wmax::capacity_error("x exceeds the sieve capacity cap of 2e7");
    wmax::PrimeBasis basis =
        wmax::build_prime_basis(std::max<std::uint32_t>(2, static_cast<std::uint32_t>(x)));

    std::uint64_t exact = 0;
    std::string method_used = method;
    if (method == "sieve") {
        exact = wmax::psi_sieve(x, z, basis);
    } else if (method == "recursive") {
        exact = wmax::psi_recursive(x, z, basis);
    } else { // both: cross-check
        exact = wmax::psi_sieve(x, z, basis);
        std::uint64_t rec = wmax::psi_recursive(x, z, basis);
        if (rec != exact)
            throw std::runtime_error("psi method mismatch: sieve=" + std::to_string(exact) +
                                     " recursive=" + std::to_string(rec));
    }
    std::optional<double> env;
    if (x >= z) env = wmax::psi_envelope(x, z);

    if (g.format == "json") {
        json doc;
        doc["manifest"] = g.manifest();
        doc["x"] = x;
        doc["z"] = z;
        if (x >= z) doc["u"] = wmax::PsiQuery(x, z).u;
        doc["exact"] = exact;
        if (env) doc["envelope"] = *env;
        doc["method"] = method_used;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "psi(" << fmt_g(x) << ", " << fmt_g(z) << ") = " << exact << "\n";
        if (x >= z) std::cout << "u = " << fmt_g(wmax::PsiQuery(x, z).u) << "\n";
        if (env) std::cout << "envelope = " << fmt_g(*env) << "\n";
        std::cout << "method: " << method_used << "\n";
    }
    return 0;
}

// ---- bound ----------------------------------------------------------------

json bound_to_json(const wmax::BoundReport& r) {
    json doc;
    doc["x"] = r.x;
    doc["upper_bound"] = r.upper_bound;
    doc["argmax_q"] = r.argmax_q;
    if (r.predicted_q) doc["predicted_q"] = *r.predicted_q;
    if (r.envelope_lo) doc["envelope_sqrt2"] = *r.envelope_lo;
    if (r.envelope_hi) doc["envelope_inv_sqrt2"] = *r.envelope_hi;
    if (r.exact_w) doc["exact_w"] = *r.exact_w;
    if (r.exact_budget_exhausted) doc["exact_budget_exhausted"] = true;
    if (r.c_hat) doc["c_hat"] = *r.c_hat;
    if (r.x >= 3) doc["L"] = wmax::scale_L(static_cast<double>(r.x));
    return doc;
}

int run_bound(const GlobalOpts& g, double xd, bool with_exact) {
    std::uint32_t x = checked_x(xd);
    wmax::PrimeBasis basis = wmax::build_prime_basis(x);
    wmax::BoundReport r = wmax::bound_report(x, basis, with_exact, g.budget(), g.threads);

    if (!g.output.empty()) {
        json doc;
        doc["manifest"] = g.manifest();
        doc.update(bound_to_json(r));
        write_file(g.output, doc.dump(2) + "\n");
    }
    if (g.format == "json") {
        json doc;
        doc["manifest"] = g.manifest();
        doc.update(bound_to_json(r));
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "x = " << r.x << "\n";
        std::cout << "upper_bound = " << r.upper_bound << " (argmax q = " << r.argmax_q << ")\n";
        if (r.exact_w) std::cout << "exact_w = " << *r.exact_w << "\n";
        if (r.exact_budget_exhausted) std::cout << "exact_w: budget exhausted\n";
        if (r.predicted_q) std::cout << "predicted_q = " << fmt_g(*r.predicted_q) << "\n";
        if (r.envelope_lo) std::cout << "envelope_sqrt2 = " << fmt_g(*r.envelope_lo) << "\n";
        if (r.envelope_hi)
            std::cout << "envelope_inv_sqrt2 = " << fmt_g(*r.envelope_hi) << "\n";
        if (r.x >= 3) std::cout << "L = " << fmt_g(wmax::scale_L(static_cast<double>(r.x))) << "\n";
        if (r.c_hat) std::cout << "c_hat = " << fmt_g(*r.c_hat) << "\n";
    }
    return r.exact_budget_exhausted ? kExitBudget : 0;
}

// ---- witness --------------------------------------------------------------

int run_witness(const GlobalOpts& g, double xd, std::optional<std::uint64_t> target,
                const std::string& strategy) {
    std::uint32_t x = checked_x(xd);
    wmax::PrimeBasis basis = wmax::build_prime_basis(x);

    wmax::SearchConfig cfg;
    cfg.x = x;
    cfg.target_w = target;
    cfg.budget = g.budget();
    cfg.seed = g.seed;
    if (strategy == "chain")
        cfg.strategy = wmax::Strategy::power_chains;
    else if (strategy == "pigeonhole")
        cfg.strategy = wmax::Strategy::prefix_pigeonhole;
    else if (strategy == "local")
        cfg.strategy = wmax::Strategy::local_search;
    else
        cfg.strategy = wmax::Strategy::portfolio;

    wmax::SearchOutcome out = wmax::best_witness(cfg, basis);
    bool target_met = !target || out.best.w >= *target;

    if (!g.output.empty())
        write_file(g.output, wmax::certificate_to_json(out.best, true) + "\n");

    if (g.format == "json") {
        json doc;
        doc["manifest"] = g.manifest();
        doc["x"] = x;
        doc["w"] = out.best.w;
        doc["strategy"] = strategy;
        doc["nodes_used"] = out.nodes_used;
        doc["budget_exhausted"] = out.budget_exhausted;
        if (target) {
            doc["target_w"] = *target;
            doc["target_met"] = target_met;
        }
        doc["certificate"] = json::parse(wmax::certificate_to_json(out.best));
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "w(" << x << ") >= " << out.best.w << "\n";
        std::cout << "witness: " << elems_text(out.best.elements) << "\n";
        std::cout << "y = " << y_text(out.best.y) << "\n";
        std::cout << "strategy: " << strategy << "\n";
        if (target && !target_met)
            std::cout << "target w >= " << *target << " not met\n";
    }
    return target_met ? 0 : kExitNotFound;
}

// ---- table ----------------------------------------------------------------

std::vector<std::string> table_header(bool with_exact) {
    std::vector<std::string> h{"x"};
    if (with_exact) h.push_back("exact_w");
    for (const char* c : {"upper_bound", "argmax_q", "predicted_q", "envelope_sqrt2",
                          "envelope_inv_sqrt2", "L", "c_hat"})
        h.push_back(c);
    return h;
}

std::vector<std::string> table_row(const wmax::BoundReport& r, bool with_exact) {
    std::vector<std::string> row;
    row.push_back(std::to_string(r.x));
    if (with_exact) row.push_back(r.exact_w ? std::to_string(*r.exact_w) : "");
    row.push_back(std::to_string(r.upper_bound));
    row.push_back(std::to_string(r.argmax_q));
    row.push_back(r.predicted_q ? fmt_g(*r.predicted_q) : "");
    row.push_back(r.envelope_lo ? fmt_g(*r.envelope_lo) : "");
    row.push_back(r.envelope_hi ? fmt_g(*r.envelope_hi) : "");
    row.push_back(r.x >= 3 ? fmt_g(wmax::scale_L(static_cast<double>(r.x))) : "");
    row.push_back(r.c_hat ? fmt_g(*r.c_hat) : "");
    return row;
}

int run_table(const GlobalOpts& g, double xmind, double xmaxd, std::uint64_t step,
              double geometric, bool with_exact) {
    std::uint64_t xmin = checked_x(xmind);
    std::uint64_t xmax = checked_x(xmaxd);
    if (xmax < xmin) throw wmax::domain_error("table: x_max must be >= x_min");

    wmax::PrimeBasis basis = wmax::build_prime_basis(static_cast<std::uint32_t>(xmax));
    std::vector<std::uint64_t> xs;
    if (geometric > 0) {
        for (double xv = static_cast<double>(xmin); xv <= static_cast<double>(xmax) + 0.5;
             xv *= geometric) {
            std::uint64_t xi = static_cast<std::uint64_t>(xv + 0.5);
            if (xi > xmax) break;
            if (xs.empty() || xi > xs.back()) xs.push_back(xi);
        }
    } else {
        for (std::uint64_t xv = xmin; xv <= xmax; xv += step) xs.push_back(xv);
    }

    bool any_exhausted = false;
    std::vector<wmax::BoundReport> reports;
    reports.reserve(xs.size());
    for (std::uint64_t xv : xs) {
        reports.push_back(wmax::bound_report(xv, basis, with_exact, g.budget(), g.threads));
        any_exhausted = any_exhausted || reports.back().exact_budget_exhausted;
    }

    if (g.format == "json") {
        json doc;
        doc["manifest"] = g.manifest();
        doc["rows"] = json::array();
        for (const auto& r : reports) doc["rows"].push_back(bound_to_json(r));
        std::string text = doc.dump(2) + "\n";
        if (!g.output.empty())
            write_file(g.output, text);
        else
            std::cout << text;
    } else {
        std::string csv;
        auto append_row = [&csv](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) csv += ",";
                csv += row[i];
            }
            csv += "\n";
        };
        append_row(table_header(with_exact));
        for (const auto& r : reports) append_row(table_row(r, with_exact));
        if (!g.output.empty()) {
            // payload stays pure CSV; the manifest rides in a sidecar
            write_file(g.output, csv);
            write_file(g.output + ".manifest.json", g.manifest().dump(2) + "\n");
        } else {
            std::cout << csv;
            std::cerr << g.manifest().dump() << "\n";
        }
    }
    return any_exhausted ? kExitBudget : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact values, rigorous bounds, and witness search for the largest w "
                 "with a product of distinct integers in [2, x] equal to a perfect "
                 "w-th power"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    for (int i = 0; i < argc; ++i) {
        if (i) g.command_line += " ";
        g.command_line += argv[i];
    }
    app.add_option("--threads", g.threads, "worker threads for parallel scans")
        ->check(CLI::Range(1u, 256u));
    app.add_option("--seed", g.seed, "RNG seed for randomized search");
    app.add_option("--budget", g.budget_str,
                   "work budget: <count>{ms|s|m} wall time or <count>n nodes");
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--output", g.output, "write the machine-readable result to this path");

    double x = 0;
    std::string method = "auto";
    auto* c_wexact = app.add_subcommand("w-exact", "compute w(x) exactly with a certificate");
    c_wexact->add_option("x", x, "upper end of the element range [2, x]")->required();
    c_wexact->add_option("--method", method, "brute (x <= 26), optimized, or auto")
        ->check(CLI::IsMember({"auto", "brute", "optimized"}));

    double psi_x = 0, psi_z = 0;
    std::string psi_method = "sieve";
    auto* c_psi = app.add_subcommand("psi", "count z-friable integers up to x");
    c_psi->add_option("x", psi_x, "count range upper end")->required();
    c_psi->add_option("z", psi_z, "friability bound (largest allowed prime factor)")->required();
    c_psi->add_option("--method", psi_method, "counting method")
        ->check(CLI::IsMember({"sieve", "recursive", "both"}));

    double bound_x = 0;
    bool bound_exact = false;
    auto* c_bound = app.add_subcommand("bound", "rigorous upper bound and diagnostics for w(x)");
    c_bound->add_option("x", bound_x, "argument of the bound")->required();
    c_bound->add_flag("--exact", bound_exact, "also run the exact solver (respects --budget)");

    double wit_x = 0;
    std::string strategy = "portfolio";
    std::uint64_t wit_target = 0;
    auto* c_witness = app.add_subcommand("witness", "search for a large-w witness certificate");
    c_witness->add_option("x", wit_x, "upper end of the element range [2, x]")->required();
    auto* wopt = c_witness->add_option("--w", wit_target, "required target w (exit 5 if missed)");
    c_witness->add_option("--strategy", strategy, "search strategy")
        ->check(CLI::IsMember({"chain", "pigeonhole", "local", "portfolio"}));

    double tab_min = 0, tab_max = 0;
    std::uint64_t tab_step = 1;
    double tab_geo = 0;
    bool tab_exact = false;
    auto* c_table = app.add_subcommand("table", "emit bound diagnostics for a range of x as CSV");
    c_table->add_option("x_min", tab_min, "first x")->required();
    c_table->add_option("x_max", tab_max, "last x")->required();
    auto* stepopt = c_table->add_option("--step", tab_step, "arithmetic stride")
                        ->check(CLI::PositiveNumber);
    c_table->add_option("--geometric", tab_geo, "geometric ratio between consecutive x")
        ->check(CLI::Range(1.000001, 1e6))
        ->excludes(stepopt);
    c_table->add_flag("--exact", tab_exact, "include the exact_w column (respects --budget)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_wexact) return run_w_exact(g, x, method);
        if (*c_psi) return run_psi(g, psi_x, psi_z, psi_method);
        if (*c_bound) return run_bound(g, bound_x, bound_exact);
        if (*c_witness)
            return run_witness(
                g, wit_x,
                *wopt ? std::optional<std::uint64_t>(wit_target) : std::nullopt, strategy);
        if (*c_table) return run_table(g, tab_min, tab_max, tab_step, tab_geo, tab_exact);
    } catch (const wmax::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const wmax::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const wmax::certificate_error& e) {
        std::cerr << "certificate error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
