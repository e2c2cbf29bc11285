// Copyright 2026 The qcf Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCF_HARNESS_HPP
#define QCF_HARNESS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <qcf/entry12.hpp>
#include <qcf/error.hpp>
#include <qcf/orthopoly.hpp>
#include <qcf/scalars.hpp>

// Batch verification: config parsing, suite dispatch, JSON report and CSV trace.
namespace qcf::harness
{

inline constexpr const char *version = "0.1.0";

enum class exit_code : int { ok = 0, failure = 1, usage = 2, io = 3 };

// Bad command line or config file.
class usage_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Suite { entry12, theorem1, recursion, star, h1, kc, xclosed, darboux, genfun, all };

inline constexpr Suite concrete_suites[] = {Suite::entry12, Suite::theorem1, Suite::recursion,
                                            Suite::star,    Suite::h1,       Suite::kc,
                                            Suite::xclosed, Suite::darboux,  Suite::genfun};

inline const char *suite_name(Suite s)
{
    switch (s) {
    case Suite::entry12: return "entry12";
    case Suite::theorem1: return "theorem1";
    case Suite::recursion: return "recursion";
    case Suite::star: return "star";
    case Suite::h1: return "h1";
    case Suite::kc: return "kc";
    case Suite::xclosed: return "xclosed";
    case Suite::darboux: return "darboux";
    case Suite::genfun: return "genfun";
    case Suite::all: return "all";
    }
    return "?";
}

inline Suite parse_suite(std::string_view s)
{
    for (Suite c : concrete_suites) {
        if (s == suite_name(c)) {
            return c;
        }
    }
    if (s == "all") {
        return Suite::all;
    }
    throw usage_error("unknown suite '" + std::string(s) + "'");
}

inline bool uses_x(Suite s)
{
    return s == Suite::xclosed || s == Suite::darboux || s == Suite::genfun;
}

// --- literals --------------------------------------------------------------

namespace detail
{

inline std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

inline double parse_double(std::string_view s, std::string_view whole)
{
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw usage_error("malformed number in '" + std::string(whole) + "'");
    }
    return v;
}

} // namespace detail

// `re`, `imi` or `re+imi` / `re-imi`; a bare `i` is the unit.
inline Complex parse_complex(std::string_view text)
{
    std::string s = detail::trim(text);
    if (s.empty()) {
        throw usage_error("empty complex literal");
    }
    if (s.back() != 'i') {
        return {detail::parse_double(s, text), 0.0};
    }
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_part = [&](std::string_view t) {
        if (t.empty() || t == "+") {
            return 1.0;
        }
        if (t == "-") {
            return -1.0;
        }
        return detail::parse_double(t, text);
    };
    if (split == std::string::npos) {
        return {0.0, imag_part(body)};
    }
    return {detail::parse_double(std::string_view(body).substr(0, split), text),
            imag_part(std::string_view(body).substr(split))};
}

// One parameter value. Real literals (integers, p/q, decimals) are kept exactly as well.
struct ParamValue {
    Complex value;
    std::optional<BigRational> exact;
};

inline ParamValue parse_param_value(std::string_view text)
{
    std::string s = detail::trim(text);
    if (s.find('i') != std::string::npos) {
        return {parse_complex(s), std::nullopt};
    }
    try {
        BigRational r = BigRational::parse(s);
        return {Complex(r.to_double(), 0.0), r};
    } catch (const numeric_error &) {
        throw usage_error("malformed parameter value '" + s + "'");
    }
}

struct ParamPoint {
    ParamValue a, b, q;

    entry12::ComplexParams complex() const
    {
        return {a.value, b.value, q.value};
    }
    std::optional<entry12::Params<BigRational>> rational() const
    {
        if (!a.exact || !b.exact || !q.exact) {
            return std::nullopt;
        }
        return entry12::Params<BigRational>{*a.exact, *b.exact, *q.exact};
    }
};

// `start:stop:step` (inclusive, exact arithmetic) or a single value.
inline std::vector<ParamValue> parse_param_values(std::string_view text)
{
    auto parts = detail::split(text, ':');
    if (parts.size() == 1) {
        return {parse_param_value(parts[0])};
    }
    if (parts.size() != 3) {
        throw usage_error("range must be start:stop:step in '" + std::string(text) + "'");
    }
    std::vector<BigRational> r;
    for (const auto &p : parts) {
        auto v = parse_param_value(p);
        if (!v.exact) {
            throw usage_error("ranges are only allowed over real parameters");
        }
        r.push_back(*v.exact);
    }
    if (r[2].is_zero() || (r[1] - r[0]).sign() * r[2].sign() < 0) {
        throw usage_error("empty or infinite range '" + std::string(text) + "'");
    }
    std::vector<ParamValue> out;
    for (BigRational v = r[0]; r[2].sign() > 0 ? !(r[1] < v) : !(v < r[1]); v = v + r[2]) {
        out.push_back({Complex(v.to_double(), 0.0), v});
        if (out.size() > 100000) {
            throw usage_error("range too long");
        }
    }
    return out;
}

// `a=..,b=..,q=..`, each component a value or a range; returns the grid a-major.
inline std::vector<ParamPoint> parse_params(std::string_view text)
{
    std::optional<std::vector<ParamValue>> a, b, q;
    for (const auto &item : detail::split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw usage_error("expected name=value in '" + item + "'");
        }
        std::string name = detail::trim(item.substr(0, eq));
        auto values = parse_param_values(item.substr(eq + 1));
        if (name == "a") {
            a = std::move(values);
        } else if (name == "b") {
            b = std::move(values);
        } else if (name == "q") {
            q = std::move(values);
        } else {
            throw usage_error("unknown parameter '" + name + "'");
        }
    }
    if (!a || !b || !q) {
        throw usage_error("parameter triple needs a, b and q in '" + std::string(text) + "'");
    }
    std::vector<ParamPoint> out;
    for (const auto &va : *a) {
        for (const auto &vb : *b) {
            for (const auto &vq : *q) {
                out.push_back({va, vb, vq});
            }
        }
    }
    return out;
}

// --- configuration ---------------------------------------------------------

struct SuiteConfig {
    Suite suite = Suite::all;
    std::vector<std::string> param_specs; // as given, echoed in the report
    std::vector<ParamPoint> params;       // empty: each suite uses its standard points
    std::vector<std::string> x_specs;
    std::vector<Complex> x_points;        // empty: standard x points per suite
    double eps = 1e-12;
    long max_depth = 300;
    std::optional<double> tolerance;      // overrides the per-suite default
    bool exact = false;
    bool invert = false;                  // handle |ab| > 1 through the inverted fraction
    std::optional<std::string> out;
};

namespace detail
{

inline void validate(const SuiteConfig &cfg)
{
    if (!(cfg.eps > 0.0)) {
        throw usage_error("eps must be positive");
    }
    if (cfg.max_depth < 10) {
        throw usage_error("max-depth must be at least 10");
    }
    if (cfg.tolerance && !(*cfg.tolerance >= 0.0)) {
        throw usage_error("tolerance must be nonnegative");
    }
}

inline std::vector<std::string> json_strings(const nlohmann::json &j, const char *key)
{
    std::vector<std::string> out;
    const auto &v = j.at(key);
    if (v.is_array()) {
        for (const auto &e : v) {
            out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
        }
    } else {
        out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
    return out;
}

inline void apply_file(SuiteConfig &cfg, const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot read config file '" + path + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw usage_error("config file is not valid JSON: " + std::string(e.what()));
    }
    try {
        if (j.contains("suite")) {
            cfg.suite = parse_suite(j.at("suite").get<std::string>());
        }
        if (j.contains("params")) {
            cfg.param_specs = json_strings(j, "params");
        }
        if (j.contains("x")) {
            cfg.x_specs = json_strings(j, "x");
        }
        if (j.contains("eps")) {
            cfg.eps = j.at("eps").get<double>();
        }
        if (j.contains("max_depth")) {
            cfg.max_depth = j.at("max_depth").get<long>();
        }
        if (j.contains("tolerance")) {
            cfg.tolerance = j.at("tolerance").get<double>();
        }
        if (j.contains("exact")) {
            cfg.exact = j.at("exact").get<bool>();
        }
        if (j.contains("invert")) {
            cfg.invert = j.at("invert").get<bool>();
        }
        if (j.contains("out")) {
            cfg.out = j.at("out").get<std::string>();
        }
    } catch (const nlohmann::json::exception &e) {
        throw usage_error("bad config field: " + std::string(e.what()));
    }
}

inline void resolve(SuiteConfig &cfg)
{
    cfg.params.clear();
    for (const auto &spec : cfg.param_specs) {
        for (const auto &triple : split(spec, ';')) {
            if (triple.empty()) {
                continue;
            }
            auto grid = parse_params(triple);
            cfg.params.insert(cfg.params.end(), grid.begin(), grid.end());
        }
    }
    if (!cfg.param_specs.empty() && cfg.params.empty()) {
        throw usage_error("parameter grid is empty");
    }
    cfg.x_points.clear();
    for (const auto &spec : cfg.x_specs) {
        for (const auto &x : split(spec, ',')) {
            cfg.x_points.push_back(parse_complex(x));
        }
    }
}

} // namespace detail

inline void add_config_options(CLI::App &app, SuiteConfig &cfg, std::string &suite, std::string &config_file,
                               std::optional<double> &tol)
{
    app.add_option("--suite", suite, "entry12|theorem1|recursion|star|h1|kc|xclosed|darboux|genfun|all");
    app.add_option("--params", cfg.param_specs, "a=..,b=..,q=.. (values, p/q, or start:stop:step); ';' separates");
    app.add_option("--x", cfg.x_specs, "complex points, e.g. 2,-2,1.5i,0.3+0.4i")->delimiter(',');
    app.add_option("--eps", cfg.eps, "series/limit tolerance");
    app.add_option("--max-depth", cfg.max_depth, "maximum continued-fraction depth");
    app.add_option("--tol", tol, "override the per-suite pass tolerance");
    app.add_option("--out", cfg.out, "output path");
    app.add_flag("--exact", cfg.exact, "rational mode where available");
    app.add_flag("--invert", cfg.invert, "evaluate |ab|>1 points through the inverted fraction");
    app.add_option("--config", config_file, "JSON config file; command-line values override it");
}

/*
 * Parses the tokens following a subcommand. Values from `file` (or --config)
 * are applied first, then every option that appears on the command line.
 */
inline SuiteConfig parse_config(const std::vector<std::string> &tokens,
                                const std::optional<std::string> &file = std::nullopt)
{
    SuiteConfig cli_cfg;
    std::string suite, config_file;
    std::optional<double> tol;
    CLI::App app{"qcf"};
    add_config_options(app, cli_cfg, suite, config_file, tol);
    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        throw usage_error(e.what());
    }

    SuiteConfig cfg;
    if (file) {
        detail::apply_file(cfg, *file);
    }
    if (!config_file.empty()) {
        detail::apply_file(cfg, config_file);
    }
    auto given = [&](const char *name) { return app.get_option(name)->count() > 0; };
    if (given("--suite")) {
        cfg.suite = parse_suite(suite);
    }
    if (given("--params")) {
        cfg.param_specs = cli_cfg.param_specs;
    }
    if (given("--x")) {
        cfg.x_specs = cli_cfg.x_specs;
    }
    if (given("--eps")) {
        cfg.eps = cli_cfg.eps;
    }
    if (given("--max-depth")) {
        cfg.max_depth = cli_cfg.max_depth;
    }
    if (given("--tol")) {
        cfg.tolerance = tol;
    }
    if (given("--out")) {
        cfg.out = cli_cfg.out;
    }
    if (given("--exact")) {
        cfg.exact = true;
    }
    if (given("--invert")) {
        cfg.invert = true;
    }
    detail::resolve(cfg);
    detail::validate(cfg);
    return cfg;
}

// --- standard points -------------------------------------------------------

namespace detail
{

inline ParamPoint point(std::string_view a, std::string_view b, std::string_view q)
{
    return {parse_param_value(a), parse_param_value(b), parse_param_value(q)};
}

inline std::vector<ParamPoint> acceptance_grid(bool complex_point)
{
    std::vector<ParamPoint> out;
    for (auto a : {"0.2", "0.4", "0.6"}) {
        for (auto b : {"-0.1", "-0.3", "-0.5"}) {
            for (auto q : {"0.2", "0.5", "0.8"}) {
                out.push_back(point(a, b, q));
            }
        }
    }
    if (complex_point) {
        out.push_back(point("0.25", "-0.2", "0.3+0.3i"));
    }
    return out;
}

// Real points of the grid with |a^2 q| < 1 and |b| < |a||q|.
inline std::vector<ParamPoint> h1_grid()
{
    std::vector<ParamPoint> out;
    for (const auto &p : acceptance_grid(false)) {
        auto c = p.complex();
        if (std::abs(c.a * c.a * c.q) < 1.0 && std::abs(c.b) < std::abs(c.a) * std::abs(c.q)) {
            out.push_back(p);
        }
    }
    return out;
}

} // namespace detail

inline std::vector<ParamPoint> standard_points(Suite s)
{
    using detail::point;
    switch (s) {
    case Suite::entry12: return detail::acceptance_grid(true);
    case Suite::h1:
    case Suite::kc: return detail::h1_grid();
    case Suite::theorem1:
    case Suite::recursion: return {point("0.3", "-0.2", "0.5"), point("0.5", "-0.4", "0.7")};
    case Suite::star: return {point("1/3", "-1/4", "1/5"), point("2/5", "-1/7", "1/3"), point("1/2", "-1/3", "1/4")};
    default: return {point("0.6", "-0.15", "0.5")};
    }
}

inline std::vector<Complex> standard_x(Suite s)
{
    switch (s) {
    case Suite::xclosed: return {{2, 0}, {-2, 0}, {0, 1.5}, {0, -1.5}, {0.4, 1.2}, {0.4, -1.2}};
    case Suite::darboux: return {{2, 0}, {-2, 0}, {0, 1.5}, {0.4, 1.2}, {1, 0}};
    case Suite::genfun: return {{2, 0}, {-2, 0}, {0, 1.5}, {1, 0}};
    default: return {};
    }
}

inline bool at_spectrum_edge(const Complex &x)
{
    return x.imag() == 0.0 && std::abs(x.real()) == 1.0;
}

inline double default_tolerance(Suite s, const std::optional<Complex> &x)
{
    switch (s) {
    case Suite::entry12:
    case Suite::h1:
    case Suite::kc: return 1e-8;
    case Suite::theorem1: return 1e-9;
    case Suite::recursion: return 1e-10;
    case Suite::star: return 0.0;
    case Suite::xclosed: return x && at_spectrum_edge(*x) ? 1e-3 : 1e-6;
    case Suite::darboux: return x && at_spectrum_edge(*x) ? 1e-2 : 1e-4;
    case Suite::genfun: return 1e-10;
    case Suite::all: break;
    }
    return 0.0;
}

// --- running ---------------------------------------------------------------

struct CheckResult {
    std::string suite;
    ParamPoint point;
    std::optional<Complex> x;
    double residual = std::numeric_limits<double>::quiet_NaN();
    double tolerance = 0.0;
    bool passed = false;
    long depth = 0;
    std::vector<std::string> diagnostics;
};

namespace detail
{

inline std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt(const Complex &z)
{
    return z.imag() == 0.0 ? fmt(z.real()) : fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i";
}

inline void limit_result(CheckResult &r, const CFLimit<Complex> &lim, double residual)
{
    r.residual = residual;
    r.depth = lim.depth;
    r.diagnostics.push_back("last_delta=" + fmt(lim.last_delta));
    if (!lim.converged) {
        r.diagnostics.push_back("not converged within max_depth");
    }
    r.passed = lim.converged && residual <= r.tolerance;
}

inline void run_entry12(CheckResult &r, const ParamPoint &pt, const SuiteConfig &cfg)
{
    auto p = pt.complex();
    if (cfg.invert && std::abs(p.a * p.b) > 1.0) {
        entry12::require(p, entry12::q_in_disk);
        Complex ref = entry12::inverted_ab_value(p, cfg.eps);
        auto lim = limit_detect(entry12::cf_C_spec(p), cfg.eps, cfg.max_depth);
        r.diagnostics.push_back("inverted: |ab|>1 evaluated at (1/a, 1/b, q)");
        limit_result(r, lim, std::abs(lim.value - ref));
        return;
    }
    auto chk = entry12::entry12_residual(p, cfg.eps, cfg.max_depth);
    limit_result(r, chk.limit, chk.residual);
    if (p.a.imag() == 0.0 && p.b.imag() == 0.0 && p.q.imag() == 0.0 && std::abs(p.a * p.a * p.q) < 1.0) {
        try {
            r.diagnostics.push_back("step1_residual=" + fmt(entry12::step1_residual(p, cfg.eps)));
            r.diagnostics.push_back("step2_residual=" + fmt(entry12::step2_residual(p, cfg.eps)));
        } catch (const numeric_error &e) {
            r.diagnostics.push_back(std::string("steps: ") + e.what());
        }
    }
}

inline void run_theorem1(CheckResult &r, const ParamPoint &pt, const SuiteConfig &cfg)
{
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (long s = 0; s <= 8; ++s) {
        double v = entry12::theorem1_residual(s, pt.complex(), cfg.eps);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    r.residual = hi;
    r.depth = 9;
    r.diagnostics.push_back("max over s=0..8; min=" + fmt(lo));
    r.passed = hi <= r.tolerance;
}

inline void run_recursion(CheckResult &r, const ParamPoint &pt, const SuiteConfig &cfg)
{
    double hi = 0.0;
    for (long s = 0; s <= 10; ++s) {
        hi = std::max(hi, entry12::recursion_residual(s, pt.complex(), cfg.eps));
    }
    r.residual = hi;
    r.depth = 11;
    r.diagnostics.push_back("max over s=0..10");
    r.passed = hi <= r.tolerance;
}

template <Field T>
double star_max(const entry12::Params<T> &p)
{
    double hi = 0.0;
    for (long k = 0; k <= 10; ++k) {
        hi = std::max(hi, magnitude(entry12::star_residual(k, p)));
        for (long s = 0; s <= 10; ++s) {
            hi = std::max(hi, magnitude(entry12::twostar_residual(k, s, p)));
        }
    }
    return hi;
}

inline void run_star(CheckResult &r, const ParamPoint &pt, const SuiteConfig &cfg)
{
    r.depth = 11;
    if (auto rp = pt.rational()) {
        r.residual = star_max(*rp);
        r.diagnostics.push_back("exact rational mode; max over k,s=0..10");
    } else if (cfg.exact) {
        throw numeric_error(errc::invalid_input, "exact mode needs rational a, b, q");
    } else {
        r.residual = star_max(pt.complex());
        r.diagnostics.push_back("floating mode; max over k,s=0..10");
        if (!cfg.tolerance) {
            r.tolerance = 1e-10;
        }
    }
    r.passed = r.residual <= r.tolerance;
}

inline void run_h1(CheckResult &r, const ParamPoint &pt, const SuiteConfig &cfg)
{
    auto chk = entry12::h1_residual(pt.complex(), cfg.eps, cfg.max_depth);
    limit_result(r, chk.limit, chk.residual);
    try {
        auto p = pt.complex();
        double heine = heine_residual(-p.a * p.q / p.b, p.a * p.a * p.q, -p.a * p.b * p.q * p.q, p.b * p.q / p.a,
                                      p.q * p.q, cfg.eps);
        r.diagnostics.push_back("heine_residual=" + fmt(heine));
    } catch (const numeric_error &e) {
        r.diagnostics.push_back(std::string("heine: ") + e.what());
    }
}

inline void run_kc(CheckResult &r, const ParamPoint &pt, const SuiteConfig &cfg)
{
    auto chk = entry12::kc_residual(pt.complex(), cfg.eps, cfg.max_depth);
    CFLimit<Complex> lim = chk.K.depth >= chk.C.depth ? chk.K : chk.C;
    lim.converged = chk.K.converged && chk.C.converged;
    limit_result(r, lim, chk.residual);
}

inline void run_xclosed(CheckResult &r, const ParamPoint &pt, const Complex &x, const SuiteConfig &cfg)
{
    auto p = pt.complex();
    auto closed = orthopoly::X_closed(p, x, cfg.eps);
    auto lim = orthopoly::X_limit(p, x, cfg.max_depth);
    r.residual = std::abs(lim.value - closed.value);
    r.depth = lim.depth;
    r.diagnostics.push_back("rho_star=rho" + std::to_string(closed.branch.selected));
    r.diagnostics.push_back("delta_half=" + fmt(lim.delta_half));
    r.diagnostics.push_back("|G|=" + fmt(std::abs(closed.G)));
    r.passed = r.residual <= r.tolerance;
}

inline void run_darboux(CheckResult &r, const ParamPoint &pt, const Complex &x, const SuiteConfig &cfg)
{
    auto d = orthopoly::darboux_ratio_check(pt.complex(), x, cfg.max_depth, cfg.eps);
    r.residual = std::max(d.rel_deviation, d.rel_deviation_star);
    r.depth = d.k;
    if (d.double_pole) {
        r.diagnostics.push_back("double pole: 2^k/(k+1) normalisation");
    }
    r.diagnostics.push_back("ratio_deviation=" + fmt(d.ratio_deviation));
    r.passed = r.residual <= r.tolerance;
}

inline void run_genfun(CheckResult &r, const ParamPoint &pt, const Complex &x)
{
    constexpr std::size_t order = 12;
    auto p = pt.complex();
    auto q = orthopoly::genfun_Q_check(p, x, order, false);
    auto qs = orthopoly::genfun_Q_check(p, x, order, true);
    auto nd = orthopoly::hatND_genfun_check(p, x, order);
    r.residual = std::max({q.max_deviation, qs.max_deviation, nd.max_deviation});
    r.depth = static_cast<long>(order);
    r.diagnostics.push_back("Q=" + fmt(q.max_deviation) + " Q*=" + fmt(qs.max_deviation) +
                            " ND=" + fmt(nd.max_deviation));
    r.diagnostics.push_back("tail_bound=" +
                            fmt(std::max({q.max_tail_bound, qs.max_tail_bound, nd.max_tail_bound})));
    r.passed = r.residual <= r.tolerance;
}

inline CheckResult run_one(Suite s, const ParamPoint &pt, const std::optional<Complex> &x, const SuiteConfig &cfg)
{
    CheckResult r;
    r.suite = suite_name(s);
    r.point = pt;
    r.x = x;
    r.tolerance = cfg.tolerance.value_or(default_tolerance(s, x));
    try {
        switch (s) {
        case Suite::entry12: run_entry12(r, pt, cfg); break;
        case Suite::theorem1: run_theorem1(r, pt, cfg); break;
        case Suite::recursion: run_recursion(r, pt, cfg); break;
        case Suite::star: run_star(r, pt, cfg); break;
        case Suite::h1: run_h1(r, pt, cfg); break;
        case Suite::kc: run_kc(r, pt, cfg); break;
        case Suite::xclosed: run_xclosed(r, pt, *x, cfg); break;
        case Suite::darboux: run_darboux(r, pt, *x, cfg); break;
        case Suite::genfun: run_genfun(r, pt, *x); break;
        case Suite::all: break;
        }
        if (!std::isfinite(r.residual)) {
            r.passed = false;
            r.diagnostics.push_back("non-finite residual");
        }
    } catch (const std::exception &e) {
        r.residual = std::numeric_limits<double>::quiet_NaN();
        r.passed = false;
        r.diagnostics.push_back(e.what());
    }
    return r;
}

} // namespace detail

// One result per (suite, point[, x]) in config order.
inline std::vector<CheckResult> run_suite(const SuiteConfig &cfg)
{
    std::vector<Suite> suites;
    if (cfg.suite == Suite::all) {
        suites.assign(std::begin(concrete_suites), std::end(concrete_suites));
    } else {
        suites.push_back(cfg.suite);
    }
    std::vector<CheckResult> out;
    for (Suite s : suites) {
        auto points = cfg.params.empty() ? standard_points(s) : cfg.params;
        for (const auto &pt : points) {
            if (!uses_x(s)) {
                out.push_back(detail::run_one(s, pt, std::nullopt, cfg));
                continue;
            }
            auto xs = cfg.x_points.empty() ? standard_x(s) : cfg.x_points;
            for (const auto &x : xs) {
                out.push_back(detail::run_one(s, pt, x, cfg));
            }
        }
    }
    return out;
}

// --- output ----------------------------------------------------------------

using ojson = nlohmann::ordered_json;

namespace detail
{

inline ojson complex_json(const Complex &z)
{
    return ojson{{"re", z.real()}, {"im", z.imag()}};
}

inline ojson number_or_complex(const Complex &z)
{
    return z.imag() == 0.0 ? ojson(z.real()) : complex_json(z);
}

inline ojson finite_or_null(double v)
{
    return std::isfinite(v) ? ojson(v) : ojson(nullptr);
}

// nlohmann::json writer with every float printed to 17 significant digits.
inline void write_json(std::ostream &os, const ojson &j, int indent, int level)
{
    auto pad = [&](int l) { os << std::string(static_cast<std::size_t>(l * indent), ' '); };
    switch (j.type()) {
    case ojson::value_t::number_float: {
        double v = j.get<double>();
        os << (std::isfinite(v) ? fmt(v) : "null");
        break;
    }
    case ojson::value_t::array:
        if (j.empty()) {
            os << "[]";
            break;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            pad(level + 1);
            write_json(os, j[i], indent, level + 1);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        pad(level);
        os << "]";
        break;
    case ojson::value_t::object: {
        if (j.empty()) {
            os << "{}";
            break;
        }
        os << "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            pad(level + 1);
            os << ojson(it.key()).dump() << ": ";
            write_json(os, it.value(), indent, level + 1);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        pad(level);
        os << "}";
        break;
    }
    default: os << j.dump(); break;
    }
}

} // namespace detail

inline ojson config_echo(const SuiteConfig &cfg)
{
    ojson j;
    j["suite"] = suite_name(cfg.suite);
    j["params"] = cfg.param_specs;
    j["x"] = cfg.x_specs;
    j["eps"] = cfg.eps;
    j["max_depth"] = cfg.max_depth;
    j["tolerance"] = cfg.tolerance ? ojson(*cfg.tolerance) : ojson(nullptr);
    j["exact"] = cfg.exact;
    j["invert"] = cfg.invert;
    return j;
}

inline ojson report_json(const std::vector<CheckResult> &results, const SuiteConfig &cfg)
{
    ojson j;
    j["version"] = version;
    j["config_echo"] = config_echo(cfg);
    j["results"] = ojson::array();
    long passed = 0;
    for (const auto &r : results) {
        ojson e;
        e["suite"] = r.suite;
        e["params"] = {{"a", detail::number_or_complex(r.point.a.value)},
                       {"b", detail::number_or_complex(r.point.b.value)},
                       {"q", detail::number_or_complex(r.point.q.value)}};
        e["x"] = r.x ? detail::complex_json(*r.x) : ojson(nullptr);
        e["residual"] = detail::finite_or_null(r.residual);
        e["tolerance"] = r.tolerance;
        e["passed"] = r.passed;
        e["depth"] = r.depth;
        e["diagnostics"] = r.diagnostics;
        j["results"].push_back(std::move(e));
        passed += r.passed ? 1 : 0;
    }
    const long total = static_cast<long>(results.size());
    j["summary"] = {{"total", total}, {"passed", passed}, {"failed", total - passed}};
    return j;
}

inline std::string to_text(const ojson &j)
{
    std::ostringstream os;
    detail::write_json(os, j, 2, 0);
    os << "\n";
    return os.str();
}

inline void write_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) {
        throw io_error("cannot write '" + path + "'");
    }
}

// Writes the report to `path`, or to stdout when empty.
inline void emit_report(const std::vector<CheckResult> &results, const SuiteConfig &cfg, const std::string &path)
{
    std::string text = to_text(report_json(results, cfg));
    if (path.empty()) {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

struct TraceRow {
    long k;
    Complex value;
    double abs_err;
};

/*
 * Convergents of the suite's fraction at the first configured point (and x),
 * k = 1..depth, with the error against the suite's closed form.
 * Supported: entry12 (C vs product side), h1 (H(1) vs closed form),
 * xclosed (P*_k/P_k vs 2 rho F/G).
 */
inline std::vector<TraceRow> trace_rows(const SuiteConfig &cfg, long depth)
{
    const Suite s = cfg.suite;
    auto points = cfg.params.empty() ? standard_points(s) : cfg.params;
    if (points.empty()) {
        throw usage_error("trace needs a parameter point");
    }
    const auto p = points.front().complex();
    CFSpec<Complex> cf;
    Complex ref;
    switch (s) {
    case Suite::entry12:
        entry12::require(p, entry12::q_in_disk | entry12::ab_in_disk);
        cf = entry12::cf_C_spec(p);
        ref = entry12::product_side(p, cfg.eps);
        break;
    case Suite::h1:
        cf = entry12::jfrac_H_spec(p, Complex(1.0, 0.0));
        ref = entry12::H1_closed(p, cfg.eps);
        break;
    case Suite::xclosed: {
        auto xs = cfg.x_points.empty() ? standard_x(s) : cfg.x_points;
        cf = orthopoly::x_jfrac_spec(p, orthopoly::scaling_constants(p), xs.front());
        ref = orthopoly::X_closed(p, xs.front(), cfg.eps).value;
        break;
    }
    default: throw usage_error(std::string("trace is not available for suite ") + suite_name(s));
    }
    std::vector<TraceRow> rows;
    ForwardConvergents<Complex> fwd(cf);
    for (long k = 1; k <= depth; ++k) {
        auto c = fwd.next();
        Complex v = c.value.value_or(Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
        rows.push_back({k, v, std::abs(v - ref)});
    }
    return rows;
}

inline std::string trace_csv(const std::vector<TraceRow> &rows)
{
    std::string out = "k,value_re,value_im,abs_err\n";
    for (const auto &r : rows) {
        out += std::to_string(r.k) + "," + detail::fmt(r.value.real()) + "," + detail::fmt(r.value.imag()) + "," +
               detail::fmt(r.abs_err) + "\n";
    }
    return out;
}

inline void emit_trace(const SuiteConfig &cfg, long depth, const std::string &path)
{
    std::string text = trace_csv(trace_rows(cfg, depth));
    if (path.empty()) {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

// Closed form and fraction limit per point, as JSON.
inline ojson eval_json(const SuiteConfig &cfg)
{
    const Suite s = cfg.suite;
    auto points = cfg.params.empty() ? standard_points(s) : cfg.params;
    ojson arr = ojson::array();
    for (const auto &pt : points) {
        const auto p = pt.complex();
        auto entry = [&](const std::optional<Complex> &x, const Complex &closed, const Complex &limit, long depth) {
            ojson e;
            e["suite"] = suite_name(s);
            e["params"] = {{"a", detail::number_or_complex(p.a)},
                           {"b", detail::number_or_complex(p.b)},
                           {"q", detail::number_or_complex(p.q)}};
            e["x"] = x ? detail::complex_json(*x) : ojson(nullptr);
            e["closed"] = detail::complex_json(closed);
            e["limit"] = detail::complex_json(limit);
            e["depth"] = depth;
            arr.push_back(std::move(e));
        };
        switch (s) {
        case Suite::entry12: {
            auto chk = entry12::entry12_residual(p, cfg.eps, cfg.max_depth);
            entry(std::nullopt, chk.reference, chk.limit.value, chk.limit.depth);
            break;
        }
        case Suite::h1: {
            auto chk = entry12::h1_residual(p, cfg.eps, cfg.max_depth);
            entry(std::nullopt, chk.reference, chk.limit.value, chk.limit.depth);
            break;
        }
        case Suite::xclosed: {
            for (const auto &x : cfg.x_points.empty() ? standard_x(s) : cfg.x_points) {
                auto closed = orthopoly::X_closed(p, x, cfg.eps);
                auto lim = orthopoly::X_limit(p, x, cfg.max_depth);
                entry(x, closed.value, lim.value, lim.depth);
            }
            break;
        }
        default: throw usage_error(std::string("eval is not available for suite ") + suite_name(s));
        }
    }
    return arr;
}

/*
 * qcf verify|trace|eval [options]. Returns the process exit code:
 * 0 all passed, 1 a check failed, 2 usage error, 3 I/O error.
 */
inline constexpr const char *usage_text =
    "usage: qcf verify|trace|eval [--suite S] [--params a=..,b=..,q=..] [--x X,...] [--eps E]\n"
    "                             [--max-depth N] [--tol T] [--out PATH] [--exact] [--invert]\n"
    "                             [--config FILE]\n";

inline std::string help_text()
{
    std::string s = usage_text;
    s += "\n"
         "  verify   run a suite and write a JSON report; exit 1 if any check fails\n"
         "  trace    write k,value_re,value_im,abs_err rows for entry12, h1 or xclosed\n"
         "  eval     print the continued fraction and closed-form values as JSON\n"
         "\n"
         "suites: all";
    for (Suite c : concrete_suites) {
        s += std::string(" ") + suite_name(c);
    }
    s += "\n"
         "params: comma-separated a=,b=,q=; each value is a number, a complex re+imi,\n"
         "        a rational n/d or an inclusive range start:stop:step\n";
    return s;
}

inline int run_cli(const std::vector<std::string> &args, std::ostream &err = std::cerr)
{
    auto usage = [&](const std::string &msg) {
        err << "qcf: " << msg << "\n" << usage_text;
        return static_cast<int>(exit_code::usage);
    };
    auto is_help = [](const std::string &a) { return a == "-h" || a == "--help"; };
    if (args.empty()) {
        return usage("missing subcommand");
    }
    const std::string &cmd = args.front();
    if (std::any_of(args.begin(), args.end(), is_help)) {
        std::cout << help_text();
        return static_cast<int>(exit_code::ok);
    }
    std::vector<std::string> rest(args.begin() + 1, args.end());
    try {
        SuiteConfig cfg = parse_config(rest);
        const std::string out = cfg.out.value_or("");
        if (cmd == "verify") {
            auto results = run_suite(cfg);
            emit_report(results, cfg, out);
            bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult &r) { return r.passed; });
            return static_cast<int>(ok ? exit_code::ok : exit_code::failure);
        }
        if (cmd == "trace") {
            if (cfg.suite == Suite::all) {
                return usage("trace needs --suite entry12|h1|xclosed");
            }
            emit_trace(cfg, cfg.max_depth, out);
            return static_cast<int>(exit_code::ok);
        }
        if (cmd == "eval") {
            if (cfg.suite == Suite::all) {
                return usage("eval needs --suite entry12|h1|xclosed");
            }
            std::string text = to_text(eval_json(cfg));
            if (out.empty()) {
                std::cout << text;
            } else {
                write_file(out, text);
            }
            return static_cast<int>(exit_code::ok);
        }
        return usage("unknown subcommand '" + cmd + "'");
    } catch (const usage_error &e) {
        return usage(e.what());
    } catch (const io_error &e) {
        err << "qcf: " << e.what() << "\n";
        return static_cast<int>(exit_code::io);
    } catch (const numeric_error &e) {
        err << "qcf: " << e.what() << "\n";
        return static_cast<int>(exit_code::failure);
    }
}

} // namespace qcf::harness

#endif // QCF_HARNESS_HPP
