#include "rmtx/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmtx/errors.hpp"
#include "rmtx/jpdf.hpp"
#include "rmtx/kernels.hpp"
#include "rmtx/sop.hpp"
#include "rmtx/suites.hpp"

#ifndef RMTX_GIT_DESCRIBE
#define RMTX_GIT_DESCRIBE "unknown"
#endif

namespace rmtx::cli {

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitValidation = 4;

constexpr double kJpdfCheckTol = 1e-6;

double parse_number(const std::string& s, const char* what)
{
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw DomainError(std::string("cannot parse ") + what + " '" + s + "'");
    return v;
}

std::vector<std::string> split_colon(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    return parts;
}

double default_upper(const TransitionParams& p)
{
    const double spread = std::sqrt(2.0 * p.n + p.nu) + 1.5;
    return p.a > 1.0 ? p.a * spread : spread;
}

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }

    void write(std::ostream& os) const
    {
        for (const auto& c : comments) os << "# " << c << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        }
    }
};

const char* model_name(Model m) { return m == Model::two_matrix ? "two" : "three"; }

std::vector<std::string> param_echo(const RunRequest& r)
{
    std::vector<std::string> c;
    c.push_back(std::string("rmtx ") + command_name(r.command));
    c.push_back("n=" + std::to_string(r.params.n) + " nu=" + std::to_string(r.params.nu) +
                " a=" + format_double(r.params.a));
    if (r.grid)
        c.push_back("grid=" + format_double(r.grid->lo) + ":" + format_double(r.grid->hi) + ":" +
                    std::to_string(r.grid->points));
    switch (r.command) {
    case Command::density_mc:
    case Command::smallest_mc:
        c.push_back(std::string("model=") + model_name(r.mc.model) + " samples=" + std::to_string(r.mc.samples) +
                    " seed=" + std::to_string(r.mc.seed) + " streams=" + std::to_string(r.mc.streams) +
                    " bins=" + std::to_string(r.bins));
        break;
    case Command::split_test:
        c.push_back("samples=" + std::to_string(r.mc.samples) + " seed=" + std::to_string(r.mc.seed));
        break;
    case Command::smallest:
        c.push_back("order=" + std::to_string(r.truncation_order));
        break;
    case Command::suite:
        c.push_back("name=" + r.suite_name);
        break;
    default:
        break;
    }
    return c;
}

Grid grid_or_default(const RunRequest& r)
{
    if (r.grid) return *r.grid;
    return Grid{0.0, default_upper(r.params), 200};
}

std::pair<double, double> range_or_default(const RunRequest& r, bool smallest)
{
    if (r.range) return *r.range;
    const double hi = default_upper(r.params);
    return {0.0, smallest ? hi / 2.0 : hi};
}

void histogram_rows(CsvTable& t, const Histogram& h)
{
    t.columns = {"bin_lo", "bin_hi", "density", "poisson_err"};
    for (int i = 0; i < h.bins; ++i)
        t.add_row({format_double(h.bin_lo(i)), format_double(h.bin_hi(i)), format_double(h.density(i)),
                   format_double(h.poisson_err(i))});
}

// Returns the exit status of the command body.
int execute(const RunRequest& r, CsvTable& t, std::ostream& out, std::ostream& err)
{
    switch (r.command) {
    case Command::density: {
        r.params.validate();
        const Grid g = grid_or_default(r);
        auto cache = transform_cache(r.params);
        t.columns = {"x", "value"};
        for (int i = 0; i < g.points; ++i)
            t.add_row({format_double(g.at(i)), format_double(density_R1(*cache, g.at(i)))});
        return 0;
    }
    case Command::smallest: {
        r.params.validate();
        if (r.truncation_order != 1 && r.truncation_order != 2) throw DomainError("order must be 1 or 2");
        const Grid g = grid_or_default(r);
        auto cache = transform_cache(r.params);
        t.columns = {"x", "value"};
        bool flagged = false;
        for (int i = 0; i < g.points; ++i) {
            const TruncatedValue v = smallest_p1_truncated(*cache, g.at(i), r.truncation_order);
            if (!v.valid && !flagged) {
                t.comments.push_back("truncated expansion negative from x=" + format_double(g.at(i)));
                flagged = true;
            }
            t.add_row({format_double(g.at(i)), format_double(v.value)});
        }
        return 0;
    }
    case Command::density_mc:
    case Command::smallest_mc: {
        SamplerConfig c = r.mc;
        c.params = r.params;
        const bool smallest = r.command == Command::smallest_mc;
        const auto [lo, hi] = range_or_default(r, smallest);
        const Histogram h = smallest ? mc_smallest_histogram(c, lo, hi, r.bins) : mc_density_histogram(c, lo, hi, r.bins);
        t.comments.push_back("range=" + format_double(lo) + ":" + format_double(hi) +
                             " matrices=" + std::to_string(h.matrices) + " in_range=" + std::to_string(h.total_values));
        histogram_rows(t, h);
        return 0;
    }
    case Command::sop: {
        r.params.validate();
        t.columns = {"j", "k", "p_coeff", "q_coeff", "h"};
        for (int j = 0; j < r.params.n; ++j) {
            const SopPair s = make_sop_pair(j, r.params.nu, r.params.a);
            for (int k = 0; k <= s.q.degree(); ++k) {
                const double pk = k <= s.p.degree() ? static_cast<double>(s.p.coeffs[k]) : 0.0;
                t.add_row({std::to_string(j), std::to_string(k), format_double(pk),
                           format_double(static_cast<double>(s.q.coeffs[k])), format_double(s.h)});
            }
        }
        return 0;
    }
    case Command::jpdf_check: {
        r.params.validate();
        const Grid g = r.grid ? *r.grid : Grid{0.1, 2.5, 9};
        auto cache = transform_cache(r.params);
        t.columns = {"x", "kernel", "bruteforce", "abs_diff"};
        double worst = 0.0;
        for (int i = 0; i < g.points; ++i) {
            const double k = density_R1(*cache, g.at(i));
            const double b = corr_Rk_bruteforce(r.params.n, r.params.nu, r.params.a, {g.at(i)});
            worst = std::max(worst, std::abs(k - b));
            t.add_row({format_double(g.at(i)), format_double(k), format_double(b), format_double(std::abs(k - b))});
        }
        if (worst > kJpdfCheckTol) {
            err << "jpdf-check: density_R1 vs brute force: observed " << worst << ", expected <= " << kJpdfCheckTol
                << '\n';
            return kExitValidation;
        }
        return 0;
    }
    case Command::suite: {
        SuiteOptions o;
        if (r.a_explicit) o.a = r.params.a;
        o.seed = r.mc.seed;
        o.streams = r.mc.streams;
        o.samples = r.mc.samples;
        const auto results = run_suite(r.suite_name, o);
        t.columns = {"suite", "check", "observed", "tolerance", "passed"};
        std::ostream& table = r.out_path.empty() ? err : out;
        for (const auto& c : results) {
            t.add_row({c.suite, c.name, format_double(c.observed), format_double(c.tolerance), c.passed ? "1" : "0"});
            table << std::left << std::setw(6) << (c.passed ? "PASS" : "FAIL") << std::setw(64) << c.name
                  << " observed " << std::setw(12) << c.observed << " tolerance " << c.tolerance << '\n';
            if (!c.passed)
                err << c.suite << ": " << c.name << ": observed " << c.observed << ", expected "
                    << (c.name.find("above") != std::string::npos ? "> " : "<= ") << c.tolerance << '\n';
        }
        return all_passed(results) ? 0 : kExitValidation;
    }
    case Command::split_test: {
        r.params.validate();
        CounterRng rng(r.mc.seed, 0);
        const SplitCompare s = mc_split_compare(r.params.n, r.params.nu, r.params.a, r.mc.samples, rng);
        t.columns = {"statistic", "critical_value", "passed"};
        t.add_row({format_double(s.statistic), format_double(s.critical_value), s.passed() ? "1" : "0"});
        if (!s.passed()) {
            err << "split-test: KS statistic observed " << s.statistic << ", expected < " << s.critical_value << '\n';
            return kExitValidation;
        }
        return 0;
    }
    }
    return kExitDomain;
}

void append_metadata(const RunRequest& r, int status, double seconds)
{
    nlohmann::json j;
    j["command"] = command_name(r.command);
    j["params"] = {{"n", r.params.n}, {"nu", r.params.nu}, {"a", r.params.a}};
    if (r.grid) j["grid"] = {{"lo", r.grid->lo}, {"hi", r.grid->hi}, {"points", r.grid->points}};
    if (r.command == Command::density_mc || r.command == Command::smallest_mc || r.command == Command::split_test)
        j["mc"] = {{"model", model_name(r.mc.model)},
                   {"samples", r.mc.samples},
                   {"streams", r.mc.streams},
                   {"bins", r.bins}};
    if (r.command == Command::suite) j["suite"] = r.suite_name;
    j["seed"] = r.mc.seed;
    j["git_describe"] = RMTX_GIT_DESCRIBE;
    j["timings"] = {{"total_seconds", seconds}};
    j["exit_code"] = status;
    j["out"] = r.out_path;
    std::ofstream meta(r.out_path + ".meta.jsonl", std::ios::app);
    meta << j.dump() << '\n';
}

}  // namespace

const char* command_name(Command c)
{
    switch (c) {
    case Command::density: return "density";
    case Command::density_mc: return "density-mc";
    case Command::smallest: return "smallest";
    case Command::smallest_mc: return "smallest-mc";
    case Command::sop: return "sop";
    case Command::jpdf_check: return "jpdf-check";
    case Command::suite: return "suite";
    case Command::split_test: return "split-test";
    }
    return "?";
}

void Grid::validate() const
{
    if (!(lo < hi)) throw DomainError("grid: need lo < hi");
    if (points < 2) throw DomainError("grid: need at least 2 points");
}

Grid parse_grid(const std::string& text)
{
    const auto parts = split_colon(text);
    if (parts.size() != 3) throw DomainError("grid must look like lo:hi:points, got '" + text + "'");
    Grid g;
    g.lo = parse_number(parts[0], "grid lo");
    g.hi = parse_number(parts[1], "grid hi");
    const double pts = parse_number(parts[2], "grid points");
    if (pts != std::floor(pts) || pts > 1e7) throw DomainError("grid points must be an integer");
    g.points = static_cast<int>(pts);
    g.validate();
    return g;
}

std::pair<double, double> parse_range(const std::string& text)
{
    const auto parts = split_colon(text);
    if (parts.size() != 2) throw DomainError("range must look like lo:hi, got '" + text + "'");
    const double lo = parse_number(parts[0], "range lo"), hi = parse_number(parts[1], "range hi");
    if (!(lo < hi)) throw DomainError("range: need lo < hi");
    return {lo, hi};
}

std::string format_double(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

int run(const RunRequest& request, std::ostream& out, std::ostream& err)
{
    const auto t0 = std::chrono::steady_clock::now();
    int status = 0;
    try {
        CsvTable table;
        table.comments = param_echo(request);
        status = execute(request, table, out, err);
        if (request.out_path.empty()) {
            if (request.command != Command::suite) table.write(out);
        } else {
            std::ofstream f(request.out_path);
            if (!f) throw DomainError("cannot open output file '" + request.out_path + "'");
            table.write(f);
            if (!f) throw DomainError("write failed for '" + request.out_path + "'");
        }
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << " (estimate " << e.estimate() << ", error " << e.error() << ")\n";
        status = kExitConvergence;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        status = kExitDomain;
    }
    if (!request.out_path.empty() && status != kExitDomain) {
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        append_metadata(request, status, seconds);
    }
    return status;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spectral statistics of the chGOE-GAOE transition ensemble"};
    app.require_subcommand(1);

    RunRequest req;
    std::string grid_text, range_text, model_text = "two";

    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--n", req.params.n, "number of singular values")->check(CLI::PositiveNumber);
        sub->add_option("--nu", req.params.nu, "parity 0 or 1")->check(CLI::IsMember({0, 1}));
        sub->add_option("--a", req.params.a, "transition parameter a > 0");
        sub->add_option("--out", req.out_path, "output CSV path (stdout if omitted)");
    };
    auto add_grid = [&](CLI::App* sub) { sub->add_option("--grid", grid_text, "lo:hi:points"); };
    auto add_mc = [&](CLI::App* sub) {
        sub->add_option("--model", model_text, "two or three")->check(CLI::IsMember({"two", "three"}));
        sub->add_option("--samples", req.mc.samples, "number of sampled matrices")->check(CLI::PositiveNumber);
        sub->add_option("--bins", req.bins, "histogram bins")->check(CLI::PositiveNumber);
        sub->add_option("--range", range_text, "histogram range lo:hi");
        sub->add_option("--seed", req.mc.seed, "RNG seed");
        sub->add_option("--streams", req.mc.streams, "parallel RNG streams")->check(CLI::PositiveNumber);
    };

    struct Entry {
        Command command;
        const char* help;
    };
    const std::vector<Entry> entries{
        {Command::density, "spectral density R1 on a grid"},
        {Command::density_mc, "Monte Carlo histogram of all singular values"},
        {Command::smallest, "truncated smallest singular value density on a grid"},
        {Command::smallest_mc, "Monte Carlo histogram of the smallest singular value"},
        {Command::sop, "coefficients of the skew-orthogonal polynomials j < n"},
        {Command::jpdf_check, "density R1 against brute-force integration of the joint density"},
        {Command::suite, "run a named validation suite"},
        {Command::split_test, "factorization test at large a"},
    };
    std::vector<std::pair<CLI::App*, Command>> subs;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(command_name(e.command), e.help);
        add_params(sub);
        switch (e.command) {
        case Command::density:
        case Command::jpdf_check:
            add_grid(sub);
            break;
        case Command::smallest:
            add_grid(sub);
            sub->add_option("--order", req.truncation_order, "truncation order 1 or 2")->check(CLI::IsMember({1, 2}));
            break;
        case Command::density_mc:
        case Command::smallest_mc:
            add_mc(sub);
            break;
        case Command::suite: {
            std::vector<std::string> names = suite_names();
            sub->add_option("--name", req.suite_name, "suite name")->required()->check(CLI::IsMember(names));
            sub->add_option("--samples", req.mc.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
            sub->add_option("--seed", req.mc.seed, "RNG seed");
            sub->add_option("--streams", req.mc.streams, "parallel RNG streams")->check(CLI::PositiveNumber);
            break;
        }
        case Command::split_test:
            sub->add_option("--samples", req.mc.samples, "number of sampled matrices")->check(CLI::PositiveNumber);
            sub->add_option("--seed", req.mc.seed, "RNG seed");
            break;
        case Command::sop:
            break;
        }
        subs.emplace_back(sub, e.command);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        const CLI::App* usage = &app;
        for (const auto& [sub, cmd] : subs)
            if (sub->parsed()) usage = sub;
        err << usage->help();
        return kExitDomain;
    }

    for (const auto& [sub, cmd] : subs)
        if (sub->parsed()) req.command = cmd;

    bool a_given = false;
    for (const auto& [sub, cmd] : subs)
        if (sub->parsed() && sub->count("--a") > 0) a_given = true;

    try {
        if (!grid_text.empty()) req.grid = parse_grid(grid_text);
        if (!range_text.empty()) req.range = parse_range(range_text);
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    }
    req.mc.model = model_text == "three" ? Model::three_matrix : Model::two_matrix;
    req.a_explicit = a_given;
    return run(req, out, err);
}

}  // namespace rmtx::cli
