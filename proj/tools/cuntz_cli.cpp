// cuntz: command-line front end for filter-bank representations, their
// cylinder measures, and affine IFS Hutchinson measures.
//
// Exit codes: 0 ok, 1 domain failure (relation violated, cap exceeded,
// VIOLATED verdict, bad parameters), 2 usage or I/O error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuntz/cuntz.hpp"
#include "cuntz/io.hpp"

namespace {

using namespace cuntz;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

constexpr double kVerifyTolerance = 1e-9;

/// Error in a command's own arguments (as opposed to a library domain error).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Output {
    std::string path;
    std::string format = "csv";

    void emit(const std::string& content) const
    {
        if (path.empty())
            std::cout << content;
        else
            io::write_atomically(path, content);
    }
};

void add_output_options(CLI::App* cmd, Output& out)
{
    cmd->add_option("--out", out.path, "Output file (default: standard output)");
    cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

/// `e<n>` for the basis vector z^n, `@file.json` for a coefficient list.
LaurentPolyd parse_vector(const std::string& text)
{
    LaurentPolyd f;
    if (text.size() > 1 && text[0] == 'e') {
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(text.substr(1), &used);
        } catch (const std::exception&) {
            throw UsageError("bad vector argument '" + text + "'");
        }
        if (used != text.size() - 1)
            throw UsageError("bad vector argument '" + text + "'");
        f = LaurentPolyd::monomial(n);
    } else if (text.size() > 1 && text[0] == '@') {
        f = io::load_poly(text.substr(1));
    } else {
        throw UsageError("vector argument must be e<n> or @file.json, got '" + text + "'");
    }
    const double nrm = norm(f);
    if (nrm == 0.0)
        throw std::invalid_argument("vector is zero");
    if (std::abs(nrm - 1.0) > 1e-12) {
        std::cerr << "warning: normalizing vector with norm " << io::format_number(nrm) << "\n";
        f = scale(f, std::complex<double>(1.0 / nrm));
    }
    return f;
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(item);
    if (parts.size() != 3)
        throw UsageError("t-grid must be start:stop:count, got '" + text + "'");
    double start = 0, stop = 0;
    long count = 0;
    try {
        start = std::stod(parts[0]);
        stop = std::stod(parts[1]);
        count = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw UsageError("bad t-grid '" + text + "'");
    }
    if (count < 1)
        throw UsageError("t-grid count must be >= 1");
    std::vector<double> t(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
        t[static_cast<std::size_t>(i)] =
            count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    return t;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct MeasureArgs {
    std::string bank;
    std::string f = "e0";
    int k = 0;
    std::uint64_t cap = kDefaultWordCap;
    Output out;
};

void add_measure_args(CLI::App* cmd, MeasureArgs& a)
{
    cmd->add_option("bank", a.bank, "Filter-bank JSON file")->required();
    cmd->add_option("--f", a.f, "Vector: e<n> or @coeffs.json")->capture_default_str();
    cmd->add_option("--k", a.k, "Depth")->required()->check(CLI::NonNegativeNumber);
    cmd->add_option("--cap", a.cap, "Maximum number of enumerated words")->capture_default_str();
    add_output_options(cmd, a.out);
}

int run_verify(const std::string& bank_path, int samples, int degree, const Output& out)
{
    const auto bank = io::load_bank(bank_path);
    const double unitarity = check_unitarity(bank, samples);
    const auto cuntz = verify_cuntz(bank, degree);
    const bool pass = unitarity <= kVerifyTolerance && cuntz.max() <= kVerifyTolerance;
    const json rep{{"N", bank.N()},
                   {"samples", samples},
                   {"degree_bound", degree},
                   {"unitarity_residual", unitarity},
                   {"isometry_residual", cuntz.isometry},
                   {"completeness_residual", cuntz.completeness},
                   {"tolerance", kVerifyTolerance},
                   {"pass", pass}};
    if (out.format == "json")
        out.emit(dump(rep));
    else
        out.emit("unitarity,isometry,completeness,pass\n" + io::format_number(unitarity) + "," +
                 io::format_number(cuntz.isometry) + "," + io::format_number(cuntz.completeness) + "," +
                 (pass ? "1" : "0") + "\n");
    std::cerr << "verify: unitarity=" << io::format_number(unitarity) << " isometry=" << io::format_number(cuntz.isometry)
              << " completeness=" << io::format_number(cuntz.completeness) << (pass ? " PASS" : " FAIL") << "\n";
    return pass ? kExitOk : kExitDomain;
}

int run_measure(const MeasureArgs& a)
{
    const auto bank = io::load_bank(a.bank);
    const auto f = parse_vector(a.f);
    const auto mu = approx_measure(bank, f, a.k, a.cap);
    a.out.emit(a.out.format == "json" ? dump(io::to_json(mu)) : io::measure_csv(mu));
    std::cerr << "measure: " << mu.size() << " atoms, total mass " << io::format_number(mu.total_mass()) << "\n";
    return kExitOk;
}

int run_fourier(const MeasureArgs& a, const std::string& grid)
{
    const auto bank = io::load_bank(a.bank);
    const auto f = parse_vector(a.f);
    const auto t = parse_grid(grid);
    const auto mu = approx_measure(bank, f, a.k, a.cap);
    std::vector<std::complex<double>> values;
    for (double s : t)
        values.push_back(fourier(mu, s));
    if (a.out.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < t.size(); ++i)
            rows.push_back({{"t", t[i]}, {"re", values[i].real()}, {"im", values[i].imag()}});
        a.out.emit(dump({{"depth", a.k}, {"samples", rows}}));
    } else {
        a.out.emit(io::fourier_csv(t, values));
    }
    std::cerr << "fourier: " << t.size() << " samples at depth " << a.k << ", error bound |t|*"
              << io::format_number(std::pow(static_cast<double>(bank.N()), -a.k)) << "\n";
    return kExitOk;
}

int run_cdf(const MeasureArgs& a)
{
    const auto bank = io::load_bank(a.bank);
    const auto f = parse_vector(a.f);
    const auto mu = approx_measure(bank, f, a.k, a.cap);
    std::vector<double> x, F;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        x.push_back(mu.point(i));
        F.push_back(cdf(mu, mu.point(i)));
    }
    if (a.out.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < x.size(); ++i)
            rows.push_back({{"x", x[i]}, {"F", F[i]}});
        a.out.emit(dump({{"depth", a.k}, {"cdf", rows}}));
    } else {
        a.out.emit(io::cdf_csv(x, F));
    }
    std::cerr << "cdf: " << x.size() << " jump points at depth " << a.k << "\n";
    return kExitOk;
}

struct IfsArgs {
    std::string ifs;
    int k = 0;
    std::optional<std::size_t> chaos;
    std::uint64_t seed = 0;
    int moments = 2;
    std::uint64_t cap = kDefaultWordCap;
    Output out;
};

int run_ifs(const IfsArgs& a)
{
    const auto ifs = io::load_ifs(a.ifs);
    const auto mu = a.chaos ? chaos_game(ifs, a.seed, *a.chaos)
                            : hutchinson_iterate(ifs, AtomicMeasured::dirac(0.0), a.k, a.cap);
    std::vector<double> m;
    for (int r = 0; r <= a.moments; ++r)
        m.push_back(moments(mu, r));
    if (a.out.format == "json") {
        json j = io::to_json(mu);
        j["moments"] = m;
        j["mode"] = a.chaos ? "chaos" : "deterministic";
        a.out.emit(dump(j));
    } else {
        a.out.emit(io::measure_csv(mu));
    }
    std::cerr << "ifs: " << (a.chaos ? "chaos game" : "deterministic") << ", " << mu.size() << " atoms";
    for (int r = 1; r <= a.moments; ++r)
        std::cerr << " m" << r << "=" << io::format_number(m[static_cast<std::size_t>(r)]);
    if (a.moments >= 2)
        std::cerr << " variance=" << io::format_number(m[2] - m[1] * m[1]);
    std::cerr << "\n";
    return kExitOk;
}

int run_diagnose(const MeasureArgs& a, double tau_mass, double tau_null)
{
    const auto bank = io::load_bank(a.bank);
    const auto f = parse_vector(a.f);
    const auto rep = cyclicity_test(bank, f, a.k, tau_mass, tau_null, a.cap);
    a.out.emit(dump(io::to_json(rep)));
    std::cerr << "diagnose:";
    for (const auto& b : rep.branches)
        std::cerr << " branch " << b.branch << " " << to_string(b.verdict);
    std::cerr << "\n";
    return rep.all_consistent() ? kExitOk : kExitDomain;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cuntz-algebra filter-bank measures and IFS Hutchinson measures"};
    app.require_subcommand(1);

    std::string verify_bank;
    int samples = 257, degree = 64;
    Output verify_out;
    verify_out.format = "json";
    auto* verify = app.add_subcommand("verify", "Check unitarity and the Cuntz relations of a filter bank");
    verify->add_option("bank", verify_bank, "Filter-bank JSON file")->required();
    verify->add_option("--samples", samples, "Torus sample points")->capture_default_str()->check(CLI::PositiveNumber);
    verify->add_option("--degree", degree, "Check basis vectors e_n with |n| <= degree")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    add_output_options(verify, verify_out);

    MeasureArgs measure_args;
    auto* measure = app.add_subcommand("measure", "Atomic approximation mu_f^(k)");
    add_measure_args(measure, measure_args);

    MeasureArgs fourier_args;
    std::string grid = "0:10:11";
    auto* fourier_cmd = app.add_subcommand("fourier", "Fourier transform of mu_f^(k) on a t-grid");
    add_measure_args(fourier_cmd, fourier_args);
    fourier_cmd->add_option("--t", grid, "Grid start:stop:count")->capture_default_str();

    MeasureArgs cdf_args;
    auto* cdf_cmd = app.add_subcommand("cdf", "Distribution function of mu_f^(k) at its atoms");
    add_measure_args(cdf_cmd, cdf_args);

    IfsArgs ifs_args;
    auto* ifs_cmd = app.add_subcommand("ifs", "Hutchinson measure of an affine IFS");
    ifs_cmd->add_option("ifs", ifs_args.ifs, "IFS JSON file")->required();
    ifs_cmd->add_option("--k", ifs_args.k, "Deterministic iteration depth from delta_0")->check(CLI::NonNegativeNumber);
    ifs_cmd->add_option("--chaos", ifs_args.chaos, "Run the chaos game with this many samples instead");
    ifs_cmd->add_option("--seed", ifs_args.seed, "Chaos game seed")->capture_default_str();
    ifs_cmd->add_option("--moments", ifs_args.moments, "Highest moment order to report")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    ifs_cmd->add_option("--cap", ifs_args.cap, "Maximum number of atoms")->capture_default_str();
    add_output_options(ifs_cmd, ifs_args.out);

    MeasureArgs diag_args;
    diag_args.out.format = "json";
    double tau_mass = kDefaultTauMass, tau_null = kDefaultTauNull;
    auto* diagnose = app.add_subcommand("diagnose", "Finite-depth absolute-continuity (cyclicity) test");
    add_measure_args(diagnose, diag_args);
    diagnose->add_option("--tau-mass", tau_mass, "Pushforward mass threshold")->capture_default_str();
    diagnose->add_option("--tau-null", tau_null, "Base null threshold")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify)
            return run_verify(verify_bank, samples, degree, verify_out);
        if (*measure)
            return run_measure(measure_args);
        if (*fourier_cmd)
            return run_fourier(fourier_args, grid);
        if (*cdf_cmd)
            return run_cdf(cdf_args);
        if (*ifs_cmd)
            return run_ifs(ifs_args);
        if (*diagnose)
            return run_diagnose(diag_args, tau_mass, tau_null);
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceLimit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
