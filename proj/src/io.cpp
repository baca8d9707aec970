#include "cuntz/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace cuntz::io {

namespace {

template <typename T>
T get_field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw IoError(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw IoError(std::string("bad field \"") + key + "\": " + e.what());
    }
}

} // namespace

json to_json(const LaurentPolyd& f)
{
    json out = json::array();
    for (int n : f.support()) {
        const auto c = f.coeff(n);
        out.push_back({{"n", n}, {"re", c.real()}, {"im", c.imag()}});
    }
    return out;
}

LaurentPolyd poly_from_json(const json& j)
{
    if (!j.is_array())
        throw IoError("Laurent polynomial must be a JSON array");
    std::map<int, std::complex<double>> terms;
    for (const auto& t : j) {
        const int n = get_field<int>(t, "n");
        const double re = get_field<double>(t, "re");
        const double im = t.contains("im") ? get_field<double>(t, "im") : 0.0;
        terms[n] += std::complex<double>(re, im);
    }
    if (terms.empty())
        return {};
    const int lo = terms.begin()->first;
    const int hi = terms.rbegin()->first;
    std::vector<std::complex<double>> dense(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [n, c] : terms)
        dense[static_cast<std::size_t>(n - lo)] = c;
    try {
        return LaurentPolyd(lo, dense);
    } catch (const std::invalid_argument& e) {
        throw IoError(e.what());
    }
}

json to_json(const FilterBankd& bank)
{
    json filters = json::array();
    for (const auto& m : bank.filters())
        filters.push_back(to_json(m));
    return {{"N", bank.N()}, {"filters", filters}};
}

FilterBankd bank_from_json(const json& j)
{
    const int N = get_field<int>(j, "N");
    if (!j.contains("filters") || !j.at("filters").is_array())
        throw IoError("filter bank needs a \"filters\" array");
    std::vector<LaurentPolyd> filters;
    for (const auto& f : j.at("filters"))
        filters.push_back(poly_from_json(f));
    try {
        return FilterBankd(N, std::move(filters));
    } catch (const std::invalid_argument& e) {
        throw IoError(e.what());
    }
}

json to_json(const AffineIFSd& ifs)
{
    json maps = json::array();
    for (const auto& m : ifs.maps())
        maps.push_back({{"a", m.a}, {"b", m.b}});
    return {{"maps", maps}, {"probs", ifs.probs()}};
}

AffineIFSd ifs_from_json(const json& j)
{
    if (!j.contains("maps") || !j.at("maps").is_array())
        throw IoError("IFS needs a \"maps\" array");
    std::vector<AffineMap<double>> maps;
    try {
        for (const auto& m : j.at("maps"))
            maps.emplace_back(get_field<double>(m, "a"), get_field<double>(m, "b"));
        if (!j.contains("probs"))
            return AffineIFSd(std::move(maps));
        return AffineIFSd(std::move(maps), get_field<std::vector<double>>(j, "probs"));
    } catch (const std::invalid_argument& e) {
        throw IoError(e.what());
    }
}

json to_json(const AtomicMeasured& m)
{
    json atoms = json::array();
    for (const auto& a : m.atoms())
        atoms.push_back({{"x", a.x}, {"w", a.w}});
    return {{"atoms", atoms}, {"total_mass", m.total_mass()}};
}

AtomicMeasured measure_from_json(const json& j)
{
    if (!j.contains("atoms") || !j.at("atoms").is_array())
        throw IoError("measure needs an \"atoms\" array");
    std::vector<Atom<double>> atoms;
    for (const auto& a : j.at("atoms"))
        atoms.push_back({get_field<double>(a, "x"), get_field<double>(a, "w")});
    try {
        return AtomicMeasured(std::move(atoms));
    } catch (const std::invalid_argument& e) {
        throw IoError(e.what());
    }
}

json to_json(const CyclicityReport<double>& rep)
{
    json branches = json::array();
    for (const auto& b : rep.branches) {
        json cells = json::array();
        for (const auto& w : b.offending_cells)
            cells.push_back(w.letters());
        branches.push_back({{"branch", b.branch},
                            {"verdict", to_string(b.verdict)},
                            {"offending_cells", cells},
                            {"identity_residual", b.identity_residual}});
    }
    return {{"depth", rep.depth},
            {"tau_mass", rep.tau_mass},
            {"tau_null", rep.tau_null},
            {"all_consistent", rep.all_consistent()},
            {"branches", branches}};
}

std::string format_number(double v)
{
    if (v == 0.0)
        v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string measure_csv(const AtomicMeasured& m)
{
    std::string out = "x,w\n";
    for (Eigen::Index i = 0; i < m.size(); ++i)
        out += format_number(m.point(i)) + "," + format_number(m.weight(i)) + "\n";
    return out;
}

std::string fourier_csv(const std::vector<double>& t, const std::vector<std::complex<double>>& values)
{
    std::string out = "t,re,im\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        out += format_number(t[i]) + "," + format_number(values[i].real()) + "," + format_number(values[i].imag()) + "\n";
    return out;
}

std::string cdf_csv(const std::vector<double>& x, const std::vector<double>& F)
{
    std::string out = "x,F\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out += format_number(x[i]) + "," + format_number(F[i]) + "\n";
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_atomically(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        out << content;
        if (!out.flush())
            throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

FilterBankd load_bank(const std::filesystem::path& path)
{
    try {
        return bank_from_json(read_json(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

AffineIFSd load_ifs(const std::filesystem::path& path)
{
    try {
        return ifs_from_json(read_json(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

LaurentPolyd load_poly(const std::filesystem::path& path)
{
    try {
        return poly_from_json(read_json(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

} // namespace cuntz::io
