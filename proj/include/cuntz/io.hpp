#pragma once

#include <complex>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "diagnostics.hpp"
#include "filter_bank.hpp"
#include "ifs.hpp"
#include "measure.hpp"

namespace cuntz::io {

/// Unreadable file or malformed content.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using nlohmann::json;

// LaurentPoly: [{"n": int, "re": float, "im": float}, ...] sorted by n.
json to_json(const LaurentPolyd& f);
LaurentPolyd poly_from_json(const json& j);

// Filter bank: {"N": int, "filters": [poly, ...]}
json to_json(const FilterBankd& bank);
FilterBankd bank_from_json(const json& j);

// IFS: {"maps": [{"a": float, "b": float}, ...], "probs": [float, ...]}
json to_json(const AffineIFSd& ifs);
AffineIFSd ifs_from_json(const json& j);

// Measure: {"atoms": [{"x": float, "w": float}, ...], "total_mass": float}
json to_json(const AtomicMeasured& m);
AtomicMeasured measure_from_json(const json& j);

json to_json(const CyclicityReport<double>& rep);

/// Header `x,w`, one row per atom, 15 significant digits.
std::string measure_csv(const AtomicMeasured& m);
/// Header `t,re,im`.
std::string fourier_csv(const std::vector<double>& t, const std::vector<std::complex<double>>& values);
/// Header `x,F`.
std::string cdf_csv(const std::vector<double>& x, const std::vector<double>& F);

/// printf("%.15g"), with -0 printed as 0.
std::string format_number(double v);

std::string read_file(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& content);

FilterBankd load_bank(const std::filesystem::path& path);
AffineIFSd load_ifs(const std::filesystem::path& path);
LaurentPolyd load_poly(const std::filesystem::path& path);

} // namespace cuntz::io
