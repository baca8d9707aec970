#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

const std::string kCli = CUNTZ_CLI;
const std::filesystem::path kBanks = std::filesystem::path(CUNTZ_DATA_DIR) / "banks";
const std::filesystem::path kIfs = std::filesystem::path(CUNTZ_DATA_DIR) / "ifs";

struct Result {
    int code;
    std::string out;
};

/// Runs the CLI, capturing stdout; stderr is discarded.
Result run(const std::string& args)
{
    const std::string cmd = kCli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string bank(const char* name) { return (kBanks / name).string(); }

std::vector<std::vector<double>> parse_csv(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_CASE("verify")
{
    CHECK(run("verify " + bank("haar_N2.json")).code == 0);
    for (const char* b : {"monomial_N2.json", "shift_N2.json", "dft_N2.json", "dft_N3.json"})
        CHECK(run(std::string("verify ") + bank(b)).code == 0);
    const auto broken = run("verify " + bank("broken_N2.json"));
    CHECK(broken.code == 1);
    CHECK(nlohmann::json::parse(broken.out)["pass"] == false);
    CHECK(run("verify missing.json").code == 2);
    CHECK(run("verify").code == 2);
    CHECK(run("frobnicate").code == 2);
}

TEST_CASE("measure")
{
    CHECK(run("measure " + bank("monomial_N2.json") + " --f e0 --k 6").out == "x,w\n0,1\n");
    const auto haar = run("measure " + bank("haar_N2.json") + " --f e0 --k 3");
    CHECK(haar.code == 0);
    const auto rows = parse_csv(haar.out);
    REQUIRE(rows.size() == 8);
    for (std::size_t j = 0; j < 8; ++j) {
        CHECK(rows[j][0] == j / 8.0);
        CHECK(rows[j][1] == doctest::Approx(0.125).epsilon(1e-14));
    }
    CHECK(run("measure " + bank("shift_N2.json") + " --f e1 --k 3").out == "x,w\n0.5,1\n");

    const auto j = nlohmann::json::parse(run("measure " + bank("dft_N3.json") + " --f e0 --k 2 --format json").out);
    CHECK(j["atoms"].size() == 9);

    CHECK(run("measure " + bank("haar_N2.json") + " --f e0 --k 25").code == 1);
    CHECK(run("measure " + bank("haar_N2.json") + " --f e0 --k 5 --cap 16").code == 1);
    CHECK(run("measure " + bank("haar_N2.json") + " --f x0 --k 2").code == 2);
}

TEST_CASE("measure with a coefficient file is normalized")
{
    const auto path = std::filesystem::temp_directory_path() / "cuntz_cli_vec.json";
    {
        FILE* f = std::fopen(path.c_str(), "w");
        std::fputs(R"([{"n": 0, "re": 3, "im": 0}, {"n": 1, "re": 0, "im": 4}])", f);
        std::fclose(f);
    }
    const auto r = run("measure " + bank("haar_N2.json") + " --f @" + path.string() + " --k 4");
    CHECK(r.code == 0);
    double mass = 0;
    for (const auto& row : parse_csv(r.out))
        mass += row[1];
    CHECK(mass == doctest::Approx(1.0));
    std::filesystem::remove(path);
}

TEST_CASE("fourier matches the Lebesgue transform within the certified bound")
{
    const auto r = run("fourier " + bank("haar_N2.json") + " --f e0 --k 6 --t 0:10:11");
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 11);
    for (const auto& row : rows) {
        const double t = row[0];
        const std::complex<double> ref = t == 0 ? 1.0 : (std::exp(std::complex<double>(0, t)) - 1.0) / std::complex<double>(0, t);
        CHECK(std::abs(std::complex<double>(row[1], row[2]) - ref) <= std::abs(t) * std::pow(2.0, -6) + 1e-12);
    }
    CHECK(run("fourier " + bank("haar_N2.json") + " --f e0 --k 2 --t 0:1").code == 2);
}

TEST_CASE("cdf")
{
    const auto rows = parse_csv(run("cdf " + bank("haar_N2.json") + " --f e0 --k 2").out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[3][1] == doctest::Approx(1.0));
    CHECK(rows[0][1] == doctest::Approx(0.25));
}

TEST_CASE("ifs")
{
    const auto j = nlohmann::json::parse(run("ifs " + (kIfs / "cantor.json").string() + " --k 10 --moments 2 --format json").out);
    const double mean = j["moments"][1], second = j["moments"][2];
    CHECK(std::abs(mean - 0.5) < 1e-4);
    CHECK(std::abs(second - mean * mean - 0.125) < 1e-4);

    const std::string chaos = "ifs " + (kIfs / "cantor.json").string() + " --chaos 20000 --seed 42";
    const auto a = run(chaos), b = run(chaos);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(run("ifs missing.json --k 2").code == 2);
}

TEST_CASE("diagnose")
{
    const auto shift = run("diagnose " + bank("shift_N2.json") + " --f e0 --k 4");
    CHECK(shift.code == 1);
    const auto j = nlohmann::json::parse(shift.out);
    CHECK(j["branches"][1]["verdict"] == "VIOLATED");
    CHECK(run("diagnose " + bank("haar_N2.json") + " --f e0 --k 4").code == 0);
}

TEST_CASE("outputs are byte-identical and written atomically")
{
    const auto dir = std::filesystem::temp_directory_path() / "cuntz_cli_out";
    std::filesystem::create_directories(dir);
    const auto p1 = (dir / "a.csv").string(), p2 = (dir / "b.csv").string();
    CHECK(run("measure " + bank("dft_N3.json") + " --f e2 --k 4 --out " + p1).code == 0);
    CHECK(run("measure " + bank("dft_N3.json") + " --f e2 --k 4 --out " + p2).code == 0);
    std::ostringstream s1, s2;
    s1 << std::ifstream(p1).rdbuf();
    s2 << std::ifstream(p2).rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().rfind("x,w\n", 0) == 0);
    CHECK(run("measure " + bank("dft_N3.json") + " --f e2 --k 4 --out " + (dir / "nope" / "c.csv").string()).code == 2);
    std::filesystem::remove_all(dir);
}
