#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Result run(const std::string& args)
{
    const auto err_path = std::filesystem::temp_directory_path() / "affiter_cli_test.err";
    const std::string cmd = std::string(AFFITER_CLI) + " " + args + " 2>" + err_path.string();
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_path);
    std::filesystem::remove(err_path);
    return r;
}

std::vector<std::vector<std::string>> data_rows(const std::string& csv)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    bool header = false;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        rows.push_back(f);
    }
    return rows;
}

std::string without_timing(const std::string& csv)
{
    std::string out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        out += (line.empty() || line[0] == '#' || line.rfind("strategy,", 0) == 0) ? line : line.substr(0, line.rfind(','));
    return out;
}

void usage_error(const std::string& args)
{
    CAPTURE(args);
    const Result r = run(args);
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
}

} // namespace

TEST_CASE("toy reproduces the width table")
{
    const Result r = run("toy --iters 10 --strategies naive");
    REQUIRE(r.code == 0);
    const double table[] = {0.1000, 0.1941, 0.4535, 1.0051, 2.2313, 4.9350, 10.905, 24.085, 53.182, 117.42};
    const auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 11);
    // Component 2 has the largest radius and leads component 1 by one step
    // (x1 <- x2), so the doubled rad_inf at row n is the table entry for n + 1.
    for (std::size_t n = 0; n < 10; ++n) {
        CHECK(rows[n][0] == "naive");
        CHECK(std::stod(rows[n][1]) == static_cast<double>(n));
        CHECK(2 * std::stod(rows[n][2]) == doctest::Approx(table[n]).epsilon(5e-4));
    }
}

TEST_CASE("run emits every strategy")
{
    const Result r = run("run --dim 10 --cond well --scale well --seed 1 --iters 60");
    REQUIRE(r.code == 0);
    std::map<std::string, std::size_t> count;
    for (const auto& row : data_rows(r.out)) ++count[row[0]];
    CHECK(count.size() == 7);
    for (const char* s : {"naive", "qr", "svd_u", "svd_v", "lohner", "affine"}) CHECK(count[s] == 61);
    const auto pos = r.out.find("# kstep_k=");
    REQUIRE(pos != std::string::npos);
    const std::size_t k = std::stoul(r.out.substr(pos + 10));
    CHECK(count["kstep"] == 60 / k + 1);

    const Result again = run("run --dim 10 --cond well --scale well --seed 1 --iters 60");
    CHECK(without_timing(again.out) == without_timing(r.out));
}

TEST_CASE("bound dominates the toy widths")
{
    const Result b = run("bound --target toy --basis identity --iters 100");
    const Result t = run("toy --iters 100 --strategies naive");
    REQUIRE(b.code == 0);
    REQUIRE(t.code == 0);
    const auto bound = data_rows(b.out), naive = data_rows(t.out);
    REQUIRE(bound.size() == 101);
    REQUIRE(naive.size() == 101);
    // Columns: iter, general_inf, general_2, orthogonal_inf, orthogonal_2.
    for (std::size_t k = 0; k <= 100; ++k) CHECK(2 * std::stod(naive[k][3]) <= std::stod(bound[k][2]));

    const Result e = run("bound --target toy --basis eigen --iters 5");
    REQUIRE(e.code == 0);
    CHECK(e.out.find("iter,eigen_2,nedialkov_jackson") != std::string::npos);
    CHECK(e.out.find("# eigen_2=grows") != std::string::npos);
}

TEST_CASE("bench")
{
    const Result r = run("bench --reps 1 --dim 4 --iters 5");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("strategy,class,dim,reps,mean_ns\n", 0) == 0);
    CHECK(data_rows(r.out).size() == 7 * 4);
    const Result one = run("bench --reps 2 --dim 4 --iters 5 --cond ill --scale well --strategies naive,affine");
    REQUIRE(one.code == 0);
    const auto rows = data_rows(one.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][1] == "ill/well");
    CHECK(rows[0][3] == "2");
}

TEST_CASE("output file")
{
    const auto path = std::filesystem::temp_directory_path() / "affiter_cli_test.csv";
    const Result r = run("toy --iters 3 --strategies naive,affine --out " + path.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const std::string csv = slurp(path);
    std::filesystem::remove(path);
    CHECK(data_rows(csv).size() == 8);
}

TEST_CASE("usage errors exit 1 without output")
{
    usage_error("");
    usage_error("toy");
    usage_error("toy --iters 10 --strategies brute");
    usage_error("toy --iters 10 --rigor exact");
    usage_error("toy --iters 10 --bogus");
    usage_error("run --dim 10 --cond well --scale well --iters 5");
    usage_error("run --dim 10 --cond medium --scale well --seed 1 --iters 5");
    usage_error("run --dim 1 --cond well --scale well --seed 1 --iters 5");
    usage_error("toy --iters 0");
    usage_error("toy --iters 5 --x0-radius -1");
    usage_error("bench --dim 4");
    usage_error("bound --target run --basis eigen --dim 4 --cond well --scale well --seed 1");
    usage_error("bound --target run --basis qr");
    usage_error("frobnicate");
}

TEST_CASE("numerical failures exit 2")
{
    const Result gen = run("run --dim 10 --cond ill --scale well --seed 5 --iters 3");
    CHECK(gen.code == 2);
    CHECK(gen.out.empty());
    CHECK(gen.err.find("regime") != std::string::npos);

    // A failing strategy still yields the CSV of the others.
    const Result k = run("toy --iters 3 --kmax 1");
    CHECK(k.code == 2);
    CHECK(k.out.find("# failed=kstep: ") != std::string::npos);
    CHECK(data_rows(k.out).size() == 6 * 4);
}

TEST_CASE("successful runs keep stderr empty")
{
    CHECK(run("toy --iters 2 --strategies naive").err.empty());
    CHECK(run("bound --target toy --basis qr --iters 2").err.empty());
}
