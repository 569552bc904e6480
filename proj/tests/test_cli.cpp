#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

// Runs the tool with stderr folded into stdout.
RunResult run_tool(const std::string& args) {
    const std::string cmd = std::string(QZETA_TOOL_PATH) + " " + args + " 2>&1";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string data_row(const std::string& output) {
    std::string last;
    size_t pos = 0;
    while (pos < output.size()) {
        size_t end = output.find('\n', pos);
        if (end == std::string::npos) end = output.size();
        const std::string line = output.substr(pos, end - pos);
        if (!line.empty() && line[0] != '#' && line.find_first_of("0123456789-") == 0)
            last = line;
        pos = end + 1;
    }
    return last;
}

void write_chi4(const std::string& path) {
    std::ofstream f(path);
    f << "4\n1 1 0\n3 -1 0\n";
}

} // namespace

TEST_CASE("eval: realness, values, and the pole exit code") {
    const auto real_axis = run_tool("eval --kind zeta --nu 1 --q 0.5 --s -0.5,0");
    CHECK(real_axis.exit_code == 0);
    const std::string row = data_row(real_axis.output);
    const size_t comma = row.find(',');
    REQUIRE(comma != std::string::npos);
    const double im = std::stod(row.substr(comma + 1));
    CHECK(std::abs(im) < 1e-12);

    const auto at_zero = run_tool("eval --kind zeta --nu 1 --q 0.5 --s 0,0");
    CHECK(at_zero.exit_code == 0);
    CHECK(std::stod(data_row(at_zero.output)) == doctest::Approx(-0.557304).epsilon(1e-5));

    const auto pole = run_tool("eval --kind zeta --nu 1 --q 0.5 --s 1,0");
    CHECK(pole.exit_code == 3);

    const auto bad_flag = run_tool("eval --kind nonsense");
    CHECK(bad_flag.exit_code == 2);
    const auto no_subcommand = run_tool("");
    CHECK(no_subcommand.exit_code == 2);
}

TEST_CASE("eval: em strategy reports a certified bound") {
    const auto em = run_tool("eval --kind zeta --nu 1 --q 0.5 --s -2,0 --strategy em");
    CHECK(em.exit_code == 0);
    const std::string row = data_row(em.output);
    // Columns: re,im,bound,strategy,terms; the bound must be present
    // and below the default target.
    size_t p1 = row.find(','), p2 = row.find(',', p1 + 1), p3 = row.find(',', p2 + 1);
    REQUIRE(p3 != std::string::npos);
    const double bound = std::stod(row.substr(p2 + 1, p3 - p2 - 1));
    CHECK(bound > 0.0);
    CHECK(bound < 1e-5);
}

TEST_CASE("eval with a character file") {
    const std::string chi_path = "cli_chi4.txt";
    write_chi4(chi_path);
    const auto r = run_tool("eval --kind L --nu 1 --q 0.5 --s 1,0 --chi " + chi_path);
    CHECK(r.exit_code == 0);
    CHECK(std::stod(data_row(r.output)) == doctest::Approx(0.69154650178).epsilon(1e-9));
    std::remove(chi_path.c_str());
}

TEST_CASE("determinism: identical invocations emit identical bytes") {
    const std::string args = "eval --kind zeta --nu 2 --q 0.37 --s -1.25,0.5";
    const auto a = run_tool(args);
    const auto b = run_tool(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);

    const std::string sched_path = "cli_sched.txt";
    {
        std::ofstream f(sched_path);
        f << "0.99\n0.95\n0.9\n";
    }
    const std::string targs = "trajectory --origin trivial:1 --nu 1 --schedule " + sched_path;
    const auto t1 = run_tool(targs);
    const auto t2 = run_tool(targs);
    CHECK(t1.exit_code == 0);
    CHECK(t1.output == t2.output);
    std::remove(sched_path.c_str());
}

TEST_CASE("trajectory output shape and classifier trailer") {
    const std::string sched_path = "cli_sched2.txt";
    {
        std::ofstream f(sched_path);
        f << "0.99\n0.95\n0.9\n0.85\n";
    }
    const auto r =
        run_tool("trajectory --origin trivial:1 --nu 1 --schedule " + sched_path);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("q,re_s,im_s,residual,status,newton_iters,slope_estimate") !=
          std::string::npos);
    CHECK(r.output.find("CONVERGED") != std::string::npos);
    CHECK(r.output.find("# classifier") != std::string::npos);
    std::remove(sched_path.c_str());
}

TEST_CASE("scan modes") {
    const auto cands = run_tool(
        "scan --mode candidates --q 0.99 --nu 1 --rect -0.5,13.5,1.5,14.5 --grid 30,20");
    CHECK(cands.exit_code == 0);
    CHECK(cands.output.find("ix,iy,center_re,center_im") != std::string::npos);
    CHECK(!data_row(cands.output).empty()); // one refined zero near rho_1

    const auto clipped =
        run_tool("scan --mode candidates --q 0.99 --nu 1 --rect 3,0,5,10 --grid 10,10");
    CHECK(clipped.exit_code == 0);
    CHECK(clipped.output.find("warning: rect clipped") != std::string::npos);

    const auto field = run_tool("scan --mode field --q 0.5 --nu 1 --rect -2,0,0,1 --grid 4,3");
    CHECK(field.exit_code == 0);
    int rows = 0;
    size_t pos = 0;
    while (pos < field.output.size()) {
        size_t end = field.output.find('\n', pos);
        if (end == std::string::npos) end = field.output.size();
        if (field.output[pos] != '#') ++rows;
        pos = end + 1;
    }
    CHECK(rows == 3); // ny data rows

    const auto bad = run_tool("scan --rect 1,2,3 --q 0.5");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("crystal, special, and compare-classical") {
    const auto crystal = run_tool("crystal --nu 1 --s 0.5,3");
    CHECK(crystal.exit_code == 0);
    CHECK(std::stod(data_row(crystal.output)) == doctest::Approx(-1.0));

    const auto special = run_tool("special --m 1 --nu 1 --q 0.999");
    CHECK(special.exit_code == 0);
    CHECK(std::abs(std::stod(data_row(special.output)) - (-1.0 / 12.0)) < 0.01);

    const auto cmp = run_tool(
        "compare-classical --kind zeta --nu 1 --s 2,0 --q-list 0.9,0.99,0.999");
    CHECK(cmp.exit_code == 0);
    // The abs_err column (last) must strictly decrease.
    double prev = 1e300;
    int seen = 0;
    size_t pos = 0;
    while (pos < cmp.output.size()) {
        size_t end = cmp.output.find('\n', pos);
        if (end == std::string::npos) end = cmp.output.size();
        const std::string line = cmp.output.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty() || line[0] == '#' || line[0] == 'q') continue;
        const size_t last_comma = line.rfind(',');
        const double err = std::stod(line.substr(last_comma + 1));
        CHECK(err < prev);
        prev = err;
        ++seen;
    }
    CHECK(seen == 3);
    CHECK(prev < 1e-2);
}

TEST_CASE("json format mirrors the csv fields") {
    const auto r = run_tool("eval --kind zeta --nu 1 --q 0.5 --s 0,0 --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"columns\"") != std::string::npos);
    CHECK(r.output.find("\"rows\"") != std::string::npos);
    CHECK(r.output.find("-0.557304959") != std::string::npos);
}

TEST_CASE("config file supplies defaults that flags override") {
    const std::string cfg_path = "cli_cfg.txt";
    {
        std::ofstream f(cfg_path);
        f << "q=0.5\ns=0,0\n";
    }
    const auto from_cfg = run_tool("eval --kind zeta --nu 1 --config " + cfg_path);
    CHECK(from_cfg.exit_code == 0);
    CHECK(std::stod(data_row(from_cfg.output)) == doctest::Approx(-0.557304).epsilon(1e-5));
    const auto overridden =
        run_tool("eval --kind zeta --nu 1 --s -2,0 --config " + cfg_path);
    CHECK(overridden.exit_code == 0);
    CHECK(std::stod(data_row(overridden.output)) != doctest::Approx(-0.557304).epsilon(1e-5));
    std::remove(cfg_path.c_str());
}
