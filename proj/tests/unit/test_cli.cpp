#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli/cli.hpp"
#include "mtlab/error.hpp"

using namespace mtlab;
using namespace mtlab::cli;
namespace fs = std::filesystem;

namespace {
const std::string kConfigs = MTLAB_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("mtlab_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Result {
  int code;
  std::string out, err;
};

Result invoke(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"mtlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void check_round_trip(const std::vector<std::string>& args) {
  CAPTURE(invocation_string(args));
  const auto cfg = parse_args(args);
  const auto again = parse_args(emit_args(cfg));
  CHECK(again == cfg);
  CHECK(emit_args(again) == emit_args(cfg));
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("roots subcommand config") {
    const auto cfg = parse_args({"roots", "--sigma", "0.1"});
    REQUIRE(std::holds_alternative<RootsCommand>(cfg.command));
    CHECK(std::get<RootsCommand>(cfg.command).sigma == 0.1);
    CHECK(std::get<RootsCommand>(parse_args({"roots", "--sigma", "-0.2"}).command).sigma == -0.2);
  }

  TEST_CASE("sweep plan") {
    const auto cfg = parse_args({"sweep", "--sigma-list", "0,0.1,0.2", "--gamma-list", "0.1,0.3"});
    const auto& s = std::get<SweepCommand>(cfg.command);
    CHECK(s.sigmas.size() * s.gammas.size() == 6);
  }

  TEST_CASE("every command round trips through emit") {
    check_round_trip({"roots", "--sigma", "0.1"});
    check_round_trip({"kink", "--sigma", "0.05", "--xi-min", "-3", "--step", "0.25"});
    check_round_trip({"tw-ode", "--sigma", "0.2", "--rho", "0.4", "--psi0", "1"});
    check_round_trip({"tw-ode", "--sigma", "0.2"});
    check_round_trip({"simulate", "--config", kConfigs + "/simulate_example.cfg", "--out-dir", "/tmp/x"});
    check_round_trip({"simulate", "--config", kConfigs + "/simulate_example.cfg", "--snapshots-every", "7"});
    check_round_trip({"sweep", "--sigma-list", "0.1,0.2", "--gamma-list", "1", "--threads", "2"});
    check_round_trip({"liouville", "--config", kConfigs + "/liouville_modified.cfg", "--steps", "30",
                      "--report-every", "10"});
    check_round_trip({"velocity", "--config", kConfigs + "/reference.cfg", "--format", "csv"});
    check_round_trip({"estimates"});
    check_round_trip({"estimates", "--config", kConfigs + "/estimates.cfg", "--format", "csv"});
  }

  TEST_CASE("usage errors name the flag") {
    auto usage = [](const std::vector<std::string>& args, const char* fragment) {
      CAPTURE(invocation_string(args));
      try {
        parse_args(args);
        FAIL("expected usage error");
      } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find(fragment) != std::string::npos);
      }
    };
    usage({"roots"}, "--sigma");
    usage({"roots", "--sigma", "abc"}, "--sigma");
    usage({"roots", "--sigam", "0.1"}, "--sigam");
    usage({"sweep", "--sigma-list", "0.1,x", "--gamma-list", "1"}, "--sigma-list");
    usage({"velocity", "--config", kConfigs + "/reference.cfg", "--format", "xml"}, "--format");
    usage({"frobnicate"}, "frobnicate");
    CHECK_THROWS_AS(parse_args({}), UsageError);
  }

  TEST_CASE("config errors name the path") {
    try {
      parse_args({"simulate", "--config", "missing.cfg"});
      FAIL("expected config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("missing.cfg") != std::string::npos);
    }
    const auto dir = scratch("badcfg");
    std::ofstream(dir / "bad.cfg") << "sigma = 0.1\ngamma_t = 0.3\ntypo = 1\n";
    const auto r = invoke({"simulate", "--config", (dir / "bad.cfg").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.cfg:3") != std::string::npos);
  }

  TEST_CASE("exit codes and single-line errors") {
    auto r = invoke({"roots"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("mtlab: error kind=usage_error exit=1: ", 0) == 0);
    r = invoke({"velocity", "--config", "nope.cfg"});
    CHECK(r.code == 2);
    r = invoke({"roots", "--sigma", "0.4"});
    CHECK(r.code == 3);
    CHECK(r.err.rfind("mtlab: error kind=degenerate_roots exit=3: ", 0) == 0);
    r = invoke({"tw-ode", "--sigma", "0", "--rho", "0", "--psi0", "2", "--dpsi0", "5", "--xi1", "40"});
    CHECK(r.code == 4);
    CHECK(r.err.find("kind=blowup") != std::string::npos);
    for (const auto* e : {&r.err}) CHECK(std::count(e->begin(), e->end(), '\n') == 1);
    r = invoke({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("sweep") != std::string::npos);
  }

  TEST_CASE("kink at zero forcing crosses zero at the origin") {
    const auto r = invoke({"kink", "--sigma", "0", "--xi-min", "-1", "--xi-max", "1", "--step", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# mtlab 0.1.0 | mtlab kink --sigma 0", 0) == 0);
    CHECK(r.out.find("\nxi,psi\n") != std::string::npos);
    CHECK(r.out.find("\n0,0\n") != std::string::npos);
  }

  TEST_CASE("tw-ode residual column") {
    const auto r = invoke({"tw-ode", "--sigma", "0.1"});
    REQUIRE(r.code == 0);
    const auto last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
    const double residual = std::stod(last.substr(last.rfind(',') + 1));
    CHECK(std::abs(residual) < 1e-6);
  }

  TEST_CASE("velocity report carries both laws and the transfer time") {
    const auto r = invoke({"velocity", "--config", kConfigs + "/reference.cfg", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\nv_literal,2,m/s,") != std::string::npos);
    CHECK(r.out.find("\nv_consistent,26.38538777377314,m/s,") != std::string::npos);
    CHECK(r.out.find("\nt_transfer_reported_speed,5e-07,s,") != std::string::npos);
    CHECK(r.out.find("FLAG") != std::string::npos);
  }

  TEST_CASE("simulate writes fields and front files reproducibly") {
    const auto dir = scratch("sim");
    const auto cfg = kConfigs + "/simulate_example.cfg";
    auto r = invoke({"simulate", "--config", cfg, "--out-dir", (dir / "a").string(), "--snapshots-every", "1000"});
    REQUIRE(r.code == 0);
    r = invoke({"simulate", "--config", cfg, "--out-dir", (dir / "b").string(), "--snapshots-every", "1000"});
    REQUIRE(r.code == 0);
    for (const char* f : {"fields.csv", "front.csv"}) {
      const auto a = slurp(dir / "a" / f);
      CHECK(!a.empty());
      CHECK(a.rfind("# mtlab 0.1.0 | mtlab simulate", 0) == 0);
      const auto b = slurp(dir / "b" / f);
      CHECK(a.substr(a.find('\n')) == b.substr(b.find('\n')));
    }
    CHECK(slurp(dir / "a" / "fields.csv").find("\ntau,chi,psi\n") != std::string::npos);
    CHECK(slurp(dir / "a" / "front.csv").find("\ntau,position\n") != std::string::npos);
    CHECK(r.out.find("measured_speed") != std::string::npos);
  }

  TEST_CASE("identical invocations give byte-identical files") {
    const auto dir = scratch("same");
    const std::vector<std::string> args = {"liouville", "--config", kConfigs + "/liouville_modified.cfg",
                                           "--steps", "20", "--report-every", "10", "--out-dir",
                                           dir.string()};
    REQUIRE(invoke(args).code == 0);
    const auto first = slurp(dir / "density_t000020.csv");
    const auto diag = slurp(dir / "diagnostics.csv");
    REQUIRE(invoke(args).code == 0);
    CHECK(slurp(dir / "density_t000020.csv") == first);
    CHECK(slurp(dir / "diagnostics.csv") == diag);
    CHECK(fs::exists(dir / "density_t000000.csv"));
    CHECK(fs::exists(dir / "density_t000010.csv"));
    CHECK(diag.find("\nt,total_probability,entropy\n") != std::string::npos);
  }

  TEST_CASE("sweep merges per-cell files into a sorted summary") {
    const auto dir = scratch("sweep");
    const auto r = invoke({"sweep", "--sigma-list", "0.2,0.05", "--gamma-list", "1,0.3", "--threads", "2",
                           "--out-dir", dir.string()});
    REQUIRE(r.code == 0);
    const auto summary = slurp(dir / "sweep_summary.csv");
    CHECK(summary == r.out);
    std::istringstream lines(summary);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line))
      if (!line.empty() && line[0] != '#') rows.push_back(line);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "sigma,gamma_t,predicted_v,measured_v,rel_err");
    CHECK(rows[1].rfind("0.05,0.3,", 0) == 0);
    CHECK(rows[2].rfind("0.05,1,", 0) == 0);
    CHECK(rows[3].rfind("0.2,0.3,", 0) == 0);
    CHECK(rows[4].rfind("0.2,1,", 0) == 0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double rel = std::stod(rows[i].substr(rows[i].rfind(',') + 1));
      CHECK(rel < 0.02);
    }
    CHECK(std::distance(fs::directory_iterator(dir / "sweep_cells"), fs::directory_iterator{}) == 4);
  }

  TEST_CASE("output directory precedence") {
    RunConfig cfg = parse_args({"liouville", "--config", kConfigs + "/liouville_harmonic.cfg"});
    ::unsetenv("MTLAB_OUT_DIR");
    CHECK(resolve_out_dir(cfg) == ".");
    ::setenv("MTLAB_OUT_DIR", "/tmp/from_env", 1);
    CHECK(resolve_out_dir(cfg) == "/tmp/from_env");
    cfg.out_dir = "/tmp/from_flag";
    CHECK(resolve_out_dir(cfg) == "/tmp/from_flag");
    ::unsetenv("MTLAB_OUT_DIR");
  }

  TEST_CASE("estimates report") {
    const auto r = invoke({"estimates", "--config", kConfigs + "/estimates.cfg"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("conscious_fraction") != std::string::npos);
    CHECK(r.out.find("[modeling]") != std::string::npos);
    const auto dflt = invoke({"estimates"});
    CHECK(dflt.out.substr(dflt.out.find('\n')) == r.out.substr(r.out.find('\n')));
  }
}
