#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "mtlab/config_file.hpp"
#include "mtlab/csv.hpp"
#include "mtlab/error.hpp"
#include "mtlab/report.hpp"
#include "support/oracles.hpp"

using namespace mtlab;

TEST_SUITE("config") {
  TEST_CASE("parses keys, comments and lists") {
    const auto f = KeyValueFile::parse(
        "# header\n\n a = 1.5  # trailing\nname=limited\nlist = 1, 2.5 ,-3\nflag = true\nn = 1e4\n", "t.cfg");
    CHECK(f.get_double("a") == 1.5);
    CHECK(f.get_string_or("name", "") == "limited");
    CHECK(f.get_list("list") == std::vector<double>{1, 2.5, -3});
    CHECK(f.get_bool_or("flag", false));
    CHECK(f.get_int("n") == 10000);
    CHECK(f.get_double_or("missing", 7.0) == 7.0);
    CHECK(f.keys() == std::vector<std::string>{"a", "name", "list", "flag", "n"});
    CHECK(f.source() == "t.cfg");
  }

  TEST_CASE("errors name the source and line") {
    auto expect = [](const char* text, const char* fragment) {
      try {
        const auto f = KeyValueFile::parse(text, "x.cfg");
        (void)f.get_double("a");
        (void)f.get_int("n");
        FAIL("expected config error");
      } catch (const ConfigError& e) {
        CAPTURE(e.what());
        CHECK(std::string(e.what()).find(fragment) != std::string::npos);
      }
    };
    expect("a = 1\na = 2\n", "x.cfg:2");
    expect("a 1\n", "x.cfg:1");
    expect("n = 1\na = 1.0abc\n", "x.cfg:2");
    expect("a = 1\n\nn = 2.5\n", "x.cfg:3");
    expect("n = 3\n", "a");
  }

  TEST_CASE("unknown keys rejected") {
    const auto f = KeyValueFile::parse("alpha = 1\nbeta = 2\n");
    constexpr std::string_view ok[] = {"alpha"};
    CHECK_THROWS_AS(f.require_known(ok), ConfigError);
    constexpr std::string_view both[] = {"alpha", "beta"};
    CHECK_NOTHROW(f.require_known(both));
  }

  TEST_CASE("missing file") {
    CHECK_THROWS_AS(KeyValueFile::load("/nonexistent/dir/x.cfg"), ConfigError);
  }

  TEST_CASE("number formatting round trips") {
    oracle::Rng rng(41);
    for (int t = 0; t < 500; ++t) {
      const double x = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.uniform(-300, 300)));
      double y = 0;
      REQUIRE(parse_double(format_double(x), y));
      CHECK(y == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(5e-7) == "5e-07");
    double y;
    CHECK_FALSE(parse_double("1.0x", y));
    CHECK_FALSE(parse_double("", y));
    const std::vector<double> v = {0.25, -1, 3e10};
    CHECK(parse_double_list(format_double_list(v), "v") == v);
    CHECK_THROWS_AS(parse_double_list("1,,2", "v"), DomainError);
  }
}

TEST_SUITE("output") {
  TEST_CASE("csv writer layout") {
    std::ostringstream s;
    const std::vector<std::string> notes = {"dt = 0.1"};
    CsvWriter w(s, "mtlab roots --sigma 0.1", {"x", "y"}, notes);
    w.row({1.0, 0.5});
    CHECK(s.str() == "# mtlab 0.1.0 | mtlab roots --sigma 0.1\n# dt = 0.1\nx,y\n1,0.5\n");
    CHECK_THROWS(w.row({1.0}));
  }

  TEST_CASE("report formats and labels") {
    const std::vector<ReportEntry> rows = {{"t", 5e-7, "s", Source::Derived, "L / v, ok"},
                                           {"n", 3, "", Source::Input, ""}};
    std::ostringstream csv, text;
    write_report(csv, rows, ReportFormat::Csv, "mtlab x");
    write_report(text, rows, ReportFormat::Text, "mtlab x");
    CHECK(csv.str() ==
          "# mtlab 0.1.0 | mtlab x\nkey,value,unit,source,note\nt,5e-07,s,derived,\"L / v, ok\"\nn,3,,input,\n");
    CHECK(text.str() == "# mtlab 0.1.0 | mtlab x\nt = 5e-07 s  [derived]  L / v, ok\nn = 3  [input]\n");
    CHECK(parse_report_format("csv") == ReportFormat::Csv);
    CHECK_THROWS_AS(parse_report_format("json"), UsageError);
    CHECK(to_string(Source::Modeling) == "modeling");
    CHECK(to_string(Source::Reported) == "reported");
  }
}
