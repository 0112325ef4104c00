#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "nlsh/scenario.hpp"

using namespace nlsh::cli;

namespace {

const char* kSmall = R"({
  "schema": 1,
  "name": "small",
  "seed": 7,
  "space": {"size": 3},
  "generators": {
    "logmod": {"kind": "log-modulus", "p": 1.0, "kappa": 0.5},
    "cross": {"kind": "cross-ratio"}
  },
  "checks": [
    "product-table",
    {"check": "log-indices", "generators": ["logmod", "cross"]}
  ]
})";

std::string diag_of(const std::string& text) {
  try {
    Scenario::parse(text);
  } catch (const std::exception& e) {
    return diagnostic("s.json", text, e);
  }
  return {};
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check catalog") {
    const auto& cat = check_catalog();
    CHECK(cat.size() >= 15);
    std::vector<std::string> names;
    for (const auto& c : cat) {
      names.push_back(c.name);
      CHECK_FALSE(c.anchor.empty());
      CHECK_FALSE(c.summary.empty());
    }
    for (const char* n : {"product-table", "liftdeltal-identity", "separation-evolution", "freelift-grid-ladder",
                          "canonical-decomposition", "index-extraction", "two-particle-obstruction"})
      CHECK(std::find(names.begin(), names.end(), n) != names.end());
    CHECK(check_catalog().front().name == cat.front().name);
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }

  TEST_CASE("bundled scenarios parse") {
    const auto names = bundled_scenarios();
    CHECK(names.size() == 10);
    for (const auto& n : names) {
      CAPTURE(n);
      const auto text = bundled_scenario(n);
      REQUIRE(text.has_value());
      const auto s = Scenario::parse(*text);
      CHECK(s.name() == n);
      CHECK(s.check_count() > 0);
    }
    CHECK_FALSE(bundled_scenario("no-such-scenario").has_value());
  }

  TEST_CASE("the algebra scenario passes") {
    const auto s = Scenario::parse(*bundled_scenario("algebra"));
    const auto results = s.run();
    for (const auto& r : results) {
      CAPTURE(r.name);
      CHECK(r.status == "pass");
    }
    CHECK(exit_code(results) == 0);
  }

  TEST_CASE("the obstruction identity holds in the bundled scenario") {
    const auto s = Scenario::parse(*bundled_scenario("theorem10"));
    for (const auto& r : s.run())
      if (r.name == "liftdeltal-identity") CHECK(r.max_residual <= 1e-8);
  }

  TEST_CASE("reports are deterministic and carry the run parameters") {
    const auto a = Scenario::parse(kSmall), b = Scenario::parse(kSmall);
    const auto ra = make_report(a, a.run());
    CHECK(report_text(ra) == report_text(make_report(b, b.run())));
    CHECK(ra["schema"] == 1);
    CHECK(ra["scenario"] == "small");
    CHECK(ra["seed"] == 7);
    CHECK(ra["hbar"] == 1.0);
    CHECK(ra["checks"].size() == 2);
    for (const char* key : {"name", "status", "max_residual", "tolerance", "details"})
      CHECK(ra["checks"][0].contains(key));
    CHECK(report_text(ra).back() == '\n');
    const auto table = report_table(ra);
    CHECK(table.find("product-table") != std::string::npos);
    CHECK(table.find("log-indices") != std::string::npos);
  }

  TEST_CASE("command-line overrides") {
    const auto tight = Scenario::parse(kSmall, {.tol = 0.0});
    const auto results = tight.run();
    CHECK(results[0].tolerance == 0.0);
    CHECK(results[0].status == "pass");  // exact table
    CHECK(exit_code(results) == 1);      // round-off in the index estimate

    const auto reseeded = Scenario::parse(kSmall, {.seed = 99});
    CHECK(reseeded.seed() == 99);
    CHECK(make_report(reseeded, reseeded.run())["seed"] == 99);
    CHECK(Scenario::parse(kSmall, {.hbar = 2.0}).hbar() == 2.0);
  }

  TEST_CASE("a single generator can be checked alone") {
    const std::string text = replace(kSmall, R"("generators": ["logmod", "cross"])", R"("generators": ["logmod"])");
    const auto s = Scenario::parse(text);
    CHECK(exit_code(s.run()) == 0);
  }

  TEST_CASE("malformed JSON is located") {
    const std::string text = replace(kSmall, R"("seed": 7,)", R"("seed": 7)");
    const auto d = diag_of(text);
    CHECK(d.rfind("s.json:5:", 0) == 0);
    CHECK(d.find("error: malformed JSON") != std::string::npos);
  }

  TEST_CASE("schema errors point at the offending value") {
    SUBCASE("unknown check") {
      const auto d = diag_of(replace(kSmall, R"("product-table")", R"("product-tabel")"));
      CHECK(d.rfind("s.json:11:", 0) == 0);
      CHECK(d.find("unknown check 'product-tabel'") != std::string::npos);
    }
    SUBCASE("unknown generator reference") {
      const auto d = diag_of(replace(kSmall, R"(["logmod", "cross"])", R"(["logmod", "crosss"])"));
      CHECK(d.rfind("s.json:12:", 0) == 0);
      CHECK(d.find("unknown generator 'crosss'") != std::string::npos);
    }
    SUBCASE("unknown key") {
      const auto d = diag_of(replace(kSmall, R"("kappa": 0.5)", R"("kapa": 0.5)"));
      CHECK(d.rfind("s.json:7:", 0) == 0);
      CHECK(d.find("unknown key 'kapa'") != std::string::npos);
    }
    SUBCASE("missing seed") {
      const auto d = diag_of(replace(kSmall, "\"seed\": 7,\n", ""));
      CHECK(d.find("missing required key 'seed'") != std::string::npos);
    }
    SUBCASE("bad space") {
      const auto d = diag_of(replace(kSmall, R"({"size": 3})", R"({"factors": [2, 0]})"));
      CHECK(d.rfind("s.json:5:", 0) == 0);
    }
  }

  TEST_CASE("locating JSON pointers") {
    CHECK(locate(kSmall, "") == std::pair{1, 1});
    CHECK(locate(kSmall, "/seed") == std::pair{4, 11});
    CHECK(locate(kSmall, "/checks/1/generators/1") == std::pair{12, 55});
    CHECK(locate(kSmall, "/checks/7") == locate(kSmall, "/checks"));
  }
}
