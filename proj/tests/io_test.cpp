#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "support.hpp"
#include "tl/io.hpp"

using tl::CPElement;
using tl::DynSystem;

namespace {

std::string fixture(const char* name) { return std::string(TL_FIXTURE_DIR) + "/" + name; }

std::string repo_root() {
  std::string dir = TL_FIXTURE_DIR;
  return dir.substr(0, dir.rfind('/'));
}

void check_same_system(const DynSystem& a, const DynSystem& b) {
  REQUIRE(a.group.order == b.group.order);
  CHECK(a.group.cayley == b.group.cayley);
  CHECK(a.group.identity == b.group.identity);
  CHECK(a.group.inverse == b.group.inverse);
  REQUIRE(a.points == b.points);
  REQUIRE(a.fiber_dim == b.fiber_dim);
  CHECK(a.sigma == b.sigma);
  CHECK(a.blocks == b.blocks);
  for (int g = 0; g < a.group.order; ++g)
    for (int x = 0; x < a.points; ++x)
      CHECK((a.cocycle[g][x] - b.cocycle[g][x]).norm() == 0.0);
  CHECK(a.tol.rank_tol == b.tol.rank_tol);
  CHECK(a.tol.invert_tol == b.tol.invert_tol);
  CHECK(a.tol.norm_tol == b.tol.norm_tol);
}

std::string parse_failure(const std::string& text) {
  try {
    tl::parse_system_raw(text);
  } catch (const tl::parse_error& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd =
      "cd '" + repo_root() + "' && '" + TL_CLI_PATH + "' " + args;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  CliResult r;
  r.code = WEXITSTATUS(status);
  r.out = out;
  return r;
}

}  // namespace

TEST_CASE("fixture files parse to the reference systems") {
  check_same_system(tl::load_system(fixture("s1")), tlt::make_s1());
  check_same_system(tl::load_system(fixture("s2")), tlt::make_s2());
  check_same_system(tl::load_system(fixture("s3")), tlt::make_s3());
  check_same_system(tl::load_system(fixture("s3_minus")), tlt::make_s3_minus());
  check_same_system(tl::load_system(fixture("s4")), tlt::make_s4());
  check_same_system(tl::load_system(fixture("s5")), tlt::make_s5());
}

TEST_CASE("serialization round trips every fixture") {
  for (const char* name : {"s1", "s2", "s3", "s3_minus", "s4", "s5"}) {
    CAPTURE(name);
    const DynSystem sys = tl::load_system(fixture(name));
    const std::string text = tl::serialize_system(sys);
    const DynSystem again = tl::parse_system(text);
    check_same_system(sys, again);
    CHECK(tl::serialize_system(again) == text);
  }
}

TEST_CASE("digests are stable and tell the cocycle variants apart") {
  const std::string d3 = tl::system_digest(tl::load_system(fixture("s3")));
  const std::string d3m = tl::system_digest(tl::load_system(fixture("s3_minus")));
  CHECK(d3 != d3m);
  CHECK(d3 == tl::system_digest(tlt::make_s3()));
  CHECK(d3.size() == 16);
  for (char c : d3) CHECK(std::string("0123456789abcdef").find(c) != std::string::npos);
  CHECK(tl::system_digest(tl::load_system(fixture("s1"))) ==
        tl::system_digest(tlt::make_s1()));
}

TEST_CASE("element files parse and round trip") {
  const DynSystem s1 = tlt::make_s1();
  const CPElement f = tl::load_element(s1, fixture("s1_element"));
  CPElement want = tl::cp_zero(s1);
  want.coeff[0] = tl::a_identity(s1);
  want.coeff[1] = tl::Complex(-2.0, 0.0) * tl::a_identity(s1);
  CHECK((tl::cp_to_vec(s1, f) - tl::cp_to_vec(s1, want)).norm() == 0.0);

  const DynSystem s2 = tlt::make_s2();
  const CPElement g = tl::load_element(s2, fixture("s2_element"));
  CHECK(g.coeff[0].value[0](0, 0) == tl::Complex(1.0, 0.0));
  CHECK(g.coeff[1].value[0](0, 0) == tl::Complex(-1.0, 0.0));

  const DynSystem s5 = tlt::make_s5();
  tl::Rng rng(31);
  const CPElement h = tl::random_cp(s5, rng);
  const CPElement back = tl::parse_element(s5, tl::serialize_element(s5, h));
  CHECK((tl::cp_to_vec(s5, h) - tl::cp_to_vec(s5, back)).norm() == 0.0);

  CHECK_THROWS_AS(tl::parse_element(s1, "{\"coefficients\": []}"), tl::parse_error);
  CHECK_THROWS_AS(tl::parse_element(s1, "{\"bogus\": 1}"), tl::parse_error);
}

TEST_CASE("parse errors name the offending field") {
  CHECK(parse_failure("{").find("document") != std::string::npos);
  CHECK(parse_failure("[1, 2]").find("expected an object") != std::string::npos);

  const std::string good =
      "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 1,"
      " \"action\": {\"kind\": \"table\", \"table\": [[0], [0]]}}";
  CHECK(tl::parse_system(good).validated);

  CHECK(parse_failure("{\"points\": 1}").find("'group'") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"spiral\"}, \"points\": 1,"
            " \"action\": {\"kind\": \"table\", \"table\": [[0]]}}")
            .find("group.kind") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"cyclic\"}, \"points\": 1,"
            " \"action\": {\"kind\": \"table\", \"table\": [[0]]}}")
            .find("'n'") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"permutation-generators\", \"letters\": 3,"
            " \"generators\": [[0, 0, 2]]}, \"points\": 3,"
            " \"action\": {\"kind\": \"natural\"}}")
            .find("group.generators[0]") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 2,"
            " \"action\": {\"kind\": \"natural\"}}")
            .find("permutation-generators") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 2,"
            " \"action\": {\"kind\": \"table\", \"table\": [[0, 1]]}}")
            .find("one row per group element") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 2,"
            " \"action\": {\"kind\": \"table\", \"table\": [[0, 1], [1, 5]]}}")
            .find("action.table[1][1]") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 1,"
            " \"action\": {\"kind\": \"table\", \"table\": [[0], [0]]},"
            " \"cocycle\": [[[[1.0, 0.0]]]]}")
            .find("cocycle") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 1,"
            " \"action\": {\"kind\": \"table\", \"table\": [[0], [0]]},"
            " \"tolerances\": {\"rank\": 1e-9}}")
            .find("tolerances") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 0,"
            " \"action\": {\"kind\": \"table\", \"table\": [[], []]}}")
            .find("points") != std::string::npos);
  CHECK(parse_failure(
            "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 1,"
            " \"action\": {\"kind\": \"table\", \"table\": [[0], [0]]}, \"extra\": 1}")
            .find("'extra'") != std::string::npos);
}

TEST_CASE("semantic defects are left for validation with witnesses") {
  // A square table that is not a group parses, and validation names the row.
  const std::string bad_group =
      "{\"group\": {\"kind\": \"cayley\", \"table\": [[0, 1], [1, 1]]}, \"points\": 1,"
      " \"action\": {\"kind\": \"table\", \"table\": [[0], [0]]}}";
  const DynSystem raw = tl::parse_system_raw(bad_group);
  const auto issues = tl::system_issues(raw);
  REQUIRE(!issues.empty());
  CHECK(issues.front().find("row 1") != std::string::npos);
  CHECK_THROWS_AS(tl::parse_system(bad_group), tl::validation_error);

  // A partition the action does not preserve parses, and validation names
  // the split block.
  const std::string bad_partition =
      "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 3,"
      " \"action\": {\"kind\": \"table\", \"table\": [[0, 1, 2], [1, 0, 2]]},"
      " \"z_partition\": [[0, 2], [1]]}";
  const auto issues2 = tl::system_issues(tl::parse_system_raw(bad_partition));
  REQUIRE(!issues2.empty());
  bool found = false;
  for (const auto& s : issues2) found = found || s.find("splits block") != std::string::npos;
  CHECK(found);
  CHECK_THROWS_AS(tl::parse_system(bad_partition), tl::validation_error);
}

TEST_CASE("command line tool reports and exit codes") {
  // Valid file: exit 0, verdict in the report.
  const CliResult ok = run_cli("validate fixtures/s1");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("valid: true") != std::string::npos);
  CHECK(ok.out.find("free_block_action: true") != std::string::npos);

  // Unreadable file: input error.
  CHECK(run_cli("validate fixtures/no_such_file 2>/dev/null").code == 2);

  // Unparseable document: input error.
  const std::string bad_doc = repo_root() + "/build/io_test_bad_doc.tmp";
  {
    std::ofstream out(bad_doc);
    out << "{ not a document";
  }
  CHECK(run_cli("validate '" + bad_doc + "' 2>/dev/null").code == 2);

  // Parseable but invalid: validate reports with exit 0, the analysis
  // commands refuse with an input error.
  const std::string bad_sys = repo_root() + "/build/io_test_bad_system.tmp";
  {
    std::ofstream out(bad_sys);
    out << "{\"group\": {\"kind\": \"cyclic\", \"n\": 2}, \"points\": 3,"
           " \"action\": {\"kind\": \"table\", \"table\": [[0, 1, 2], [1, 0, 2]]},"
           " \"z_partition\": [[0, 2], [1]]}";
  }
  const CliResult invalid = run_cli("validate '" + bad_sys + "'");
  CHECK(invalid.code == 0);
  CHECK(invalid.out.find("valid: false") != std::string::npos);
  CHECK(invalid.out.find("splits block") != std::string::npos);
  CHECK(run_cli("conditions '" + bad_sys + "' 2>/dev/null").code == 2);

  std::remove(bad_doc.c_str());
  std::remove(bad_sys.c_str());

  // Missing required option: usage error maps to the input error code.
  CHECK(run_cli("invert fixtures/s1 2>/dev/null").code == 2);
  CHECK(run_cli("--help >/dev/null").code == 0);

  // The zero divisor probe does not apply to glued blocks or matrix
  // fibers; the witness report still computes and says why it skipped.
  for (const char* name : {"s4", "s5"}) {
    const CliResult probe = run_cli(std::string("witness fixtures/") + name + " --samples 5");
    CHECK(probe.code == 0);
    CHECK(probe.out.find("probe skipped") != std::string::npos);
  }
}

TEST_CASE("command line golden outputs") {
  const CliResult validate = run_cli("validate fixtures/s1 --json");
  CHECK(validate.code == 0);
  CHECK(validate.out == slurp(std::string(TL_GOLDEN_DIR) + "/validate_s1.json"));

  const CliResult isom = run_cli("isom fixtures/s2 --json");
  CHECK(isom.code == 0);
  CHECK(isom.out == slurp(std::string(TL_GOLDEN_DIR) + "/isom_s2.json"));
}
