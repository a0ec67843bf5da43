#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <json.hpp>

#include "support.hpp"
#include "tempdir.hpp"
#include "varsel/config_search.hpp"
#include "varsel/io.hpp"
#include "varsel/report.hpp"

using namespace varsel;
using varsel::testing::TempDir;
using json = nlohmann::json;

TEST_CASE("two-column example") {
  const auto ds = parse_csv("t1,t2\n1,10\n2,20\n", {{"t1"}, {}});
  CHECK(ds.length() == 2);
  CHECK(ds.width() == 2);
  CHECK(ds.roles()[0] == Role::Dependent);
  CHECK(ds.roles()[1] == Role::Independent);
  CHECK(ds.observations()(1, 1) == 20);
}

TEST_CASE("role assignment") {
  const std::string text = "a,b,c\n1,2,3\n4,5,6\n";
  auto ds = parse_csv(text);
  for (auto r : ds.roles()) CHECK(r == Role::Dependent);
  ds = parse_csv(text, {{}, {"b"}});
  CHECK(ds.roles() == std::vector<Role>{Role::Dependent, Role::Independent, Role::Dependent});
  ds = parse_csv(text, {{"c", "a"}, {}});
  CHECK(ds.roles() == std::vector<Role>{Role::Dependent, Role::Independent, Role::Dependent});
  CHECK_THROWS_AS(parse_csv(text, {{"a"}, {"a"}}), DataError);
  CHECK_THROWS_AS(parse_csv(text, {{}, {"a", "b", "c"}}), DataError);  // no dependent left
}

TEST_CASE("each malformed input has its own error kind") {
  try {
    parse_csv("t1,t2\n1,10\nabc,20\n");
    FAIL("expected NonNumericCell");
  } catch (const NonNumericCell& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == 1);
    CHECK(e.text() == "abc");
  }
  try {
    parse_csv("a,b\n1,2\n3\n");
    FAIL("expected RaggedRow");
  } catch (const RaggedRow& e) {
    CHECK(e.row() == 3);
    CHECK(e.expected() == 2);
    CHECK(e.found() == 1);
  }
  try {
    parse_csv("x,y,x\n1,2,3\n");
    FAIL("expected DuplicateName");
  } catch (const DuplicateName& e) {
    CHECK(e.name() == "x");
  }
  try {
    parse_csv("a,b\n1,2\n", {{"zz"}, {}});
    FAIL("expected MissingColumn");
  } catch (const MissingColumn& e) {
    CHECK(e.name() == "zz");
  }
  CHECK_THROWS_AS(parse_csv(""), EmptyFile);
  CHECK_THROWS_AS(parse_csv("\n\n"), EmptyFile);
  CHECK_THROWS_AS(parse_csv("a,b\n"), EmptyFile);
  CHECK_THROWS_AS(parse_csv("a b,c\n1,2\n"), InvalidName);
  CHECK_THROWS_AS(parse_csv("a,\n1,2\n"), InvalidName);
  CHECK_THROWS_AS(parse_csv("a\nnan\n"), NonNumericCell);
  CHECK_THROWS_AS(parse_csv("a\ninf\n"), NonNumericCell);
  CHECK_THROWS_AS(parse_csv("a\n1.5x\n"), NonNumericCell);
  CHECK_THROWS_AS(parse_csv("a\n\n2\n"), NonNumericCell);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), FileNotFound);
}

TEST_CASE("tolerated formatting") {
  const auto ds = parse_csv("a,b\r\n1, -2.5e3\r\n+3,4\r\n\r\n");
  CHECK(ds.length() == 2);
  CHECK(ds.observations()(0, 1) == -2500.0);
  CHECK(ds.observations()(1, 0) == 3.0);
}

TEST_CASE("CSV round trip is bit exact") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  Matrix values(200, 3);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    double v;
    do {
      const std::uint64_t b = bits(rng);
      std::memcpy(&v, &b, sizeof v);
    } while (!std::isfinite(v));
    values(i) = v;
  }
  values(0, 0) = 0.1;
  values(1, 0) = -0.0;
  values(2, 0) = 5e-324;
  values(3, 0) = 1.7976931348623157e308;
  const TimeSeriesDataset ds(values, {"a", "b", "c_2"},
                             {Role::Dependent, Role::Dependent, Role::Independent});
  TempDir dir;
  write_csv(dir.file("x.csv"), ds);
  const auto back = load_csv(dir.file("x.csv"), {{}, {"c_2"}});
  CHECK(back.names() == ds.names());
  CHECK(back.roles() == ds.roles());
  CHECK(std::memcmp(back.observations().data(), values.data(),
                    sizeof(double) * static_cast<std::size_t>(values.size())) == 0);
  CHECK(load_matrix_csv(dir.file("x.csv")) == values);
}

TEST_CASE("human fit report") {
  const auto ds = varsel::testing::univariate({1, 2, 3, 4});
  const auto f = fit(ds, make_config(ds, 1, 0));
  RunConfig run;
  run.command = "fit";
  run.seed = 1234;
  const std::string text = write_report(f, ds, run, ReportFormat::Human);
  CHECK(text.find("A_1 = 1.00000") != std::string::npos);
  CHECK(text.find("C = 1.00000") != std::string::npos);
  CHECK(text.find("1234") != std::string::npos);
  CHECK(text.find(version()) != std::string::npos);
  for (const char* name : {"aic", "bic", "hqc"}) CHECK(text.find(name) != std::string::npos);
}

TEST_CASE("machine reports parse back") {
  const auto ds = varsel::testing::noisy_var2(1, 120, 0.5);
  SearchSpace sp;
  sp.p_max = 3;
  const auto r = exhaustive_search(ds, sp, CriterionKind::HQC, {});
  RunConfig run;
  run.command = "select";
  run.method = "exhaustive";
  run.criterion = CriterionKind::HQC;
  run.p_max = 3;
  run.seed = 987654321987654321ULL;
  const auto doc = json::parse(write_report(r, ds, run, ReportFormat::Machine));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["seed"].get<std::uint64_t>() == run.seed);
  CHECK(doc["result"]["best_value"].get<double>() == r.best_value);
  CHECK(doc["result"]["best_config"]["p"] == r.best_config.p);
  CHECK(doc["result"]["criteria"]["hqc"].get<double>() == r.best_value);
  CHECK(doc["run_config"]["p_max"] == 3);
  CHECK(doc["dataset"]["rows"] == 120);
  CHECK(doc["result"]["trajectory"].size() == r.trajectory.size());
}

TEST_CASE("non-finite values survive as strings") {
  std::vector<double> ramp;
  for (int i = 0; i < 20; ++i) ramp.push_back(i);
  const auto ds = varsel::testing::univariate(ramp);
  const auto f = fit(ds, make_config(ds, 1, 0));
  REQUIRE(f.degenerate);
  RunConfig run;
  run.command = "fit";
  const auto doc = json::parse(write_report(f, ds, run, ReportFormat::Machine));
  CHECK(doc["result"]["criteria"]["bic"] == "-inf");
  CHECK(doc["result"]["degenerate"] == true);
}

TEST_CASE("run configuration round trip") {
  RunConfig run;
  run.command = "select";
  run.input = "data.csv";
  run.dependent = {"a", "b"};
  run.independent = {"z"};
  run.criterion = CriterionKind::AIC;
  run.method = "scatter";
  run.p_max = 7;
  run.q_max = 2;
  run.search_partition = true;
  run.switchable = {"b", "z"};
  run.budget = 77;
  run.stagnation = 11;
  run.seed = 5;
  run.include_constant = false;
  run.sim_noise = 0.1;
  const auto back = parse_run_config(run_config_json(run));
  CHECK(run_config_json(back) == run_config_json(run));
  CHECK(back.switchable == run.switchable);
  CHECK(back.criterion == CriterionKind::AIC);
  CHECK_THROWS_AS(parse_run_config("{nope"), DataError);

  const auto args = to_arguments(run);
  CHECK(args.front() == "select");
  CHECK(std::find(args.begin(), args.end(), "--search-partition") != args.end());
  CHECK(std::find(args.begin(), args.end(), "--no-constant") != args.end());
}

TEST_CASE("unwritable output path is reported with the path") {
  try {
    write_text_file("/nonexistent/dir/out.txt", "x");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.txt") != std::string::npos);
  }
}
