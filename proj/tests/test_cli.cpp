#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "qgcb/cli.hpp"
#include "qgcb/errors.hpp"
#include "qgcb/serialize.hpp"

using namespace qgcb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qgcb_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "qgcb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int rc = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

}  // namespace

TEST(Cli, ParseWeights) {
  EXPECT_EQ(cli::parse_weights("1,1", 1).size(), 2u);
  auto two = cli::parse_weights("1,0;0,1", 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[1].coords, (std::vector<int>{0, 1}));
  EXPECT_EQ(cli::parse_weights("1,0,0,1", 2).size(), 2u);
  EXPECT_TRUE(cli::parse_weights("", 2).empty());
  EXPECT_THROW(cli::parse_weights("1,0,1", 2), ParseError);
  EXPECT_THROW(cli::parse_weights("1;x", 1), ParseError);
  EXPECT_THROW(cli::parse_weights("-1", 1), ParseError);
}

TEST(Cli, ComputeTwoDoublets) {
  TempDir dir;
  ASSERT_EQ(run({"compute", "--datum", "A1", "--weights", "1,1", "--r", "0", "--ht-bound", "6", "--out", dir / "b.json",
                 "--csv", dir / "b.csv"}),
            cli::kOk);
  auto j = io::json::parse(io::read_file(dir / "b.json"));
  EXPECT_EQ(j["basis"]["elements"].size(), 4u);
  EXPECT_EQ(j["config"]["ht_bound"], 6);
  EXPECT_TRUE(j.contains("version"));
  auto csv = io::read_file(dir / "b.csv");
  EXPECT_EQ(csv.rfind("element,element_label", 0), 0u);
  EXPECT_FALSE(fs::exists(dir / "b.json.tmp"));
}

TEST(Cli, ComputeSingleFactor) {
  TempDir dir;
  ASSERT_EQ(run({"compute", "--datum", "A1", "--weights", "1", "--r", "0", "--out", dir / "b.json"}), cli::kOk);
  auto j = io::json::parse(io::read_file(dir / "b.json"));
  EXPECT_EQ(j["basis"]["elements"].size(), 2u);
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  std::string err;
  EXPECT_EQ(run({"compute", "--datum", "A1", "--weights", "1", "--r", "2", "--out", dir / "b.json"}, nullptr, &err),
            cli::kConfigError);
  EXPECT_NE(err.find("\"config\""), std::string::npos);
  EXPECT_EQ(run({"compute", "--datum", "E9", "--weights", "1"}), cli::kConfigError);
  EXPECT_EQ(run({"compute", "--weights", "1"}), cli::kConfigError);
  EXPECT_EQ(run({"verify", "--datum", "A1", "--weights", "1", "--checks", "nonsense"}), cli::kConfigError);
  EXPECT_EQ(run({"--help"}), cli::kOk);
}

TEST(Cli, VerifyReport) {
  TempDir dir;
  std::string out;
  ASSERT_EQ(run({"verify", "--datum", "A1", "--weights", "1,1,1", "--r", "1", "--ht-bound", "3", "--checks",
                 "bar,lattice,triangular,reduction,assoc,positivity,oracle,relations,star,intertwining", "--report",
                 dir / "r.json", "--seed", "7"},
                &out),
            cli::kOk);
  auto j = io::json::parse(io::read_file(dir / "r.json"));
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["config"]["seed"], 7);
  bool saw_positivity = false;
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
    if (c["name"] == "positivity") {
      saw_positivity = true;
      EXPECT_TRUE(c["observational"].get<bool>());
    }
  }
  EXPECT_TRUE(saw_positivity);
}

TEST(Cli, VerifyAffine) {
  TempDir dir;
  ASSERT_EQ(run({"verify", "--datum", "A1^(1)", "--weights", "1,0;1,0", "--ht-bound", "3", "--checks", "bar,lattice",
                 "--report", dir / "r.json"}),
            cli::kOk);
  auto j = io::json::parse(io::read_file(dir / "r.json"));
  EXPECT_TRUE(j["passed"].get<bool>());
  bool recorded = false;
  for (const auto& c : j["checks"])
    if (c["name"] == "theta-expansion") {
      recorded = true;
      EXPECT_TRUE(c["observational"].get<bool>());
    }
  EXPECT_TRUE(recorded);
}

TEST(Cli, DatumFile) {
  TempDir dir;
  io::write_file_atomic(dir / "d.json", R"({"name": "my A2", "symmetrizers": [1, 1], "cartan": [[2, -1], [-1, 2]]})");
  EXPECT_EQ(cli::load_datum(dir / "d.json").rank(), 2u);
  io::write_file_atomic(dir / "bad.json", R"({"cartan": [[2, 1], [-1, 2]]})");
  EXPECT_THROW(cli::load_datum(dir / "bad.json"), ParseError);
  EXPECT_EQ(run({"compute", "--datum", dir / "d.json", "--weights", "1,0", "--out", dir / "b.json"}), cli::kOk);
}

TEST(Cli, ThetaExport) {
  TempDir dir;
  ASSERT_EQ(run({"theta", "--datum", "A1", "--ht-bound", "1", "--out", dir / "t.json"}), cli::kOk);
  auto j = io::json::parse(io::read_file(dir / "t.json"));
  ASSERT_EQ(j["theta"]["levels"].size(), 2u);
  EXPECT_EQ(j["theta"]["levels"][0]["nu"], (std::vector<int>{0}));
  ASSERT_EQ(run({"theta", "--datum", "A1", "--ht-bound", "0", "--out", dir / "t0.json"}), cli::kOk);
  auto j0 = io::json::parse(io::read_file(dir / "t0.json"));
  ASSERT_EQ(j0["theta"]["levels"].size(), 1u);
  EXPECT_EQ(io::ratfunc_from_json(j0["theta"]["levels"][0]["matrix"][0][0]), RatFunc(1));
}

TEST(Cli, RoundTrip) {
  TempDir dir;
  ASSERT_EQ(run({"compute", "--datum", "A2", "--weights", "1,0;0,1", "--r", "1", "--ht-bound", "4", "--out", dir / "b.json"}),
            cli::kOk);
  auto text = io::read_file(dir / "b.json");
  auto j = io::json::parse(text);
  auto rec = io::diamond_record_from_json(j["basis"]);
  auto again = j;
  again["basis"] = io::to_json(rec);
  EXPECT_EQ(again.dump(2) + "\n", text);

  ASSERT_EQ(run({"theta", "--datum", "A1^(1)", "--ht-bound", "3", "--out", dir / "t.json"}), cli::kOk);
  auto ttext = io::read_file(dir / "t.json");
  auto tj = io::json::parse(ttext);
  auto trec = io::theta_record_from_json(tj["theta"]);
  auto tagain = tj;
  tagain["theta"] = io::to_json(trec);
  EXPECT_EQ(tagain.dump(2) + "\n", ttext);
}
