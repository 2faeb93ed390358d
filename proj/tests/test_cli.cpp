#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

using namespace toral;
namespace fs = std::filesystem;

namespace {

const fs::path kInputs = fs::path(TORAL_SOURCE_DIR) / "inputs";

std::string input(const char* name) { return (kInputs / name).string(); }

struct TempDir {
  fs::path path;
  TempDir() {
    std::string templ = (fs::temp_directory_path() / "toral-test-XXXXXX").string();
    REQUIRE(mkdtemp(templ.data()) != nullptr);
    path = templ;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const fs::path& dir) {
  args.push_back("--out");
  args.push_back(dir.string());
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json read_json(const fs::path& p) { return load_json_file(p.string()); }

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("classify") {
  TempDir t;
  auto r = run({"classify", input("paper_matrix.json")}, t.path);
  CHECK(r.code == 0);
  CHECK(r.out.find("ergodic: true, hyperbolic: false, (d_u,d_e,d_s)=(1,2,1)") != std::string::npos);
  const auto c = read_json(t.path / "classification.json");
  CHECK(c["d_u"] == 1);
  CHECK(c["d_e"] == 2);

  r = run({"classify", "1,0;0,1"}, t.path);
  CHECK(r.code == 0);
  CHECK(r.out.find("ergodic: false") != std::string::npos);

  CHECK(run({"classify", "2,0;0,1"}, t.path).code == cli::kNotAutomorphism);
}

TEST_CASE("parse failures exit 1") {
  TempDir t;
  const auto bad = t.path / "bad.json";
  std::ofstream(bad) << "{\"rows\": [[1, 2], [3]]}";
  CHECK(run({"classify", bad.string()}, t.path).code == cli::kParse);
  std::ofstream(bad, std::ios::trunc) << "{not json";
  CHECK(run({"classify", bad.string()}, t.path).code == cli::kParse);
  CHECK(run({"classify", "no-such-file"}, t.path).code == cli::kParse);
  CHECK(run({"sigma2", input("cat_map.json"), input("cosine4.json")}, t.path).code == cli::kParse);
  std::ofstream(bad, std::ios::trunc) << R"({"kind": "gaussian", "dim": 1})";
  CHECK(run({"check", bad.string()}, t.path).code == cli::kParse);
  CHECK(run({"check", input("leonov.json"), "--p", "5"}, t.path).code == cli::kParse);
  CHECK(run({"frobnicate"}, t.path).code == cli::kParse);
}

TEST_CASE("sigma2") {
  TempDir t;
  auto r = run({"sigma2", input("cat_map.json"), input("cosine2.json"), "--partial", "1,100"}, t.path);
  CHECK(r.code == 0);
  auto v = read_json(t.path / "variance.json");
  CHECK(v["sigma2"].get<double>() == 2.0);
  CHECK(v["N0"] == 1);
  CHECK(v["partial_sums"][1][1].get<double>() == 200.0);

  CHECK(run({"sigma2", input("cat_map.json"), input("coboundary.json")}, t.path).code == 0);
  v = read_json(t.path / "variance.json");
  CHECK(std::fabs(v["sigma2"].get<double>()) < 1e-12);
  CHECK(v["degenerate"] == true);

  // Regression constant for the 4x4 ergodic example with a single cosine.
  CHECK(run({"sigma2", input("paper_matrix.json"), input("cosine4.json")}, t.path).code == 0);
  v = read_json(t.path / "variance.json");
  CHECK(v["sigma2"].get<double>() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(v["N0"].get<int>() >= 1);

  r = run({"sigma2", "1,0;0,1", input("cosine2.json")}, t.path);
  CHECK(r.code == cli::kEscapeCap);
  CHECK(r.err.find("EscapeCapExceeded") != std::string::npos);
}

TEST_CASE("check surfaces the tail examples") {
  TempDir t;
  auto r = run({"check", input("cosine2.json"), "--theta", "1.2", "--b-grid", "2,4,8"}, t.path);
  CHECK(r.code == 0);
  auto c = read_json(t.path / "conditions.json");
  for (const auto& e : c["condF1_tail"]) CHECK(e["upper"].get<double>() == 0.0);
  CHECK(c["fit_F1"].is_null());

  r = run({"check", input("product_decay.json"), "--theta", "1.2"}, t.path);
  CHECK(r.code == cli::kConditionFail);
  CHECK(read_json(t.path / "conditions.json")["satisfied_F1"] == false);

  r = run({"check", input("leonov.json"), "--theta", "1.2", "--b-grid", "16,32,64,128,256,512,1024,2048,4096"},
          t.path);
  CHECK(r.code == 0);
  c = read_json(t.path / "conditions.json");
  CHECK(c["satisfied_F1"] == true);
  const double theta = c["fit_F1"]["theta_hat"].get<double>();
  CHECK(theta >= 1.3);
  CHECK(theta <= 2.0);

  CHECK(run({"check", input("leonov.json"), "--beta", "2.5"}, t.path).code == 0);
  r = run({"check", input("product_decay.json"), "--beta", "2.1"}, t.path);
  CHECK(r.code == cli::kConditionFail);
  CHECK(r.out.find("condF2: not satisfied") != std::string::npos);
  // No condition requested: report only.
  CHECK(run({"check", input("product_decay.json")}, t.path).code == 0);
}

TEST_CASE("stochastic commands") {
  TempDir t;
  auto r = run({"clt", input("cat_map.json"), input("coboundary.json"), "--n", "100", "--samples", "100"}, t.path);
  CHECK(r.code == cli::kDegenerate);
  CHECK(r.err.find("coboundary") != std::string::npos);

  r = run({"simulate", input("cat_map.json"), input("cosine2.json"), "--n", "200", "--samples", "2000"}, t.path);
  CHECK(r.code == 0);
  CHECK(read_json(t.path / "variance_growth.json")["rows"].size() == 1);
  CHECK(read_json(t.path / "decorrelation.json")["rows"].size() == 6);
  CHECK(read_bytes(t.path / "variance_growth.csv").rfind("n,empirical,standard_error,exact,within_3se\n200,", 0) == 0);

  r = run({"scaling", input("cat_map.json"), input("coboundary.json"), "--grid", "10,100,1000,10000", "--samples",
           "100"},
          t.path);
  CHECK(r.code == 0);
  const auto s = read_json(t.path / "scaling.json");
  CHECK(s["expected_band"][0].get<double>() == -0.1);

  const auto zero = t.path / "zero.json";
  std::ofstream(zero) << R"({"kind": "explicit", "dim": 2, "coeffs": []})";
  CHECK(run({"scaling", input("cat_map.json"), zero.string(), "--grid", "10,100,1000,10000"}, t.path).code ==
        cli::kDegenerate);
  CHECK(run({"scaling", input("cat_map.json"), input("cosine2.json"), "--grid", "10,20,40,80"}, t.path).code ==
        cli::kParse);
}

TEST_CASE("worker count does not change reports") {
  TempDir a, b;
  const std::vector<std::string> base{"simulate", input("paper_matrix.json"), input("cosine4.json"), "--n",
                                      "300", "--samples", "3000", "--seed", "7"};
  auto one = base, eight = base;
  one.insert(one.end(), {"--workers", "1"});
  eight.insert(eight.end(), {"--workers", "8"});
  CHECK(run(one, a.path).code == run(eight, b.path).code);
  for (const char* f : {"variance_growth.json", "decorrelation.json", "variance_growth.csv", "decorrelation.csv"})
    CHECK(read_bytes(a.path / f) == read_bytes(b.path / f));
}

TEST_CASE("manifest records and replays a run") {
  TempDir t;
  REQUIRE(run({"orbit", input("cat_map.json"), input("cosine2.json"), "--n", "20", "--q", "11", "--x0", "3,4",
               "--states"},
              t.path)
              .code == 0);
  const auto m = read_json(t.path / "manifest.json");
  CHECK(m["command"] == "orbit");
  CHECK(m["inputs"]["matrix"]["rows"][0][0] == 2);
  CHECK(m["versions"]["tool"] == cli::kToolVersion);
  REQUIRE(m["outputs"].size() == 1);
  CHECK(m["outputs"][0]["sha256"] == cli::sha256_file(t.path / "trajectory.csv"));

  std::ostringstream out, err;
  const auto manifest = (t.path / "manifest.json").string();
  CHECK(cli::run({"--manifest-only", manifest}, out, err) == 0);

  // A stochastic run replays to identical report bytes.
  REQUIRE(run({"clt", input("cat_map.json"), input("cosine2.json"), "--n", "200", "--samples", "500"}, t.path).code ==
          0);
  CHECK(cli::run({"--manifest-only", manifest}, out, err) == 0);

  auto tampered = read_json(t.path / "manifest.json");
  tampered["outputs"][0]["sha256"] = std::string(64, '0');
  std::ofstream(t.path / "manifest.json", std::ios::trunc) << dump(tampered);
  CHECK(cli::run({"--manifest-only", manifest}, out, err) == cli::kManifestMismatch);
}

TEST_CASE("sha256 of a known string") {
  TempDir t;
  std::ofstream(t.path / "abc") << "abc";
  CHECK(cli::sha256_file(t.path / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("output directory falls back to the environment") {
  TempDir t;
  ::setenv("TORAL_OUTPUT_DIR", t.path.string().c_str(), 1);
  std::ostringstream out, err;
  CHECK(cli::run({"classify", "2,1;1,1"}, out, err) == 0);
  ::unsetenv("TORAL_OUTPUT_DIR");
  CHECK(fs::exists(t.path / "classification.json"));
  CHECK(fs::exists(t.path / "manifest.json"));
}
