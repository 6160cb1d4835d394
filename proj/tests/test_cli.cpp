#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string exe = ITECOUNT_EXE;
const std::string media = MEDIA_DIR;

struct Outcome {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ite_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Outcome run(const std::string& args, const std::string& env = "") {
  const fs::path dir = scratch("io");
  const std::string cmd = env + " " + exe + " " + args + " > " + (dir / "out").string() + " 2> " + (dir / "err").string();
  const int status = std::system(cmd.c_str());
  Outcome o{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "out"), slurp(dir / "err")};
  fs::remove_all(dir);
  return o;
}

std::string medium(const std::string& name) { return media + "/" + name + ".json"; }

fs::path write_medium(const std::string& name, const std::string& text) {
  const fs::path dir = scratch("media");
  const fs::path p = dir / (name + ".json");
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("validate exit codes", "[cli]") {
  for (const char* m : {"disk_n4", "ball_n4", "annulus_r03_n05", "disk_a4"}) {
    const auto o = run("validate " + medium(m));
    CAPTURE(m, o.err);
    CHECK(o.code == 0);
  }
  const auto disk = run("validate " + medium("disk_n4"));
  CHECK(disk.out.find("index.boundary") != std::string::npos);
  CHECK(disk.out.find("satisfied") != std::string::npos);

  const auto gz = run("validate " + medium("gamma_zero"));
  CHECK(gz.code == 3);
  CHECK(gz.err.rfind("itecount: reason=GammaZeroError exit=3 message=", 0) == 0);

  // n returns to 1 on the boundary: no condition holds and no regime applies.
  const auto tuned = write_medium("tuned", R"({"dimension": 2, "outer_radius": 1, "a": 1,
      "n": {"kind": "radial", "profile_id": "quadratic", "params": {"c0": 2, "c2": -1}}})");
  const auto t = run("validate " + tuned.string());
  CAPTURE(t.out, t.err);
  CHECK(t.code == 2);
  CHECK(t.out.find("discreteness guaranteed: no") != std::string::npos);
  CHECK(t.err.find("reason=RegimeError exit=2") != std::string::npos);
  fs::remove_all(tuned.parent_path());
}

TEST_CASE("usage and configuration errors exit 1", "[cli]") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("validate").code == 1);
  CHECK(run("validate /nonexistent.json").code == 1);
  CHECK(run("spectrum " + medium("disk_n4") + " --no-such-flag 3").code == 1);
  CHECK(run("spectrum " + medium("disk_n4") + " --backend sideways -o /tmp/ite_cli_unused").code == 1);

  const auto bad = write_medium("bad", R"({"dimension": 2, "outer_radius": 1, "a": 1, "n": 4, "colour": 1})");
  const auto o = run("validate " + bad.string());
  CHECK(o.code == 1);
  CHECK(o.err.find("reason=ConfigError") != std::string::npos);
  const auto run_key = write_medium("runkey", R"({"dimension": 2, "outer_radius": 1, "a": 1, "n": 4, "run": {"speed": 9}})");
  CHECK(run("spectrum " + run_key.string() + " -o /tmp/ite_cli_unused").code == 1);
  CHECK(run("spectrum " + medium("disk_n4") + " -o /tmp/ite_cli_unused", "ITE_THREADS=many").code == 1);
  fs::remove_all(bad.parent_path());
  fs::remove_all(run_key.parent_path());
  fs::remove_all("/tmp/ite_cli_unused");
}

TEST_CASE("spectrum writes the report set", "[cli]") {
  const auto dir = scratch("spectrum");
  const auto o = run("spectrum " + medium("disk_n4") + " --lambda-max 60 -o " + dir.string());
  REQUIRE(o.code == 0);
  for (const char* f : {"ites.csv", "counting.csv", "events.csv", "summary.json", "timings.json"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["ite_count"] == 17);
  CHECK(summary["final"]["N_T"] == 32);
  CHECK(summary["manifest"]["config"]["lambda_max"].get<double>() == 60.0);
  CHECK(summary["manifest"]["backend"] == "radial");
  fs::remove_all(dir);
}

TEST_CASE("flags override the medium's run block", "[cli]") {
  const auto spec = write_medium("withrun", R"({"dimension": 2, "outer_radius": 1, "a": 1, "n": 4,
                                                 "run": {"lambda_max": 30, "points_per_decade": 32}})");
  const auto a = scratch("cfg_a"), b = scratch("cfg_b");
  REQUIRE(run("spectrum " + spec.string() + " -o " + a.string()).code == 0);
  REQUIRE(run("spectrum " + spec.string() + " --lambda-max 40 -o " + b.string(), "ITE_THREADS=2").code == 0);
  const auto ca = nlohmann::json::parse(slurp(a / "summary.json"))["manifest"]["config"];
  const auto cb = nlohmann::json::parse(slurp(b / "summary.json"))["manifest"]["config"];
  CHECK(ca["lambda_max"].get<double>() == 30.0);
  CHECK(ca["points_per_decade"] == 32);
  CHECK(ca["threads"] == 1);
  CHECK(cb["lambda_max"].get<double>() == 40.0);
  CHECK(cb["points_per_decade"] == 32);
  CHECK(cb["threads"] == 2);
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(spec.parent_path());
}

TEST_CASE("thread count never changes an output file", "[cli][property]") {
  std::vector<fs::path> dirs;
  for (int t : {1, 1, 3}) {
    dirs.push_back(scratch("threads_" + std::to_string(dirs.size())));
    REQUIRE(run("count " + medium("annulus_r03_n05") + " --lambda-max 300 --threads " + std::to_string(t) +
                " -o " + dirs.back().string())
                .code != 1);
  }
  for (const char* f : {"ites.csv", "counting.csv", "events.csv", "summary.json"}) {
    const auto ref = slurp(dirs[0] / f);
    CHECK(!ref.empty());
    for (std::size_t i = 1; i < dirs.size(); ++i) {
      CAPTURE(f, i);
      // the effective thread count is echoed; everything else must match
      if (std::string(f) == "summary.json") {
        auto x = nlohmann::json::parse(ref), y = nlohmann::json::parse(slurp(dirs[i] / f));
        x["manifest"]["config"].erase("threads");
        y["manifest"]["config"].erase("threads");
        CHECK(x.dump() == y.dump());
      } else {
        CHECK(slurp(dirs[i] / f) == ref);
      }
    }
  }
  for (const auto& d : dirs) fs::remove_all(d);
}

TEST_CASE("weyl-check exit code follows its verdict", "[cli]") {
  const auto dir = scratch("weyl");
  const auto o = run("weyl-check " + medium("disk_n4") + " --lambda-max 2000 -o " + dir.string());
  REQUIRE(fs::exists(dir / "summary.json"));
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  const bool ok = summary["verdicts"]["weyl_bound"].get<bool>();
  CHECK(o.code == (ok ? 0 : 4));
  if (!ok) CHECK(o.err.find("reason=BoundNotSatisfied exit=4") != std::string::npos);
  CHECK(summary["verdicts"]["bookkeeping"] == true);
  fs::remove_all(dir);
}

TEST_CASE("probe-dtn prints symbol samples", "[cli]") {
  const auto o = run("probe-dtn " + medium("disk_n4") + " --mode 0 --lambda 1 --op plain");
  REQUIRE(o.code == 0);
  std::istringstream lines(o.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header.find("lambda") != std::string::npos);
  CHECK(row.rfind("plain,0,1,-0.57508091", 0) == 0);
}

TEST_CASE("estimate-check on the disk", "[cli]") {
  const auto dir = scratch("estimate");
  const auto o = run("estimate-check " + medium("disk_n4") + " -o " + dir.string());
  CHECK(o.code == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["verdicts"]["estimates_decade_stable"] == true);
  CHECK(fs::exists(dir / "estimates.csv"));
  fs::remove_all(dir);
}
