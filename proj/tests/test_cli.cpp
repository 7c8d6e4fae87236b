#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + MATCHLAB_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) r.out += buf;
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string drop_wall(const std::string& row) { return row.substr(0, row.rfind(',')); }

}  // namespace

TEST_CASE("cost writes one CSV row per replicate") {
  const auto r = run("cost --d 2 --n 100 --reps 3 --seed 5");
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "run_id,d,p,q,n,rep,seed,cost,eta,tau,ratio_tau,err_radius,wall_ms");
  CHECK(l[1].find(",2,2,2,100,0,5,") != std::string::npos);
  CHECK(l[3].find(",100,2,5,") != std::string::npos);
}

TEST_CASE("same seed gives identical rows except for timing") {
  const auto a = lines(run("cost --d 2 --n 100 --reps 2 --seed 5").out);
  const auto b = lines(run("cost --d 2 --n 100 --reps 2 --seed 5 --jobs 2").out);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 1; k < a.size(); ++k) CHECK(drop_wall(a[k]) == drop_wall(b[k]));
}

TEST_CASE("environment seed overrides the flag") {
  const auto a = lines(run("cost --d 2 --n 80 --seed 9").out);
  const auto b = lines(run("cost --d 2 --n 80 --seed 1", "MATCHLAB_SEED=9").out);
  REQUIRE(a.size() == 2);
  REQUIRE(b.size() == 2);
  CHECK(drop_wall(a[1]) == drop_wall(b[1]));
}

TEST_CASE("config file supplies defaults, flags win") {
  {
    std::ofstream f("cli_test.cfg");
    f << "# run\nd = 3\nn=60\nreps=2\np=1\n";
  }
  const auto r = run("cost --config cli_test.cfg --reps 1");
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[1].find(",3,1,2,60,0,") != std::string::npos);
  const auto flags = lines(run("cost --d 3 --n 60 --reps 1 --p 1").out);
  REQUIRE(flags.size() == 2);
  CHECK(drop_wall(flags[1]) == drop_wall(l[1]));
}

TEST_CASE("exit codes") {
  CHECK(run("--help").code == 0);
  CHECK(run("cost --d 2").code == 2);
  CHECK(run("cost --d 7 --n 10").code == 2);
  CHECK(run("cost --d 2 --n 10 --quant-atoms 5").code == 2);
  CHECK(run("cost --d 2 --n 100000").code == 3);
  CHECK(run("cost --d 2 --n 10 --p 0.5").code == 2);
  CHECK(run("sweep --d 2 --n-grid 100,200").code == 2);
  CHECK(run("bogus").code == 2);
}

TEST_CASE("sweep emits a fit") {
  const auto r = run("sweep --d 2 --n-grid 60,120,240 --reps 2 --plot-data cli_plot");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["fit"]["n"].size() == 3);
  CHECK(j["fit"]["exponent"].is_number());
  std::ifstream plot("cli_plot/ratio_tau.dat");
  CHECK(plot.good());
}

TEST_CASE("split modes emit JSON") {
  for (const std::string mode : {"radial", "lower-bound"}) {
    const auto r = run("split --mode " + mode + " --d 2 --n 200");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["mode"] == mode);
  }
}

TEST_CASE("jsonl log has one record per replicate") {
  REQUIRE(run("cost --d 2 --n 50 --reps 2 --out /dev/null --jsonl cli_log.jsonl").code == 0);
  std::ifstream f("cli_log.jsonl");
  std::string l;
  int count = 0;
  while (std::getline(f, l)) {
    const auto j = nlohmann::json::parse(l);
    CHECK(j["config"]["n"] == 50);
    ++count;
  }
  CHECK(count == 2);
}
