#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adyn/specfile.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string bin() {
  const char* p = std::getenv("ADYN_BIN");
  REQUIRE_MESSAGE(p != nullptr, "ADYN_BIN must point at the CLI binary");
  return p;
}

std::string data_dir() {
  const char* p = std::getenv("ADYN_DATA");
  REQUIRE_MESSAGE(p != nullptr, "ADYN_DATA must point at the data directory");
  return p;
}

fs::path tmp_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "adyn_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  fs::path out = tmp_dir() / "stdout.txt";
  fs::path err = tmp_dir() / "stderr.txt";
  std::string cmd = args + " > " + out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ostringstream so, se;
  so << std::ifstream(out).rdbuf();
  se << std::ifstream(err).rdbuf();
  r.out = so.str();
  r.err = se.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ostringstream s;
  s << std::ifstream(p).rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("check maps verdicts onto the exit-code trichotomy") {
  RunResult conv = run(bin() + " check --spec " + data_dir() + "/ex2.system");
  CHECK(conv.exit_code == 0);
  CHECK(conv.out.find("verdict Convergent") != std::string::npos);

  RunResult osc = run(bin() + " check-r --r 3 --spec " + data_dir() + "/ex3_4.system");
  CHECK(osc.exit_code == 10);
  CHECK(osc.out.find("verdict NonConvergent") != std::string::npos);

  fs::path bad = tmp_dir() / "bad.system";
  std::ofstream(bad) << "system\nn 1\nalphabet 1 x\nwhat 1\nend\n";
  RunResult err = run(bin() + " check --spec " + bad.string());
  CHECK(err.exit_code == 2);
  CHECK(err.err.find("line 4") != std::string::npos);
}

TEST_CASE("emitted witnesses are accepted by simulate --verify-witness") {
  fs::path w = tmp_dir() / "ex3.witness";
  RunResult osc = run(bin() + " check --spec " + data_dir() + "/ex3_4.system --witness-out " +
                      w.string());
  REQUIRE(osc.exit_code == 10);
  RunResult verify =
      run(bin() + " simulate --spec " + data_dir() + "/ex3_4.system --verify-witness " +
          w.string());
  CHECK(verify.exit_code == 0);
  CHECK(verify.out.find("witness verified") != std::string::npos);

  fs::path w2 = tmp_dir() / "ex3_r.witness";
  RunResult oscr = run(bin() + " check-r --r 3 --spec " + data_dir() +
                       "/ex3_4.system --witness-out " + w2.string());
  REQUIRE(oscr.exit_code == 10);
  CHECK(run(bin() + " simulate --spec " + data_dir() + "/ex3_4.system --verify-witness " +
            w2.string())
            .exit_code == 0);

  fs::path w3 = tmp_dir() / "ex3_synth.witness";
  RunResult synth =
      run(bin() + " synthesize --spec " + data_dir() + "/ex3_4.system --out " + w3.string());
  REQUIRE(synth.exit_code == 0);
  CHECK(run(bin() + " simulate --spec " + data_dir() + "/ex3_4.system --verify-witness " +
            w3.string())
            .exit_code == 0);
}

TEST_CASE("generator and decider compose in a pipeline") {
  RunResult r6 = run(bin() + " generate snake --dim 3 | " + bin() + " check-r --r 6");
  CHECK(r6.exit_code == 10);
  RunResult r5 = run(bin() + " generate snake --dim 3 | " + bin() + " check-r --r 5");
  CHECK(r5.exit_code == 0);
}

TEST_CASE("stable-states prints the fixed points") {
  RunResult r = run(bin() + " stable-states --spec " + data_dir() + "/ex2.system");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("count 3") != std::string::npos);
}

TEST_CASE("adapters read application files from stdin or --in") {
  RunResult pennies =
      run(bin() + " adapt game --in " + data_dir() + "/pennies.game | " + bin() + " check");
  CHECK(pennies.exit_code == 10);  // no pure equilibrium: never stabilizes
  RunResult disagree =
      run(bin() + " adapt spp --in " + data_dir() + "/disagree.spp | " + bin() + " check");
  CHECK(disagree.exit_code == 10);
  RunResult latch =
      run(bin() + " adapt circuit --in " + data_dir() + "/latch.circuit | " + bin() + " check");
  CHECK(latch.exit_code == 10);
  RunResult social =
      run(bin() + " adapt social --in " + data_dir() + "/triangle.social | " + bin() + " check");
  CHECK(social.exit_code == 10);
  RunResult congestion = run(bin() + " adapt congestion --in " + data_dir() +
                             "/cycle.congestion | " + bin() + " check");
  CHECK(congestion.exit_code == 10);
}

TEST_CASE("simulate runs and reports stabilization") {
  RunResult r = run(bin() + " simulate --spec " + data_dir() +
                    "/ex2.system --horizon 6 --schedule roundrobin --initial \"x x\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("stabilized") != std::string::npos);
  RunResult json = run(bin() + " check --spec " + data_dir() + "/ex2.system --format json");
  CHECK(json.out.find("\"verdict\"") != std::string::npos);
}

TEST_CASE("regret experiments emit the delimited table") {
  RunResult r = run(bin() + " regret --config " + data_dir() + "/pennies_mw.regret");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("seed\tplayer\tT\text_regret\tswap_regret\tce_gap\tavg_gain") !=
        std::string::npos);
  int rows = 0;
  for (char c : r.out) rows += c == '\n';
  CHECK(rows >= 3);  // header + 1 seed x 2 players
}

TEST_CASE("format round-trip property holds for all shipped system files") {
  for (const auto& entry : fs::directory_iterator(data_dir())) {
    if (entry.path().extension() != ".system") continue;
    std::string text = slurp(entry.path());
    adyn::SystemSpec spec = adyn::parse_system(text);
    adyn::SystemSpec back = adyn::parse_system(adyn::format_system(spec));
    CHECK_MESSAGE(back == spec, entry.path().string());
  }
}

TEST_CASE("deterministic output given a seed flag") {
  std::string cmd = bin() + " simulate --spec " + data_dir() +
                    "/coin.system --horizon 30 --schedule randomfair --r 2 --seed 9";
  RunResult a = run(cmd), b = run(cmd);
  CHECK(a.out == b.out);
  RunResult c = run(bin() + " simulate --spec " + data_dir() +
                    "/coin.system --horizon 30 --schedule randomfair --r 2 --seed 10");
  CHECK(a.out != c.out);
}

TEST_CASE("color prints the stable coloring and the good-state count") {
  RunResult r = run(bin() + " color --spec " + data_dir() + "/ex4_4.system");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("good-initial-states 18") != std::string::npos);
  CHECK(r.out.find("y y y y : none") != std::string::npos);
}

TEST_CASE("random systems generate, round-trip and decide") {
  RunResult r = run(bin() + " generate random --n 4 --seed 3 | " + bin() + " check");
  CHECK((r.exit_code == 0 || r.exit_code == 10));
  CHECK(r.out.find("verdict") != std::string::npos);
}
