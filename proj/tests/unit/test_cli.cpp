#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "helpers.hpp"

#include "chowliu/chowliu.hpp"
#include "chowliu/serialize.hpp"

using namespace chowliu;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Run cli(const std::string& args) {
  const auto out = testing::tmp_path("cli.stdout");
  const auto err = testing::tmp_path("cli.stderr");
  const std::string cmd = std::string(CHOWLIU_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = testing::tmp_path(name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("learn structure on two columns") {
    const auto path = write_file("two.csv", "0,1\n1,0\n1,1\n0,0\n");
    const auto r = cli("learn --samples " + path + " --mode structure");
    CHECK(r.status == 0);
    CHECK(Json::parse(r.out) == Json::parse(R"({"n":2,"edges":[[0,1]]})"));
    CHECK(r.err.find("N=4 n=2 k=2 elapsed=") == 0);
  }

  TEST_CASE("params mode uses add-1 counts") {
    const auto samples = write_file("zeros.csv", "0,0\n0,0\n0,0\n");
    const auto tree = write_file("edge.json", R"({"n":2,"edges":[[0,1]]})");
    const auto r = cli("learn --samples " + samples + " --mode params --tree " + tree);
    REQUIRE(r.status == 0);
    const auto m = tree_model_from_json(Json::parse(r.out));
    // Root: (3+1)/(3+2); child row 0: (3+1)/(3+2); unseen row 1: uniform 1/2.
    CHECK(m.root_marginal[0] == doctest::Approx(0.8));
    CHECK(m.cond(1, 0, 0) == doctest::Approx(0.8));
    CHECK(m.cond(1, 1, 0) == doctest::Approx(0.5));
  }

  TEST_CASE("sample then learn full matches the library") {
    Rng rng(801);
    const auto truth = random_tree_model(5, 3, 0.05, rng);
    const auto model = write_file("truth.json", dump(to_json(truth)));
    const auto csv = testing::tmp_path("truth.csv");
    REQUIRE(cli("sample --model " + model + " -N 2000 --seed 9 --out " + csv).status == 0);
    const auto bin = testing::tmp_path("truth.cls");
    REQUIRE(cli("sample --model " + model + " -N 2000 --seed 9 --binary --out " + bin).status == 0);
    const auto in_process = dump(to_json(learn_tree_distribution(sample(truth, 2000, 9))));
    const auto a = cli("learn --samples " + csv + " --mode full");
    const auto b = cli("learn --samples " + bin + " --mode full --threads 1");
    CHECK(a.status == 0);
    CHECK(a.out == in_process);
    CHECK(b.out == in_process);
  }

  TEST_CASE("malformed input reports the line") {
    const auto path = write_file("bad.csv", "0,1\n1,x\n");
    const auto r = cli("learn --samples " + path);
    CHECK(r.status == 1);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(cli("learn --samples " + testing::tmp_path("nope.csv")).status == 1);
  }

  TEST_CASE("usage errors") {
    CHECK(cli("").status == 2);
    CHECK(cli("learn").status == 2);
    CHECK(cli("verify-facts --regime nonrealizable --epsilon 0.3").status == 2);
    CHECK(cli("verify-facts --regime sideways --epsilon 0.1").status == 2);
  }

  TEST_CASE("verify-facts") {
    const auto r = cli("verify-facts --regime realizable --epsilon 0.1");
    CHECK(r.status == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["pass"] == true);
    const auto nr = cli("verify-facts --regime nonrealizable --epsilon 0.05");
    CHECK(nr.status == 0);
    CHECK(Json::parse(nr.out)["kl_r1_r2"].get<double>() == doctest::Approx(0.01470899120501272).epsilon(1e-9));
  }

  TEST_CASE("citest verdict document") {
    std::string text;
    for (int i = 0; i < 50; ++i) text += "0,0,1\n1,1,0\n";
    const auto path = write_file("ci.csv", text);
    const auto r = cli("citest --samples " + path + " --epsilon 0.1 --delta 0.1");
    REQUIRE(r.status == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["test"] == "conditional");
    CHECK(j["samples"] == 100);
    CHECK(j["config"]["epsilon"] == 0.1);
    CHECK(j.contains("verdict"));
  }
}
