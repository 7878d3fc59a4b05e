#include <doctest.h>

#include "dlab/cli.hpp"
#include "dlab/hypercore.hpp"
#include "dlab/lab.hpp"
#include "dlab/matchpower.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dlab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream o, e;
  int c = run_cli(args, o, e);
  return {c, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("dlab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gen, pm and verify") {
  auto dir = scratch("pm");
  auto g = (dir / "g.khg").string(), m = (dir / "m.txt").string();
  REQUIRE(cli({"gen", "--model", "complete", "-n", "9", "-k", "3", "--out", g}).code == 0);
  CHECK(load_khg(g) == Hypergraph::complete(9, 3));
  auto r = cli({"pm", "--in", g, "--out", m});
  CHECK(r.code == 0);
  std::ifstream mf(m);
  CHECK(check_matching(load_khg(g), read_matching(mf), true).empty());
  CHECK(cli({"verify", "--in", g, "--matching", m, "--perfect"}).code == 0);

  std::ofstream(dir / "bad.txt") << "0 1 2\n2 3 4\n";
  auto bad = cli({"verify", "--in", g, "--matching", (dir / "bad.txt").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("rejected") != std::string::npos);

  auto sb = (dir / "sb.khg").string();
  REQUIRE(cli({"gen", "--model", "space", "-n", "9", "-k", "3", "-d", "1", "--out", sb}).code == 0);
  CHECK(cli({"pm", "--in", sb}).code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"nope"}).code == 2);
  CHECK(cli({"pm"}).code == 2);                                  // --in required
  CHECK(cli({"pm", "--in", "/nonexistent/file.khg"}).code == 2);  // unreadable input
  CHECK(cli({"gen", "-n", "5", "--format", "xml"}).code == 2);
  CHECK(cli({"verify"}).code == 2);
  CHECK(cli({"experiment"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("mdk reproduces the graph case") {
  for (int n : {4, 6}) {
    auto r = cli({"mdk", "-n", std::to_string(n), "-k", "2", "-d", "1", "--format", "csv"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    auto t = read_csv(in);
    CHECK(t.summary_value("m") == std::to_string((n + 1) / 2));
    CHECK(t.summary_value("agree") == "1");
  }
}

TEST_CASE("experiment resilience is byte-identical across reruns and threads") {
  auto dir = scratch("exp");
  auto cfg = dir / "r.cfg";
  std::ofstream(cfg) << "name = smoke\nn = 12\nk = 3\nd = 2\np = 0.8\ngamma = 0.15\ntrials = 30\nmaster_seed = 9\n"
                        "output = "
                     << (dir / "r.csv").string() << "\n";
  REQUIRE(cli({"experiment", "resilience", "--config", cfg.string()}).code == 0);
  auto first = slurp(dir / "r.csv");
  REQUIRE(cli({"experiment", "resilience", "--config", cfg.string(), "--threads", "3"}).code == 0);
  CHECK(slurp(dir / "r.csv") == first);
  CHECK(first.rfind("#dlab-csv v1 resilience\n", 0) == 0);
  CHECK(first.find("trial,seed,n,k,d,p,gamma,threshold,min_deg,pm_found,nodes,seconds") != std::string::npos);

  // --seed overrides master_seed and changes the trials
  auto other = (dir / "o.csv").string();
  REQUIRE(cli({"experiment", "resilience", "--config", cfg.string(), "--seed", "10", "--out", other}).code == 0);
  CHECK(slurp(other) != first);

  auto js = cli({"experiment", "inheritance", "--format", "json", "--config", cfg.string(), "--out", ""});
  CHECK(js.code == 0);

  std::ofstream(dir / "bad.cfg") << "p = 2\n";
  CHECK(cli({"experiment", "resilience", "--config", (dir / "bad.cfg").string()}).code == 2);
  std::ofstream(dir / "junk.cfg") << "what\n";
  CHECK(cli({"experiment", "load", "--config", (dir / "junk.cfg").string()}).code == 2);
}

TEST_CASE("absorber, template and pipeline commands") {
  auto dir = scratch("misc");
  auto g = (dir / "g.khg").string();
  REQUIRE(cli({"gen", "--model", "complete", "-n", "18", "-k", "3", "--out", g}).code == 0);

  auto a = (dir / "a.jsonl").string();
  REQUIRE(cli({"absorber", "--in", g, "--roots", "0,1,2", "--min-order", "1", "--out", a}).code == 0);
  CHECK(cli({"verify", "--in", g, "--absorbers", a}).code == 0);
  CHECK(cli({"absorber", "--in", g, "--roots", "0,x"}).code == 2);

  auto t = (dir / "t").string();
  auto tr = cli({"template", "-r", "6", "-k", "3", "--seed", "1", "--out", t});
  CHECK(tr.code == 0);
  CHECK(cli({"verify", "--template", t + ".khg", "--sidecar", t + ".json"}).code == 0);

  auto rep = (dir / "rep.json").string(), m = (dir / "m.txt").string();
  auto p1 = cli({"pipeline", "--in", g, "-d", "1", "--seed", "3", "--out", rep, "--matching", m});
  CHECK(p1.code == 0);
  CHECK(cli({"verify", "--in", g, "--matching", m, "--perfect"}).code == 0);
  auto once = slurp(rep);
  REQUIRE(cli({"pipeline", "--in", g, "-d", "1", "--seed", "3", "--out", rep}).code == 0);
  CHECK(slurp(rep) == once);

  auto sb = (dir / "sb.khg").string();
  REQUIRE(cli({"gen", "--model", "space", "-n", "9", "-k", "3", "-d", "1", "--out", sb}).code == 0);
  auto p2 = cli({"pipeline", "--in", sb, "-d", "1"});
  CHECK(p2.code == 1);
  CHECK(p2.out.find("\"success\": false") != std::string::npos);
}
