#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "latmaj/cli.hpp"
#include "latmaj/construction.hpp"
#include "latmaj/parallel.hpp"
#include "latmaj/report.hpp"
#include "oracles.hpp"

using namespace latmaj;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kTable1 = std::string(LATMAJ_DATA_DIR) + "/table1.txt";
const std::string kTable3 = std::string(LATMAJ_DATA_DIR) + "/table3.txt";

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("latmaj_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write(const std::string& name, const Design& d) {
  const std::string path = (scratch() / name).string();
  write_design_file(path, d);
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("validate and exit codes") {
  const auto ok = run({"validate", kTable1});
  CHECK(ok.code == cli::kSuccess);
  CHECK(ok.out.find("U(27,3^8)") != std::string::npos);

  std::ofstream(scratch() / "bad.txt") << "0 0\n1 0\n";
  const auto bad = run({"validate", (scratch() / "bad.txt").string()});
  CHECK(bad.code == cli::kDomainError);
  CHECK(bad.err.find("Unbalanced") != std::string::npos);

  CHECK(run({"validate", kTable1, "--q", "4"}).code == cli::kDomainError);
  CHECK(run({"validate", "/nonexistent.txt"}).code == cli::kDomainError);
  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"validate"}).code == cli::kUsageError);
  CHECK(run({"frobnicate"}).code == cli::kUsageError);
  CHECK(run({"pc", kTable1, "--bogus"}).code == cli::kUsageError);
  CHECK(run({"bounds", "--n", "x", "--s", "4", "--q", "3", "--kernel", "variance"}).code == cli::kUsageError);
  CHECK(run({"--help"}).code == cli::kSuccess);
}

TEST_CASE("bounds") {
  const auto r = run({"bounds", "--n", "27", "--s", "4", "--q", "3", "--kernel", "variance"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("0.1775\n", 0) == 0);
  const auto j = Json::parse(run({"bounds", "--n", "27", "--s", "4", "--q", "3", "--kernel", "variance", "--json"}).out);
  CHECK(j["exact"] == "30/169");  // 390/2197 reduced
  CHECK(j["theta"] == 1);
  const auto bad = run({"bounds", "--n", "27", "--s", "4", "--q", "3", "--kernel", "exp:1.x"});
  CHECK(bad.code == cli::kDomainError);
  CHECK(bad.err.find("position") != std::string::npos);
  CHECK(run({"bounds", "--n", "27", "--s", "4", "--q", "2", "--kernel", "variance"}).code == cli::kDomainError);
}

TEST_CASE("rank: Example 1 two-stage workflow") {
  const auto r = run({"rank", kTable1, "--choose", "4", "--kernel", "exp:golden", "--json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["pool_size"] == 70);
  CHECK(j["majorants"].empty());
  CHECK(j["ranking"].size() == 14);
  CHECK(j["ranking"][0]["design"] == "{ACGH}");
  CHECK(j["ranking"][0]["rank"] == 1);
  for (const auto& row : j["ranking"]) {
    CHECK(row["design"] != "{ABDF}");
    CHECK(row["design"] != "{ADEF}");
  }
  std::size_t ties = 0;
  for (std::size_t i = 1; i < j["ranking"].size(); ++i) {
    CHECK(j["ranking"][i]["rank"].get<int>() >= j["ranking"][i - 1]["rank"].get<int>());
    ties += j["ranking"][i]["tied"].get<bool>();
  }
  CHECK(ties > 0);

  const auto human = run({"rank", kTable1, "--choose", "4", "--kernel", "exp:golden"});
  CHECK(human.out.find("14 admissible, 56 inadmissible, majorant: none") != std::string::npos);
  CHECK(human.out.find("1\t{ACGH}\t683.4102") != std::string::npos);

  const auto x = oracle::example1();
  const auto files = run({"rank", write("x1.txt", x[0]), write("x2.txt", x[1]), write("x3.txt", x[2]),
                          write("x4.txt", x[3]), "--kernel", "variance", "--json"});
  const auto jf = Json::parse(files.out);
  CHECK(jf["ranking"].size() == 2);
  CHECK(jf["ranking"][0]["rank"] == 1);
  CHECK(jf["ranking"][1]["rank"] == 1);
  CHECK(jf["inadmissible"].size() == 2);
  CHECK(run({"rank", kTable1, kTable3, "--kernel", "variance"}).code == cli::kDomainError);
}

TEST_CASE("compare") {
  const auto x = oracle::example1();
  const auto r = run({"compare", write("c1.txt", x[0]), write("c4.txt", x[3])});
  CHECK(r.code == 0);
  CHECK(r.out.find("left strictly majorized by right") != std::string::npos);
  CHECK(r.out.find("witness prefix") != std::string::npos);
  const auto j = Json::parse(run({"compare", write("c1.txt", x[0]), write("c4.txt", x[3]), "--json"}).out);
  CHECK(j["witness"].is_number());
  CHECK(run({"compare", kTable1, kTable3}).code == cli::kDomainError);
}

TEST_CASE("pc and the cumulative profile") {
  const auto j = Json::parse(run({"pc", kTable3, "--json"}).out);
  CHECK(j["sum"] == 72);
  CHECK(j["theta"] == 2);
  CHECK(j["frac"] == "4/7");
  CHECK(j["profile"].size() == 28);

  const auto rows = emit_cumsum_profile(oracle::table3());
  REQUIRE(rows.size() == 28);
  for (std::size_t r = 0; r < 28; ++r) {
    const std::int64_t step = rows[r].benchmark - (r ? rows[r - 1].benchmark : 0);
    CHECK(step == (r < 12 ? 2 : 3));
  }
  CHECK(rows.back().design == rows.back().benchmark);

  for (const auto& row : emit_cumsum_profile(oracle::oa9())) CHECK(row.design == row.benchmark);

  const Design d = oracle::table3();
  const Design after = apply_swap(d, *robin_hood_step(d, ConvexKernel::quadratic()));
  const auto before_rows = emit_cumsum_profile(d), after_rows = emit_cumsum_profile(after);
  for (std::size_t r = 0; r < 28; ++r) {
    CHECK(after_rows[r].design >= before_rows[r].design);
    CHECK(after_rows[r].design <= after_rows[r].benchmark);
  }
}

TEST_CASE("criteria JSON") {
  const auto r = run({"criteria", kTable3, "--json"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  for (const char* key : {"gwp", "deviation", "psi_c", "ave_chi2", "e_s2", "categorical_d2", "cl2", "wl2"})
    CHECK(j.contains(key));
  CHECK(j["categorical_d2"].is_null());
  CHECK(j["gwp"]["value"].size() == 6);
  CHECK(j["gwp"]["bound"].size() == 6);
  CHECK(Json::parse(j.dump()) == j);

  const auto cat = Json::parse(run({"criteria", kTable3, "--disc-a", "0.5", "--disc-b", "0", "--json"}).out);
  CHECK(cat["categorical_d2"]["params"]["rho"] == "1.5");
  CHECK(run({"criteria", kTable3, "--disc-a", "0.5"}).code == cli::kDomainError);
  CHECK(run({"criteria", kTable3, "--disc-a", "0.5", "--disc-b", "0.5"}).code == cli::kDomainError);

  const auto three = Json::parse(run({"criteria", kTable1, "--json"}).out);
  CHECK(three["e_s2"].is_null());
  CHECK(three["cl2"].is_null());
  CHECK_FALSE(three["wl2"].is_null());
}

TEST_CASE("gen and improve are deterministic") {
  const auto g1 = run({"gen", "--n", "8", "--s", "6", "--q", "2", "--seed", "42"});
  const auto g2 = run({"gen", "--n", "8", "--s", "6", "--q", "2", "--seed", "42"});
  CHECK(g1.code == 0);
  CHECK(g1.out == g2.out);
  CHECK(parse_design(g1.out) == random_balanced(8, 6, 2, 42));
  const std::string gen_path = (scratch() / "gen.txt").string();
  CHECK(run({"gen", "--n", "8", "--s", "6", "--q", "2", "--seed", "42", "--out", gen_path}).code == 0);
  CHECK(slurp(gen_path) == g1.out);
  CHECK(run({"gen", "--n", "8", "--s", "6", "--q", "3", "--seed", "1"}).code == cli::kDomainError);

  std::string outputs[2], traces[2];
  for (int rep = 0; rep < 2; ++rep) {
    set_thread_limit(rep == 0 ? 1 : 4);
    const std::string out = (scratch() / ("imp" + std::to_string(rep) + ".txt")).string();
    const std::string trace = (scratch() / ("imp" + std::to_string(rep) + ".jsonl")).string();
    const auto r = run({"improve", gen_path, "--kernel", "quadratic", "--restarts", "8", "--seed", "3", "--out", out,
                        "--trace", trace});
    CHECK(r.code == 0);
    outputs[rep] = slurp(out);
    traces[rep] = slurp(trace);
  }
  set_thread_limit(0);
  CHECK(outputs[0] == outputs[1]);
  CHECK(traces[0] == traces[1]);
  CHECK(parse_design(outputs[0]).runs() == 8);

  std::istringstream lines(traces[0]);
  std::string line, last;
  int iter = 0;
  while (std::getline(lines, line)) {
    const auto rec = Json::parse(line);
    if (rec.contains("iter")) CHECK(rec["iter"] == ++iter);
    last = line;
  }
  const auto final_rec = Json::parse(last);
  CHECK(final_rec.contains("final_psi"));
  CHECK(final_rec.contains("terminated"));

  const auto stdout_run = run({"improve", kTable3, "--kernel", "quadratic"});
  CHECK(stdout_run.out.find("initial psi: 244.0000") != std::string::npos);
  CHECK(run({"improve", kTable3, "--kernel", "nope"}).code == cli::kDomainError);
}

TEST_CASE("subdesigns") {
  const auto r = run({"subdesigns", kTable1, "--choose", "4", "--list"});
  CHECK(r.code == 0);
  CHECK(r.out.find("subdesigns: 70") != std::string::npos);
  CHECK(r.out.find("{ACGH}\t") != std::string::npos);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 72);
  CHECK(run({"subdesigns", kTable1, "--choose", "9"}).code == cli::kDomainError);
  CHECK(run({"subdesigns", kTable1}).code == cli::kUsageError);
}
