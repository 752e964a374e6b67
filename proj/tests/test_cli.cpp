#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "mismatch_cli_scratch";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const char* name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& tail, std::string* text = nullptr,
            const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path log = scratch() / ("cli_out_" + std::to_string(counter++));
  const std::string cmd = env_prefix + MISMATCH_CLI_BIN + " " + tail + " >" +
                          log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (text) *text = slurp(log);
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string run_dir_of(const std::string& text) {
  const std::string key = "run directory: ";
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  const auto end = text.find('\n', pos);
  return text.substr(pos + key.size(), end - pos - key.size());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

const fs::path& good_problem() {
  static const fs::path p = write_file(
      "good.json",
      R"({"input_size":2,"output_size":2,"W":[[0.9,0.1],[0.1,0.9]],"q":[[0.95,0.05],[0.05,0.95]]})");
  return p;
}

std::string outs() { return " --out " + (scratch() / "runs").string(); }

}  // namespace

TEST_CASE("validate accepts a good problem and reports its shape") {
  std::string text;
  const int rc = run_cli("validate --problem " + good_problem().string(), &text);
  CHECK(rc == 0);
  CHECK(text.find("ok input_size=2 output_size=2") != std::string::npos);
}

TEST_CASE("validate exit codes distinguish failure families") {
  const auto bad_row = write_file(
      "bad_row.json",
      R"({"input_size":2,"output_size":2,"W":[[0.9,0.09],[0.1,0.9]],"q":[[0.95,0.05],[0.05,0.95]]})");
  CHECK(run_cli("validate --problem " + bad_row.string()) == 2);

  const auto zero_metric = write_file(
      "zero_metric.json",
      R"({"input_size":2,"output_size":2,"W":[[0.9,0.1],[0.1,0.9]],"q":[[0.95,0.0],[0.05,0.95]]})");
  CHECK(run_cli("validate --problem " + zero_metric.string()) == 3);

  CHECK(run_cli("validate --problem /nonexistent/missing.json") == 2);

  const auto not_json = write_file("not_json.json", "{broken");
  CHECK(run_cli("validate --problem " + not_json.string()) == 2);
}

TEST_CASE("usage errors exit with code 2") {
  std::string text;
  CHECK(run_cli("validate --problem x.json --no-such-flag", &text) == 2);
  CHECK(text.find("UsageError") != std::string::npos);
  CHECK(run_cli("", &text) == 2);
}

TEST_CASE("bsc prints the closed form") {
  std::string text;
  const int rc = run_cli("bsc --p 0.1 --pp 0.05 --bits" + outs(), &text);
  CHECK(rc == 0);
  CHECK(text.find("0.368064") != std::string::npos);
  CHECK(text.find("0.746229") != std::string::npos);

  const fs::path dir = run_dir_of(text);
  CHECK(fs::exists(dir / "bsc.csv"));
  CHECK(fs::exists(dir / "run_meta.json"));
}

TEST_CASE("spectrum runs are byte-reproducible") {
  const std::string tail = "spectrum --problem " + good_problem().string() +
                           " --n 1 2 --eps 0.1 0.5" + outs();
  std::string t1, t2;
  REQUIRE(run_cli(tail, &t1) == 0);
  REQUIRE(run_cli(tail, &t2) == 0);
  const fs::path d1 = run_dir_of(t1);
  const fs::path d2 = run_dir_of(t2);
  REQUIRE(d1 != d2);

  for (const char* name : {"spectrum_n1.csv", "spectrum_n2.csv", "cdf_n2.csv",
                           "queries.csv"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(d1 / name));
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }
  CHECK(slurp(d1 / "spectrum_n1.csv").rfind("value,prob\n", 0) == 0);
}

TEST_CASE("rates table is monotone in the extension order") {
  std::string text;
  const int rc = run_cli("rates --problem " + good_problem().string() +
                             " --k 1 2 --mode s1" + outs(),
                         &text);
  REQUIRE(rc == 0);
  const fs::path dir = run_dir_of(text);
  REQUIRE(fs::exists(dir / "rates.csv"));
  REQUIRE(fs::exists(dir / "rate_k1.json"));
  REQUIRE(fs::exists(dir / "rate_k2.json"));

  std::ifstream in(dir / "rates.csv");
  std::string line;
  REQUIRE(std::getline(in, line));
  const auto header = split_csv(line);
  size_t k_col = header.size(), v_col = header.size();
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "k") k_col = i;
    if (header[i] == "value_nats") v_col = i;
  }
  REQUIRE(k_col < header.size());
  REQUIRE(v_col < header.size());

  double v1 = 0, v2 = 0;
  while (std::getline(in, line)) {
    const auto cells = split_csv(line);
    REQUIRE(cells.size() == header.size());
    if (cells[k_col] == "1") v1 = std::stod(cells[v_col]);
    if (cells[k_col] == "2") v2 = std::stod(cells[v_col]);
  }
  CHECK(v1 > 0.34);
  CHECK(v2 >= v1 - 1e-6);
}

TEST_CASE("simulate writes the codebook and the error table") {
  std::string text;
  const int rc = run_cli("simulate --problem " + good_problem().string() +
                             " --n 3 --M 4 --trials 5000 --seed 7" + outs(),
                         &text);
  REQUIRE(rc == 0);
  const fs::path dir = run_dir_of(text);
  CHECK(fs::exists(dir / "codebook.json"));
  CHECK(fs::exists(dir / "error.csv"));
  const std::string table = slurp(dir / "error.csv");
  CHECK(table.find("stochastic") != std::string::npos);
  CHECK(table.find("max_metric") != std::string::npos);
}

TEST_CASE("checks subcommand reports success") {
  std::string text;
  const int rc = run_cli("checks --problem " + good_problem().string() +
                             " --n 1 2 3 --eps 0.1 --pc-n 2 --pc-m 2"
                             " --pc-seeds 5" +
                             outs(),
                         &text);
  CHECK(rc == 0);
  CHECK(text.find("all checks hold") != std::string::npos);
}

TEST_CASE("budget override from the environment exits with code 1") {
  std::string text;
  const int rc = run_cli("spectrum --problem " + good_problem().string() +
                             " --n 6" + outs(),
                         &text, "MISMATCH_LAB_BUDGET=4 ");
  CHECK(rc == 1);
  CHECK(text.find("BudgetExceeded") != std::string::npos);
}

TEST_CASE("jsonl format emits one object per row") {
  std::string text;
  const int rc = run_cli("gap --problem " + good_problem().string() +
                             " --format jsonl" + outs(),
                         &text);
  REQUIRE(rc == 0);
  const fs::path dir = run_dir_of(text);
  REQUIRE(fs::exists(dir / "gap.jsonl"));
  const std::string body = slurp(dir / "gap.jsonl");
  REQUIRE(!body.empty());
  CHECK(body.front() == '{');
  CHECK(body.find("\"eta_upper\"") != std::string::npos);
}
