// End-to-end checks that spawn the installed CLI binary.
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

#define CLI_CHECK(cond)                                                        \
  do {                                                                         \
    if (!(cond)) {                                                             \
      ++g_failures;                                                            \
      std::cerr << "FAIL " << __FILE__ << ':' << __LINE__ << ": " << #cond     \
                << '\n';                                                       \
    }                                                                          \
  } while (0)

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(PERMSTAT_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "permstat_cli_tests";
  fs::create_directories(dir);
  const std::string d = dir.string();

  // gen footrule writes the expected matrix
  {
    const auto r = run("gen --kind footrule --n 3 --dims 2 --out " + d + "/f.json");
    CLI_CHECK(r.exit_code == 0);
    const std::string text = slurp(dir / "f.json");
    CLI_CHECK(text.find("[0.0,0.5,1.0,0.5,0.0,0.5,1.0,0.5,0.0]") != std::string::npos);
  }

  // gen uniform is deterministic: same flags, identical bytes
  {
    CLI_CHECK(run("gen --kind uniform --n 50 --dims 3 --seed 1 --out " + d + "/u1.json").exit_code == 0);
    CLI_CHECK(run("gen --kind uniform --n 50 --dims 3 --seed 1 --out " + d + "/u2.json").exit_code == 0);
    CLI_CHECK(slurp(dir / "u1.json") == slurp(dir / "u2.json"));
    CLI_CHECK(run("gen --kind uniform --n 50 --dims 3 --seed 2 --out " + d + "/u3.json").exit_code == 0);
    CLI_CHECK(slurp(dir / "u1.json") != slurp(dir / "u3.json"));
  }

  // gen product
  {
    const auto r = run("gen --kind product --cvec 0.5,0.5 --dvec 1,1 --out " + d + "/p.json");
    CLI_CHECK(r.exit_code == 0);
    CLI_CHECK(slurp(dir / "p.json").find("[0.5,0.5,0.5,0.5]") != std::string::npos);
    CLI_CHECK(run("gen --kind product --cvec 1,2 --dvec 1,1 --out " + d + "/bad.json").exit_code == 2);
  }

  // range violations exit 2 with a diagnostic
  {
    const auto r = run("gen --kind constant --n 3 --dims 3 --c 1.5 --out " + d + "/c.json");
    CLI_CHECK(r.exit_code == 2);
    CLI_CHECK(r.output.find("[0,1]") != std::string::npos);
  }

  // tails on a constant array: t = 0 row is 1, every later row is 0
  {
    CLI_CHECK(run("gen --kind constant --n 5 --dims 3 --c 0.5 --out " + d + "/const.json").exit_code == 0);
    const auto r = run("tails --array " + d + "/const.json --stat t2 --samples 5000 --seed 1 --t 0:2:0.5");
    CLI_CHECK(r.exit_code == 0);
    CLI_CHECK(r.output.find("t,point,ci_low,ci_high\n") != std::string::npos);
    CLI_CHECK(count_lines(r.output) == 2 + 5);  // metadata + header + 5 grid rows
    CLI_CHECK(r.output.find("\n0,1,") != std::string::npos);
    CLI_CHECK(r.output.find("\n0.5,0,") != std::string::npos);
    CLI_CHECK(r.output.find("\n2,0,") != std::string::npos);
  }

  // stat / dims mismatch is an input error
  {
    const auto r = run("tails --array " + d + "/const.json --stat t3 --samples 10 --seed 1 --t 0:1:1");
    CLI_CHECK(r.exit_code == 2);
  }

  // byte-identical data output across thread counts, fresh file each time
  {
    const std::string base = "tails --array " + d + "/u1.json --stat t1 --samples 200000 --seed 9 "
                             "--t 0:60:0.5 --out " + d;
    CLI_CHECK(run(base + "/t1.csv --threads 1").exit_code == 0);
    CLI_CHECK(run(base + "/t4.csv --threads 4").exit_code == 0);
    CLI_CHECK(run(base + "/t8.csv --threads 8").exit_code == 0);
    const std::string ref = slurp(dir / "t1.csv");
    CLI_CHECK(!ref.empty());
    CLI_CHECK(ref == slurp(dir / "t4.csv"));
    CLI_CHECK(ref == slurp(dir / "t8.csv"));
  }

  // bounds: clamped single row, full t2 clamp region, json tails format
  {
    auto r = run("bounds --stat t3 --mean 0 --t 1:1:1");
    CLI_CHECK(r.exit_code == 0);
    CLI_CHECK(r.output == "t,bound\n1,1\n");

    r = run("bounds --stat t2 --n 5 --mean 1 --t 0:3:1");
    CLI_CHECK(r.exit_code == 0);
    CLI_CHECK(r.output == "t,bound\n0,1\n1,1\n2,1\n3,1\n");

    r = run("bounds --stat t1 --n 4 --mean 8 --t 0:2:1");
    CLI_CHECK(r.exit_code == 0);
    CLI_CHECK(count_lines(r.output) == 4);

    r = run("tails --array " + d + "/const.json --stat t2 --samples 100 --seed 1 --t 0:1:1 --format json");
    CLI_CHECK(r.exit_code == 0);
    CLI_CHECK(r.output.find("\"rows\":[") != std::string::npos);
  }

  // sweep: strictly decreasing bound across n in the t-dominant regime
  {
    const auto r = run("bounds sweep --stat t1 --lambda 0.5 --n-list 100,1000,10000 "
                       "--mean-coeff 0.5 --mean-power 1");
    CLI_CHECK(r.exit_code == 0);
    CLI_CHECK(r.output.find("n,t,mean,exponent,bound,asymptote,ratio\n") != std::string::npos);
    std::vector<double> bounds_col;
    std::istringstream lines(r.output);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
      // bound is column 5
      std::istringstream fields(line);
      std::string field;
      for (int i = 0; i < 5; ++i) std::getline(fields, field, ',');
      bounds_col.push_back(std::stod(field));
    }
    CLI_CHECK(bounds_col.size() == 3);
    CLI_CHECK(bounds_col[1] < bounds_col[0]);
    CLI_CHECK(bounds_col[2] < bounds_col[1]);
  }

  // verify: green suite, negative control red, cap exceeded is a usage error
  {
    auto r = run("verify --suite all --n 4 --seed 1 --trials 60 --samples 20000");
    CLI_CHECK(r.exit_code == 0);
    CLI_CHECK(r.output.find("\"pass\": true") != std::string::npos);

    r = run("verify --suite exchange-t2 --n 4 --seed 1 --negative-control");
    CLI_CHECK(r.exit_code == 1);
    CLI_CHECK(r.output.find("\"pass\": false") != std::string::npos);

    r = run("verify --suite exchange-t2 --n 9");
    CLI_CHECK(r.exit_code == 2);
    CLI_CHECK(r.output.find("cap") != std::string::npos);
  }

  // verify report is byte-identical across thread counts
  {
    const std::string base = "verify --suite oracle-tails --n 4 --seed 3 --samples 50000 --out " + d;
    CLI_CHECK(run(base + "/v1.json --threads 1").exit_code == 0);
    CLI_CHECK(run(base + "/v4.json --threads 4").exit_code == 0);
    CLI_CHECK(run(base + "/v8.json --threads 8").exit_code == 0);
    const std::string ref = slurp(dir / "v1.json");
    CLI_CHECK(!ref.empty());
    CLI_CHECK(ref == slurp(dir / "v4.json"));
    CLI_CHECK(ref == slurp(dir / "v8.json"));
  }

  // missing subcommand / unknown flags are usage errors
  CLI_CHECK(run("").exit_code == 2);
  CLI_CHECK(run("tails --array missing.json --stat t1 --t 0:1:1").exit_code == 2);

  fs::remove_all(dir);
  if (g_failures == 0) {
    std::cout << "cli_tests: all checks passed\n";
    return 0;
  }
  std::cerr << "cli_tests: " << g_failures << " failed checks\n";
  return 1;
}
