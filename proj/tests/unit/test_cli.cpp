#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "wgwin/cli.hpp"

using namespace wgwin;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<const char*> args) {
  args.insert(args.begin(), "wgwin");
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("length and grid parsing") {
  CHECK(cli::parse_length("pi") == kPi);
  CHECK(cli::parse_length("pi/2") == kPi / 2.0);
  CHECK(cli::parse_length("0.5*pi") == 0.5 * kPi);
  CHECK(cli::parse_length("1.25") == 1.25);
  CHECK_THROWS_AS((void)cli::parse_length("abc"), cli::ConfigError);
  CHECK(cli::parse_grid("1,2,3") == std::vector<double>{1, 2, 3});
  const auto g = cli::parse_grid("0.5:0.5:2");
  REQUIRE(g.size() == 4);
  CHECK(g.back() == doctest::Approx(2.0));
  CHECK_THROWS_AS((void)cli::parse_grid("1:0:2"), cli::ConfigError);
}

TEST_CASE("spectrum command") {
  const auto r = run({"spectrum", "--d", "pi", "--l", "2"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("d,l,m,parity,lambda,k,bracket_lo,bracket_hi,residual,n_modes", 0) == 0);
  CHECK(r.out.find(",1,even,0.5600") != std::string::npos);

  const auto j = run({"spectrum", "--l", "2", "--format", "json"});
  CHECK(j.code == cli::kExitOk);
  const auto arr = nlohmann::json::parse(j.out);
  CHECK(arr.size() == 1);
  CHECK(arr[0]["parity"] == "even");
}

TEST_CASE("configuration errors exit with 1") {
  CHECK(run({"spectrum", "--d", "pi", "--l", "0"}).code == cli::kExitConfig);
  CHECK(run({"spectrum", "--d", "4", "--l", "1"}).code == cli::kExitConfig);
  CHECK(run({"spectrum", "--bogus"}).code == cli::kExitConfig);
  CHECK(run({"spectrum", "--l", "x"}).code == cli::kExitConfig);
  CHECK(run({"spectrum"}).code == cli::kExitConfig);
  CHECK(run({}).code == cli::kExitConfig);
  CHECK(run({"spectrum", "--l", "1", "--config", "/nonexistent/cfg"}).code ==
        cli::kExitConfig);
}

TEST_CASE("flags override the config file") {
  const std::string path = "wgwin_test_config.cfg";
  {
    std::ofstream f(path);
    f << "# test\nd = pi/2\nl = 3\nn_modes = 40\n";
  }
  const auto a = run({"spectrum", "--config", path.c_str()});
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out.find("1.5707963267948966,3,1,") != std::string::npos);
  const auto b = run({"spectrum", "--config", path.c_str(), "--l", "2"});
  CHECK(b.out.find("1.5707963267948966,2,1,") != std::string::npos);
  {
    std::ofstream f(path);
    f << "wrong_key = 1\n";
  }
  CHECK(run({"spectrum", "--config", path.c_str(), "--l", "2"}).code ==
        cli::kExitConfig);
  std::remove(path.c_str());
}

TEST_CASE("sweep and critical commands") {
  const auto s = run({"sweep", "--d", "pi", "--l-grid", "1,2,4", "--n-modes", "30"});
  CHECK(s.code == cli::kExitOk);
  int lines = 0;
  for (char c : s.out) lines += c == '\n';
  CHECK(lines >= 4);
  const auto c = run({"critical", "--n-max", "2", "--n-modes", "30"});
  CHECK(c.code == cli::kExitOk);
  CHECK(c.out.find("\n3.1415926535897931,2,2.28") != std::string::npos);
}

TEST_CASE("output file") {
  const std::string path = "wgwin_test_out.csv";
  const auto r = run({"spectrum", "--l", "2", "--output", path.c_str()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header.rfind("d,l,m", 0) == 0);
  std::remove(path.c_str());
}
