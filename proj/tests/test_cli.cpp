#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string cmd = std::string(SNOWFLAKE_CLI) + " " + args + " 2>&1";
  CliRun res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
  const int st = pclose(pipe);
  res.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return res;
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "snowflake_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("eigen --matrix '[[4]]' --r 8").status, 0);
  EXPECT_EQ(cli("eigen --matrix '[[0,1],[1,0]]' --r 8").status, 2);  // not irreducible with a non-unit row
  EXPECT_EQ(cli("eigen --matrix '[[4]]' --r 1").status, 2);
  EXPECT_EQ(cli("eigen --no-such-flag").status, 64);
  EXPECT_EQ(cli("frobnicate").status, 64);
  EXPECT_EQ(cli("--out /nonexistent/dir/out.json eigen --matrix '[[4]]' --r 8").status, 74);
  CliRun bad = cli("vm --m 2 --word 'q7'");
  EXPECT_EQ(bad.status, 2);
  EXPECT_EQ(bad.out.rfind("error: ", 0), 0u) << bad.out;
}

TEST(Cli, EigenReportsExactExponents) {
  CliRun r = cli("eigen --matrix '[[4]]' --r 8");
  ASSERT_EQ(r.status, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["alpha"]["num"], 3);
  EXPECT_EQ(j["alpha"]["den"], 2);
  EXPECT_EQ(j["dehn_exponent"]["num"], 3);
  EXPECT_EQ(j["dehn_exponent"]["den"], 1);
}

TEST(Cli, OutputFileAndManifest) {
  const auto dir = scratch();
  const auto out = dir / "present.json";
  const auto manifest = dir / "manifest.json";
  CliRun r = cli("--out " + out.string() + " --manifest " + manifest.string() +
              " present --matrix '[[4]]' --r 8 --format json");
  ASSERT_EQ(r.status, 0) << r.out;
  const std::string body = slurp(out);
  EXPECT_FALSE(body.empty());
  auto m = nlohmann::json::parse(slurp(manifest));
  EXPECT_EQ(m["tool"], "snowflake");
  EXPECT_EQ(m["output"]["bytes"].get<std::size_t>(), body.size());
  EXPECT_EQ(m["output"]["fnv1a64"].get<std::string>().size(), 16u);
  EXPECT_TRUE(m["argv"].is_array());
  std::filesystem::remove_all(dir);
}

TEST(Cli, SameArgumentsSameBytes) {
  for (const char* args : {"word --matrix '[[1,1],[2,1]]' --r 7/2 --N 500 --emit flat",
                           "disk --matrix '[[4]]' --r 8 --depths 1..8 --format json",
                           "present --matrix '[[1,1],[2,1]]' --r 4 --kill-tree --format calg"}) {
    CliRun a = cli(args), b = cli(args);
    EXPECT_EQ(a.status, 0) << args << "\n" << a.out;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, CsvHeaders) {
  EXPECT_EQ(first_line(cli("disk --matrix '[[4]]' --r 8 --depths 1..3 --format csv").out),
            "index,N,perimeter,area,shell");
  EXPECT_EQ(first_line(cli("ball --matrix '[[4]]' --r 8 --k 3 --j 1..3 --format csv").out),
            "index,boundary,interior,shell");
}

TEST(Cli, SolveReadsLinesFromStdin) {
  const auto dir = scratch();
  const auto words = dir / "words.txt";
  {
    std::ofstream f(words);
    f << "s1 c1 s1^-1 a1^-8\n"
      << "a1 a2\n";
  }
  CliRun r = cli("solve --matrix '[[4]]' --r 8 < " + words.string());
  ASSERT_EQ(r.status, 0) << r.out;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<nlohmann::json> rows;
  while (std::getline(lines, line))
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0]["trivial"].get<bool>());
  EXPECT_FALSE(rows[1]["trivial"].get<bool>());

  {
    std::ofstream f(words);
    f << "a1 s9\n";
  }
  CliRun bad = cli("solve --matrix '[[4]]' --r 8 < " + words.string());
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.out.find("\"error\""), std::string::npos) << bad.out;
  std::filesystem::remove_all(dir);
}

TEST(Cli, FitReportsPass) {
  CliRun r = cli("fit --matrix '[[4]]' --r 8 --kind alpha --depths 2..12");
  ASSERT_EQ(r.status, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["slope"].get<double>(), 1.5, 0.15);
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, SpectrumInversion) {
  CliRun r = cli("spectrum --s 8/5 --k 2");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("Z^1"), std::string::npos) << r.out;
  EXPECT_EQ(cli("spectrum --s 1/2 --k 2").status, 2);
}

TEST(Cli, RenderEmitsSvg) {
  CliRun r = cli("render --matrix '[[1,1],[2,1]]' --r 4 --N 64");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.rfind("<svg", 0), 0u);
}
