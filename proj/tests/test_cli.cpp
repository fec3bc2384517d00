#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

const std::string kCli = ISOCX_CLI;
const std::string kConfigs = ISOCX_CONFIGS;

int run(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path out_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "isocx_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace

TEST(Cli, StudyPasses) {
  const auto dir = out_dir();
  EXPECT_EQ(run("study " + kConfigs + "/role0-p2-flat.json --out " + dir.string()), 0);
  const auto csv = dir / "role0-p2-flat.csv";
  ASSERT_TRUE(std::filesystem::exists(csv));
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("level,h,dofs,err_L2", 0), 0u);
  EXPECT_TRUE(std::filesystem::exists(dir / "role0-p2-flat.summary.json"));
}

TEST(Cli, StudyConfigErrors) {
  EXPECT_EQ(run("study " + kConfigs + "/bad-levels.json --out " + out_dir().string()), 2);
  EXPECT_EQ(run("study " + kConfigs + "/mismatched-knots.json --out " + out_dir().string()), 2);
  EXPECT_EQ(run("study /nonexistent/config.json"), 2);
}

TEST(Cli, VerifyComplex) {
  EXPECT_EQ(run("verify-complex"), 0);
  EXPECT_EQ(run("verify-complex --dim 3 --fields 10"), 0);
  EXPECT_EQ(run("verify-complex --geometry cylinder-shell --degree 3"), 0);
  EXPECT_EQ(run("verify-complex --corrupt-derivative"), 1);
  EXPECT_EQ(run("verify-complex --dim 5"), 2);
  EXPECT_EQ(run("verify-complex --geometry nowhere"), 2);
}

TEST(Cli, InterfaceCheck) {
  EXPECT_EQ(run("interface-check " + kConfigs + "/geometries/cube-surface.json"), 0);
  EXPECT_EQ(run("interface-check " + kConfigs + "/geometries/two-squares.json"), 0);
  EXPECT_EQ(run("interface-check " + kConfigs + "/geometries/two-squares-refined.json"), 1);
  EXPECT_EQ(run("interface-check /nonexistent/geometry.json"), 2);
}

TEST(Cli, Misc) {
  EXPECT_EQ(run("list-geometries"), 0);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
}
