#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fisheye/io.hpp"
#include "fisheye/labels.hpp"
#include "fisheye/manifest.hpp"
#include "fisheye/synthesis.hpp"

namespace fs = std::filesystem;

namespace fisheye {
namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("fisheye_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult invoke(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = std::string("\"") + FISHEYE_CLI + "\" " + args + " > \"" +
                            out.string() + "\" 2> \"" + (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
  }

  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, SynthesizeSummaryAndManifest) {
  const CliResult r = invoke("synthesize --count 10 --seed 3 --deviation-prob 0 --resolution 64 --out " +
                    p("ds"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("central=8 deviated=0 free=2"), std::string::npos) << r.out;
  const auto manifest = read_manifest(dir_ / "ds" / kManifestName);
  ASSERT_EQ(manifest.size(), 10u);
  for (const auto& rec : manifest) EXPECT_TRUE(fs::exists(dir_ / "ds" / rec.flow));
}

TEST_F(Cli, SynthesizeAllDeviated) {
  const CliResult r = invoke("synthesize --count 10 --seed 3 --deviation-prob 1 --resolution 64 --out " +
                    p("ds"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("central=0 deviated=8 free=2"), std::string::npos) << r.out;
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(invoke("synthesize --count 10 --out " + p("ds")).code, 1);  // no seed
  EXPECT_EQ(invoke("no-such-command").code, 1);
  EXPECT_EQ(invoke("synthesize --count 4 --seed 1 --free-frac 2 --out " + p("ds")).code, 1);
}

TEST_F(Cli, LabelsThenRectifyWithIdentityFlow) {
  write_image(procedural_source(9, 48), dir_ / "src.png");
  ASSERT_EQ(invoke("labels --k1 1 --height 48 --width 48 --dvm " + p("d.rfir") + " --flow " +
                p("f.rfir")).code,
            0);
  EXPECT_EQ(read_flow(dir_ / "f.rfir"), identity_flow(48, 48));
  EXPECT_EQ(read_file(dir_ / "d.rfir"), encode_map(unit_dvm(48, 48)));
  ASSERT_EQ(invoke("rectify --image " + p("src.png") + " --flow " + p("f.rfir") + " --out " +
                p("out.png")).code,
            0);
  EXPECT_EQ(read_image(dir_ / "out.png"), read_image(dir_ / "src.png"));
}

TEST_F(Cli, LabelsMatchLibrary) {
  ASSERT_EQ(invoke("labels --k1 0.9 --k2 0.2 --k3 0.1 --height 40 --width 56 --dvm " +
                p("d.rfir") + " --flow " + p("f.rfir")).code,
            0);
  const auto cam = CameraModel::central({0.9, 0.2, 0.1, 0.0}, 40, 56);
  EXPECT_EQ(encode_map(compute_dvm(cam, 40, 56)), read_file(dir_ / "d.rfir"));
  EXPECT_EQ(encode_map(compute_backward_flow(cam, 40, 56)), read_file(dir_ / "f.rfir"));
  // Folding parameters are a data error.
  EXPECT_EQ(invoke("labels --k1 1 --k2 -0.4 --height 40 --width 40 --dvm " + p("x.rfir")).code, 2);
}

TEST_F(Cli, EvaluateIdenticalImages) {
  write_image(procedural_source(4, 32), dir_ / "a.png");
  const CliResult r = invoke("evaluate --ref " + p("a.png") + " --test " + p("a.png"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"psnr\":\"inf\""), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"ssim\":1.000000"), std::string::npos) << r.out;
}

TEST_F(Cli, EvaluatePartialFailure) {
  write_image(procedural_source(4, 32), dir_ / "a.png");
  write_image(procedural_source(5, 32), dir_ / "b.png");
  std::ofstream(dir_ / "pairs.txt") << p("a.png") << " " << p("b.png") << "\n"
                                     << p("a.png") << " " << p("missing.png") << "\n";
  const CliResult r = invoke("evaluate --pairs " + p("pairs.txt"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("b.png"), std::string::npos);

  std::ofstream(dir_ / "bad.txt") << p("missing.png") << " " << p("b.png") << "\n";
  EXPECT_EQ(invoke("evaluate --pairs " + p("bad.txt")).code, 2);
}

TEST_F(Cli, EvaluateMasked) {
  write_image(procedural_source(4, 32), dir_ / "a.png");
  write_map(identity_flow(32, 32), dir_ / "f.rfir");
  const CliResult full = invoke("evaluate --ref " + p("a.png") + " --test " + p("a.png"));
  const CliResult masked =
      invoke("evaluate --masked --ref " + p("a.png") + " --test " + p("a.png") + " --mask " +
          p("f.rfir"));
  ASSERT_EQ(masked.code, 0);
  EXPECT_NE(masked.out.find("\"masked\":true"), std::string::npos);
  EXPECT_NE(full.out.find("\"masked\":false"), std::string::npos);
}

TEST_F(Cli, RoundtripReportsMean) {
  const CliResult r = invoke("roundtrip --count 3 --seed 1 --resolution 96");
  ASSERT_EQ(r.code, 0);
  const auto pos = r.out.find("mean_psnr=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GE(std::stod(r.out.substr(pos + 10)), 28.0);
}

TEST(DeviationCount, ThousandSamplesWithinBand) {
  DatasetConfig cfg;
  cfg.splits = {{"train", 1250}};
  cfg.seed = 11;
  std::size_t non_free = 0, deviated = 0;
  for (const auto& plan : plan_dataset(cfg)) {
    non_free += plan.kind != SampleKind::kDistortionFree;
    deviated += plan.kind == SampleKind::kDeviated;
  }
  ASSERT_EQ(non_free, 1000u);
  EXPECT_GE(deviated, 651u);
  EXPECT_LE(deviated, 749u);
}

}  // namespace
}  // namespace fisheye
