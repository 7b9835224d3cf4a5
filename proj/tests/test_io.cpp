#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "fisheye/error.hpp"
#include "fisheye/io.hpp"
#include "fisheye/manifest.hpp"

namespace fs = std::filesystem;

namespace fisheye {
namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() /
                       ("fisheye_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  fs::create_directories(dir);
  return dir;
}

DistortionVectorMap golden_dvm() {
  DistortionVectorMap dvm(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) dvm.at(r, c) = {0.25 * c - 0.5, -0.125 * r + 1.0};
  }
  return dvm;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kInvalidArgument;
}

TEST(MapFormat, OneByOneFlowBytes) {
  const auto bytes = encode_map(FlowMap(1, 1, Vec2{3.5, -2.0}));
  ASSERT_EQ(bytes.size(), kMapHeaderSize + 8);
  const std::vector<std::uint8_t> payload(bytes.end() - 8, bytes.end());
  EXPECT_EQ(payload, (std::vector<std::uint8_t>{0x00, 0x00, 0x60, 0x40, 0x00, 0x00, 0x00, 0xC0}));
  const std::vector<std::uint8_t> header(bytes.begin(), bytes.begin() + kMapHeaderSize);
  EXPECT_EQ(header, (std::vector<std::uint8_t>{'R', 'F', 'I', 'R', 1, 0, 0, 0, 1, 0, 0, 0,
                                               1, 0, 0, 0, 2, 0, 0, 0}));
}

TEST(MapFormat, GoldenFiles) {
  const fs::path golden = FISHEYE_GOLDEN_DIR;
  EXPECT_EQ(encode_map(FlowMap(1, 1, Vec2{3.5, -2.0})), read_file(golden / "flow_1x1.rfir"));
  EXPECT_EQ(encode_map(golden_dvm()), read_file(golden / "dvm_4x4.rfir"));
  EXPECT_EQ(read_dvm(golden / "dvm_4x4.rfir"), golden_dvm());
}

TEST(MapFormat, RoundTripIsBitExact) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<float> value(-300.0f, 300.0f);
  std::uniform_int_distribution<int> side(1, 17);
  const fs::path dir = temp_dir();
  for (int i = 0; i < 20; ++i) {
    FlowMap flow(side(gen), side(gen));
    for (auto& v : flow.values()) v = {value(gen), value(gen)};
    write_map(flow, dir / "f.rfir");
    const FlowMap back = read_flow(dir / "f.rfir");
    EXPECT_EQ(back, flow);
    EXPECT_EQ(encode_map(back), read_file(dir / "f.rfir"));
  }
  // Doubles are rounded to float32 once; a second pass is stable.
  FlowMap precise(2, 2, Vec2{0.1, 1.0 / 3.0});
  const auto once = encode_map(precise);
  EXPECT_EQ(encode_map(decode_flow(once)), once);
  fs::remove_all(dir);
}

TEST(MapFormat, ReadMapDispatchesOnKind) {
  const fs::path dir = temp_dir();
  write_map(golden_dvm(), dir / "d.rfir");
  EXPECT_TRUE(std::holds_alternative<DistortionVectorMap>(read_map(dir / "d.rfir")));
  write_map(identity_flow(3, 2), dir / "f.rfir");
  EXPECT_TRUE(std::holds_alternative<FlowMap>(read_map(dir / "f.rfir")));
  fs::remove_all(dir);
}

TEST(MapFormat, Errors) {
  const auto flow = encode_map(identity_flow(2, 2));
  EXPECT_EQ(code_of([&] { decode_dvm(flow); }), Errc::kKindMismatch);
  auto bad_magic = flow;
  bad_magic[0] = 'X';
  EXPECT_EQ(code_of([&] { decode_flow(bad_magic); }), Errc::kBadMagic);
  auto bad_version = flow;
  bad_version[4] = 2;
  EXPECT_EQ(code_of([&] { decode_flow(bad_version); }), Errc::kBadVersion);
  auto truncated = flow;
  truncated.pop_back();
  EXPECT_EQ(code_of([&] { decode_flow(truncated); }), Errc::kTruncated);
  EXPECT_EQ(code_of([&] { decode_flow({'R', 'F'}); }), Errc::kTruncated);
  EXPECT_EQ(code_of([&] { encode_map(FlowMap(1, 1, Vec2{NAN, 0.0})); }), Errc::kNonFinite);
  EXPECT_EQ(code_of([&] { read_flow("/nonexistent/file.rfir"); }), Errc::kIo);
}

SampleRecord deviated_record() {
  SampleRecord rec;
  rec.id = "train_000004";
  rec.split = "train";
  rec.kind = SampleKind::kDeviated;
  rec.source = "photos/a.png";
  rec.seed = 18446744073709551557ULL;
  rec.params = RadialParams{1.0312, 0.1 / 3.0, 0.2, 1e-5};
  rec.transform = ViewTransform{3, 17, 140, 256};
  rec.image = "images/train_000004.png";
  rec.dvm = "dvm/train_000004.rfir";
  rec.flow = "flow/train_000004.rfir";
  return rec;
}

TEST(Manifest, RecordRoundTrip) {
  const SampleRecord rec = deviated_record();
  const std::string line = encode_record(rec);
  EXPECT_EQ(decode_record(line), rec);
  EXPECT_EQ(encode_record(decode_record(line)), line);
  EXPECT_EQ(line.find("\"id\""), 1u);
  EXPECT_LT(line.find("\"params\""), line.find("\"transform\""));

  SampleRecord free_rec = rec;
  free_rec.kind = SampleKind::kDistortionFree;
  free_rec.params.reset();
  free_rec.transform.reset();
  EXPECT_EQ(decode_record(encode_record(free_rec)), free_rec);
}

TEST(Manifest, SchemaErrors) {
  SampleRecord rec = deviated_record();
  rec.transform.reset();
  EXPECT_EQ(code_of([&] { encode_record(rec); }), Errc::kSchemaError);

  const std::string good = encode_record(deviated_record());
  std::string no_transform = good;
  const auto start = no_transform.find(",\"transform\"");
  const auto end = no_transform.find('}', start);
  no_transform.erase(start, end - start + 1);
  try {
    decode_manifest(good + "\n" + no_transform + "\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSchemaError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(code_of([&] { decode_record("{not json"); }), Errc::kSchemaError);
  EXPECT_EQ(code_of([&] { decode_record("[1,2]"); }), Errc::kSchemaError);
}

TEST(Images, PngAndPpmRoundTrip) {
  const fs::path dir = temp_dir();
  std::mt19937_64 gen(2);
  Image img(13, 21);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(gen());
  write_image(img, dir / "a.png");
  write_image(img, dir / "a.ppm");
  EXPECT_EQ(read_image(dir / "a.png"), img);
  EXPECT_EQ(read_image(dir / "a.ppm"), img);
  EXPECT_EQ(code_of([&] { write_image(img, dir / "a.bmp"); }), Errc::kIo);
  EXPECT_EQ(code_of([&] { read_image(dir / "missing.png"); }), Errc::kIo);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace fisheye
