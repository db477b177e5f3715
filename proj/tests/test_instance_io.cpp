#include "gard/instance_io.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace gard;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("gard_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(InstanceIo, RoundTripIsExact) {
  datagen::GenConfig cfg;
  cfg.n = 25;
  cfg.m = 3;
  cfg.s = 4;
  cfg.seed = 77;
  cfg.inlier = datagen::StableParams{0.45, 0.0, 0.3, 0.0};
  const auto inst = datagen::gen_instance(cfg);
  const auto prefix = scratch_dir("roundtrip") / "inst";
  io::write_instance(prefix, inst);
  const auto back = io::read_instance(prefix, 2.5);
  EXPECT_EQ(back.problem.x, inst.problem.x);
  EXPECT_EQ(back.problem.y, inst.problem.y);
  EXPECT_EQ(back.truth.theta0, inst.truth.theta0);
  EXPECT_EQ(back.truth.eta, inst.truth.eta);
  EXPECT_EQ(back.truth.u0, inst.truth.u0);
  EXPECT_EQ(back.problem.epsilon0, 2.5);
}

TEST(InstanceIo, OutlierFileIsOneBased) {
  datagen::GenConfig cfg;
  cfg.n = 6;
  cfg.m = 1;
  cfg.s = 1;
  cfg.seed = 3;
  const auto inst = datagen::gen_instance(cfg);
  const auto prefix = scratch_dir("onebased") / "inst";
  io::write_instance(prefix, inst);
  std::ifstream in(prefix.string() + "_u0.csv");
  long index = 0;
  char comma = 0;
  double value = 0.0;
  in >> index >> comma >> value;
  EXPECT_EQ(index, inst.truth.u0.indices()[0] + 1);
  EXPECT_EQ(comma, ',');
  EXPECT_EQ(value, inst.truth.u0.values()[0]);
}

TEST(InstanceIo, MalformedFilesThrow) {
  const auto dir = scratch_dir("malformed");
  {
    std::ofstream out(dir / "ragged.csv");
    out << "1,2\n3\n";
  }
  EXPECT_THROW((void)io::read_matrix_csv(dir / "ragged.csv"), io::CsvError);
  {
    std::ofstream out(dir / "text.csv");
    out << "1,abc\n";
  }
  EXPECT_THROW((void)io::read_matrix_csv(dir / "text.csv"), io::CsvError);
  EXPECT_THROW((void)io::read_matrix_csv(dir / "missing.csv"), io::CsvError);
  EXPECT_THROW((void)io::read_instance(dir / "nothing", 0.0), io::CsvError);
}
