#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "explore/bench.hpp"
#include "explore/error.hpp"
#include "explore/map_io.hpp"
#include "oracles.hpp"

using namespace explore;
namespace fs = std::filesystem;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("explore_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("ascii row parses into free, occupied, free") {
  const auto g = parse_ascii_map(".#.\n");
  REQUIRE(g.width() == 3);
  REQUIRE(g.height() == 1);
  CHECK(g.at(CellIndex{0, 0}) == Cell::Free);
  CHECK(g.at(CellIndex{1, 0}) == Cell::Occupied);
  CHECK(g.at(CellIndex{2, 0}) == Cell::Free);
}

TEST_CASE("empty map is rejected as invalid dimensions") {
  CHECK(code_of([] { parse_ascii_map(""); }) == ErrorCode::InvalidDimensions);
  CHECK(code_of([] { OccupancyGrid(0, 0, 1.0); }) == ErrorCode::InvalidDimensions);
  CHECK(code_of([] { OccupancyGrid(2, 2, 0.0); }) == ErrorCode::InvalidDimensions);
}

TEST_CASE("malformed ascii reports the offending line") {
  CHECK(code_of([] { parse_ascii_map("..\n.x\n"); }) == ErrorCode::MalformedMap);
  CHECK(code_of([] { parse_ascii_map("...\n..\n"); }) == ErrorCode::MalformedMap);
}

TEST_CASE("grid invariants: shape, state and world/cell conversion") {
  const auto g = oracle::ascii({"..#", "?.."}, 0.5, {1.0, 2.0});
  CHECK(g.size() == static_cast<std::size_t>(g.width() * g.height()));
  CHECK(g.count(Cell::Free) + g.count(Cell::Occupied) + g.count(Cell::Unknown) == g.size());
  CHECK(g.cell_center({0, 0}) == Point2{1.25, 2.25});
  CHECK(g.cell_center({2, 1}) == Point2{2.25, 2.75});
  CHECK(g.at(CellIndex{0, 1}) == Cell::Unknown);
  REQUIRE(g.world_to_cell({2.2, 2.9}));
  CHECK(*g.world_to_cell({2.2, 2.9}) == CellIndex{2, 1});
  CHECK_FALSE(g.world_to_cell({0.9, 2.1}));
  CHECK_FALSE(g.world_to_cell({2.6, 2.1}));
  CHECK(g.at_or({5, 5}, Cell::Occupied) == Cell::Occupied);
}

TEST_CASE("bundled fixtures match golden occupied counts") {
  // Counted independently by tallying '#' characters in the fixture files.
  const std::pair<const char*, std::size_t> golden[] = {
      {"maze64", 694}, {"corridor_office", 384}, {"open_rooms", 532}};
  for (const auto& [name, occupied] : golden) {
    CAPTURE(name);
    const auto path = resolve_map(name, bundled_maps_dir());
    REQUIRE(path);
    const auto g = load_map(*path);
    CHECK(g.count(Cell::Occupied) == occupied);
    CHECK(g.resolution() == doctest::Approx(0.4));
  }
  CHECK(load_map(*resolve_map("maze64", bundled_maps_dir())).width() == 64);
  CHECK(load_map(*resolve_map("corridor_office", bundled_maps_dir())).width() >= 40);
}

TEST_CASE("save then load round-trips ascii maps") {
  std::mt19937_64 rng(7);
  const auto dir = scratch_dir("roundtrip");
  for (int k = 0; k < 10; ++k) {
    const auto g = oracle::random_grid(rng, 5 + k, 3 + 2 * k, 0.5, 0.3, 0.25 * (k + 1));
    const auto path = dir / ("m" + std::to_string(k) + ".map");
    save_map(g, path, {{"start0", "1,1,0"}});
    const auto back = load_map(path);
    CHECK(back == g);
    CHECK(read_metadata(path).extra.at("start0") == "1,1,0");
  }
}

TEST_CASE("metadata parsing lifts known keys") {
  const auto m = parse_metadata("# comment\nresolution=0.05\norigin_x=-1.5\norigin_y=2\nfoo=bar\n");
  CHECK(m.resolution == 0.05);
  CHECK(m.origin == Point2{-1.5, 2.0});
  CHECK(m.extra.at("foo") == "bar");
  CHECK(parse_metadata(format_metadata(m)).extra == m.extra);
  CHECK(code_of([] { parse_metadata("resolution=abc\n"); }) == ErrorCode::MalformedMap);
  CHECK(sidecar_path("maps/maze64.map") == fs::path("maps/maze64.meta"));
  CHECK(format_for("a.pgm") == MapFormat::Pgm);
  CHECK(format_for("a.map") == MapFormat::Ascii);
}

TEST_CASE("pgm gray levels map through the 250/50 thresholds") {
  std::string bytes = "P5\n5 1\n255\n";
  for (unsigned char v : {255, 250, 249, 51, 50}) bytes.push_back(static_cast<char>(v));
  const auto g = parse_pgm_map(bytes, 0.1);
  REQUIRE(g.width() == 5);
  CHECK(g.at(CellIndex{0, 0}) == Cell::Free);
  CHECK(g.at(CellIndex{1, 0}) == Cell::Free);
  CHECK(g.at(CellIndex{2, 0}) == Cell::Unknown);
  CHECK(g.at(CellIndex{3, 0}) == Cell::Unknown);
  CHECK(g.at(CellIndex{4, 0}) == Cell::Occupied);
  CHECK(code_of([] { parse_pgm_map("P2\n1 1\n255\n0"); }) == ErrorCode::MalformedMap);
  CHECK(code_of([] { parse_pgm_map("P5\n2 2\n255\n\x01"); }) == ErrorCode::MalformedMap);
}

TEST_CASE("pgm files load through the sidecar") {
  const auto dir = scratch_dir("pgm");
  Raster<std::uint8_t> img(3, 2, 255);
  img[CellIndex{1, 0}] = 0;
  img[CellIndex{2, 1}] = 128;
  write_pgm(img, dir / "m.pgm");
  std::ofstream(dir / "m.meta") << "resolution=0.2\norigin_x=1\norigin_y=0\n";
  const auto g = load_map(dir / "m.pgm");
  CHECK(g.resolution() == 0.2);
  CHECK(g.origin() == Point2{1.0, 0.0});
  CHECK(g.at(CellIndex{1, 0}) == Cell::Occupied);
  CHECK(g.at(CellIndex{2, 1}) == Cell::Unknown);
  CHECK(g.count(Cell::Free) == 4);
}
