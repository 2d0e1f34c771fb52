#include <fstream>

#include "doctest.h"
#include "percolor/error.hpp"
#include "percolor/image.hpp"
#include "temp_dir.hpp"

using namespace percolor;

TEST_SUITE("image") {

TEST_CASE("png round trip") {
  test::TempDir dir("img");
  RasterImage img{3, 2, {{1, 2, 3}, {255, 0, 0}, {0, 255, 0}, {0, 0, 255}, {10, 20, 30}, {200, 100, 50}}};
  write_png(dir / "a.png", img);
  const RasterImage back = read_image(dir / "a.png");
  CHECK(back.width == 3);
  CHECK(back.height == 2);
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("alpha is composited over white") {
  test::TempDir dir("img");
  const std::uint8_t rgba[] = {255, 0, 0, 255, 0, 0, 0, 0, 0, 0, 0, 128, 100, 100, 100, 64};
  write_png(dir / "a.png", 4, 1, rgba, 4);
  const RasterImage back = read_image(dir / "a.png");
  CHECK(back.at(0, 0) == Srgb8{255, 0, 0});
  CHECK(back.at(1, 0) == Srgb8{255, 255, 255});
  // (0 * 128 + 255 * 127 + 127) / 255 = 127
  CHECK(back.at(2, 0) == Srgb8{127, 127, 127});
  // (100 * 64 + 255 * 191 + 127) / 255 = 216
  CHECK(back.at(3, 0) == Srgb8{216, 216, 216});
}

TEST_CASE("jpeg decodes close to the source") {
  test::TempDir dir("img");
  RasterImage img{16, 16, std::vector<Srgb8>(256, Srgb8{40, 120, 200})};
  write_jpeg(dir / "a.jpg", img, 100);
  const RasterImage back = read_image(dir / "a.jpg");
  REQUIRE(back.width == 16);
  REQUIRE(back.height == 16);
  for (const auto& p : back.pixels) {
    CHECK(std::abs(p.r - 40) <= 3);
    CHECK(std::abs(p.g - 120) <= 3);
    CHECK(std::abs(p.b - 200) <= 3);
  }
}

TEST_CASE("errors name the path") {
  test::TempDir dir("img");
  CHECK_THROWS_AS(read_image(dir / "missing.png"), IoError);
  {
    std::ofstream(dir / "junk.png") << "definitely not an image";
  }
  try {
    read_image(dir / "junk.png");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("junk.png") != std::string::npos);
  }
  {
    std::ofstream out(dir / "trunc.png", std::ios::binary);
    out << "\x89PNG\r\n\x1a\n";
  }
  CHECK_THROWS_AS(read_image(dir / "trunc.png"), IoError);
  const std::uint8_t px[] = {0, 0, 0};
  CHECK_THROWS_AS(write_png(dir / "bad.png", 1, 1, px, 2), UsageError);
}

}  // TEST_SUITE
