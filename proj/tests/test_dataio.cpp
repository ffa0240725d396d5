#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dune/dataio.hpp"
#include "dune/errors.hpp"
#include "dune/rng.hpp"

using namespace dune;
namespace fs = std::filesystem;

namespace {

void append_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> idx_images(std::uint32_t count, std::uint32_t rows,
                                     std::uint32_t cols,
                                     const std::vector<std::uint8_t>& pixels) {
    std::vector<std::uint8_t> out;
    append_u32_be(out, 0x00000803);
    append_u32_be(out, count);
    append_u32_be(out, rows);
    append_u32_be(out, cols);
    out.insert(out.end(), pixels.begin(), pixels.end());
    return out;
}

std::vector<std::uint8_t> idx_labels(std::uint32_t count,
                                     const std::vector<std::uint8_t>& labels) {
    std::vector<std::uint8_t> out;
    append_u32_be(out, 0x00000801);
    append_u32_be(out, count);
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

fs::path write_temp(const std::string& name,
                    const std::vector<std::uint8_t>& bytes) {
    fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return path;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("dataio") {

TEST_CASE("load_idx parses the golden pair") {
    auto images = idx_images(2, 2, 2, {0, 128, 255, 64, 255, 255, 0, 1});
    auto labels = idx_labels(2, {3, 9});
    auto ip = write_temp("dune_golden_images.idx", images);
    auto lp = write_temp("dune_golden_labels.idx", labels);

    auto ds = load_idx(ip, lp);
    CHECK(ds.count() == 2);
    CHECK(ds.image_width == 2);
    CHECK(ds.image_height == 2);
    CHECK(ds.labels == std::vector<int>{3, 9});
    CHECK(ds.images.at(0, 0) == 0.0);
    CHECK(ds.images.at(0, 1) == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
    CHECK(ds.images.at(0, 2) == 1.0);
    CHECK(ds.images.at(0, 3) == doctest::Approx(64.0 / 255.0).epsilon(1e-15));
    CHECK(ds.images.at(1, 0) == 1.0);
    CHECK(ds.images.at(1, 3) == doctest::Approx(1.0 / 255.0).epsilon(1e-15));
}

TEST_CASE("load_idx reports distinct failures") {
    auto good_images = idx_images(1, 2, 2, {0, 0, 0, 0});
    auto good_labels = idx_labels(1, {5});

    SUBCASE("wrong image magic") {
        auto bad = good_images;
        bad[3] = 0x07;
        auto ip = write_temp("dune_badmagic_images.idx", bad);
        auto lp = write_temp("dune_badmagic_labels.idx", good_labels);
        CHECK_THROWS_WITH_AS(load_idx(ip, lp),
                             doctest::Contains("magic"), ParseError);
    }
    SUBCASE("wrong label magic") {
        auto bad = good_labels;
        bad[3] = 0x03;
        auto ip = write_temp("dune_badlmagic_images.idx", good_images);
        auto lp = write_temp("dune_badlmagic_labels.idx", bad);
        CHECK_THROWS_WITH_AS(load_idx(ip, lp),
                             doctest::Contains("magic"), ParseError);
    }
    SUBCASE("truncated pixel data") {
        auto bad = good_images;
        bad.pop_back();
        auto ip = write_temp("dune_trunc_images.idx", bad);
        auto lp = write_temp("dune_trunc_labels.idx", good_labels);
        CHECK_THROWS_WITH_AS(load_idx(ip, lp),
                             doctest::Contains("truncated"), ParseError);
    }
    SUBCASE("item count mismatch between files") {
        auto labels2 = idx_labels(2, {1, 2});
        auto ip = write_temp("dune_mismatch_images.idx", good_images);
        auto lp = write_temp("dune_mismatch_labels.idx", labels2);
        CHECK_THROWS_WITH_AS(load_idx(ip, lp),
                             doctest::Contains("count"), ParseError);
    }
    SUBCASE("label out of range") {
        auto bad = idx_labels(1, {11});
        auto ip = write_temp("dune_range_images.idx", good_images);
        auto lp = write_temp("dune_range_labels.idx", bad);
        CHECK_THROWS_AS(load_idx(ip, lp), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_idx("/nonexistent/images", "/nonexistent/labels"),
                        ParseError);
    }
}

TEST_CASE("white noise pixel formula") {
    CHECK(white_noise_pixel(1.0, 1.0, 0.0) == 0.5);
    CHECK(white_noise_pixel(1.0, 1.0, 1.0) == 1.0);
    CHECK(white_noise_pixel(0.0, 3.0, 0.5) == doctest::Approx(0.375));
}

TEST_CASE("add_white_noise with ns=0 is the identity") {
    std::vector<double> image{0.0, 0.25, 0.5, 1.0};
    Rng rng(1);
    auto out = add_white_noise(image, 0.0, rng);
    CHECK(out == image);
}

TEST_CASE("add_white_noise stays in range and matches its expectation") {
    Rng rng(505);
    for (double ns : {0.5, 1.5, 4.0}) {
        for (double x : {0.0, 0.3, 1.0}) {
            double sum = 0.0;
            const int draws = 100000;
            std::vector<double> image{x};
            for (int i = 0; i < draws; ++i) {
                auto out = add_white_noise(image, ns, rng);
                CHECK(out[0] >= 0.0);
                CHECK(out[0] <= 1.0);
                sum += out[0];
            }
            double expected = x / (ns + 1.0) + ns / (2.0 * (ns + 1.0));
            CHECK(std::abs(sum / draws - expected) < 0.005);
        }
    }
}

TEST_CASE("magics endpoints, fixed point and inversion") {
    SUBCASE("identity at zero shift") {
        std::vector<double> image{0.0, 0.5, 1.0};
        CHECK(magics(image, 0.0) == image);
    }
    SUBCASE("midpoint is a fixed point") {
        for (double hs : {-0.4, 0.0, 0.5, 1.8}) {
            std::vector<double> image{0.5};
            CHECK(magics(image, hs)[0] == doctest::Approx(0.5).epsilon(1e-15));
        }
    }
    SUBCASE("endpoints map exactly") {
        std::vector<double> image{0.0, 1.0};
        auto out = magics(image, 1.8);
        CHECK(out[0] == doctest::Approx(-1.8).epsilon(1e-15));
        CHECK(out[1] == doctest::Approx(2.8).epsilon(1e-15));
    }
    SUBCASE("magics_inverse recovers the input") {
        Rng rng(12);
        std::vector<double> image(100);
        for (auto& v : image) v = rng.uniform();
        for (double hs : {-0.3, 0.5, 1.8}) {
            auto round = magics_inverse(magics(image, hs), hs);
            for (std::size_t i = 0; i < image.size(); ++i) {
                CHECK(std::abs(round[i] - image[i]) < 1e-12);
            }
        }
    }
}

TEST_CASE("corruption precedes the shift") {
    std::vector<double> image(16, 0.25);
    auto spec = NoiseSpec::parse("white:ns=1.0");
    const double hs = 1.8;

    Rng rng_a(42);
    auto pipeline = corrupt_then_shift(image, 4, 4, spec, hs, rng_a);

    Rng rng_b(42);
    auto noisy = add_white_noise(image, 1.0, rng_b);
    auto expected = magics(noisy, hs);
    CHECK(pipeline == expected);

    // The reversed order gives a different answer, so the test above really
    // pins the ordering.
    Rng rng_c(42);
    auto reversed = add_white_noise(magics(image, hs), 1.0, rng_c);
    bool any_different = false;
    for (std::size_t i = 0; i < reversed.size(); ++i) {
        if (reversed[i] != pipeline[i]) any_different = true;
    }
    CHECK(any_different);
}

TEST_CASE("noise spec parsing") {
    auto white = NoiseSpec::parse("white:ns=1.5");
    CHECK(white.kind == NoiseKind::White);
    CHECK(white.noise_to_signal == 1.5);

    auto sp = NoiseSpec::parse("salt-pepper:density=0.25");
    CHECK(sp.kind == NoiseKind::SaltPepper);
    CHECK(sp.density == 0.25);

    auto stripes = NoiseSpec::parse("stripes-h:period=4,amplitude=0.5");
    CHECK(stripes.kind == NoiseKind::StripesH);
    CHECK(stripes.period == 4);
    CHECK(stripes.amplitude == 0.5);

    CHECK(NoiseSpec::parse("white").noise_to_signal == 0.0);
    CHECK(NoiseSpec::parse("checkerboard:cell=7,amplitude=1").cell == 7);
    CHECK(NoiseSpec::parse("border:thickness=2,value=1").thickness == 2);

    CHECK_THROWS_AS(NoiseSpec::parse("speckle:x=1"), ConfigError);
    CHECK_THROWS_AS(NoiseSpec::parse("white:foo=1"), ConfigError);
    CHECK_THROWS_AS(NoiseSpec::parse("white:ns=-1"), ConfigError);
    CHECK_THROWS_AS(NoiseSpec::parse("salt-pepper:density=2"), ConfigError);
    CHECK_THROWS_AS(NoiseSpec::parse("stripes-h:period=0"), ConfigError);
    CHECK_THROWS_AS(NoiseSpec::parse(""), ConfigError);
    CHECK_THROWS_AS(NoiseSpec::parse("white:ns"), ConfigError);
}

TEST_CASE("null patterns leave the image unchanged") {
    Rng seed(3);
    std::vector<double> image(64);
    for (auto& v : image) v = seed.uniform();

    for (const char* text :
         {"white:ns=0", "salt-pepper:density=0", "gaussian:sigma=0",
          "stripes-h:period=2,amplitude=0", "stripes-v:period=2,amplitude=0",
          "checkerboard:cell=2,amplitude=0", "gradient:amplitude=0",
          "border:thickness=0"}) {
        auto spec = NoiseSpec::parse(text);
        CHECK(spec.is_identity());
        Rng rng(9);
        auto out = apply_pattern(image, 8, 8, spec, rng);
        CHECK(out == image);
    }
}

TEST_CASE("salt-pepper at density one maps every pixel to an extreme") {
    std::vector<double> image(100, 0.5);
    Rng rng(7);
    auto out = apply_pattern(image, 10, 10,
                             NoiseSpec::parse("salt-pepper:density=1"), rng);
    for (double v : out) {
        CHECK((v == 0.0 || v == 1.0));
    }
}

TEST_CASE("period-two stripes alternate rows between 0 and 0.5") {
    std::vector<double> image(16, 0.0);
    Rng rng(1);
    auto out = apply_pattern(
        image, 4, 4, NoiseSpec::parse("stripes-h:period=2,amplitude=1"), rng);
    for (std::size_t row = 0; row < 4; ++row) {
        for (std::size_t col = 0; col < 4; ++col) {
            double expected = (row % 2 == 1) ? 0.5 : 0.0;
            CHECK(out[row * 4 + col] == expected);
        }
    }
}

TEST_CASE("all pattern output stays inside the unit range") {
    Rng seed(99);
    std::vector<double> image(28 * 28);
    for (auto& v : image) v = seed.uniform();

    for (const char* text :
         {"white:ns=2.5", "salt-pepper:density=0.3", "gaussian:sigma=0.5",
          "stripes-h:period=6,amplitude=0.8", "stripes-v:period=3,amplitude=1",
          "checkerboard:cell=4,amplitude=0.7", "gradient:amplitude=1",
          "border:thickness=3,value=1"}) {
        Rng rng(2);
        auto out = apply_pattern(image, 28, 28, NoiseSpec::parse(text), rng);
        for (double v : out) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("patterns are deterministic given spec and seed") {
    std::vector<double> image(28 * 28, 0.4);
    for (const char* text :
         {"white:ns=1.5", "salt-pepper:density=0.2", "gaussian:sigma=0.3"}) {
        Rng a(1234), b(1234);
        auto spec = NoiseSpec::parse(text);
        CHECK(apply_pattern(image, 28, 28, spec, a) ==
              apply_pattern(image, 28, 28, spec, b));
    }
}

TEST_CASE("write_pgm emits the documented bytes") {
    fs::path path = fs::temp_directory_path() / "dune_zero.pgm";

    SUBCASE("all-zero image") {
        std::vector<double> image(28 * 28, 0.0);
        write_pgm(image, 28, 28, path);
        auto bytes = read_file(path);
        std::string header = "P5\n28 28\n255\n";
        REQUIRE(bytes.size() == header.size() + 784);
        CHECK(std::equal(header.begin(), header.end(), bytes.begin()));
        for (std::size_t i = header.size(); i < bytes.size(); ++i) {
            CHECK(bytes[i] == 0);
        }
    }
    SUBCASE("full-scale pixel maps to byte 255") {
        std::vector<double> image{1.0, 0.0, 0.5, 1.0};
        write_pgm(image, 2, 2, path);
        auto bytes = read_file(path);
        CHECK(bytes[bytes.size() - 4] == 255);
        CHECK(bytes[bytes.size() - 3] == 0);
        CHECK(bytes[bytes.size() - 2] == 128);
        CHECK(bytes.back() == 255);
    }
    SUBCASE("emission is byte-deterministic") {
        Rng rng(8);
        std::vector<double> image(784);
        for (auto& v : image) v = rng.uniform();
        write_pgm(image, 28, 28, path);
        auto first = read_file(path);
        write_pgm(image, 28, 28, path);
        CHECK(first == read_file(path));
    }
}

}  // TEST_SUITE
