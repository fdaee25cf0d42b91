#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "../support/synthetic.hpp"
#include "levline/datasets.hpp"
#include "levline/image.hpp"

using namespace levline;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

void write_tiny_image(const fs::path& p) {
    save_pgm(synth::random_texture(16, 12, 3), p.string());
}

} // namespace

TEST_CASE("parse_homography_text: identity on three lines") {
    const Homography H = parse_homography_text("1 0 0\n0 1 0\n0 0 1", "test");
    for (int i = 0; i < 9; ++i) CHECK(H.h[static_cast<size_t>(i)] == ((i % 4 == 0) ? 1.0 : 0.0));
}

TEST_CASE("parse_homography_text: projective scale divides out") {
    const Homography H = parse_homography_text("2 0 0 0 2 0 0 0 2", "test");
    CHECK(H.h[0] == doctest::Approx(1.0));
    CHECK(H.h[4] == doctest::Approx(1.0));
    CHECK(H.h[8] == 1.0);
}

TEST_CASE("parse_homography_text: malformed input") {
    CHECK_THROWS_AS(parse_homography_text("1 0 0 0 1 0 0 0", "test"), ParseError); // 8 tokens
    CHECK_THROWS_AS(parse_homography_text("1 0 0 0 1 0 0 0 1 5", "test"), ParseError);
    CHECK_THROWS_AS(parse_homography_text("1 0 0 0 x 0 0 0 1", "test"), ParseError);
    CHECK_THROWS_AS(parse_homography_text("1 0 0 2 0 0 3 0 0", "test"), ParseError); // singular
}

TEST_CASE("homography files round-trip at full precision") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const fs::path dir = fresh_dir("levline_hround");
    for (int t = 0; t < 10; ++t) {
        Homography H = synth::rigid_homography(unit(rng) * 40.0, 100 * unit(rng), 80 * unit(rng),
                                               20 * unit(rng), 20 * unit(rng));
        H.h[6] = 1e-5 * unit(rng); // mild projective part
        H.h[7] = 1e-5 * unit(rng);
        H = H.normalized();

        const fs::path p = dir / ("H_" + std::to_string(t));
        write_homography_file(H, p);
        const Homography back = parse_homography_file(p);
        for (int i = 0; i < 9; ++i)
            CHECK(back.h[static_cast<size_t>(i)] ==
                  doctest::Approx(H.h[static_cast<size_t>(i)]).epsilon(1e-12));
    }
}

TEST_CASE("load_sequence: oxford naming") {
    const fs::path dir = fresh_dir("levline_seq_oxford");
    write_tiny_image(dir / "img1.pgm");
    write_tiny_image(dir / "img2.pgm");
    write_file(dir / "H1to2p", "1 0 3\n0 1 0\n0 0 1\n");

    const Sequence seq = load_sequence(dir);
    CHECK(seq.name == "levline_seq_oxford");
    CHECK(seq.transformation == "unknown");
    REQUIRE(seq.tests.size() == 1);
    CHECK(seq.tests[0].index == 2);
    CHECK(seq.tests[0].href_to_test.h[2] == doctest::Approx(3.0));
}

TEST_CASE("load_sequence: hpatches naming with a transform label") {
    const fs::path dir = fresh_dir("levline_seq_hp");
    write_tiny_image(dir / "1.pgm");
    write_tiny_image(dir / "2.pgm");
    write_tiny_image(dir / "3.pgm");
    write_file(dir / "H_1_2", "1 0 0 0 1 0 0 0 1");
    write_file(dir / "H_1_3", "1 0 1 0 1 1 0 0 1");
    write_file(dir / "transform.txt", "view\n");

    const Sequence seq = load_sequence(dir);
    CHECK(seq.transformation == "view");
    REQUIRE(seq.tests.size() == 2);
    CHECK(seq.tests[1].index == 3);
}

TEST_CASE("load_sequence: missing homography is named in the error") {
    const fs::path dir = fresh_dir("levline_seq_missing");
    write_tiny_image(dir / "1.pgm");
    write_tiny_image(dir / "2.pgm");
    write_tiny_image(dir / "3.pgm");
    write_file(dir / "H_1_2", "1 0 0 0 1 0 0 0 1");

    try {
        load_sequence(dir);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("H_1_3") != std::string::npos);
    }
}

TEST_CASE("load_sequence: no reference image") {
    const fs::path dir = fresh_dir("levline_seq_empty");
    CHECK_THROWS_AS(load_sequence(dir), ParseError);
}
