#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/grid_oracle.hpp"
#include "../support/synthetic.hpp"
#include "levline/segment_fitting.hpp"

using namespace levline;

TEST_CASE("fit_line_tls: exact horizontal line") {
    const std::vector<Vec2> pts = {{0, 0}, {1, 0}, {2, 0}};
    const LineParams l = fit_line_tls(pts);
    CHECK(l.a == doctest::Approx(0.0));
    CHECK(l.b == doctest::Approx(1.0));
    CHECK(l.c == doctest::Approx(0.0));
}

TEST_CASE("fit_line_tls: exact vertical line (OLS would fail)") {
    const std::vector<Vec2> pts = {{0, 0}, {0, 1}, {0, 5}};
    const LineParams l = fit_line_tls(pts);
    CHECK(l.a == doctest::Approx(1.0));
    CHECK(l.b == doctest::Approx(0.0));
    CHECK(std::abs(l.c) < 1e-12);
}

TEST_CASE("fit_line_tls: noisy diagonal y = x + 1") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> unit(-0.01, 0.01);
    std::vector<Vec2> pts;
    for (int i = 0; i < 100; ++i) {
        const double x = -5.0 + 0.1 * i;
        pts.push_back(Vec2{x + unit(rng), x + 1.0 + unit(rng)});
    }
    const LineParams l = fit_line_tls(pts);
    // x - y + 1 = 0 normalized, canonical sign.
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(l.a == doctest::Approx(s).epsilon(1e-2));
    CHECK(l.b == doctest::Approx(-s).epsilon(1e-2));
    CHECK(l.c == doctest::Approx(s).epsilon(1e-2));
}

TEST_CASE("fit_line_tls: unit normal invariant") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 50.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<Vec2> pts;
        for (int i = 0; i < 12; ++i) pts.push_back(Vec2{unit(rng), unit(rng)});
        const LineParams l = fit_line_tls(pts);
        CHECK(std::abs(l.a * l.a + l.b * l.b - 1.0) <= 1e-12);
        CHECK((l.a > 0.0 || (l.a == 0.0 && l.b > 0.0)));
    }
}

TEST_CASE("fit_line_tls: rotation equivariance") {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        std::vector<Vec2> pts;
        for (int i = 0; i < 15; ++i)
            pts.push_back(Vec2{10.0 * unit(rng), 2.0 * unit(rng)}); // elongated cloud
        const double ang = unit(rng) * 2.0 * kPi;
        const double c = std::cos(ang), s = std::sin(ang);
        std::vector<Vec2> rot;
        for (const Vec2& p : pts) rot.push_back(Vec2{c * p.x - s * p.y, s * p.x + c * p.y});

        const LineParams l0 = fit_line_tls(pts);
        const LineParams l1 = fit_line_tls(rot);
        const Vec2 n_rot{c * l0.a - s * l0.b, s * l0.a + c * l0.b};
        const double agree = std::abs(n_rot.x * l1.a + n_rot.y * l1.b);
        CHECK(agree == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("fit_line_tls: degenerate inputs") {
    CHECK_THROWS_AS(fit_line_tls(std::vector<Vec2>{{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_line_tls(std::vector<Vec2>{{1, 1}, {1, 1}, {1, 1}}),
                    std::invalid_argument);
}

TEST_CASE("point_line_distance: examples") {
    CHECK(point_line_distance(LineParams{1, 0, 0}, 3, 5) == doctest::Approx(3.0));
    CHECK(point_line_distance(LineParams{1, 0, 0}, 0, 7) == doctest::Approx(0.0));
    const double s = 0.70710678118654752;
    CHECK(point_line_distance(LineParams{s, s, 0}, 1, 1) == doctest::Approx(1.41421356).epsilon(1e-6));
}

TEST_CASE("level_line_angle_error: examples") {
    CHECK(level_line_angle_error(LineParams{1, 0, 0}, 0, 1) == doctest::Approx(0.0));
    CHECK(level_line_angle_error(LineParams{1, 0, 0}, 1, 0) == doctest::Approx(90.0));
    const double s = 0.70710678118654752;
    CHECK(level_line_angle_error(LineParams{-s, s, 0}, 1, 0) == doctest::Approx(45.0).epsilon(1e-9));
    CHECK_THROWS_AS(level_line_angle_error(LineParams{1, 0, 0}, 0, 0), std::domain_error);
}

TEST_CASE("level_line_angle_error: exactly invariant to level-line flips") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const double phi = unit(rng) * kPi;
        const LineParams l{std::cos(phi), std::sin(phi), unit(rng) * 5.0};
        const double u = unit(rng), v = unit(rng);
        if (u == 0.0 && v == 0.0) continue;
        CHECK(level_line_angle_error(l, u, v) == level_line_angle_error(l, -u, -v));
    }
}

TEST_CASE("clamped_loss: examples") {
    const DetectorParams params; // T_d = 3, T_a = 20, rho = 2
    SUBCASE("all residuals zero") {
        const std::vector<Vec2> pts = {{0, 0}, {5, 0}, {9, 0}};
        const std::vector<Vec2> lvs = {{1, 0}, {-1, 0}, {1, 0}};
        CHECK(clamped_loss(pts, lvs, LineParams{0, 1, 0}, params) == doctest::Approx(0.0));
    }
    SUBCASE("saturated point contributes 1 + rho") {
        const std::vector<Vec2> pts = {{0, 5}};   // 5 px from y=0
        const std::vector<Vec2> lvs = {{0, 1}};   // perpendicular level-line
        CHECK(clamped_loss(pts, lvs, LineParams{0, 1, 0}, params) == doctest::Approx(3.0));
    }
    SUBCASE("half-scale residuals") {
        const std::vector<Vec2> pts = {{0, 1.5}};
        const double a = deg_to_rad(10.0);
        const std::vector<Vec2> lvs = {{std::cos(a), std::sin(a)}};
        CHECK(clamped_loss(pts, lvs, LineParams{0, 1, 0}, params) ==
              doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("length mismatch") {
        const std::vector<Vec2> pts = {{0, 0}, {1, 0}};
        const std::vector<Vec2> lvs = {{1, 0}};
        CHECK_THROWS_AS(clamped_loss(pts, lvs, LineParams{0, 1, 0}, params),
                        std::invalid_argument);
    }
}

TEST_CASE("refine_line: already-optimal input returns init") {
    const DetectorParams params;
    std::vector<Vec2> pts, lvs;
    for (int i = 0; i < 20; ++i) {
        pts.push_back(Vec2{static_cast<double>(i), 0.0});
        lvs.push_back(Vec2{1, 0});
    }
    const LineParams init{0, 1, 0};
    const LineParams out = refine_line(pts, lvs, init, params);
    CHECK(clamped_loss(pts, lvs, out, params) == doctest::Approx(0.0));
    CHECK(out.a == doctest::Approx(0.0));
    CHECK(std::abs(out.b) == doctest::Approx(1.0));
}

TEST_CASE("refine_line: recovers from a 5-degree tilt") {
    const DetectorParams params;
    std::vector<Vec2> pts, lvs;
    for (int i = 0; i < 20; ++i) {
        pts.push_back(Vec2{static_cast<double>(i), 0.0});
        lvs.push_back(Vec2{1, 0});
    }
    const double t = deg_to_rad(5.0);
    const LineParams init{std::sin(t), std::cos(t), -std::sin(t) * 9.5};
    const LineParams out = refine_line(pts, lvs, init, params);
    CHECK(synth::line_angle_deg(out, LineParams{0, 1, 0}) < 0.5);

    const double oracle = synth::grid_search_min_loss(pts, lvs, params);
    CHECK(clamped_loss(pts, lvs, out, params) <= oracle + 1e-3);
}

TEST_CASE("refine_line: clamp-saturated outliers barely move the line") {
    const DetectorParams params;
    std::mt19937 rng(77);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::vector<Vec2> pts, lvs;
    for (int i = 0; i < 45; ++i) {
        pts.push_back(Vec2{2.0 * i - 44.0, noise(rng)});
        lvs.push_back(Vec2{1, 0});
    }
    for (int i = 0; i < 5; ++i) { // 10% outliers 50 px off the line
        pts.push_back(Vec2{-20.0 + 10.0 * i, 50.0});
        lvs.push_back(Vec2{0, 1});
    }
    const LineParams init = fit_line_tls(pts);
    const LineParams out = refine_line(pts, lvs, init, params);
    CHECK(synth::line_angle_deg(out, LineParams{0, 1, 0}) < 1.0);
}

TEST_CASE("refine_line: never increases the loss") {
    const DetectorParams params;
    for (unsigned seed = 0; seed < 30; ++seed) {
        const synth::FitInstance inst = synth::make_fit_instance(seed, 20 + seed % 25, 0.2);
        const LineParams init = fit_line_tls(inst.points);
        const LineParams out = refine_line(inst.points, inst.levels, init, params);
        CHECK(clamped_loss(inst.points, inst.levels, out, params) <=
              clamped_loss(inst.points, inst.levels, init, params));
    }
}

TEST_CASE("grid oracle: sweep evaluation matches the literal triple loop") {
    const DetectorParams params;
    const synth::GridSpec grids[] = {
        {0.02, 0.2, -20.0, 20.0},
        {0.013, 0.37, -20.0, 20.0}, // step not dividing the range evenly
        {0.05, 0.05, -6.0, 6.0},
    };
    unsigned seed = 3;
    for (const synth::GridSpec& spec : grids) {
        for (int n : {6, 17}) {
            const synth::FitInstance inst = synth::make_fit_instance(seed++, n, 0.3);
            const double fast =
                synth::grid_search_min_loss(inst.points, inst.levels, params, spec);
            const double slow =
                synth::grid_search_min_loss_naive(inst.points, inst.levels, params, spec);
            CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
        }
    }
}

TEST_CASE("refine_line matches the exhaustive grid on a few instances") {
    const DetectorParams params;
    for (unsigned seed : {100u, 101u, 102u}) {
        const synth::FitInstance inst = synth::make_fit_instance(seed, 30, 0.15);
        const LineParams init = fit_line_tls(inst.points);
        const LineParams out = refine_line(inst.points, inst.levels, init, params);
        const double got = clamped_loss(inst.points, inst.levels, out, params);
        const double oracle = synth::grid_search_min_loss(inst.points, inst.levels, params);
        CHECK(got <= oracle + 1e-3);
    }
}

namespace {

/// Chain along y = 0 with per-point level-lines.
EdgeChain make_chain(int n) {
    EdgeChain c;
    for (int i = 0; i < n; ++i) c.points.push_back({i, 5});
    return c;
}

} // namespace

TEST_CASE("extract_segments: straight chain gives one full-length segment") {
    const DetectorParams params;
    const EdgeChain chain = make_chain(50);
    const std::vector<Vec2> levels(50, Vec2{1, 0});
    const GradientField f = synth::field_for_chain(chain, levels, 60, 12);

    const auto traces = extract_segments_traced(chain, f, params);
    REQUIRE(traces.size() == 1);
    const LineSegment& s = traces[0].segment;
    CHECK(s.length() == doctest::Approx(49.0).epsilon(1e-6));
    CHECK(s.support >= 25);
    CHECK(s.support == 50);
    CHECK(traces[0].span_begin == 0);
    CHECK(traces[0].span_end == 50);
    // Endpoints sit on the fitted line and the projection displacement is
    // perpendicular to the line direction.
    CHECK(point_line_distance(s.line, s.p1.x, s.p1.y) < 1e-9);
    CHECK(point_line_distance(s.line, s.p2.x, s.p2.y) < 1e-9);
    const Vec2 dir{-s.line.b, s.line.a};
    const Vec2 first{0.0, 5.0}, last{49.0, 5.0};
    CHECK(std::abs(dot(first - s.p1, dir)) < 1e-9);
    CHECK(std::abs(dot(last - s.p2, dir)) < 1e-9);
}

TEST_CASE("extract_segments: L-shaped chain splits at the corner") {
    const DetectorParams params;
    EdgeChain chain;
    std::vector<Vec2> levels;
    for (int i = 0; i < 40; ++i) {
        chain.points.push_back({i, 10});
        levels.push_back(Vec2{1, 0});
    }
    for (int j = 1; j <= 40; ++j) {
        chain.points.push_back({39, 10 + j});
        levels.push_back(Vec2{0, 1});
    }
    const GradientField f = synth::field_for_chain(chain, levels, 60, 60);

    const auto traces = extract_segments_traced(chain, f, params);
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].span_end <= traces[1].span_begin + 1); // corner point used at most once
    const LineSegment& a = traces[0].segment;
    const LineSegment& b = traces[1].segment;
    CHECK(synth::line_angle_deg(a.line, LineParams{0, 1, 0}) < 2.0); // horizontal arm
    CHECK(synth::line_angle_deg(b.line, LineParams{1, 0, 0}) < 2.0); // vertical arm
}

TEST_CASE("extract_segments: collinear points with perpendicular level-lines emit nothing") {
    DetectorParams params;
    const EdgeChain chain = make_chain(50);
    const std::vector<Vec2> levels(50, Vec2{0, 1}); // perpendicular to the chain direction
    const GradientField f = synth::field_for_chain(chain, levels, 60, 12);

    CHECK(extract_segments(chain, f, params).empty());

    params.angle_validation = false; // coordinate-only validation accepts it
    CHECK(extract_segments(chain, f, params).size() == 1);
}

TEST_CASE("extract_segments: support re-validates against the emitted line") {
    const DetectorParams params;
    for (unsigned seed : {21u, 22u}) {
        const GrayImage img = synth::random_texture(96, 96, seed);
        const GradientField f = build_gradient_field(sobel(gaussian_smooth(img)), 0.2);
        const auto anchors = equalize_anchors(extract_anchors(f), 10.0);
        auto chains = refine_chains(draw_edges(f, anchors), 3.0);
        for (const EdgeChain& chain : chains) {
            for (const auto& tr : extract_segments_traced(chain, f, params)) {
                int support = 0;
                for (size_t i = tr.span_begin; i < tr.span_end; ++i) {
                    const PixelCoord& p = chain.points[i];
                    const Vec2 lv = f.level[f.idx(p.x, p.y)];
                    const bool ok =
                        point_line_distance(tr.segment.line, p.x, p.y) < params.dist_thresh &&
                        level_line_angle_error(tr.segment.line, lv.x, lv.y) < params.angle_thresh;
                    if (ok) ++support;
                }
                CHECK(support == tr.segment.support);
                CHECK(static_cast<double>(support) >=
                      params.inlier_ratio * static_cast<double>(tr.span_end - tr.span_begin));
                CHECK(tr.segment.length() >= params.min_length);
            }
        }
    }
}
