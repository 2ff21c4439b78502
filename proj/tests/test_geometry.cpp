#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "croploop/errors.hpp"
#include "croploop/geometry.hpp"
#include "croploop/rng.hpp"

using namespace croploop;

namespace {

Region random_region(rng::Rng& r, std::int64_t span) {
  return {r.uniform_int(0, span), r.uniform_int(0, span),
          r.uniform_int(1, span), r.uniform_int(1, span)};
}

// Realistic chain: root presentation hop (possible downscale), then crop
// hops presented with upscales, the shape produced by pixel budgets.
FrameChain random_chain(rng::Rng& r, const ImageSize& root, int hops) {
  FrameChain chain;
  const double root_scale = r.uniform(0.5, 1.0);
  chain.push({full_region(root), root_scale});
  for (int i = 0; i < hops; ++i) {
    const ImageSize parent = chain.innermost_presented();
    const std::int64_t w = r.uniform_int(parent.width / 4 + 1, parent.width);
    const std::int64_t h = r.uniform_int(parent.height / 4 + 1, parent.height);
    const std::int64_t x = r.uniform_int(0, parent.width - w);
    const std::int64_t y = r.uniform_int(0, parent.height - h);
    chain.push({{x, y, w, h}, r.uniform(1.0, 4.0)});
  }
  return chain;
}

}  // namespace

TEST_CASE("iou pinned values") {
  CHECK(iou({0, 0, 10, 10}, {0, 0, 10, 10}) == doctest::Approx(1.0));
  CHECK(iou({0, 0, 10, 10}, {20, 20, 5, 5}) == doctest::Approx(0.0));
  // inter = 5*10 = 50, union = 100+100-50 = 150
  CHECK(iou({0, 0, 10, 10}, {5, 0, 10, 10}) == doctest::Approx(50.0 / 150.0));
}

TEST_CASE("contains_point is half-open") {
  CHECK(contains_point({0, 0, 10, 10}, {0, 0}));
  CHECK_FALSE(contains_point({0, 0, 10, 10}, {10, 10}));
  CHECK(contains_point({5, 5, 3, 3}, {6, 7}));
  CHECK_FALSE(contains_point({5, 5, 3, 3}, {8, 6}));
}

TEST_CASE("contains_region is closed on edges") {
  CHECK(contains_region({0, 0, 100, 100}, {10, 10, 20, 20}));
  CHECK(contains_region({3, 4, 7, 9}, {3, 4, 7, 9}));
  CHECK_FALSE(contains_region({0, 0, 100, 100}, {90, 90, 20, 20}));
}

TEST_CASE("clamp_to_frame") {
  CHECK(clamp_to_frame({-5, -5, 20, 20}, {100, 100}) == Region{0, 0, 15, 15});
  CHECK(clamp_to_frame({0, 0, 10, 10}, {100, 100}) == Region{0, 0, 10, 10});
  CHECK_THROWS_AS(clamp_to_frame({200, 200, 10, 10}, {100, 100}),
                  DegenerateRegionError);
  CHECK_THROWS_AS(clamp_to_frame({100, 0, 10, 10}, {100, 100}),
                  DegenerateRegionError);
}

TEST_CASE("clamp_point_to_frame") {
  CHECK(clamp_point_to_frame({-3, 250, }, {100, 100}) == Point{0, 99});
  CHECK(clamp_point_to_frame({42, 17}, {100, 100}) == Point{42, 17});
}

TEST_CASE("to_root_frame pinned values") {
  CHECK(to_root_frame(FrameChain{}, Point{7, 9}) == Point{7, 9});

  FrameChain translated({{{100, 200, 50, 50}, 1.0}});
  CHECK(to_root_frame(translated, Point{10, 10}) == Point{110, 210});

  // 50x50 crop at (100,100) presented upscaled x2 to 100x100.
  FrameChain upscaled({{{100, 100, 50, 50}, 2.0}});
  CHECK(to_root_frame(upscaled, Point{40, 40}) == Point{120, 120});

  CHECK_THROWS_AS(to_root_frame(upscaled, Point{140, 40}), FrameMismatchError);
}

TEST_CASE("to_root_frame region variant") {
  FrameChain upscaled({{{100, 100, 50, 50}, 2.0}});
  CHECK(to_root_frame(upscaled, Region{20, 20, 40, 40}) ==
        Region{110, 110, 20, 20});
  CHECK(to_local_frame(upscaled, Region{110, 110, 20, 20}) ==
        Region{20, 20, 40, 40});
}

TEST_CASE("resize_for_pixel_budget pinned values") {
  // 2500 px below the 3136 floor: sqrt(3136/2500) = 1.12 exactly.
  auto up = resize_for_pixel_budget({50, 50}, 3136, 2'408'448);
  CHECK(up.size == ImageSize{56, 56});
  CHECK(up.scale == doctest::Approx(1.12));

  auto same = resize_for_pixel_budget({1000, 1000}, 3136, 2'408'448);
  CHECK(same.size == ImageSize{1000, 1000});
  CHECK(same.scale == doctest::Approx(1.0));

  // 3,686,400 px above the 2,408,448 cap.
  auto down = resize_for_pixel_budget({2560, 1440}, 3136, 2'408'448);
  CHECK(down.size == ImageSize{2069, 1163});
  CHECK(down.size.pixel_count() <= 2'408'448);
  CHECK(down.scale == doctest::Approx(std::sqrt(2408448.0 / 3686400.0)));

  CHECK_THROWS_AS(resize_for_pixel_budget({10, 10}, 100, 50), ConfigError);
}

TEST_CASE("area_ratio") {
  CHECK(area_ratio({0, 0, 640, 480}, {640, 480}) == doctest::Approx(1.0));
  CHECK(area_ratio({0, 0, 10, 10}, {100, 100}) == doctest::Approx(0.01));
}

TEST_CASE("iou properties over random rectangles") {
  rng::Rng r(rng::derive(7, "test", "iou-props"));
  for (int i = 0; i < 10000; ++i) {
    const Region a = random_region(r, 400);
    const Region b = random_region(r, 400);
    const double ab = iou(a, b);
    CHECK(ab == iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(iou(a, a) == doctest::Approx(1.0));
    if (contains_region(a, b)) {
      CHECK(ab == doctest::Approx(static_cast<double>(b.area()) /
                                  static_cast<double>(a.area())));
    }
  }
}

TEST_CASE("frame chain concat associativity") {
  rng::Rng r(rng::derive(7, "test", "chain-concat"));
  for (int i = 0; i < 500; ++i) {
    const ImageSize root{r.uniform_int(600, 2000), r.uniform_int(400, 1400)};
    FrameChain c1 = random_chain(r, root, 1);
    // c2 lives in c1's innermost presented frame.
    const ImageSize inner = c1.innermost_presented();
    FrameChain c2;
    {
      const std::int64_t w = r.uniform_int(inner.width / 3 + 1, inner.width);
      const std::int64_t h = r.uniform_int(inner.height / 3 + 1, inner.height);
      c2.push({{r.uniform_int(0, inner.width - w),
                r.uniform_int(0, inner.height - h), w, h},
               r.uniform(1.0, 3.0)});
    }
    const ImageSize leaf = c2.innermost_presented();
    const Point p{r.uniform_int(0, leaf.width), r.uniform_int(0, leaf.height)};
    const Point via_concat = to_root_frame(c1.concat(c2), p);
    const Point stepwise = to_root_frame(c1, to_root_frame(c2, p));
    // Stepwise rounds twice, so allow one pixel of slack.
    CHECK(std::abs(via_concat.x - stepwise.x) <= 1);
    CHECK(std::abs(via_concat.y - stepwise.y) <= 1);
  }
}

TEST_CASE("root/local round trip within one pixel per hop") {
  rng::Rng r(rng::derive(7, "test", "round-trip"));
  for (int i = 0; i < 2000; ++i) {
    const ImageSize root{r.uniform_int(600, 2400), r.uniform_int(400, 1600)};
    const int hops = static_cast<int>(r.uniform_int(0, 3));
    const FrameChain chain = random_chain(r, root, hops);
    const Region inner_root = view_root_region(chain, root);
    const Point p{r.uniform_int(inner_root.x, inner_root.right() - 1),
                  r.uniform_int(inner_root.y, inner_root.bottom() - 1)};
    const Point local = to_local_frame(chain, p);
    const Point back = to_root_frame(chain, Point{
        std::clamp<std::int64_t>(local.x, 0, chain.innermost_presented().width),
        std::clamp<std::int64_t>(local.y, 0,
                                 chain.innermost_presented().height)});
    const std::int64_t budget = chain.depth();
    CHECK(std::abs(back.x - p.x) <= budget);
    CHECK(std::abs(back.y - p.y) <= budget);
  }
}

TEST_CASE("resize budget property") {
  rng::Rng r(rng::derive(7, "test", "resize-prop"));
  for (int i = 0; i < 5000; ++i) {
    const ImageSize size{r.uniform_int(8, 4000), r.uniform_int(8, 4000)};
    const std::int64_t min_px = r.uniform_int(64, 400000);
    const std::int64_t max_px = min_px + r.uniform_int(0, 8000000);
    const auto out = resize_for_pixel_budget(size, min_px, max_px);
    const std::int64_t before = size.pixel_count();
    if (before < min_px || before > max_px) {
      CHECK(out.size.pixel_count() >= min_px);
      CHECK(out.size.pixel_count() <= max_px);
    } else {
      CHECK(out.size == size);
      CHECK(out.scale == 1.0);
    }
  }
}

TEST_CASE("visible_in_view basics") {
  const ImageSize root{1000, 800};
  FrameChain chain({{{100, 100, 200, 200}, 2.0}});  // presented 400x400
  // Target fully inside the crop.
  auto vis = visible_in_view(chain, {150, 150, 50, 50}, root);
  REQUIRE(vis.has_value());
  CHECK(*vis == Region{100, 100, 100, 100});
  // Target disjoint from the crop.
  CHECK_FALSE(visible_in_view(chain, {400, 400, 50, 50}, root).has_value());
  // Partial overlap is clipped.
  auto part = visible_in_view(chain, {50, 50, 100, 100}, root);
  REQUIRE(part.has_value());
  CHECK(*part == Region{0, 0, 100, 100});
}
