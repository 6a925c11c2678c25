#include "hardylab/causal.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

using namespace hardylab;
using namespace hardylab::causal;

namespace {

SpacetimeEvent ev(double t, double x) { return SpacetimeEvent{t, x, ""}; }

std::mt19937_64 seeded_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace

TEST_CASE("boost arithmetic") {
  SUBCASE("beta = 0 is the identity") {
    auto e = boost(LorentzBoost(0.0), ev(2.0, 3.0));
    CHECK(e.t == 2.0);
    CHECK(e.x == 3.0);
  }

  SUBCASE("beta = 0.6 puts the positron side first") {
    LorentzBoost b(0.6);
    CHECK(b.gamma() == doctest::Approx(1.25).epsilon(1e-12));
    auto minus = boost(b, ev(0.0, -1.0));
    CHECK(minus.t == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(minus.x == doctest::Approx(-1.25).epsilon(1e-12));
    auto plus = boost(b, ev(0.0, 1.0));
    CHECK(plus.t == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(plus.x == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(plus.t < minus.t);
  }

  SUBCASE("beta = -0.6 swaps the ordering") {
    LorentzBoost b(-0.6);
    auto minus = boost(b, ev(0.0, -1.0));
    auto plus = boost(b, ev(0.0, 1.0));
    CHECK(minus.t < plus.t);
  }

  SUBCASE("superluminal boosts are rejected") {
    CHECK_THROWS_AS(LorentzBoost(1.0), DomainError);
    CHECK_THROWS_AS(LorentzBoost(-1.5), DomainError);
  }

  SUBCASE("a boost composed with its inverse is the identity") {
    std::mt19937_64 rng = seeded_rng(11);
    std::uniform_real_distribution<double> betas(-0.95, 0.95);
    std::uniform_real_distribution<double> coords(-5.0, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
      LorentzBoost b(betas(rng));
      auto e = ev(coords(rng), coords(rng));
      auto back = boost(b.inverse(), boost(b, e));
      CHECK(std::abs(back.t - e.t) <= 1e-12);
      CHECK(std::abs(back.x - e.x) <= 1e-12);
    }
  }

  SUBCASE("composition follows velocity addition") {
    std::mt19937_64 rng = seeded_rng(12);
    std::uniform_real_distribution<double> betas(-0.9, 0.9);
    std::uniform_real_distribution<double> coords(-5.0, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
      LorentzBoost b1(betas(rng));
      LorentzBoost b2(betas(rng));
      LorentzBoost combined = b1.composed_with(b2);
      auto e = ev(coords(rng), coords(rng));
      auto stepwise = boost(b2, boost(b1, e));
      auto direct = boost(combined, e);
      CHECK(std::abs(stepwise.t - direct.t) <= 1e-12);
      CHECK(std::abs(stepwise.x - direct.x) <= 1e-12);
    }
  }
}

TEST_CASE("interval values and classes") {
  auto same = interval(ev(1.0, 2.0), ev(1.0, 2.0));
  CHECK(same.value == 0.0);
  CHECK(same.cls == IntervalClass::Lightlike);

  auto time = interval(ev(0.0, 0.0), ev(1.0, 0.0));
  CHECK(time.value == -1.0);
  CHECK(time.cls == IntervalClass::Timelike);

  auto space = interval(ev(0.0, 0.0), ev(0.0, 1.0));
  CHECK(space.value == 1.0);
  CHECK(space.cls == IntervalClass::Spacelike);
}

TEST_CASE("interval class and value survive boosts") {
  std::mt19937_64 rng = seeded_rng(13);
  std::uniform_real_distribution<double> betas(-0.99, 0.99);
  std::uniform_real_distribution<double> coords(-3.0, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    auto a = ev(coords(rng), coords(rng));
    auto b = ev(coords(rng), coords(rng));
    LorentzBoost boost_by(betas(rng));
    auto before = interval(a, b);
    auto after = interval(boost(boost_by, a), boost(boost_by, b));
    CHECK(std::abs(after.value - before.value) <=
          1e-9 * std::max(1.0, std::abs(before.value)));
    if (std::abs(before.value) > 1e-6) CHECK(after.cls == before.cls);
  }

  SUBCASE("exactly lightlike pairs stay lightlike") {
    std::uniform_real_distribution<double> betas(-0.99, 0.99);
    std::uniform_real_distribution<double> coords(-3.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
      double t0 = coords(rng), x0 = coords(rng), d = coords(rng);
      auto a = ev(t0, x0);
      auto b = ev(t0 + d, x0 + d);
      LorentzBoost boost_by(betas(rng));
      CHECK(interval(boost(boost_by, a), boost(boost_by, b)).cls ==
            IntervalClass::Lightlike);
    }
  }
}

TEST_CASE("light-cone membership with the default layout") {
  Scenario s = Scenario::default_hardy();
  s.validate();

  SUBCASE("an apex is on its own forward cone") {
    CHECK(CausalRegion::forward_interior(s.d_plus).contains(s.d_plus));
  }

  SUBCASE("each detector is spacelike to the far-side box") {
    CHECK(CausalRegion::forward_exterior(s.u_plus_box).contains(s.d_minus));
    CHECK(CausalRegion::forward_exterior(s.u_minus_box).contains(s.d_plus));
    CHECK(interval(s.u_plus_box, s.d_minus).cls == IntervalClass::Spacelike);
  }

  SUBCASE("neither detector is in the intersection region") {
    std::vector<SpacetimeEvent> boxes{s.u_plus_box, s.u_minus_box};
    CausalRegion both_outside = nonlocal_region(Combine::Intersection, boxes);
    CHECK_FALSE(both_outside.contains(s.d_plus));
    CHECK_FALSE(both_outside.contains(s.d_minus));
  }

  SUBCASE("both detectors are in the union region") {
    std::vector<SpacetimeEvent> boxes{s.u_plus_box, s.u_minus_box};
    CausalRegion one_outside = nonlocal_region(Combine::Union, boxes);
    CHECK(one_outside.contains(s.d_plus));
    CHECK(one_outside.contains(s.d_minus));
  }

  SUBCASE("a single-apex intersection is that cone's exterior") {
    std::vector<SpacetimeEvent> one{s.u_plus_box};
    CausalRegion r = nonlocal_region(Combine::Intersection, one);
    std::mt19937_64 rng = seeded_rng(14);
    std::uniform_real_distribution<double> coords(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
      auto e = ev(coords(rng), coords(rng));
      CHECK(r.contains(e) ==
            CausalRegion::forward_exterior(s.u_plus_box).contains(e));
    }
  }

  SUBCASE("an empty apex list is rejected") {
    std::vector<SpacetimeEvent> none;
    CHECK_THROWS_AS(nonlocal_region(Combine::Union, none), DomainError);
  }
}

TEST_CASE("region algebra") {
  Scenario s = Scenario::default_hardy();
  std::vector<SpacetimeEvent> boxes{s.u_plus_box, s.u_minus_box};
  CausalRegion union_r = nonlocal_region(Combine::Union, boxes);
  CausalRegion inter_r = nonlocal_region(Combine::Intersection, boxes);
  std::mt19937_64 rng = seeded_rng(15);
  std::uniform_real_distribution<double> coords(-4.0, 4.0);

  SUBCASE("intersection within each exterior within union") {
    for (int trial = 0; trial < 500; ++trial) {
      auto e = ev(coords(rng), coords(rng));
      bool in_inter = inter_r.contains(e);
      bool in_exterior =
          CausalRegion::forward_exterior(s.u_plus_box).contains(e);
      bool in_union = union_r.contains(e);
      if (in_inter) CHECK(in_exterior);
      if (in_exterior) CHECK(in_union);
    }
  }

  SUBCASE("De Morgan duality on sampled points") {
    CausalRegion lhs = union_r.complemented();
    CausalRegion rhs = region_intersection(
        CausalRegion::forward_exterior(s.u_plus_box).complemented(),
        CausalRegion::forward_exterior(s.u_minus_box).complemented());
    for (int trial = 0; trial < 500; ++trial) {
      auto e = ev(coords(rng), coords(rng));
      CHECK(lhs.contains(e) == rhs.contains(e));
    }
  }

  SUBCASE("membership is boost-covariant") {
    std::uniform_real_distribution<double> betas(-0.9, 0.9);
    for (int trial = 0; trial < 500; ++trial) {
      auto e = ev(coords(rng), coords(rng));
      LorentzBoost b(betas(rng));
      // skip points within float reach of a cone edge
      double margin = 1e-9;
      auto near_edge = [&](const SpacetimeEvent& apex) {
        double m = (e.t - apex.t) - std::abs(e.x - apex.x);
        return std::abs(m) < margin;
      };
      if (near_edge(s.u_plus_box) || near_edge(s.u_minus_box)) continue;
      CHECK(union_r.contains(e) ==
            union_r.boosted(b).contains(boost(b, e)));
      CHECK(inter_r.contains(e) ==
            inter_r.boosted(b).contains(boost(b, e)));
    }
  }
}

TEST_CASE("element-of-reality criteria as geometric gates") {
  Scenario s = Scenario::default_hardy();
  std::vector<SpacetimeEvent> d_minus_info{s.d_minus};
  std::vector<SpacetimeEvent> d_plus_info{s.d_plus};

  SUBCASE("the forward-cone criterion accepts the far detector") {
    CHECK(er_criterion(ErKind::ER3, d_minus_info, s.u_plus_box));
    CHECK(er_criterion(ErKind::ER3, d_plus_info, s.u_minus_box));
  }

  SUBCASE("the backward-cone criterion rejects it") {
    CHECK_FALSE(er_criterion(ErKind::ER2, d_minus_info, s.u_plus_box));
  }

  SUBCASE("the backward-cone criterion accepts past information") {
    std::vector<SpacetimeEvent> past{ev(-2.0, 1.0)};
    CHECK(er_criterion(ErKind::ER2, past, s.bs2_plus));
  }

  SUBCASE("constant-time prediction needs a frame") {
    CHECK_THROWS_AS(er_criterion(ErKind::ER1, d_plus_info, s.bs2_minus),
                    DomainError);
  }

  SUBCASE("a prediction in one frame is a retrodiction in the other") {
    bool plus_frame = er_criterion(ErKind::ER1, d_plus_info, s.bs2_minus,
                                   LorentzBoost(0.6));
    bool minus_frame = er_criterion(ErKind::ER1, d_plus_info, s.bs2_minus,
                                    LorentzBoost(-0.6));
    CHECK(plus_frame);
    CHECK_FALSE(minus_frame);

    bool mirrored_minus = er_criterion(ErKind::ER1, d_minus_info, s.bs2_plus,
                                       LorentzBoost(-0.6));
    bool mirrored_plus = er_criterion(ErKind::ER1, d_minus_info, s.bs2_plus,
                                      LorentzBoost(0.6));
    CHECK(mirrored_minus);
    CHECK_FALSE(mirrored_plus);
  }

  SUBCASE("cone boundaries are inclusive on the side the criterion names") {
    SpacetimeEvent target = ev(0.0, 0.0);
    std::vector<SpacetimeEvent> on_backward_cone{ev(-1.0, 1.0)};
    CHECK(er_criterion(ErKind::ER2, on_backward_cone, target));
    std::vector<SpacetimeEvent> on_forward_cone{ev(1.0, 1.0)};
    CHECK(er_criterion(ErKind::ER3, on_forward_cone, target));
    std::vector<SpacetimeEvent> at_apex{target};
    CHECK(er_criterion(ErKind::ER2, at_apex, target));
    CHECK(er_criterion(ErKind::ER3, at_apex, target));
  }

  SUBCASE("cone criteria do not depend on the frame") {
    for (double beta : {0.0, 0.3, 0.6, 0.9, -0.3, -0.6, -0.9}) {
      LorentzBoost b(beta);
      CHECK(er_criterion(ErKind::ER3, d_minus_info, s.u_plus_box, b));
      CHECK_FALSE(er_criterion(ErKind::ER2, d_minus_info, s.u_plus_box, b));
    }
  }
}

TEST_CASE("pre-collapse validity regions") {
  SUBCASE("no collapse events: the entire future of the preparation") {
    std::vector<SpacetimeEvent> prep{ev(0.0, 0.0)};
    std::vector<SpacetimeEvent> none;
    CausalRegion r = hellwig_kraus_validity(prep, none);
    CHECK(r.contains(ev(2.0, 1.0)));
    CHECK(r.contains(ev(0.0, 0.0)));
    CHECK_FALSE(r.contains(ev(-1.0, 0.0)));
    CHECK_FALSE(r.contains(ev(0.0, 3.0)));
  }

  SUBCASE("the singlet verification point survives a far-side collapse") {
    // non-demolition checks at (-eps, +-L), left z measurement at (t0, -L);
    // (-eps, +L) stays outside the measurement's backward cone as long as
    // t0 + eps < 2L
    const double eps = 0.1, L = 1.0;
    std::vector<SpacetimeEvent> prep{ev(-eps, -L), ev(-eps, L)};

    std::vector<SpacetimeEvent> early{ev(0.5, -L)};  // 0.5 + 0.1 < 2
    CHECK(hellwig_kraus_validity(prep, early).contains(ev(-eps, L)));

    std::vector<SpacetimeEvent> late{ev(2.5, -L)};  // 2.5 + 0.1 > 2
    CHECK_FALSE(hellwig_kraus_validity(prep, late).contains(ev(-eps, L)));
  }

  SUBCASE("a collapse at the query point excludes it") {
    std::vector<SpacetimeEvent> prep{ev(-1.0, 0.0)};
    std::vector<SpacetimeEvent> here{ev(0.5, 0.0)};
    CHECK_FALSE(hellwig_kraus_validity(prep, here).contains(ev(0.5, 0.0)));
  }

  SUBCASE("no preparation events: only the collapse pasts are cut out") {
    std::vector<SpacetimeEvent> none;
    std::vector<SpacetimeEvent> collapse{ev(0.0, 0.0)};
    CausalRegion r = hellwig_kraus_validity(none, collapse);
    CHECK(r.contains(ev(-5.0, 10.0)));
    CHECK_FALSE(r.contains(ev(-1.0, 0.0)));
  }
}

TEST_CASE("frame-to-frame value comparison") {
  abl::RealityAssignment a1, a2, a3;
  a1.set("U-", 1.0);
  a2.set("U-", 1.0);
  a3.set("U-", 0.0);

  SUBCASE("identical values in all frames pass") {
    std::map<std::string, abl::RealityAssignment> frames{
        {"F", a1}, {"F+", a2}, {"F-", a1}};
    CHECK(li1_check(frames, "U-"));
  }
  SUBCASE("a single frame passes trivially") {
    std::map<std::string, abl::RealityAssignment> frames{{"F", a1}};
    CHECK(li1_check(frames, "U-"));
  }
  SUBCASE("differing values fail") {
    std::map<std::string, abl::RealityAssignment> frames{{"F+", a1},
                                                         {"F-", a3}};
    CHECK_FALSE(li1_check(frames, "U-"));
  }
  SUBCASE("a frame without the assignment is an error") {
    std::map<std::string, abl::RealityAssignment> frames{
        {"F+", a1}, {"F-", abl::RealityAssignment{}}};
    CHECK_THROWS_WITH_AS(li1_check(frames, "U-"),
                         doctest::Contains("missing"), DomainError);
  }
}

TEST_CASE("scenario validation") {
  Scenario s = Scenario::default_hardy();
  CHECK(s.events().size() == 6);
  s.bs2_plus.t = 0.5;
  CHECK_THROWS_AS(s.validate(), DomainError);
}
