#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tgf/catalog.hpp"
#include "tgf/charts.hpp"
#include "tgf/differential.hpp"
#include "tgf/error.hpp"

using namespace tgf;

namespace {

constexpr unsigned kRuled = 1, kInvariant = 2, kNullity = 4;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Inconsistency;
}

// fraction of samples carrying the expected bits
double expected_fraction(const Example& ex, const FoliationReport& rep) {
  int ok = 0;
  for (const auto& s : rep.samples) ok += (s.classes & ex.expected) == ex.expected ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(rep.samples.size());
}

}  // namespace

TEST(Catalog, NamesAreUniqueAndBuildable) {
  const auto names = catalog::names();
  EXPECT_GE(names.size(), 12u);
  for (const auto& n : names) {
    const auto ex = catalog::named(n, true);
    EXPECT_EQ(ex.name, n);
    EXPECT_FALSE(ex.data.samples.empty()) << n;
    EXPECT_LT(ex.data.max_normal_residual(), 1e-8) << n;
    EXPECT_LT(unit_residual(ex.data, ex.dist), 1e-10) << n;
  }
  EXPECT_EQ(kind_of([] { (void)catalog::named("nope"); }), ErrorKind::Input);
}

TEST(Catalog, EveryExampleCarriesItsExpectedClass) {
  for (const auto& n : catalog::names()) {
    const auto ex = catalog::named(n, true);
    const auto rep = trichotomy_classify(ex.data, ex.dist);
    EXPECT_GE(expected_fraction(ex, rep), 0.99) << n;
    EXPECT_EQ(rep.count_none, 0) << n;
  }
}

TEST(Ruled, HelicoidIsClassOne) {
  const auto ex = catalog::named("ruled_helicoid_r4");
  const auto rep = trichotomy_classify(ex.data, ex.dist);
  EXPECT_LT(rep.max_tg_residual, 1e-7);
  EXPECT_DOUBLE_EQ(rep.fraction(TrichotomyClass::Ruled), 1.0);
  // not flagged surfacelike
  for (const auto& fl : detect_surfacelike(ex.data)) EXPECT_FALSE(fl.cylindrical || fl.conical);
}

TEST(Ruled, PlaneIsAccepted) {
  const auto ex = catalog::named("ruled_plane_r4");
  for (const auto& s : ex.data.samples) {
    EXPECT_LT(s.shape.norm(), 1e-12);
    EXPECT_EQ(s.nullity, 3);
  }
}

TEST(Ruled, HyperbolicGeodesicRulings) {
  const auto ex = catalog::named("ruled_h4");
  EXPECT_EQ(ex.data.space_form.epsilon(), -1);
  const auto rep = trichotomy_classify(ex.data, ex.dist);
  EXPECT_LT(rep.max_tg_residual, 1e-7);
  EXPECT_DOUBLE_EQ(rep.fraction(TrichotomyClass::Ruled), 1.0);
}

TEST(Ruled, RejectsNonOrthonormalRulings) {
  const ChartImmersion base("geodesic", {{-1.0, 1.0}}, Target::quadric(5, 1, -1.0), closed_form([](std::span<const Jet> x) {
                              const Jet z = x[0] * 0.0;
                              return JetVector{cosh(x[0]), sinh(x[0]), z, z, z};
                            }));
  const auto bad = [](const Jet& s) {
    const Jet z = s * 0.0;
    return std::vector<JetVector>{{z, z, z + 1.0, z, z}, {z, z, z + 1.0, z + 1.0, z}};
  };
  EXPECT_EQ(kind_of([&] { (void)make_ruled(base, bad); }), ErrorKind::Precondition);
}

TEST(Ruled, RankLossIsDegenerate) {
  // rulings containing the base direction
  const ChartImmersion base("axis", {{-1.0, 1.0}}, Target::flat(4), closed_form([](std::span<const Jet> x) {
                              const Jet z = x[0] * 0.0;
                              return JetVector{x[0] + 0.0, z, z, z};
                            }));
  const auto rulings = [](const Jet& s) {
    const Jet z = s * 0.0;
    return std::vector<JetVector>{{z + 1.0, z, z, z}, {z, z + 1.0, z, z}};
  };
  EXPECT_EQ(kind_of([&] { (void)make_ruled(base, rulings); }), ErrorKind::DegenerateChart);
}

TEST(PartialTubeExample, FiberFoliationIsInvariant) {
  for (const char* n : {"tube_torus_r4", "tube_spherical_s4", "tube_hyperbolic_h4"}) {
    const auto ex = catalog::named(n);
    const auto rep = trichotomy_classify(ex.data, ex.dist);
    EXPECT_LT(rep.max_tg_residual, 1e-7) << n;
    EXPECT_GE(rep.fraction(TrichotomyClass::Invariant), 0.99) << n;
  }
}

TEST(Cone, SphericalZeroSectionIsG) {
  const auto ex = catalog::named("cone_spherical_clifford");
  const auto g = charts::clifford_torus(4);
  for (const auto& p : sample_grid(g.domain(), std::vector<int>{5, 5})) {
    const std::vector<double> q{p[0], p[1], 0.0};
    const Vec f = ex.data.f.value(q);
    EXPECT_LT((f.head(4) - g.value(p)).norm(), 1e-15);
    EXPECT_EQ(f[4], 0.0);
  }
}

TEST(Cone, EuclideanConeIsConicalSurfacelike) {
  const auto cone = catalog::named("cone_euclidean_clifford");
  const auto conical = catalog::named("surfacelike_conical_clifford");
  // C(g)(x, t) = t g(x) with t = 1 + v
  for (const auto& p : sample_grid(cone.data.f.domain(), std::vector<int>{5, 5, 5})) {
    const std::vector<double> q{p[0], p[1], 1.0 + p[2]};
    EXPECT_LT((cone.data.f.value(p) - conical.data.f.value(q)).norm(), 1e-12);
  }
}

TEST(Cone, NullityIsFiberDimension) {
  for (const char* n : {"cone_euclidean_clifford", "cone_spherical_clifford", "cone_hyperbolic_h5"}) {
    const auto ex = catalog::named(n);
    for (const auto& s : ex.data.samples) EXPECT_EQ(s.nullity, ex.data.n() - 2) << n;
  }
}

TEST(Cone, HyperbolicLeavesStayPut) {
  const auto ex = catalog::named("cone_hyperbolic_h5");
  EXPECT_EQ(ex.data.space_form.epsilon(), -1);
  const auto rep = totally_geodesic_residual(ex.data, ex.dist);
  EXPECT_LT(rep.max_tg_residual, 1e-7);
  // a geodesic along the fiber plane and the v-line, over a long window
  const std::vector<double> start{0.0, -0.9, -0.35, 0.0};
  const Vec dir = (Vec(4) << 0.0, 1.0, 1.0, 0.5).finished();
  const auto shot = leaf_shoot(ex.data, ex.dist, start, dir, 1.0);
  EXPECT_LT(shot.max_drift, 1e-7);
}

TEST(Surfacelike, CylinderOverSphereMeridians) {
  const auto ex = catalog::named("surfacelike_cylindrical_sphere");
  const auto rep = trichotomy_classify(ex.data, ex.dist);
  EXPECT_LT(rep.max_tg_residual, 1e-8);
  for (const auto& fl : detect_surfacelike(ex.data)) EXPECT_TRUE(fl.cylindrical);
}

TEST(Surfacelike, ConicalCliffordHopf) {
  const auto ex = catalog::named("surfacelike_conical_clifford");
  const auto rep = trichotomy_classify(ex.data, ex.dist);
  EXPECT_LT(rep.max_tg_residual, 1e-6);
  for (const auto& fl : detect_surfacelike(ex.data)) {
    EXPECT_TRUE(fl.conical);
    EXPECT_FALSE(fl.cylindrical);
  }
}

TEST(Surfacelike, NonGeodesicD0IsRejected) {
  const VectorField wobble = [](std::span<const double> p, int order) {
    const JetVector x = seed(p, order);
    return JetVector{x[0] * 0.0 + 1.0, 1.0 + 0.5 * sin(x[0])};
  };
  EXPECT_EQ(kind_of([&] { (void)make_surfacelike(charts::clifford_torus(4), SurfacelikeKind::Conical, 3, wobble); }),
            ErrorKind::Input);
  // latitude circles are not geodesics of the sphere
  EXPECT_EQ(kind_of([] {
              (void)make_surfacelike(charts::sphere(), SurfacelikeKind::Cylindrical, 3, constant_field({1.0, 0.0}));
            }),
            ErrorKind::Input);
}

TEST(Surfacelike, GeodesicCurvatureOracle) {
  // latitude circle at latitude phi has geodesic curvature |tan phi|
  const ChartImmersion s = charts::sphere(1.0, false, {-1.0, 1.0}, {0.1, 0.5});
  const std::vector<int> res{3, 5};
  EXPECT_NEAR(geodesic_curvature(s, constant_field({1.0, 0.0}), res), std::tan(0.5), 1e-12);
  EXPECT_LT(geodesic_curvature(s, constant_field({0.0, 1.0}), res), 1e-14);
}

TEST(Surfacelike, WrongModelIsStructural) {
  EXPECT_EQ(kind_of([] {
              (void)make_surfacelike(charts::sphere(), SurfacelikeKind::Conical, 3, constant_field({0.0, 1.0}));
            }),
            ErrorKind::Structural);
}

TEST(Cone, ModelBelowTargetIsRejected) {
  EXPECT_EQ(kind_of([] {
              (void)make_generalized_cone(charts::sphere(), SpaceForm::sphere(4), constant_field({0.0, 1.0}));
            }),
            ErrorKind::UnsupportedModel);
}

TEST(TypeD, FlagshipEuclidean) {
  for (const char* n : {"typed_euclidean_clifford_linear", "typed_euclidean_clifford"}) {
    const auto ex = catalog::named(n);
    const auto rep = trichotomy_classify(ex.data, ex.dist);
    EXPECT_LT(rep.max_tg_residual, 1e-4) << n;
    EXPECT_GE(rep.fraction(TrichotomyClass::Nullity), 0.99) << n;
    for (const auto& s : rep.samples) EXPECT_EQ(s.nullity, ex.data.n() - 2) << n;
  }
}

TEST(TypeD, NonflatFrames) {
  for (const char* n : {"typed_spherical_clifford", "typed_hyperbolic_desitter"}) {
    const auto ex = catalog::named(n);
    const auto rep = trichotomy_classify(ex.data, ex.dist);
    EXPECT_LT(rep.max_tg_residual, 1e-4) << n;
    EXPECT_GE(rep.fraction(TrichotomyClass::Nullity), 0.99) << n;
  }
}

TEST(TypeD, GenericIsNeitherRuledNorInvariantNorSurfacelike) {
  const auto ex = catalog::named("typed_euclidean_clifford", true);
  const auto rep = trichotomy_classify(ex.data, ex.dist);
  for (const auto& s : rep.samples) EXPECT_EQ(s.classes & (kRuled | kInvariant), 0u);
  for (const auto& fl : detect_surfacelike(ex.data)) EXPECT_FALSE(fl.cylindrical || fl.conical);
}

TEST(TypeD, LinearSupportGivesACone) {
  // gamma = <g, c> makes psi a cone with vertex c
  const auto ex = catalog::named("typed_euclidean_clifford_linear", true);
  for (const auto& fl : detect_surfacelike(ex.data)) EXPECT_TRUE(fl.conical);
}

TEST(DegeneratePair, HelicoidSupportPair) {
  const ChartImmersion helicoid("helicoid", {{-1.0, 1.0}, {-0.8, 0.8}}, Target::flat(3),
                                closed_form([](std::span<const Jet> x) {
                                  return JetVector{x[1] * cos(x[0]), x[1] * sin(x[0]), x[0] + 0.0};
                                }));
  const auto tp = support_pair(helicoid);
  const auto chk = check_type_d(tp.frame);
  EXPECT_TRUE(chk.holds(1e-8, 1e-3));
  const auto pc = check_pair(tp);
  EXPECT_LT(pc.max_hessian, 1e-9);
  EXPECT_TRUE(pc.totally_geodesic);
  EXPECT_TRUE(pc.degenerate());
}

TEST(DegeneratePair, GaussParametrizationIsCylindrical) {
  const auto ex = catalog::named("typed_degenerate_helicoid", true);
  const auto rep = trichotomy_classify(ex.data, ex.dist);
  EXPECT_LT(rep.max_tg_residual, 1e-4);
  for (const auto& fl : detect_surfacelike(ex.data)) EXPECT_TRUE(fl.cylindrical);
}

TEST(DegeneratePair, ConstantSupportWithParallelFrameIsNotAPair) {
  // g totally geodesic, gamma constant: the Hessian form fails for a frame
  // not adapted to gamma
  TypeDPair tp{{charts::great_sphere(4), constant_field({1.0, 0.0}), constant_field({0.3, 1.0})},
               closed_form([](std::span<const Jet> x) { return JetVector{x[0] * 0.0 + 2.0}; })};
  const auto pc = check_pair(tp);
  EXPECT_GT(pc.max_hessian, 0.1);
}
