#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "tensortopo/degenerate.hpp"

using namespace tensortopo;

namespace {

TensorMesh field_mesh(const AnalyticField& f, double half, int res) {
  return sample_field_onto_mesh(generate_mesh(BoxDomain{{-half, -half, -half}, {half, half, half}}, res), f);
}

TensorMesh constructed_mesh(const std::vector<Vec3>& pts, const std::vector<Tet>& tets,
                            const std::function<SymTensor3(const Vec3&)>& f) {
  std::vector<SymTensor3> t;
  for (const Vec3& p : pts) t.push_back(f(p));
  return TensorMesh(pts, t, tets);
}

const std::vector<Vec3> kUnitTet{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

int face_with(const TensorMesh& m, std::array<int, 3> v) {
  for (std::size_t f = 0; f < m.faces().size(); ++f)
    if (m.faces()[f].v == v) return int(f);
  return -1;
}

double circle_distance(const Vec3& p) { return std::hypot(std::hypot(p.x, p.y) - 1.0, p.z); }

// Sign of the Jacobian of the transversal (a, b) profile at p, taking the
// tangent as the axis of the repeated eigenplane.
double delta_oracle(const AnalyticField& f, const Vec3& p, const Vec3& tangent) {
  const Vec3 t = normalized(tangent);
  const Vec3 e1 = normalized(cross(t, std::abs(t.x) < 0.6 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}));
  const Vec3 e2 = cross(t, e1);
  auto ab = [&](const Vec3& q) {
    const SymTensor3 s = sample_analytic(f, q);
    const double s11 = dot(e1, s.apply(e1)), s22 = dot(e2, s.apply(e2)), s12 = dot(e1, s.apply(e2));
    return std::array<double, 2>{0.5 * (s11 - s22), s12};
  };
  const double h = 1e-5;
  const auto xp = ab(p + e1 * h), xm = ab(p - e1 * h), yp = ab(p + e2 * h), ym = ab(p - e2 * h);
  const double ax = xp[0] - xm[0], bx = xp[1] - xm[1], ay = yp[0] - ym[0], by = yp[1] - ym[1];
  return ax * by - ay * bx;
}

}  // namespace

TEST(Discriminant, Examples) {
  EXPECT_NEAR(discriminant(SymTensor3::diag(2, -1, -1)), 0.0, 1e-12);
  EXPECT_NEAR(discriminant(SymTensor3::diag(1, 0, -1)), 4.0, 1e-12);
}

TEST(FaceDegeneratePoints, ConstructedPointAtCentroid) {
  // Degenerate exactly where x = y = 1/3; the z = 0 face contains that point
  // at its centroid.
  const TensorMesh m = constructed_mesh(kUnitTet, {Tet{0, 1, 2, 3}}, [](const Vec3& p) {
    return SymTensor3::diag(2, -1, -1) + SymTensor3::diag(0, 1, -1) * (p.x - 1.0 / 3) +
           SymTensor3{0, 0, 0, 0, 1, 0} * (p.y - 1.0 / 3) + SymTensor3{0, 0, 0, 0.2, 0, 0.1} * p.z;
  });
  const int face = face_with(m, {0, 1, 2});
  ASSERT_GE(face, 0);
  const FaceScan scan = face_degenerate_points(m, face, Linearity::Linear, FaceScanOptions{});
  ASSERT_EQ(scan.points.size(), 1u);
  EXPECT_FALSE(scan.budget_exhausted);
  EXPECT_LT(distance(scan.points[0].position, {1.0 / 3, 1.0 / 3, 0}), 1e-6);
  EXPECT_TRUE(face_degenerate_points(m, face, Linearity::Planar, FaceScanOptions{}).points.empty());
}

TEST(FaceDegeneratePoints, PositiveDiscriminantGivesNothing) {
  const TensorMesh m = constructed_mesh(kUnitTet, {Tet{0, 1, 2, 3}}, [](const Vec3& p) {
    return SymTensor3::diag(3, 2, 1) + SymTensor3{0.1, 0, 0, 0.05, 0, 0} * p.x;
  });
  for (std::size_t f = 0; f < m.faces().size(); ++f) {
    const FaceScan s = face_degenerate_points(m, int(f), std::nullopt, FaceScanOptions{});
    EXPECT_TRUE(s.points.empty());
    EXPECT_FALSE(s.budget_exhausted);
  }
}

TEST(FaceDegeneratePoints, DegenerateEverywhereExhaustsBudget) {
  const TensorMesh m = constructed_mesh(kUnitTet, {Tet{0, 1, 2, 3}}, [](const Vec3&) { return SymTensor3::diag(2, -1, -1); });
  const FaceScan s = face_degenerate_points(m, 0, std::nullopt, FaceScanOptions{});
  EXPECT_TRUE(s.budget_exhausted);
  ASSERT_EQ(s.points.size(), 1u);
  EXPECT_TRUE(s.points[0].unresolved);
}

TEST(ScanFaces, ParallelMatchesSerial) {
  const TensorMesh m = field_mesh(AnalyticField::linear_random(4), 1.0, 6);
  const Config cfg;
  const FaceScanOptions opt = face_scan_options(m, cfg);
  const auto a = scan_faces(m, opt), b = scan_faces_serial(m, opt);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t f = 0; f < a.size(); ++f) {
    ASSERT_EQ(a[f].points.size(), b[f].points.size());
    for (std::size_t k = 0; k < a[f].points.size(); ++k) ASSERT_EQ(a[f].points[k].position, b[f].points[k].position);
  }
}

TEST(TraceDegenerateCurves, NoDegeneracyGivesNothing) {
  const MeshGeometry g = generate_mesh(BoxDomain{}, 4);
  std::vector<SymTensor3> t;
  for (const Vec3& p : g.vertices) t.push_back(SymTensor3::diag(3 + p.x, 2, 1 - p.y));
  const TensorMesh m(g.vertices, t, g.tets);
  EXPECT_TRUE(trace_degenerate_curves(m, Config{}).empty());
}

TEST(TraceDegenerateCurves, AxisymLoopIsOneClosedCircle) {
  const TensorMesh m = field_mesh(AnalyticField::axisym_loop(1.0), 2.0, 32);
  ExtractStats stats;
  const auto curves = trace_degenerate_curves(m, Config{}, &stats);
  std::vector<const DegenerateCurve*> loops;
  for (const auto& c : curves)
    if (c.linearity == Linearity::Linear) loops.push_back(&c);
  ASSERT_EQ(loops.size(), 1u);
  const DegenerateCurve& c = *loops[0];
  EXPECT_TRUE(c.closed);
  EXPECT_LT(distance(c.samples.front(), c.samples.back()), 1e-6 * m.bbox_diagonal());
  double hd = 0;
  for (const Vec3& p : c.samples) hd = std::max(hd, circle_distance(p));
  for (int k = 0; k < 360; ++k) {
    const Vec3 q{std::cos(k * M_PI / 180), std::sin(k * M_PI / 180), 0};
    double d = 1e9;
    for (const Vec3& p : c.samples) d = std::min(d, distance(p, q));
    hd = std::max(hd, d);
  }
  EXPECT_LE(hd, 2 * m.cell_size());
  EXPECT_NEAR(c.length(), 2 * M_PI, 0.05 * 2 * M_PI);
}

TEST(TraceDegenerateCurves, SampleInvariants) {
  for (int seed : {1, 2, 3}) {
    const TensorMesh m = field_mesh(AnalyticField::linear_random(seed), 1.0, 10);
    const Config cfg;
    const TensorMesh pm = m.with_tensors(perturb_degenerate_vertices(m, 1e-2));
    const TetLocator loc(pm);
    for (const DegenerateCurve& c : trace_degenerate_curves(m, cfg)) {
      ASSERT_EQ(c.samples.size(), c.tets.size());
      for (std::size_t i = 0; i < c.samples.size(); ++i) {
        const auto b = loc.locate(c.samples[i]);
        ASSERT_TRUE(b.has_value());
        const double mu = *mode(interpolate(pm, {c.tets[i], barycentric(pm, c.tets[i], c.samples[i])}));
        const double want = c.linearity == Linearity::Linear ? 1.0 : -1.0;
        ASSERT_NEAR(mu, want, 2 * cfg.mode_tol) << "seed " << seed << " sample " << i;
        if (i == 0) continue;
        const int a = c.tets[i - 1], t = c.tets[i];
        bool adjacent = a == t;
        for (int k = 0; k < 4 && !adjacent; ++k) adjacent = pm.neighbor(a, k) == t;
        ASSERT_TRUE(adjacent) << "seed " << seed << " sample " << i;
      }
      if (c.closed) EXPECT_LT(distance(c.samples.front(), c.samples.back()), 1e-6 * m.bbox_diagonal());
    }
  }
}

TEST(TraceDegenerateCurves, TetOrderDoesNotMatter) {
  const TensorMesh m = field_mesh(AnalyticField::linear_random(5), 1.0, 8);
  std::vector<Tet> tets = m.tets();
  std::mt19937_64 rng(3);
  std::shuffle(tets.begin(), tets.end(), rng);
  const TensorMesh shuffled(m.vertices(), m.tensors(), tets);
  const auto a = trace_degenerate_curves(m, Config{}), b = trace_degenerate_curves(shuffled, Config{});
  ASSERT_EQ(a.size(), b.size());
  ASSERT_FALSE(a.empty());
  auto lengths = [](const std::vector<DegenerateCurve>& cs) {
    std::vector<double> l;
    for (const auto& c : cs) l.push_back(c.length());
    std::sort(l.begin(), l.end());
    return l;
  };
  const auto la = lengths(a), lb = lengths(b);
  for (std::size_t i = 0; i < la.size(); ++i) EXPECT_NEAR(la[i], lb[i], 1e-9);
}

TEST(ClassifyCurve, AxisymWedgeAndMirroredTrisector) {
  for (bool mirrored : {false, true}) {
    const AnalyticField f = AnalyticField::axisym_loop(1.0, false, mirrored);
    const TensorMesh m = field_mesh(f, 2.0, 24);
    const TetLocator loc(m);
    auto curves = trace_degenerate_curves(m, Config{});
    auto it = std::find_if(curves.begin(), curves.end(), [](const auto& c) { return c.linearity == Linearity::Linear; });
    ASSERT_NE(it, curves.end());
    classify_curve(mesh_sampler(loc), *it, 0.5 * m.cell_size());
    const PointClass want = mirrored ? PointClass::Trisector : PointClass::Wedge;
    for (std::size_t i = 0; i < it->samples.size(); ++i) {
      ASSERT_EQ(it->classes[i], want) << "sample " << i;
      if (i % 10 == 0) {
        const double d = delta_oracle(f, it->samples[i], curve_tangent(*it, i));
        EXPECT_EQ(d > 0, want == PointClass::Wedge);
      }
    }
    EXPECT_TRUE(find_transition_points(mesh_sampler(loc), loc, *it, 0.5 * m.cell_size(), 1e-4).empty());
  }
}

TEST(ClassifyPoint, LargeRadiusRetriesToLocalAnswer) {
  // Two wedge lines: a circle around both sees -1 and is retried smaller.
  const AnalyticField f = AnalyticField::parallel_lines({{0, 0, true}, {0.3, 0.1, true}});
  const FieldSampler s = analytic_sampler(f);
  DegenerateCurve c;
  for (int k = 0; k <= 10; ++k) c.samples.push_back({0, 0, -0.5 + 0.1 * k});
  EXPECT_EQ(classify_point(s, c, 5, 1.0), PointClass::Wedge);
  const AnalyticField g = AnalyticField::parallel_lines({{0, 0, false}, {0.3, 0.1, false}});
  EXPECT_EQ(classify_point(analytic_sampler(g), c, 5, 1.0), PointClass::Trisector);
  EXPECT_LT(delta_oracle(g, {0, 0, 0}, {0, 0, 1}), 0);
}

TEST(FindTransitionPoints, OnePerClassChange) {
  int checked = 0;
  for (int seed = 0; seed < 30 && checked < 3; ++seed) {
    const TensorMesh m = field_mesh(AnalyticField::linear_random(seed), 1.0, 10);
    const TetLocator loc(m);
    const FieldSampler s = mesh_sampler(loc);
    for (DegenerateCurve c : trace_degenerate_curves(m, Config{})) {
      const double r = 0.5 * m.cell_size();
      classify_curve(s, c, r);
      int changes = 0;
      PointClass last = PointClass::Unresolved;
      for (PointClass p : c.classes) {
        if (p == PointClass::Unresolved) continue;
        if (last != PointClass::Unresolved && p != last) ++changes;
        last = p;
      }
      if (changes == 0) continue;
      const std::size_t before = c.samples.size();
      const auto pos = find_transition_points(s, loc, c, r, 1e-4);
      EXPECT_EQ(int(pos.size()), changes);
      EXPECT_EQ(c.samples.size(), before + pos.size());
      EXPECT_TRUE(std::is_sorted(pos.begin(), pos.end()));
      EXPECT_EQ(std::count(c.classes.begin(), c.classes.end(), PointClass::Transition), long(pos.size()));
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}
