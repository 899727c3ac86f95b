#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "tensortopo/locator.hpp"
#include "tensortopo/mesh.hpp"

using namespace tensortopo;

namespace {

TensorMesh single_tet() {
  return TensorMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                    {SymTensor3::diag(1, 2, 3), SymTensor3{0.1, 0.2, 0.3, 0.4, 0.5, 0.6},
                     SymTensor3::identity(), SymTensor3{-1.0 / 3, 1e-300, 2.5e17, 0, 0, 7}},
                    {Tet{0, 1, 2, 3}});
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

int parse_error_line(const std::string& text) {
  try {
    parse_tft(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Tft, SingleTetLineCount) {
  const std::string s = format_tft(single_tet());
  EXPECT_EQ(count_lines(s), 8);
  EXPECT_EQ(s.substr(0, 6), "TFT 1\n");
}

TEST(Tft, RoundTripIsBitExact) {
  const TensorMesh m = sample_field_onto_mesh(generate_mesh(BoxDomain{{-1, -1, -1}, {1, 1, 1}}, 3),
                                              AnalyticField::linear_random(3));
  const TensorMesh r = parse_tft(format_tft(m));
  EXPECT_EQ(r.tets(), m.tets());
  EXPECT_EQ(r.vertices(), m.vertices());
  EXPECT_EQ(r.tensors(), m.tensors());

  const TensorMesh t = single_tet();
  EXPECT_EQ(parse_tft(format_tft(t)).tensors(), t.tensors());
}

TEST(Tft, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "tensortopo_test_mesh.tft";
  const TensorMesh m = single_tet();
  write_tft(m, path);
  const TensorMesh r = read_tft(path);
  std::filesystem::remove(path);
  EXPECT_EQ(r.vertices(), m.vertices());
  EXPECT_THROW(read_tft(path), Error);
}

TEST(Tft, ParseErrorsCarryLineNumbers) {
  const std::string ok = format_tft(single_tet());
  EXPECT_NO_THROW(parse_tft(ok));
  EXPECT_EQ(parse_error_line("TFT 2\n"), 1);
  EXPECT_EQ(parse_error_line(""), 1);
  std::string bad_index = ok;
  bad_index.replace(bad_index.rfind("0 1 2 3"), 7, "0 1 2 4");
  EXPECT_EQ(parse_error_line(bad_index), 8);
  std::string flat = "TFT 1\nvertices 4\n";
  for (int i = 0; i < 4; ++i) flat += std::to_string(i) + " 0 0 1 0 0 0 0 0\n";
  flat += "tets 1\n0 1 2 3\n";
  EXPECT_EQ(parse_error_line(flat), 8);
  std::string short_vertices = ok;
  short_vertices.replace(short_vertices.find("vertices 4"), 10, "vertices 5");
  EXPECT_GT(parse_error_line(short_vertices), 0);
  EXPECT_EQ(parse_error_line(ok + "junk\n"), 9);
  std::string bad_number = ok;
  bad_number.replace(bad_number.find('\n', 14) + 1, 1, "x");
  EXPECT_EQ(parse_error_line(bad_number), 3);
  EXPECT_EQ(parse_error_line("TFT 1\nvertices 1\n1 2 3\n"), 3);
}

TEST(Mesh, RejectsInvalidConstruction) {
  EXPECT_THROW(TensorMesh({{0, 0, 0}}, {}, {}), ParseError);
  EXPECT_THROW(TensorMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, std::vector<SymTensor3>(4), {Tet{0, 1, 2, 9}}),
               ParseError);
}

TEST(Mesh, ReorientsNegativeTets) {
  const TensorMesh m({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, std::vector<SymTensor3>(4), {Tet{1, 0, 2, 3}});
  EXPECT_NEAR(m.tet_volume(0), 1.0 / 6, 1e-15);
}

TEST(GenerateMesh, BoxCounts) {
  const MeshGeometry g1 = generate_mesh(BoxDomain{}, 1);
  EXPECT_EQ(g1.vertices.size(), 8u);
  EXPECT_EQ(g1.tets.size(), 6u);
  const MeshGeometry g2 = generate_mesh(BoxDomain{}, 2);
  EXPECT_EQ(g2.vertices.size(), 27u);
  EXPECT_EQ(g2.tets.size(), 48u);
  const TensorMesh m = sample_field_onto_mesh(g1, AnalyticField::constant_degenerate());
  EXPECT_NEAR(m.total_volume(), 1.0, 1e-12);
  EXPECT_THROW(generate_mesh(BoxDomain{}, 0), ConfigError);
}

TEST(GenerateMesh, BoxIsConforming) {
  const TensorMesh m = sample_field_onto_mesh(generate_mesh(BoxDomain{{-1, -2, 0}, {1, 2, 3}}, 4),
                                              AnalyticField::constant_degenerate());
  EXPECT_NEAR(m.total_volume(), 2 * 4 * 3, 1e-10);
  // Boundary faces exactly cover the box surface.
  double area = 0;
  for (const Face& f : m.faces()) {
    ASSERT_LE(f.tets[1] < 0 ? 1 : 2, 2);
    if (!f.boundary()) continue;
    const auto& v = m.vertices();
    area += 0.5 * norm(cross(v[f.v[1]] - v[f.v[0]], v[f.v[2]] - v[f.v[0]]));
  }
  EXPECT_NEAR(area, 2 * (2 * 4 + 4 * 3 + 2 * 3), 1e-10);
}

TEST(GenerateMesh, TorusVolume) {
  const TorusDomain d{3.0, 1.0};
  const double exact = 2 * M_PI * M_PI * d.major * d.minor * d.minor;
  for (int n : {24, 32}) {
    const TensorMesh m = sample_field_onto_mesh(generate_mesh(d, n), AnalyticField::constant_degenerate());
    EXPECT_NEAR(m.total_volume(), exact, 0.01 * exact) << "n=" << n;
    for (std::size_t t = 0; t < m.num_tets(); ++t) ASSERT_GT(m.tet_volume(int(t)), 0);
    for (const Face& f : m.faces()) {
      if (!f.boundary()) continue;
      // Boundary vertices lie on the torus surface.
      for (int v : f.v) {
        const Vec3 p = m.vertices()[v];
        const double rho = std::hypot(p.x, p.y) - d.major;
        ASSERT_NEAR(std::hypot(rho, p.z), d.minor, 1e-9);
      }
    }
  }
}

TEST(Interpolation, ReproducesLinearFieldsAndIsContinuous) {
  const AnalyticField f = AnalyticField::linear_random(11);
  const TensorMesh m = sample_field_onto_mesh(generate_mesh(BoxDomain{{-1, -1, -1}, {1, 1, 1}}, 5), f);
  const TetLocator loc(m);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 500; ++i) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    const auto b = loc.locate(p);
    ASSERT_TRUE(b.has_value());
    const SymTensor3 d = interpolate(m, *b) - sample_analytic(f, p);
    ASSERT_LT(d.norm(), 1e-12);
    ASSERT_LT(distance(position(m, *b), p), 1e-12);
  }
  // Across every interior face the two tets agree at the face centroid.
  for (const Face& face : m.faces()) {
    if (face.boundary()) continue;
    const Vec3 c = (m.vertices()[face.v[0]] + m.vertices()[face.v[1]] + m.vertices()[face.v[2]]) / 3.0;
    const SymTensor3 a = interpolate(m, {face.tets[0], barycentric(m, face.tets[0], c)});
    const SymTensor3 b = interpolate(m, {face.tets[1], barycentric(m, face.tets[1], c)});
    ASSERT_LT((a - b).norm(), 1e-12);
  }
  EXPECT_FALSE(loc.locate({3, 0, 0}).has_value());
}

TEST(Mesh, TetGradientMatchesLinearField) {
  const auto c = linear_random_coefficients(5);
  const TensorMesh m = sample_field_onto_mesh(generate_mesh(BoxDomain{}, 2), AnalyticField::linear_random(5));
  for (std::size_t t = 0; t < m.num_tets(); ++t) {
    const auto g = m.tet_gradient(int(t));
    for (int k = 0; k < 3; ++k) ASSERT_LT((g[k] - c[k + 1]).norm(), 1e-12);
  }
}
