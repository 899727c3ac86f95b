// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include <cmath>
#include <map>

#include "tensortopo/analytic_field.hpp"
#include "tensortopo/curve_invariants.hpp"
#include "tensortopo/degenerate.hpp"
#include "tensortopo/neutral.hpp"

using namespace tensortopo;

namespace {

const TensorMesh& loop_mesh(int res) {
  static std::map<int, TensorMesh> cache;
  auto it = cache.find(res);
  if (it == cache.end())
    it = cache.emplace(res, sample_field_onto_mesh(generate_mesh(BoxDomain{{-2, -2, -2}, {2, 2, 2}}, res),
                                                   AnalyticField::axisym_loop(1.0, true))).first;
  return it->second;
}

Polyline3 torus_knot(int p, int q, int n) {
  Polyline3 c;
  c.closed = true;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * M_PI * i / n;
    const double r = 2 + std::cos(q * t);
    c.points.push_back({r * std::cos(p * t), r * std::sin(p * t), -std::sin(q * t)});
  }
  return c;
}

void BM_ScanFaces(benchmark::State& st, bool parallel) {
  const TensorMesh& m = loop_mesh(int(st.range(0)));
  const FaceScanOptions opt = face_scan_options(m, Config{});
  for (auto _ : st) benchmark::DoNotOptimize(parallel ? scan_faces(m, opt) : scan_faces_serial(m, opt));
  st.counters["tets"] = double(m.num_tets());
}

void BM_Neutral(benchmark::State& st, bool parallel) {
  const TensorMesh& m = loop_mesh(int(st.range(0)));
  const Config cfg;
  for (auto _ : st)
    benchmark::DoNotOptimize(parallel ? extract_neutral_surface(m, cfg) : extract_neutral_surface_serial(m, cfg));
}

void BM_Linking(benchmark::State& st, bool parallel) {
  const int n = int(st.range(0));
  const Polyline3 a = torus_knot(2, 3, n);
  Polyline3 b = torus_knot(1, 1, n);
  for (Vec3& p : b.points) p = p * 1.5 + Vec3{0, 0, 0.5};
  for (auto _ : st) benchmark::DoNotOptimize(parallel ? linking_integral(a, b) : linking_integral_serial(a, b));
}

void BM_Writhe(benchmark::State& st, bool parallel) {
  const Polyline3 k = torus_knot(2, 3, int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(parallel ? writhe(k) : writhe_serial(k));
}

}  // namespace

BENCHMARK_CAPTURE(BM_ScanFaces, serial, false)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ScanFaces, omp, true)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Neutral, serial, false)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Neutral, omp, true)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Linking, serial, false)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Linking, omp, true)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Writhe, serial, false)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Writhe, omp, true)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
